// Copyright 2026 The donorspin Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "donorspin/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <Eigen/Dense>
#include <fmt/format.h>
#include <unsupported/Eigen/NonLinearOptimization>

namespace donorspin {

namespace {

// Parameters: [log r_1, c_1, ..., log r_k, c_k, (offset)], time scaled to [0, 1].
struct ExpSum {
  using Scalar = double;
  enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
  using InputType = Eigen::VectorXd;
  using ValueType = Eigen::VectorXd;
  using JacobianType = Eigen::MatrixXd;

  const Eigen::VectorXd& t;
  const Eigen::VectorXd& y;
  int terms;
  bool offset;

  int inputs() const { return 2 * terms + (offset ? 1 : 0); }
  int values() const { return static_cast<int>(t.size()); }

  int operator()(const Eigen::VectorXd& x, Eigen::VectorXd& f) const {
    f = -y;
    for (int k = 0; k < terms; ++k) {
      double r = std::exp(x(2 * k));
      f.array() += x(2 * k + 1) * (-r * t.array()).exp();
    }
    if (offset) f.array() += x(2 * terms);
    return 0;
  }

  int df(const Eigen::VectorXd& x, Eigen::MatrixXd& j) const {
    j.resize(values(), inputs());
    for (int k = 0; k < terms; ++k) {
      double r = std::exp(x(2 * k));
      Eigen::ArrayXd e = (-r * t.array()).exp();
      j.col(2 * k) = -x(2 * k + 1) * r * t.array() * e;
      j.col(2 * k + 1) = e;
    }
    if (offset) j.col(2 * terms).setOnes();
    return 0;
  }
};

// Amplitudes (and offset) for fixed rates by linear least squares.
Eigen::VectorXd linear_amplitudes(const Eigen::VectorXd& t, const Eigen::VectorXd& y,
                                  const std::vector<double>& rates, bool offset) {
  const int k = static_cast<int>(rates.size());
  Eigen::MatrixXd a(t.size(), k + (offset ? 1 : 0));
  for (int i = 0; i < k; ++i) a.col(i) = (-rates[i] * t.array()).exp();
  if (offset) a.col(k).setOnes();
  return a.colPivHouseholderQr().solve(y);
}

DecayFit solve_from(const Eigen::VectorXd& t, const Eigen::VectorXd& y, const std::vector<double>& rates,
                    bool offset, double t_scale) {
  const int k = static_cast<int>(rates.size());
  Eigen::VectorXd lin = linear_amplitudes(t, y, rates, offset);
  Eigen::VectorXd x(2 * k + (offset ? 1 : 0));
  for (int i = 0; i < k; ++i) {
    x(2 * i) = std::log(rates[i]);
    x(2 * i + 1) = lin(i);
  }
  if (offset) x(2 * k) = lin(k);

  ExpSum f{t, y, k, offset};
  Eigen::LevenbergMarquardt<ExpSum> lm(f);
  lm.parameters.maxfev = 4000;
  lm.parameters.ftol = 1e-15;
  lm.parameters.xtol = 1e-15;
  auto status = lm.minimize(x);

  DecayFit fit;
  fit.model = k == 1 ? DecayModel::single_exponential : DecayModel::double_exponential;
  fit.converged = status != Eigen::LevenbergMarquardtSpace::ImproperInputParameters &&
                  status != Eigen::LevenbergMarquardtSpace::TooManyFunctionEvaluation &&
                  std::isfinite(x.norm());
  std::vector<std::pair<double, double>> comps;
  for (int i = 0; i < k; ++i) comps.emplace_back(std::exp(x(2 * i)) / t_scale, x(2 * i + 1));
  std::sort(comps.begin(), comps.end());
  for (auto [r, c] : comps) {
    fit.rates.push_back(r);
    fit.amplitudes.push_back(c);
  }
  fit.offset = offset ? x(2 * k) : 0.0;
  Eigen::VectorXd res;
  f(x, res);
  fit.residual_rms = std::sqrt(res.squaredNorm() / static_cast<double>(res.size()));
  if (!std::isfinite(fit.residual_rms)) {
    fit.residual_rms = std::numeric_limits<double>::infinity();
    fit.converged = false;
  }
  return fit;
}

}  // namespace

double DecayFit::evaluate(double t) const {
  double v = offset;
  for (std::size_t k = 0; k < rates.size(); ++k) v += amplitudes[k] * std::exp(-rates[k] * t);
  return v;
}

double DecayFit::lifetime() const {
  if (rates.empty() || rates.front() <= 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 / rates.front();
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& y, DecayModel model,
                   const FitOptions& options) {
  if (t.size() != y.size()) throw std::invalid_argument("time and value arrays differ in length");
  if (t.size() < 10) throw std::invalid_argument("a decay fit needs at least 10 points");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
  }
  const double t_scale = t.back() - t.front();
  if (!(t_scale > 0.0)) throw std::invalid_argument("time grid has zero span");
  Eigen::VectorXd ts(static_cast<Eigen::Index>(t.size()));
  Eigen::VectorXd ys = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < t.size(); ++i) ts(static_cast<Eigen::Index>(i)) = (t[i] - t.front()) / t_scale;

  const int n = std::max(2, options.restarts);
  std::vector<double> grid(n);
  for (int i = 0; i < n; ++i) grid[i] = 0.05 * std::pow(2000.0, static_cast<double>(i) / (n - 1));

  DecayFit best;
  best.residual_rms = std::numeric_limits<double>::infinity();
  auto consider = [&](const std::vector<double>& rates) {
    DecayFit f = solve_from(ts, ys, rates, options.with_offset, t_scale);
    if (f.residual_rms < best.residual_rms || (!best.converged && f.converged &&
                                               f.residual_rms <= best.residual_rms)) {
      best = f;
    }
  };
  if (model == DecayModel::single_exponential) {
    for (double r : grid) consider({r});
  } else {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 2; j < n; j += 2) consider({grid[i], grid[j]});
    }
  }
  // Report rates relative to the original time origin.
  if (t.front() != 0.0) {
    for (std::size_t k = 0; k < best.rates.size(); ++k) {
      best.amplitudes[k] *= std::exp(best.rates[k] * t.front());
    }
  }
  return best;
}

DecayFit fit_decay_auto(const std::vector<double>& t, const std::vector<double>& y, double improvement,
                        const FitOptions& options) {
  DecayFit single = fit_decay(t, y, DecayModel::single_exponential, options);
  DecayFit dbl = fit_decay(t, y, DecayModel::double_exponential, options);
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  bool resolvable = single.residual_rms > 1e-10 * scale;
  if (resolvable && dbl.converged && single.residual_rms >= improvement * dbl.residual_rms) return dbl;
  return single;
}

std::vector<double> fit_window(double expected_lifetime, int samples, double lifetimes) {
  if (!(expected_lifetime > 0.0) || !std::isfinite(expected_lifetime)) {
    throw std::invalid_argument("expected lifetime must be positive and finite");
  }
  if (samples < 2) throw std::invalid_argument("a fit window needs at least 2 samples");
  std::vector<double> t(samples);
  const double span = lifetimes * expected_lifetime;
  for (int i = 0; i < samples; ++i) t[i] = span * i / (samples - 1);
  return t;
}

}  // namespace donorspin
