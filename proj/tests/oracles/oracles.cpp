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

#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <limits>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace donorspin::oracle {

namespace {

using cd = std::complex<double>;

constexpr double kMuB = 9.2740100783e-24;
constexpr double kHbar = 1.054571817e-34;

double omega0(const SpinSystem& sys, double field) { return sys.g_factor * kMuB * field / kHbar; }

}  // namespace

Eigen::MatrixXd hamiltonian(const SpinSystem& sys, double field) {
  const double I = sys.I();
  const int n = static_cast<int>(std::lround(2 * I + 1));
  const int d = 2 * n;
  const double w0 = omega0(sys, field);
  const double A = sys.hyperfine;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(d, d);
  auto idx = [&](double ms, double mi) { return (ms > 0 ? 0 : n) + static_cast<int>(std::lround(I - mi)); };
  for (int s = 0; s < 2; ++s) {
    double ms = s == 0 ? 0.5 : -0.5;
    for (int k = 0; k < n; ++k) {
      double mi = I - k;
      int r = idx(ms, mi);
      h(r, r) = w0 * ms - w0 * sys.zeeman_ratio * mi + A * ms * mi;
    }
  }
  // (A/2)(S+ I- + S- I+): |-1/2, mi+1> <-> |+1/2, mi>.
  for (int k = 1; k < n; ++k) {
    double mi = I - k;
    double el = 0.5 * A * std::sqrt(I * (I + 1) - mi * (mi + 1));
    int up = idx(0.5, mi);
    int dn = idx(-0.5, mi + 1);
    h(up, dn) = h(dn, up) = el;
  }
  return h;
}

DenseSpectrum diagonalize(const SpinSystem& sys, double field) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(sys, field));
  return {es.eigenvalues(), es.eigenvectors()};
}

DenseSpectrum tracked_levels(const SpinSystem& sys, double field, double start_field, int steps) {
  DenseSpectrum cur = diagonalize(sys, start_field);
  for (int s = 1; s <= steps; ++s) {
    double b = start_field + (field - start_field) * s / steps;
    DenseSpectrum next = diagonalize(sys, b);
    DenseSpectrum out = cur;
    const int d = static_cast<int>(cur.energies.size());
    std::vector<bool> used(d, false);
    for (int k = 0; k < d; ++k) {
      int best = -1;
      double best_ov = -1.0;
      for (int j = 0; j < d; ++j) {
        if (used[j]) continue;
        double ov = std::abs(cur.vectors.col(k).dot(next.vectors.col(j)));
        if (ov > best_ov) {
          best_ov = ov;
          best = j;
        }
      }
      used[best] = true;
      out.energies(k) = next.energies(best);
      Eigen::VectorXd v = next.vectors.col(best);
      out.vectors.col(k) = cur.vectors.col(k).dot(v) < 0 ? Eigen::VectorXd(-v) : v;
    }
    cur = out;
  }
  return cur;
}

double dense_frequency(const SpinSystem& sys, double field, int label_a, int label_b, double start_field) {
  DenseSpectrum s = tracked_levels(sys, field, start_field, 400);
  return std::abs(s.energies(label_a - 1) - s.energies(label_b - 1));
}

Eigen::MatrixXd electron_sx(const SpinSystem& sys) {
  const int n = sys.nuclear_spin.twice + 1;
  Eigen::MatrixXd sx = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) sx(k, n + k) = sx(n + k, k) = 0.5;
  return sx;
}

double cos_theta(const SpinSystem& sys, double w, double m) {
  double I = sys.I();
  double delta = m + w * (1.0 + sys.zeeman_ratio);
  double om2 = I * (I + 1) + 0.25 - m * m;
  if (om2 <= 1e-12) return 1.0;
  return delta / std::sqrt(delta * delta + om2);
}

Eigen::MatrixXcd reduced_z_generator(const SpinSystem& sys, double field, double m, double variance,
                                     double adiabaticity) {
  const double w = omega0(sys, field) / sys.hyperfine;
  const double c[2] = {cos_theta(sys, w, m), cos_theta(sys, w, m - 1)};
  const double s[2] = {std::sqrt(1 - c[0] * c[0]), std::sqrt(1 - c[1] * c[1])};
  auto dissipator = [](const Eigen::Matrix4cd& op) {
    // vec(S rho S^dag) - 1/2 vec({S^dag S, rho}), column stacking.
    Eigen::Matrix4cd m = op.adjoint() * op;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(16, 16);
    for (int col = 0; col < 16; ++col) {
      Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
      e(col % 4, col / 4) = 1.0;
      Eigen::Matrix4cd r = op * e * op.adjoint() - 0.5 * (m * e + e * m);
      for (int row = 0; row < 16; ++row) out(row, col) = r(row % 4, row / 4);
    }
    return out;
  };
  Eigen::Matrix4cd z = Eigen::Matrix4cd::Zero();
  z(0, 0) = 0.5 * c[0];
  z(1, 1) = -0.5 * c[0];
  z(2, 2) = 0.5 * c[1];
  z(3, 3) = -0.5 * c[1];
  Eigen::MatrixXcd L = variance * dissipator(z);
  for (int n = 0; n < 2; ++n) {
    double mn = m - n;
    double delta = mn + w * (1.0 + sys.zeeman_ratio);
    double bohr = sys.hyperfine * std::sqrt(delta * delta + sys.I() * (sys.I() + 1) + 0.25 - mn * mn);
    double weight_nonzero = std::exp(-adiabaticity * bohr * bohr);
    Eigen::Matrix4cd x = Eigen::Matrix4cd::Zero();
    x(2 * n, 2 * n + 1) = -0.5 * s[n];
    L += variance * weight_nonzero * dissipator(x);
    L += variance * weight_nonzero * dissipator(Eigen::Matrix4cd(x.adjoint()));
  }
  return L;
}

Eigen::MatrixXcd dense_evolve(const Eigen::MatrixXcd& generator, const Eigen::MatrixXcd& rho0, double t) {
  const Eigen::Index d = rho0.rows();
  Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho0.data(), rho0.size());
  Eigen::MatrixXcd lt = generator * t;
  Eigen::VectorXcd out = lt.exp() * v;
  return Eigen::Map<const Eigen::MatrixXcd>(out.data(), d, d);
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd diff = a - b;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (diff + diff.adjoint()), Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
  double acc = 0.0;
  for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

}  // namespace donorspin::oracle
