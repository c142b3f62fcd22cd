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

#include "donorspin/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "donorspin/units.hpp"

namespace donorspin {

namespace {

struct Ordered {
  StateKey hi;  // block m
  StateKey lo;  // block m-1
};

std::optional<Ordered> order_pair(StateKey a, StateKey b) {
  if (a.m.twice == b.m.twice + 2) return Ordered{a, b};
  if (b.m.twice == a.m.twice + 2) return Ordered{b, a};
  return std::nullopt;
}

// Energy of a single keyed level at reduced field w.
double level_energy(const SpinSystem& sys, StateKey key, double w) {
  const double A = sys.hyperfine;
  if (std::abs(key.m.twice) == sys.nuclear_spin.twice + 1) {
    double s = key.m.twice > 0 ? 1.0 : -1.0;
    return s * 0.5 * w * A * (1.0 - 2.0 * sys.zeeman_ratio * sys.I()) + 0.5 * A * sys.I();
  }
  SubspaceBlock b = block_params_reduced(sys, key.m, w);
  double s = key.branch == Branch::plus ? 1.0 : -1.0;
  return 0.5 * A * (-b.epsilon_m + s * b.r_m);
}

// Every (m, m-1) key pair accepted by the filter.
std::vector<Ordered> key_pairs(const SpinSystem& sys, KindFilter kinds) {
  LabelMap map = label_states(sys);
  std::vector<Ordered> out;
  for (int i = 1; i <= map.size(); ++i) {
    for (int j = 1; j <= map.size(); ++j) {
      StateKey a = map.key(i);
      StateKey b = map.key(j);
      if (a.m.twice != b.m.twice + 2) continue;
      auto kind = classify(a, b);
      if (kind && kinds.accepts(*kind)) out.push_back(Ordered{a, b});
    }
  }
  std::sort(out.begin(), out.end(), [](const Ordered& x, const Ordered& y) {
    if (x.hi.m != y.hi.m) return x.hi.m > y.hi.m;
    if (x.hi.branch != y.hi.branch) return x.hi.branch == Branch::plus;
    return x.lo.branch == Branch::minus && y.lo.branch == Branch::plus;
  });
  return out;
}

double cos_theta(const SpinSystem& sys, HalfInt m, double w) {
  SubspaceBlock b = block_params_reduced(sys, m, w);
  return std::cos(b.theta_m);
}

}  // namespace

bool KindFilter::accepts(TransitionKind k) const {
  switch (k) {
    case TransitionKind::allowed: return allowed;
    case TransitionKind::plus_forbidden: return plus_forbidden;
    case TransitionKind::minus_forbidden: return minus_forbidden;
    case TransitionKind::cross_forbidden: return cross_forbidden;
  }
  return false;
}

const char* to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::allowed: return "allowed";
    case TransitionKind::plus_forbidden: return "plus_forbidden";
    case TransitionKind::minus_forbidden: return "minus_forbidden";
    case TransitionKind::cross_forbidden: return "cross_forbidden";
  }
  return "unknown";
}

const char* to_string(ResonanceKind kind) {
  switch (kind) {
    case ResonanceKind::avoided_crossing: return "avoided_crossing";
    case ResonanceKind::one_dimensional_cancellation: return "one_dimensional_cancellation";
    case ResonanceKind::equal_theta: return "equal_theta";
    case ResonanceKind::two_photon: return "two_photon";
    case ResonanceKind::frequency_minimum: return "frequency_minimum";
    case ResonanceKind::frequency_maximum: return "frequency_maximum";
  }
  return "unknown";
}

std::optional<TransitionKind> classify(StateKey a, StateKey b) {
  auto p = order_pair(a, b);
  if (!p) return std::nullopt;
  bool hi_plus = p->hi.branch == Branch::plus;
  bool lo_plus = p->lo.branch == Branch::plus;
  if (hi_plus && !lo_plus) return TransitionKind::allowed;
  if (hi_plus && lo_plus) return TransitionKind::plus_forbidden;
  if (!hi_plus && !lo_plus) return TransitionKind::minus_forbidden;
  return TransitionKind::cross_forbidden;
}

double mixing_factor(const Eigensystem& es, int label_a, int label_b) {
  const EigenLevel& a = es.level(label_a);
  const EigenLevel& b = es.level(label_b);
  auto p = order_pair(a.key(), b.key());
  if (!p) {
    throw std::invalid_argument(
        fmt::format("levels {} and {} are not connected by S_x", label_a, label_b));
  }
  const EigenLevel& hi = es.level(p->hi);
  const EigenLevel& lo = es.level(p->lo);
  return hi.up_amplitude() * lo.down_amplitude();
}

Transition make_transition(const Eigensystem& es, int label_a, int label_b) {
  const EigenLevel& a = es.level(label_a);
  const EigenLevel& b = es.level(label_b);
  auto p = order_pair(a.key(), b.key());
  if (!p) {
    throw std::invalid_argument(
        fmt::format("levels {} and {} are not connected by S_x", label_a, label_b));
  }
  Transition t;
  const EigenLevel& hi = es.level(p->hi);
  const EigenLevel& lo = es.level(p->lo);
  bool hi_is_upper = hi.energy >= lo.energy;
  t.upper = hi_is_upper ? hi.label : lo.label;
  t.lower = hi_is_upper ? lo.label : hi.label;
  t.from_m = p->hi;
  t.from_m1 = p->lo;
  t.frequency = std::abs(hi.energy - lo.energy);
  t.eta = hi.up_amplitude() * lo.down_amplitude();
  t.intensity = t.eta * t.eta;
  t.kind = *classify(p->hi, p->lo);
  t.handedness = hi_is_upper ? Handedness::rh : Handedness::lh;
  return t;
}

std::vector<Transition> transition_table(const Eigensystem& es, KindFilter kinds) {
  std::vector<Transition> out;
  for (const Ordered& p : key_pairs(es.system(), kinds)) {
    out.push_back(make_transition(es, es.label(p.hi), es.label(p.lo)));
  }
  return out;
}

std::vector<Transition> transition_table(const SpinSystem& sys, double field, KindFilter kinds) {
  return transition_table(Eigensystem(sys, field), kinds);
}

ResonanceSearch resonance_fields(const SpinSystem& sys, double mw_frequency_ghz, double field_min,
                                 double field_max, KindFilter kinds) {
  if (!(mw_frequency_ghz > 0.0) || !std::isfinite(mw_frequency_ghz)) {
    throw std::invalid_argument("microwave frequency must be positive");
  }
  if (!(field_min >= 0.0) || !(field_max > field_min) || !std::isfinite(field_max)) {
    throw std::invalid_argument(
        fmt::format("invalid field range [{}, {}] T", field_min, field_max));
  }
  const double target = ghz_to_angular(mw_frequency_ghz);
  const double w_per_tesla = sys.omega0_tilde(1.0);
  constexpr int kSamples = 2001;

  ResonanceSearch result;
  std::vector<double> grid(kSamples);
  for (int i = 0; i < kSamples; ++i) {
    grid[i] = field_min + (field_max - field_min) * i / (kSamples - 1);
  }
  grid.back() = field_max;

  for (const Ordered& p : key_pairs(sys, kinds)) {
    auto freq = [&](double field) {
      double w = field * w_per_tesla;
      return std::abs(level_energy(sys, p.hi, w) - level_energy(sys, p.lo, w));
    };
    std::vector<double> f(kSamples);
    for (int i = 0; i < kSamples; ++i) f[i] = freq(grid[i]);

    std::vector<double> edges{field_min};
    for (int i = 1; i + 1 < kSamples; ++i) {
      double d0 = f[i] - f[i - 1];
      double d1 = f[i + 1] - f[i];
      if (d0 * d1 >= 0.0 && !(d0 == 0.0 && d1 != 0.0)) continue;
      bool is_min = d0 < 0.0 || d1 > 0.0;
      std::uintmax_t iters = 200;
      auto obj = [&](double b) { return is_min ? freq(b) : -freq(b); };
      auto r = boost::math::tools::brent_find_minima(obj, grid[i - 1], grid[i + 1],
                                                     std::numeric_limits<double>::digits / 2, iters);
      edges.push_back(r.first);
    }
    edges.push_back(field_max);
    std::sort(edges.begin(), edges.end());

    std::vector<double> roots;
    const double zero_tol = 1e-12 * target;
    for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
      double l = edges[s];
      double r = edges[s + 1];
      if (r <= l) continue;
      double gl = freq(l) - target;
      double gr = freq(r) - target;
      if (std::abs(gl) <= zero_tol) {
        roots.push_back(l);
        continue;
      }
      if (std::abs(gr) <= zero_tol) {
        roots.push_back(r);
        continue;
      }
      if ((gl < 0.0) == (gr < 0.0)) continue;
      std::uintmax_t iters = 200;
      auto g = [&](double b) { return freq(b) - target; };
      auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); };
      auto br = boost::math::tools::toms748_solve(g, l, r, gl, gr, tol, iters);
      double root = std::abs(g(br.first)) <= std::abs(g(br.second)) ? br.first : br.second;
      roots.push_back(root);
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
                roots.end());
    if (roots.empty()) {
      result.no_crossing.emplace_back(p.hi, p.lo);
      continue;
    }
    for (double root : roots) {
      Eigensystem es(sys, root);
      result.roots.push_back(ResonanceRoot{make_transition(es, es.label(p.hi), es.label(p.lo)), root});
    }
  }
  std::stable_sort(result.roots.begin(), result.roots.end(),
                   [](const ResonanceRoot& a, const ResonanceRoot& b) { return a.field < b.field; });
  return result;
}

SpectrumTrace cw_spectrum(const SpinSystem& sys, double mw_frequency_ghz,
                          const std::vector<double>& field_grid, double linewidth_mt,
                          SpectrumShape shape, KindFilter kinds) {
  if (field_grid.empty()) throw std::invalid_argument("empty field grid");
  for (std::size_t i = 1; i < field_grid.size(); ++i) {
    if (!(field_grid[i] > field_grid[i - 1])) {
      throw std::invalid_argument("field grid must be strictly increasing");
    }
  }
  if (field_grid.front() < 0.0) throw std::invalid_argument("field grid must be >= 0");
  if (!(linewidth_mt > 0.0)) throw std::invalid_argument("linewidth must be positive");

  const double fwhm = millitesla(linewidth_mt);
  const double sigma = fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
  const double lo = std::max(0.0, field_grid.front() - 8.0 * fwhm);
  const double hi = field_grid.back() + 8.0 * fwhm;

  SpectrumTrace trace;
  trace.field_grid = field_grid;
  trace.mw_frequency_ghz = mw_frequency_ghz;
  trace.linewidth = fwhm;
  trace.shape = shape;
  trace.lines = resonance_fields(sys, mw_frequency_ghz, lo, hi, kinds).roots;
  trace.amplitude.assign(field_grid.size(), 0.0);
  const double norm = 1.0 / (sigma * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t i = 0; i < field_grid.size(); ++i) {
    double acc = 0.0;
    for (const ResonanceRoot& line : trace.lines) {
      double x = (field_grid[i] - line.field) / sigma;
      double g = line.transition.intensity * norm * std::exp(-0.5 * x * x);
      acc += shape == SpectrumShape::absorption ? g : -x / sigma * g;
    }
    trace.amplitude[i] = acc;
  }
  return trace;
}

std::vector<ResonancePoint> df_dB_extrema(const SpinSystem& sys, TransitionClass cls) {
  const int top = sys.nuclear_spin.twice + 1;
  if (cls.m.twice > 0 || std::abs(cls.m.twice) > top || (cls.m.twice + top) % 2 != 0) {
    throw std::invalid_argument(fmt::format("block m = {} is not a valid m <= 0", cls.m.str()));
  }
  HalfInt m1 = cls.m - HalfInt{2};
  if (std::abs(m1.twice) > top) {
    throw std::invalid_argument(fmt::format("block m-1 = {} does not exist", m1.str()));
  }
  if (cls.kind == TransitionKind::cross_forbidden) {
    throw std::invalid_argument("extrema are defined for allowed and same-branch lines only");
  }
  const bool minimum = cls.kind == TransitionKind::allowed;
  auto h = [&](double w) {
    double a = cos_theta(sys, cls.m, w);
    double b = cos_theta(sys, m1, w);
    return minimum ? a + b : a - b;
  };

  constexpr int kScan = 20000;
  constexpr double kWMax = 20.0;
  std::vector<double> roots;
  double w_prev = kWMax / kScan;
  double h_prev = h(w_prev);
  for (int i = 2; i <= kScan; ++i) {
    double w = kWMax * i / kScan;
    double hw = h(w);
    if (h_prev == 0.0) {
      roots.push_back(w_prev);
    } else if ((h_prev < 0.0) != (hw < 0.0) && hw != 0.0) {
      double l = w_prev;
      double r = w;
      double hl = h_prev;
      while (r - l > 1e-12) {
        double mid = 0.5 * (l + r);
        double hm = h(mid);
        if ((hm < 0.0) == (hl < 0.0)) {
          l = mid;
          hl = hm;
        } else {
          r = mid;
        }
      }
      roots.push_back(0.5 * (l + r));
    }
    w_prev = w;
    h_prev = hw;
  }

  std::vector<ResonancePoint> out;
  Branch hi_branch = cls.kind == TransitionKind::minus_forbidden ? Branch::minus : Branch::plus;
  Branch lo_branch = cls.kind == TransitionKind::plus_forbidden ? Branch::plus : Branch::minus;
  for (double w : roots) {
    ResonancePoint p;
    p.kind = minimum ? ResonanceKind::frequency_minimum : ResonanceKind::frequency_maximum;
    p.m = cls.m;
    p.m_lower = m1;
    p.omega0_tilde = w;
    p.field = omega0_tilde_to_field(sys, w);
    Eigensystem es(sys, p.field);
    p.transition = make_transition(es, es.label(hi_branch, cls.m), es.label(lo_branch, m1));
    out.push_back(p);
  }
  return out;
}

std::vector<ResonancePoint> cancellation_points(const SpinSystem& sys) {
  const int top = sys.nuclear_spin.twice + 1;
  const double I = sys.I();
  const double scale = 1.0 + sys.zeeman_ratio;
  std::vector<ResonancePoint> out;
  auto add = [&](ResonanceKind kind, HalfInt m, std::optional<HalfInt> m1, double w) {
    ResonancePoint p;
    p.kind = kind;
    p.m = m;
    p.m_lower = m1;
    p.omega0_tilde = w;
    p.field = omega0_tilde_to_field(sys, w);
    out.push_back(p);
  };

  // Highest block with m <= 0.
  const int start = top % 2 == 0 ? 0 : -1;
  for (int mt = start; mt >= -(top - 2); mt -= 2) {
    HalfInt m{mt};
    add(ResonanceKind::avoided_crossing, m, std::nullopt, -m.value() / scale + 0.0);
  }
  add(ResonanceKind::one_dimensional_cancellation, HalfInt{-top}, std::nullopt, (I + 0.5) / scale);

  for (int mt = start; mt - 2 >= -(top - 2); mt -= 2) {
    HalfInt m{mt};
    HalfInt m1{mt - 2};
    double om = block_params_reduced(sys, m, 0.0).omega_m;
    double om1 = block_params_reduced(sys, m1, 0.0).omega_m;
    if (std::abs(om - om1 - 1.0) < 1e-12) {
      add(ResonanceKind::equal_theta, m, m1, (om - m.value()) / scale);
    }
  }
  if (sys.zeeman_ratio < 1.0) {
    add(ResonanceKind::two_photon, HalfInt{-(top - 2)}, HalfInt{-top},
        (I + 0.5) / (1.0 - sys.zeeman_ratio));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ResonancePoint& a, const ResonancePoint& b) { return a.field < b.field; });
  return out;
}

}  // namespace donorspin
