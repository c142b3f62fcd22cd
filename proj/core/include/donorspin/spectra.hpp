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

#ifndef DONORSPIN_SPECTRA_HPP
#define DONORSPIN_SPECTRA_HPP

#include <optional>
#include <utility>
#include <vector>

#include "donorspin/eigensystem.hpp"

namespace donorspin {

/// Transitions connect a level in block m with a level in block m-1.
///   allowed:         (+,m) <-> (-,m-1)
///   plus_forbidden:  (+,m) <-> (+,m-1)
///   minus_forbidden: (-,m) <-> (-,m-1)
///   cross_forbidden: (-,m) <-> (+,m-1)
enum class TransitionKind { allowed, plus_forbidden, minus_forbidden, cross_forbidden };

enum class Handedness { rh, lh };

struct KindFilter {
  bool allowed = true;
  bool plus_forbidden = false;
  bool minus_forbidden = false;
  bool cross_forbidden = false;

  static KindFilter all() { return {true, true, true, true}; }
  static KindFilter allowed_only() { return {}; }
  static KindFilter forbidden_only() { return {false, true, true, true}; }
  bool accepts(TransitionKind k) const;
};

struct Transition {
  int upper = 0;  // label of the higher-energy level
  int lower = 0;
  StateKey from_m;   // level in block m
  StateKey from_m1;  // level in block m-1
  double frequency = 0.0;  // E_upper - E_lower, rad/s
  double eta = 0.0;        // 2 <m-level| Sx |(m-1)-level>, real eigenvectors with a > 0
  double intensity = 0.0;  // eta^2
  TransitionKind kind = TransitionKind::allowed;
  // RH when the upper level carries the larger m.
  Handedness handedness = Handedness::rh;
};

/// Mixing factor of the transition between the two levels (given by label).
/// Throws std::invalid_argument unless their m differ by one.
double mixing_factor(const Eigensystem& es, int label_a, int label_b);

std::vector<Transition> transition_table(const Eigensystem& es,
                                         KindFilter kinds = KindFilter::allowed_only());
std::vector<Transition> transition_table(const SpinSystem& sys, double field,
                                         KindFilter kinds = KindFilter::allowed_only());

/// Transition between two labelled levels at the given field.
Transition make_transition(const Eigensystem& es, int label_a, int label_b);

std::optional<TransitionKind> classify(StateKey a, StateKey b);

struct ResonanceRoot {
  Transition transition;  // evaluated at the root field
  double field = 0.0;     // tesla
};

struct ResonanceSearch {
  std::vector<ResonanceRoot> roots;  // sorted by field
  // Transitions (as label pairs upper/lower at the range start) that never
  // reach the target frequency in range.
  std::vector<std::pair<StateKey, StateKey>> no_crossing;
};

/// All fields in [field_min, field_max] where a transition frequency equals the
/// microwave frequency. Each frequency curve is split at its extrema before
/// bracketing, so both roots of a curve with a minimum are found.
ResonanceSearch resonance_fields(const SpinSystem& sys, double mw_frequency_ghz, double field_min,
                                 double field_max, KindFilter kinds = KindFilter::allowed_only());

enum class SpectrumShape { absorption, derivative };

struct SpectrumTrace {
  std::vector<double> field_grid;  // tesla
  std::vector<double> amplitude;
  double mw_frequency_ghz = 0.0;
  double linewidth = 0.0;  // tesla, full width at half maximum
  SpectrumShape shape = SpectrumShape::absorption;
  std::vector<ResonanceRoot> lines;
};

/// Sum of unit-area Gaussians of the given FWHM, one per resonance, weighted by
/// the line intensity. Throws std::invalid_argument for an empty or
/// non-increasing grid, or a non-positive linewidth.
SpectrumTrace cw_spectrum(const SpinSystem& sys, double mw_frequency_ghz,
                          const std::vector<double>& field_grid, double linewidth_mt,
                          SpectrumShape shape = SpectrumShape::absorption,
                          KindFilter kinds = KindFilter::allowed_only());

enum class ResonanceKind {
  avoided_crossing,
  one_dimensional_cancellation,
  equal_theta,
  two_photon,
  frequency_minimum,
  frequency_maximum,
};

const char* to_string(ResonanceKind kind);
const char* to_string(TransitionKind kind);

struct ResonancePoint {
  ResonanceKind kind = ResonanceKind::avoided_crossing;
  HalfInt m;
  std::optional<HalfInt> m_lower;
  double field = 0.0;  // tesla
  double omega0_tilde = 0.0;
  std::optional<Transition> transition;
};

/// A family of lines between blocks m and m-1.
struct TransitionClass {
  TransitionKind kind = TransitionKind::allowed;
  HalfInt m;
};

/// Minima (cos theta_m = -cos theta_{m-1}, allowed lines) or maxima
/// (cos theta_m = cos theta_{m-1}, same-branch lines), found by bisection over
/// w0~ in (0, 20] to 1e-12. Throws std::invalid_argument for m > 0, for
/// m - 1 outside the ladder or for the cross_forbidden kind.
std::vector<ResonancePoint> df_dB_extrema(const SpinSystem& sys, TransitionClass cls);

/// Avoided crossings, the one-dimensional cancellation, equal-theta points and
/// two-photon points, sorted by field.
std::vector<ResonancePoint> cancellation_points(const SpinSystem& sys);

}  // namespace donorspin

#endif
