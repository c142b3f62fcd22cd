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

#ifndef DONORSPIN_DRIVE_HPP
#define DONORSPIN_DRIVE_HPP

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "donorspin/eigensystem.hpp"

namespace donorspin {

enum class DriveAxis { x, y };
enum class Polarization { linear, rh, lh };

/// Microwave pulse. The drive term is
///
///     V(t) = (w1/2) [Q exp(-i w t) + h.c.],   Q = k+ S+ + k- S-,
///
/// so a linear x pulse is w1 Sx cos(w t + phase). RH and LH are the two
/// circular halves; linear = RH + LH on either axis.
struct PulseSpec {
  double amplitude = 0.0;  // w1, rad/s
  double carrier = 0.0;    // w, rad/s
  DriveAxis axis = DriveAxis::x;
  Polarization polarization = Polarization::linear;
  double duration = 0.0;  // s
  double phase = 0.0;     // rad
};

/// Throws std::invalid_argument for negative amplitude, carrier or duration.
void validate(const PulseSpec& pulse);

struct DriveOperator {
  std::complex<double> k_plus;
  std::complex<double> k_minus;
};

/// Coefficients of S+ and S- in Q. RH keeps only S+ (drives lines whose upper
/// level has the larger m), LH only S-.
DriveOperator polarized_drive(const PulseSpec& pulse);

/// Q in the labelled eigenbasis.
Eigen::MatrixXcd drive_matrix(const Eigensystem& es, const PulseSpec& pulse);

struct PropagateOptions {
  double steps_per_period = 40.0;  // steps per period of the fastest frequency
  double local_tolerance = 1e-8;   // per-step error bound, max column norm
  int error_samples = 32;          // steps checked by step doubling
  int max_refinements = 4;         // step halvings before giving up
};

class StepSizeError : public std::runtime_error {
 public:
  StepSizeError(const std::string& what, double worst) : std::runtime_error(what), worst_(worst) {}
  double worst_local_error() const { return worst_; }

 private:
  double worst_;
};

/// States are Schrodinger-picture amplitudes in the labelled eigenbasis.
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXcd> states;
  Eigen::MatrixXd populations;  // rows: times, columns: labels
  double worst_local_error = 0.0;
  double step = 0.0;
};

/// Time-dependent Schrodinger equation with the full cosine drive (no RWA).
/// The drive is switched on over [0, duration] and off afterwards. The
/// integrator is a fourth-order composition of a symmetric splitting; the
/// static part is applied exactly and the drive part in closed form.
/// Throws std::invalid_argument for an unnormalized state or a decreasing
/// time grid, StepSizeError when the local error bound cannot be met.
Trajectory propagate(const Eigensystem& es, const PulseSpec& pulse,
                     const Eigen::VectorXcd& initial, const std::vector<double>& times,
                     const PropagateOptions& options = {});

/// Full propagator U(t, 0) in the labelled eigenbasis.
Eigen::MatrixXcd propagator(const Eigensystem& es, const PulseSpec& pulse, double t,
                            const PropagateOptions& options = {});

/// exp(i E t) psi: removes the free evolution.
Eigen::VectorXcd to_interaction_frame(const Eigensystem& es, const Eigen::VectorXcd& psi, double t);

/// Basis vector for a label.
Eigen::VectorXcd label_state(const Eigensystem& es, int label);

/// Rotating-wave model of one line in the basis {upper, lower}:
///
///     H = [[detuning/2, g], [conj(g), -detuning/2]],   g = (w1/2) <upper|Q|lower>.
struct TwoLevelModel {
  int upper = 0;
  int lower = 0;
  double transition_frequency = 0.0;  // w0 of the line
  double eta = 0.0;
  std::complex<double> coupling;      // g
  double rabi_rate = 0.0;             // 2|g|
  double detuning = 0.0;              // line frequency minus carrier
  double pi_time = 0.0;               // pi / rabi_rate
  bool rwa_warning = false;           // w1 > w0 / 10
  Eigen::Matrix2cd hamiltonian;

  /// Rotating-frame amplitudes (upper, lower) after time t.
  Eigen::Vector2cd evolve(const Eigen::Vector2cd& psi, double t) const;
};

/// Throws std::invalid_argument when the two levels are degenerate
/// (splitting below 1e-9 A) or not connected by the drive.
TwoLevelModel reduce_two_level(const Eigensystem& es, int label_a, int label_b,
                               const PulseSpec& pulse);

struct EqualizedPulse {
  PulseSpec pulse;
  int wanted_half_turns = 0;    // odd
  int unwanted_half_turns = 0;  // even
  double eta_ratio = 0.0;       // |eta_wanted| / |eta_unwanted|
};

/// Linear x pulse with the carrier midway between two close lines and a
/// duration at which the wanted line completes an odd number of half turns
/// while the unwanted one completes an even number. Searches odd/even pairs up
/// to max_half_turns whose ratio matches the eta ratio within ratio_tolerance
/// (relative). Throws std::domain_error when no pair fits.
EqualizedPulse design_equalized_pulse(const Eigensystem& es, std::pair<int, int> wanted,
                                      std::pair<int, int> unwanted, double amplitude,
                                      double ratio_tolerance = 0.01, int max_half_turns = 21);

}  // namespace donorspin

#endif
