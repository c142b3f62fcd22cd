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

#include "donorspin/drive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "donorspin/spectra.hpp"

namespace donorspin {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

// Fourth-order Yoshida composition of the symmetric split
//   exp(-i H0 h/2) exp(-i V(t + h/2) h) exp(-i H0 h/2).
// The drive V(t) = z S+ + conj(z) S- satisfies V^2 = |z|^2 on every
// two-dimensional electron subspace, so its exponential is closed form.
class SplitStepper {
 public:
  SplitStepper(const Eigensystem& es, const PulseSpec& pulse)
      : energies_(es.energies()), pulse_(pulse), drive_(polarized_drive(pulse)) {
    Eigen::MatrixXd v = es.vectors();
    SpinOperators ops = spin_operators(es.system());
    s_plus_ = (v.transpose() * ops.s_plus * v).cast<cd>();
    s_minus_ = s_plus_.adjoint();
  }

  double fastest_frequency() const {
    double spread = energies_.maxCoeff() - energies_.minCoeff();
    return std::max({spread, pulse_.carrier, pulse_.amplitude, 1.0});
  }

  void step(Eigen::MatrixXcd& x, double t, double h, bool on) {
    constexpr double kCbrt2 = 1.2599210498948731648;
    constexpr double w1 = 1.0 / (2.0 - kCbrt2);
    constexpr double w0 = -kCbrt2 * w1;
    strang(x, t, w1 * h, on);
    strang(x, t + w1 * h, w0 * h, on);
    strang(x, t + (w1 + w0) * h, w1 * h, on);
  }

 private:
  void free(Eigen::MatrixXcd& x, double tau) {
    for (Eigen::Index k = 0; k < energies_.size(); ++k) {
      double ph = -energies_(k) * tau;
      x.row(k) *= cd(std::cos(ph), std::sin(ph));
    }
  }

  void kick(Eigen::MatrixXcd& x, double t, double h) {
    const double wt = pulse_.carrier * t;
    cd rot(std::cos(wt), -std::sin(wt));
    cd z = 0.5 * pulse_.amplitude * (drive_.k_plus * rot + std::conj(drive_.k_minus) * std::conj(rot));
    double a = std::abs(z);
    if (a == 0.0) return;
    double c = std::cos(h * a);
    double s = std::sin(h * a) / a;
    Eigen::MatrixXcd y = z * (s_plus_ * x) + std::conj(z) * (s_minus_ * x);
    x = c * x - (kI * s) * y;
  }

  void strang(Eigen::MatrixXcd& x, double t, double h, bool on) {
    free(x, 0.5 * h);
    if (on) kick(x, t + 0.5 * h, h);
    free(x, 0.5 * h);
  }

  Eigen::VectorXd energies_;
  PulseSpec pulse_;
  DriveOperator drive_;
  Eigen::MatrixXcd s_plus_;
  Eigen::MatrixXcd s_minus_;
};

double max_column_norm(const Eigen::MatrixXcd& m) {
  double out = 0.0;
  for (Eigen::Index j = 0; j < m.cols(); ++j) out = std::max(out, m.col(j).norm());
  return out;
}

struct RunResult {
  std::vector<Eigen::MatrixXcd> snapshots;
  double worst = 0.0;
  double step = 0.0;
};

RunResult run(const Eigensystem& es, const PulseSpec& pulse, const Eigen::MatrixXcd& x0,
              const std::vector<double>& times, const PropagateOptions& opt) {
  validate(pulse);
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0) || (i > 0 && times[i] < times[i - 1])) {
      throw std::invalid_argument("time grid must be non-negative and non-decreasing");
    }
  }
  SplitStepper stepper(es, pulse);
  double h_max = 2.0 * std::numbers::pi / stepper.fastest_frequency() / opt.steps_per_period;
  const double t_end = times.empty() ? 0.0 : times.back();

  for (int attempt = 0;; ++attempt) {
    RunResult out;
    std::vector<double> stops = times;
    if (pulse.duration > 0.0 && pulse.duration < t_end) stops.push_back(pulse.duration);
    std::sort(stops.begin(), stops.end());

    long total = std::max(1L, static_cast<long>(std::ceil(t_end / h_max)));
    long stride = std::max(1L, total / std::max(1, opt.error_samples));
    long count = 0;
    double t = 0.0;
    Eigen::MatrixXcd x = x0;
    std::size_t next_time = 0;
    for (double stop : stops) {
      double span = stop - t;
      if (span > 0.0) {
        long n = std::max(1L, static_cast<long>(std::ceil(span / h_max * (1.0 - 1e-12))));
        double h = span / n;
        out.step = std::max(out.step, h);
        for (long k = 0; k < n; ++k) {
          double tk = t + k * h;
          bool on = pulse.amplitude > 0.0 && tk + 0.5 * h < pulse.duration;
          if (on && count % stride == 0) {
            Eigen::MatrixXcd full = x;
            stepper.step(full, tk, h, on);
            Eigen::MatrixXcd half = x;
            stepper.step(half, tk, 0.5 * h, on);
            stepper.step(half, tk + 0.5 * h, 0.5 * h, on);
            out.worst = std::max(out.worst, 16.0 / 15.0 * max_column_norm(full - half));
          }
          stepper.step(x, tk, h, on);
          ++count;
        }
        t = stop;
      }
      while (next_time < times.size() && times[next_time] <= stop) {
        out.snapshots.push_back(x);
        ++next_time;
      }
    }
    if (out.worst <= opt.local_tolerance) return out;
    if (attempt >= opt.max_refinements) {
      throw StepSizeError(fmt::format("local error {:.3e} exceeds tolerance {:.3e} at step {:.3e} s",
                                      out.worst, opt.local_tolerance, out.step),
                          out.worst);
    }
    h_max *= 0.5;
  }
}

}  // namespace

void validate(const PulseSpec& pulse) {
  if (!(pulse.amplitude >= 0.0) || !std::isfinite(pulse.amplitude)) {
    throw std::invalid_argument("pulse amplitude must be finite and >= 0");
  }
  if (!(pulse.carrier >= 0.0) || !std::isfinite(pulse.carrier)) {
    throw std::invalid_argument("pulse carrier must be finite and >= 0");
  }
  if (!(pulse.duration >= 0.0) || !std::isfinite(pulse.duration)) {
    throw std::invalid_argument("pulse duration must be finite and >= 0");
  }
  if (!std::isfinite(pulse.phase)) throw std::invalid_argument("pulse phase must be finite");
}

DriveOperator polarized_drive(const PulseSpec& pulse) {
  const cd ph = std::polar(1.0, -pulse.phase);
  // Sx = (S+ + S-)/2, Sy = (S+ - S-)/(2i).
  cd plus = pulse.axis == DriveAxis::x ? 0.5 * ph : -0.5 * kI * ph;
  cd minus = pulse.axis == DriveAxis::x ? 0.5 * ph : 0.5 * kI * ph;
  switch (pulse.polarization) {
    case Polarization::linear: return {plus, minus};
    case Polarization::rh: return {plus, 0.0};
    case Polarization::lh: return {0.0, minus};
  }
  return {plus, minus};
}

Eigen::MatrixXcd drive_matrix(const Eigensystem& es, const PulseSpec& pulse) {
  Eigen::MatrixXd v = es.vectors();
  SpinOperators ops = spin_operators(es.system());
  Eigen::MatrixXcd sp = (v.transpose() * ops.s_plus * v).cast<cd>();
  DriveOperator q = polarized_drive(pulse);
  return q.k_plus * sp + q.k_minus * sp.adjoint();
}

Trajectory propagate(const Eigensystem& es, const PulseSpec& pulse, const Eigen::VectorXcd& initial,
                     const std::vector<double>& times, const PropagateOptions& options) {
  if (initial.size() != es.dim()) {
    throw std::invalid_argument(
        fmt::format("initial state has {} entries, expected {}", initial.size(), es.dim()));
  }
  if (std::abs(initial.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument(fmt::format("initial state norm {} is not 1", initial.norm()));
  }
  RunResult r = run(es, pulse, initial, times, options);
  Trajectory traj;
  traj.times = times;
  traj.worst_local_error = r.worst;
  traj.step = r.step;
  traj.populations.resize(static_cast<Eigen::Index>(times.size()), es.dim());
  for (std::size_t i = 0; i < r.snapshots.size(); ++i) {
    Eigen::VectorXcd psi = r.snapshots[i].col(0);
    traj.populations.row(static_cast<Eigen::Index>(i)) = psi.cwiseAbs2().transpose();
    traj.states.push_back(std::move(psi));
  }
  return traj;
}

Eigen::MatrixXcd propagator(const Eigensystem& es, const PulseSpec& pulse, double t,
                            const PropagateOptions& options) {
  Eigen::MatrixXcd x0 = Eigen::MatrixXcd::Identity(es.dim(), es.dim());
  return run(es, pulse, x0, {t}, options).snapshots.front();
}

Eigen::VectorXcd to_interaction_frame(const Eigensystem& es, const Eigen::VectorXcd& psi, double t) {
  Eigen::VectorXd e = es.energies();
  Eigen::VectorXcd out(psi.size());
  for (Eigen::Index k = 0; k < psi.size(); ++k) out(k) = std::polar(1.0, e(k) * t) * psi(k);
  return out;
}

Eigen::VectorXcd label_state(const Eigensystem& es, int label) {
  es.level(label);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(es.dim());
  v(label - 1) = 1.0;
  return v;
}

Eigen::Vector2cd TwoLevelModel::evolve(const Eigen::Vector2cd& psi, double t) const {
  double a = std::sqrt(0.25 * detuning * detuning + std::norm(coupling));
  if (a == 0.0) return psi;
  Eigen::Matrix2cd u = std::cos(a * t) * Eigen::Matrix2cd::Identity() -
                       kI * (std::sin(a * t) / a) * hamiltonian;
  return u * psi;
}

TwoLevelModel reduce_two_level(const Eigensystem& es, int label_a, int label_b,
                               const PulseSpec& pulse) {
  validate(pulse);
  TwoLevelModel m;
  m.eta = mixing_factor(es, label_a, label_b);
  const EigenLevel& a = es.level(label_a);
  const EigenLevel& b = es.level(label_b);
  const EigenLevel& up = a.energy >= b.energy ? a : b;
  const EigenLevel& lo = a.energy >= b.energy ? b : a;
  m.upper = up.label;
  m.lower = lo.label;
  m.transition_frequency = up.energy - lo.energy;
  if (m.transition_frequency < kDegeneracyTolerance * es.system().hyperfine) {
    throw std::invalid_argument(
        fmt::format("levels {} and {} are degenerate at {} T", label_a, label_b, es.field()));
  }
  Eigen::MatrixXcd q = drive_matrix(es, pulse);
  m.coupling = 0.5 * pulse.amplitude * q(m.upper - 1, m.lower - 1);
  m.rabi_rate = 2.0 * std::abs(m.coupling);
  m.detuning = m.transition_frequency - pulse.carrier;
  m.pi_time = m.rabi_rate > 0.0 ? std::numbers::pi / m.rabi_rate
                                : std::numeric_limits<double>::infinity();
  m.rwa_warning = pulse.amplitude > 0.1 * m.transition_frequency;
  m.hamiltonian << 0.5 * m.detuning, m.coupling, std::conj(m.coupling), -0.5 * m.detuning;
  return m;
}

EqualizedPulse design_equalized_pulse(const Eigensystem& es, std::pair<int, int> wanted,
                                      std::pair<int, int> unwanted, double amplitude,
                                      double ratio_tolerance, int max_half_turns) {
  if (!(amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");
  Transition tw = make_transition(es, wanted.first, wanted.second);
  Transition tu = make_transition(es, unwanted.first, unwanted.second);
  double carrier = 0.5 * (tw.frequency + tu.frequency);
  if (std::abs(tw.frequency - tu.frequency) > 0.1 * carrier) {
    throw std::invalid_argument("lines are not close enough to share a carrier");
  }
  if (tw.eta == 0.0 || tu.eta == 0.0) throw std::domain_error("a line has zero mixing factor");
  double ratio = std::abs(tw.eta) / std::abs(tu.eta);

  EqualizedPulse out;
  out.eta_ratio = ratio;
  for (int p = 1; p <= max_half_turns && out.wanted_half_turns == 0; p += 2) {
    for (int q = 2; q <= max_half_turns + 1; q += 2) {
      double r = static_cast<double>(p) / q;
      if (std::abs(r / ratio - 1.0) <= ratio_tolerance) {
        out.wanted_half_turns = p;
        out.unwanted_half_turns = q;
        break;
      }
    }
  }
  if (out.wanted_half_turns == 0) {
    throw std::domain_error(fmt::format(
        "eta ratio {:.6f} has no odd/even half-turn match within {} up to {} half turns", ratio,
        ratio_tolerance, max_half_turns));
  }
  out.pulse.amplitude = amplitude;
  out.pulse.carrier = carrier;
  out.pulse.axis = DriveAxis::x;
  out.pulse.polarization = Polarization::linear;
  out.pulse.phase = 0.0;
  out.pulse.duration = 2.0 * std::numbers::pi * out.wanted_half_turns / (amplitude * std::abs(tw.eta));
  return out;
}

}  // namespace donorspin
