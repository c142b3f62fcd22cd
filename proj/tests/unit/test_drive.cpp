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

#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "donorspin/drive.hpp"
#include "donorspin/spectra.hpp"
#include "donorspin/units.hpp"
#include "oracles.hpp"

using namespace donorspin;

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double fidelity(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) { return std::abs(a.dot(b)); }

double frequency(const Eigensystem& es, int a, int b) {
  return std::abs(es.level(a).energy - es.level(b).energy);
}

// Classic RK4 on the full Hamiltonian in the product basis.
Eigen::VectorXcd rk4_product(const SpinSystem& sys, double field, double w1, double carrier,
                             Eigen::VectorXcd psi, double t_end, int steps) {
  Eigen::MatrixXcd h0 = oracle::hamiltonian(sys, field).cast<cd>();
  Eigen::MatrixXcd sx = oracle::electron_sx(sys).cast<cd>();
  auto f = [&](double t, const Eigen::VectorXcd& y) -> Eigen::VectorXcd {
    return cd(0, -1) * (h0 * y + w1 * std::cos(carrier * t) * (sx * y));
  };
  double h = t_end / steps;
  for (int k = 0; k < steps; ++k) {
    double t = k * h;
    Eigen::VectorXcd k1 = f(t, psi);
    Eigen::VectorXcd k2 = f(t + h / 2, psi + h / 2 * k1);
    Eigen::VectorXcd k3 = f(t + h / 2, psi + h / 2 * k2);
    Eigen::VectorXcd k4 = f(t + h, psi + h * k3);
    psi += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return psi;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = a + (b - a) * i / (n - 1);
  return out;
}

}  // namespace

TEST(PolarizedDrive, Coefficients) {
  PulseSpec p{1.0, 1.0, DriveAxis::x, Polarization::linear, 1.0, 0.0};
  DriveOperator lin = polarized_drive(p);
  EXPECT_EQ(lin.k_plus, cd(0.5, 0));
  EXPECT_EQ(lin.k_minus, cd(0.5, 0));
  p.polarization = Polarization::rh;
  EXPECT_EQ(polarized_drive(p).k_minus, cd(0, 0));
  p.polarization = Polarization::lh;
  EXPECT_EQ(polarized_drive(p).k_plus, cd(0, 0));
  p.axis = DriveAxis::y;
  p.polarization = Polarization::linear;
  DriveOperator y = polarized_drive(p);
  EXPECT_NEAR(std::abs(y.k_plus - cd(0, -0.5)), 0.0, 1e-16);
  EXPECT_NEAR(std::abs(y.k_minus - cd(0, 0.5)), 0.0, 1e-16);
}

TEST(PolarizedDrive, LinearIsSumOfCircularHalves) {
  Eigensystem es(si_bi(), 0.22);
  for (DriveAxis axis : {DriveAxis::x, DriveAxis::y}) {
    PulseSpec p{1.0, 1.0, axis, Polarization::linear, 1.0, 0.3};
    Eigen::MatrixXcd lin = drive_matrix(es, p);
    p.polarization = Polarization::rh;
    Eigen::MatrixXcd rh = drive_matrix(es, p);
    p.polarization = Polarization::lh;
    Eigen::MatrixXcd lh = drive_matrix(es, p);
    EXPECT_LT((lin - rh - lh).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(PolarizedDrive, LinearXIsElectronSx) {
  SpinSystem bi = si_bi();
  Eigensystem es(bi, 0.3);
  Eigen::MatrixXd v = es.vectors();
  Eigen::MatrixXd sx = v.transpose() * oracle::electron_sx(bi) * v;
  PulseSpec p{1.0, 1.0, DriveAxis::x, Polarization::linear, 1.0, 0.0};
  EXPECT_LT((drive_matrix(es, p) - sx.cast<cd>()).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Propagate, ZeroAmplitudeKeepsPopulations) {
  Eigensystem es(si_bi(), 0.22);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(20);
  psi(11) = 0.6;
  psi(8) = cd(0, 0.8);
  PulseSpec p{0.0, 1e10, DriveAxis::x, Polarization::linear, 5e-9, 0.0};
  Trajectory tr = propagate(es, p, psi, linspace(0, 5e-9, 11));
  for (Eigen::Index r = 0; r < tr.populations.rows(); ++r) {
    EXPECT_LT((tr.populations.row(r) - tr.populations.row(0)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Propagate, MatchesIndependentIntegrator) {
  SpinSystem bi = si_bi();
  const double field = 0.22;
  Eigensystem es(bi, field);
  double w1 = mhz_to_angular(100.0);
  double carrier = frequency(es, 12, 11);
  Eigen::MatrixXd v = es.vectors();
  Eigen::VectorXcd psi0 = label_state(es, 12);
  double t = 3e-9;
  PulseSpec p{w1, carrier, DriveAxis::x, Polarization::linear, t, 0.0};
  PropagateOptions opt;
  opt.local_tolerance = 1e-10;
  Eigen::VectorXcd mine = propagate(es, p, psi0, {t}, opt).states.front();
  Eigen::VectorXcd ref_product = rk4_product(bi, field, w1, carrier, v.cast<cd>() * psi0, t, 200000);
  Eigen::VectorXcd ref = v.transpose().cast<cd>() * ref_product;
  EXPECT_LT((mine - ref).norm(), 1e-6);
}

TEST(Propagate, NormAndUnitarity) {
  Eigensystem es(si_bi(), 0.22);
  PulseSpec p{mhz_to_angular(200.0), frequency(es, 12, 11), DriveAxis::y, Polarization::rh, 4e-9, 0.2};
  Eigen::MatrixXcd u = propagator(es, p, 6e-9);
  EXPECT_LT((u.adjoint() * u - Eigen::MatrixXcd::Identity(20, 20)).cwiseAbs().maxCoeff(), 1e-8);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(20, cd(1.0 / std::sqrt(20.0), 0));
  Trajectory tr = propagate(es, p, psi, linspace(0, 6e-9, 13));
  for (const Eigen::VectorXcd& s : tr.states) EXPECT_NEAR(s.norm(), 1.0, 1e-8);
  EXPECT_LE(tr.worst_local_error, PropagateOptions{}.local_tolerance);
  EXPECT_GT(tr.step, 0.0);
}

TEST(Propagate, PulseEndsAtDuration) {
  Eigensystem es(si_bi(), 0.22);
  PulseSpec p{mhz_to_angular(200.0), frequency(es, 12, 11), DriveAxis::x, Polarization::linear, 2e-9, 0.0};
  Trajectory tr = propagate(es, p, label_state(es, 12), {2e-9, 3e-9, 4e-9});
  EXPECT_LT((tr.populations.row(1) - tr.populations.row(0)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((tr.populations.row(2) - tr.populations.row(0)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Propagate, RejectsBadInput) {
  Eigensystem es(si_bi(), 0.22);
  PulseSpec p{1e9, 1e10, DriveAxis::x, Polarization::linear, 1e-9, 0.0};
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(20);
  psi(0) = 1.1;
  EXPECT_THROW(propagate(es, p, psi, {1e-9}), std::invalid_argument);
  EXPECT_THROW(propagate(es, p, label_state(es, 1), {2e-9, 1e-9}), std::invalid_argument);
  EXPECT_THROW(propagate(es, p, Eigen::VectorXcd::Ones(3), {1e-9}), std::invalid_argument);
  p.duration = -1.0;
  EXPECT_THROW(propagate(es, p, label_state(es, 1), {1e-9}), std::invalid_argument);
}

TEST(Propagate, ReportsStepSizeFailure) {
  Eigensystem es(si_bi(), 0.22);
  PulseSpec p{mhz_to_angular(200.0), frequency(es, 12, 11), DriveAxis::x, Polarization::linear, 1e-9, 0.0};
  PropagateOptions opt;
  opt.local_tolerance = 1e-300;
  opt.max_refinements = 1;
  try {
    propagate(es, p, label_state(es, 12), {1e-9}, opt);
    FAIL() << "expected StepSizeError";
  } catch (const StepSizeError& e) {
    EXPECT_GT(e.worst_local_error(), 0.0);
  }
}

TEST(Scenarios, CoherenceTransferAtSeven) {
  SpinSystem bi = si_bi();
  Eigensystem es(bi, omega0_tilde_to_field(bi, 7.0));
  double w1 = mhz_to_angular(200.0);
  double eta1 = std::abs(mixing_factor(es, 12, 11));
  double eta2 = std::abs(mixing_factor(es, 9, 8));
  EXPECT_NEAR(eta1, eta2, 1e-3);
  double carrier = 0.5 * (frequency(es, 12, 11) + frequency(es, 9, 8));
  double t = 2 * kPi / (w1 * 0.5 * (eta1 + eta2));
  const double c11 = 0.6;
  const double c9 = 0.8;
  Eigen::VectorXcd psi0 = c11 * label_state(es, 12) + c9 * label_state(es, 8);
  Eigen::VectorXcd target = c11 * label_state(es, 11) - c9 * label_state(es, 9);
  PulseSpec p{w1, carrier, DriveAxis::x, Polarization::linear, t, 0.0};
  Eigen::VectorXcd out = to_interaction_frame(es, propagate(es, p, psi0, {t}).states.front(), t);
  EXPECT_GT(fidelity(target, out), 0.98);
}

TEST(Scenarios, TwoPhotonPreparation) {
  SpinSystem bi = si_bi();
  Eigensystem es(bi, omega0_tilde_to_field(bi, 5.0));
  double w1 = mhz_to_angular(200.0);
  double eta1 = mixing_factor(es, 10, 9);
  double eta2 = mixing_factor(es, 11, 10);
  double carrier = 0.5 * (frequency(es, 10, 9) + frequency(es, 11, 10));
  double t = kPi / (2 * (w1 / 4) * std::hypot(eta1, eta2));
  Eigen::VectorXcd target = (label_state(es, 11) - label_state(es, 9)) / std::sqrt(2.0);
  PulseSpec p{w1, carrier, DriveAxis::x, Polarization::linear, t, 0.0};
  Eigen::VectorXcd out = to_interaction_frame(es, propagate(es, p, label_state(es, 10), {t}).states.front(), t);
  EXPECT_GT(fidelity(target, out), 0.98);
}

TEST(TwoLevel, EqualPiTimesAtCancellation) {
  SpinSystem bi = si_bi();
  Eigensystem es(bi, omega0_tilde_to_field(bi, 4.0 / (1.0 + bi.zeeman_ratio)));
  double w1 = mhz_to_angular(200.0);
  PulseSpec p{w1, 0.0, DriveAxis::x, Polarization::linear, 0.0, 0.0};
  TwoLevelModel e = reduce_two_level(es, 10, 11, p);
  TwoLevelModel n = reduce_two_level(es, 10, 9, p);
  EXPECT_NEAR(e.pi_time, n.pi_time, 1e-6 * e.pi_time);
  EXPECT_NEAR(e.pi_time, 2 * kPi / (w1 * std::abs(e.eta)), 1e-12 * e.pi_time);
  EXPECT_NEAR(e.eta, 1.0 / std::sqrt(2.0), 1e-12);
}

TEST(TwoLevel, RabiRateScalesWithMixing) {
  Eigensystem es(si_bi(), 0.22);
  double w1 = mhz_to_angular(50.0);
  PulseSpec p{w1, 0.0, DriveAxis::x, Polarization::linear, 0.0, 0.0};
  for (const Transition& t : transition_table(es, KindFilter::all())) {
    if (std::abs(t.eta) < 1e-6) continue;
    TwoLevelModel m = reduce_two_level(es, t.upper, t.lower, p);
    EXPECT_NEAR(m.rabi_rate, w1 * std::abs(t.eta) / 2, 1e-9 * m.rabi_rate);
    p.amplitude = w1 / 2;
    EXPECT_NEAR(reduce_two_level(es, t.upper, t.lower, p).rabi_rate, m.rabi_rate / 2, 1e-9 * m.rabi_rate);
    p.amplitude = w1;
  }
}

TEST(TwoLevel, RejectsDegenerateLevels) {
  SpinSystem bi = si_bi();
  Eigensystem es(bi, 0.0);
  int a = es.label(Branch::plus, HalfInt{0});
  int b = es.label(Branch::plus, HalfInt{-2});
  PulseSpec p{1e8, 0.0, DriveAxis::x, Polarization::linear, 0.0, 0.0};
  EXPECT_THROW(reduce_two_level(es, a, b, p), std::invalid_argument);
}

TEST(TwoLevel, RwaWarning) {
  Eigensystem es(si_bi(), 0.22);
  double f = frequency(es, 12, 11);
  PulseSpec p{0.2 * f, f, DriveAxis::x, Polarization::linear, 0.0, 0.0};
  EXPECT_TRUE(reduce_two_level(es, 12, 11, p).rwa_warning);
  p.amplitude = 0.01 * f;
  EXPECT_FALSE(reduce_two_level(es, 12, 11, p).rwa_warning);
}

TEST(TwoLevel, AgreesWithFullPropagation) {
  Eigensystem es(si_bi(), 0.22);
  double f = frequency(es, 12, 11);
  PulseSpec p{f / 100, f, DriveAxis::x, Polarization::linear, 0.0, 0.0};
  TwoLevelModel m = reduce_two_level(es, 12, 11, p);
  p.duration = 2 * m.pi_time;
  std::vector<double> times = linspace(0, p.duration, 41);
  Trajectory tr = propagate(es, p, label_state(es, 12), times);
  Eigen::Vector2cd start(1.0, 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double model = std::norm(m.evolve(start, times[i])(0));
    EXPECT_NEAR(tr.populations(static_cast<Eigen::Index>(i), m.upper - 1), model, 0.02);
  }
}

TEST(TwoLevel, FittedRabiPeriod) {
  Eigensystem es(si_bi(), 0.22);
  double f = frequency(es, 12, 11);
  PulseSpec p{f / 100, f, DriveAxis::x, Polarization::linear, 0.0, 0.0};
  TwoLevelModel m = reduce_two_level(es, 12, 11, p);
  p.duration = 1.3 * m.pi_time;
  std::vector<double> times = linspace(0.7 * m.pi_time, 1.3 * m.pi_time, 241);
  Trajectory tr = propagate(es, p, label_state(es, 12), times);
  Eigen::Index best = 0;
  tr.populations.col(m.lower - 1).maxCoeff(&best);
  ASSERT_GT(best, 0);
  ASSERT_LT(best, 240);
  // Parabolic refinement around the sampled maximum.
  double y0 = tr.populations(best - 1, m.lower - 1);
  double y1 = tr.populations(best, m.lower - 1);
  double y2 = tr.populations(best + 1, m.lower - 1);
  double dt = times[1] - times[0];
  double t_peak = times[best] + 0.5 * dt * (y0 - y2) / (y0 - 2 * y1 + y2);
  EXPECT_NEAR(t_peak, m.pi_time, 0.01 * m.pi_time);
}

TEST(TwoLevel, LeakageScalesQuadratically) {
  // Strong hyperfine keeps the other lines far off resonance.
  Eigensystem es(build_system(0.5, 5.0, 0.0, 2.0), 0.35);
  Transition line = transition_table(es).front();
  double f = line.frequency;
  auto leakage = [&](double w1) {
    PulseSpec p{w1, f, DriveAxis::x, Polarization::linear, 0.0, 0.0};
    TwoLevelModel m = reduce_two_level(es, line.upper, line.lower, p);
    p.duration = 2 * m.pi_time;
    Trajectory tr = propagate(es, p, label_state(es, line.upper), linspace(0, p.duration, 201));
    double worst = 0.0;
    for (Eigen::Index r = 0; r < tr.populations.rows(); ++r) {
      worst = std::max(worst, 1.0 - tr.populations(r, m.upper - 1) - tr.populations(r, m.lower - 1));
    }
    return worst;
  };
  double ratio = leakage(f / 50) / leakage(f / 100);
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(Selectivity, EqualizedFiveFourPulse) {
  Eigensystem es(si_bi(), 0.22);
  double w1 = mhz_to_angular(100.0);
  EqualizedPulse eq = design_equalized_pulse(es, {12, 11}, {9, 8}, w1);
  EXPECT_EQ(eq.wanted_half_turns, 5);
  EXPECT_EQ(eq.unwanted_half_turns, 4);
  EXPECT_NEAR(eq.pulse.duration, 10 * kPi / (w1 * std::abs(mixing_factor(es, 12, 11))), 1e-18);
  EXPECT_NEAR(eq.pulse.carrier, 0.5 * (frequency(es, 12, 11) + frequency(es, 9, 8)), 1.0);
  double t = eq.pulse.duration;
  for (int start : {9, 8}) {
    Eigen::VectorXcd out = propagate(es, eq.pulse, label_state(es, start), {t}).states.front();
    EXPECT_GT(std::abs(out(start - 1)), 0.95) << start;
  }
  Eigen::VectorXcd flipped = propagate(es, eq.pulse, label_state(es, 12), {t}).states.front();
  EXPECT_GT(std::norm(flipped(10)), 0.9);
}

TEST(Selectivity, EqualRatioCannotBeSeparated) {
  SpinSystem bi = si_bi();
  Eigensystem es(bi, omega0_tilde_to_field(bi, 4.0 / (1.0 + bi.zeeman_ratio)));
  EXPECT_THROW(design_equalized_pulse(es, {10, 11}, {10, 9}, 1e9, 0.01, 21), std::exception);
  Eigensystem e22(bi, 0.22);
  EXPECT_THROW(design_equalized_pulse(e22, {12, 11}, {9, 8}, 1e9, 1e-6, 5), std::domain_error);
}

TEST(Selectivity, CircularPolarizationPicksLines) {
  Eigensystem es(si_bi(), 0.22);
  double w1 = mhz_to_angular(100.0);
  double f = frequency(es, 12, 11);
  ASSERT_GT(mixing_factor(es, 12, 11), 0.0);
  ASSERT_LT(mixing_factor(es, 9, 8), 0.0);
  PulseSpec rh{w1, f, DriveAxis::x, Polarization::rh, 0.0, 0.0};
  rh.duration = reduce_two_level(es, 12, 11, rh).pi_time;
  Eigen::VectorXcd from9 = propagate(es, rh, label_state(es, 9), {rh.duration}).states.front();
  EXPECT_LT(1.0 - std::norm(from9(8)), 0.05);
  Eigen::VectorXcd from12 = propagate(es, rh, label_state(es, 12), {rh.duration}).states.front();
  EXPECT_GT(std::norm(from12(10)), 0.9);
  PulseSpec lh = rh;
  lh.polarization = Polarization::lh;
  Eigen::VectorXcd lh12 = propagate(es, lh, label_state(es, 12), {lh.duration}).states.front();
  EXPECT_LT(1.0 - std::norm(lh12(11)), 0.05);
}
