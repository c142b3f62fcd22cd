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

#include "donorspin/gates.hpp"
#include "donorspin/spectra.hpp"
#include "donorspin/units.hpp"

using namespace donorspin;

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
const cd kI{0.0, 1.0};

// exp(i a sigma) written out by hand.
Eigen::Matrix2cd rot(char axis, double a) {
  Eigen::Matrix2cd s;
  if (axis == 'x') s << 0, 1, 1, 0;
  if (axis == 'y') s << 0, -kI, kI, 0;
  if (axis == 'z') s << 1, 0, 0, -1;
  return std::cos(a) * Eigen::Matrix2cd::Identity() + kI * std::sin(a) * s;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace

TEST(LogicalMap, BismuthHighField) {
  LogicalMap map = logical_map(Eigensystem(si_bi(), 6.0));
  EXPECT_EQ(map.label(0, 0), 10);
  EXPECT_EQ(map.label(0, 1), 9);
  EXPECT_EQ(map.label(1, 0), 11);
  EXPECT_EQ(map.label(1, 1), 12);
  EXPECT_EQ(map.field, 6.0);
  EXPECT_EQ(map.bits(12), (std::array<int, 2>{1, 1}));
  EXPECT_THROW(map.bits(3), std::invalid_argument);
}

TEST(LogicalMap, PhosphorusHighField) {
  LogicalMap map = logical_map(Eigensystem(si_p(), 6.0));
  EXPECT_EQ(map.label(0, 0), 2);
  EXPECT_EQ(map.label(0, 1), 1);
  EXPECT_EQ(map.label(1, 0), 3);
  EXPECT_EQ(map.label(1, 1), 4);
}

TEST(LogicalMap, SameLabelsAtOperatingPoint) {
  LogicalMap map = logical_map(Eigensystem(si_bi(), 0.21));
  EXPECT_EQ(map.labels, (std::array<int, 4>{10, 9, 11, 12}));
}

TEST(LogicalMap, DegeneracyRejected) {
  EXPECT_THROW(logical_map(Eigensystem(si_bi(), 0.0)), std::domain_error);
}

TEST(ConditionalRotation, TableLines) {
  Eigensystem es(si_bi(), 0.21);
  LogicalMap map = logical_map(es);
  auto line = [&](Qubit c, int v) {
    auto l = conditional_rotation_line(es, map, c, v);
    return std::pair{std::max(l[0], l[1]), std::min(l[0], l[1])};
  };
  EXPECT_EQ(line(Qubit::nucleus, 0), std::pair(11, 10));
  EXPECT_EQ(line(Qubit::nucleus, 1), std::pair(12, 9));
  EXPECT_EQ(line(Qubit::electron, 0), std::pair(10, 9));
  EXPECT_EQ(line(Qubit::electron, 1), std::pair(12, 11));

  double w1 = mhz_to_angular(100.0);
  PulseSpec rx = conditional_rotation_pulse(es, map, Qubit::nucleus, 0, Qubit::electron, DriveAxis::x, kPi, w1);
  EXPECT_NEAR(rx.carrier, make_transition(es, 11, 10).frequency, 1e-3);
  PulseSpec ry = conditional_rotation_pulse(es, map, Qubit::electron, 1, Qubit::nucleus, DriveAxis::y, kPi, w1);
  EXPECT_NEAR(ry.carrier, make_transition(es, 12, 11).frequency, 1e-3);
  EXPECT_EQ(ry.polarization, Polarization::rh);
  PulseSpec lh = conditional_rotation_pulse(es, map, Qubit::electron, 0, Qubit::nucleus, DriveAxis::x, kPi, w1);
  EXPECT_EQ(lh.polarization, make_transition(es, 10, 9).handedness == Handedness::rh ? Polarization::rh
                                                                                        : Polarization::lh);
  PulseSpec zero = conditional_rotation_pulse(es, map, Qubit::nucleus, 0, Qubit::electron, DriveAxis::x, 0.0, w1);
  EXPECT_EQ(zero.duration, 0.0);
}

TEST(ConditionalRotation, RejectsInvalidRequests) {
  Eigensystem es(si_bi(), 0.21);
  LogicalMap map = logical_map(es);
  EXPECT_THROW(conditional_rotation_pulse(es, map, Qubit::nucleus, 0, Qubit::nucleus, DriveAxis::x, 1.0, 1e8),
               std::invalid_argument);
  EXPECT_THROW(conditional_rotation_pulse(es, map, Qubit::nucleus, 2, Qubit::electron, DriveAxis::x, 1.0, 1e8),
               std::invalid_argument);
  EXPECT_THROW(conditional_rotation_pulse(es, map, Qubit::nucleus, 0, Qubit::electron, DriveAxis::x, -1.0, 1e8),
               std::invalid_argument);
}

TEST(ConditionalRotation, IdealMatrixStructure) {
  Eigen::Matrix4cd u = ideal_conditional_rotation(Qubit::nucleus, 0, DriveAxis::x, kPi);
  // X on the electron when the nucleus reads 0: |00> <-> |10>.
  EXPECT_NEAR(std::abs(u(2, 0)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(u(1, 1)), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(u(3, 3)), 1.0, 1e-15);
  Eigen::Matrix4cd v = ideal_conditional_rotation(Qubit::electron, 1, DriveAxis::y, kPi / 2);
  Eigen::Matrix2cd p1 = Eigen::Matrix2cd::Zero();
  p1(1, 1) = 1;
  Eigen::Matrix4cd expect = kron2(Eigen::Matrix2cd::Identity() - p1, Eigen::Matrix2cd::Identity()) +
                            kron2(p1, rot('y', -kPi / 4));
  EXPECT_LT((v - expect).cwiseAbs().maxCoeff(), 1e-15);
}

// Pulses simulated in the full 20-level space against the ideal logical gate.
TEST(ConditionalRotation, SimulatedPulsesMatchIdealGates) {
  Eigensystem es(si_bi(), 0.21);
  LogicalMap map = logical_map(es);
  for (Qubit control : {Qubit::electron, Qubit::nucleus}) {
    Qubit target = control == Qubit::electron ? Qubit::nucleus : Qubit::electron;
    for (int value : {0, 1}) {
      auto line = conditional_rotation_line(es, map, control, value);
      double w1 = make_transition(es, line[0], line[1]).frequency / 100;
      for (DriveAxis axis : {DriveAxis::x, DriveAxis::y}) {
        double theta = kPi / 2;
        PulseSpec p = conditional_rotation_pulse(es, map, control, value, target, axis, theta, w1);
        Eigen::Matrix4cd ideal = ideal_conditional_rotation(control, value, axis, theta);
        for (int in = 0; in < 4; ++in) {
          Eigen::VectorXcd psi = label_state(es, map.labels[in]);
          Eigen::VectorXcd out =
              to_interaction_frame(es, propagate(es, p, psi, {p.duration}).states.front(), p.duration);
          cd overlap = 0.0;
          for (int k = 0; k < 4; ++k) overlap += std::conj(ideal(k, in)) * out(map.labels[k] - 1);
          EXPECT_GT(std::abs(overlap), 0.99)
              << "control " << static_cast<int>(control) << "=" << value << " axis "
              << static_cast<int>(axis) << " input " << in;
        }
      }
    }
  }
}

TEST(Gates, HandBuiltSigmaZ) {
  Eigen::Matrix2cd u = std::exp(kI * 1.5 * kPi) * rot('y', kPi / 2) * rot('x', kPi / 2);
  Eigen::Matrix2cd z;
  z << 1, 0, 0, -1;
  EXPECT_LT((u - z).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT(phase_distance(sigma_z_sequence().product(), z), 1e-12);
}

TEST(Gates, HandBuiltHadamard) {
  Eigen::Matrix2cd u = std::exp(kI * 1.5 * kPi) * rot('x', kPi / 2) * rot('y', 0.75 * kPi) * rot('x', kPi);
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  EXPECT_LT(phase_distance(u, h), 1e-15);
  EXPECT_LT(phase_distance(hadamard_sequence().product(), h), 1e-12);
}

TEST(Gates, StandardIdentitiesVerify) {
  auto ids = standard_identities();
  EXPECT_EQ(ids.size(), 6u);
  for (const GateSequence& seq : ids) {
    Verification v = verify_sequence(seq);
    EXPECT_LT(v.max_norm_error, 1e-12) << seq.name;
    EXPECT_LT(v.unitarity_error, 1e-13) << seq.name;
    EXPECT_NEAR(v.fidelity, 1.0, 1e-12) << seq.name;
    for (const GateFactor& f : seq.factors) {
      Eigen::MatrixXcd m = factor_matrix(f, seq.num_qubits);
      Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
      EXPECT_LT((m.adjoint() * m - id).cwiseAbs().maxCoeff(), 1e-14) << seq.name;
    }
  }
}

TEST(Gates, CzRoutes) {
  auto routes = cz_constructions();
  Eigen::Matrix4cd cz = Eigen::Matrix4cd::Identity();
  cz(3, 3) = -1;
  for (const GateSequence& seq : routes) EXPECT_LT(phase_distance(seq.product(), cz), 1e-12) << seq.name;
  // Ising step exp(-i pi Sz x Sz) = diag(e^{-i pi/4}, e^{i pi/4}, e^{i pi/4}, e^{-i pi/4}).
  Eigen::MatrixXcd ising = factor_matrix(GateFactor::ising(), 2);
  EXPECT_NEAR(std::abs(ising(0, 0) - std::exp(-kI * kPi / 4.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(ising(1, 1) - std::exp(kI * kPi / 4.0)), 0.0, 1e-15);
}

TEST(Gates, SqrtSwapSquaresToSwap) {
  Eigen::Matrix4cd s = sqrt_swap_matrix();
  Eigen::Matrix4cd swap = Eigen::Matrix4cd::Zero();
  swap(0, 0) = swap(3, 3) = 1;
  swap(1, 2) = swap(2, 1) = 1;
  EXPECT_LT(((s * s) - swap).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Gates, CnotFromCz) {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  Eigen::Matrix4cd ih = kron2(Eigen::Matrix2cd::Identity(), h);
  EXPECT_LT(phase_distance(ih * cz_matrix() * ih, cnot_matrix()), 1e-15);
  EXPECT_LT(verify_sequence(cnot_sequence()).max_norm_error, 1e-12);
}

TEST(Gates, IdentitySequence) {
  GateSequence seq;
  seq.num_qubits = 1;
  seq.factors = {GateFactor::phase(0.7), GateFactor::rotation(Pauli::x, 0.3), GateFactor::rotation(Pauli::x, -0.3)};
  seq.target = Eigen::Matrix2cd::Identity();
  Verification v = verify_sequence(seq);
  EXPECT_NEAR(v.fidelity, 1.0, 1e-15);
  EXPECT_LT(v.max_norm_error, 1e-15);
  EXPECT_NEAR(v.phase, 0.7, 1e-14);
}

TEST(Gates, PhaseDistanceIsProjective) {
  Eigen::Matrix4cd u = cnot_matrix();
  EXPECT_LT(phase_distance(std::exp(kI * 1.234) * u, u), 1e-15);
  EXPECT_GT(phase_distance(cz_matrix(), u), 0.5);
  EXPECT_GT(phase_distance(-Eigen::Matrix4cd::Identity() * 1.0, cz_matrix()), 0.5);
}

TEST(Gates, ExplicitMatrixMustFit) {
  EXPECT_THROW(factor_matrix(GateFactor::explicit_matrix(Eigen::MatrixXcd::Identity(3, 3)), 1),
               std::invalid_argument);
  EXPECT_THROW(factor_matrix(GateFactor::rotation(Pauli::x, 1.0, 2), 2), std::invalid_argument);
}
