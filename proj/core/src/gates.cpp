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

#include "donorspin/gates.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <fmt/format.h>

#include "donorspin/spectra.hpp"

namespace donorspin {

namespace {

using cd = std::complex<double>;
constexpr cd kI{0.0, 1.0};

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::MatrixXcd on_qubit(const Eigen::Matrix2cd& g, int qubit, int num_qubits) {
  if (qubit < 0 || qubit >= num_qubits) {
    throw std::invalid_argument(fmt::format("qubit {} outside 0..{}", qubit, num_qubits - 1));
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (int q = 0; q < num_qubits; ++q) {
    out = kron(out, q == qubit ? Eigen::MatrixXcd(g) : Eigen::MatrixXcd::Identity(2, 2));
  }
  return out;
}

Eigen::Matrix2cd rotation_matrix(Pauli axis, double angle) {
  return std::cos(angle) * Eigen::Matrix2cd::Identity() + kI * std::sin(angle) * pauli(axis);
}

}  // namespace

std::array<int, 2> LogicalMap::bits(int label) const {
  for (int k = 0; k < 4; ++k) {
    if (labels[k] == label) return {k / 2, k % 2};
  }
  throw std::invalid_argument(fmt::format("label {} is not a logical state", label));
}

LogicalMap logical_map(const Eigensystem& es) {
  const SpinSystem& sys = es.system();
  LogicalMap map;
  map.field = es.field();
  for (int e = 0; e < 2; ++e) {
    for (int n = 0; n < 2; ++n) {
      HalfInt mi{-sys.nuclear_spin.twice + 2 * n};
      StateKey key = e == 1 ? StateKey{Branch::plus, mi + kHalf} : StateKey{Branch::minus, mi - kHalf};
      int label = es.label(key);
      if (es.is_degenerate(label)) {
        throw std::domain_error(
            fmt::format("level {} is degenerate at {} T; logical states are ambiguous", label,
                        es.field()));
      }
      map.labels[2 * e + n] = label;
    }
  }
  return map;
}

std::array<int, 2> conditional_rotation_line(const Eigensystem& es, const LogicalMap& map,
                                             Qubit control, int control_value) {
  if (control_value != 0 && control_value != 1) {
    throw std::invalid_argument("control value must be 0 or 1");
  }
  int a = control == Qubit::electron ? map.label(control_value, 0) : map.label(0, control_value);
  int b = control == Qubit::electron ? map.label(control_value, 1) : map.label(1, control_value);
  if (es.level(a).energy >= es.level(b).energy) return {a, b};
  return {b, a};
}

PulseSpec conditional_rotation_pulse(const Eigensystem& es, const LogicalMap& map, Qubit control,
                                     int control_value, Qubit target, DriveAxis axis, double theta,
                                     double amplitude) {
  if (control == target) throw std::invalid_argument("control and target must differ");
  if (!(theta >= 0.0)) throw std::invalid_argument("rotation angle must be >= 0");
  if (!(amplitude > 0.0)) throw std::invalid_argument("amplitude must be positive");
  auto [upper, lower] = conditional_rotation_line(es, map, control, control_value);
  Transition t = make_transition(es, upper, lower);

  PulseSpec pulse;
  pulse.amplitude = amplitude;
  pulse.carrier = t.frequency;
  pulse.axis = DriveAxis::x;
  pulse.polarization = t.handedness == Handedness::rh ? Polarization::rh : Polarization::lh;
  pulse.phase = 0.0;
  cd q = drive_matrix(es, pulse)(upper - 1, lower - 1);

  int target_bit_upper = map.bits(upper)[target == Qubit::electron ? 0 : 1];
  double psi = axis == DriveAxis::x ? 0.0 : 0.5 * std::numbers::pi;
  double chi = target_bit_upper == 1 ? psi : -psi;
  pulse.phase = std::arg(q) - chi;
  pulse.duration = theta / (amplitude * std::abs(q));
  return pulse;
}

Eigen::Matrix4cd ideal_conditional_rotation(Qubit control, int control_value, DriveAxis axis,
                                            double theta) {
  Eigen::Matrix2cd s = axis == DriveAxis::x ? pauli(Pauli::x) : pauli(Pauli::y);
  Eigen::Matrix2cd r = std::cos(0.5 * theta) * Eigen::Matrix2cd::Identity() -
                       kI * std::sin(0.5 * theta) * s;
  Eigen::Matrix2cd p = Eigen::Matrix2cd::Zero();
  p(control_value, control_value) = 1.0;
  Eigen::Matrix2cd q = Eigen::Matrix2cd::Identity() - p;
  Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  if (control == Qubit::electron) return kron(p, r) + kron(q, id);
  return kron(r, p) + kron(id, q);
}

GateFactor GateFactor::phase(double angle) {
  GateFactor f;
  f.type = Type::global_phase;
  f.angle = angle;
  return f;
}

GateFactor GateFactor::rotation(Pauli axis, double angle, int qubit) {
  GateFactor f;
  f.type = Type::rotation;
  f.axis = axis;
  f.angle = angle;
  f.qubit = qubit;
  return f;
}

GateFactor GateFactor::sqrt_swap() {
  GateFactor f;
  f.type = Type::sqrt_swap;
  return f;
}

GateFactor GateFactor::ising() {
  GateFactor f;
  f.type = Type::ising_zz;
  return f;
}

GateFactor GateFactor::hadamard(int qubit) {
  GateFactor f;
  f.type = Type::hadamard;
  f.qubit = qubit;
  return f;
}

GateFactor GateFactor::explicit_matrix(Eigen::MatrixXcd m) {
  GateFactor f;
  f.type = Type::matrix;
  f.matrix = std::move(m);
  return f;
}

Eigen::MatrixXcd factor_matrix(const GateFactor& f, int num_qubits) {
  const Eigen::Index n = Eigen::Index{1} << num_qubits;
  switch (f.type) {
    case GateFactor::Type::global_phase:
      return std::polar(1.0, f.angle) * Eigen::MatrixXcd::Identity(n, n);
    case GateFactor::Type::rotation:
      return on_qubit(rotation_matrix(f.axis, f.angle), f.qubit, num_qubits);
    case GateFactor::Type::hadamard:
      return on_qubit(hadamard_matrix(), f.qubit, num_qubits);
    case GateFactor::Type::sqrt_swap:
      if (num_qubits != 2) throw std::invalid_argument("sqrt SWAP needs two qubits");
      return sqrt_swap_matrix();
    case GateFactor::Type::ising_zz: {
      if (num_qubits != 2) throw std::invalid_argument("Ising step needs two qubits");
      // exp(-i pi Sz x Sz), Sz = sigma_z / 2.
      Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(4, 4);
      const double zz[4] = {1.0, -1.0, -1.0, 1.0};
      for (int k = 0; k < 4; ++k) m(k, k) = std::polar(1.0, -0.25 * std::numbers::pi * zz[k]);
      return m;
    }
    case GateFactor::Type::matrix:
      if (f.matrix.rows() != n || f.matrix.cols() != n) {
        throw std::invalid_argument("explicit factor has the wrong size");
      }
      return f.matrix;
  }
  throw std::invalid_argument("unknown gate factor");
}

Eigen::MatrixXcd GateSequence::product() const {
  const Eigen::Index n = Eigen::Index{1} << num_qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
  for (const GateFactor& f : factors) u = u * factor_matrix(f, num_qubits);
  return u;
}

double phase_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v) {
  cd overlap = (v.adjoint() * u).trace();
  cd ph = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cd(1.0);
  return (u / ph - v).cwiseAbs().maxCoeff();
}

Verification verify_sequence(const GateSequence& seq) {
  Eigen::MatrixXcd u = seq.product();
  if (u.rows() != seq.target.rows() || u.cols() != seq.target.cols()) {
    throw std::invalid_argument("target size does not match the sequence");
  }
  Verification out;
  cd overlap = (seq.target.adjoint() * u).trace();
  out.phase = std::arg(overlap);
  out.fidelity = std::abs(overlap) / static_cast<double>(u.rows());
  out.max_norm_error = phase_distance(u, seq.target);
  out.unitarity_error =
      (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  return out;
}

Eigen::Matrix2cd pauli(Pauli p) {
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::x: m << 0, 1, 1, 0; break;
    case Pauli::y: m << 0, -kI, kI, 0; break;
    case Pauli::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

Eigen::Matrix4cd cz_matrix() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Identity();
  m(3, 3) = -1.0;
  return m;
}

Eigen::Matrix4cd cnot_matrix() {
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  return m;
}

Eigen::Matrix4cd sqrt_swap_matrix() {
  // P_triplet + i P_singlet.
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  m(0, 0) = m(3, 3) = 1.0;
  m(1, 1) = m(2, 2) = cd(0.5, 0.5);
  m(1, 2) = m(2, 1) = cd(0.5, -0.5);
  return m;
}

Eigen::Matrix2cd hadamard_matrix() {
  Eigen::Matrix2cd m;
  m << 1, 1, 1, -1;
  return m / std::sqrt(2.0);
}

GateSequence sigma_z_sequence() {
  const double pi = std::numbers::pi;
  return GateSequence{"sigma_z",
                      1,
                      {GateFactor::phase(1.5 * pi), GateFactor::rotation(Pauli::y, 0.5 * pi),
                       GateFactor::rotation(Pauli::x, 0.5 * pi)},
                      pauli(Pauli::z)};
}

GateSequence hadamard_sequence() {
  const double pi = std::numbers::pi;
  return GateSequence{"hadamard",
                      1,
                      {GateFactor::phase(1.5 * pi), GateFactor::rotation(Pauli::x, 0.5 * pi),
                       GateFactor::rotation(Pauli::y, 0.75 * pi), GateFactor::rotation(Pauli::x, pi)},
                      hadamard_matrix()};
}

GateSequence z_rotation_sequence() {
  const double pi = std::numbers::pi;
  return GateSequence{"z_rotation",
                      1,
                      {GateFactor::phase(pi), GateFactor::rotation(Pauli::y, -0.75 * pi),
                       GateFactor::rotation(Pauli::x, -0.25 * pi),
                       GateFactor::rotation(Pauli::y, -0.25 * pi)},
                      rotation_matrix(Pauli::z, -0.25 * pi)};
}

std::array<GateSequence, 2> cz_constructions() {
  const double pi = std::numbers::pi;
  GateSequence heisenberg{"cz_heisenberg",
                          2,
                          {GateFactor::phase(0.5 * pi), GateFactor::rotation(Pauli::z, -0.25 * pi, 0),
                           GateFactor::rotation(Pauli::z, 0.25 * pi, 1), GateFactor::sqrt_swap(),
                           GateFactor::rotation(Pauli::z, -0.5 * pi, 0), GateFactor::sqrt_swap()},
                          cz_matrix()};
  GateSequence ising{"cz_ising",
                     2,
                     {GateFactor::phase(-0.25 * pi), GateFactor::rotation(Pauli::z, 0.25 * pi, 0),
                      GateFactor::rotation(Pauli::z, 0.25 * pi, 1), GateFactor::ising()},
                     cz_matrix()};
  return {heisenberg, ising};
}

GateSequence cnot_sequence() {
  return GateSequence{"cnot",
                      2,
                      {GateFactor::hadamard(1), GateFactor::explicit_matrix(cz_matrix()),
                       GateFactor::hadamard(1)},
                      cnot_matrix()};
}

std::vector<GateSequence> standard_identities() {
  auto cz = cz_constructions();
  return {sigma_z_sequence(), hadamard_sequence(), z_rotation_sequence(), cz[0], cz[1],
          cnot_sequence()};
}

}  // namespace donorspin
