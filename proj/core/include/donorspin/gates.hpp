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

#ifndef DONORSPIN_GATES_HPP
#define DONORSPIN_GATES_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "donorspin/drive.hpp"
#include "donorspin/eigensystem.hpp"

namespace donorspin {

enum class Qubit { electron, nucleus };

/// Four levels carrying two qubits. Logical |0_e> is m_S = -1/2 and |1_e> is
/// m_S = +1/2; |0_n> is m_I = -I and |1_n> is m_I = -I + 1, each continued
/// adiabatically from high field.
struct LogicalMap {
  // labels[2 * e + n] is the level holding |e n>.
  std::array<int, 4> labels{};
  double field = 0.0;

  int label(int electron, int nucleus) const { return labels[2 * electron + nucleus]; }
  /// Throws std::invalid_argument for a label outside the map.
  std::array<int, 2> bits(int label) const;
};

/// Throws std::domain_error if any of the four levels is degenerate with
/// another level at this field.
LogicalMap logical_map(const Eigensystem& es);

/// Resonant pulse rotating `target` by angle theta about x or y when
/// `control` holds `control_value`. The circular component matching the
/// line is used, so lines of opposite handedness are not driven. The phase is
/// chosen so the rotation is exp(-i theta sigma_axis / 2) on the logical
/// qubit in the interaction frame.
/// Throws std::invalid_argument when control == target or theta < 0.
PulseSpec conditional_rotation_pulse(const Eigensystem& es, const LogicalMap& map, Qubit control,
                                     int control_value, Qubit target, DriveAxis axis, double theta,
                                     double amplitude);

/// The line driven by a conditional rotation, as (upper, lower) labels.
std::array<int, 2> conditional_rotation_line(const Eigensystem& es, const LogicalMap& map,
                                             Qubit control, int control_value);

/// Ideal conditional rotation on the two logical qubits, basis |e n> with the
/// electron as the left tensor factor.
Eigen::Matrix4cd ideal_conditional_rotation(Qubit control, int control_value, DriveAxis axis,
                                            double theta);

enum class Pauli { x, y, z };

struct GateFactor {
  enum class Type { global_phase, rotation, sqrt_swap, ising_zz, hadamard, matrix };
  Type type = Type::global_phase;
  double angle = 0.0;      // global_phase: exp(i angle); rotation: exp(i angle sigma)
  Pauli axis = Pauli::z;
  int qubit = 0;           // 0 is the left tensor factor
  Eigen::MatrixXcd matrix; // Type::matrix only

  static GateFactor phase(double angle);
  static GateFactor rotation(Pauli axis, double angle, int qubit = 0);
  static GateFactor sqrt_swap();
  static GateFactor ising();
  static GateFactor hadamard(int qubit = 0);
  static GateFactor explicit_matrix(Eigen::MatrixXcd m);
};

/// Factors multiply in written order: the last factor acts first.
struct GateSequence {
  std::string name;
  int num_qubits = 1;
  std::vector<GateFactor> factors;
  Eigen::MatrixXcd target;

  Eigen::MatrixXcd product() const;
};

/// Matrix of a single factor on num_qubits qubits.
Eigen::MatrixXcd factor_matrix(const GateFactor& f, int num_qubits);

struct Verification {
  double max_norm_error = 0.0;  // max |U e^{-i phase} - V|
  double fidelity = 0.0;        // |tr(V^dag U)| / n
  double unitarity_error = 0.0; // max |U^dag U - 1|
  double phase = 0.0;           // fitted global phase
};

Verification verify_sequence(const GateSequence& seq);

/// Global-phase-invariant distance min_phi max|U - e^{i phi} V|, using the
/// phase of tr(V^dag U).
double phase_distance(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v);

Eigen::Matrix2cd pauli(Pauli p);
Eigen::Matrix4cd cz_matrix();
Eigen::Matrix4cd cnot_matrix();
Eigen::Matrix4cd sqrt_swap_matrix();
Eigen::Matrix2cd hadamard_matrix();

GateSequence sigma_z_sequence();
GateSequence hadamard_sequence();
GateSequence z_rotation_sequence();
/// Heisenberg (sqrt SWAP) route and Ising route to CZ.
std::array<GateSequence, 2> cz_constructions();
GateSequence cnot_sequence();
/// Every identity above.
std::vector<GateSequence> standard_identities();

}  // namespace donorspin

#endif
