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

#ifndef DONORSPIN_EIGENSYSTEM_HPP
#define DONORSPIN_EIGENSYSTEM_HPP

#include <array>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "donorspin/half_int.hpp"
#include "donorspin/spin_system.hpp"

namespace donorspin {

enum class Branch { plus, minus, uncoupled };

/// Adiabatic state key (branch, m). The two uncoupled levels are keyed as
/// (+, I+1/2) and (-, -(I+1/2)).
struct StateKey {
  Branch branch = Branch::plus;
  HalfInt m;

  auto operator<=>(const StateKey&) const = default;
  std::string str() const;
};

/// Parameters of the block with fixed m = m_S + m_I. All dimensionless.
struct SubspaceBlock {
  HalfInt m;
  double delta_m = 0.0;    // m + w0~ (1 + delta)
  double omega_m = 0.0;    // sqrt(I(I+1) + 1/4 - m^2)
  double epsilon_m = 0.0;  // (1 + 4 w0~ m delta) / 2
  double r_m = 0.0;        // sqrt(delta_m^2 + omega_m^2)
  double theta_m = 0.0;    // atan2(omega_m, delta_m), zero for one-dimensional blocks
  int dimensionality = 2;
};

/// Throws std::invalid_argument if |m| > I + 1/2 or m is not in the ladder.
SubspaceBlock block_params(const SpinSystem& sys, HalfInt m, double field);
SubspaceBlock block_params_reduced(const SpinSystem& sys, HalfInt m, double omega0_tilde);

struct ProductState {
  HalfInt m_s;
  HalfInt m_i;
  int index = 0;  // row in the |m_S, m_I> basis
};

/// Index of |m_S, m_I> in the product basis: m_S = +1/2 first, m_I descending.
int product_index(const SpinSystem& sys, HalfInt m_s, HalfInt m_i);

/// |+,m> = a |+1/2, m-1/2> + b |-1/2, m+1/2>,  a = cos(theta/2), b = sin(theta/2)
/// |-,m> = a |-1/2, m+1/2> + b |+1/2, m-1/2>,  a = cos(theta/2), b = -sin(theta/2)
/// coeff_a multiplies spin_components[0].
struct EigenLevel {
  Branch branch = Branch::plus;
  HalfInt m;
  double energy = 0.0;  // rad/s
  double coeff_a = 1.0;
  double coeff_b = 0.0;
  int label = 0;        // adiabatic label, 1..d
  int energy_rank = 0;  // ascending energy index at this field, 1..d
  std::array<ProductState, 2> spin_components{};
  int component_count = 1;

  StateKey key() const;
  // Amplitudes on the m_S = +1/2 and m_S = -1/2 components.
  double up_amplitude() const;
  double down_amplitude() const;
};

/// Fixed bidirectional map between state keys and labels 1..d.
class LabelMap {
 public:
  LabelMap() = default;
  explicit LabelMap(std::vector<StateKey> keys_by_label);

  int size() const { return static_cast<int>(keys_.size()); }
  int label(StateKey key) const;
  int label(Branch branch, HalfInt m) const { return label(StateKey{branch, m}); }
  StateKey key(int label) const;

 private:
  std::vector<StateKey> keys_;
};

/// Field used to anchor the labels: 6 T, lowered when needed so that the
/// nuclear Zeeman term stays below an eighth of A (w0~ delta <= 1/8).
double reference_field(const SpinSystem& sys);

/// Labels in order of increasing energy at the reference field, ties broken by
/// m ascending. Within a block the two branches never cross, so (branch, m)
/// identifies the adiabatically continued state at every field.
LabelMap label_states(const SpinSystem& sys);

class Eigensystem {
 public:
  Eigensystem(const SpinSystem& sys, double field);

  const SpinSystem& system() const { return system_; }
  double field() const { return field_; }
  double omega0() const { return omega0_; }
  double omega0_tilde() const { return omega0_ / system_.hyperfine; }
  int dim() const { return system_.dim(); }

  /// Indexed by label - 1.
  const std::vector<EigenLevel>& levels() const { return levels_; }
  const EigenLevel& level(int label) const;
  const EigenLevel& level(StateKey key) const { return level(labels_.label(key)); }
  int label(StateKey key) const { return labels_.label(key); }
  int label(Branch branch, HalfInt m) const { return labels_.label(branch, m); }
  const LabelMap& labels() const { return labels_; }

  /// Energies ordered by label.
  Eigen::VectorXd energies() const;
  /// Eigenvectors as columns ordered by label, in the product basis.
  Eigen::MatrixXd vectors() const;
  /// Pairs of labels whose energies agree within 1e-9 A.
  std::vector<std::pair<int, int>> degenerate_pairs() const;
  bool is_degenerate(int label) const;

 private:
  SpinSystem system_;
  double field_;
  double omega0_;
  LabelMap labels_;
  std::vector<EigenLevel> levels_;
};

inline Eigensystem eigensystem(const SpinSystem& sys, double field) { return {sys, field}; }

/// Label map accessor matching the free-function style of the rest of the API.
inline const LabelMap& label_states(const Eigensystem& es) { return es.labels(); }

struct SpinOperators {
  Eigen::MatrixXd sx, sz, s_plus;
  Eigen::MatrixXcd sy;
  Eigen::MatrixXd ix, iz, i_plus;
  Eigen::MatrixXcd iy;
};

/// Angular-momentum matrices in the product basis.
SpinOperators spin_operators(const SpinSystem& sys);

/// Dense H0 in the product basis, built from ladder matrix elements.
Eigen::MatrixXd full_hamiltonian(const SpinSystem& sys, double field);

inline constexpr double kDegeneracyTolerance = 1e-9;  // in units of A

}  // namespace donorspin

#endif
