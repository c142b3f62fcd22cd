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

#include "donorspin/eigensystem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <fmt/format.h>

namespace donorspin {

namespace {

void check_m(const SpinSystem& sys, HalfInt m) {
  int top = sys.nuclear_spin.twice + 1;
  if (std::abs(m.twice) > top || (m.twice + top) % 2 != 0) {
    throw std::invalid_argument(
        fmt::format("m = {} is not a valid block for I = {}", m.str(), sys.nuclear_spin.str()));
  }
}

// Rank indices by energy; near-ties (within tol) are ordered by (m, branch).
std::vector<int> rank_by_energy(const std::vector<EigenLevel>& levels, double tol) {
  std::vector<int> order(levels.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return levels[a].energy < levels[b].energy; });
  auto tie_less = [&](int a, int b) {
    if (levels[a].m != levels[b].m) return levels[a].m < levels[b].m;
    return levels[a].key().branch == Branch::minus && levels[b].key().branch == Branch::plus;
  };
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && levels[order[j]].energy - levels[order[j - 1]].energy <= tol) ++j;
    std::sort(order.begin() + i, order.begin() + j, tie_less);
    i = j;
  }
  return order;
}

std::vector<EigenLevel> build_levels(const SpinSystem& sys, double omega0) {
  const double A = sys.hyperfine;
  const double w = omega0 / A;
  const double I = sys.I();
  const int top = sys.nuclear_spin.twice + 1;
  std::vector<EigenLevel> out;
  out.reserve(sys.dim());
  for (int mt = -top; mt <= top; mt += 2) {
    HalfInt m{mt};
    if (std::abs(mt) == top) {
      double s = mt > 0 ? 1.0 : -1.0;
      EigenLevel lv;
      lv.branch = Branch::uncoupled;
      lv.m = m;
      lv.energy = s * 0.5 * omega0 * (1.0 - 2.0 * sys.zeeman_ratio * I) + 0.5 * A * I;
      HalfInt ms{mt > 0 ? 1 : -1};
      HalfInt mi = m - ms;
      lv.spin_components[0] = ProductState{ms, mi, product_index(sys, ms, mi)};
      lv.component_count = 1;
      out.push_back(lv);
      continue;
    }
    SubspaceBlock blk = block_params_reduced(sys, m, w);
    double c = std::cos(0.5 * blk.theta_m);
    double s = std::sin(0.5 * blk.theta_m);
    HalfInt up_mi = m - kHalf;
    HalfInt down_mi = m + kHalf;
    ProductState up{kHalf, up_mi, product_index(sys, kHalf, up_mi)};
    ProductState down{-kHalf, down_mi, product_index(sys, -kHalf, down_mi)};

    EigenLevel minus;
    minus.branch = Branch::minus;
    minus.m = m;
    minus.energy = 0.5 * A * (-blk.epsilon_m - blk.r_m);
    minus.coeff_a = c;
    minus.coeff_b = -s;
    minus.spin_components = {down, up};
    minus.component_count = 2;
    out.push_back(minus);

    EigenLevel plus;
    plus.branch = Branch::plus;
    plus.m = m;
    plus.energy = 0.5 * A * (-blk.epsilon_m + blk.r_m);
    plus.coeff_a = c;
    plus.coeff_b = s;
    plus.spin_components = {up, down};
    plus.component_count = 2;
    out.push_back(plus);
  }
  return out;
}

}  // namespace

std::string StateKey::str() const {
  const char* b = branch == Branch::plus ? "+" : branch == Branch::minus ? "-" : "0";
  return fmt::format("({},{})", b, m.str());
}

SubspaceBlock block_params_reduced(const SpinSystem& sys, HalfInt m, double w) {
  check_m(sys, m);
  const double I = sys.I();
  const double mv = m.value();
  SubspaceBlock b;
  b.m = m;
  b.delta_m = mv + w * (1.0 + sys.zeeman_ratio);
  b.epsilon_m = 0.5 * (1.0 + 4.0 * w * mv * sys.zeeman_ratio);
  if (std::abs(m.twice) == sys.nuclear_spin.twice + 1) {
    b.omega_m = 0.0;
    b.dimensionality = 1;
    b.r_m = std::abs(b.delta_m);
    b.theta_m = 0.0;
  } else {
    b.omega_m = std::sqrt(I * (I + 1.0) + 0.25 - mv * mv);
    b.dimensionality = 2;
    b.r_m = std::hypot(b.delta_m, b.omega_m);
    b.theta_m = std::atan2(b.omega_m, b.delta_m);
  }
  return b;
}

SubspaceBlock block_params(const SpinSystem& sys, HalfInt m, double field) {
  return block_params_reduced(sys, m, sys.omega0_tilde(field));
}

int product_index(const SpinSystem& sys, HalfInt m_s, HalfInt m_i) {
  if (std::abs(m_s.twice) != 1 || std::abs(m_i.twice) > sys.nuclear_spin.twice ||
      (m_i.twice + sys.nuclear_spin.twice) % 2 != 0) {
    throw std::invalid_argument(
        fmt::format("invalid product state |{}, {}>", m_s.str(), m_i.str()));
  }
  int s = m_s.twice > 0 ? 0 : 1;
  return s * sys.nuclear_dim() + (sys.nuclear_spin.twice - m_i.twice) / 2;
}

StateKey EigenLevel::key() const {
  if (branch != Branch::uncoupled) return StateKey{branch, m};
  return StateKey{m.twice > 0 ? Branch::plus : Branch::minus, m};
}

double EigenLevel::up_amplitude() const {
  for (int k = 0; k < component_count; ++k) {
    if (spin_components[k].m_s.twice > 0) return k == 0 ? coeff_a : coeff_b;
  }
  return 0.0;
}

double EigenLevel::down_amplitude() const {
  for (int k = 0; k < component_count; ++k) {
    if (spin_components[k].m_s.twice < 0) return k == 0 ? coeff_a : coeff_b;
  }
  return 0.0;
}

LabelMap::LabelMap(std::vector<StateKey> keys_by_label) : keys_(std::move(keys_by_label)) {}

int LabelMap::label(StateKey key) const {
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    if (keys_[i] == key) return static_cast<int>(i) + 1;
  }
  throw std::invalid_argument(fmt::format("no level with key {}", key.str()));
}

StateKey LabelMap::key(int label) const {
  if (label < 1 || label > size()) {
    throw std::out_of_range(fmt::format("label {} outside 1..{}", label, size()));
  }
  return keys_[label - 1];
}

double reference_field(const SpinSystem& sys) {
  double field = 6.0;
  if (sys.zeeman_ratio > 0.0) {
    field = std::min(field, omega0_tilde_to_field(sys, 0.125 / sys.zeeman_ratio));
  }
  return field;
}

LabelMap label_states(const SpinSystem& sys) {
  std::vector<EigenLevel> levels =
      build_levels(sys, field_to_omega0(sys, reference_field(sys)));
  std::vector<int> order = rank_by_energy(levels, kDegeneracyTolerance * sys.hyperfine);
  std::vector<StateKey> keys;
  keys.reserve(order.size());
  for (int i : order) keys.push_back(levels[i].key());
  return LabelMap(std::move(keys));
}

Eigensystem::Eigensystem(const SpinSystem& sys, double field)
    : system_(sys), field_(field), omega0_(field_to_omega0(sys, field)), labels_(label_states(sys)) {
  std::vector<EigenLevel> raw = build_levels(sys, omega0_);
  std::vector<int> order = rank_by_energy(raw, kDegeneracyTolerance * sys.hyperfine);
  for (std::size_t r = 0; r < order.size(); ++r) raw[order[r]].energy_rank = static_cast<int>(r) + 1;
  levels_.resize(raw.size());
  for (EigenLevel& lv : raw) {
    lv.label = labels_.label(lv.key());
    levels_[lv.label - 1] = lv;
  }
}

const EigenLevel& Eigensystem::level(int label) const {
  if (label < 1 || label > dim()) {
    throw std::out_of_range(fmt::format("label {} outside 1..{}", label, dim()));
  }
  return levels_[label - 1];
}

Eigen::VectorXd Eigensystem::energies() const {
  Eigen::VectorXd e(dim());
  for (int i = 0; i < dim(); ++i) e(i) = levels_[i].energy;
  return e;
}

Eigen::MatrixXd Eigensystem::vectors() const {
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < dim(); ++i) {
    const EigenLevel& lv = levels_[i];
    v(lv.spin_components[0].index, i) = lv.coeff_a;
    if (lv.component_count == 2) v(lv.spin_components[1].index, i) = lv.coeff_b;
  }
  return v;
}

std::vector<std::pair<int, int>> Eigensystem::degenerate_pairs() const {
  const double tol = kDegeneracyTolerance * system_.hyperfine;
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < dim(); ++i) {
    for (int j = i + 1; j < dim(); ++j) {
      if (std::abs(levels_[i].energy - levels_[j].energy) <= tol) out.emplace_back(i + 1, j + 1);
    }
  }
  return out;
}

bool Eigensystem::is_degenerate(int label) const {
  for (auto [a, b] : degenerate_pairs()) {
    if (a == label || b == label) return true;
  }
  return false;
}

SpinOperators spin_operators(const SpinSystem& sys) {
  const int n = sys.nuclear_dim();
  const double I = sys.I();
  Eigen::MatrixXd iz1 = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd ip1 = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    double mk = I - k;
    iz1(k, k) = mk;
    if (k > 0) ip1(k - 1, k) = std::sqrt(I * (I + 1.0) - mk * (mk + 1.0));
  }
  Eigen::Matrix2d sz1{{0.5, 0.0}, {0.0, -0.5}};
  Eigen::Matrix2d sp1{{0.0, 1.0}, {0.0, 0.0}};
  auto kron = [](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
      for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
    return out;
  };
  Eigen::MatrixXd e_n = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd e_2 = Eigen::MatrixXd::Identity(2, 2);
  SpinOperators ops;
  ops.sz = kron(sz1, e_n);
  ops.s_plus = kron(sp1, e_n);
  ops.sx = 0.5 * (ops.s_plus + ops.s_plus.transpose());
  ops.sy = (ops.s_plus.cast<std::complex<double>>() - ops.s_plus.transpose().cast<std::complex<double>>()) /
           std::complex<double>(0.0, 2.0);
  ops.iz = kron(e_2, iz1);
  ops.i_plus = kron(e_2, ip1);
  ops.ix = 0.5 * (ops.i_plus + ops.i_plus.transpose());
  ops.iy = (ops.i_plus.cast<std::complex<double>>() - ops.i_plus.transpose().cast<std::complex<double>>()) /
           std::complex<double>(0.0, 2.0);
  return ops;
}

Eigen::MatrixXd full_hamiltonian(const SpinSystem& sys, double field) {
  const double w0 = field_to_omega0(sys, field);
  const double A = sys.hyperfine;
  SpinOperators op = spin_operators(sys);
  Eigen::MatrixXd s_minus = op.s_plus.transpose();
  Eigen::MatrixXd i_minus = op.i_plus.transpose();
  // S.I = Sz Iz + (S+ I- + S- I+)/2
  Eigen::MatrixXd sdoti = op.sz * op.iz + 0.5 * (op.s_plus * i_minus + s_minus * op.i_plus);
  return w0 * op.sz - w0 * sys.zeeman_ratio * op.iz + A * sdoti;
}

}  // namespace donorspin
