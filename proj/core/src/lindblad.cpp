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

#include "donorspin/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace donorspin {

namespace {

using cd = std::complex<double>;

constexpr double kGroupTolerance = 1e-6;   // Bohr frequency grouping, units of A
constexpr double kConditionLimit = 1e10;   // eigenvector matrix condition number

struct Element {
  int row;
  int col;
  cd value;
  double omega;
};

struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void join(int a, int b) { parent[find(a)] = find(b); }
  std::vector<int> parent;
};

// Eigen-decomposition of one generator block, with a flag for ill-conditioned
// eigenvector matrices.
struct BlockDecomposition {
  std::vector<int> index;
  Eigen::MatrixXcd sub;
  Eigen::VectorXcd values;
  Eigen::MatrixXcd vectors;
  Eigen::MatrixXcd inverse;
  bool defective = false;
};

BlockDecomposition decompose(const Liouvillian& L, const std::vector<int>& index) {
  BlockDecomposition b;
  b.index = index;
  const Eigen::Index n = static_cast<Eigen::Index>(index.size());
  b.sub.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) b.sub(i, j) = L.generator(index[i], index[j]);
  }
  if (n == 1) {
    b.values = b.sub.diagonal();
    b.vectors = Eigen::MatrixXcd::Identity(1, 1);
    b.inverse = Eigen::MatrixXcd::Identity(1, 1);
    return b;
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(b.sub);
  b.values = solver.eigenvalues();
  b.vectors = solver.eigenvectors();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b.vectors);
  const auto& sv = svd.singularValues();
  double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                         : std::numeric_limits<double>::infinity();
  b.defective = !(cond < kConditionLimit);
  b.inverse = b.defective ? Eigen::MatrixXcd() : Eigen::MatrixXcd(b.vectors.inverse());
  return b;
}

Eigen::MatrixXcd spin_z_or_x(const Eigensystem& es, NoiseAxis axis) {
  SpinOperators ops = spin_operators(es.system());
  Eigen::MatrixXcd s;
  switch (axis) {
    case NoiseAxis::x: s = ops.sx.cast<cd>(); break;
    case NoiseAxis::y: s = ops.sy; break;
    case NoiseAxis::z: s = ops.sz.cast<cd>(); break;
  }
  Eigen::MatrixXcd v = es.vectors().cast<cd>();
  return v.adjoint() * s * v;
}

void check_density_matrix(const Eigen::MatrixXcd& rho, int dim) {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument(fmt::format("density matrix must be {0}x{0}", dim));
  }
  double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > 1e-10) throw std::invalid_argument(fmt::format("density matrix is not Hermitian ({:.3e})", herm));
  cd tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-10) {
    throw std::invalid_argument(fmt::format("density matrix trace {} is not 1", tr.real()));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9) {
    throw std::invalid_argument(
        fmt::format("density matrix has eigenvalue {:.3e}", eig.eigenvalues().minCoeff()));
  }
}

}  // namespace

NoiseSpec NoiseSpec::diabatic(NoiseAxis axis, double variance) {
  return NoiseSpec{axis, variance, Regime::diabatic, 0.0};
}

NoiseSpec NoiseSpec::adiabatic(NoiseAxis axis, double variance) {
  return NoiseSpec{axis, variance, Regime::adiabatic, 0.0};
}

NoiseSpec NoiseSpec::finite(NoiseAxis axis, double variance, double f) {
  return NoiseSpec{axis, variance, Regime::finite, f};
}

double NoiseSpec::weight(double bohr_frequency) const {
  switch (regime) {
    case Regime::diabatic: return 1.0;
    case Regime::adiabatic: return bohr_frequency == 0.0 ? 1.0 : 0.0;
    case Regime::finite: return std::exp(-adiabaticity * bohr_frequency * bohr_frequency);
  }
  return 1.0;
}

Eigen::MatrixXcd noise_operator(const Eigensystem& es, NoiseAxis axis) { return spin_z_or_x(es, axis); }

std::vector<JumpTerm> jump_operators(const Eigensystem& es, NoiseAxis axis) {
  const int d = es.dim();
  const double tol = kGroupTolerance * es.system().hyperfine;
  Eigen::MatrixXcd s = spin_z_or_x(es, axis);
  Eigen::VectorXd e = es.energies();
  std::vector<Element> elems;
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      if (std::abs(s(a, b)) <= 1e-15) continue;
      elems.push_back(Element{a, b, s(a, b), e(b) - e(a)});
    }
  }
  std::stable_sort(elems.begin(), elems.end(),
                   [](const Element& x, const Element& y) { return x.omega < y.omega; });
  std::vector<JumpTerm> out;
  std::size_t i = 0;
  while (i < elems.size()) {
    std::size_t j = i + 1;
    while (j < elems.size() && elems[j].omega - elems[j - 1].omega <= tol) ++j;
    JumpTerm term;
    term.op = Eigen::MatrixXcd::Zero(d, d);
    double sum = 0.0;
    bool has_zero = false;
    for (std::size_t k = i; k < j; ++k) {
      term.op(elems[k].row, elems[k].col) = elems[k].value;
      sum += elems[k].omega;
      has_zero = has_zero || std::abs(elems[k].omega) <= tol;
    }
    term.bohr_frequency = has_zero ? 0.0 : sum / static_cast<double>(j - i);
    out.push_back(std::move(term));
    i = j;
  }
  return out;
}

Liouvillian build_generator(const Eigensystem& es, const std::vector<NoiseSpec>& noise,
                            Picture picture) {
  if (noise.empty()) throw std::invalid_argument("at least one noise specification is required");
  for (const NoiseSpec& n : noise) {
    if (!(n.variance >= 0.0) || !std::isfinite(n.variance)) {
      throw std::invalid_argument(fmt::format("noise variance must be >= 0, got {}", n.variance));
    }
    if (n.regime == NoiseSpec::Regime::finite && !(n.adiabaticity >= 0.0)) {
      throw std::invalid_argument("adiabaticity must be >= 0");
    }
  }
  const int d = es.dim();
  const int dd = d * d;
  Liouvillian L;
  L.dim = d;
  L.picture = picture;
  L.energies = es.energies();
  L.noise = noise;
  L.generator = Eigen::MatrixXcd::Zero(dd, dd);

  for (const NoiseSpec& n : noise) {
    std::vector<JumpTerm> jumps = jump_operators(es, n.axis);
    for (const JumpTerm& j : jumps) {
      double rate = n.variance * n.weight(j.bohr_frequency);
      if (rate == 0.0) continue;
      std::vector<std::pair<int, int>> nz;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          if (j.op(a, b) != cd(0.0)) nz.emplace_back(a, b);
        }
      }
      // S rho S^dag -> conj(S) kron S.
      for (auto [i, jj] : nz) {
        for (auto [k, m] : nz) {
          L.generator(i + k * d, jj + m * d) += rate * std::conj(j.op(k, m)) * j.op(i, jj);
        }
      }
      // -1/2 {S^dag S, rho} -> -1/2 (1 kron M + M^T kron 1).
      Eigen::MatrixXcd M = j.op.adjoint() * j.op;
      for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
          if (M(a, b) == cd(0.0)) continue;
          for (int k = 0; k < d; ++k) {
            L.generator(a + k * d, b + k * d) -= 0.5 * rate * M(a, b);
            L.generator(k + b * d, k + a * d) -= 0.5 * rate * M(a, b);
          }
        }
      }
    }
    L.jumps.push_back(std::move(jumps));
  }
  if (picture == Picture::schrodinger) {
    for (int a = 0; a < d; ++a) {
      for (int b = 0; b < d; ++b) {
        L.generator(a + b * d, a + b * d) += cd(0.0, -(L.energies(a) - L.energies(b)));
      }
    }
  }

  UnionFind uf(dd);
  for (int p = 0; p < dd; ++p) {
    for (int q = 0; q < dd; ++q) {
      if (p != q && L.generator(p, q) != cd(0.0)) uf.join(p, q);
    }
  }
  std::vector<std::vector<int>> groups(dd);
  for (int p = 0; p < dd; ++p) groups[uf.find(p)].push_back(p);
  for (auto& g : groups) {
    if (!g.empty()) L.blocks.push_back(std::move(g));
  }
  std::sort(L.blocks.begin(), L.blocks.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) { return a.front() < b.front(); });
  return L;
}

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim) {
  return Eigen::Map<const Eigen::MatrixXcd>(v.data(), dim, dim);
}

std::vector<Eigen::MatrixXcd> evolve_master(const Liouvillian& L, const Eigen::MatrixXcd& rho0,
                                            const std::vector<double>& times) {
  check_density_matrix(rho0, L.dim);
  for (double t : times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("times must be finite and >= 0");
  }
  Eigen::VectorXcd x0 = vectorize(rho0);
  std::vector<Eigen::VectorXcd> xs(times.size(), Eigen::VectorXcd::Zero(x0.size()));
  for (const std::vector<int>& idx : L.blocks) {
    const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
    Eigen::VectorXcd sub0(n);
    for (Eigen::Index i = 0; i < n; ++i) sub0(i) = x0(idx[i]);
    if (sub0.cwiseAbs().maxCoeff() == 0.0) continue;
    BlockDecomposition b = decompose(L, idx);
    Eigen::VectorXcd c = b.defective ? Eigen::VectorXcd() : Eigen::VectorXcd(b.inverse * sub0);
    for (std::size_t k = 0; k < times.size(); ++k) {
      Eigen::VectorXcd sub;
      if (b.defective) {
        sub = (b.sub * times[k]).exp() * sub0;
      } else {
        Eigen::VectorXcd ct = c.array() * (b.values.array() * times[k]).exp();
        sub = b.vectors * ct;
      }
      for (Eigen::Index i = 0; i < n; ++i) xs[k](idx[i]) = sub(i);
    }
  }
  std::vector<Eigen::MatrixXcd> out;
  out.reserve(times.size());
  for (const Eigen::VectorXcd& x : xs) out.push_back(unvectorize(x, L.dim));
  return out;
}

LiouvillianSpectrum liouvillian_spectrum(const Liouvillian& L) {
  const int dd = L.dim * L.dim;
  LiouvillianSpectrum spec;
  spec.eigenvalues.resize(dd);
  spec.eigenvectors = Eigen::MatrixXcd::Zero(dd, dd);
  spec.left = Eigen::MatrixXcd::Zero(dd, dd);
  double scale = std::max(1.0, L.generator.cwiseAbs().maxCoeff());
  int col = 0;
  for (const std::vector<int>& idx : L.blocks) {
    BlockDecomposition b = decompose(L, idx);
    spec.defective = spec.defective || b.defective;
    Eigen::MatrixXcd inv = b.defective ? b.vectors.completeOrthogonalDecomposition().pseudoInverse()
                                       : b.inverse;
    const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
    for (Eigen::Index l = 0; l < n; ++l) {
      spec.eigenvalues(col + l) = b.values(l);
      for (Eigen::Index i = 0; i < n; ++i) {
        spec.eigenvectors(idx[i], col + l) = b.vectors(i, l);
        spec.left(col + l, idx[i]) = inv(l, i);
      }
      if (std::abs(b.values(l)) <= 1e-10 * scale) {
        Eigen::MatrixXcd rho = unvectorize(spec.eigenvectors.col(col + l), L.dim);
        cd tr = rho.trace();
        if (std::abs(tr) > 1e-12) rho /= tr;
        spec.steady_states.push_back(rho);
      }
    }
    col += static_cast<int>(n);
  }
  return spec;
}

Eigen::MatrixXcd reconstruct(const LiouvillianSpectrum& spec, const Eigen::MatrixXcd& rho0, double t) {
  Eigen::VectorXcd c = spec.left * vectorize(rho0);
  Eigen::VectorXcd ct = c.array() * (spec.eigenvalues.array() * t).exp();
  return unvectorize(spec.eigenvectors * ct, static_cast<int>(rho0.rows()));
}

BlochDecomposition bloch_decompose(const Eigen::MatrixXcd& rho, const std::array<int, 4>& labels,
                                   double tolerance) {
  Eigen::Matrix4cd sub;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (labels[i] < 1 || labels[i] > rho.rows()) {
        throw std::invalid_argument(fmt::format("label {} outside the density matrix", labels[i]));
      }
      sub(i, j) = rho(labels[i] - 1, labels[j] - 1);
    }
  }
  BlochDecomposition out;
  out.leakage = std::abs(rho.trace() - sub.trace());
  if (out.leakage > tolerance) {
    throw std::domain_error(fmt::format("{:.3e} of the trace lies outside the subspace", out.leakage));
  }
  std::array<Eigen::Matrix2cd, 4> s{Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Zero(),
                                    Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero()};
  s[1] << 0, 1, 1, 0;
  s[2] << 0, cd(0, -1), cd(0, 1), 0;
  s[3] << 1, 0, 0, -1;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      Eigen::Matrix4cd p;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) p.block<2, 2>(2 * a, 2 * b) = s[i](a, b) * s[j];
      }
      out.n(i, j) = (sub * p).trace().real();
    }
  }
  return out;
}

Eigen::Matrix4cd bloch_reconstruct(const Eigen::Matrix4d& n) {
  std::array<Eigen::Matrix2cd, 4> s{Eigen::Matrix2cd::Identity(), Eigen::Matrix2cd::Zero(),
                                    Eigen::Matrix2cd::Zero(), Eigen::Matrix2cd::Zero()};
  s[1] << 0, 1, 1, 0;
  s[2] << 0, cd(0, -1), cd(0, 1), 0;
  s[3] << 1, 0, 0, -1;
  Eigen::Matrix4cd rho = Eigen::Matrix4cd::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) rho.block<2, 2>(2 * a, 2 * b) += 0.25 * n(i, j) * s[i](a, b) * s[j];
      }
    }
  }
  return rho;
}

double coherence(const Eigen::MatrixXcd& rho, int label_a, int label_b) {
  return 2.0 * std::abs(rho(label_a - 1, label_b - 1));
}

double polarization(const Eigen::MatrixXcd& rho, int label_a, int label_b) {
  return rho(label_a - 1, label_a - 1).real() - rho(label_b - 1, label_b - 1).real();
}

double coherence_decay_guess(const Liouvillian& L, int label_a, int label_b) {
  int p = (label_a - 1) + (label_b - 1) * L.dim;
  return -L.generator(p, p).real();
}

double block_depolarization_rate(const SpinSystem& sys, double field, HalfInt m, double variance) {
  double s = std::sin(block_params(sys, m, field).theta_m);
  return 0.5 * variance * s * s;
}

AnalyticRates analytic_rates(const SpinSystem& sys, double field, SuperpositionClass cls, HalfInt m,
                             NoiseLimit limit, double variance, Branch sign) {
  SubspaceBlock bm = block_params(sys, m, field);
  if (bm.dimensionality != 2) {
    throw std::invalid_argument(fmt::format("block m = {} is one-dimensional", m.str()));
  }
  const double a2 = variance;
  const double cm = std::cos(bm.theta_m);
  AnalyticRates r;
  const bool diabatic = limit == NoiseLimit::diabatic;
  switch (cls) {
    case SuperpositionClass::allowed_pair:
    case SuperpositionClass::same_branch: {
      SubspaceBlock bm1 = block_params(sys, m - HalfInt{2}, field);
      if (bm1.dimensionality != 2) {
        throw std::invalid_argument(fmt::format("block m-1 = {} is one-dimensional", bm1.m.str()));
      }
      const double cm1 = std::cos(bm1.theta_m);
      const bool allowed = cls == SuperpositionClass::allowed_pair;
      if (diabatic) {
        r.dephasing = allowed ? 0.25 * a2 * (1.0 + cm * cm1) : 0.25 * a2 * (1.0 - cm * cm1);
        r.depolarization = block_depolarization_rate(sys, field, m, a2);
        r.depolarization_other = block_depolarization_rate(sys, field, bm1.m, a2);
      } else {
        double s = allowed ? cm + cm1 : cm - cm1;
        r.dephasing = 0.125 * a2 * s * s;
      }
      break;
    }
    case SuperpositionClass::uncoupled_same:
    case SuperpositionClass::uncoupled_opposite: {
      if (sign == Branch::uncoupled) throw std::invalid_argument("sign must be plus or minus");
      const bool same = cls == SuperpositionClass::uncoupled_same;
      if (diabatic) {
        r.dephasing = same ? 0.25 * a2 * (1.0 - cm) : 0.25 * a2 * (1.0 + cm);
        r.depolarization = block_depolarization_rate(sys, field, m, a2);
      } else {
        double half = 0.5 * bm.theta_m;
        double v = same ? std::sin(half) : std::cos(half);
        r.dephasing = 0.5 * a2 * std::pow(v, 4);
      }
      break;
    }
  }
  return r;
}

double mixed_polarization(double p_e, double rate_e, double p_g, double rate_g, double t) {
  return 0.5 * p_e * (1.0 + std::exp(-rate_e * t)) - 0.5 * p_g * (1.0 + std::exp(-rate_g * t));
}

}  // namespace donorspin
