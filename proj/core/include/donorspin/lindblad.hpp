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

#ifndef DONORSPIN_LINDBLAD_HPP
#define DONORSPIN_LINDBLAD_HPP

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "donorspin/eigensystem.hpp"

namespace donorspin {

enum class NoiseAxis { x, y, z };

/// Gaussian field noise along one axis. Each Bohr-frequency component S(W)
/// enters the dissipator with weight alpha^2 exp(-f W^2). The adiabatic limit
/// keeps only W = 0; the diabatic limit keeps every component at full weight.
/// Time is in seconds and alpha^2 is used as the rate prefactor.
struct NoiseSpec {
  enum class Regime { finite, adiabatic, diabatic };

  NoiseAxis axis = NoiseAxis::z;
  double variance = 0.0;  // alpha^2
  Regime regime = Regime::diabatic;
  double adiabaticity = 0.0;  // f in s^2, finite regime only

  static NoiseSpec diabatic(NoiseAxis axis, double variance);
  static NoiseSpec adiabatic(NoiseAxis axis, double variance);
  static NoiseSpec finite(NoiseAxis axis, double variance, double f);

  double weight(double bohr_frequency) const;
};

/// One Bohr-frequency component of the noise operator, in the labelled
/// eigenbasis. bohr_frequency = E_b - E_a for the elements |a><b| it holds.
struct JumpTerm {
  double bohr_frequency = 0.0;
  Eigen::MatrixXcd op;
};

/// Components grouped with absolute tolerance 1e-6 A, sorted by frequency.
std::vector<JumpTerm> jump_operators(const Eigensystem& es, NoiseAxis axis);

/// Noise operator (S_x, S_y or S_z) in the labelled eigenbasis.
Eigen::MatrixXcd noise_operator(const Eigensystem& es, NoiseAxis axis);

enum class Picture { interaction, schrodinger };

/// Superoperator on column-stacked density matrices: vec(A X B) = (B^T kron A) vec(X).
/// Because the dissipator is secular, the generator splits into independent
/// blocks; `blocks` lists the index sets of the irreducible blocks.
struct Liouvillian {
  int dim = 0;
  Picture picture = Picture::interaction;
  Eigen::VectorXd energies;
  std::vector<NoiseSpec> noise;
  std::vector<std::vector<JumpTerm>> jumps;  // per noise entry
  Eigen::MatrixXcd generator;
  std::vector<std::vector<int>> blocks;
};

/// Throws std::invalid_argument for an empty noise list or negative variance.
Liouvillian build_generator(const Eigensystem& es, const std::vector<NoiseSpec>& noise,
                            Picture picture = Picture::interaction);

Eigen::VectorXcd vectorize(const Eigen::MatrixXcd& rho);
Eigen::MatrixXcd unvectorize(const Eigen::VectorXcd& v, int dim);

/// Density matrices exp(L t) rho0 at each time. Throws std::invalid_argument
/// for rho0 that is not Hermitian, not unit trace or has an eigenvalue below
/// -1e-9.
std::vector<Eigen::MatrixXcd> evolve_master(const Liouvillian& L, const Eigen::MatrixXcd& rho0,
                                            const std::vector<double>& times);

struct LiouvillianSpectrum {
  Eigen::VectorXcd eigenvalues;
  Eigen::MatrixXcd eigenvectors;  // right eigenvectors as columns
  Eigen::MatrixXcd left;          // rows are the dual basis: left * eigenvectors = 1
  std::vector<Eigen::MatrixXcd> steady_states;  // unit trace where possible
  // True if some block's eigenvector matrix is numerically singular
  // (condition number above 1e10); evolve_master then uses expm on that block.
  bool defective = false;
};

LiouvillianSpectrum liouvillian_spectrum(const Liouvillian& L);

/// sum_l c_l n_l exp(lambda_l t) with c = left * vec(rho0).
Eigen::MatrixXcd reconstruct(const LiouvillianSpectrum& spec, const Eigen::MatrixXcd& rho0,
                             double t);

/// rho restricted to four levels as sum_ij n_ij sigma_i kron sigma_j / 4,
/// i, j in {0, x, y, z}. The first factor separates levels {0,1} from {2,3}.
struct BlochDecomposition {
  Eigen::Matrix4d n;  // n(i, j)
  double leakage = 0.0;
};

/// Throws std::domain_error if more than `tolerance` of the trace lies
/// outside the subspace.
BlochDecomposition bloch_decompose(const Eigen::MatrixXcd& rho, const std::array<int, 4>& labels,
                                   double tolerance = 1e-6);
Eigen::Matrix4cd bloch_reconstruct(const Eigen::Matrix4d& n);

/// 2|rho_ab| = sqrt(tr(sigma_x rho)^2 + tr(sigma_y rho)^2) on the pair (a, b).
double coherence(const Eigen::MatrixXcd& rho, int label_a, int label_b);
/// rho_aa - rho_bb.
double polarization(const Eigen::MatrixXcd& rho, int label_a, int label_b);

/// Largest decay rate of the coherence |a><b| read off the generator diagonal,
/// a guide for choosing fit windows.
double coherence_decay_guess(const Liouvillian& L, int label_a, int label_b);

enum class SuperpositionClass {
  allowed_pair,     // (+,m) & (-,m-1)
  same_branch,      // (+,m) & (+,m-1) or (-,m) & (-,m-1)
  uncoupled_same,   // (s,s(I+1/2)) & (s,m)
  uncoupled_opposite,  // (s,s(I+1/2)) & (-s,m)
};

enum class NoiseLimit { adiabatic, diabatic };

struct AnalyticRates {
  double dephasing = 0.0;       // 1/T2 of the superposition
  double depolarization = 0.0;  // 1/T1 of the block holding the superposition, or of block m
  double depolarization_other = 0.0;  // 1/T1 of block m-1 where applicable
};

/// Closed-form Z-noise rates. For the block classes m is the upper block; for
/// the uncoupled classes `sign` picks the uncoupled level (+ for m = I+1/2)
/// and m is the two-dimensional block. Throws std::invalid_argument for
/// blocks that do not exist or are one-dimensional.
AnalyticRates analytic_rates(const SpinSystem& sys, double field, SuperpositionClass cls, HalfInt m,
                             NoiseLimit limit, double variance, Branch sign = Branch::plus);

/// Per-block depolarization 1/T1 = (alpha^2/2) sin^2 theta_m under diabatic Z noise.
double block_depolarization_rate(const SpinSystem& sys, double field, HalfInt m, double variance);

/// tr(sigma_z rho(t)) for a superposition of an upper level e and a lower
/// level g lying in different blocks whose populations relax at their own
/// block rates:
///   (p_e/2)(1 + exp(-rate_e t)) - (p_g/2)(1 + exp(-rate_g t)).
double mixed_polarization(double p_e, double rate_e, double p_g, double rate_g, double t);

}  // namespace donorspin

#endif
