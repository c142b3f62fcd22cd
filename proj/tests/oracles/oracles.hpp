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

#ifndef DONORSPIN_TESTS_ORACLES_HPP
#define DONORSPIN_TESTS_ORACLES_HPP

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "donorspin/spin_system.hpp"

namespace donorspin::oracle {

struct DenseSpectrum {
  Eigen::VectorXd energies;  // ascending
  Eigen::MatrixXd vectors;   // columns
};

/// Dense diagonalization of H0 assembled from scratch (no library operators).
Eigen::MatrixXd hamiltonian(const SpinSystem& sys, double field);
DenseSpectrum diagonalize(const SpinSystem& sys, double field);

/// Labels by tracking eigenvectors from `start_field` to `field` over `steps`
/// steps, matching by largest overlap. Column k of the result is the state
/// carrying label k + 1 at `field`; entry k of `energies` its energy.
DenseSpectrum tracked_levels(const SpinSystem& sys, double field, double start_field, int steps);

/// Transition frequency between tracked labels a and b.
double dense_frequency(const SpinSystem& sys, double field, int label_a, int label_b, double start_field);

/// Electron Sx in the product basis, built from scratch.
Eigen::MatrixXd electron_sx(const SpinSystem& sys);

/// 16x16 generator of the four-level Z-noise problem on
/// {|+,m>, |-,m>, |+,m-1>, |-,m-1>}, column-stacked. Exchange terms carry
/// exp(-f (A R_n)^2); f = 0 is diabatic, f = infinity adiabatic.
Eigen::MatrixXcd reduced_z_generator(const SpinSystem& sys, double field, double m, double variance,
                                     double adiabaticity);

/// exp(L t) applied by dense matrix exponential.
Eigen::MatrixXcd dense_evolve(const Eigen::MatrixXcd& generator, const Eigen::MatrixXcd& rho0, double t);

/// Trace distance 1/2 ||a - b||_1 for Hermitian matrices.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

/// Composite trapezoid rule.
double trapezoid(const std::vector<double>& x, const std::vector<double>& y);

/// Block cos(theta_m) straight from the defining formula.
double cos_theta(const SpinSystem& sys, double omega0_tilde, double m);

}  // namespace donorspin::oracle

#endif
