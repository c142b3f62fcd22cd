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

#ifndef DONORSPIN_SPIN_SYSTEM_HPP
#define DONORSPIN_SPIN_SYSTEM_HPP

#include "donorspin/half_int.hpp"

namespace donorspin {

/// Electron spin S=1/2 coupled to a nuclear spin I by an isotropic contact
/// hyperfine interaction,
///
///     H0 = w0 Sz - w0 delta Iz + A S.I,   w0 = g muB B / hbar.
///
/// All energies are angular frequencies in rad/s.
struct SpinSystem {
  HalfInt nuclear_spin;
  double hyperfine = 0.0;     // A, rad/s
  double zeeman_ratio = 0.0;  // delta = w_I / w_0
  double g_factor = 2.0;

  int nuclear_dim() const { return nuclear_spin.twice + 1; }
  int dim() const { return 2 * nuclear_dim(); }
  double I() const { return nuclear_spin.value(); }

  // Reduced field w0/A.
  double omega0_tilde(double field) const;
};

/// Validates and builds a system from A/2pi in GHz.
/// Throws std::invalid_argument for I that is not a positive half-integer,
/// A <= 0, delta < 0 or g <= 0.
SpinSystem build_system(double nuclear_spin, double hyperfine_ghz, double zeeman_ratio,
                        double g_factor = 2.0003);

/// Bismuth donor in silicon: I=9/2, A/2pi=1.4754 GHz, delta=2.488e-4.
SpinSystem si_bi(double g_factor = 2.0003);
/// Phosphorus donor in silicon: I=1/2, A/2pi=117.53 MHz.
SpinSystem si_p(double g_factor = 1.9985);

/// w0 = g muB B / hbar. Throws std::invalid_argument for B < 0.
double field_to_omega0(const SpinSystem& sys, double field_tesla);
double omega0_to_field(const SpinSystem& sys, double omega0);
/// Field at which w0/A equals the given value.
double omega0_tilde_to_field(const SpinSystem& sys, double omega0_tilde);

}  // namespace donorspin

#endif
