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

#include "donorspin/spin_system.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

#include "donorspin/units.hpp"

namespace donorspin {

HalfInt HalfInt::from_double(double x) {
  double t = 2.0 * x;
  double r = std::round(t);
  if (!std::isfinite(x) || std::abs(t - r) > 1e-9) {
    throw std::invalid_argument(fmt::format("{} is not a half-integer", x));
  }
  return HalfInt{static_cast<int>(r)};
}

std::string HalfInt::str() const {
  if (is_integer()) return fmt::format("{}", twice / 2);
  return fmt::format("{}/2", twice);
}

double SpinSystem::omega0_tilde(double field) const {
  return field_to_omega0(*this, field) / hyperfine;
}

SpinSystem build_system(double nuclear_spin, double hyperfine_ghz, double zeeman_ratio,
                        double g_factor) {
  HalfInt spin = HalfInt::from_double(nuclear_spin);
  if (spin.twice < 1) {
    throw std::invalid_argument(fmt::format("nuclear spin must be >= 1/2, got {}", nuclear_spin));
  }
  if (!(hyperfine_ghz > 0.0) || !std::isfinite(hyperfine_ghz)) {
    throw std::invalid_argument(fmt::format("hyperfine constant must be positive, got {} GHz",
                                            hyperfine_ghz));
  }
  if (!(zeeman_ratio >= 0.0) || !std::isfinite(zeeman_ratio)) {
    throw std::invalid_argument(fmt::format("zeeman ratio must be >= 0, got {}", zeeman_ratio));
  }
  if (!(g_factor > 0.0) || !std::isfinite(g_factor)) {
    throw std::invalid_argument(fmt::format("g factor must be positive, got {}", g_factor));
  }
  return SpinSystem{spin, ghz_to_angular(hyperfine_ghz), zeeman_ratio, g_factor};
}

SpinSystem si_bi(double g_factor) { return build_system(4.5, 1.4754, 2.488e-4, g_factor); }

SpinSystem si_p(double g_factor) { return build_system(0.5, 0.11753, 6.162e-4, g_factor); }

double field_to_omega0(const SpinSystem& sys, double field_tesla) {
  if (!(field_tesla >= 0.0) || !std::isfinite(field_tesla)) {
    throw std::invalid_argument(fmt::format("field must be finite and >= 0, got {} T", field_tesla));
  }
  return sys.g_factor * kBohrMagneton * field_tesla / kHbar;
}

double omega0_to_field(const SpinSystem& sys, double omega0) {
  if (!(omega0 >= 0.0) || !std::isfinite(omega0)) {
    throw std::invalid_argument(fmt::format("Zeeman frequency must be >= 0, got {}", omega0));
  }
  return omega0 * kHbar / (sys.g_factor * kBohrMagneton);
}

double omega0_tilde_to_field(const SpinSystem& sys, double omega0_tilde) {
  return omega0_to_field(sys, omega0_tilde * sys.hyperfine);
}

}  // namespace donorspin
