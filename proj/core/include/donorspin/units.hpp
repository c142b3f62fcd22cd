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

#ifndef DONORSPIN_UNITS_HPP
#define DONORSPIN_UNITS_HPP

#include <numbers>

namespace donorspin {

// CODATA 2018.
inline constexpr double kBohrMagneton = 9.2740100783e-24;  // J/T
inline constexpr double kHbar = 1.054571817e-34;           // J s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Angular frequency (rad/s) <-> cyclic frequency.
constexpr double ghz_to_angular(double ghz) { return kTwoPi * ghz * 1e9; }
constexpr double angular_to_ghz(double omega) { return omega / kTwoPi * 1e-9; }
constexpr double mhz_to_angular(double mhz) { return kTwoPi * mhz * 1e6; }
constexpr double angular_to_mhz(double omega) { return omega / kTwoPi * 1e-6; }

constexpr double millitesla(double mt) { return mt * 1e-3; }

}  // namespace donorspin

#endif
