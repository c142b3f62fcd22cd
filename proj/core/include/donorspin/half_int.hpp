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

#ifndef DONORSPIN_HALF_INT_HPP
#define DONORSPIN_HALF_INT_HPP

#include <compare>
#include <string>

namespace donorspin {

// A half-integer stored as twice its value, so 9/2 is HalfInt{9}.
struct HalfInt {
  int twice = 0;

  static constexpr HalfInt from_twice(int t) { return HalfInt{t}; }
  // Throws std::invalid_argument unless 2x is an integer.
  static HalfInt from_double(double x);

  constexpr double value() const { return 0.5 * twice; }
  constexpr bool is_integer() const { return twice % 2 == 0; }

  constexpr HalfInt operator-() const { return HalfInt{-twice}; }
  constexpr HalfInt operator+(HalfInt o) const { return HalfInt{twice + o.twice}; }
  constexpr HalfInt operator-(HalfInt o) const { return HalfInt{twice - o.twice}; }

  constexpr auto operator<=>(const HalfInt&) const = default;

  // "9/2", "-4", "0".
  std::string str() const;
};

inline constexpr HalfInt kHalf{1};

}  // namespace donorspin

#endif
