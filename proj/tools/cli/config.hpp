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

#ifndef DONORSPIN_CLI_CONFIG_HPP
#define DONORSPIN_CLI_CONFIG_HPP

#include <complex>
#include <filesystem>
#include <istream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>

namespace donorspin::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Physical dimension of a config value. Values are returned in SI with
/// angular frequencies in rad/s.
enum class Dimension {
  field,         // T, mT
  frequency,     // GHz, MHz, kHz, Hz (cyclic) or rad/s
  time,          // s, ms, us, ns
  variance,      // rad^2/s^2, s^-2 or (2pi MHz)^2
  adiabaticity,  // s^2, us^2, ns^2
  angle,         // rad, deg, pi
};

/// "0.188 T" -> 0.188. Throws ConfigError for a missing or foreign unit.
double parse_quantity(const std::string& text, Dimension dim);

/// Plain number without a unit.
double parse_number(const std::string& text);

/// "12:0.6 8:0.8" or "8:0.6:-0.8" (label:re[:im]).
std::vector<std::pair<int, std::complex<double>>> parse_amplitudes(const std::string& text);

/// "12-9" -> {12, 9}.
std::pair<int, int> parse_pair(const std::string& text);

/// Whitespace or comma separated words.
std::vector<std::string> parse_list(const std::string& text);

/// INI file with sections [system], [levels], [spectrum], [resonances],
/// [rabi], [lindblad] and [gates]. Sections and keys outside the schema are
/// rejected on load; keys a command leaves unread are rejected by finish().
class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(std::istream& in, const std::string& origin = "<config>");

  bool has(const std::string& section, const std::string& key) const;
  bool has_section(const std::string& section) const;

  std::string text(const std::string& section, const std::string& key) const;
  std::optional<std::string> optional_text(const std::string& section, const std::string& key) const;
  double quantity(const std::string& section, const std::string& key, Dimension dim) const;
  std::optional<double> optional_quantity(const std::string& section, const std::string& key,
                                          Dimension dim) const;
  double number(const std::string& section, const std::string& key) const;
  std::optional<double> optional_number(const std::string& section, const std::string& key) const;
  int integer(const std::string& section, const std::string& key) const;
  std::optional<int> optional_integer(const std::string& section, const std::string& key) const;

  /// Throws ConfigError naming the first key of `section` that was never read.
  void finish(const std::string& section) const;

  const std::string& origin() const { return origin_; }

 private:
  std::string location(const std::string& section, const std::string& key) const;

  boost::property_tree::ptree tree_;
  std::string origin_;
  mutable std::set<std::string> used_;
};

}  // namespace donorspin::cli

#endif
