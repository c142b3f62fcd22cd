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

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <fmt/format.h>

namespace donorspin::cli {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s{
      {"system", {"preset", "nuclear_spin", "hyperfine", "zeeman_ratio", "g_factor"}},
      {"levels", {"field_min", "field_max", "points", "output", "crossings_output"}},
      {"spectrum",
       {"frequency", "field_min", "field_max", "points", "linewidth", "shape", "kinds", "output",
        "lines_output"}},
      {"resonances", {"frequency", "field_min", "field_max", "kinds", "output"}},
      {"rabi",
       {"field", "amplitude", "carrier", "carrier_line", "axis", "polarization", "phase", "duration",
        "initial", "end_time", "samples", "output", "summary_output"}},
      {"lindblad",
       {"mode", "field", "field_min", "field_max", "points", "axis", "regime", "variance", "adiabaticity",
        "picture", "initial", "observable", "pair", "pairs", "quantity", "end_time", "samples", "output",
        "fit_output"}},
      {"gates", {"field", "amplitude", "theta", "output"}},
  };
  return s;
}

struct Unit {
  const char* name;
  double scale;
};

const std::vector<Unit>& units(Dimension dim) {
  static const std::vector<Unit> field{{"T", 1.0}, {"mT", 1e-3}};
  static const std::vector<Unit> frequency{
      {"GHz", kTwoPi * 1e9}, {"MHz", kTwoPi * 1e6}, {"kHz", kTwoPi * 1e3}, {"Hz", kTwoPi}, {"rad/s", 1.0}};
  static const std::vector<Unit> time{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
  static const std::vector<Unit> variance{
      {"rad^2/s^2", 1.0}, {"s^-2", 1.0}, {"(2pi MHz)^2", (kTwoPi * 1e6) * (kTwoPi * 1e6)}};
  static const std::vector<Unit> adiabaticity{{"s^2", 1.0}, {"us^2", 1e-12}, {"ns^2", 1e-18}};
  static const std::vector<Unit> angle{{"rad", 1.0}, {"deg", std::numbers::pi / 180.0}, {"pi", std::numbers::pi}};
  switch (dim) {
    case Dimension::field: return field;
    case Dimension::frequency: return frequency;
    case Dimension::time: return time;
    case Dimension::variance: return variance;
    case Dimension::adiabaticity: return adiabaticity;
    case Dimension::angle: return angle;
  }
  return field;
}

// Leading number of `text`; `rest` receives the trimmed remainder.
double leading_number(const std::string& text, std::string& rest) {
  std::string t = boost::algorithm::trim_copy(text);
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  if (begin != end && *begin == '+') ++begin;
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || !std::isfinite(value)) throw ConfigError(fmt::format("'{}' is not a number", text));
  rest = boost::algorithm::trim_copy(std::string(ptr, end));
  return value;
}

std::string unit_names(Dimension dim) {
  std::vector<std::string> names;
  for (const Unit& u : units(dim)) names.emplace_back(u.name);
  return boost::algorithm::join(names, ", ");
}

}  // namespace

double parse_quantity(const std::string& text, Dimension dim) {
  std::string unit;
  double value = leading_number(text, unit);
  if (unit.empty()) throw ConfigError(fmt::format("'{}' needs a unit (one of {})", text, unit_names(dim)));
  for (const Unit& u : units(dim)) {
    if (unit == u.name) return value * u.scale;
  }
  throw ConfigError(fmt::format("unit '{}' in '{}' is not one of {}", unit, text, unit_names(dim)));
}

double parse_number(const std::string& text) {
  std::string rest;
  double value = leading_number(text, rest);
  if (!rest.empty()) throw ConfigError(fmt::format("'{}' must be a plain number", text));
  return value;
}

std::vector<std::pair<int, std::complex<double>>> parse_amplitudes(const std::string& text) {
  std::vector<std::pair<int, std::complex<double>>> out;
  for (const std::string& word : parse_list(text)) {
    std::vector<std::string> parts;
    boost::algorithm::split(parts, word, boost::algorithm::is_any_of(":"));
    if (parts.size() < 2 || parts.size() > 3) {
      throw ConfigError(fmt::format("amplitude '{}' must be label:re or label:re:im", word));
    }
    double label = parse_number(parts[0]);
    if (label != std::floor(label) || label < 1) throw ConfigError(fmt::format("bad label in '{}'", word));
    double im = parts.size() == 3 ? parse_number(parts[2]) : 0.0;
    out.emplace_back(static_cast<int>(label), std::complex<double>(parse_number(parts[1]), im));
  }
  if (out.empty()) throw ConfigError("no amplitudes given");
  return out;
}

std::pair<int, int> parse_pair(const std::string& text) {
  std::vector<std::string> parts;
  boost::algorithm::split(parts, boost::algorithm::trim_copy(text), boost::algorithm::is_any_of("-"));
  if (parts.size() != 2) throw ConfigError(fmt::format("'{}' is not a label pair like 12-9", text));
  double a = parse_number(parts[0]);
  double b = parse_number(parts[1]);
  if (a != std::floor(a) || b != std::floor(b) || a < 1 || b < 1 || a == b) {
    throw ConfigError(fmt::format("'{}' is not a pair of distinct labels", text));
  }
  return {static_cast<int>(a), static_cast<int>(b)};
}

std::vector<std::string> parse_list(const std::string& text) {
  std::vector<std::string> words;
  std::string t = boost::algorithm::trim_copy(text);
  if (t.empty()) return words;
  boost::algorithm::split(words, t, boost::algorithm::is_any_of(", \t"), boost::algorithm::token_compress_on);
  std::erase_if(words, [](const std::string& w) { return w.empty(); });
  return words;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config '{}'", path.string()));
  return parse(in, path.string());
}

Config Config::parse(std::istream& in, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  try {
    boost::property_tree::ini_parser::read_ini(in, c.tree_);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(fmt::format("{}: line {}: {}", origin, e.line(), e.message()));
  }
  for (const auto& [section, body] : c.tree_) {
    if (body.empty()) throw ConfigError(fmt::format("{}: key '{}' is outside any section", origin, section));
    auto known = schema().find(section);
    if (known == schema().end()) throw ConfigError(fmt::format("{}: unknown section [{}]", origin, section));
    for (const auto& [key, value] : body) {
      if (!known->second.contains(key)) {
        throw ConfigError(fmt::format("{}: unknown key '{}' in [{}]", origin, key, section));
      }
    }
  }
  return c;
}

std::string Config::location(const std::string& section, const std::string& key) const {
  return fmt::format("{}: [{}] {}", origin_, section, key);
}

bool Config::has_section(const std::string& section) const {
  return tree_.get_child_optional(boost::property_tree::ptree::path_type(section, '\0')).has_value();
}

bool Config::has(const std::string& section, const std::string& key) const {
  auto s = tree_.get_child_optional(boost::property_tree::ptree::path_type(section, '\0'));
  return s && s->get_child_optional(boost::property_tree::ptree::path_type(key, '\0'));
}

std::optional<std::string> Config::optional_text(const std::string& section, const std::string& key) const {
  if (!has(section, key)) return std::nullopt;
  used_.insert(section + '\n' + key);
  return boost::algorithm::trim_copy(tree_.get_child(boost::property_tree::ptree::path_type(section, '\0'))
                                         .get<std::string>(boost::property_tree::ptree::path_type(key, '\0')));
}

std::string Config::text(const std::string& section, const std::string& key) const {
  auto v = optional_text(section, key);
  if (!v) throw ConfigError(fmt::format("{} is required", location(section, key)));
  return *v;
}

std::optional<double> Config::optional_quantity(const std::string& section, const std::string& key,
                                                Dimension dim) const {
  auto v = optional_text(section, key);
  if (!v) return std::nullopt;
  try {
    return parse_quantity(*v, dim);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", location(section, key), e.what()));
  }
}

double Config::quantity(const std::string& section, const std::string& key, Dimension dim) const {
  auto v = optional_quantity(section, key, dim);
  if (!v) throw ConfigError(fmt::format("{} is required", location(section, key)));
  return *v;
}

std::optional<double> Config::optional_number(const std::string& section, const std::string& key) const {
  auto v = optional_text(section, key);
  if (!v) return std::nullopt;
  try {
    return parse_number(*v);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", location(section, key), e.what()));
  }
}

double Config::number(const std::string& section, const std::string& key) const {
  auto v = optional_number(section, key);
  if (!v) throw ConfigError(fmt::format("{} is required", location(section, key)));
  return *v;
}

std::optional<int> Config::optional_integer(const std::string& section, const std::string& key) const {
  auto v = optional_number(section, key);
  if (!v) return std::nullopt;
  if (*v != std::floor(*v) || std::abs(*v) > 1e9) {
    throw ConfigError(fmt::format("{} must be an integer", location(section, key)));
  }
  return static_cast<int>(*v);
}

int Config::integer(const std::string& section, const std::string& key) const {
  auto v = optional_integer(section, key);
  if (!v) throw ConfigError(fmt::format("{} is required", location(section, key)));
  return *v;
}

void Config::finish(const std::string& section) const {
  auto s = tree_.get_child_optional(boost::property_tree::ptree::path_type(section, '\0'));
  if (!s) return;
  for (const auto& [key, value] : *s) {
    if (!used_.contains(section + '\n' + key)) {
      throw ConfigError(fmt::format("{} is not used by this command", location(section, key)));
    }
  }
}

}  // namespace donorspin::cli
