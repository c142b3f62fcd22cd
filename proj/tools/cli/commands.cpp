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

#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <numbers>
#include <thread>
#include <tuple>

#include <Eigen/Dense>
#include <fmt/format.h>
#include "json.hpp"

#include "donorspin/drive.hpp"
#include "donorspin/eigensystem.hpp"
#include "donorspin/fit.hpp"
#include "donorspin/gates.hpp"
#include "donorspin/lindblad.hpp"
#include "donorspin/spectra.hpp"
#include "donorspin/units.hpp"
#include "output.hpp"

namespace donorspin::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using cd = std::complex<double>;

constexpr double kGateTolerance = 1e-12;

// f(0..n-1) evaluated in contiguous chunks on the available cores; results
// keep index order.
template <class F>
auto parallel_map(std::size_t n, F f) -> std::vector<decltype(f(std::size_t{}))> {
  using R = decltype(f(std::size_t{}));
  std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::future<std::vector<R>>> futures;
  for (std::size_t w = 0; w < workers; ++w) {
    std::size_t lo = n * w / workers;
    std::size_t hi = n * (w + 1) / workers;
    futures.push_back(std::async(std::launch::async, [lo, hi, &f] {
      std::vector<R> part;
      for (std::size_t i = lo; i < hi; ++i) part.push_back(f(i));
      return part;
    }));
  }
  std::vector<R> out;
  out.reserve(n);
  for (auto& fut : futures) {
    for (R& r : fut.get()) out.push_back(std::move(r));
  }
  return out;
}

template <class E>
E choose(const std::string& what, const std::string& value, const std::map<std::string, E>& options) {
  auto it = options.find(value);
  if (it != options.end()) return it->second;
  std::string names;
  for (const auto& [k, v] : options) names += (names.empty() ? "" : ", ") + k;
  throw ConfigError(fmt::format("{} '{}' is not one of {}", what, value, names));
}

std::vector<double> field_grid(const Config& c, const std::string& section) {
  int points = c.integer(section, "points");
  if (points < 1) throw ConfigError(fmt::format("[{}] points must be at least 1", section));
  double lo = c.quantity(section, "field_min", Dimension::field);
  double hi = points == 1 ? c.optional_quantity(section, "field_max", Dimension::field).value_or(lo)
                          : c.quantity(section, "field_max", Dimension::field);
  if (lo < 0.0) throw ConfigError(fmt::format("[{}] field_min must be non-negative", section));
  if (points == 1 && hi != lo) throw ConfigError(fmt::format("[{}] a single point needs field_max = field_min", section));
  if (points > 1 && !(hi > lo)) throw ConfigError(fmt::format("[{}] field_max must exceed field_min", section));
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return grid;
}

KindFilter kinds_from(const Config& c, const std::string& section) {
  auto text = c.optional_text(section, "kinds");
  if (!text) return KindFilter::allowed_only();
  KindFilter k{false, false, false, false};
  for (const std::string& w : parse_list(*text)) {
    if (w == "all") k = KindFilter::all();
    else if (w == "forbidden") k.plus_forbidden = k.minus_forbidden = k.cross_forbidden = true;
    else if (w == "allowed") k.allowed = true;
    else if (w == "plus_forbidden") k.plus_forbidden = true;
    else if (w == "minus_forbidden") k.minus_forbidden = true;
    else if (w == "cross_forbidden") k.cross_forbidden = true;
    else throw ConfigError(fmt::format("[{}] kinds: unknown kind '{}'", section, w));
  }
  return k;
}

fs::path output_path(const Config& c, const std::string& section, const std::string& key, const fs::path& dir) {
  return dir / c.text(section, key);
}

void write_json(const fs::path& path, const json& j, CommandResult& r) {
  write_atomic(path, j.dump(2) + "\n");
  r.written.push_back(path);
}

void write_text(const fs::path& path, const std::string& s, CommandResult& r) {
  write_atomic(path, s);
  r.written.push_back(path);
}

json to_json(const Transition& t) {
  return {{"upper", t.upper},
          {"lower", t.lower},
          {"from_m", t.from_m.str()},
          {"from_m1", t.from_m1.str()},
          {"frequency_ghz", angular_to_ghz(t.frequency)},
          {"eta", t.eta},
          {"intensity", t.intensity},
          {"kind", to_string(t.kind)},
          {"handedness", t.handedness == Handedness::rh ? "rh" : "lh"}};
}

json to_json(const ResonancePoint& p) {
  json j{{"kind", to_string(p.kind)},
         {"m", p.m.str()},
         {"field_tesla", p.field},
         {"omega0_tilde", p.omega0_tilde}};
  if (p.m_lower) j["m_lower"] = p.m_lower->str();
  if (p.transition) j["transition"] = to_json(*p.transition);
  return j;
}

json to_json(const DecayFit& f, double variance) {
  double lifetime = f.lifetime();
  return {{"model", f.model == DecayModel::single_exponential ? "single_exponential" : "double_exponential"},
          {"rates_per_second", f.rates},
          {"amplitudes", f.amplitudes},
          {"offset", f.offset},
          {"residual_rms", f.residual_rms},
          {"converged", f.converged},
          {"lifetime_seconds", lifetime},
          {"lifetime_units_2_over_alpha2", lifetime * variance / 2.0}};
}

void check_label(const SpinSystem& sys, int label, const std::string& where) {
  if (label < 1 || label > sys.dim()) {
    throw ConfigError(fmt::format("{}: label {} outside 1..{}", where, label, sys.dim()));
  }
}

Eigen::VectorXcd state_from(const Config& c, const std::string& section, const SpinSystem& sys) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(sys.dim());
  for (auto [label, a] : parse_amplitudes(c.text(section, "initial"))) {
    check_label(sys, label, fmt::format("[{}] initial", section));
    psi(label - 1) += a;
  }
  if (psi.norm() == 0.0) throw ConfigError(fmt::format("[{}] initial state has zero norm", section));
  return psi.normalized();
}

std::pair<int, int> pair_from(const std::string& text, const SpinSystem& sys, const std::string& where) {
  std::pair<int, int> p;
  try {
    p = parse_pair(text);
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", where, e.what()));
  }
  check_label(sys, p.first, where);
  check_label(sys, p.second, where);
  return p;
}

NoiseSpec noise_from(const Config& c) {
  const std::string s = "lindblad";
  NoiseAxis axis = choose<NoiseAxis>("axis", c.text(s, "axis"),
                                     {{"x", NoiseAxis::x}, {"y", NoiseAxis::y}, {"z", NoiseAxis::z}});
  double variance = c.quantity(s, "variance", Dimension::variance);
  if (!(variance > 0.0)) throw ConfigError("[lindblad] variance must be positive");
  std::string regime = c.text(s, "regime");
  if (regime == "diabatic") return NoiseSpec::diabatic(axis, variance);
  if (regime == "adiabatic") return NoiseSpec::adiabatic(axis, variance);
  if (regime == "finite") {
    double f = c.quantity(s, "adiabaticity", Dimension::adiabaticity);
    if (f < 0.0) throw ConfigError("[lindblad] adiabaticity must be non-negative");
    return NoiseSpec::finite(axis, variance, f);
  }
  throw ConfigError(fmt::format("regime '{}' is not one of adiabatic, diabatic, finite", regime));
}

int population_index(const Liouvillian& L, int label) { return (label - 1) * (L.dim + 1); }

// Decay rate guess and the observable it belongs to.
struct Probe {
  bool coherence = true;
  int a = 0;
  int b = 0;
};

double probe_rate(const Liouvillian& L, const Probe& p) {
  if (p.coherence) return coherence_decay_guess(L, p.a, p.b);
  int k = population_index(L, p.a);
  return std::max(0.0, -L.generator(k, k).real());
}

Eigen::MatrixXcd probe_state(const Liouvillian& L, const Probe& p) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(L.dim);
  psi(p.a - 1) = 1.0;
  if (p.coherence) psi(p.b - 1) = 1.0;
  psi.normalize();
  return psi * psi.adjoint();
}

double probe_value(const Eigen::MatrixXcd& rho, const Probe& p) {
  return p.coherence ? coherence(rho, p.a, p.b) : polarization(rho, p.a, p.b);
}

}  // namespace

SpinSystem system_from(const Config& c) {
  const std::string s = "system";
  if (!c.has_section(s)) throw ConfigError("[system] section is required");
  std::string preset = c.text(s, "preset");
  auto g = c.optional_number(s, "g_factor");
  SpinSystem sys;
  if (preset == "si_bi" || preset == "si_p") {
    for (const char* key : {"nuclear_spin", "hyperfine", "zeeman_ratio"}) {
      if (c.has(s, key)) throw ConfigError(fmt::format("[system] {} conflicts with preset {}", key, preset));
    }
    if (preset == "si_bi") sys = g ? si_bi(*g) : si_bi();
    else sys = g ? si_p(*g) : si_p();
  } else if (preset == "custom") {
    double hyperfine = c.quantity(s, "hyperfine", Dimension::frequency);
    try {
      sys = build_system(c.number(s, "nuclear_spin"), angular_to_ghz(hyperfine), c.number(s, "zeeman_ratio"),
                         g.value_or(2.0003));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("[system] {}", e.what()));
    }
  } else {
    throw ConfigError(fmt::format("[system] preset '{}' is not one of si_bi, si_p, custom", preset));
  }
  c.finish(s);
  return sys;
}

CommandResult run_levels(const Config& c, const fs::path& dir) {
  const std::string s = "levels";
  SpinSystem sys = system_from(c);
  std::vector<double> grid = field_grid(c, s);
  fs::path out = output_path(c, s, "output", dir);
  auto crossings = c.optional_text(s, "crossings_output");
  c.finish(s);

  CommandResult r;
  std::vector<std::string> rows = parallel_map(grid.size(), [&](std::size_t i) {
    Eigen::VectorXd e = Eigensystem(sys, grid[i]).energies();
    std::vector<double> row{grid[i]};
    for (Eigen::Index k = 0; k < e.size(); ++k) row.push_back(angular_to_ghz(e(k)));
    return csv_row(row);
  });
  std::string csv = "B_tesla";
  for (int k = 1; k <= sys.dim(); ++k) csv += fmt::format(",E_{}", k);
  csv += '\n';
  for (const std::string& row : rows) csv += row;
  write_text(out, csv, r);

  if (crossings) {
    json list = json::array();
    for (const ResonancePoint& p : cancellation_points(sys)) {
      if (p.kind != ResonanceKind::avoided_crossing || p.field < grid.front() || p.field > grid.back()) continue;
      Eigensystem es(sys, p.field);
      int up = es.label(Branch::plus, p.m);
      int down = es.label(Branch::minus, p.m);
      list.push_back({{"m", p.m.str()},
                      {"field_tesla", p.field},
                      {"omega0_tilde", p.omega0_tilde},
                      {"labels", {up, down}},
                      {"gap_ghz", angular_to_ghz(es.level(up).energy - es.level(down).energy)}});
    }
    write_json(dir / *crossings, {{"avoided_crossings", list}}, r);
  }
  return r;
}

CommandResult run_spectrum(const Config& c, const fs::path& dir) {
  const std::string s = "spectrum";
  SpinSystem sys = system_from(c);
  double freq = c.quantity(s, "frequency", Dimension::frequency);
  std::vector<double> grid = field_grid(c, s);
  double width = c.quantity(s, "linewidth", Dimension::field);
  SpectrumShape shape = choose<SpectrumShape>(
      "shape", c.optional_text(s, "shape").value_or("absorption"),
      {{"absorption", SpectrumShape::absorption}, {"derivative", SpectrumShape::derivative}});
  KindFilter kinds = kinds_from(c, s);
  fs::path out = output_path(c, s, "output", dir);
  auto lines_out = c.optional_text(s, "lines_output");
  c.finish(s);

  CommandResult r;
  SpectrumTrace trace;
  try {
    trace = cw_spectrum(sys, angular_to_ghz(freq), grid, width * 1e3, shape, kinds);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("[spectrum] {}", e.what()));
  }
  std::string csv = "B_tesla,amplitude\n";
  for (std::size_t i = 0; i < trace.field_grid.size(); ++i) csv += csv_row({trace.field_grid[i], trace.amplitude[i]});
  write_text(out, csv, r);
  if (lines_out) {
    json lines = json::array();
    for (const ResonanceRoot& root : trace.lines) {
      json j = to_json(root.transition);
      j["field_tesla"] = root.field;
      lines.push_back(j);
    }
    write_json(dir / *lines_out,
               {{"frequency_ghz", trace.mw_frequency_ghz}, {"linewidth_tesla", trace.linewidth}, {"lines", lines}}, r);
  }
  return r;
}

CommandResult run_resonances(const Config& c, const fs::path& dir) {
  const std::string s = "resonances";
  SpinSystem sys = system_from(c);
  auto freq = c.optional_quantity(s, "frequency", Dimension::frequency);
  double lo = 0.0;
  double hi = 0.0;
  KindFilter kinds;
  if (freq) {
    lo = c.quantity(s, "field_min", Dimension::field);
    hi = c.quantity(s, "field_max", Dimension::field);
    if (lo < 0.0 || !(hi > lo)) throw ConfigError("[resonances] need 0 <= field_min < field_max");
    kinds = kinds_from(c, s);
  }
  fs::path out = output_path(c, s, "output", dir);
  c.finish(s);

  CommandResult r;
  json doc;
  json points = json::array();
  for (const ResonancePoint& p : cancellation_points(sys)) points.push_back(to_json(p));
  doc["cancellation_points"] = points;

  json extrema = json::array();
  for (int twice = -sys.nuclear_spin.twice + 1; twice <= sys.nuclear_spin.twice + 1; twice += 2) {
    for (TransitionKind kind : {TransitionKind::allowed, TransitionKind::plus_forbidden, TransitionKind::minus_forbidden}) {
      try {
        for (const ResonancePoint& p : df_dB_extrema(sys, {kind, HalfInt{twice}})) extrema.push_back(to_json(p));
      } catch (const std::invalid_argument&) {
        // Class does not exist for this m.
      }
    }
  }
  doc["frequency_extrema"] = extrema;

  if (freq) {
    ResonanceSearch search = resonance_fields(sys, angular_to_ghz(*freq), lo, hi, kinds);
    json roots = json::array();
    for (const ResonanceRoot& root : search.roots) {
      json j = to_json(root.transition);
      j["field_tesla"] = root.field;
      roots.push_back(j);
    }
    json missing = json::array();
    for (const auto& [a, b] : search.no_crossing) missing.push_back({a.str(), b.str()});
    doc["resonance_fields"] = {{"frequency_ghz", angular_to_ghz(*freq)},
                               {"field_min_tesla", lo},
                               {"field_max_tesla", hi},
                               {"roots", roots},
                               {"no_crossing", missing}};
  }
  write_json(out, doc, r);
  return r;
}

CommandResult run_rabi(const Config& c, const fs::path& dir) {
  const std::string s = "rabi";
  SpinSystem sys = system_from(c);
  double field = c.quantity(s, "field", Dimension::field);
  if (field < 0.0) throw ConfigError("[rabi] field must be non-negative");
  Eigensystem es(sys, field);

  PulseSpec pulse;
  pulse.amplitude = c.quantity(s, "amplitude", Dimension::frequency);
  pulse.axis = choose<DriveAxis>("axis", c.optional_text(s, "axis").value_or("x"),
                                 {{"x", DriveAxis::x}, {"y", DriveAxis::y}});
  pulse.polarization = choose<Polarization>(
      "polarization", c.optional_text(s, "polarization").value_or("linear"),
      {{"linear", Polarization::linear}, {"rh", Polarization::rh}, {"lh", Polarization::lh}});
  pulse.phase = c.optional_quantity(s, "phase", Dimension::angle).value_or(0.0);

  auto line_text = c.optional_text(s, "carrier_line");
  auto carrier = c.optional_quantity(s, "carrier", Dimension::frequency);
  if (line_text.has_value() == carrier.has_value()) {
    throw ConfigError("[rabi] give exactly one of carrier and carrier_line");
  }
  std::optional<TwoLevelModel> model;
  if (line_text) {
    auto [a, b] = pair_from(*line_text, sys, "[rabi] carrier_line");
    pulse.carrier = std::abs(es.level(a).energy - es.level(b).energy);
    try {
      model = reduce_two_level(es, a, b, pulse);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(fmt::format("[rabi] carrier_line: {}", e.what()));
    }
  } else {
    pulse.carrier = *carrier;
  }
  auto duration = c.optional_quantity(s, "duration", Dimension::time);
  if (!duration && !model) throw ConfigError("[rabi] duration is required with an explicit carrier");
  pulse.duration = duration ? *duration : model->pi_time;
  try {
    validate(pulse);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(fmt::format("[rabi] {}", e.what()));
  }
  Eigen::VectorXcd psi = state_from(c, s, sys);
  double end = c.optional_quantity(s, "end_time", Dimension::time).value_or(pulse.duration);
  int samples = c.optional_integer(s, "samples").value_or(201);
  if (samples < 2 || !(end > 0.0)) throw ConfigError("[rabi] need samples >= 2 and end_time > 0");
  fs::path out = output_path(c, s, "output", dir);
  auto summary = c.optional_text(s, "summary_output");
  c.finish(s);

  std::vector<double> times(samples);
  for (int i = 0; i < samples; ++i) times[i] = end * i / (samples - 1);

  CommandResult r;
  Trajectory traj;
  try {
    traj = propagate(es, pulse, psi, times);
  } catch (const StepSizeError& e) {
    r.errors.push_back(fmt::format("rabi: {} (worst local error {:.3g})", e.what(), e.worst_local_error()));
    return r;
  }
  std::string csv = "t_seconds";
  for (int k = 1; k <= sys.dim(); ++k) csv += fmt::format(",P_{}", k);
  csv += '\n';
  for (int i = 0; i < samples; ++i) {
    std::vector<double> row{traj.times[i]};
    for (int k = 0; k < sys.dim(); ++k) row.push_back(traj.populations(i, k));
    csv += csv_row(row);
  }
  write_text(out, csv, r);

  if (summary) {
    std::vector<double> last(traj.populations.cols());
    for (Eigen::Index k = 0; k < traj.populations.cols(); ++k) last[k] = traj.populations(samples - 1, k);
    json doc{{"field_tesla", field},
             {"carrier_ghz", angular_to_ghz(pulse.carrier)},
             {"amplitude_mhz", angular_to_mhz(pulse.amplitude)},
             {"duration_seconds", pulse.duration},
             {"step_seconds", traj.step},
             {"worst_local_error", traj.worst_local_error},
             {"final_populations", last}};
    if (model) {
      doc["two_level"] = {{"upper", model->upper},
                          {"lower", model->lower},
                          {"eta", model->eta},
                          {"rabi_rate_per_second", model->rabi_rate},
                          {"pi_time_seconds", model->pi_time},
                          {"rwa_warning", model->rwa_warning}};
    }
    write_json(dir / *summary, doc, r);
  }
  return r;
}

namespace {

CommandResult lindblad_trace(const Config& c, const fs::path& dir, const SpinSystem& sys, const NoiseSpec& noise,
                             Picture picture) {
  const std::string s = "lindblad";
  double field = c.quantity(s, "field", Dimension::field);
  Eigensystem es(sys, field);
  Liouvillian L = build_generator(es, {noise}, picture);
  Eigen::VectorXcd psi = state_from(c, s, sys);
  Probe probe;
  probe.coherence = choose<bool>("observable", c.text(s, "observable"), {{"coherence", true}, {"polarization", false}});
  std::tie(probe.a, probe.b) = pair_from(c.text(s, "pair"), sys, "[lindblad] pair");
  auto end = c.optional_quantity(s, "end_time", Dimension::time);
  int samples = c.optional_integer(s, "samples").value_or(200);
  if (samples < 10) throw ConfigError("[lindblad] samples must be at least 10");
  fs::path out = output_path(c, s, "output", dir);
  auto fit_out = c.optional_text(s, "fit_output");
  c.finish(s);

  double span = 0.0;
  if (end) {
    span = *end;
  } else {
    double rate = probe_rate(L, probe);
    if (!(rate > 0.0)) throw ConfigError("[lindblad] observable does not decay; give end_time");
    span = 5.0 / rate;
  }
  if (!(span > 0.0)) throw ConfigError("[lindblad] end_time must be positive");
  std::vector<double> t(samples);
  for (int i = 0; i < samples; ++i) t[i] = span * i / (samples - 1);

  CommandResult r;
  std::vector<double> y;
  std::string csv = "t_seconds,value\n";
  std::vector<Eigen::MatrixXcd> rhos = evolve_master(L, psi * psi.adjoint(), t);
  for (int i = 0; i < samples; ++i) {
    y.push_back(probe_value(rhos[i], probe));
    csv += csv_row({t[i], y.back()});
  }
  write_text(out, csv, r);
  if (fit_out) {
    DecayFit fit = fit_decay_auto(t, y);
    if (!fit.converged) r.errors.push_back("lindblad: decay fit did not converge");
    write_json(dir / *fit_out, to_json(fit, noise.variance), r);
  }
  return r;
}

CommandResult lindblad_sweep(const Config& c, const fs::path& dir, const SpinSystem& sys, const NoiseSpec& noise,
                             Picture picture) {
  const std::string s = "lindblad";
  std::vector<double> grid = field_grid(c, s);
  bool t2 = choose<bool>("quantity", c.text(s, "quantity"), {{"t2", true}, {"t1", false}});
  std::vector<Probe> probes;
  for (const std::string& w : parse_list(c.text(s, "pairs"))) {
    Probe p;
    p.coherence = t2;
    std::tie(p.a, p.b) = pair_from(w, sys, "[lindblad] pairs");
    probes.push_back(p);
  }
  if (probes.empty()) throw ConfigError("[lindblad] pairs is empty");
  int samples = c.optional_integer(s, "samples").value_or(200);
  if (samples < 10) throw ConfigError("[lindblad] samples must be at least 10");
  fs::path out = output_path(c, s, "output", dir);
  c.finish(s);

  struct Cell {
    double lifetime = 0.0;
    std::string error;
  };
  std::vector<std::vector<Cell>> table = parallel_map(grid.size(), [&](std::size_t i) {
    std::vector<Cell> cells;
    try {
      Eigensystem es(sys, grid[i]);
      Liouvillian L = build_generator(es, {noise}, picture);
      for (const Probe& p : probes) {
        double rate = probe_rate(L, p);
        if (rate <= 1e-12 * noise.variance) {
          cells.push_back({std::numeric_limits<double>::infinity(), {}});
          continue;
        }
        std::vector<double> t = fit_window(1.0 / rate, samples);
        std::vector<double> y;
        for (const Eigen::MatrixXcd& rho : evolve_master(L, probe_state(L, p), t)) y.push_back(probe_value(rho, p));
        DecayFit fit = fit_decay_auto(t, y);
        if (fit.converged) cells.push_back({fit.lifetime(), {}});
        else cells.push_back({std::numeric_limits<double>::quiet_NaN(), "fit did not converge"});
      }
    } catch (const std::exception& e) {
      cells.assign(probes.size(), {std::numeric_limits<double>::quiet_NaN(), e.what()});
    }
    return cells;
  });

  CommandResult r;
  std::string csv = "B_tesla,transition,T_seconds,T_units_2_over_alpha2\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const Cell& cell = table[i][k];
      csv += fmt::format("{},{}-{},{},{}\n", format_number(grid[i]), probes[k].a, probes[k].b,
                         format_number(cell.lifetime), format_number(cell.lifetime * noise.variance / 2.0));
      if (!cell.error.empty()) {
        r.errors.push_back(fmt::format("lindblad: B = {} T, {}-{}: {}", format_number(grid[i]), probes[k].a,
                                       probes[k].b, cell.error));
      }
    }
  }
  write_text(out, csv, r);
  return r;
}

CommandResult lindblad_spectrum(const Config& c, const fs::path& dir, const SpinSystem& sys, const NoiseSpec& noise,
                                Picture picture) {
  const std::string s = "lindblad";
  double field = c.quantity(s, "field", Dimension::field);
  fs::path out = output_path(c, s, "output", dir);
  c.finish(s);
  Eigensystem es(sys, field);
  Liouvillian L = build_generator(es, {noise}, picture);
  LiouvillianSpectrum spec = liouvillian_spectrum(L);
  json values = json::array();
  for (Eigen::Index k = 0; k < spec.eigenvalues.size(); ++k) {
    values.push_back({spec.eigenvalues(k).real(), spec.eigenvalues(k).imag()});
  }
  CommandResult r;
  write_json(out,
             {{"field_tesla", field},
              {"dimension", L.dim},
              {"blocks", L.blocks.size()},
              {"steady_states", spec.steady_states.size()},
              {"defective", spec.defective},
              {"eigenvalues", values}},
             r);
  return r;
}

}  // namespace

CommandResult run_lindblad(const Config& c, const fs::path& dir) {
  const std::string s = "lindblad";
  SpinSystem sys = system_from(c);
  std::string mode = c.text(s, "mode");
  NoiseSpec noise = noise_from(c);
  Picture picture = choose<Picture>("picture", c.optional_text(s, "picture").value_or("interaction"),
                                    {{"interaction", Picture::interaction}, {"schrodinger", Picture::schrodinger}});
  if (mode == "trace") return lindblad_trace(c, dir, sys, noise, picture);
  if (mode == "sweep") return lindblad_sweep(c, dir, sys, noise, picture);
  if (mode == "spectrum") return lindblad_spectrum(c, dir, sys, noise, picture);
  throw ConfigError(fmt::format("[lindblad] mode '{}' is not one of trace, sweep, spectrum", mode));
}

CommandResult run_gates(const Config& c, const fs::path& dir) {
  const std::string s = "gates";
  auto field = c.optional_quantity(s, "field", Dimension::field);
  std::optional<SpinSystem> sys;
  double amplitude = 0.0;
  double theta = 0.0;
  if (field) {
    sys = system_from(c);
    amplitude = c.quantity(s, "amplitude", Dimension::frequency);
    theta = c.optional_quantity(s, "theta", Dimension::angle).value_or(std::numbers::pi);
    if (!(amplitude > 0.0) || theta < 0.0) throw ConfigError("[gates] need amplitude > 0 and theta >= 0");
  }
  fs::path out = output_path(c, s, "output", dir);
  c.finish(s);

  CommandResult r;
  json doc;
  json ids = json::array();
  for (const GateSequence& seq : standard_identities()) {
    Verification v = verify_sequence(seq);
    bool pass = v.max_norm_error < kGateTolerance;
    if (!pass) r.errors.push_back(fmt::format("gates: {} error {:.3g}", seq.name, v.max_norm_error));
    ids.push_back({{"name", seq.name},
                   {"max_norm_error", v.max_norm_error},
                   {"fidelity", v.fidelity},
                   {"unitarity_error", v.unitarity_error},
                   {"phase", v.phase},
                   {"pass", pass}});
  }
  doc["tolerance"] = kGateTolerance;
  doc["identities"] = ids;

  if (field) {
    Eigensystem es(*sys, *field);
    LogicalMap map;
    try {
      map = logical_map(es);
    } catch (const std::domain_error& e) {
      r.errors.push_back(fmt::format("gates: {}", e.what()));
      write_json(out, doc, r);
      return r;
    }
    json pulses = json::array();
    for (Qubit control : {Qubit::electron, Qubit::nucleus}) {
      Qubit target = control == Qubit::electron ? Qubit::nucleus : Qubit::electron;
      for (int value : {0, 1}) {
        for (DriveAxis axis : {DriveAxis::x, DriveAxis::y}) {
          PulseSpec p = conditional_rotation_pulse(es, map, control, value, target, axis, theta, amplitude);
          auto line = conditional_rotation_line(es, map, control, value);
          pulses.push_back({{"control", control == Qubit::electron ? "electron" : "nucleus"},
                            {"control_value", value},
                            {"axis", axis == DriveAxis::x ? "x" : "y"},
                            {"line", line},
                            {"carrier_ghz", angular_to_ghz(p.carrier)},
                            {"polarization", p.polarization == Polarization::rh ? "rh" : "lh"},
                            {"phase_rad", p.phase},
                            {"duration_seconds", p.duration}});
        }
      }
    }
    doc["logical_map"] = {{"field_tesla", *field}, {"labels", map.labels}};
    doc["conditional_rotations"] = {{"theta_rad", theta}, {"amplitude_mhz", angular_to_mhz(amplitude)}, {"pulses", pulses}};
  }
  write_json(out, doc, r);
  return r;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"levels", "spectrum", "resonances", "rabi", "lindblad", "gates"};
  return names;
}

CommandResult run_command(const std::string& name, const Config& c, const fs::path& dir) {
  static const std::map<std::string, std::function<CommandResult(const Config&, const fs::path&)>> table{
      {"levels", run_levels},     {"spectrum", run_spectrum}, {"resonances", run_resonances},
      {"rabi", run_rabi},         {"lindblad", run_lindblad}, {"gates", run_gates},
  };
  auto it = table.find(name);
  if (it == table.end()) throw ConfigError(fmt::format("unknown command '{}'", name));
  if (!c.has_section(name)) throw ConfigError(fmt::format("{}: section [{}] is required", c.origin(), name));
  return it->second(c, dir);
}

}  // namespace donorspin::cli
