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

#ifndef DONORSPIN_CLI_COMMANDS_HPP
#define DONORSPIN_CLI_COMMANDS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "config.hpp"
#include "donorspin/spin_system.hpp"

namespace donorspin::cli {

struct CommandResult {
  std::vector<std::filesystem::path> written;
  std::vector<std::string> errors;  // one per failed computation
  bool ok() const { return errors.empty(); }
};

/// The [system] section: a preset (si_bi, si_p) or preset = custom with
/// nuclear_spin, hyperfine and zeeman_ratio. g_factor overrides either.
SpinSystem system_from(const Config& config);

/// Output paths in the config are resolved against `out_dir`.
CommandResult run_levels(const Config& config, const std::filesystem::path& out_dir);
CommandResult run_spectrum(const Config& config, const std::filesystem::path& out_dir);
CommandResult run_resonances(const Config& config, const std::filesystem::path& out_dir);
CommandResult run_rabi(const Config& config, const std::filesystem::path& out_dir);
CommandResult run_lindblad(const Config& config, const std::filesystem::path& out_dir);
CommandResult run_gates(const Config& config, const std::filesystem::path& out_dir);

const std::vector<std::string>& command_names();

/// Dispatches by name. Throws ConfigError for an unknown command.
CommandResult run_command(const std::string& name, const Config& config,
                          const std::filesystem::path& out_dir);

}  // namespace donorspin::cli

#endif
