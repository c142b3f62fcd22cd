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

#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "config.hpp"

namespace {

constexpr int kFailed = 1;
constexpr int kBadInput = 2;

}  // namespace

int main(int argc, char** argv) {
  namespace cli = donorspin::cli;
  CLI::App app{"Spectra, driven dynamics and noise of a donor electron coupled to its nucleus"};
  app.require_subcommand(1);
  std::string config_path;
  std::string out_dir = ".";
  bool quiet = false;
  for (const std::string& name : cli::command_names()) {
    CLI::App* sub = app.add_subcommand(name, fmt::format("run the [{}] section of a config file", name));
    sub->add_option("config", config_path, "INI config file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--output-dir", out_dir, "directory for relative output paths");
    sub->add_flag("-q,--quiet", quiet, "do not list written files");
  }
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    cli::Config config = cli::Config::load(config_path);
    cli::CommandResult result = cli::run_command(command, config, out_dir);
    if (!quiet) {
      for (const auto& path : result.written) fmt::print("wrote {}\n", path.string());
    }
    for (const std::string& e : result.errors) fmt::print(stderr, "error: {}\n", e);
    return result.ok() ? 0 : kFailed;
  } catch (const cli::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kBadInput;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return kFailed;
  }
}
