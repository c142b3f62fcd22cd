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

#ifndef DONORSPIN_CLI_OUTPUT_HPP
#define DONORSPIN_CLI_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace donorspin::cli {

/// 17 significant digits, enough to read back the same double.
std::string format_number(double x);

/// One CSV row of numbers.
std::string csv_row(const std::vector<double>& values);

/// Writes to a temporary file beside `path` and renames it into place, so
/// readers never see a partial file. Creates missing parent directories.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace donorspin::cli

#endif
