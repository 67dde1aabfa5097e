// Copyright 2026 The fluxsquid Authors
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


#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fluxsquid/config.hpp"

namespace fluxsquid::cli {

inline const std::vector<std::string> kCommands = {
    "spectrum", "zz-map", "jc-star", "two-level", "gate-sim", "landscape", "optimize"};

struct RunContext {
  std::string command;
  std::filesystem::path out_dir;
  int workers = 1;
  bool strict = false;
  std::string config_path;  // empty: built-in defaults
  std::vector<std::string> warnings;
};

/// Runs one command and writes its artifacts plus manifest.json into
/// ctx.out_dir. Throws on failure; rows finished before the failure stay on disk.
void run_command(const SimulationConfig& config, RunContext& ctx);

/// Machine-readable failure record; also written as error.json when possible.
Json error_report(const std::string& command, const std::string& kind, const std::string& what);

/// 2 config, 3 numerical/domain, 4 anything else.
int exit_code_for(const std::exception& e);
std::string error_kind(const std::exception& e);

}  // namespace fluxsquid::cli
