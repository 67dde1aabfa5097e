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


#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "doctest.h"

using namespace fluxsquid;
namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "fluxsquid_cli_test";

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path write_config(const std::string& name, const Json& doc) {
  fs::create_directories(kRoot);
  const fs::path p = kRoot / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

// Runs the installed executable; returns its exit status.
int run(const std::string& args) {
  const std::string cmd = std::string(FLUXSQUID_EXE) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string out(const std::string& name) { return (kRoot / name).string(); }

}  // namespace

TEST_CASE("jc-star at d = 0 is zero on every grid point") {
  const auto cfg = write_config(
      "jc.json", {{"sweeps", {{"e_j_sigma_grid_ghz", {3.0, 5.0}}, {"d_grid", {0.0}}}}});
  REQUIRE(run("--config " + cfg.string() + " --out " + out("jc") + " jc-star") == 0);
  const std::string csv = slurp(kRoot / "jc" / "jc_star.csv");
  CHECK(csv == "e_j_sigma_ghz,d,jc_star_ghz,converged\n3,0,0,1\n5,0,0,1\n");
  const Json manifest = Json::parse(slurp(kRoot / "jc" / "manifest.json"));
  CHECK(manifest["status"] == "ok");
  CHECK(manifest["command"] == "jc-star");
  CHECK(fs::exists(kRoot / "jc" / "config.resolved.json"));
  // the resolved config reproduces the run
  const Json resolved = Json::parse(slurp(kRoot / "jc" / "config.resolved.json"));
  CHECK(dump_config(parse_config(resolved, true).config) == resolved);
}

TEST_CASE("outputs are byte identical across runs and worker counts") {
  const auto cfg = write_config(
      "det.json", {{"sweeps",
                    {{"flux_grid_phi0", {{"start", 0.45}, {"stop", 0.55}, {"points", 5}}},
                     {"e_j_sigma_grid_ghz", {2.0, 4.0, 6.0}},
                     {"d_grid", {0.0, 0.03}}}}});
  for (const std::string cmd : {"spectrum", "zz-map", "two-level"}) {
    CAPTURE(cmd);
    REQUIRE(run("--config " + cfg.string() + " --out " + out("w1") + " " + cmd) == 0);
    REQUIRE(run("--config " + cfg.string() + " --out " + out("w1b") + " " + cmd) == 0);
    REQUIRE(run("--workers 3 --config " + cfg.string() + " --out " + out("w3") + " " + cmd) == 0);
  }
  for (const std::string f : {"spectrum.csv", "zz_map.csv", "two_level.csv"}) {
    CAPTURE(f);
    const std::string a = slurp(kRoot / "w1" / f);
    CHECK(a.size() > 50);
    CHECK(a == slurp(kRoot / "w1b" / f));
    CHECK(a == slurp(kRoot / "w3" / f));
  }
}

TEST_CASE("failures give an exit code and error.json") {
  const auto bad = write_config("bad.json", {{"design", "levitating"}, {"squid", {{"d", 3.0}}}});
  CHECK(run("--config " + bad.string() + " --out " + out("bad") + " spectrum") == 2);
  const Json err = Json::parse(slurp(kRoot / "bad" / "error.json"));
  CHECK(err["status"] == "error");
  CHECK(err["kind"] == "config");
  const std::string msg = err.dump();
  CHECK(msg.find("design") != std::string::npos);
  CHECK(msg.find("squid: SQUID asymmetry") != std::string::npos);

  const auto unknown = write_config("unknown.json", {{"qubit_a", {{"e_j_ghz", 3.8}, {"foo", 1}}}});
  CHECK(run("--config " + unknown.string() + " --out " + out("u1") + " spectrum") == 0);
  CHECK(run("--strict --config " + unknown.string() + " --out " + out("u2") + " spectrum") == 2);
  CHECK(run("--config " + out("missing.json") + " --out " + out("m") + " spectrum") == 2);

  // gate dynamics are defined for the grounded design only
  CHECK(run("--design floating --out " + out("fl") + " gate-sim") == 3);
  CHECK(Json::parse(slurp(kRoot / "fl" / "error.json"))["kind"] == "domain");

  // command-line usage errors come from the argument parser
  CHECK(run("no-such-command") != 0);
  CHECK(run("--workers 0 spectrum") != 0);
}

TEST_CASE("error classification") {
  CHECK(cli::exit_code_for(ConfigError("x")) == 2);
  CHECK(cli::exit_code_for(IntegrationError("x")) == 3);
  CHECK(cli::exit_code_for(std::runtime_error("x")) == 4);
  CHECK(cli::error_kind(IntegrationError("x")) == "integration");
  CHECK(cli::error_kind(FrameError("x")) == "frame");
  CHECK(cli::error_kind(std::logic_error("x")) == "internal");
}

TEST_CASE("optimize reaches a high-fidelity coupler-only gate") {
  const auto cfg = write_config(
      "opt.json", {{"sweeps",
                    {{"x_grid_phi0", {0.465, 0.47}},
                     {"optimize", {{"t_g_min_ns", 9.0}, {"t_g_max_ns", 12.0}, {"bins", 2}}}}}});
  REQUIRE(run("--scheme coupler-only --d 0 --config " + cfg.string() + " --out " + out("opt") +
              " optimize") == 0);
  std::ifstream f(kRoot / "opt" / "optimize_points.csv");
  std::string line;
  std::getline(f, line);
  CHECK(line == "x,d,t_g_ns,error");
  double best = 1.0;
  int rows = 0;
  while (std::getline(f, line)) {
    ++rows;
    best = std::min(best, std::stod(line.substr(line.rfind(',') + 1)));
  }
  CHECK(rows == 2);
  CHECK(best <= 1e-4);
  CHECK(fs::exists(kRoot / "opt" / "optimize.csv"));
}
