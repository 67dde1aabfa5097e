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


// fluxsquid command-line driver.

#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"

using namespace fluxsquid;

int main(int argc, char** argv) {
  CLI::App app{"Two fluxonium qubits with a galvanic dc-SQUID coupler"};
  app.set_version_flag("--version", std::string(FLUXSQUID_VERSION));
  app.require_subcommand(1);

  cli::RunContext ctx;
  std::string out = "out";
  std::string scheme, basis, design;
  double d = 0.0;
  app.add_option("--config", ctx.config_path, "JSON config (built-in reference circuit if omitted)");
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--workers", ctx.workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--strict", ctx.strict, "reject unknown config keys");
  app.add_option("--design", design, "override design")->check(CLI::IsMember({"grounded", "floating"}));
  auto* d_opt = app.add_option("--d", d, "override SQUID asymmetry (optimize: the only d value)");
  app.add_option("--scheme", scheme, "gate scheme")
      ->check(CLI::IsMember({"coupler-only", "detuned"}));
  app.add_option("--basis", basis, "computational basis")->check(CLI::IsMember({"bare", "dressed"}));
  app.fallthrough();

  const std::map<std::string, std::string> help = {
      {"spectrum", "labeled levels versus coupler flux"},
      {"zz-map", "static ZZ over E_JSigma and d at the off point"},
      {"jc-star", "capacitive coupling that cancels the static ZZ"},
      {"two-level", "projected two-qubit model versus coupler flux"},
      {"gate-sim", "one gate: angles, leakage, fidelity per noise setting"},
      {"landscape", "gate error over plateau flux and gate time"},
      {"optimize", "best gate time per plateau flux, binned"}};
  for (const auto& name : cli::kCommands) app.add_subcommand(name, help.at(name));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  ctx.command = app.get_subcommands().front()->get_name();
  ctx.out_dir = out;

  try {
    LoadResult loaded = ctx.config_path.empty() ? parse_config(Json::object(), ctx.strict)
                                                : load_config(ctx.config_path, ctx.strict);
    ctx.warnings = loaded.warnings;
    auto& cfg = loaded.config;
    if (!design.empty()) cfg.design = design_from_string(design);
    if (!scheme.empty()) cfg.gate.scheme = scheme_from_string(scheme);
    if (!basis.empty()) cfg.gate.basis = basis_from_string(basis);
    if (*d_opt) {
      cfg.circuit.squid.d = d;
      cfg.sweeps.d_values = {d};
    }
    for (const auto& w : ctx.warnings) std::cerr << "warning: " << w << '\n';
    cli::run_command(cfg, ctx);
    std::cout << "wrote " << ctx.out_dir.string() << '\n';
    return 0;
  } catch (const std::exception& e) {
    const Json report = cli::error_report(ctx.command, cli::error_kind(e), e.what());
    std::cerr << report.dump() << '\n';
    std::error_code ec;
    std::filesystem::create_directories(ctx.out_dir, ec);
    if (!ec) std::ofstream(ctx.out_dir / "error.json") << report.dump(2) << '\n';
    return cli::exit_code_for(e);
  }
}
