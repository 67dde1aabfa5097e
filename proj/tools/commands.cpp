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


#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include "fluxsquid/effective_model.hpp"
#include "fluxsquid/parallel.hpp"

namespace fluxsquid::cli {

namespace fs = std::filesystem;

namespace {

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::vector<std::string>& header) : out_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
};

std::string fmt(double v) { return format_double(v); }

// Rounded to 12 significant digits so JSON reports match the CSV precision.
double r12(double v) { return std::isfinite(v) ? std::stod(format_double(v)) : v; }

template <typename Fn>
void with_context(const std::string& where, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  } catch (const LabelingError& e) {
    throw LabelingError(where + ": " + e.what());
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(where + ": " + e.what());
  } catch (const IntegrationError& e) {
    throw IntegrationError(where + ": " + e.what());
  } catch (const ExtractionError& e) {
    throw ExtractionError(where + ": " + e.what());
  } catch (const FrameError& e) {
    throw FrameError(where + ": " + e.what());
  } catch (const AssemblyError& e) {
    throw AssemblyError(where + ": " + e.what());
  } catch (const DomainError& e) {
    throw DomainError(where + ": " + e.what());
  }
}

std::vector<std::vector<double>> chunks(const std::vector<double>& v, int workers) {
  const std::size_t size = static_cast<std::size_t>(std::max(1, workers));
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < v.size(); i += size) {
    out.emplace_back(v.begin() + i, v.begin() + std::min(v.size(), i + size));
  }
  return out;
}

GateOptions gate_options(const SimulationConfig& cfg) {
  GateOptions o;
  o.basis = cfg.gate.basis;
  o.integrator = cfg.integrator;
  o.theta = cfg.gate.theta;
  return o;
}

CompositeSystem gate_system(const SimulationConfig& cfg, double d) {
  if (cfg.design != Design::Grounded) {
    throw DomainError("gate simulations are implemented for the grounded design only");
  }
  CircuitSpec spec = cfg.circuit;
  spec.squid.d = d;
  spec.squid.phi_s = cfg.gate.scheme_settings().phi_s_off;
  return assemble(spec, Design::Grounded);
}

void run_spectrum(const SimulationConfig& cfg, RunContext& ctx, std::vector<std::string>& files) {
  const auto table =
      spectrum_vs_flux(cfg.circuit, cfg.design, cfg.sweeps.flux_grid, ctx.workers);
  CsvWriter csv(ctx.out_dir / "spectrum.csv",
                {"phi_s_phi0", "level", "l", "m", "n", "energy_ghz", "overlap"});
  files.push_back("spectrum.csv");
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto& s = table[k];
    for (int i = 0; i < s.energies.size(); ++i) {
      const auto& lab = s.labels[i];
      csv.row({fmt(cfg.sweeps.flux_grid[k]), std::to_string(i), std::to_string(lab[0]),
               std::to_string(lab[1]), std::to_string(lab[2]), fmt(s.energies(i)),
               fmt(s.overlaps[i])});
    }
  }
}

void run_zz_map(const SimulationConfig& cfg, RunContext& ctx, std::vector<std::string>& files) {
  CsvWriter csv(ctx.out_dir / "zz_map.csv", {"e_j_sigma_ghz", "d", "zeta_ghz"});
  files.push_back("zz_map.csv");
  for (double ej : cfg.sweeps.e_j_sigma_grid) {
    std::vector<std::vector<ZzResult>> row;
    with_context("zz-map at e_j_sigma_ghz=" + fmt(ej), [&] {
      row = zz_map(cfg.circuit, {ej}, cfg.sweeps.d_grid, cfg.design, ctx.workers);
    });
    for (std::size_t j = 0; j < cfg.sweeps.d_grid.size(); ++j) {
      csv.row({fmt(ej), fmt(cfg.sweeps.d_grid[j]), fmt(row[0][j].zeta)});
    }
    csv.flush();
  }
}

void run_jc_star(const SimulationConfig& cfg, RunContext& ctx, std::vector<std::string>& files) {
  if (cfg.design != Design::Grounded) {
    throw DomainError("the J_c* search is defined for the grounded design");
  }
  CsvWriter csv(ctx.out_dir / "jc_star.csv", {"e_j_sigma_ghz", "d", "jc_star_ghz", "converged"});
  files.push_back("jc_star.csv");
  const auto& d_grid = cfg.sweeps.d_grid;
  for (double ej : cfg.sweeps.e_j_sigma_grid) {
    std::vector<JcStarResult> row(d_grid.size());
    with_context("jc-star at e_j_sigma_ghz=" + fmt(ej), [&] {
      parallel_for(d_grid.size(), ctx.workers, [&](std::size_t j) {
        row[j] = find_jc_star(cfg.circuit, ej, d_grid[j], cfg.jc_star);
      });
    });
    for (std::size_t j = 0; j < d_grid.size(); ++j) {
      const auto& r = row[j];
      csv.row({fmt(ej), fmt(d_grid[j]), fmt(r.converged ? r.j_c_star : r.best_j_c),
               r.converged ? "1" : "0"});
    }
    csv.flush();
  }
}

void run_two_level(const SimulationConfig& cfg, RunContext& ctx, std::vector<std::string>& files) {
  if (cfg.design != Design::Grounded) {
    throw DomainError("the two-level reduction is defined for the grounded design");
  }
  const auto& c = cfg.circuit;
  const auto mode_a = build_fluxonium_mode(c.qubit_a, c.basis.n_fock, c.basis.n_keep, ModeLabel::A);
  const auto mode_b = build_fluxonium_mode(c.qubit_b, c.basis.n_fock, c.basis.n_keep, ModeLabel::B);
  CsvWriter csv(ctx.out_dir / "two_level.csv",
                {"phi_s_phi0", "omega_a_ghz", "omega_b_ghz", "a_x_a", "a_x_b", "g_sq_ghz",
                 "g_sq_bare_ghz", "g_sq_asym_ghz", "g_c_ghz", "delta_sq_a_ghz", "delta_sq_b_ghz",
                 "exchange_projected_ghz", "gap_projected_ghz"});
  files.push_back("two_level.csv");
  for (double phi : cfg.sweeps.flux_grid) {
    SquidParams squid = c.squid;
    squid.phi_s = phi;
    const auto m = reduce_to_two_level(c.qubit_a, c.qubit_b, squid, mode_a, mode_b);
    csv.row({fmt(phi), fmt(m.omega_a), fmt(m.omega_b), fmt(m.a_x_a), fmt(m.a_x_b), fmt(m.g_sq),
             fmt(m.g_sq_bare), fmt(m.g_sq_asym), fmt(m.g_c), fmt(m.delta_sq_a),
             fmt(m.delta_sq_b), fmt(m.exchange_projected), fmt(single_excitation_gap(m))});
  }
}

void run_gate_sim(const SimulationConfig& cfg, RunContext& ctx, std::vector<std::string>& files) {
  const auto system = gate_system(cfg, cfg.circuit.squid.d);
  const auto settings = cfg.gate.scheme_settings();
  const auto schedule =
      make_schedule(settings, *cfg.gate.x, *cfg.gate.t_g_ns, cfg.circuit.qubit_a.phi_ext);
  const auto options = gate_options(cfg);
  const auto closed = simulate_gate_closed(system, schedule, options);
  const auto assessed = assess_closed_gate(closed, options.theta);

  Json report;
  report["scheme"] = to_string(cfg.gate.scheme);
  report["basis"] = to_string(cfg.gate.basis);
  report["x_phi0"] = *cfg.gate.x;
  report["t_g_ns"] = *cfg.gate.t_g_ns;
  report["t_r_ns"] = settings.t_r;
  report["d"] = cfg.circuit.squid.d;
  report["theta_target"] = r12(options.theta);
  report["theta_sim"] = r12(assessed.theta_sim);
  report["xi_sim"] = r12(assessed.xi_sim);
  report["frame_removed"] = assessed.frame_removed;
  Json leak = Json::array();
  for (double l : closed.leakage) leak.push_back(r12(l));
  report["leakage"] = leak;
  report["max_leakage"] = r12(closed.max_leakage);
  report["leakage_warning"] = closed.leakage_warning;
  Json fid = Json::array();
  for (const auto& noise : cfg.noise_models()) {
    Json entry;
    if (!noise) {
      entry = {{"t1_us", nullptr}, {"t_phi_us", nullptr}, {"fidelity", r12(assessed.fidelity)}};
    } else {
      double f = 0.0;
      with_context("gate-sim with t1_us=" + fmt(noise->t1_us), [&] {
        f = simulate_gate_open(system, schedule, *noise, closed, options).fidelity;
      });
      entry = {{"t1_us", noise->t1_us}, {"t_phi_us", noise->t_phi_us}, {"fidelity", r12(f)}};
    }
    fid.push_back(entry);
  }
  report["fidelity"] = fid;
  std::ofstream(ctx.out_dir / "gate_report.json") << report.dump(2) << '\n';
  files.push_back("gate_report.json");
}

std::vector<double> feasible_times(const std::vector<double>& grid, double t_r, RunContext& ctx) {
  std::vector<double> out;
  for (double t : grid) {
    if (t >= 2.0 * t_r) out.push_back(t);
  }
  if (out.size() < grid.size()) {
    ctx.warnings.push_back(std::to_string(grid.size() - out.size()) +
                           " gate times shorter than 2 t_r dropped");
  }
  return out;
}

void run_landscape(const SimulationConfig& cfg, RunContext& ctx, std::vector<std::string>& files) {
  const auto system = gate_system(cfg, cfg.circuit.squid.d);
  const auto settings = cfg.gate.scheme_settings();
  const auto t_grid = feasible_times(cfg.sweeps.t_g_grid, settings.t_r, ctx);
  const auto options = gate_options(cfg);
  CsvWriter csv(ctx.out_dir / "landscape.csv", {"x", "t_g_ns", "error"});
  files.push_back("landscape.csv");
  for (const auto& chunk : chunks(cfg.sweeps.x_grid, ctx.workers)) {
    std::vector<std::vector<double>> errs;
    with_context("landscape at x=" + fmt(chunk.front()), [&] {
      errs = error_landscape(system, settings, chunk, t_grid, options, ctx.workers);
    });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      for (std::size_t j = 0; j < t_grid.size(); ++j) {
        csv.row({fmt(chunk[i]), fmt(t_grid[j]), fmt(errs[i][j])});
      }
    }
    csv.flush();
  }
}

void run_optimize(const SimulationConfig& cfg, RunContext& ctx, std::vector<std::string>& files) {
  const auto settings = cfg.gate.scheme_settings();
  const auto options = gate_options(cfg);
  const auto& x_grid = cfg.sweeps.x_grid;
  CsvWriter points_csv(ctx.out_dir / "optimize_points.csv", {"x", "d", "t_g_ns", "error"});
  files.push_back("optimize_points.csv");
  std::vector<OptimizationPoint> points;
  for (double d : cfg.sweeps.d_values) {
    const auto system = gate_system(cfg, d);
    for (const auto& chunk : chunks(x_grid, ctx.workers)) {
      std::vector<OptimizationPoint> found(chunk.size());
      with_context("optimize at d=" + fmt(d) + ", x=" + fmt(chunk.front()), [&] {
        parallel_for(chunk.size(), ctx.workers, [&](std::size_t i) {
          found[i] = optimize_gate_time(system, settings, chunk[i], cfg.sweeps.optimize, options);
        });
      });
      for (const auto& p : found) {
        points_csv.row({fmt(p.x), fmt(p.d), fmt(p.t_g), fmt(p.error)});
        points.push_back(p);
      }
      points_csv.flush();
    }
  }
  const auto [lo, hi] = std::minmax_element(x_grid.begin(), x_grid.end());
  const auto bins = bin_points(points, *lo, *hi, cfg.sweeps.d_values, cfg.sweeps.optimize.bins);
  CsvWriter csv(ctx.out_dir / "optimize.csv",
                {"x_bin_center", "d", "err_mean", "err_min", "err_max"});
  files.push_back("optimize.csv");
  for (const auto& b : bins) {
    csv.row({fmt(b.x_center), fmt(b.d), fmt(b.err_mean), fmt(b.err_min), fmt(b.err_max)});
  }
}

}  // namespace

Json error_report(const std::string& command, const std::string& kind, const std::string& what) {
  Json j;
  j["status"] = "error";
  j["command"] = command;
  j["kind"] = kind;
  j["message"] = what;
  j["version"] = FLUXSQUID_VERSION;
  return j;
}

std::string error_kind(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "config";
  if (dynamic_cast<const LabelingError*>(&e)) return "labeling";
  if (dynamic_cast<const ConvergenceError*>(&e)) return "convergence";
  if (dynamic_cast<const IntegrationError*>(&e)) return "integration";
  if (dynamic_cast<const ExtractionError*>(&e)) return "extraction";
  if (dynamic_cast<const FrameError*>(&e)) return "frame";
  if (dynamic_cast<const AssemblyError*>(&e)) return "assembly";
  if (dynamic_cast<const DomainError*>(&e)) return "domain";
  if (dynamic_cast<const Error*>(&e)) return "runtime";
  return "internal";
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 2;
  if (dynamic_cast<const Error*>(&e)) return 3;
  return 4;
}

void run_command(const SimulationConfig& loaded, RunContext& ctx) {
  const auto t0 = std::chrono::steady_clock::now();
  const SimulationConfig cfg = resolve_scheme_defaults(loaded);
  fs::create_directories(ctx.out_dir);
  std::ofstream(ctx.out_dir / "config.resolved.json") << dump_config(cfg).dump(2) << '\n';
  std::vector<std::string> files{"config.resolved.json"};

  const std::string& cmd = ctx.command;
  if (cmd == "spectrum") {
    run_spectrum(cfg, ctx, files);
  } else if (cmd == "zz-map") {
    run_zz_map(cfg, ctx, files);
  } else if (cmd == "jc-star") {
    run_jc_star(cfg, ctx, files);
  } else if (cmd == "two-level") {
    run_two_level(cfg, ctx, files);
  } else if (cmd == "gate-sim") {
    run_gate_sim(cfg, ctx, files);
  } else if (cmd == "landscape") {
    run_landscape(cfg, ctx, files);
  } else if (cmd == "optimize") {
    run_optimize(cfg, ctx, files);
  } else {
    throw ConfigError("unknown command '" + cmd + "'");
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Json manifest;
  manifest["status"] = "ok";
  manifest["command"] = cmd;
  manifest["version"] = FLUXSQUID_VERSION;
  manifest["config_path"] = ctx.config_path;
  manifest["strict"] = ctx.strict;
  manifest["workers"] = ctx.workers;
  manifest["wall_time_s"] = r12(wall);
  manifest["tolerances"] = {{"integrator_rtol", cfg.integrator.rtol},
                            {"integrator_atol", cfg.integrator.atol},
                            {"mode_convergence_ghz", ConvergenceOptions{}.tolerance},
                            {"jc_star_ghz", cfg.jc_star.tolerance},
                            {"label_weight_floor", kLabelWeightFloor},
                            {"optimize_t_g_ns", cfg.sweeps.optimize.tolerance}};
  manifest["artifacts"] = files;
  manifest["warnings"] = ctx.warnings;
  manifest["config"] = dump_config(cfg);
  std::ofstream(ctx.out_dir / "manifest.json") << manifest.dump(2) << '\n';
}

}  // namespace fluxsquid::cli
