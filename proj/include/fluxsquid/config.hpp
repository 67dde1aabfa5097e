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

// Run configuration: JSON in, validated SimulationConfig out. Key suffixes
// carry units (_ghz, _ns, _us, _phi0, _ff); bare names are rejected.

#include <optional>
#include <string>
#include <vector>

#include "fluxsquid/composite.hpp"
#include "fluxsquid/dynamics.hpp"
#include "fluxsquid/gates.hpp"
#include "fluxsquid/spectral_zz.hpp"
#include "json.hpp"

namespace fluxsquid {

using Json = nlohmann::ordered_json;

struct GateRunSettings {
  GateScheme scheme = GateScheme::CouplerOnly;
  ComputationalBasis basis = ComputationalBasis::Bare;
  std::optional<double> t_r_ns;  // scheme default when unset
  double phi_s_on = 0.49;        // detuned scheme coupler plateau
  std::optional<double> x;       // plateau of the swept flux (coupler or qubit A)
  std::optional<double> t_g_ns;
  double theta = kPi / 2.0;

  SchemeSettings scheme_settings() const;
};

struct SweepSettings {
  std::vector<double> flux_grid;         // spectrum, two-level
  std::vector<double> e_j_sigma_grid;    // zz-map, jc-star
  std::vector<double> d_grid;
  std::vector<double> x_grid;            // landscape, optimize; empty: scheme default
  std::vector<double> t_g_grid;          // landscape; empty: scheme default
  std::vector<double> d_values;          // optimize
  std::optional<double> t_g_min_ns;      // optimize window; unset: scheme default
  std::optional<double> t_g_max_ns;
  OptimizationSettings optimize;
};

struct SimulationConfig {
  Design design = Design::Grounded;
  CircuitSpec circuit;
  std::optional<CapacitanceSet> capacitances;  // fF; derived energies already applied
  JcStarOptions jc_star;
  IntegratorOptions integrator;
  std::vector<std::optional<double>> t1_us{std::nullopt, 100.0, 10.0};  // nullopt: unitary
  double t_phi_factor = 2.0;
  GateRunSettings gate;
  SweepSettings sweeps;

  std::vector<std::optional<NoiseModel>> noise_models() const;
};

struct LoadResult {
  SimulationConfig config;
  std::vector<std::string> warnings;  // unknown keys when not strict
};

/// Every problem found is listed in the thrown ConfigError, one per line.
LoadResult parse_config(const Json& doc, bool strict);
LoadResult load_config(const std::string& path, bool strict);

/// Fills every scheme-dependent default left unset (x, t_g, t_r, x and t_g
/// grids, optimization window). Coupler-only: x = 0.47, t_g = 11.4 ns,
/// window 5-20 ns. Detuned: x = 0.523, t_g = 17 ns, window 12-25 ns.
SimulationConfig resolve_scheme_defaults(SimulationConfig config);

/// Canonical form: every field explicit, grids expanded; parse(dump(c)) == c.
Json dump_config(const SimulationConfig& config);

std::vector<double> linspace(double start, double stop, int points);

/// 12 significant digits, locale independent.
std::string format_double(double value);

}  // namespace fluxsquid
