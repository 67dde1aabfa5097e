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

// Static ZZ at fixed coupler flux, (E_JSigma, d) maps, and the J_c* search.

#include <vector>

#include "fluxsquid/composite.hpp"

namespace fluxsquid {

struct ZzResult {
  double zeta = 0.0;  // GHz, signed
  Design design = Design::Grounded;
  SquidParams squid;
  double min_label_weight = 1.0;  // smallest |<bare|dressed>|^2 of the four states
};

/// Computational labels below this squared overlap make the ZZ ambiguous.
inline constexpr double kLabelWeightFloor = 0.5;

/// E_11 - E_01 - E_10 + E_00 (sloshing index 0 for the floating design).
ZzResult static_zz(const CircuitSpec& spec, Design design);
ZzResult static_zz(const CompositeSystem& system);

/// Row-major map over (e_j_sigma, d); entry [i][j] uses e_j_sigma_grid[i], d_grid[j].
/// J_c and J_sl are forced to zero.
std::vector<std::vector<ZzResult>> zz_map(const CircuitSpec& spec,
                                          const std::vector<double>& e_j_sigma_grid,
                                          const std::vector<double>& d_grid, Design design,
                                          int workers = 1);

struct JcStarOptions {
  double tolerance = 1e-6;  // GHz
  double j_max = 1.0;       // GHz
  int scan_points = 41;     // coarse bracketing scan over [0, j_max]
  double x_tolerance = 1e-9;
};

struct JcStarResult {
  bool converged = false;
  double j_c_star = 0.0;      // valid when converged
  double zeta = 0.0;          // signed zeta at the returned point
  double best_j_c = 0.0;      // best point seen, always filled
  double best_abs_zeta = 0.0;
};

/// Charge coupling that cancels the static ZZ of the grounded design at the
/// off-point for the given (e_j_sigma, d).
JcStarResult find_jc_star(const CircuitSpec& spec, double e_j_sigma, double d,
                          const JcStarOptions& options = {});

}  // namespace fluxsquid
