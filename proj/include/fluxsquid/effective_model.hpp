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

// Two-level reduction of the grounded design and the analytic SQUID
// expansion coefficients.

#include <array>
#include <map>
#include <vector>

#include "fluxsquid/composite.hpp"

namespace fluxsquid {

struct TwoLevelModel {
  double omega_a = 0.0;  // qubit gaps at the sweet spot (GHz)
  double omega_b = 0.0;
  double a_x_a = 0.0;  // |<0|phi|1>| (rad)
  double a_x_b = 0.0;
  double a_i_a = 0.0;  // <0|phi|0> (rad), -pi at the sweet spot
  double a_i_b = 0.0;
  double g_sq = 0.0;       // -(E_JSigma/4) a_x^A a_x^B cos(pi Phi_S)
  double g_sq_bare = 0.0;  // -E_JSigma cos(pi Phi_S), before the matrix-element factor
  double g_sq_asym = 0.0;  // -d E_JSigma sin(pi Phi_S)
  double g_c = 0.0;        // |J_c <0|n_A|1><0|n_B|1>|
  double g_c_signed = 0.0;  // J_c <0|n_A|1><0|n_B|1> with the imaginary units removed
  double delta_sq_a = 0.0;
  double delta_sq_b = 0.0;
  SquidParams squid;

  /// Computational block P H P of the full grounded Hamiltonian at
  /// squid.phi_s, basis order |00>, |01>, |10>, |11> of sweet-spot qubit states.
  Eigen::Matrix4cd projected_block;
  /// <01|H|10> of that block: the exchange coupling including all orders of
  /// the SQUID nonlinearity but no higher qubit levels.
  double exchange_projected = 0.0;
};

/// Both qubits must be parked at the sweet spot (phi_ext = 0.5 mod 1).
TwoLevelModel reduce_to_two_level(const FluxoniumParams& qa, const FluxoniumParams& qb,
                                  const SquidParams& squid, const ModeOperators& mode_a,
                                  const ModeOperators& mode_b);

/// g_SQ sin^2(1) XX + g_SQ^asym sin(2)/2 (X(x)I - I(x)X), basis |00>,|01>,|10>,|11>.
Eigen::Matrix4cd two_level_squid_hamiltonian(const TwoLevelModel& model);

/// Splitting of the two single-excitation levels predicted by the projected
/// two-level block (exact diagonalization of its middle 2x2).
double single_excitation_gap(const TwoLevelModel& model);

enum class ExpansionKind { Symmetric, Asymmetric };

/// Exponent tuple (p_A, p_B, p_sl) -> coefficient of phi_A^p_A phi_B^p_B phi_sl^p_sl.
using CoefficientTable = std::map<std::array<int, 3>, double>;

/// Mixed-product terms (at least two distinct modes) of cos(u) [symmetric] or
/// sin(u) [asymmetric] up to total degree `order`, with u = phi_A - phi_B for
/// the grounded design and u = phi_A/2 - phi_B/2 - phi_sl for the floating one.
/// The leading prefactor g_SQ (or g_SQ^asym) is not included.
CoefficientTable expansion_coefficients(int order, ExpansionKind kind, Design design);

}  // namespace fluxsquid
