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

// Single-mode Hamiltonians and circuit charging energies.
//
// Energies are E/h in GHz, fluxes in units of the flux quantum, and
// capacitances in fF throughout.

#include <string>

#include "fluxsquid/types.hpp"

namespace fluxsquid {

struct FluxoniumParams {
  double e_j = 0.0;
  double e_c = 0.0;
  double e_l = 0.0;
  double phi_ext = 0.5;

  void validate() const;
};

struct SquidParams {
  double e_j_sigma = 0.0;
  double d = 0.0;
  double phi_s = 0.5;
  double j_c = 0.0;

  double e_j1() const { return 0.5 * (1.0 + d) * e_j_sigma; }
  double e_j2() const { return 0.5 * (1.0 - d) * e_j_sigma; }

  /// Coefficient multiplying the cos(phi_-) coupling operator.
  double cos_coefficient() const;
  /// Coefficient multiplying the sin(phi_-) coupling operator.
  double sin_coefficient() const;

  void validate() const;
};

struct SloshingParams {
  double e_c_sl = 0.0;
  double n_g = 0.5;
  double j_sl = 0.0;

  void validate() const;
};

struct CapacitanceSet {
  double c = 0.0;
  double c_c = 0.0;
  double c_g = 0.0;
};

enum class ModeLabel { A, B, Sloshing };

std::string to_string(ModeLabel label);

/// A single circuit mode restricted to its lowest eigenstates.
///
/// All operators are expressed in the kept eigenbasis. `bare_hamiltonian` is
/// the part of the mode Hamiltonian that the composite assembly places in the
/// static term: diag(energies) for fluxonium modes, and only the projected
/// charging term for the sloshing mode (its Josephson part is carried by the
/// full SQUID coupling operator).
struct ModeOperators {
  ModeLabel label = ModeLabel::A;
  int n_keep = 0;
  VectorXd energies;
  MatrixXcd phi_op;
  MatrixXcd n_op;
  MatrixXcd exp_iphi;
  MatrixXcd exp_iphi_half;  // empty for the sloshing mode
  MatrixXcd bare_hamiltonian;
  MatrixXcd basis;  // kept eigenvectors in the underlying oscillator or charge basis
};

struct ConvergenceOptions {
  bool verify = true;
  double tolerance = 1e-9;  // GHz
};

inline constexpr int kDefaultFock = 110;
inline constexpr int kDefaultKeep = 4;
inline constexpr int kDefaultChargeCut = 15;
inline constexpr int kDefaultKeepSloshing = 5;

ModeOperators build_fluxonium_mode(const FluxoniumParams& params, int n_fock = kDefaultFock,
                                   int n_keep = kDefaultKeep, ModeLabel label = ModeLabel::A,
                                   ConvergenceOptions convergence = {});

ModeOperators build_sloshing_mode(const SloshingParams& params, const SquidParams& squid,
                                  int n_charge_cut = kDefaultChargeCut,
                                  int n_keep = kDefaultKeepSloshing,
                                  ConvergenceOptions convergence = {});

/// Largest change of a kept eigenenergy when the basis is enlarged by 50%.
double fluxonium_convergence_defect(const FluxoniumParams& params, int n_fock, int n_keep);
double sloshing_convergence_defect(const SloshingParams& params, const SquidParams& squid,
                                   int n_charge_cut, int n_keep);

/// Projection of exp(i * scale * phi) onto the kept fluxonium eigenbasis; the
/// exponential is formed in the full oscillator basis before projecting.
MatrixXcd fluxonium_phase_exponential(const FluxoniumParams& params, int n_fock, int n_keep,
                                      double scale);

/// Kept-block unitarity defect max(0, sigma_max - 1) of a projected exponential.
double unitarity_defect(const MatrixXcd& projected_exponential);

/// Oscillator-basis phase and charge operators (unprojected), n_fock x n_fock.
struct OscillatorOperators {
  MatrixXd phi;
  MatrixXcd n;
};
OscillatorOperators oscillator_operators(double e_c, double e_l, int n_fock);

struct GroundedCharging {
  double e_c;
  double j_c;
};

struct FloatingCharging {
  double e_c;
  double e_c_sl;
  double j_c;
  double j_sl;
};

/// e^2 / (h * 1 fF) in GHz.
double charging_unit_ghz();

GroundedCharging grounded_charging_energies(const CapacitanceSet& caps);
FloatingCharging floating_charging_energies(const CapacitanceSet& caps);

/// Node capacitance matrix of the floating circuit, node order (1, 2, 3, 4).
Eigen::Matrix4d floating_node_capacitance(const CapacitanceSet& caps);

/// Node-to-mode map: rows give (phi_A, phi_B, phi_sl, phi_Sigma).
Eigen::Matrix4d floating_mode_transform();

/// K = (M^-1)^T C M^-1 for the fixed floating mode transform M.
Eigen::Matrix4d transform_capacitance_matrix(const Eigen::Matrix4d& c_node);

}  // namespace fluxsquid
