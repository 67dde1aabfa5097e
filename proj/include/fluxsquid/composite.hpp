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

// Composite Hamiltonians of the two SQUID-coupled fluxonium designs.

#include <array>
#include <vector>

#include "fluxsquid/circuit.hpp"
#include "fluxsquid/types.hpp"

namespace fluxsquid {

struct BasisSizes {
  int n_fock = kDefaultFock;
  int n_keep = kDefaultKeep;
  int n_charge_cut = kDefaultChargeCut;
  int n_keep_sl = kDefaultKeepSloshing;
};

/// Everything needed to build either design at a given coupler flux.
struct CircuitSpec {
  FluxoniumParams qubit_a{3.8, 1.0, 1.0, 0.5};
  FluxoniumParams qubit_b{3.2, 1.0, 1.0, 0.5};
  SquidParams squid{7.0, 0.0, 0.5, 0.0};
  SloshingParams sloshing{3.4, 0.5, 0.0};
  BasisSizes basis;
};

/// Hamiltonian pieces in the tensor product of kept single-mode bases.
///
/// The full Hamiltonian at coupler flux phi_s is
///   h_static + cos_coefficient(phi_s) * op_cos + sin_coefficient(phi_s) * op_sin
/// with op_cos/op_sin the exact projected cos/sin of the SQUID junction phase.
struct CompositeSystem {
  Design design = Design::Grounded;
  std::vector<ModeOperators> modes;
  std::vector<int> dims;
  MatrixXcd h_static;
  MatrixXcd op_cos;
  MatrixXcd op_sin;
  FluxoniumParams qubit_a;
  FluxoniumParams qubit_b;
  SquidParams squid;

  int dimension() const { return static_cast<int>(h_static.rows()); }

  /// Full Hamiltonian with the SQUID evaluated at coupler flux phi_s (and the
  /// stored e_j_sigma, d).
  MatrixXcd hamiltonian(double phi_s) const;
  MatrixXcd hamiltonian() const { return hamiltonian(squid.phi_s); }

  /// Embed a single-mode operator by tensoring identities on the other modes.
  MatrixXcd embed(int mode_index, const MatrixXcd& op) const;

  /// Flat index of a bare product state (l, m[, n]).
  int flat_index(int l, int m, int n = 0) const;
};

CompositeSystem assemble_grounded(const FluxoniumParams& qa, const FluxoniumParams& qb,
                                  const SquidParams& squid, const ModeOperators& mode_a,
                                  const ModeOperators& mode_b);

CompositeSystem assemble_floating(const FluxoniumParams& qa, const FluxoniumParams& qb,
                                  const SquidParams& squid, const SloshingParams& sloshing,
                                  const ModeOperators& mode_a, const ModeOperators& mode_b,
                                  const ModeOperators& mode_sl);

/// Build the mode operators from `spec` and assemble the requested design.
CompositeSystem assemble(const CircuitSpec& spec, Design design);

using BareLabel = std::array<int, 3>;  // (l, m, n); n = 0 for the grounded design

struct LabeledSpectrum {
  VectorXd energies;               // ascending
  MatrixXcd eigenvectors;          // columns in the kept product basis
  std::vector<BareLabel> labels;   // per eigenstate
  std::vector<double> overlaps;    // |<bare|dressed>| of the assigned label
  std::vector<int> dims;

  /// Eigenstate index carrying the given bare label; throws LabelingError.
  int index_of(const BareLabel& label) const;
  double energy_of(const BareLabel& label) const { return energies(index_of(label)); }
};

LabeledSpectrum diagonalize_and_label(const CompositeSystem& system);
LabeledSpectrum diagonalize_and_label(const MatrixXcd& hamiltonian, const std::vector<int>& dims);

/// Greedy bijective assignment on an overlap-magnitude matrix
/// (rows: reference states, columns: eigenstates). Pairs are taken in
/// descending overlap; near-ties (< 1e-9) go to the lower-energy eigenstate.
/// Returns, for each eigenstate, the assigned reference row.
std::vector<int> greedy_assignment(const MatrixXd& overlaps, const VectorXd& energies);

/// Labeled spectra over a monotone coupler-flux grid. Labels are continued
/// adiabatically outward from the grid point closest to the off-point.
std::vector<LabeledSpectrum> spectrum_vs_flux(const CircuitSpec& spec, Design design,
                                              const std::vector<double>& flux_grid,
                                              int workers = 1);

}  // namespace fluxsquid
