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

// Two-qubit process matrices, fSim targets, conditional-phase extraction and
// local Z frame removal.

#include <array>
#include <vector>

#include "fluxsquid/types.hpp"

namespace fluxsquid {

using Matrix4cd = Eigen::Matrix4cd;
using Matrix16cd = Eigen::Matrix<Complex, 16, 16>;

/// chi in the basis P_m = sigma_i (x) sigma_j (m = 4 i + j, sigma in I, X, Y, Z),
/// with E(rho) = sum chi_mn P_m rho P_n^H. A trace-preserving map has Tr chi = 1.
struct ProcessMatrix {
  Matrix16cd chi = Matrix16cd::Zero();

  double trace() const { return chi.trace().real(); }
  /// Hermitian, eigenvalues above -floor, trace below 1 + 1e-9.
  bool is_valid(double floor = 1e-9) const;
  double min_eigenvalue() const;
};

/// The 16 two-qubit Pauli products, index 4 i + j.
const std::array<Matrix4cd, 16>& pauli_basis();

/// fSim target with swap angle theta and conditional phase xi.
Matrix4cd u_ideal(double theta, double xi);

/// Column-major superoperator vec(E(rho)) = S vec(rho).
Matrix16cd superoperator_from_unitary(const Matrix4cd& u);
ProcessMatrix chi_from_superoperator(const Matrix16cd& superop);
ProcessMatrix chi_from_unitary(const Matrix4cd& u);

/// Linear-inversion superoperator from inputs and the corresponding outputs
/// (any 16 linearly independent 4x4 inputs).
Matrix16cd superoperator_from_pairs(const std::vector<Matrix4cd>& inputs,
                                    const std::vector<Matrix4cd>& outputs);

/// Product inputs |a><a| (x) |b><b| with a, b in {|0>, |1>, |+>, |+i>}.
std::vector<Matrix4cd> tomography_inputs();

/// F = (4 Tr(chi_ideal chi) + Tr chi) / 5 with chi_ideal from u_ideal(theta, xi).
double gate_fidelity(const ProcessMatrix& chi_sim, double theta, double xi);

/// xi_sim = -arg[U00 U11 / (U0101 U1010)], or with -U0110 U1001 in the
/// denominator when the swap off-diagonals dominate. Invariant under local Z.
double extract_conditional_phase(const Matrix4cd& u);

/// Swap angle 2 atan2(|off-diagonal|, |diagonal|) of the single-excitation block.
double extract_swap_angle(const Matrix4cd& u);

/// Local Z rotations before and after the gate plus a global phase:
/// U' = e^{i g} D_post U D_pre, D = diag(0, b, a, a + b) phases.
struct LocalFrame {
  double global = 0.0;
  double a_pre = 0.0, b_pre = 0.0;
  double a_post = 0.0, b_post = 0.0;

  Matrix4cd pre() const;
  Matrix4cd post() const;  // includes the global phase
  Matrix4cd apply(const Matrix4cd& u) const { return post() * u * pre(); }
  Matrix16cd apply(const Matrix16cd& superop) const;
};

struct FrameRemoval {
  Matrix4cd corrected;
  LocalFrame frame;
  double xi = 0.0;
};

/// Fit the local Z frame that brings `u` closest (in phase) to
/// u_ideal(theta, xi_sim). Requires every column norm above 0.5.
FrameRemoval remove_local_z_frames(const Matrix4cd& u, double theta = kPi / 2.0);

}  // namespace fluxsquid
