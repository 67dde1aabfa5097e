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

#include "fluxsquid/effective_model.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace fluxsquid {

namespace {

bool at_sweet_spot(const FluxoniumParams& p) {
  const double wrapped = p.phi_ext - std::floor(p.phi_ext);
  return std::abs(wrapped - 0.5) < 1e-9;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

}  // namespace

TwoLevelModel reduce_to_two_level(const FluxoniumParams& qa, const FluxoniumParams& qb,
                                  const SquidParams& squid, const ModeOperators& mode_a,
                                  const ModeOperators& mode_b) {
  if (!at_sweet_spot(qa) || !at_sweet_spot(qb)) {
    throw DomainError("two-level reduction requires both qubits at the sweet spot");
  }
  if (mode_a.n_keep < 2 || mode_b.n_keep < 2) {
    throw DomainError("two-level reduction needs at least two kept levels per qubit");
  }
  TwoLevelModel m;
  m.squid = squid;
  m.omega_a = mode_a.energies(1) - mode_a.energies(0);
  m.omega_b = mode_b.energies(1) - mode_b.energies(0);
  m.a_x_a = std::abs(mode_a.phi_op(0, 1));
  m.a_x_b = std::abs(mode_b.phi_op(0, 1));
  m.a_i_a = mode_a.phi_op(0, 0).real();
  m.a_i_b = mode_b.phi_op(0, 0).real();

  const double c = std::cos(kPi * squid.phi_s);
  const double s = std::sin(kPi * squid.phi_s);
  m.g_sq = -(squid.e_j_sigma / 4.0) * m.a_x_a * m.a_x_b * c;
  m.g_sq_bare = -squid.e_j_sigma * c;
  m.g_sq_asym = -squid.d * squid.e_j_sigma * s;

  // <0|n|1> is purely imaginary for real eigenvectors; i * i = -1.
  const Complex product = mode_a.n_op(0, 1) * mode_b.n_op(0, 1);
  m.g_c_signed = -squid.j_c * product.real();
  m.g_c = std::abs(squid.j_c * product);

  m.delta_sq_a = m.a_x_a * squid.d * (squid.e_j_sigma / 2.0) * s;
  m.delta_sq_b = -m.a_x_b * squid.d * (squid.e_j_sigma / 2.0) * s;

  const auto sys = assemble_grounded(qa, qb, squid, mode_a, mode_b);
  const MatrixXcd h = sys.hamiltonian();
  const int idx[4] = {sys.flat_index(0, 0), sys.flat_index(0, 1), sys.flat_index(1, 0),
                      sys.flat_index(1, 1)};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) m.projected_block(i, j) = h(idx[i], idx[j]);
  }
  m.exchange_projected = std::abs(m.projected_block(1, 2));
  return m;
}

Eigen::Matrix4cd two_level_squid_hamiltonian(const TwoLevelModel& model) {
  Eigen::Matrix2cd x;
  x << 0.0, 1.0, 1.0, 0.0;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  Eigen::Matrix4cd xx, xi, ix;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      for (int k = 0; k < 2; ++k) {
        for (int l = 0; l < 2; ++l) {
          xx(2 * i + k, 2 * j + l) = x(i, j) * x(k, l);
          xi(2 * i + k, 2 * j + l) = x(i, j) * id(k, l);
          ix(2 * i + k, 2 * j + l) = id(i, j) * x(k, l);
        }
      }
    }
  }
  const double s1 = std::sin(1.0);
  return model.g_sq_bare * s1 * s1 * xx + model.g_sq_asym * (std::sin(2.0) / 2.0) * (xi - ix);
}

double single_excitation_gap(const TwoLevelModel& model) {
  Eigen::Matrix2cd block;
  block << model.projected_block(1, 1), model.projected_block(1, 2), model.projected_block(2, 1),
      model.projected_block(2, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> solver(block);
  return solver.eigenvalues()(1) - solver.eigenvalues()(0);
}

CoefficientTable expansion_coefficients(int order, ExpansionKind kind, Design design) {
  if (order < 2 || order > 8) throw DomainError("expansion order must lie in [2, 8]");
  const bool floating = design == Design::Floating;
  const double c[3] = {floating ? 0.5 : 1.0, floating ? -0.5 : -1.0, floating ? -1.0 : 0.0};
  const int n_modes = floating ? 3 : 2;

  CoefficientTable table;
  // cos u = sum_{n even} (-1)^{n/2} u^n / n!, sin u = sum_{n odd} (-1)^{(n-1)/2} u^n / n!;
  // the multinomial expansion gives u^n / n! -> prod c_k^p_k / p_k!.
  for (int n = 2; n <= order; ++n) {
    const bool even = n % 2 == 0;
    if (even != (kind == ExpansionKind::Symmetric)) continue;
    const double sign = ((even ? n / 2 : (n - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    for (int pa = 0; pa <= n; ++pa) {
      for (int pb = 0; pa + pb <= n; ++pb) {
        const int ps = n - pa - pb;
        if (n_modes == 2 && ps != 0) continue;
        const int nonzero = (pa > 0) + (pb > 0) + (ps > 0);
        if (nonzero < 2) continue;
        const double coef = sign * std::pow(c[0], pa) / factorial(pa) * std::pow(c[1], pb) /
                            factorial(pb) * std::pow(c[2], ps) / factorial(ps);
        table[{pa, pb, ps}] = coef;
      }
    }
  }
  return table;
}

}  // namespace fluxsquid
