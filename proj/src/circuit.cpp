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

#include "fluxsquid/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace fluxsquid {

namespace {

double wrap_flux(double phi) { return phi - std::floor(phi); }

// Fix the overall sign of each eigenvector so that its largest component is
// positive; keeps projected matrix elements reproducible across builds.
template <typename Matrix>
void normalize_phases(Matrix& vectors) {
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    Eigen::Index best = 0;
    vectors.col(k).cwiseAbs().maxCoeff(&best);
    const auto pivot = vectors(best, k);
    if constexpr (std::is_same_v<typename Matrix::Scalar, double>) {
      if (pivot < 0.0) vectors.col(k) *= -1.0;
    } else {
      vectors.col(k) *= std::conj(pivot) / std::abs(pivot);
    }
  }
}

struct FluxoniumSolution {
  VectorXd energies;
  MatrixXd kept;          // n_fock x n_keep eigenvectors
  MatrixXd phi_full;      // oscillator-basis phase
  MatrixXcd n_full;
  VectorXd phi_spectrum;  // eigenvalues of phi_full
  MatrixXd phi_vectors;   // eigenvectors of phi_full
};

FluxoniumSolution solve_fluxonium(const FluxoniumParams& params, int n_fock, int n_keep) {
  auto ops = oscillator_operators(params.e_c, params.e_l, n_fock);

  Eigen::SelfAdjointEigenSolver<MatrixXd> phi_solver(ops.phi);
  if (phi_solver.info() != Eigen::Success) {
    throw ConvergenceError("phase operator eigendecomposition failed");
  }
  const VectorXd& x = phi_solver.eigenvalues();
  const MatrixXd& v = phi_solver.eigenvectors();
  const MatrixXd cos_phi = v * x.array().cos().matrix().asDiagonal() * v.transpose();

  const double omega = std::sqrt(8.0 * params.e_c * params.e_l);
  const double phi_e = kTwoPi * wrap_flux(params.phi_ext);

  MatrixXd h = params.e_l * phi_e * ops.phi - params.e_j * cos_phi;
  for (int k = 0; k < n_fock; ++k) {
    h(k, k) += omega * (k + 0.5) + 0.5 * params.e_l * phi_e * phi_e;
  }

  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("fluxonium eigensolver did not converge");
  }

  FluxoniumSolution out;
  out.energies = solver.eigenvalues().head(n_keep);
  out.kept = solver.eigenvectors().leftCols(n_keep);
  normalize_phases(out.kept);
  out.phi_full = std::move(ops.phi);
  out.n_full = std::move(ops.n);
  out.phi_spectrum = x;
  out.phi_vectors = v;
  return out;
}

MatrixXcd projected_exponential(const FluxoniumSolution& s, double scale) {
  // W = V^T U_k, so P exp(i s phi) P = W^T diag(e^{i s x}) W.
  const MatrixXd w = s.phi_vectors.transpose() * s.kept;
  const VectorXcd phases = (kI * scale * s.phi_spectrum.cast<Complex>()).array().exp();
  return w.transpose().cast<Complex>() * phases.asDiagonal() * w.cast<Complex>();
}

void check_fluxonium_args(const FluxoniumParams& params, int n_fock, int n_keep) {
  params.validate();
  if (n_fock < 50) throw DomainError("n_fock must be at least 50");
  if (n_keep < 1 || n_keep > n_fock / 4) {
    throw DomainError("n_keep must lie in [1, n_fock/4]");
  }
}

struct SloshingSolution {
  VectorXd energies;
  MatrixXcd kept;  // charge-basis eigenvectors, (2N+1) x n_keep
  VectorXd charges;
  VectorXd charging;
  MatrixXcd raise;  // e^{i phi}: |n> -> |n+1>
};

SloshingSolution solve_sloshing(const SloshingParams& params, const SquidParams& squid,
                                int n_charge_cut, int n_keep) {
  const int dim = 2 * n_charge_cut + 1;
  SloshingSolution out;
  out.charges = VectorXd::LinSpaced(dim, -n_charge_cut, n_charge_cut);
  out.charging = 4.0 * params.e_c_sl * (out.charges.array() - params.n_g).square();
  out.raise = MatrixXcd::Zero(dim, dim);
  for (int k = 0; k + 1 < dim; ++k) out.raise(k + 1, k) = 1.0;

  const double c = std::cos(kPi * squid.phi_s);
  const double s = std::sin(kPi * squid.phi_s);
  const MatrixXcd cos_phi = 0.5 * (out.raise + out.raise.adjoint());
  const MatrixXcd sin_phi = (out.raise - out.raise.adjoint()) / (2.0 * kI);
  MatrixXcd h = -squid.e_j_sigma * (c * cos_phi - squid.d * s * sin_phi);
  h.diagonal() += out.charging.cast<Complex>();

  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("sloshing-mode eigensolver did not converge");
  }
  out.energies = solver.eigenvalues().head(n_keep);
  out.kept = solver.eigenvectors().leftCols(n_keep);
  normalize_phases(out.kept);
  return out;
}

void check_sloshing_args(const SloshingParams& params, const SquidParams& squid,
                         int n_charge_cut, int n_keep) {
  params.validate();
  squid.validate();
  if (n_charge_cut < 10) throw DomainError("n_charge_cut must be at least 10");
  if (n_keep < 1 || n_keep > 2 * n_charge_cut + 1) {
    throw DomainError("sloshing n_keep out of range");
  }
}

}  // namespace

void FluxoniumParams::validate() const {
  if (!(e_j > 0.0) || !(e_c > 0.0) || !(e_l > 0.0)) {
    throw DomainError("fluxonium energies e_j, e_c, e_l must be positive");
  }
  if (!std::isfinite(phi_ext)) throw DomainError("fluxonium phi_ext must be finite");
}

double SquidParams::cos_coefficient() const { return -e_j_sigma * std::cos(kPi * phi_s); }

double SquidParams::sin_coefficient() const {
  return -d * e_j_sigma * std::sin(kPi * phi_s);
}

void SquidParams::validate() const {
  if (!(e_j_sigma >= 0.0)) throw DomainError("e_j_sigma must be non-negative");
  if (!(std::abs(d) <= 1.0)) throw DomainError("SQUID asymmetry d must lie in [-1, 1]");
  if (!std::isfinite(phi_s) || !std::isfinite(j_c)) {
    throw DomainError("SQUID flux and j_c must be finite");
  }
}

void SloshingParams::validate() const {
  if (!(e_c_sl > 0.0)) throw DomainError("e_c_sl must be positive");
  if (!(n_g >= 0.0 && n_g < 1.0)) throw DomainError("n_g must lie in [0, 1)");
  if (!std::isfinite(j_sl)) throw DomainError("j_sl must be finite");
}

std::string to_string(ModeLabel label) {
  switch (label) {
    case ModeLabel::A:
      return "A";
    case ModeLabel::B:
      return "B";
    case ModeLabel::Sloshing:
      return "sl";
  }
  return "?";
}

OscillatorOperators oscillator_operators(double e_c, double e_l, int n_fock) {
  const double length = std::pow(8.0 * e_c / e_l, 0.25);
  MatrixXd a = MatrixXd::Zero(n_fock, n_fock);
  for (int k = 1; k < n_fock; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  OscillatorOperators ops;
  ops.phi = length / std::sqrt(2.0) * (a + a.transpose());
  ops.n = (kI / (std::sqrt(2.0) * length)) * (a.transpose() - a).cast<Complex>();
  return ops;
}

ModeOperators build_fluxonium_mode(const FluxoniumParams& params, int n_fock, int n_keep,
                                   ModeLabel label, ConvergenceOptions convergence) {
  check_fluxonium_args(params, n_fock, n_keep);
  const auto s = solve_fluxonium(params, n_fock, n_keep);

  if (convergence.verify) {
    const auto larger = solve_fluxonium(params, n_fock + n_fock / 2, n_keep);
    const double defect = (larger.energies - s.energies).cwiseAbs().maxCoeff();
    if (defect > convergence.tolerance) {
      std::ostringstream msg;
      msg << "fluxonium basis not converged: n_fock=" << n_fock << " changes kept energies by "
          << defect << " GHz";
      throw ConvergenceError(msg.str());
    }
  }

  ModeOperators mode;
  mode.label = label;
  mode.n_keep = n_keep;
  mode.energies = s.energies;
  const MatrixXcd kept = s.kept.cast<Complex>();
  mode.phi_op = kept.adjoint() * s.phi_full.cast<Complex>() * kept;
  mode.n_op = kept.adjoint() * s.n_full * kept;
  mode.exp_iphi = projected_exponential(s, 1.0);
  mode.exp_iphi_half = projected_exponential(s, 0.5);
  mode.bare_hamiltonian = s.energies.cast<Complex>().asDiagonal();
  mode.basis = kept;
  return mode;
}

double fluxonium_convergence_defect(const FluxoniumParams& params, int n_fock, int n_keep) {
  check_fluxonium_args(params, n_fock, n_keep);
  const auto base = solve_fluxonium(params, n_fock, n_keep);
  const auto larger = solve_fluxonium(params, n_fock + n_fock / 2, n_keep);
  return (larger.energies - base.energies).cwiseAbs().maxCoeff();
}

MatrixXcd fluxonium_phase_exponential(const FluxoniumParams& params, int n_fock, int n_keep,
                                      double scale) {
  check_fluxonium_args(params, n_fock, n_keep);
  return projected_exponential(solve_fluxonium(params, n_fock, n_keep), scale);
}

double unitarity_defect(const MatrixXcd& projected_exponential) {
  Eigen::JacobiSVD<MatrixXcd> svd(projected_exponential);
  return std::max(0.0, svd.singularValues()(0) - 1.0);
}

ModeOperators build_sloshing_mode(const SloshingParams& params, const SquidParams& squid,
                                  int n_charge_cut, int n_keep, ConvergenceOptions convergence) {
  check_sloshing_args(params, squid, n_charge_cut, n_keep);
  const auto s = solve_sloshing(params, squid, n_charge_cut, n_keep);

  if (convergence.verify) {
    const auto larger = solve_sloshing(params, squid, n_charge_cut + n_charge_cut / 2, n_keep);
    const double defect = (larger.energies - s.energies).cwiseAbs().maxCoeff();
    if (defect > convergence.tolerance) {
      std::ostringstream msg;
      msg << "sloshing basis not converged: n_charge_cut=" << n_charge_cut
          << " changes kept energies by " << defect << " GHz";
      throw ConvergenceError(msg.str());
    }
  }

  ModeOperators mode;
  mode.label = ModeLabel::Sloshing;
  mode.n_keep = n_keep;
  mode.energies = s.energies;
  mode.n_op = s.kept.adjoint() * s.charges.cast<Complex>().asDiagonal() * s.kept;
  mode.exp_iphi = s.kept.adjoint() * s.raise * s.kept;
  mode.bare_hamiltonian = s.kept.adjoint() * s.charging.cast<Complex>().asDiagonal() * s.kept;
  mode.basis = s.kept;
  return mode;
}

double sloshing_convergence_defect(const SloshingParams& params, const SquidParams& squid,
                                   int n_charge_cut, int n_keep) {
  check_sloshing_args(params, squid, n_charge_cut, n_keep);
  const auto base = solve_sloshing(params, squid, n_charge_cut, n_keep);
  const auto larger = solve_sloshing(params, squid, n_charge_cut + n_charge_cut / 2, n_keep);
  return (larger.energies - base.energies).cwiseAbs().maxCoeff();
}

double charging_unit_ghz() {
  constexpr double kElementaryCharge = 1.602176634e-19;  // C
  constexpr double kPlanck = 6.62607015e-34;              // J s
  constexpr double kFemtoFarad = 1e-15;
  return kElementaryCharge * kElementaryCharge / (kPlanck * kFemtoFarad) * 1e-9;
}

GroundedCharging grounded_charging_energies(const CapacitanceSet& caps) {
  if (!(caps.c > 0.0) || !(caps.c_c >= 0.0)) {
    throw DomainError("grounded design needs c > 0 and c_c >= 0");
  }
  const double u = charging_unit_ghz();
  const double det = caps.c * (caps.c + 2.0 * caps.c_c);
  return {u * (caps.c + caps.c_c) / (2.0 * det), 4.0 * u * caps.c_c / det};
}

FloatingCharging floating_charging_energies(const CapacitanceSet& caps) {
  if (!(caps.c > 0.0) || !(caps.c_g > 0.0) || !(caps.c_c >= 0.0)) {
    throw DomainError("floating design needs c > 0, c_g > 0 and c_c >= 0");
  }
  const double c = caps.c;
  const double cc = caps.c_c;
  const double cg = caps.c_g;
  const double c_sigma = c + cg + cc;
  // Determinant-like combination of the (A, B, sl) block of K. Written as
  // C_Sigma^2 - C_c^2 - C^2; the variant with C_g^2 in place of C^2 does not
  // reproduce the inverse of K.
  const double c_sl2 = c_sigma * c_sigma - cc * cc - c * c;
  const double c_q3 = (2.0 * c + cg) * (2.0 * c + cg) * (cc + cg) + cc * cg * (2.0 * c + cg);
  if (!(c_sl2 > 0.0) || !(c_q3 > 0.0)) throw DomainError("singular floating capacitance set");
  const double u = charging_unit_ghz();
  FloatingCharging out;
  out.e_c = u * (2.0 * c_sl2 - cc * cg) / (2.0 * c_q3);
  out.j_c = u * 4.0 * cc * cg / c_q3;
  out.e_c_sl = u * (c + c_sigma) / (2.0 * c_sl2);
  out.j_sl = u * 4.0 * cc / c_sl2;
  return out;
}

Eigen::Matrix4d floating_node_capacitance(const CapacitanceSet& caps) {
  const double c = caps.c;
  const double cc = caps.c_c;
  const double cg = caps.c_g;
  Eigen::Matrix4d m;
  m << c + cg, -c, 0.0, 0.0,
       -c, c + cc + cg, -cc, 0.0,
       0.0, -cc, c + cc + cg, -c,
       0.0, 0.0, -c, c + cg;
  return m;
}

Eigen::Matrix4d floating_mode_transform() {
  Eigen::Matrix4d m;
  m << 1.0, -1.0, 0.0, 0.0,
       0.0, 0.0, -1.0, 1.0,
       0.5, 0.5, -0.5, -0.5,
       1.0, 1.0, 1.0, 1.0;
  return m;
}

Eigen::Matrix4d transform_capacitance_matrix(const Eigen::Matrix4d& c_node) {
  const double scale = std::max(c_node.norm(), 1e-300);
  if ((c_node - c_node.transpose()).norm() > 1e-12 * scale) {
    throw DomainError("node capacitance matrix must be symmetric");
  }
  const Eigen::Matrix4d m_inv = floating_mode_transform().inverse();
  return m_inv.transpose() * c_node * m_inv;
}

}  // namespace fluxsquid
