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

#include "fluxsquid/tomography.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace fluxsquid {

namespace {

Matrix16cd kron16(const Matrix4cd& a, const Matrix4cd& b) {
  Matrix16cd out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  }
  return out;
}

Eigen::Map<const Eigen::Matrix<Complex, 16, 1>> vec(const Matrix4cd& m) {
  return Eigen::Map<const Eigen::Matrix<Complex, 16, 1>>(m.data());
}

double wrap(double x) { return std::remainder(x, kTwoPi); }

// Minimum-norm solve; the frame parameters are rank deficient by design.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& rhs) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-10);
  cod.compute(m);
  return cod.solve(rhs);
}

Matrix4cd phase_diag(double a, double b) {
  Matrix4cd d = Matrix4cd::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::polar(1.0, b);
  d(2, 2) = std::polar(1.0, a);
  d(3, 3) = std::polar(1.0, a + b);
  return d;
}

}  // namespace

const std::array<Matrix4cd, 16>& pauli_basis() {
  static const std::array<Matrix4cd, 16> basis = [] {
    std::array<Eigen::Matrix2cd, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -kI, kI, 0;
    s[3] << 1, 0, 0, -1;
    std::array<Matrix4cd, 16> out;
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        Matrix4cd p;
        for (int r = 0; r < 2; ++r) {
          for (int c = 0; c < 2; ++c) p.block<2, 2>(2 * r, 2 * c) = s[i](r, c) * s[j];
        }
        out[4 * i + j] = p;
      }
    }
    return out;
  }();
  return basis;
}

bool ProcessMatrix::is_valid(double floor) const {
  const double herm = (chi - chi.adjoint()).norm();
  return herm < 1e-9 * std::max(1.0, chi.norm()) && min_eigenvalue() > -floor &&
         trace() <= 1.0 + 1e-9;
}

double ProcessMatrix::min_eigenvalue() const {
  const Matrix16cd h = 0.5 * (chi + chi.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix16cd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

Matrix4cd u_ideal(double theta, double xi) {
  Matrix4cd u = Matrix4cd::Zero();
  const Complex z = std::polar(1.0, -xi / 2.0);
  u(0, 0) = z;
  u(3, 3) = z;
  u(1, 1) = std::cos(theta / 2.0);
  u(2, 2) = std::cos(theta / 2.0);
  u(1, 2) = -kI * std::sin(theta / 2.0);
  u(2, 1) = -kI * std::sin(theta / 2.0);
  return u;
}

Matrix16cd superoperator_from_unitary(const Matrix4cd& u) { return kron16(u.conjugate(), u); }

ProcessMatrix chi_from_superoperator(const Matrix16cd& superop) {
  // Basis B_mn = conj(P_n) (x) P_m is orthogonal with norm^2 16.
  const auto& p = pauli_basis();
  ProcessMatrix out;
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 16; ++n) {
      out.chi(m, n) = (kron16(p[n].conjugate(), p[m]).adjoint() * superop).trace() / 16.0;
    }
  }
  return out;
}

ProcessMatrix chi_from_unitary(const Matrix4cd& u) {
  // Rank one: chi_mn = c_m conj(c_n), c_m = Tr(P_m^H U) / 4.
  const auto& p = pauli_basis();
  Eigen::Matrix<Complex, 16, 1> c;
  for (int m = 0; m < 16; ++m) c(m) = (p[m].adjoint() * u).trace() / 4.0;
  ProcessMatrix out;
  out.chi = c * c.adjoint();
  return out;
}

Matrix16cd superoperator_from_pairs(const std::vector<Matrix4cd>& inputs,
                                    const std::vector<Matrix4cd>& outputs) {
  if (inputs.size() != 16 || outputs.size() != 16) {
    throw DomainError("process tomography needs 16 input/output pairs");
  }
  Matrix16cd in, out;
  for (int k = 0; k < 16; ++k) {
    in.col(k) = vec(inputs[k]);
    out.col(k) = vec(outputs[k]);
  }
  Eigen::FullPivLU<Matrix16cd> lu(in);
  if (!lu.isInvertible()) throw DomainError("tomography inputs are not informationally complete");
  return out * lu.inverse();
}

std::vector<Matrix4cd> tomography_inputs() {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Eigen::Vector2cd, 4> kets;
  kets[0] << 1, 0;
  kets[1] << 0, 1;
  kets[2] << r, r;
  kets[3] << r, kI * r;
  std::vector<Matrix4cd> out;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      Eigen::Vector4cd psi;
      psi << kets[a](0) * kets[b](0), kets[a](0) * kets[b](1), kets[a](1) * kets[b](0),
          kets[a](1) * kets[b](1);
      out.push_back(psi * psi.adjoint());
    }
  }
  return out;
}

double gate_fidelity(const ProcessMatrix& chi_sim, double theta, double xi) {
  const ProcessMatrix ideal = chi_from_unitary(u_ideal(theta, xi));
  const double overlap = (ideal.chi * chi_sim.chi).trace().real();
  return (4.0 * overlap + chi_sim.trace()) / 5.0;
}

double extract_conditional_phase(const Matrix4cd& u) {
  const Complex num = u(0, 0) * u(3, 3);
  const Complex diag = u(1, 1) * u(2, 2);
  const Complex swap = -u(1, 2) * u(2, 1);
  const double floor = 1e-6;
  const bool diag_ok = std::abs(u(1, 1)) > floor && std::abs(u(2, 2)) > floor;
  const bool swap_ok = std::abs(u(1, 2)) > floor && std::abs(u(2, 1)) > floor;
  if (std::abs(u(0, 0)) <= floor || std::abs(u(3, 3)) <= floor || (!diag_ok && !swap_ok)) {
    throw ExtractionError("propagator elements too small to extract the conditional phase");
  }
  const Complex den = (diag_ok && (!swap_ok || std::abs(diag) >= std::abs(swap))) ? diag : swap;
  return -std::arg(num / den);
}

double extract_swap_angle(const Matrix4cd& u) {
  const double off = 0.5 * (std::abs(u(1, 2)) + std::abs(u(2, 1)));
  const double on = 0.5 * (std::abs(u(1, 1)) + std::abs(u(2, 2)));
  return 2.0 * std::atan2(off, on);
}

Matrix4cd LocalFrame::pre() const { return phase_diag(a_pre, b_pre); }

Matrix4cd LocalFrame::post() const { return std::polar(1.0, global) * phase_diag(a_post, b_post); }

Matrix16cd LocalFrame::apply(const Matrix16cd& superop) const {
  return superoperator_from_unitary(post()) * superop * superoperator_from_unitary(pre());
}

FrameRemoval remove_local_z_frames(const Matrix4cd& u, double theta) {
  for (int c = 0; c < 4; ++c) {
    if (u.col(c).norm() < 0.5) {
      std::ostringstream msg;
      msg << "column " << c << " norm " << u.col(c).norm() << " too small for frame removal";
      throw FrameError(msg.str());
    }
  }
  FrameRemoval out;
  try {
    out.xi = extract_conditional_phase(u);
  } catch (const ExtractionError& e) {
    throw FrameError(e.what());
  }
  const Matrix4cd target = u_ideal(theta, out.xi);

  // Gauge coordinates q = (g, A, B, C): element phase shifts are
  // 00: g, 11: g+A+B, 0101: g+B, 1010: g+A, 0110: g+C, 1001: g+A+B-C.
  // Any q is realised by a_pre = C, a_post = A - C, b_pre = B, b_post = 0.
  static const int elems[6][2] = {{0, 0}, {3, 3}, {1, 1}, {2, 2}, {1, 2}, {2, 1}};
  Eigen::Matrix<double, 6, 4> m;
  m << 1, 0, 0, 0,  //
      1, 1, 1, 0,   //
      1, 0, 1, 0,   //
      1, 1, 0, 0,   //
      1, 0, 0, 1,   //
      1, 1, 1, -1;
  Eigen::Matrix<double, 6, 1> w, delta;
  for (int k = 0; k < 6; ++k) {
    const int i = elems[k][0], j = elems[k][1];
    w(k) = std::abs(u(i, j)) * std::abs(target(i, j));
    delta(k) = (w(k) > 0.0) ? wrap(std::arg(target(i, j)) - std::arg(u(i, j))) : 0.0;
  }
  if (w.maxCoeff() <= 0.0) throw FrameError("no usable matrix elements for frame removal");

  auto objective = [&](const Eigen::Vector4d& q) {
    const Eigen::Matrix<double, 6, 1> r = m * q - delta;
    return (w.array() * r.array().cos()).sum();
  };

  // The objective lives on a torus and has spurious local maxima, so seed from
  // every exact solution of four of the six phase equations (with both 2 pi
  // branches per equation), keep the best, then polish with Newton.
  Eigen::Vector4d q = Eigen::Vector4d::Zero();
  double best = objective(q);
  for (int mask = 0; mask < 64; ++mask) {
    if (__builtin_popcount(mask) != 4) continue;
    int rows[4], n = 0;
    for (int k = 0; k < 6; ++k) {
      if (mask & (1 << k)) rows[n++] = k;
    }
    Eigen::Matrix4d sub;
    for (int r = 0; r < 4; ++r) sub.row(r) = m.row(rows[r]);
    Eigen::FullPivLU<Eigen::Matrix4d> lu(sub);
    if (!lu.isInvertible()) continue;
    for (int branch = 0; branch < 16; ++branch) {
      Eigen::Vector4d rhs;
      for (int r = 0; r < 4; ++r) rhs(r) = delta(rows[r]) + ((branch >> r) & 1 ? kTwoPi : 0.0);
      const Eigen::Vector4d cand = lu.solve(rhs);
      const double f = objective(cand);
      if (f > best + 1e-15) {
        best = f;
        q = cand;
      }
    }
  }
  for (int iter = 0; iter < 50; ++iter) {
    const Eigen::Matrix<double, 6, 1> r = m * q - delta;
    const Eigen::Vector4d grad = m.transpose() * (w.array() * r.array().sin()).matrix();
    const Eigen::Matrix4d hess =
        m.transpose() * (w.array() * r.array().cos()).matrix().asDiagonal() * m;
    const Eigen::Vector4d step = min_norm_solve(hess, grad);
    if (!(objective(q - step) >= objective(q) - 1e-15)) break;
    q -= step;
    if (step.norm() < 1e-14) break;
  }
  const Eigen::Matrix<double, 5, 1> p =
      (Eigen::Matrix<double, 5, 1>() << q(0), q(3), q(2), q(1) - q(3), 0.0).finished();

  out.frame.global = p(0);
  out.frame.a_pre = p(1);
  out.frame.b_pre = p(2);
  out.frame.a_post = p(3);
  out.frame.b_post = p(4);
  out.corrected = out.frame.apply(u);
  return out;
}

}  // namespace fluxsquid
