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


#include <cmath>
#include <random>

#include "doctest.h"
#include "fluxsquid/tomography.hpp"

using namespace fluxsquid;

namespace {

Matrix4cd local_z(double a, double b) {
  // qubit A is the left tensor factor: |00>, |01>, |10>, |11>
  Matrix4cd z = Matrix4cd::Zero();
  z(0, 0) = 1.0;
  z(1, 1) = std::polar(1.0, b);
  z(2, 2) = std::polar(1.0, a);
  z(3, 3) = std::polar(1.0, a + b);
  return z;
}

Matrix4cd random_unitary(std::mt19937& rng) {
  std::normal_distribution<double> n;
  Matrix4cd g;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) g(i, j) = Complex(n(rng), n(rng));
  }
  Eigen::HouseholderQR<Matrix4cd> qr(g);
  return qr.householderQ();
}

// Average gate fidelity from the propagator (Pedersen et al.).
double overlap_fidelity(const Matrix4cd& u, const Matrix4cd& ideal) {
  const Matrix4cd m = ideal.adjoint() * u;
  return ((m * m.adjoint()).trace().real() + std::norm(m.trace())) / 20.0;
}

Matrix4cd x_on_a() {
  Matrix4cd x = Matrix4cd::Zero();
  x(0, 2) = x(2, 0) = x(1, 3) = x(3, 1) = 1.0;
  return x;
}

}  // namespace

TEST_CASE("fidelity formula analytic values") {
  for (double xi : {0.0, 0.4, -2.0}) {
    const Matrix4cd u = u_ideal(kPi / 2.0, xi);
    CHECK(gate_fidelity(chi_from_unitary(u), kPi / 2.0, xi) == doctest::Approx(1.0).epsilon(1e-13));
    // an orthogonal Pauli error on top of the ideal gate
    CHECK(gate_fidelity(chi_from_unitary(x_on_a() * u), kPi / 2.0, xi) ==
          doctest::Approx(0.2).epsilon(1e-13));
  }
  // fully depolarizing channel: rho -> Tr(rho) I/4
  Matrix16cd depol = Matrix16cd::Zero();
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) depol(5 * i, 5 * j) = 0.25;
  }
  const auto chi = chi_from_superoperator(depol);
  CHECK(chi.trace() == doctest::Approx(1.0));
  CHECK(gate_fidelity(chi, kPi / 2.0, 0.3) == doctest::Approx(0.25).epsilon(1e-13));
}

TEST_CASE("chi pipeline agrees with the propagator-overlap fidelity") {
  std::mt19937 rng(7);
  const Matrix4cd ideal = u_ideal(kPi / 2.0, 0.2);
  for (int k = 0; k < 5; ++k) {
    // a nearby unitary and a leaky (sub-unitary) block
    const Matrix4cd noise = random_unitary(rng);
    const Matrix4cd u = (ideal + 0.05 * noise).householderQr().householderQ();
    CHECK(gate_fidelity(chi_from_unitary(u), kPi / 2.0, 0.2) ==
          doctest::Approx(overlap_fidelity(u, ideal)).epsilon(1e-12));
    const Matrix4cd leaky = 0.97 * u;
    const auto chi = chi_from_unitary(leaky);
    CHECK(chi.trace() == doctest::Approx((leaky.adjoint() * leaky).trace().real() / 4.0));
    CHECK(gate_fidelity(chi, kPi / 2.0, 0.2) ==
          doctest::Approx(overlap_fidelity(leaky, ideal)).epsilon(1e-12));
  }
}

TEST_CASE("linear-inversion tomography reconstructs the superoperator") {
  std::mt19937 rng(11);
  const Matrix4cd u = random_unitary(rng);
  const auto inputs = tomography_inputs();
  CHECK(inputs.size() == 16);
  std::vector<Matrix4cd> outputs;
  for (const auto& rho : inputs) outputs.push_back(u * rho * u.adjoint());
  const Matrix16cd s = superoperator_from_pairs(inputs, outputs);
  CHECK((s - superoperator_from_unitary(u)).norm() < 1e-12);
  const auto chi = chi_from_superoperator(s);
  CHECK(chi.is_valid());
  CHECK(chi.trace() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chi.min_eigenvalue() > -1e-12);
}

TEST_CASE("Pauli basis is orthogonal") {
  const auto& p = pauli_basis();
  for (int m = 0; m < 16; ++m) {
    for (int n = 0; n < 16; ++n) {
      const Complex ip = (p[m].adjoint() * p[n]).trace();
      CHECK(std::abs(ip - (m == n ? 4.0 : 0.0)) < 1e-14);
    }
  }
}

TEST_CASE("conditional phase is invariant under local Z dressings") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  const Matrix4cd base = u_ideal(kPi / 2.0, 0.7);
  const Matrix4cd bent = (base + 0.1 * random_unitary(rng)).householderQr().householderQ();
  for (const Matrix4cd& u : {base, bent}) {
    const double xi = extract_conditional_phase(u);
    for (int k = 0; k < 20; ++k) {
      const Matrix4cd dressed = std::polar(1.0, angle(rng)) * local_z(angle(rng), angle(rng)) * u *
                                local_z(angle(rng), angle(rng));
      const double d = std::remainder(extract_conditional_phase(dressed) - xi, kTwoPi);
      CHECK(std::abs(d) < 1e-10);
    }
  }
  CHECK(extract_conditional_phase(base) == doctest::Approx(0.7));
  CHECK(extract_swap_angle(u_ideal(0.9, 1.1)) == doctest::Approx(0.9));
}

TEST_CASE("local frame removal round trip") {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int k = 0; k < 10; ++k) {
    const double xi = angle(rng);
    LocalFrame f;
    f.global = angle(rng);
    f.a_pre = angle(rng);
    f.b_pre = angle(rng);
    f.a_post = angle(rng);
    f.b_post = angle(rng);
    const Matrix4cd target = u_ideal(kPi / 2.0, xi);
    const Matrix4cd u = f.apply(target);
    const auto r = remove_local_z_frames(u);
    CHECK(std::abs(std::remainder(r.xi - xi, kTwoPi)) < 1e-9);
    CHECK((r.corrected - u_ideal(kPi / 2.0, r.xi)).norm() < 1e-9);
    CHECK((r.frame.apply(u) - r.corrected).norm() < 1e-12);
    // the superoperator form of the same frame
    const Matrix16cd s = r.frame.apply(superoperator_from_unitary(u));
    CHECK(gate_fidelity(chi_from_superoperator(s), kPi / 2.0, r.xi) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("degenerate inputs") {
  Matrix4cd u = u_ideal(kPi / 2.0, 0.0);
  u(0, 0) = 0.0;
  CHECK_THROWS_AS(extract_conditional_phase(u), ExtractionError);
  Matrix4cd leaked = u_ideal(kPi / 2.0, 0.0);
  leaked.col(3) *= 0.3;
  CHECK_THROWS_AS(remove_local_z_frames(leaked), FrameError);
}
