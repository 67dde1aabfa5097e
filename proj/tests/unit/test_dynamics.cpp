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

#include <unsupported/Eigen/MatrixFunctions>

#include "doctest.h"
#include "fluxsquid/dynamics.hpp"

using namespace fluxsquid;

namespace {

CompositeSystem reference_system(double d = 0.0) {
  CircuitSpec s;
  s.squid.d = d;
  return assemble(s, Design::Grounded);
}

DriveSchedule coupler_pulse(double on, double t_r, double t_p) {
  DriveSchedule sched;
  sched.coupler = PulseSpec{0.5, on, t_r, t_p};
  return sched;
}

MatrixXcd unitary_exp(const MatrixXcd& h, double t) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(h);
  const VectorXcd ph = (-kI * kTwoPi * t * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eigenvalue(const MatrixXcd& rho) {
  const MatrixXcd herm = 0.5 * (rho + rho.adjoint());
  return Eigen::SelfAdjointEigenSolver<MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

}  // namespace

TEST_CASE("pulse shape") {
  const PulseSpec p{0.5, 0.47, 2.0, 7.0};
  CHECK(p.duration() == 11.0);
  CHECK(pulse_value(p, 0.0) == 0.5);
  CHECK(pulse_value(p, 1.0) == doctest::Approx(0.485));
  CHECK(pulse_value(p, 2.0) == doctest::Approx(0.47));
  CHECK(pulse_value(p, 5.0) == 0.47);
  CHECK(pulse_value(p, 10.0) == doctest::Approx(0.485));
  CHECK(pulse_value(p, 11.0) == doctest::Approx(0.5));
  // ramps mirror each other
  CHECK(pulse_value(p, 0.3) == doctest::Approx(pulse_value(p, 10.7)).epsilon(1e-14));
  CHECK_THROWS_AS(pulse_value(p, 11.5), DomainError);
  CHECK_THROWS_AS((PulseSpec{0.5, 0.47, -1.0, 1.0}.validate()), DomainError);
}

TEST_CASE("constant Hamiltonian: propagation equals the matrix exponential") {
  const auto sys = reference_system(0.02);
  DriveSchedule sched;
  sched.coupler = PulseSpec{0.47, 0.47, 1.0, 3.0};
  const DrivenHamiltonian h(sys, sched);
  const MatrixXcd id = MatrixXcd::Identity(16, 16);
  const MatrixXcd u = propagate_closed(h, id);
  MatrixXcd hs = sys.hamiltonian(0.47);
  hs.diagonal().array() -= h.energy_offset();
  const MatrixXcd oracle = (-kI * kTwoPi * 5.0 * hs).exp();
  CHECK((u - oracle).norm() < 1e-8);
  CHECK((u - unitary_exp(hs, 5.0)).norm() < 1e-8);
}

TEST_CASE("driven propagation against a midpoint exponential product") {
  const auto sys = reference_system();
  const auto sched = coupler_pulse(0.47, 2.0, 1.0);
  const DrivenHamiltonian h(sys, sched);
  const MatrixXcd id = MatrixXcd::Identity(16, 16);
  const MatrixXcd u = propagate_closed(h, id);

  auto product = [&](int steps) {
    const double dt = h.duration() / steps;
    MatrixXcd acc = id, hm(16, 16);
    for (int k = 0; k < steps; ++k) {
      h.evaluate((k + 0.5) * dt, hm);
      acc = unitary_exp(hm, dt) * acc;
    }
    return acc;
  };
  // midpoint error is O(dt^2); one Richardson step removes it
  const MatrixXcd coarse = product(4000), fine = product(8000);
  const MatrixXcd oracle = (4.0 * fine - coarse) / 3.0;
  MESSAGE("midpoint residual " << (fine - coarse).norm() << ", integrator vs oracle "
                               << (u - oracle).norm());
  CHECK((u - oracle).norm() < 1e-7);
}

TEST_CASE("closed propagation preserves the norm of the full kept space") {
  const auto sys = reference_system(0.05);
  DriveSchedule sched = coupler_pulse(0.49, 6.0, 3.0);
  sched.qubit_a = PulseSpec{0.5, 0.523, 6.0, 3.0};
  const MatrixXcd u = propagate_closed(sys, sched, MatrixXcd::Identity(16, 16));
  CHECK((u.adjoint() * u - MatrixXcd::Identity(16, 16)).norm() < 1e-7);
}

TEST_CASE("linear qubit drive reproduces a statically re-biased fluxonium") {
  CircuitSpec s;
  const ConvergenceOptions no_check{false, 1e-9};
  const auto ma = build_fluxonium_mode(s.qubit_a, 110, 20, ModeLabel::A, no_check);
  const auto mb = build_fluxonium_mode(s.qubit_b, 110, 4, ModeLabel::B, no_check);
  const auto sys = assemble_grounded(s.qubit_a, s.qubit_b, s.squid, ma, mb);
  DriveSchedule sched = coupler_pulse(0.5, 1.0, 2.0);
  sched.qubit_a = PulseSpec{0.5, 0.52, 1.0, 2.0};
  const MatrixXcd driven = hamiltonian_at(sys, sched, 2.0);

  FluxoniumParams biased = s.qubit_a;
  biased.phi_ext = 0.52;
  const auto direct = build_fluxonium_mode(biased, 110, 4, ModeLabel::A);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(driven, Eigen::EigenvaluesOnly);
  // decoupled at the off-point: the lowest levels are E_A(0.52) + E_B
  const auto& eb = mb.energies;
  std::vector<double> expected;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) expected.push_back(direct.energies(i) + eb(j));
  }
  std::sort(expected.begin(), expected.end());
  for (int k = 0; k < 6; ++k) CHECK(es.eigenvalues()(k) == doctest::Approx(expected[k]).epsilon(1e-9));
}

TEST_CASE("analytic T1 decay and dephasing") {
  const auto sys = reference_system();
  const MatrixXcd h = sys.h_static;
  const int one_zero = sys.flat_index(1, 0), zero_zero = sys.flat_index(0, 0);
  const double t = 12.0;  // ns

  SUBCASE("relaxation") {
    const NoiseModel noise{0.010, 1e12};  // T1 = 10 ns
    MatrixXcd rho = MatrixXcd::Zero(16, 16);
    rho(one_zero, one_zero) = 1.0;
    const MatrixXcd out = propagate_lindblad_static(h, jump_operators(noise, sys), rho, t);
    CHECK(out(one_zero, one_zero).real() == doctest::Approx(std::exp(-t / 10.0)).epsilon(1e-8));
    CHECK(out(zero_zero, zero_zero).real() ==
          doctest::Approx(1.0 - std::exp(-t / 10.0)).epsilon(1e-8));
  }
  SUBCASE("dephasing with relaxation") {
    const NoiseModel noise{0.050, 0.040};
    MatrixXcd rho = MatrixXcd::Zero(16, 16);
    rho(zero_zero, zero_zero) = rho(one_zero, one_zero) = 0.5;
    rho(zero_zero, one_zero) = rho(one_zero, zero_zero) = 0.5;
    const MatrixXcd out = propagate_lindblad_static(h, jump_operators(noise, sys), rho, t);
    const double expected = 0.5 * std::exp(-t / (2.0 * 50.0) - 4.0 * t / 40.0);
    CHECK(std::abs(out(zero_zero, one_zero)) == doctest::Approx(expected).epsilon(1e-8));
    CHECK(out.trace().real() == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("driven Lindblad evolution keeps trace and positivity") {
  const auto sys = reference_system(0.01);
  const auto sched = coupler_pulse(0.47, 2.0, 3.0);
  const DrivenHamiltonian h(sys, sched);
  const auto jumps = jump_operators(NoiseModel::from_t1(10.0), sys);
  std::vector<MatrixXcd> inputs;
  VectorXcd psi = VectorXcd::Zero(16);
  psi(sys.flat_index(0, 1)) = 1.0 / std::sqrt(2.0);
  psi(sys.flat_index(1, 0)) = kI / std::sqrt(2.0);
  inputs.push_back(psi * psi.adjoint());
  MatrixXcd mixed = MatrixXcd::Zero(16, 16);
  mixed(0, 0) = mixed(5, 5) = 0.5;
  inputs.push_back(mixed);
  const auto out = propagate_lindblad(h, jumps, inputs);
  for (std::size_t k = 0; k < out.size(); ++k) {
    CHECK(std::abs(out[k].trace().real() - 1.0) < 1e-8);
    CHECK(min_eigenvalue(out[k]) > -1e-8);
    CHECK(hermiticity_defect(out[k]) < 1e-12);
  }
  // without noise the Lindblad result is U rho U^dag
  const MatrixXcd u = propagate_closed(h, MatrixXcd::Identity(16, 16));
  const auto clean = propagate_lindblad(h, {}, inputs);
  CHECK((clean[0] - u * inputs[0] * u.adjoint()).norm() < 1e-8);
}

TEST_CASE("integration failures are reported") {
  const auto sys = reference_system();
  const auto sched = coupler_pulse(0.47, 2.0, 3.0);
  IntegratorOptions opts;
  opts.rtol = 1e-14;
  opts.atol = 1e-16;
  opts.min_step = 0.5;
  CHECK_THROWS_AS(propagate_closed(sys, sched, MatrixXcd::Identity(16, 16), opts),
                  IntegrationError);
  CHECK_THROWS_AS(NoiseModel({0.0, 1.0}).validate(), DomainError);
  auto floating = assemble(CircuitSpec{}, Design::Floating);
  CHECK_THROWS_AS(DrivenHamiltonian(floating, sched), DomainError);
}
