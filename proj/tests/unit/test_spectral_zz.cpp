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

#include "doctest.h"
#include "fluxsquid/spectral_zz.hpp"

using namespace fluxsquid;

namespace {

// Independent ZZ: for each bare computational state pick the eigenstate with
// the largest overlap.
double zz_by_argmax(const CompositeSystem& sys) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> es(sys.hamiltonian());
  auto energy = [&](int l, int m) {
    Eigen::Index best = 0;
    es.eigenvectors().row(sys.flat_index(l, m)).cwiseAbs().maxCoeff(&best);
    return es.eigenvalues()(best);
  };
  return energy(1, 1) - energy(0, 1) - energy(1, 0) + energy(0, 0);
}

}  // namespace

TEST_CASE("static ZZ matches an argmax-labelled oracle") {
  for (double d : {0.0, 0.02, 0.05}) {
    CircuitSpec s;
    s.squid.d = d;
    for (Design design : {Design::Grounded, Design::Floating}) {
      const auto sys = assemble(s, design);
      CHECK(static_zz(sys).zeta == doctest::Approx(zz_by_argmax(sys)).epsilon(1e-9));
    }
  }
}

TEST_CASE("ZZ vanishes at the off-point with symmetric junctions") {
  CHECK(std::abs(static_zz(CircuitSpec{}, Design::Grounded).zeta) < 1e-9);
}

TEST_CASE("ZZ is continuous in d and nonzero away from d = 0") {
  double previous = 1.0;
  for (double delta : {1e-2, 1e-3, 1e-4}) {
    CircuitSpec s;
    s.squid.d = delta;
    const double z = std::abs(static_zz(s, Design::Grounded).zeta);
    CHECK(z < previous);
    previous = z;
  }
  CHECK(previous < 1e-6);
}

TEST_CASE("ZZ is invariant under a constant shift of one qubit") {
  CircuitSpec s;
  s.squid.d = 0.03;
  auto sys = assemble(s, Design::Grounded);
  const double before = static_zz(sys).zeta;
  sys.h_static += sys.embed(0, 1.7 * MatrixXcd::Identity(4, 4));
  CHECK(std::abs(static_zz(sys).zeta - before) < 1e-12);
}

TEST_CASE("mirror symmetry: swap qubits and flip d") {
  CircuitSpec s;
  s.squid.d = 0.04;
  CircuitSpec m = s;
  std::swap(m.qubit_a, m.qubit_b);
  m.squid.d = -0.04;
  const double a = static_zz(s, Design::Grounded).zeta;
  const double b = static_zz(m, Design::Grounded).zeta;
  CHECK(b == doctest::Approx(a).epsilon(1e-9));
}

TEST_CASE("ZZ map forces J_c = 0 and is identical for any worker count") {
  CircuitSpec s;
  s.squid.j_c = 0.3;
  const std::vector<double> ej{2.0, 5.0}, dg{0.0, 0.03};
  const auto serial = zz_map(s, ej, dg, Design::Grounded, 1);
  const auto parallel = zz_map(s, ej, dg, Design::Grounded, 3);
  for (std::size_t i = 0; i < ej.size(); ++i) {
    for (std::size_t j = 0; j < dg.size(); ++j) {
      CHECK(serial[i][j].zeta == parallel[i][j].zeta);
      CHECK(serial[i][j].squid.j_c == 0.0);
    }
  }
  CHECK(std::abs(serial[0][0].zeta) < 1e-9);
}

TEST_CASE("J_c* search") {
  const CircuitSpec s;
  SUBCASE("no asymmetry needs no shunt") {
    const auto r = find_jc_star(s, 5.0, 0.0);
    CHECK(r.converged);
    CHECK(r.j_c_star == 0.0);
  }
  SUBCASE("returned root cancels ZZ when re-inserted") {
    const auto r = find_jc_star(s, 3.0, 0.02);
    REQUIRE(r.converged);
    CHECK(r.j_c_star > 0.1);
    CHECK(r.j_c_star < 0.6);
    CircuitSpec check = s;
    check.squid.e_j_sigma = 3.0;
    check.squid.d = 0.02;
    check.squid.j_c = r.j_c_star;
    CHECK(std::abs(static_zz(check, Design::Grounded).zeta) < 1e-6);
  }
  SUBCASE("bad options") {
    JcStarOptions bad;
    bad.scan_points = 1;
    CHECK_THROWS_AS(find_jc_star(s, 3.0, 0.02, bad), DomainError);
  }
}
