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

#include "fluxsquid/spectral_zz.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fluxsquid/parallel.hpp"

namespace fluxsquid {

namespace {

ZzResult zz_from_spectrum(const LabeledSpectrum& spectrum, Design design,
                          const SquidParams& squid) {
  const BareLabel l00{0, 0, 0}, l01{0, 1, 0}, l10{1, 0, 0}, l11{1, 1, 0};
  ZzResult out;
  out.design = design;
  out.squid = squid;
  for (const auto& label : {l00, l01, l10, l11}) {
    const double w = spectrum.overlaps[spectrum.index_of(label)];
    out.min_label_weight = std::min(out.min_label_weight, w * w);
  }
  if (out.min_label_weight < kLabelWeightFloor) {
    std::ostringstream msg;
    msg << "computational labels ambiguous (min squared overlap " << out.min_label_weight << ")";
    throw LabelingError(msg.str());
  }
  out.zeta = spectrum.energy_of(l11) - spectrum.energy_of(l01) - spectrum.energy_of(l10) +
             spectrum.energy_of(l00);
  return out;
}

// Grounded off-point Hamiltonian split as H0 + J_c * N for the J_c* search.
struct JcFamily {
  MatrixXcd h0;
  MatrixXcd n_n;
  std::vector<int> dims;
  SquidParams squid;

  double zeta(double j_c) const {
    SquidParams s = squid;
    s.j_c = j_c;
    return zz_from_spectrum(diagonalize_and_label(h0 + j_c * n_n, dims), Design::Grounded, s)
        .zeta;
  }
};

}  // namespace

ZzResult static_zz(const CompositeSystem& system) {
  return zz_from_spectrum(diagonalize_and_label(system), system.design, system.squid);
}

ZzResult static_zz(const CircuitSpec& spec, Design design) {
  return static_zz(assemble(spec, design));
}

std::vector<std::vector<ZzResult>> zz_map(const CircuitSpec& spec,
                                          const std::vector<double>& e_j_sigma_grid,
                                          const std::vector<double>& d_grid, Design design,
                                          int workers) {
  const std::size_t ne = e_j_sigma_grid.size();
  const std::size_t nd = d_grid.size();
  std::vector<std::vector<ZzResult>> out(ne, std::vector<ZzResult>(nd));

  const auto& b = spec.basis;
  const auto mode_a = build_fluxonium_mode(spec.qubit_a, b.n_fock, b.n_keep, ModeLabel::A);
  const auto mode_b = build_fluxonium_mode(spec.qubit_b, b.n_fock, b.n_keep, ModeLabel::B);
  parallel_for(ne * nd, workers, [&](std::size_t k) {
    const std::size_t i = k / nd;
    const std::size_t j = k % nd;
    SquidParams squid = spec.squid;
    squid.e_j_sigma = e_j_sigma_grid[i];
    squid.d = d_grid[j];
    squid.j_c = 0.0;
    SloshingParams sloshing = spec.sloshing;
    sloshing.j_sl = 0.0;
    if (design == Design::Grounded) {
      out[i][j] = static_zz(assemble_grounded(spec.qubit_a, spec.qubit_b, squid, mode_a, mode_b));
    } else {
      const auto mode_sl = build_sloshing_mode(sloshing, squid, b.n_charge_cut, b.n_keep_sl);
      out[i][j] = static_zz(assemble_floating(spec.qubit_a, spec.qubit_b, squid, sloshing, mode_a,
                                              mode_b, mode_sl));
    }
  });
  return out;
}

JcStarResult find_jc_star(const CircuitSpec& spec, double e_j_sigma, double d,
                          const JcStarOptions& options) {
  if (!(options.j_max > 0.0) || options.scan_points < 2 || !(options.tolerance > 0.0)) {
    throw DomainError("invalid J_c* search options");
  }
  SquidParams squid = spec.squid;
  squid.e_j_sigma = e_j_sigma;
  squid.d = d;
  squid.phi_s = 0.5;
  squid.j_c = 0.0;
  squid.validate();

  const auto& b = spec.basis;
  const auto mode_a = build_fluxonium_mode(spec.qubit_a, b.n_fock, b.n_keep, ModeLabel::A);
  const auto mode_b = build_fluxonium_mode(spec.qubit_b, b.n_fock, b.n_keep, ModeLabel::B);
  const auto sys = assemble_grounded(spec.qubit_a, spec.qubit_b, squid, mode_a, mode_b);
  const JcFamily family{sys.hamiltonian(), kron(mode_a.n_op, mode_b.n_op), sys.dims, squid};

  JcStarResult out;
  auto record = [&](double j, double z) {
    if (std::abs(z) < out.best_abs_zeta || (j == 0.0)) {
      out.best_abs_zeta = std::abs(z);
      out.best_j_c = j;
    }
  };
  auto finish = [&](double j, double z) {
    out.j_c_star = j;
    out.zeta = z;
    out.converged = std::abs(z) < options.tolerance;
    record(j, z);
    return out;
  };

  const double z0 = family.zeta(0.0);
  out.best_abs_zeta = std::abs(z0);
  out.best_j_c = 0.0;
  if (std::abs(z0) < options.tolerance) return finish(0.0, z0);

  // Coarse scan for the first sign change of the signed ZZ.
  const int n = options.scan_points;
  std::vector<double> js(n), zs(n);
  js[0] = 0.0;
  zs[0] = z0;
  for (int k = 1; k < n; ++k) {
    js[k] = options.j_max * k / (n - 1);
    zs[k] = family.zeta(js[k]);
    record(js[k], zs[k]);
    if (std::signbit(zs[k]) != std::signbit(zs[k - 1])) {
      double lo = js[k - 1], hi = js[k];
      double zlo = zs[k - 1];
      while (hi - lo > options.x_tolerance) {
        const double mid = 0.5 * (lo + hi);
        const double zm = family.zeta(mid);
        record(mid, zm);
        if (std::abs(zm) < 1e-3 * options.tolerance) return finish(mid, zm);
        if (std::signbit(zm) == std::signbit(zlo)) {
          lo = mid;
          zlo = zm;
        } else {
          hi = mid;
        }
      }
      const double root = 0.5 * (lo + hi);
      return finish(root, family.zeta(root));
    }
  }

  // No sign change: golden-section on |zeta| around the best scan point.
  int best = 0;
  for (int k = 1; k < n; ++k) {
    if (std::abs(zs[k]) < std::abs(zs[best])) best = k;
  }
  double a = js[std::max(0, best - 1)];
  double c = js[std::min(n - 1, best + 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - g * (c - a), x2 = a + g * (c - a);
  double f1 = std::abs(family.zeta(x1)), f2 = std::abs(family.zeta(x2));
  while (c - a > options.x_tolerance) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = std::abs(family.zeta(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = std::abs(family.zeta(x2));
    }
  }
  const double xm = 0.5 * (a + c);
  return finish(xm, family.zeta(xm));
}

}  // namespace fluxsquid
