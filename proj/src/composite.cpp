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

#include "fluxsquid/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fluxsquid/parallel.hpp"

namespace fluxsquid {

namespace {

MatrixXcd identity(int n) { return MatrixXcd::Identity(n, n); }

MatrixXcd hermitian_part(const MatrixXcd& x) { return 0.5 * (x + x.adjoint()); }

MatrixXcd antihermitian_part(const MatrixXcd& x) { return (x - x.adjoint()) / (2.0 * kI); }

void check_square(const MatrixXcd& m, int n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream msg;
    msg << what << " has shape " << m.rows() << "x" << m.cols() << ", expected " << n << "x"
        << n;
    throw AssemblyError(msg.str());
  }
}

void check_mode(const ModeOperators& mode, bool needs_half) {
  const int n = mode.n_keep;
  if (n < 1 || mode.energies.size() != n) throw AssemblyError("mode has inconsistent n_keep");
  check_square(mode.n_op, n, "n_op");
  check_square(mode.exp_iphi, n, "exp_iphi");
  check_square(mode.bare_hamiltonian, n, "bare_hamiltonian");
  if (needs_half) check_square(mode.exp_iphi_half, n, "exp_iphi_half");
}

// Basis-change matrix between two kept product bases built from the same
// underlying single-mode bases: T = kron_k (B_k^from)^H B_k^to.
MatrixXcd transfer_matrix(const std::vector<ModeOperators>& from,
                          const std::vector<ModeOperators>& to) {
  MatrixXcd t = MatrixXcd::Identity(1, 1);
  for (std::size_t k = 0; k < from.size(); ++k) {
    const MatrixXcd& a = from[k].basis;
    const MatrixXcd& b = to[k].basis;
    MatrixXcd block;
    if (a.size() == 0 || b.size() == 0 || a.rows() != b.rows()) {
      block = MatrixXcd::Identity(from[k].n_keep, to[k].n_keep);
    } else {
      block = a.adjoint() * b;
    }
    t = kron(t, block);
  }
  return t;
}

struct Eigen_ {
  VectorXd values;
  MatrixXcd vectors;
};

Eigen_ diagonalize(const MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("composite eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

BareLabel unflatten(int index, const std::vector<int>& dims) {
  BareLabel label{0, 0, 0};
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    label[k] = index % dims[k];
    index /= dims[k];
  }
  return label;
}

LabeledSpectrum make_spectrum(Eigen_ eig, const std::vector<int>& dims, const MatrixXd& overlaps,
                              const std::vector<BareLabel>& reference_labels) {
  LabeledSpectrum out;
  out.energies = std::move(eig.values);
  out.eigenvectors = std::move(eig.vectors);
  out.dims = dims;
  const auto rows = greedy_assignment(overlaps, out.energies);
  out.labels.resize(rows.size());
  out.overlaps.resize(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    out.labels[j] = reference_labels[rows[j]];
    out.overlaps[j] = overlaps(rows[j], static_cast<Eigen::Index>(j));
  }
  return out;
}

std::vector<BareLabel> bare_labels(const std::vector<int>& dims) {
  const int total = std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<int>());
  std::vector<BareLabel> labels(total);
  for (int i = 0; i < total; ++i) labels[i] = unflatten(i, dims);
  return labels;
}

}  // namespace

MatrixXcd CompositeSystem::hamiltonian(double phi_s) const {
  SquidParams s = squid;
  s.phi_s = phi_s;
  return h_static + s.cos_coefficient() * op_cos + s.sin_coefficient() * op_sin;
}

MatrixXcd CompositeSystem::embed(int mode_index, const MatrixXcd& op) const {
  if (mode_index < 0 || mode_index >= static_cast<int>(dims.size())) {
    throw AssemblyError("mode index out of range");
  }
  check_square(op, dims[mode_index], "embedded operator");
  MatrixXcd out = MatrixXcd::Identity(1, 1);
  for (int k = 0; k < static_cast<int>(dims.size()); ++k) {
    out = kron(out, k == mode_index ? op : identity(dims[k]));
  }
  return out;
}

int CompositeSystem::flat_index(int l, int m, int n) const {
  const int idx[3] = {l, m, n};
  int flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= dims[k]) throw AssemblyError("bare index out of range");
    flat = flat * dims[k] + idx[k];
  }
  return flat;
}

CompositeSystem assemble_grounded(const FluxoniumParams& qa, const FluxoniumParams& qb,
                                  const SquidParams& squid, const ModeOperators& mode_a,
                                  const ModeOperators& mode_b) {
  qa.validate();
  qb.validate();
  squid.validate();
  check_mode(mode_a, false);
  check_mode(mode_b, false);

  CompositeSystem sys;
  sys.design = Design::Grounded;
  sys.modes = {mode_a, mode_b};
  sys.dims = {mode_a.n_keep, mode_b.n_keep};
  sys.qubit_a = qa;
  sys.qubit_b = qb;
  sys.squid = squid;

  const int na = mode_a.n_keep;
  const int nb = mode_b.n_keep;
  sys.h_static = kron(mode_a.bare_hamiltonian, identity(nb)) +
                 kron(identity(na), mode_b.bare_hamiltonian) +
                 squid.j_c * kron(mode_a.n_op, mode_b.n_op);

  // exp(i(phi_A - phi_B)) = exp(i phi_A) (x) exp(-i phi_B); both factors commute.
  const MatrixXcd x = kron(mode_a.exp_iphi, mode_b.exp_iphi.adjoint());
  sys.op_cos = hermitian_part(x);
  sys.op_sin = antihermitian_part(x);
  return sys;
}

CompositeSystem assemble_floating(const FluxoniumParams& qa, const FluxoniumParams& qb,
                                  const SquidParams& squid, const SloshingParams& sloshing,
                                  const ModeOperators& mode_a, const ModeOperators& mode_b,
                                  const ModeOperators& mode_sl) {
  qa.validate();
  qb.validate();
  squid.validate();
  sloshing.validate();
  check_mode(mode_a, true);
  check_mode(mode_b, true);
  check_mode(mode_sl, false);

  CompositeSystem sys;
  sys.design = Design::Floating;
  sys.modes = {mode_a, mode_b, mode_sl};
  sys.dims = {mode_a.n_keep, mode_b.n_keep, mode_sl.n_keep};
  sys.qubit_a = qa;
  sys.qubit_b = qb;
  sys.squid = squid;

  const int na = mode_a.n_keep;
  const int nb = mode_b.n_keep;
  const int ns = mode_sl.n_keep;
  const MatrixXcd ia = identity(na);
  const MatrixXcd ib = identity(nb);
  const MatrixXcd is = identity(ns);

  // Unsplit form: the sloshing block carries only its charging term, the whole
  // SQUID potential lives in op_cos/op_sin.
  sys.h_static = kron(kron(mode_a.bare_hamiltonian, ib), is) +
                 kron(kron(ia, mode_b.bare_hamiltonian), is) +
                 kron(kron(ia, ib), mode_sl.bare_hamiltonian) +
                 squid.j_c * kron(kron(mode_a.n_op, mode_b.n_op), is);
  if (sloshing.j_sl != 0.0) {
    const MatrixXcd n_minus = kron(kron(mode_a.n_op, ib), is) - kron(kron(ia, mode_b.n_op), is);
    const MatrixXcd n_sl = kron(kron(ia, ib), mode_sl.n_op);
    sys.h_static += sloshing.j_sl * n_minus * n_sl;
  }

  // exp(i(phi_A/2 - phi_B/2 - phi_sl))
  const MatrixXcd x =
      kron(kron(mode_a.exp_iphi_half, mode_b.exp_iphi_half.adjoint()), mode_sl.exp_iphi.adjoint());
  sys.op_cos = hermitian_part(x);
  sys.op_sin = antihermitian_part(x);
  return sys;
}

CompositeSystem assemble(const CircuitSpec& spec, Design design) {
  const auto& b = spec.basis;
  const auto mode_a = build_fluxonium_mode(spec.qubit_a, b.n_fock, b.n_keep, ModeLabel::A);
  const auto mode_b = build_fluxonium_mode(spec.qubit_b, b.n_fock, b.n_keep, ModeLabel::B);
  if (design == Design::Grounded) {
    return assemble_grounded(spec.qubit_a, spec.qubit_b, spec.squid, mode_a, mode_b);
  }
  const auto mode_sl =
      build_sloshing_mode(spec.sloshing, spec.squid, b.n_charge_cut, b.n_keep_sl);
  return assemble_floating(spec.qubit_a, spec.qubit_b, spec.squid, spec.sloshing, mode_a, mode_b,
                           mode_sl);
}

int LabeledSpectrum::index_of(const BareLabel& label) const {
  for (std::size_t j = 0; j < labels.size(); ++j) {
    if (labels[j] == label) return static_cast<int>(j);
  }
  std::ostringstream msg;
  msg << "no eigenstate carries label (" << label[0] << "," << label[1] << "," << label[2] << ")";
  throw LabelingError(msg.str());
}

std::vector<int> greedy_assignment(const MatrixXd& overlaps, const VectorXd& energies) {
  const Eigen::Index n_ref = overlaps.rows();
  const Eigen::Index n_eig = overlaps.cols();
  if (n_ref < n_eig) throw LabelingError("fewer reference states than eigenstates");

  struct Pair {
    double overlap;
    double energy;
    Eigen::Index ref;
    Eigen::Index eig;
  };
  std::vector<Pair> pairs;
  pairs.reserve(static_cast<std::size_t>(n_ref * n_eig));
  for (Eigen::Index j = 0; j < n_eig; ++j) {
    for (Eigen::Index i = 0; i < n_ref; ++i) pairs.push_back({overlaps(i, j), energies(j), i, j});
  }
  // Sort by overlap, descending; treat overlaps closer than 1e-9 as equal and
  // prefer the lower-energy eigenstate. Quantising keeps the order strict-weak.
  auto key = [](double v) { return std::llround(v * 1e9); };
  std::stable_sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
    const auto ka = key(a.overlap);
    const auto kb = key(b.overlap);
    if (ka != kb) return ka > kb;
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.eig != b.eig) return a.eig < b.eig;
    return a.ref < b.ref;
  });

  std::vector<int> assigned(static_cast<std::size_t>(n_eig), -1);
  std::vector<char> used(static_cast<std::size_t>(n_ref), 0);
  Eigen::Index remaining = n_eig;
  for (const auto& p : pairs) {
    if (remaining == 0) break;
    if (assigned[p.eig] >= 0 || used[p.ref]) continue;
    assigned[p.eig] = static_cast<int>(p.ref);
    used[p.ref] = 1;
    --remaining;
  }
  return assigned;
}

LabeledSpectrum diagonalize_and_label(const MatrixXcd& hamiltonian, const std::vector<int>& dims) {
  auto eig = diagonalize(hamiltonian);
  const MatrixXd overlaps = eig.vectors.cwiseAbs();
  return make_spectrum(std::move(eig), dims, overlaps, bare_labels(dims));
}

LabeledSpectrum diagonalize_and_label(const CompositeSystem& system) {
  return diagonalize_and_label(system.hamiltonian(), system.dims);
}

std::vector<LabeledSpectrum> spectrum_vs_flux(const CircuitSpec& spec, Design design,
                                              const std::vector<double>& flux_grid, int workers) {
  const std::size_t n = flux_grid.size();
  std::vector<LabeledSpectrum> out(n);
  if (n == 0) return out;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(flux_grid[i] > flux_grid[i - 1]) && !(flux_grid[i] < flux_grid[i - 1])) {
      throw DomainError("flux grid must be strictly monotone");
    }
    if ((flux_grid[i] - flux_grid[i - 1]) * (flux_grid[1] - flux_grid[0]) < 0.0) {
      throw DomainError("flux grid must be strictly monotone");
    }
  }

  // Eigensolves are independent; labels are continued serially afterwards.
  std::vector<CompositeSystem> systems(n);
  std::vector<Eigen_> eigs(n);
  const auto& b = spec.basis;
  const auto mode_a = build_fluxonium_mode(spec.qubit_a, b.n_fock, b.n_keep, ModeLabel::A);
  const auto mode_b = build_fluxonium_mode(spec.qubit_b, b.n_fock, b.n_keep, ModeLabel::B);
  parallel_for(n, workers, [&](std::size_t i) {
    SquidParams squid = spec.squid;
    squid.phi_s = flux_grid[i];
    if (design == Design::Grounded) {
      systems[i] = assemble_grounded(spec.qubit_a, spec.qubit_b, squid, mode_a, mode_b);
    } else {
      const auto mode_sl = build_sloshing_mode(spec.sloshing, squid, b.n_charge_cut, b.n_keep_sl);
      systems[i] = assemble_floating(spec.qubit_a, spec.qubit_b, squid, spec.sloshing, mode_a,
                                     mode_b, mode_sl);
    }
    eigs[i] = diagonalize(systems[i].hamiltonian());
  });

  std::size_t start = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if (std::abs(flux_grid[i] - 0.5) < std::abs(flux_grid[start] - 0.5)) start = i;
  }
  const auto& dims = systems[start].dims;
  out[start] =
      make_spectrum(eigs[start], dims, eigs[start].vectors.cwiseAbs(), bare_labels(dims));

  auto continue_from = [&](std::size_t prev, std::size_t cur) {
    const MatrixXcd t = transfer_matrix(systems[prev].modes, systems[cur].modes);
    const MatrixXd overlaps = (out[prev].eigenvectors.adjoint() * t * eigs[cur].vectors).cwiseAbs();
    out[cur] = make_spectrum(eigs[cur], dims, overlaps, out[prev].labels);
    // Report overlaps against the bare product basis of this point.
    for (std::size_t j = 0; j < out[cur].labels.size(); ++j) {
      const auto& l = out[cur].labels[j];
      const int flat = systems[cur].flat_index(l[0], l[1], l[2]);
      out[cur].overlaps[j] = std::abs(out[cur].eigenvectors(flat, static_cast<Eigen::Index>(j)));
    }
  };
  for (std::size_t i = start; i + 1 < n; ++i) continue_from(i, i + 1);
  for (std::size_t i = start; i > 0; --i) continue_from(i, i - 1);
  return out;
}

}  // namespace fluxsquid
