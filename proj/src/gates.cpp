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

#include "fluxsquid/gates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fluxsquid/parallel.hpp"

namespace fluxsquid {

std::string to_string(ComputationalBasis basis) {
  return basis == ComputationalBasis::Bare ? "bare" : "dressed";
}

ComputationalBasis basis_from_string(const std::string& name) {
  if (name == "bare") return ComputationalBasis::Bare;
  if (name == "dressed") return ComputationalBasis::Dressed;
  throw DomainError("unknown computational basis '" + name + "' (expected bare or dressed)");
}

std::string to_string(GateScheme scheme) {
  return scheme == GateScheme::CouplerOnly ? "coupler-only" : "detuned";
}

GateScheme scheme_from_string(const std::string& name) {
  if (name == "coupler-only" || name == "coupler_only") return GateScheme::CouplerOnly;
  if (name == "detuned") return GateScheme::Detuned;
  throw DomainError("unknown gate scheme '" + name + "' (expected coupler-only or detuned)");
}

MatrixXcd computational_states(const CompositeSystem& system, const DriveSchedule& schedule,
                               ComputationalBasis basis) {
  const int dim = system.dimension();
  const int idx[4] = {system.flat_index(0, 0), system.flat_index(0, 1), system.flat_index(1, 0),
                      system.flat_index(1, 1)};
  MatrixXcd out = MatrixXcd::Zero(dim, 4);
  if (basis == ComputationalBasis::Bare) {
    for (int k = 0; k < 4; ++k) out(idx[k], k) = 1.0;
    return out;
  }
  const auto spectrum = diagonalize_and_label(hamiltonian_at(system, schedule, 0.0), system.dims);
  const BareLabel labels[4] = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 1, 0}};
  for (int k = 0; k < 4; ++k) {
    VectorXcd v = spectrum.eigenvectors.col(spectrum.index_of(labels[k]));
    const Complex pivot = v(idx[k]);
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
    out.col(k) = v;
  }
  return out;
}

ClosedGateResult simulate_gate_closed(const CompositeSystem& system, const DriveSchedule& schedule,
                                      const GateOptions& options) {
  const DrivenHamiltonian h(system, schedule);
  const MatrixXcd basis = computational_states(system, schedule, options.basis);
  const MatrixXcd final_states = propagate_closed(h, basis, options.integrator);
  ClosedGateResult out;
  out.propagator = basis.adjoint() * final_states;
  for (int k = 0; k < 4; ++k) {
    out.leakage[k] = std::max(0.0, 1.0 - out.propagator.col(k).squaredNorm());
    out.max_leakage = std::max(out.max_leakage, out.leakage[k]);
  }
  out.leakage_warning = out.max_leakage > kLeakageWarning;
  return out;
}

OpenGateResult simulate_gate_open(const CompositeSystem& system, const DriveSchedule& schedule,
                                  const NoiseModel& noise, const ClosedGateResult& closed,
                                  const GateOptions& options) {
  const DrivenHamiltonian h(system, schedule);
  const MatrixXcd basis = computational_states(system, schedule, options.basis);
  const auto inputs = tomography_inputs();
  std::vector<MatrixXcd> embedded;
  embedded.reserve(inputs.size());
  for (const auto& rho : inputs) embedded.push_back(basis * rho * basis.adjoint());

  const auto finals =
      propagate_lindblad(h, jump_operators(noise, system), embedded, options.integrator);
  std::vector<Matrix4cd> outputs;
  outputs.reserve(finals.size());
  for (const auto& rho : finals) outputs.push_back(basis.adjoint() * rho * basis);

  OpenGateResult out;
  out.superoperator = superoperator_from_pairs(inputs, outputs);
  const auto assessed = assess_closed_gate(closed, options.theta);
  out.chi = chi_from_superoperator(assessed.frame.apply(out.superoperator));
  out.fidelity = gate_fidelity(out.chi, options.theta, assessed.xi_sim);
  return out;
}

GateAssessment assess_closed_gate(const ClosedGateResult& closed, double theta) {
  GateAssessment out;
  out.theta_sim = extract_swap_angle(closed.propagator);
  try {
    const auto removal = remove_local_z_frames(closed.propagator, theta);
    out.corrected = removal.corrected;
    out.frame = removal.frame;
    out.xi_sim = removal.xi;
  } catch (const FrameError&) {
    out.frame_removed = false;
    out.corrected = closed.propagator;
    out.frame = LocalFrame{};
    out.xi_sim = 0.0;
  }
  out.fidelity = gate_fidelity(chi_from_unitary(out.corrected), theta, out.xi_sim);
  return out;
}

SchemeSettings SchemeSettings::defaults(GateScheme scheme) {
  SchemeSettings s;
  s.scheme = scheme;
  s.t_r = scheme == GateScheme::CouplerOnly ? 2.0 : 6.0;
  s.phi_s_on = 0.49;
  return s;
}

DriveSchedule make_schedule(const SchemeSettings& settings, double x, double t_g,
                            double park_a) {
  const double t_p = t_g - 2.0 * settings.t_r;
  if (t_p < -1e-12) {
    std::ostringstream msg;
    msg << "gate time " << t_g << " ns shorter than two ramps (" << 2.0 * settings.t_r << " ns)";
    throw DomainError(msg.str());
  }
  DriveSchedule schedule;
  schedule.coupler.phi_off = settings.phi_s_off;
  schedule.coupler.t_r = settings.t_r;
  schedule.coupler.t_p = std::max(0.0, t_p);
  if (settings.scheme == GateScheme::CouplerOnly) {
    schedule.coupler.phi_on = x;
  } else {
    schedule.coupler.phi_on = settings.phi_s_on;
    PulseSpec qubit;
    qubit.phi_off = park_a;
    qubit.phi_on = x;
    qubit.t_r = settings.t_r;
    qubit.t_p = std::max(0.0, t_p);
    schedule.qubit_a = qubit;
  }
  return schedule;
}

SegmentedGate::SegmentedGate(const CompositeSystem& system, const SchemeSettings& settings,
                             double x, const GateOptions& options)
    : settings_(settings), options_(options) {
  const auto schedule = make_schedule(settings, x, 2.0 * settings.t_r, system.qubit_a.phi_ext);
  const DrivenHamiltonian h(system, schedule);
  const int dim = h.dimension();
  const MatrixXcd id = MatrixXcd::Identity(dim, dim);
  u_up_ = propagate_closed_interval(h, id, 0.0, settings.t_r, options.integrator);
  u_down_ = propagate_closed_interval(h, id, settings.t_r, 2.0 * settings.t_r, options.integrator);
  MatrixXcd h_on(dim, dim);
  h.evaluate(settings.t_r, h_on);
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(h_on);
  if (solver.info() != Eigen::Success) throw ConvergenceError("plateau eigensolver failed");
  on_vectors_ = solver.eigenvectors();
  on_energies_ = solver.eigenvalues();
  basis_ = computational_states(system, schedule, options.basis);
}

MatrixXcd SegmentedGate::full_propagator(double t_g) const {
  const double t_p = t_g - 2.0 * settings_.t_r;
  if (t_p < -1e-12) throw DomainError("gate time shorter than two ramps");
  const VectorXcd phases = (-kI * kTwoPi * std::max(0.0, t_p) * on_energies_.cast<Complex>())
                               .array()
                               .exp();
  return u_down_ * (on_vectors_ * phases.asDiagonal() * on_vectors_.adjoint()) * u_up_;
}

ClosedGateResult SegmentedGate::closed(double t_g) const {
  ClosedGateResult out;
  out.propagator = basis_.adjoint() * full_propagator(t_g) * basis_;
  for (int k = 0; k < 4; ++k) {
    out.leakage[k] = std::max(0.0, 1.0 - out.propagator.col(k).squaredNorm());
    out.max_leakage = std::max(out.max_leakage, out.leakage[k]);
  }
  out.leakage_warning = out.max_leakage > kLeakageWarning;
  return out;
}

double SegmentedGate::error(double t_g) const {
  return 1.0 - assess_closed_gate(closed(t_g), options_.theta).fidelity;
}

double gate_error(const CompositeSystem& system, const SchemeSettings& settings, double x,
                  double t_g, const GateOptions& options) {
  return SegmentedGate(system, settings, x, options).error(t_g);
}

std::vector<std::vector<double>> error_landscape(const CompositeSystem& system,
                                                 const SchemeSettings& settings,
                                                 const std::vector<double>& x_grid,
                                                 const std::vector<double>& t_g_grid,
                                                 const GateOptions& options, int workers) {
  const std::size_t nx = x_grid.size();
  const std::size_t nt = t_g_grid.size();
  std::vector<std::vector<double>> out(nx, std::vector<double>(nt, 0.0));
  parallel_for(nx, workers, [&](std::size_t i) {
    const SegmentedGate gate(system, settings, x_grid[i], options);
    for (std::size_t j = 0; j < nt; ++j) out[i][j] = gate.error(t_g_grid[j]);
  });
  return out;
}

OptimizationPoint optimize_gate_time(const CompositeSystem& system, const SchemeSettings& settings,
                                     double x, const OptimizationSettings& opt,
                                     const GateOptions& options) {
  const double lo = std::max(opt.t_g_min, 2.0 * settings.t_r);
  const double hi = opt.t_g_max;
  if (!(hi > lo) || !(opt.coarse_step > 0.0)) throw DomainError("empty gate-time range");
  const SegmentedGate gate(system, settings, x, options);
  auto err = [&](double t) { return gate.error(t); };

  const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / opt.coarse_step)) + 1);
  std::vector<double> ts(n), es(n);
  int best = 0;
  for (int k = 0; k < n; ++k) {
    ts[k] = lo + (hi - lo) * k / (n - 1);
    es[k] = err(ts[k]);
    if (es[k] < es[best]) best = k;
  }

  double a = ts[std::max(0, best - 1)];
  double c = ts[std::min(n - 1, best + 1)];
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = c - g * (c - a), x2 = a + g * (c - a);
  double f1 = err(x1), f2 = err(x2);
  double best_t = ts[best], best_e = es[best];
  while (c - a > opt.tolerance) {
    if (f1 < f2) {
      c = x2;
      x2 = x1;
      f2 = f1;
      x1 = c - g * (c - a);
      f1 = err(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (c - a);
      f2 = err(x2);
    }
  }
  for (const auto& [t, e] : {std::pair{x1, f1}, std::pair{x2, f2}}) {
    if (e < best_e) {
      best_e = e;
      best_t = t;
    }
  }
  return {x, system.squid.d, best_t, best_e};
}

std::vector<OptimizationBin> bin_points(const std::vector<OptimizationPoint>& points,
                                        double x_min, double x_max,
                                        const std::vector<double>& d_values, int bins) {
  if (bins < 1) throw DomainError("bin count must be positive");
  const double width = (x_max > x_min) ? (x_max - x_min) / bins : 1.0;
  std::vector<OptimizationBin> out;
  for (double d : d_values) {
    std::vector<std::vector<double>> binned(bins);
    for (const auto& p : points) {
      if (p.d != d) continue;
      int bin = (x_max > x_min) ? static_cast<int>(std::floor((p.x - x_min) / width)) : 0;
      bin = std::clamp(bin, 0, bins - 1);
      binned[bin].push_back(p.error);
    }
    for (int k = 0; k < bins; ++k) {
      if (binned[k].empty()) continue;
      OptimizationBin row;
      row.x_center = x_min + (k + 0.5) * width;
      row.d = d;
      row.count = static_cast<int>(binned[k].size());
      row.err_min = *std::min_element(binned[k].begin(), binned[k].end());
      row.err_max = *std::max_element(binned[k].begin(), binned[k].end());
      double sum = 0.0;
      for (double e : binned[k]) sum += e;
      row.err_mean = sum / row.count;
      out.push_back(row);
    }
  }
  return out;
}

OptimizationResult optimize_gate(const CircuitSpec& spec, const SchemeSettings& settings,
                                 const std::vector<double>& x_grid,
                                 const std::vector<double>& d_values,
                                 const OptimizationSettings& opt, const GateOptions& options,
                                 int workers) {
  if (x_grid.empty() || d_values.empty()) return {};
  if (opt.bins < 1) throw DomainError("bin count must be positive");
  for (double d : d_values) {
    if (d < 0.0 || d > 0.05) throw DomainError("asymmetry values must lie in [0, 0.05]");
  }
  const auto& b = spec.basis;
  const auto mode_a = build_fluxonium_mode(spec.qubit_a, b.n_fock, b.n_keep, ModeLabel::A);
  const auto mode_b = build_fluxonium_mode(spec.qubit_b, b.n_fock, b.n_keep, ModeLabel::B);
  std::vector<CompositeSystem> systems;
  for (double d : d_values) {
    SquidParams squid = spec.squid;
    squid.d = d;
    squid.phi_s = settings.phi_s_off;
    systems.push_back(assemble_grounded(spec.qubit_a, spec.qubit_b, squid, mode_a, mode_b));
  }

  const std::size_t nx = x_grid.size();
  OptimizationResult out;
  out.points.resize(nx * d_values.size());
  parallel_for(out.points.size(), workers, [&](std::size_t k) {
    const std::size_t di = k / nx;
    const std::size_t xi = k % nx;
    out.points[k] = optimize_gate_time(systems[di], settings, x_grid[xi], opt, options);
  });

  const auto [xmin_it, xmax_it] = std::minmax_element(x_grid.begin(), x_grid.end());
  out.bins = bin_points(out.points, *xmin_it, *xmax_it, d_values, opt.bins);
  return out;
}

}  // namespace fluxsquid
