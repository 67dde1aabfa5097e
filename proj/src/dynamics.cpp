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

#include "fluxsquid/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/numeric/odeint.hpp>

namespace fluxsquid {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<Complex>;

// Adaptive RKF78 with our own step loop so step-size collapse surfaces as an
// IntegrationError instead of a silent hang.
template <typename Rhs, typename AfterStep>
void integrate_adaptive(Rhs&& rhs, State& x, double t_start, double t_end,
                        const IntegratorOptions& options, AfterStep&& after_step,
                        PropagationStats* stats) {
  const double duration = t_end - t_start;
  PropagationStats local;
  local.min_step = duration;
  if (duration <= 0.0) {
    if (stats) *stats = local;
    return;
  }
  auto stepper = odeint::make_controlled(options.atol, options.rtol,
                                         odeint::runge_kutta_fehlberg78<State>());
  auto system = [&](const State& in, State& out, double t) { rhs(in, out, t); };

  double t = t_start;
  double dt = std::min(options.initial_step, duration);
  const double end_slack = 1e-13 * std::max(1.0, std::abs(t_end));
  while (t_end - t > end_slack) {
    const bool last = t + dt >= t_end;
    if (last) dt = t_end - t;
    const double attempted = dt;
    const auto result = stepper.try_step(system, x, t, dt);
    if (result == odeint::success) {
      ++local.accepted_steps;
      if (!last) local.min_step = std::min(local.min_step, attempted);
      after_step(x);
    } else {
      ++local.rejected_steps;
      if (dt < options.min_step) {
        std::ostringstream msg;
        msg << "step size underflow at t=" << t << " ns (dt=" << dt << " ns, accepted "
            << local.accepted_steps << ", rejected " << local.rejected_steps << ")";
        throw IntegrationError(msg.str());
      }
    }
    if (local.accepted_steps + local.rejected_steps > options.max_steps) {
      std::ostringstream msg;
      msg << "step budget exhausted at t=" << t << " ns of " << t_end << " ns";
      throw IntegrationError(msg.str());
    }
  }
  if (stats) *stats = local;
}

State to_state(const MatrixXcd& m) { return State(m.data(), m.data() + m.size()); }

double pulse_or_park(const std::optional<PulseSpec>& p, double t, double park) {
  if (!p) return park;
  if (t >= p->duration()) return p->phi_off;
  return pulse_value(*p, t);
}

}  // namespace

void PulseSpec::validate() const {
  if (!(t_r >= 0.0) || !(t_p >= 0.0)) throw DomainError("pulse times must be non-negative");
  if (!std::isfinite(phi_off) || !std::isfinite(phi_on)) {
    throw DomainError("pulse fluxes must be finite");
  }
}

double pulse_value(const PulseSpec& p, double t) {
  const double tg = p.duration();
  if (!(t >= 0.0) || !(t <= tg)) {
    std::ostringstream msg;
    msg << "time " << t << " ns outside pulse window [0, " << tg << "]";
    throw DomainError(msg.str());
  }
  const double amp = p.phi_on - p.phi_off;
  if (t < p.t_r) return p.phi_off + amp * 0.5 * (1.0 - std::cos(kPi * t / p.t_r));
  if (t <= p.t_r + p.t_p) return p.phi_on;
  const double tau = tg - t;  // time remaining, mirrors the rising ramp
  if (tau <= 0.0) return p.phi_off;
  return p.phi_off + amp * 0.5 * (1.0 - std::cos(kPi * tau / p.t_r));
}

double DriveSchedule::duration() const {
  double d = coupler.duration();
  if (qubit_a) d = std::max(d, qubit_a->duration());
  if (qubit_b) d = std::max(d, qubit_b->duration());
  return d;
}

void DriveSchedule::validate() const {
  coupler.validate();
  if (qubit_a) qubit_a->validate();
  if (qubit_b) qubit_b->validate();
}

void NoiseModel::validate() const {
  if (!(t1_us > 0.0) || !(t_phi_us > 0.0)) throw DomainError("T1 and T_phi must be positive");
}

DrivenHamiltonian::DrivenHamiltonian(const CompositeSystem& system, const DriveSchedule& schedule)
    : schedule_(schedule), squid_(system.squid) {
  if (system.design != Design::Grounded) {
    throw DomainError("gate dynamics are implemented for the grounded design only");
  }
  schedule_.validate();
  h_static_ = system.h_static;
  op_cos_ = system.op_cos;
  op_sin_ = system.op_sin;
  phi_a_ = system.embed(0, system.modes[0].phi_op);
  phi_b_ = system.embed(1, system.modes[1].phi_op);
  e_l_a_ = system.qubit_a.e_l;
  e_l_b_ = system.qubit_b.e_l;
  park_a_ = system.qubit_a.phi_ext;
  park_b_ = system.qubit_b.phi_ext;
  if (schedule_.qubit_a && std::abs(schedule_.qubit_a->phi_off - park_a_) > 1e-12) {
    throw DomainError("qubit A pulse must start at the parked flux");
  }
  if (schedule_.qubit_b && std::abs(schedule_.qubit_b->phi_off - park_b_) > 1e-12) {
    throw DomainError("qubit B pulse must start at the parked flux");
  }
  Eigen::SelfAdjointEigenSolver<MatrixXcd> solver(at(0.0), Eigen::EigenvaluesOnly);
  offset_ = solver.eigenvalues()(0);
}

double DrivenHamiltonian::scalar_shift(double t) const {
  double shift = 0.0;
  const double fa = pulse_or_park(schedule_.qubit_a, t, park_a_);
  const double fb = pulse_or_park(schedule_.qubit_b, t, park_b_);
  shift += 0.5 * e_l_a_ * kTwoPi * kTwoPi * (fa * fa - park_a_ * park_a_);
  shift += 0.5 * e_l_b_ * kTwoPi * kTwoPi * (fb * fb - park_b_ * park_b_);
  return shift;
}

void DrivenHamiltonian::evaluate(double t, MatrixXcd& out) const {
  t = std::clamp(t, 0.0, schedule_.duration());
  SquidParams s = squid_;
  s.phi_s = pulse_or_park(schedule_.coupler, t, schedule_.coupler.phi_off);
  out = h_static_;
  out.noalias() += s.cos_coefficient() * op_cos_;
  out.noalias() += s.sin_coefficient() * op_sin_;
  if (schedule_.qubit_a) {
    const double fa = pulse_or_park(schedule_.qubit_a, t, park_a_);
    out.noalias() += (e_l_a_ * kTwoPi * (fa - park_a_)) * phi_a_;
  }
  if (schedule_.qubit_b) {
    const double fb = pulse_or_park(schedule_.qubit_b, t, park_b_);
    out.noalias() += (e_l_b_ * kTwoPi * (fb - park_b_)) * phi_b_;
  }
  out.diagonal().array() += scalar_shift(t) - offset_;
}

MatrixXcd DrivenHamiltonian::at(double t) const {
  MatrixXcd out(h_static_.rows(), h_static_.cols());
  evaluate(t, out);
  out.diagonal().array() += offset_;
  return out;
}

MatrixXcd hamiltonian_at(const CompositeSystem& system, const DriveSchedule& schedule, double t) {
  return DrivenHamiltonian(system, schedule).at(t);
}

MatrixXcd propagate_closed(const DrivenHamiltonian& h, const MatrixXcd& initial,
                           const IntegratorOptions& options, PropagationStats* stats) {
  return propagate_closed_interval(h, initial, 0.0, h.duration(), options, stats);
}

MatrixXcd propagate_closed_interval(const DrivenHamiltonian& h, const MatrixXcd& initial,
                                    double t_start, double t_end,
                                    const IntegratorOptions& options, PropagationStats* stats) {
  if (!(t_start >= 0.0) || !(t_end <= h.duration() + 1e-12) || t_end < t_start) {
    throw DomainError("propagation interval outside the schedule");
  }
  const Eigen::Index dim = h.dimension();
  if (initial.rows() != dim) throw DomainError("initial state dimension mismatch");
  const Eigen::Index cols = initial.cols();
  State x = to_state(initial);
  MatrixXcd hm(dim, dim);
  auto rhs = [&](const State& in, State& out, double t) {
    h.evaluate(t, hm);
    Eigen::Map<const MatrixXcd> psi(in.data(), dim, cols);
    Eigen::Map<MatrixXcd> dpsi(out.data(), dim, cols);
    dpsi.noalias() = (-kI * kTwoPi) * (hm * psi);
  };
  integrate_adaptive(rhs, x, t_start, t_end, options, [](State&) {}, stats);
  return Eigen::Map<MatrixXcd>(x.data(), dim, cols);
}

MatrixXcd propagate_closed(const CompositeSystem& system, const DriveSchedule& schedule,
                           const MatrixXcd& initial, const IntegratorOptions& options) {
  return propagate_closed(DrivenHamiltonian(system, schedule), initial, options);
}

std::vector<MatrixXcd> jump_operators(const NoiseModel& noise, const CompositeSystem& system) {
  noise.validate();
  const double t1_ns = noise.t1_us * 1e3;
  const double tphi_ns = noise.t_phi_us * 1e3;
  std::vector<MatrixXcd> out;
  for (int mode = 0; mode < 2; ++mode) {
    const int n = system.dims[mode];
    MatrixXcd lower = MatrixXcd::Zero(n, n);
    lower(0, 1) = 1.0 / std::sqrt(t1_ns);
    MatrixXcd dephase = MatrixXcd::Zero(n, n);
    dephase(0, 0) = std::sqrt(2.0 / tphi_ns);
    dephase(1, 1) = -std::sqrt(2.0 / tphi_ns);
    out.push_back(system.embed(mode, lower));
    out.push_back(system.embed(mode, dephase));
  }
  return out;
}

namespace {

// dρ/dt = -i (K ρ - ρ K^H) + Σ L ρ L^H with K = 2π H - (i/2) Σ L^H L.
template <typename HamiltonianAt>
std::vector<MatrixXcd> lindblad_batch(HamiltonianAt&& h_at, Eigen::Index dim, double duration,
                                      const std::vector<MatrixXcd>& jumps,
                                      const std::vector<MatrixXcd>& initial,
                                      const IntegratorOptions& options, PropagationStats* stats) {
  const std::size_t batch = initial.size();
  State x;
  x.reserve(batch * dim * dim);
  for (const auto& rho : initial) {
    if (rho.rows() != dim || rho.cols() != dim) throw DomainError("density matrix shape mismatch");
    x.insert(x.end(), rho.data(), rho.data() + rho.size());
  }
  MatrixXcd decay = MatrixXcd::Zero(dim, dim);
  for (const auto& l : jumps) decay += l.adjoint() * l;

  MatrixXcd hm(dim, dim);
  MatrixXcd k(dim, dim);
  auto rhs = [&](const State& in, State& out, double t) {
    h_at(t, hm);
    k = kTwoPi * hm - 0.5 * kI * decay;
    for (std::size_t b = 0; b < batch; ++b) {
      Eigen::Map<const MatrixXcd> rho(in.data() + b * dim * dim, dim, dim);
      Eigen::Map<MatrixXcd> drho(out.data() + b * dim * dim, dim, dim);
      drho.noalias() = -kI * (k * rho);
      drho.noalias() += kI * (rho * k.adjoint());
      for (const auto& l : jumps) drho.noalias() += l * rho * l.adjoint();
    }
  };
  auto symmetrize = [&](State& s) {
    for (std::size_t b = 0; b < batch; ++b) {
      Eigen::Map<MatrixXcd> rho(s.data() + b * dim * dim, dim, dim);
      const MatrixXcd herm = 0.5 * (rho + rho.adjoint());
      rho = herm;
    }
  };
  integrate_adaptive(rhs, x, 0.0, duration, options, symmetrize, stats);

  std::vector<MatrixXcd> out;
  out.reserve(batch);
  for (std::size_t b = 0; b < batch; ++b) {
    out.emplace_back(Eigen::Map<MatrixXcd>(x.data() + b * dim * dim, dim, dim));
  }
  return out;
}

}  // namespace

std::vector<MatrixXcd> propagate_lindblad(const DrivenHamiltonian& h,
                                          const std::vector<MatrixXcd>& jumps,
                                          const std::vector<MatrixXcd>& initial,
                                          const IntegratorOptions& options,
                                          PropagationStats* stats) {
  return lindblad_batch([&](double t, MatrixXcd& out) { h.evaluate(t, out); }, h.dimension(),
                        h.duration(), jumps, initial, options, stats);
}

MatrixXcd propagate_lindblad(const CompositeSystem& system, const DriveSchedule& schedule,
                             const NoiseModel& noise, const MatrixXcd& initial,
                             const IntegratorOptions& options) {
  const DrivenHamiltonian h(system, schedule);
  return propagate_lindblad(h, jump_operators(noise, system), {initial}, options).front();
}

MatrixXcd propagate_lindblad_static(const MatrixXcd& hamiltonian,
                                    const std::vector<MatrixXcd>& jumps,
                                    const MatrixXcd& initial, double duration,
                                    const IntegratorOptions& options) {
  return lindblad_batch([&](double, MatrixXcd& out) { out = hamiltonian; }, hamiltonian.rows(),
                        duration, jumps, {initial}, options, nullptr)
      .front();
}

}  // namespace fluxsquid
