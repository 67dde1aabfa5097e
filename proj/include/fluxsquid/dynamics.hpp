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

#pragma once

// Flux pulses, the driven grounded Hamiltonian, and closed/open propagation.
// Energies are in GHz and times in ns, so the generator is -i 2 pi H.

#include <optional>
#include <vector>

#include "fluxsquid/composite.hpp"

namespace fluxsquid {

/// Cosine-ramp flat-top flux pulse: ramp up over t_r, hold phi_on for t_p,
/// ramp back down over t_r.
struct PulseSpec {
  double phi_off = 0.5;
  double phi_on = 0.5;
  double t_r = 0.0;
  double t_p = 0.0;

  double duration() const { return t_p + 2.0 * t_r; }
  void validate() const;
};

/// Pulse value at time t in [0, duration]; DomainError outside.
double pulse_value(const PulseSpec& pulse, double t);

struct DriveSchedule {
  PulseSpec coupler;
  std::optional<PulseSpec> qubit_a;
  std::optional<PulseSpec> qubit_b;

  double duration() const;
  void validate() const;
};

/// Lifetimes in microseconds; the jump operators convert to ns.
struct NoiseModel {
  double t1_us = 0.0;
  double t_phi_us = 0.0;

  /// T_phi = 2 T_1.
  static NoiseModel from_t1(double t1_us) { return {t1_us, 2.0 * t1_us}; }
  void validate() const;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double initial_step = 1e-3;  // ns
  double min_step = 1e-12;     // ns; smaller accepted steps abort
  long max_steps = 50'000'000;
};

/// Time-dependent grounded Hamiltonian. Qubit flux drives enter linearly in
/// phi (inductor gauge) plus the state-independent quadratic scalar.
class DrivenHamiltonian {
 public:
  DrivenHamiltonian(const CompositeSystem& system, const DriveSchedule& schedule);

  MatrixXcd at(double t) const;
  /// Writes H(t) - energy_offset * I into `out` (preallocated).
  void evaluate(double t, MatrixXcd& out) const;

  int dimension() const { return static_cast<int>(h_static_.rows()); }
  double duration() const { return schedule_.duration(); }
  const DriveSchedule& schedule() const { return schedule_; }

  /// Constant subtracted from H in the propagators (lowest eigenvalue of
  /// H(0)); it only changes the global phase.
  double energy_offset() const { return offset_; }

 private:
  double scalar_shift(double t) const;

  DriveSchedule schedule_;
  SquidParams squid_;
  MatrixXcd h_static_;
  MatrixXcd op_cos_;
  MatrixXcd op_sin_;
  MatrixXcd phi_a_;
  MatrixXcd phi_b_;
  double e_l_a_ = 0.0;
  double e_l_b_ = 0.0;
  double park_a_ = 0.5;
  double park_b_ = 0.5;
  double offset_ = 0.0;
};

MatrixXcd hamiltonian_at(const CompositeSystem& system, const DriveSchedule& schedule, double t);

struct PropagationStats {
  long accepted_steps = 0;
  long rejected_steps = 0;
  double min_step = 0.0;
};

/// Propagate each column of `initial` from t = 0 to the schedule duration.
MatrixXcd propagate_closed(const DrivenHamiltonian& hamiltonian, const MatrixXcd& initial,
                           const IntegratorOptions& options = {},
                           PropagationStats* stats = nullptr);
MatrixXcd propagate_closed(const CompositeSystem& system, const DriveSchedule& schedule,
                           const MatrixXcd& initial, const IntegratorOptions& options = {});

/// Propagate from t_start to t_end within the schedule window.
MatrixXcd propagate_closed_interval(const DrivenHamiltonian& hamiltonian, const MatrixXcd& initial,
                                    double t_start, double t_end,
                                    const IntegratorOptions& options = {},
                                    PropagationStats* stats = nullptr);

/// Relaxation and dephasing operators per qubit, in the parked sweet-spot
/// eigenbasis and embedded in the composite kept basis. Order: L1_A, Lphi_A,
/// L1_B, Lphi_B. Units 1/sqrt(ns).
std::vector<MatrixXcd> jump_operators(const NoiseModel& noise, const CompositeSystem& system);

/// Integrate the Lindblad equation for a batch of density matrices.
std::vector<MatrixXcd> propagate_lindblad(const DrivenHamiltonian& hamiltonian,
                                          const std::vector<MatrixXcd>& jumps,
                                          const std::vector<MatrixXcd>& initial,
                                          const IntegratorOptions& options = {},
                                          PropagationStats* stats = nullptr);
MatrixXcd propagate_lindblad(const CompositeSystem& system, const DriveSchedule& schedule,
                             const NoiseModel& noise, const MatrixXcd& initial,
                             const IntegratorOptions& options = {});

/// Lindblad integration for an arbitrary constant Hamiltonian (GHz) and jump
/// operators; used by property checks on small systems.
MatrixXcd propagate_lindblad_static(const MatrixXcd& hamiltonian,
                                    const std::vector<MatrixXcd>& jumps,
                                    const MatrixXcd& initial, double duration,
                                    const IntegratorOptions& options = {});

}  // namespace fluxsquid
