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

// sqrt(iSWAP)-like gate simulation, error landscapes and t_g optimisation.

#include <optional>
#include <vector>

#include "fluxsquid/dynamics.hpp"
#include "fluxsquid/tomography.hpp"

namespace fluxsquid {

/// Which states span the computational subspace. Bare: products of the parked
/// sweet-spot qubit eigenstates |lm>_pi. Dressed: eigenstates of the full
/// Hamiltonian at the start of the schedule carrying labels 00, 01, 10, 11.
enum class ComputationalBasis { Bare, Dressed };

enum class GateScheme { CouplerOnly, Detuned };

std::string to_string(ComputationalBasis basis);
ComputationalBasis basis_from_string(const std::string& name);
std::string to_string(GateScheme scheme);
GateScheme scheme_from_string(const std::string& name);

struct GateOptions {
  ComputationalBasis basis = ComputationalBasis::Bare;
  IntegratorOptions integrator;
  double theta = kPi / 2.0;
};

/// dim x 4 matrix whose columns are the computational basis states.
MatrixXcd computational_states(const CompositeSystem& system, const DriveSchedule& schedule,
                               ComputationalBasis basis);

inline constexpr double kLeakageWarning = 0.05;

struct ClosedGateResult {
  Matrix4cd propagator;             // raw computational block
  std::array<double, 4> leakage{};  // 1 - |column|^2
  double max_leakage = 0.0;
  bool leakage_warning = false;
};

struct OpenGateResult {
  Matrix16cd superoperator;  // raw computational-block superoperator
  ProcessMatrix chi;         // after local frame removal
  double fidelity = 0.0;
};

ClosedGateResult simulate_gate_closed(const CompositeSystem& system, const DriveSchedule& schedule,
                                      const GateOptions& options = {});

/// QPT by linear inversion over the 16 product inputs. The local Z frame and
/// xi are taken from `closed` (the noiseless run of the same schedule).
OpenGateResult simulate_gate_open(const CompositeSystem& system, const DriveSchedule& schedule,
                                  const NoiseModel& noise, const ClosedGateResult& closed,
                                  const GateOptions& options = {});

struct GateAssessment {
  double theta_sim = 0.0;
  double xi_sim = 0.0;
  double fidelity = 0.0;
  bool frame_removed = true;  // false if frame removal was impossible
  Matrix4cd corrected;
  LocalFrame frame;
};

/// Frame removal + chi + fidelity against u_ideal(theta, xi_sim). When the
/// frame cannot be fitted (strong leakage), falls back to the raw propagator
/// and xi = 0.
GateAssessment assess_closed_gate(const ClosedGateResult& closed, double theta = kPi / 2.0);

struct SchemeSettings {
  GateScheme scheme = GateScheme::CouplerOnly;
  double t_r = 2.0;          // ns
  double phi_s_on = 0.49;    // coupler plateau for the detuned scheme
  double phi_s_off = 0.5;

  static SchemeSettings defaults(GateScheme scheme);
};

/// Coupler-only: x is Phi_S^on. Detuned: x is Phi_A^on, coupler at phi_s_on,
/// both pulses share t_r and t_p. Requires t_g >= 2 t_r.
DriveSchedule make_schedule(const SchemeSettings& settings, double x, double t_g,
                            double park_a = 0.5);

/// Propagators for one pulse shape at arbitrary plateau length. The ramps do
/// not depend on t_p, so U(t_g) = U_down exp(-2 pi i H_on t_p) U_up is the
/// exact composition of the schedule; only the two ramps are integrated.
class SegmentedGate {
 public:
  SegmentedGate(const CompositeSystem& system, const SchemeSettings& settings, double x,
                const GateOptions& options = {});

  /// Full kept-space propagator for gate time t_g >= 2 t_r.
  MatrixXcd full_propagator(double t_g) const;
  ClosedGateResult closed(double t_g) const;
  double error(double t_g) const;

 private:
  SchemeSettings settings_;
  GateOptions options_;
  MatrixXcd basis_;
  MatrixXcd u_up_;
  MatrixXcd u_down_;
  MatrixXcd on_vectors_;
  VectorXd on_energies_;
};

/// Closed-system 1 - F at one (x, t_g) point.
double gate_error(const CompositeSystem& system, const SchemeSettings& settings, double x,
                  double t_g, const GateOptions& options = {});

/// errors[i][j] for x_grid[i], t_g_grid[j].
std::vector<std::vector<double>> error_landscape(const CompositeSystem& system,
                                                 const SchemeSettings& settings,
                                                 const std::vector<double>& x_grid,
                                                 const std::vector<double>& t_g_grid,
                                                 const GateOptions& options = {},
                                                 int workers = 1);

struct OptimizationPoint {
  double x = 0.0;
  double d = 0.0;
  double t_g = 0.0;
  double error = 0.0;
};

struct OptimizationBin {
  double x_center = 0.0;
  double d = 0.0;
  double err_mean = 0.0;
  double err_min = 0.0;
  double err_max = 0.0;
  int count = 0;
};

struct OptimizationSettings {
  double t_g_min = 5.0;
  double t_g_max = 20.0;
  double coarse_step = 0.1;  // ns
  double tolerance = 1e-3;   // ns, golden-section bracket width
  int bins = 100;
};

struct OptimizationResult {
  std::vector<OptimizationPoint> points;  // ordered by d, then x
  std::vector<OptimizationBin> bins;      // ordered by d, then bin; empty bins omitted
};

/// Minimise the closed-system error over t_g for one x.
OptimizationPoint optimize_gate_time(const CompositeSystem& system, const SchemeSettings& settings,
                                     double x, const OptimizationSettings& opt,
                                     const GateOptions& options = {});

/// For each d in d_values and x in x_grid, optimise t_g; bin over x.
/// Groups points into equal-width x bins per d; empty bins are omitted.
std::vector<OptimizationBin> bin_points(const std::vector<OptimizationPoint>& points,
                                        double x_min, double x_max,
                                        const std::vector<double>& d_values, int bins);

OptimizationResult optimize_gate(const CircuitSpec& spec, const SchemeSettings& settings,
                                 const std::vector<double>& x_grid,
                                 const std::vector<double>& d_values,
                                 const OptimizationSettings& opt, const GateOptions& options = {},
                                 int workers = 1);

}  // namespace fluxsquid
