// Copyright 2026 The ghzflux Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GHZFLUX_ANALYSIS_HPP
#define GHZFLUX_ANALYSIS_HPP

#include <span>
#include <string>
#include <vector>

#include "ghzflux/dynamics.hpp"
#include "ghzflux/hamiltonian.hpp"
#include "ghzflux/protocol.hpp"
#include "ghzflux/qstate.hpp"

namespace ghzflux {

struct PopulationTrace {
  std::vector<double> times;  // ns
  std::vector<BasisLabel> labels;
  std::vector<std::vector<double>> columns;  // columns[k][i] = P(labels[k]) at times[i]

  const std::vector<double>& column(const std::string& label) const;
  /// Header `t_ns,P_<bits>,...`.
  std::string to_csv() const;
};

/// Uniformly sampled populations over [0, t_max] under one window. Columns
/// cover the loop states with the initial excitation count on the loop,
/// other qubits held at their initial values.
PopulationTrace population_trace(const SystemConfig& config, const LoopWindow& window,
                                 const BasisLabel& initial, double t_max, int samples);

struct FidelityReport {
  int n = 0;
  double gamma = 0.0;      // 1/ns
  double gamma_phi = 0.0;  // 1/ns
  double swap_time = 0.0;  // ns
  double fidelity = 0.0;
  double step = 0.0;  // ns
  double ideal_fidelity = 0.0;
  double wall_time = 0.0;  // s; not written to files
};

/// Header `n,gamma_per_ns,gamma_phi_per_ns,T_ns,fidelity,step_ns,ideal_fidelity`.
std::string reports_to_csv(std::span<const FidelityReport> reports);
/// JSON array of objects with the CSV field names.
std::string reports_to_json(std::span<const FidelityReport> reports);

/// GHZ chain per (n, gamma), run ideal and with uniform decay. A zero
/// `settings.step` selects swap_time / 2000. Rows come sorted by n, then gamma.
std::vector<FidelityReport> fidelity_vs_n(std::span<const int> ns, std::span<const double> gammas,
                                          double g0, IntegratorSettings settings,
                                          double gamma_phi = 0.0,
                                          NoisyMethod method = NoisyMethod::local);

/// Lab frame used by the RWA sweep: loop (1,2,3) with Q1 and Q3 at
/// `omega_high`, Q2 detuned below by `detuning` (rad/ns).
struct RwaTemplate {
  double omega_high = 2.0 * kPi * 5.0;
  double detuning = 2.0 * kPi * 0.2;
  std::array<double, 3> phases = kGhzWindowPhases;
  double step = 0.0;  // 0: 2 pi / (40 omega_high)
};

struct RwaRow {
  double ratio = 0.0;
  double g0 = 0.0;     // rad/ns
  double delta = 0.0;  // rad/ns
  double swap_time = 0.0;
  double infidelity = 0.0;        // max over the window of 1 - |<eff|lab>|^2
  double final_infidelity = 0.0;  // same deficit at t = T only
  double step = 0.0;
};

/// One window of length T per ratio g0/delta in (0, 0.2], starting from
/// (|010> + |110>)/sqrt(2): lab-frame propagation compared in the rotating
/// frame against the effective Hamiltonian.
std::vector<RwaRow> rwa_sweep(std::span<const double> ratios, const RwaTemplate& tmpl = {});

/// Header `ratio,g0_rad_per_ns,delta_rad_per_ns,T_ns,infidelity,final_infidelity,step_ns`.
std::string rwa_to_csv(std::span<const RwaRow> rows);

}  // namespace ghzflux

#endif  // GHZFLUX_ANALYSIS_HPP
