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

#ifndef GHZFLUX_DYNAMICS_HPP
#define GHZFLUX_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "ghzflux/common.hpp"
#include "ghzflux/hamiltonian.hpp"
#include "ghzflux/qstate.hpp"

namespace ghzflux {

/// Per-qubit relaxation (sigma^-) and pure-dephasing rates, 1/ns. Dephasing
/// enters the master equation as a sigma^z collapse operator at rate
/// gamma_phi/2, so coherences decay as exp(-gamma_phi t).
struct NoiseRates {
  std::vector<double> decay;
  std::vector<double> dephasing;

  static NoiseRates none(int n_qubits);
  static NoiseRates uniform(int n_qubits, double gamma, double gamma_phi = 0.0);
  static NoiseRates from_config(const SystemConfig& config);

  bool silent() const;
  void validate(int n_qubits) const;
};

/// Fixed-step classical RK4 settings. Every integrator in this module repeats
/// its run at half the step and rejects the result when the two disagree by
/// more than `tolerance`.
struct IntegratorSettings {
  double step = 0.0;  // ns
  double tolerance = 1e-8;
  bool check_step_halving = true;

  /// swap_time / 2000, the default for interaction-frame runs.
  static IntegratorSettings effective_frame(double swap_time);
  /// 2 pi / (40 max omega), the default for lab-frame runs.
  static IntegratorSettings lab_frame(const SystemConfig& config);
};

/// exp(-i H t) through an eigendecomposition of H, computed once. Hamiltonians
/// flagged as excitation-conserving are diagonalised block by block.
class StaticPropagator {
 public:
  explicit StaticPropagator(const HamiltonianMatrix& h);

  StateVector evolve(const StateVector& state, double duration) const;
  CMatrix unitary(double duration) const;

 private:
  struct Block {
    std::vector<Eigen::Index> indices;
    Eigen::VectorXd energies;
    CMatrix vectors;
  };
  int n_qubits_;
  std::vector<Block> blocks_;
};

StateVector evolve_static(const StateVector& state, const HamiltonianMatrix& h, double duration);

/// exp(+i sum_q (omega_q/2) sigma^z_q t): lab state to interaction picture.
StateVector interaction_frame(const StateVector& state, const SystemConfig& config, double t);

/// Called with (t, lab-frame state) after every accepted step.
using LabObserver = std::function<void(double, const StateVector&)>;

/// Integrates i dpsi/dt = H(t) psi for the full modulated-coupling
/// Hamiltonian from t0 to t1.
///
/// The bare qubit part is diagonal and is propagated exactly; the coupling
/// part, with all its counter-rotating terms, is stepped with RK4 in the frame
/// co-rotating with the bare frequencies (integrating-factor RK4). This keeps
/// the norm drift far below tolerance at GHz qubit frequencies where a plain
/// RK4 step would not.
///
/// Throws InputError when settings.step > 2 pi / (20 max omega) and
/// AccuracyError when the norm drifts by more than the tolerance or step
/// halving changes the final state.
StateVector evolve_lab(const StateVector& state, const SystemConfig& config,
                       std::span<const CouplingSpec> specs, double t0, double t1,
                       const IntegratorSettings& settings, const LabObserver& observer = {});

/// RK4 one-step propagator I + hG + (hG)^2/2 + (hG)^3/6 + (hG)^4/24 for the
/// autonomous system dx/dt = G x.
CMatrix rk4_step_matrix(const CMatrix& generator, double h);

/// dρ/dt = -i[H,ρ] + sum_q gamma_q D[sigma^-_q]ρ + sum_q (gamma_phi_q/2) D[sigma^z_q]ρ
/// integrated with RK4 on the full density matrix. Brute force; cost grows as
/// 4^N per step.
DensityMatrix evolve_lindblad(const DensityMatrix& rho, const HamiltonianMatrix& h,
                              const NoiseRates& noise, double duration,
                              const IntegratorSettings& settings);

/// Master-equation propagator for a Hamiltonian acting on a few `active`
/// qubits of a larger register. The dissipators of the other qubits commute
/// with everything else, so their exact single-qubit channels are applied
/// directly and only the active sub-register (as a 4^k x 4^k superoperator)
/// is integrated with RK4.
class LocalLindbladPropagator {
 public:
  /// `local_h` acts on the sub-register formed by `active` in the given order.
  LocalLindbladPropagator(int n_qubits, std::vector<int> active, const HamiltonianMatrix& local_h,
                          const NoiseRates& noise, double duration,
                          const IntegratorSettings& settings);

  /// Local superoperator followed by the idle channel on every other qubit.
  DensityMatrix apply(const DensityMatrix& rho) const;
  /// Local superoperator only; for composing several disjoint windows.
  DensityMatrix apply_local(const DensityMatrix& rho) const;
  const CMatrix& superoperator() const { return superop_; }
  std::size_t active_mask() const;

 private:
  int n_qubits_;
  std::vector<int> active_;
  NoiseRates noise_;
  double duration_;
  CMatrix superop_;  // column-major vec on the active sub-register
};

/// Exact amplitude-damping plus dephasing channel on every qubit whose bit in
/// `skip_mask` is clear, for time `duration`.
DensityMatrix apply_idle_noise(const DensityMatrix& rho, const NoiseRates& noise, double duration,
                               std::size_t skip_mask = 0);

/// Monte-Carlo wavefunction ensemble. Each trajectory owns its own generator
/// seeded from (seed, index), so results do not depend on evaluation order.
/// The first jump threshold of trajectory k is stratified into
/// [k/n, (k+1)/n) to reduce the variance of the jump count.
class TrajectoryEnsemble {
 public:
  TrajectoryEnsemble(const StateVector& initial, int n_trajectories, std::uint64_t seed);

  void evolve(const HamiltonianMatrix& h, const NoiseRates& noise, double duration,
              const IntegratorSettings& settings);
  void apply(const PulseEvent& pulse);

  int size() const { return static_cast<int>(members_.size()); }
  DensityMatrix density_matrix() const;
  double mean_fidelity(const StateVector& target) const;
  /// Total number of quantum jumps taken so far.
  long jumps() const;

 private:
  struct Member {
    CVector psi;  // unnormalised between jumps
    std::mt19937_64 rng;
    double threshold;
    long jumps = 0;
  };
  int n_qubits_;
  std::vector<Member> members_;
};

/// Ensemble average over n_traj trajectories; n_traj >= 100.
DensityMatrix evolve_trajectories(const StateVector& state, const HamiltonianMatrix& h,
                                  const NoiseRates& noise, double duration,
                                  const IntegratorSettings& settings, int n_traj,
                                  std::uint64_t seed);

double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace ghzflux

#endif  // GHZFLUX_DYNAMICS_HPP
