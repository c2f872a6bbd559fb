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

#ifndef GHZFLUX_HAMILTONIAN_HPP
#define GHZFLUX_HAMILTONIAN_HPP

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "ghzflux/common.hpp"
#include "ghzflux/qstate.hpp"

namespace ghzflux {

/// Physical parameters of an N-qubit register. Angular frequencies in rad/ns,
/// rates in 1/ns.
///
/// `chirality_sign` multiplies every coupling phase when the effective
/// hopping e^{i s phi} sigma_i^+ sigma_j^- is formed. The value -1 is the one
/// obtained by applying the rotating-wave approximation to the modulated
/// coupling g0 cos(Delta t + phi), and it is the value for which the
/// phi = pi/2 loop moves |100> to |010> after one swap time.
struct SystemConfig {
  int n_qubits = 0;
  std::vector<double> omega;
  double g0 = 0.0;
  std::vector<double> decay;
  std::vector<double> dephasing;
  int chirality_sign = -1;

  /// n qubits, zero frequencies and rates, coupling g0.
  static SystemConfig uniform(int n_qubits, double g0);
  /// Alternating two-frequency lattice: odd qubits at `omega_odd`, even
  /// qubits at `omega_odd - detuning`, so that every second neighbour is
  /// degenerate.
  static SystemConfig alternating(int n_qubits, double g0, double omega_odd, double detuning);

  void validate() const;
};

/// One modulated coupling g_ij(t) = g0 cos(detuning t + phase) between
/// qubits i and j, with detuning = omega_i - omega_j.
struct CouplingSpec {
  int i = 1;
  int j = 2;
  double g0 = 0.0;
  double detuning = 0.0;
  double phase = 0.0;

  static CouplingSpec between(const SystemConfig& config, int i, int j, double phase);
  /// Same physical coupling with the pair written the other way round.
  CouplingSpec reversed() const { return {j, i, g0, -detuning, -phase}; }
  bool degenerate() const { return detuning == 0.0; }
};

/// A three-qubit loop switched on for [start, start + duration). Phases belong
/// to the legs (a,b), (b,c), (c,a) in that orientation.
struct LoopWindow {
  std::array<int, 3> loop{1, 2, 3};
  double start = 0.0;
  double duration = 0.0;
  std::array<double, 3> phases{0.0, 0.0, 0.0};
  std::optional<double> g0;

  double end() const { return start + duration; }
  bool involves(int q) const { return loop[0] == q || loop[1] == q || loop[2] == q; }
  double coupling(const SystemConfig& config) const { return g0.value_or(config.g0); }
  void validate(int n_qubits) const;

  friend bool operator==(const LoopWindow&, const LoopWindow&) = default;
};

/// Dense Hermitian operator on the full register (or on a sub-register).
/// `conserves_excitation` is set by builders whose output commutes with the
/// total excitation number, which lets propagators work block by block.
class HamiltonianMatrix {
 public:
  HamiltonianMatrix(int n_qubits, CMatrix matrix, bool conserves_excitation);

  int n_qubits() const { return n_qubits_; }
  Eigen::Index dimension() const { return matrix_.rows(); }
  const CMatrix& matrix() const { return matrix_; }
  bool conserves_excitation() const { return conserves_excitation_; }

  double hermiticity_error() const;
  /// max |[H, sum_i n_i]| element.
  double excitation_commutator_error() const;

 private:
  int n_qubits_;
  CMatrix matrix_;
  bool conserves_excitation_;
};

double coupling_amplitude(const CouplingSpec& spec, double t);

/// H(t) = sum_i (omega_i/2) sigma^z_i + sum g_ij(t)(sigma_i^+ sigma_j^- + h.c.).
/// Degenerate pairs carry the static hopping (g0/2) e^{-i phase} instead,
/// which is the exact lab-frame counterpart of the effective hopping.
HamiltonianMatrix lab_hamiltonian(const SystemConfig& config, std::span<const CouplingSpec> specs,
                                  double t);

/// Interaction-picture hopping Hamiltonian of one loop window, embedded in
/// the full register.
HamiltonianMatrix effective_hamiltonian(const SystemConfig& config, const LoopWindow& window);
/// Sum over several simultaneously active (qubit-disjoint) windows; zero
/// matrix for an empty list.
HamiltonianMatrix effective_hamiltonian(const SystemConfig& config,
                                        std::span<const LoopWindow> windows);

/// Lab-frame couplings whose rotating-wave limit is `window`.
std::vector<CouplingSpec> lab_couplings(const SystemConfig& config, const LoopWindow& window);

struct ExcitationBlock {
  CMatrix matrix;
  std::vector<BasisLabel> basis;
  std::vector<std::size_t> indices;
};

/// k-excitation diagonal block of H in increasing-index order.
ExcitationBlock excitation_block(const HamiltonianMatrix& h, int k);

/// Same block with an explicitly ordered basis.
CMatrix block_in_basis(const HamiltonianMatrix& h, std::span<const BasisLabel> basis);

/// Wraps an angle into (-pi, pi].
double wrap_angle(double phi);

/// phi_ab + phi_bc + phi_ca reduced into (-pi, pi], as written on the window.
double loop_flux(const LoopWindow& window);

/// Flux threading the effective Hamiltonian: chirality_sign * loop_flux.
double effective_flux(const SystemConfig& config, const LoopWindow& window);

}  // namespace ghzflux

#endif  // GHZFLUX_HAMILTONIAN_HPP
