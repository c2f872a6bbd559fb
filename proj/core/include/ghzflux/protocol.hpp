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

#ifndef GHZFLUX_PROTOCOL_HPP
#define GHZFLUX_PROTOCOL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ghzflux/dynamics.hpp"
#include "ghzflux/hamiltonian.hpp"
#include "ghzflux/qstate.hpp"

namespace ghzflux {

/// Leg phases (a,b), (b,c), (c,a) of every GHZ-chain window.
inline constexpr std::array<double, 3> kGhzWindowPhases{0.0, kPi / 2, 0.0};

/// Executable protocol: instantaneous pulses plus coupling windows.
/// Pulses sharing a time stamp run in list order. A pulse at a window
/// boundary runs after the window ending there and before the window
/// starting there.
struct Schedule {
  int n_qubits = 0;
  std::vector<PulseEvent> pulses;
  std::vector<LoopWindow> windows;

  double duration() const;
  int count_pi_pulses() const;
  int count_half_pi_pulses() const;
  /// Stable sort of pulses by time and windows by start.
  void canonicalize();
  /// Throws InputError naming the offending qubit when windows sharing a
  /// qubit overlap or a pulse falls strictly inside a window on its qubit.
  void validate() const;
};

struct Checkpoint {
  double time = 0.0;
  std::string label;
  StateVector expected;
  double fidelity = 0.0;
};

struct CheckpointTranscript {
  std::vector<Checkpoint> checkpoints;
};

/// GHZ preparation chain for n >= 2 qubits with swap time T from g0.
/// Odd n: pi/2 on Q1 and a flip on Q2 at t = 0, then windows
/// G(1,2,3), G(3,4,5), ... of length T; after each window Q(a) is flipped
/// and, when qubits remain, Q(a+3) as well. Even n: Bell pair on (Q1,Q2)
/// via pi/2 + CNOT, a flip on Q3, then the same chain from G(2,3,4).
Schedule build_ghz_schedule(int n, double g0);

struct IdealRun {
  StateVector final_state;
  CheckpointTranscript transcript;
  double ghz_fidelity = 0.0;
};

/// Pulses as exact unitaries, windows through exp(-i H t). When
/// `record_checkpoints` is set the transcript holds the fidelity to the
/// expected chain state after every pulse time and at the end of every
/// window, plus a final entry against the GHZ target.
IdealRun execute_ideal(const SystemConfig& config, const Schedule& schedule,
                       bool record_checkpoints = true);

enum class NoisyMethod {
  local,  // per-window superoperator plus exact idle channels
  full,   // RK4 on the whole density matrix
};

struct NoisyRun {
  DensityMatrix final_state;
  double fidelity = 0.0;
};

NoisyRun execute_noisy(const SystemConfig& config, const Schedule& schedule,
                       const NoiseRates& noise, const IntegratorSettings& settings,
                       NoisyMethod method = NoisyMethod::local);

struct TrajectoryRun {
  DensityMatrix final_state;
  double fidelity = 0.0;
  long jumps = 0;
};

/// Same protocol unravelled into quantum trajectories; an independent check
/// on execute_noisy.
TrajectoryRun execute_trajectories(const SystemConfig& config, const Schedule& schedule,
                                   const NoiseRates& noise, const IntegratorSettings& settings,
                                   int n_trajectories, std::uint64_t seed);

struct CheckpointReport {
  bool pass = false;
  std::vector<Checkpoint> failures;
  std::string summary() const;
};

CheckpointReport verify_checkpoints(const CheckpointTranscript& transcript, double tolerance);

}  // namespace ghzflux

#endif  // GHZFLUX_PROTOCOL_HPP
