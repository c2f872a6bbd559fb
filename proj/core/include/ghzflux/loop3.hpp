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

#ifndef GHZFLUX_LOOP3_HPP
#define GHZFLUX_LOOP3_HPP

#include <array>

#include "ghzflux/common.hpp"
#include "ghzflux/hamiltonian.hpp"
#include "ghzflux/qstate.hpp"

namespace ghzflux {

/// Eigenpairs of the three-site loop block, sorted by ascending eigenvalue.
/// Eigenvectors are columns over `basis`, each phased so that its first
/// nonzero component is real and positive.
struct LoopEigensystem {
  std::array<double, 3> eigenvalues{};
  Eigen::Matrix3cd eigenvectors;
  std::array<BasisLabel, 3> basis{BasisLabel("100"), BasisLabel("010"), BasisLabel("001")};
};

struct CirculationTiming {
  double swap_time = 0.0;  // T, ns
  double period = 0.0;     // 3T, ns
};

/// The loop used for the population traces: every leg at phase pi/2.
LoopWindow symmetric_loop_window(double duration = 1.0);

/// Single-excitation block over {100, 010, 001} (excitations = 1), or the
/// two-excitation block over the reversed basis {011, 101, 110}
/// (excitations = 2), of the symmetric pi/2 loop with coupling g0.
Eigen::Matrix3cd circulation_matrix(double g0, int excitations);

LoopEigensystem loop_eigensystem(double g0, int excitations);

/// (P100, P010, P001) of the closed-form single-excitation solution started
/// from |100>.
std::array<double, 3> closed_form_populations(double t, double g0);

/// Complex amplitudes of the same closed form.
std::array<double, 3> closed_form_amplitudes(double t, double g0);

/// T = 4 pi / (3 sqrt(3) g0).
CirculationTiming circulation_period(double g0);

/// Inverse of circulation_period: coupling giving swap time T.
double coupling_for_swap_time(double swap_time);

/// +1 when one swap time carries the loop pattern a -> b -> c forward, -1
/// when it carries it backwards. Starts from the first state of the
/// excitation block restricted to the loop (|a> for one excitation, |bc> for
/// two), every other qubit in |0>.
/// Throws PreconditionError unless |loop_flux| = pi/2 within 1e-9.
int circulation_direction(const SystemConfig& config, const LoopWindow& window, int excitations);

}  // namespace ghzflux

#endif  // GHZFLUX_LOOP3_HPP
