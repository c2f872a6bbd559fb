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

#include "ghzflux/loop3.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghzflux/dynamics.hpp"

namespace ghzflux {

namespace {

void check_excitations(int excitations) {
  if (excitations != 1 && excitations != 2) {
    throw InputError("loop excitation number must be 1 or 2, got " + std::to_string(excitations));
  }
}

std::array<BasisLabel, 3> block_basis(int excitations) {
  if (excitations == 1) return {BasisLabel("100"), BasisLabel("010"), BasisLabel("001")};
  return {BasisLabel("011"), BasisLabel("101"), BasisLabel("110")};
}

}  // namespace

LoopWindow symmetric_loop_window(double duration) {
  LoopWindow w;
  w.loop = {1, 2, 3};
  w.duration = duration;
  w.phases = {kPi / 2, kPi / 2, kPi / 2};
  return w;
}

Eigen::Matrix3cd circulation_matrix(double g0, int excitations) {
  check_excitations(excitations);
  if (!(g0 > 0.0)) throw InputError("g0 must be positive");
  const SystemConfig config = SystemConfig::uniform(3, g0);
  const HamiltonianMatrix h = effective_hamiltonian(config, symmetric_loop_window());
  const auto basis = block_basis(excitations);
  return block_in_basis(h, basis);
}

LoopEigensystem loop_eigensystem(double g0, int excitations) {
  const Eigen::Matrix3cd m = circulation_matrix(g0, excitations);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> es(m);
  LoopEigensystem out;
  out.basis = block_basis(excitations);
  Eigen::Matrix3cd vecs = es.eigenvectors();
  for (int k = 0; k < 3; ++k) {
    out.eigenvalues[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    int lead = 0;
    while (lead < 2 && std::abs(vecs(lead, k)) < 1e-9) ++lead;
    const Complex ph = std::conj(vecs(lead, k)) / std::abs(vecs(lead, k));
    vecs.col(k) *= ph;
  }
  out.eigenvectors = vecs;
  return out;
}

std::array<double, 3> closed_form_amplitudes(double t, double g0) {
  const double x = std::sqrt(3.0) / 2.0 * g0 * t;
  return {(1.0 + 2.0 * std::cos(x)) / 3.0, (1.0 + 2.0 * std::cos(x - 2.0 * kPi / 3.0)) / 3.0,
          (1.0 + 2.0 * std::cos(x + 2.0 * kPi / 3.0)) / 3.0};
}

std::array<double, 3> closed_form_populations(double t, double g0) {
  const auto a = closed_form_amplitudes(t, g0);
  return {a[0] * a[0], a[1] * a[1], a[2] * a[2]};
}

CirculationTiming circulation_period(double g0) {
  if (!(g0 > 0.0)) throw InputError("g0 must be positive");
  const double t = 4.0 * kPi / (3.0 * std::sqrt(3.0) * g0);
  return {t, 3.0 * t};
}

double coupling_for_swap_time(double swap_time) {
  if (!(swap_time > 0.0)) throw InputError("swap time must be positive");
  return 4.0 * kPi / (3.0 * std::sqrt(3.0) * swap_time);
}

int circulation_direction(const SystemConfig& config, const LoopWindow& window, int excitations) {
  check_excitations(excitations);
  window.validate(config.n_qubits);
  const double flux = loop_flux(window);
  if (std::abs(std::abs(flux) - kPi / 2) > 1e-9) {
    throw PreconditionError("circulation_direction needs |flux| = pi/2, got " + std::to_string(flux));
  }
  const int n = config.n_qubits;
  const auto [a, b, c] = window.loop;
  std::string bits(static_cast<std::size_t>(n), '0');
  auto set = [&](std::string& s, int q, bool v) { s[static_cast<std::size_t>(q - 1)] = v ? '1' : '0'; };
  if (excitations == 1) {
    set(bits, a, true);
  } else {
    set(bits, b, true);
    set(bits, c, true);
  }
  const BasisLabel start(bits);
  std::string fwd = bits, bwd = bits;
  set(fwd, b, start.bit(a));
  set(fwd, c, start.bit(b));
  set(fwd, a, start.bit(c));
  set(bwd, a, start.bit(b));
  set(bwd, b, start.bit(c));
  set(bwd, c, start.bit(a));

  const double t = circulation_period(window.coupling(config)).swap_time;
  const StateVector out =
      evolve_static(make_basis_state(n, start), effective_hamiltonian(config, window), t);
  const double p_fwd = std::norm(out[BasisLabel(fwd).index()]);
  const double p_bwd = std::norm(out[BasisLabel(bwd).index()]);
  if (p_fwd >= 1.0 - 1e-6) return +1;
  if (p_bwd >= 1.0 - 1e-6) return -1;
  throw AccuracyError("no clean transfer after one swap time", std::max(p_fwd, p_bwd));
}

}  // namespace ghzflux
