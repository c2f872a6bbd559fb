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

#include <algorithm>
#include <cmath>
#include <string>

#include "ghzflux/dynamics.hpp"

namespace ghzflux {

namespace {

std::mt19937_64 member_rng(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

double uniform01(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Picks a collapse operator with probability proportional to <L^dag L> and
// applies it.
void jump(CVector& psi, int n, const NoiseRates& noise, std::mt19937_64& rng) {
  const double norm2 = psi.squaredNorm();
  std::vector<double> weights;
  weights.reserve(2 * static_cast<std::size_t>(n));
  for (int q = 1; q <= n; ++q) {
    const std::size_t m = qubit_mask(q, n);
    double up = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if (static_cast<std::size_t>(i) & m) up += std::norm(psi(i));
    }
    weights.push_back(noise.decay[static_cast<std::size_t>(q - 1)] * up);
    weights.push_back(0.5 * noise.dephasing[static_cast<std::size_t>(q - 1)] * norm2);
  }
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return;
  const double pick = uniform01(rng) * total;
  std::size_t chosen = weights.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    if (pick < acc && weights[k] > 0.0) {
      chosen = k;
      break;
    }
  }
  while (weights[chosen] == 0.0) --chosen;

  const int q = static_cast<int>(chosen / 2) + 1;
  const std::size_t m = qubit_mask(q, n);
  if (chosen % 2 == 0) {
    CVector out = CVector::Zero(psi.size());
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if (static_cast<std::size_t>(i) & m) out(static_cast<Eigen::Index>(static_cast<std::size_t>(i) ^ m)) = psi(i);
    }
    psi = std::move(out);
  } else {
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if (!(static_cast<std::size_t>(i) & m)) psi(i) = -psi(i);
    }
  }
  psi /= psi.norm();
}

CMatrix matrix_power(CMatrix base, long exponent) {
  CMatrix result = CMatrix::Identity(base.rows(), base.cols());
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    exponent >>= 1;
    if (exponent > 0) base = base * base;
  }
  return result;
}

CMatrix no_jump_generator(const HamiltonianMatrix& h, const NoiseRates& noise) {
  const int n = h.n_qubits();
  CMatrix heff = h.matrix();
  for (Eigen::Index i = 0; i < heff.rows(); ++i) {
    double loss = 0.0;
    for (int q = 1; q <= n; ++q) {
      if (static_cast<std::size_t>(i) & qubit_mask(q, n)) loss += noise.decay[static_cast<std::size_t>(q - 1)];
      loss += 0.5 * noise.dephasing[static_cast<std::size_t>(q - 1)];
    }
    heff(i, i) -= Complex(0.0, 0.5 * loss);
  }
  return Complex(0.0, -1.0) * heff;
}

}  // namespace

TrajectoryEnsemble::TrajectoryEnsemble(const StateVector& initial, int n_trajectories,
                                       std::uint64_t seed)
    : n_qubits_(initial.n_qubits()) {
  if (n_trajectories < 1) throw InputError("trajectory ensemble needs at least one member");
  members_.reserve(static_cast<std::size_t>(n_trajectories));
  const CVector start = initial.amplitudes() / initial.norm();
  for (int k = 0; k < n_trajectories; ++k) {
    Member m{start, member_rng(seed, static_cast<std::uint64_t>(k)), 0.0, 0};
    m.threshold = (k + uniform01(m.rng)) / n_trajectories;
    members_.push_back(std::move(m));
  }
}

void TrajectoryEnsemble::evolve(const HamiltonianMatrix& h, const NoiseRates& noise,
                                double duration, const IntegratorSettings& settings) {
  if (h.n_qubits() != n_qubits_) throw InputError("trajectory evolve: dimension mismatch");
  noise.validate(n_qubits_);
  if (duration == 0.0) return;
  if (!(settings.step > 0.0) || !(duration > 0.0)) throw InputError("trajectory evolve: bad step or duration");
  const int n_steps = std::max(1, static_cast<int>(std::ceil(duration / settings.step - 1e-9)));
  const double dt = duration / n_steps;
  const CMatrix gen = no_jump_generator(h, noise);
  const CMatrix step = rk4_step_matrix(gen, dt);

  if (settings.check_step_halving) {
    const CMatrix half = rk4_step_matrix(gen, 0.5 * dt);
    const CMatrix coarse = matrix_power(step, n_steps);
    const CMatrix fine = matrix_power(half * half, n_steps);
    const double change = (fine - coarse).cwiseAbs().maxCoeff();
    if (change > settings.tolerance) {
      throw AccuracyError("trajectory evolve: halving the step changed the propagator by " +
                              std::to_string(change),
                          change);
    }
  }

  // Members that have never jumped carry bit-identical states, so their
  // no-jump path is propagated once and shared.
  std::vector<std::size_t> pristine;
  for (std::size_t k = 0; k < members_.size(); ++k) {
    if (members_[k].jumps == 0) pristine.push_back(k);
  }
  std::sort(pristine.begin(), pristine.end(), [&](std::size_t a, std::size_t b) {
    return members_[a].threshold > members_[b].threshold;
  });
  std::vector<char> diverged(members_.size(), 0);
  if (!pristine.empty()) {
    CVector shared = members_[pristine.front()].psi;
    std::size_t next = 0;
    for (int s = 0; s < n_steps; ++s) {
      shared = step * shared;
      const double norm2 = shared.squaredNorm();
      while (next < pristine.size() && members_[pristine[next]].threshold >= norm2) {
        Member& m = members_[pristine[next]];
        m.psi = shared;
        jump(m.psi, n_qubits_, noise, m.rng);
        m.threshold = uniform01(m.rng);
        ++m.jumps;
        // Remaining steps for this member run individually below.
        diverged[pristine[next]] = 1;
        for (int r = s + 1; r < n_steps; ++r) {
          m.psi = step * m.psi;
          if (m.psi.squaredNorm() <= m.threshold) {
            jump(m.psi, n_qubits_, noise, m.rng);
            m.threshold = uniform01(m.rng);
            ++m.jumps;
          }
        }
        ++next;
      }
    }
    for (std::size_t k = next; k < pristine.size(); ++k) members_[pristine[k]].psi = shared;
  }
  for (std::size_t k = 0; k < members_.size(); ++k) {
    Member& m = members_[k];
    if (m.jumps == 0 || diverged[k]) continue;
    for (int s = 0; s < n_steps; ++s) {
      m.psi = step * m.psi;
      if (m.psi.squaredNorm() <= m.threshold) {
        jump(m.psi, n_qubits_, noise, m.rng);
        m.threshold = uniform01(m.rng);
        ++m.jumps;
      }
    }
  }
}

void TrajectoryEnsemble::apply(const PulseEvent& pulse) {
  for (auto& m : members_) {
    const double norm = m.psi.norm();
    StateVector s(n_qubits_, m.psi / norm);
    m.psi = apply_pulse(s, pulse).amplitudes() * norm;
  }
}

DensityMatrix TrajectoryEnsemble::density_matrix() const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  CMatrix rho = CMatrix::Zero(dim, dim);
  for (const auto& m : members_) {
    const CVector u = m.psi / m.psi.norm();
    rho.noalias() += u * u.adjoint();
  }
  rho /= static_cast<double>(members_.size());
  return DensityMatrix(n_qubits_, std::move(rho));
}

double TrajectoryEnsemble::mean_fidelity(const StateVector& target) const {
  double acc = 0.0;
  for (const auto& m : members_) acc += std::norm(target.amplitudes().dot(m.psi)) / m.psi.squaredNorm();
  return acc / static_cast<double>(members_.size());
}

long TrajectoryEnsemble::jumps() const {
  long total = 0;
  for (const auto& m : members_) total += m.jumps;
  return total;
}

DensityMatrix evolve_trajectories(const StateVector& state, const HamiltonianMatrix& h,
                                  const NoiseRates& noise, double duration,
                                  const IntegratorSettings& settings, int n_traj,
                                  std::uint64_t seed) {
  if (n_traj < 100) throw InputError("evolve_trajectories needs n_traj >= 100");
  TrajectoryEnsemble ensemble(state, n_traj, seed);
  ensemble.evolve(h, noise, duration, settings);
  return ensemble.density_matrix();
}

}  // namespace ghzflux
