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

#include "ghzflux/hamiltonian.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace ghzflux {

namespace {

void check_qubit(int q, int n) {
  if (q < 1 || q > n) {
    throw InputError("qubit " + std::to_string(q) + " out of range 1.." + std::to_string(n));
  }
}

// Adds c sigma_x^+ sigma_y^- + conj(c) sigma_y^+ sigma_x^-.
void add_hopping(CMatrix& h, int n, int x, int y, Complex c) {
  const std::size_t mx = qubit_mask(x, n);
  const std::size_t my = qubit_mask(y, n);
  const auto dim = static_cast<std::size_t>(h.rows());
  for (std::size_t i = 0; i < dim; ++i) {
    if ((i & mx) || !(i & my)) continue;
    const auto from = static_cast<Eigen::Index>(i);
    const auto to = static_cast<Eigen::Index>(i ^ mx ^ my);
    h(to, from) += c;
    h(from, to) += std::conj(c);
  }
}

struct Leg {
  int from;
  int to;
  double phase;
};

std::array<Leg, 3> legs_of(const LoopWindow& w) {
  return {Leg{w.loop[0], w.loop[1], w.phases[0]}, Leg{w.loop[1], w.loop[2], w.phases[1]},
          Leg{w.loop[2], w.loop[0], w.phases[2]}};
}

}  // namespace

// ------------------------------------------------------------- SystemConfig

SystemConfig SystemConfig::uniform(int n_qubits, double g0) {
  SystemConfig c;
  c.n_qubits = n_qubits;
  c.g0 = g0;
  const auto n = static_cast<std::size_t>(std::max(n_qubits, 0));
  c.omega.assign(n, 0.0);
  c.decay.assign(n, 0.0);
  c.dephasing.assign(n, 0.0);
  return c;
}

SystemConfig SystemConfig::alternating(int n_qubits, double g0, double omega_odd, double detuning) {
  SystemConfig c = uniform(n_qubits, g0);
  for (int q = 1; q <= n_qubits; ++q) {
    c.omega[static_cast<std::size_t>(q - 1)] = (q % 2 == 1) ? omega_odd : omega_odd - detuning;
  }
  return c;
}

void SystemConfig::validate() const {
  if (n_qubits < 2 || n_qubits > 20) throw InputError("system needs 2..20 qubits");
  const auto n = static_cast<std::size_t>(n_qubits);
  if (omega.size() != n || decay.size() != n || dephasing.size() != n) {
    throw InputError("per-qubit parameter lists must have one entry per qubit");
  }
  if (!(g0 > 0.0) || !std::isfinite(g0)) throw InputError("g0 must be positive");
  for (std::size_t q = 0; q < n; ++q) {
    if (!(decay[q] >= 0.0) || !(dephasing[q] >= 0.0)) {
      throw InputError("decay and dephasing rates must be non-negative");
    }
    if (!std::isfinite(omega[q])) throw InputError("qubit frequency is not finite");
  }
  if (chirality_sign != 1 && chirality_sign != -1) throw InputError("chirality_sign must be +1 or -1");
}

// ------------------------------------------------------------- CouplingSpec

CouplingSpec CouplingSpec::between(const SystemConfig& config, int i, int j, double phase) {
  check_qubit(i, config.n_qubits);
  check_qubit(j, config.n_qubits);
  if (i == j) throw InputError("coupling needs two distinct qubits");
  const double d = config.omega[static_cast<std::size_t>(i - 1)] -
                   config.omega[static_cast<std::size_t>(j - 1)];
  return {i, j, config.g0, d, phase};
}

double coupling_amplitude(const CouplingSpec& spec, double t) {
  return spec.g0 * std::cos(spec.detuning * t + spec.phase);
}

// --------------------------------------------------------------- LoopWindow

void LoopWindow::validate(int n_qubits) const {
  for (int q : loop) check_qubit(q, n_qubits);
  if (loop[0] == loop[1] || loop[1] == loop[2] || loop[0] == loop[2]) {
    throw InputError("loop window needs three distinct qubits");
  }
  if (!(duration > 0.0) || !std::isfinite(duration)) throw InputError("window duration must be positive");
  if (!std::isfinite(start)) throw InputError("window start is not finite");
  if (g0 && !(*g0 > 0.0)) throw InputError("window g0 override must be positive");
}

double wrap_angle(double phi) {
  double r = std::remainder(phi, kTwoPi);  // [-pi, pi]
  if (r <= -kPi + 1e-15) r += kTwoPi;
  return r;
}

double loop_flux(const LoopWindow& window) {
  return wrap_angle(window.phases[0] + window.phases[1] + window.phases[2]);
}

double effective_flux(const SystemConfig& config, const LoopWindow& window) {
  return wrap_angle(config.chirality_sign * loop_flux(window));
}

// -------------------------------------------------------- HamiltonianMatrix

HamiltonianMatrix::HamiltonianMatrix(int n_qubits, CMatrix matrix, bool conserves_excitation)
    : n_qubits_(n_qubits), matrix_(std::move(matrix)), conserves_excitation_(conserves_excitation) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (matrix_.rows() != dim || matrix_.cols() != dim) {
    throw InputError("Hamiltonian shape does not match 2^" + std::to_string(n_qubits));
  }
}

double HamiltonianMatrix::hermiticity_error() const {
  return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
}

double HamiltonianMatrix::excitation_commutator_error() const {
  const Eigen::Index dim = dimension();
  double worst = 0.0;
  for (Eigen::Index j = 0; j < dim; ++j) {
    const int nj = std::popcount(static_cast<std::size_t>(j));
    for (Eigen::Index i = 0; i < dim; ++i) {
      const int ni = std::popcount(static_cast<std::size_t>(i));
      worst = std::max(worst, std::abs(matrix_(i, j)) * std::abs(nj - ni));
    }
  }
  return worst;
}

// ----------------------------------------------------------------- builders

HamiltonianMatrix lab_hamiltonian(const SystemConfig& config, std::span<const CouplingSpec> specs,
                                  double t) {
  const int n = config.n_qubits;
  if (n < 1 || config.omega.size() != static_cast<std::size_t>(n)) {
    throw InputError("lab_hamiltonian: config has no per-qubit frequencies");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double e = 0.0;
    for (int q = 1; q <= n; ++q) {
      const bool up = static_cast<std::size_t>(i) & qubit_mask(q, n);
      e += 0.5 * config.omega[static_cast<std::size_t>(q - 1)] * (up ? 1.0 : -1.0);
    }
    h(i, i) = e;
  }
  for (const auto& s : specs) {
    check_qubit(s.i, n);
    check_qubit(s.j, n);
    if (s.i == s.j) throw InputError("coupling needs two distinct qubits");
    const Complex c = s.degenerate() ? 0.5 * s.g0 * std::polar(1.0, -s.phase)
                                     : Complex(coupling_amplitude(s, t), 0.0);
    add_hopping(h, n, s.i, s.j, c);
  }
  return HamiltonianMatrix(n, std::move(h), false);
}

HamiltonianMatrix effective_hamiltonian(const SystemConfig& config,
                                        std::span<const LoopWindow> windows) {
  const int n = config.n_qubits;
  if (n < 1 || n > 20) throw InputError("effective_hamiltonian: bad qubit count");
  const Eigen::Index dim = Eigen::Index{1} << n;
  CMatrix h = CMatrix::Zero(dim, dim);
  for (const auto& w : windows) {
    w.validate(n);
    const double g = w.coupling(config);
    for (const Leg& leg : legs_of(w)) {
      add_hopping(h, n, leg.from, leg.to,
                  0.5 * g * std::polar(1.0, config.chirality_sign * leg.phase));
    }
  }
  return HamiltonianMatrix(n, std::move(h), true);
}

HamiltonianMatrix effective_hamiltonian(const SystemConfig& config, const LoopWindow& window) {
  return effective_hamiltonian(config, std::span<const LoopWindow>(&window, 1));
}

std::vector<CouplingSpec> lab_couplings(const SystemConfig& config, const LoopWindow& window) {
  window.validate(config.n_qubits);
  std::vector<CouplingSpec> out;
  for (const Leg& leg : legs_of(window)) {
    CouplingSpec s = CouplingSpec::between(config, leg.from, leg.to,
                                           -config.chirality_sign * leg.phase);
    s.g0 = window.coupling(config);
    out.push_back(s);
  }
  return out;
}

// ------------------------------------------------------------------- blocks

CMatrix block_in_basis(const HamiltonianMatrix& h, std::span<const BasisLabel> basis) {
  const auto m = static_cast<Eigen::Index>(basis.size());
  CMatrix out(m, m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& lr = basis[static_cast<std::size_t>(r)];
    if (lr.size() != h.n_qubits()) throw InputError("basis label width mismatch");
    for (Eigen::Index c = 0; c < m; ++c) {
      out(r, c) = h.matrix()(static_cast<Eigen::Index>(lr.index()),
                             static_cast<Eigen::Index>(basis[static_cast<std::size_t>(c)].index()));
    }
  }
  return out;
}

ExcitationBlock excitation_block(const HamiltonianMatrix& h, int k) {
  const int n = h.n_qubits();
  if (k < 0 || k > n) {
    throw InputError("excitation number " + std::to_string(k) + " outside 0.." + std::to_string(n));
  }
  const double leak = h.excitation_commutator_error();
  if (leak > 1e-12) {
    throw InputError("Hamiltonian mixes excitation numbers (off-block element " +
                     std::to_string(leak) + ")");
  }
  ExcitationBlock b;
  for (std::size_t i = 0; i < static_cast<std::size_t>(h.dimension()); ++i) {
    if (std::popcount(i) == k) {
      b.indices.push_back(i);
      b.basis.push_back(BasisLabel::from_index(i, n));
    }
  }
  b.matrix = block_in_basis(h, b.basis);
  return b;
}

}  // namespace ghzflux
