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

#include "ghzflux/qstate.hpp"

#include <algorithm>
#include <cmath>

namespace ghzflux {

namespace {

constexpr int kMaxQubits = 20;

void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw InputError("qubit count must be in 1.." + std::to_string(kMaxQubits) +
                     ", got " + std::to_string(n));
  }
}

void check_qubit(int q, int n, const char* what) {
  if (q < 1 || q > n) {
    throw InputError(std::string(what) + " qubit " + std::to_string(q) +
                     " out of range 1.." + std::to_string(n));
  }
}

using Gate2 = Eigen::Matrix2cd;

Gate2 rotation_matrix(double angle, double phase) {
  const double c = std::cos(angle / 2);
  const double s = std::sin(angle / 2);
  const Complex mi(0.0, -1.0);
  Gate2 u;
  u << c, mi * s * std::polar(1.0, -phase),
       mi * s * std::polar(1.0, phase), c;
  return u;
}

// Applies a single-qubit gate to every column of `m` (rows are basis indices).
void apply_gate_rows(CMatrix& m, int q, int n, const Gate2& u) {
  const std::size_t mask = qubit_mask(q, n);
  const auto dim = static_cast<std::size_t>(m.rows());
  for (std::size_t i = 0; i < dim; ++i) {
    if (i & mask) continue;
    const auto i0 = static_cast<Eigen::Index>(i);
    const auto i1 = static_cast<Eigen::Index>(i | mask);
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Complex a0 = m(i0, c);
      const Complex a1 = m(i1, c);
      m(i0, c) = u(0, 0) * a0 + u(0, 1) * a1;
      m(i1, c) = u(1, 0) * a0 + u(1, 1) * a1;
    }
  }
}

// Index permutation realised by flip / cnot.
std::size_t permute(std::size_t i, const PulseEvent& p, int n) {
  const std::size_t tmask = qubit_mask(p.qubit, n);
  if (p.kind == PulseKind::flip_x) return i ^ tmask;
  const std::size_t cmask = qubit_mask(p.control, n);
  return (i & cmask) ? (i ^ tmask) : i;
}

}  // namespace

// ---------------------------------------------------------------- BasisLabel

BasisLabel::BasisLabel(std::string bits) : bits_(std::move(bits)) {
  if (bits_.empty()) throw InputError("basis label must not be empty");
  if (static_cast<int>(bits_.size()) > kMaxQubits) throw InputError("basis label too long");
  for (char c : bits_) {
    if (c != '0' && c != '1') throw InputError("basis label '" + bits_ + "' is not a bitstring");
  }
}

BasisLabel BasisLabel::from_index(std::size_t index, int n_qubits) {
  check_qubit_count(n_qubits);
  if (index >= (std::size_t{1} << n_qubits)) throw InputError("basis index out of range");
  std::string bits(static_cast<std::size_t>(n_qubits), '0');
  for (int q = 1; q <= n_qubits; ++q) {
    if (index & qubit_mask(q, n_qubits)) bits[static_cast<std::size_t>(q - 1)] = '1';
  }
  return BasisLabel(std::move(bits));
}

std::size_t BasisLabel::index() const {
  std::size_t idx = 0;
  for (char c : bits_) idx = (idx << 1) | static_cast<std::size_t>(c == '1');
  return idx;
}

int BasisLabel::excitations() const {
  return static_cast<int>(std::count(bits_.begin(), bits_.end(), '1'));
}

std::vector<BasisLabel> all_basis_labels(int n_qubits) {
  check_qubit_count(n_qubits);
  std::vector<BasisLabel> out;
  const std::size_t dim = std::size_t{1} << n_qubits;
  out.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i) out.push_back(BasisLabel::from_index(i, n_qubits));
  return out;
}

// -------------------------------------------------------------- StateVector

StateVector::StateVector(int n_qubits, CVector amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(n_qubits);
  if (amplitudes_.size() != (Eigen::Index{1} << n_qubits)) {
    throw InputError("state vector length " + std::to_string(amplitudes_.size()) +
                     " does not match 2^" + std::to_string(n_qubits));
  }
}

// ------------------------------------------------------------ DensityMatrix

DensityMatrix::DensityMatrix(int n_qubits, CMatrix elements)
    : n_qubits_(n_qubits), elements_(std::move(elements)) {
  check_qubit_count(n_qubits);
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  if (elements_.rows() != dim || elements_.cols() != dim) {
    throw InputError("density matrix shape does not match 2^" + std::to_string(n_qubits));
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const CVector& a = psi.amplitudes();
  return DensityMatrix(psi.n_qubits(), a * a.adjoint());
}

double DensityMatrix::hermiticity_error() const {
  return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::min_eigenvalue() const {
  const CMatrix herm = 0.5 * (elements_ + elements_.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

// --------------------------------------------------------------- PulseEvent

PulseEvent PulseEvent::rotation(double time, int qubit, double angle, double axis_phase) {
  PulseEvent p;
  p.time = time;
  p.qubit = qubit;
  p.angle = angle;
  p.axis_phase = axis_phase;
  p.kind = PulseKind::rotation;
  return p;
}

PulseEvent PulseEvent::flip(double time, int qubit) {
  PulseEvent p;
  p.time = time;
  p.qubit = qubit;
  p.angle = kPi;
  p.kind = PulseKind::flip_x;
  return p;
}

PulseEvent PulseEvent::cnot_gate(double time, int control, int target) {
  PulseEvent p;
  p.time = time;
  p.qubit = target;
  p.control = control;
  p.angle = kPi;
  p.kind = PulseKind::cnot;
  return p;
}

bool PulseEvent::is_pi_pulse() const {
  return kind == PulseKind::flip_x || (kind == PulseKind::rotation && std::abs(angle - kPi) < 1e-12);
}

bool PulseEvent::is_half_pi_pulse() const {
  return kind == PulseKind::rotation && std::abs(angle - kPi / 2) < 1e-12;
}

void PulseEvent::validate(int n_qubits) const {
  if (!std::isfinite(time)) throw InputError("pulse time is not finite");
  check_qubit(qubit, n_qubits, "pulse target");
  switch (kind) {
    case PulseKind::rotation:
      if (!std::isfinite(angle) || !std::isfinite(axis_phase)) {
        throw InputError("rotation angle and axis must be finite");
      }
      break;
    case PulseKind::flip_x:
      if (std::abs(angle - kPi) > 1e-12) throw InputError("flip pulse requires angle pi");
      break;
    case PulseKind::cnot:
      check_qubit(control, n_qubits, "cnot control");
      if (control == qubit) throw InputError("cnot control and target coincide");
      break;
  }
}

// --------------------------------------------------------------- operations

StateVector make_basis_state(int n_qubits, const BasisLabel& label) {
  check_qubit_count(n_qubits);
  if (label.size() != n_qubits) {
    throw InputError("label '" + label.str() + "' has length " + std::to_string(label.size()) +
                     ", expected " + std::to_string(n_qubits));
  }
  CVector a = CVector::Zero(Eigen::Index{1} << n_qubits);
  a(static_cast<Eigen::Index>(label.index())) = 1.0;
  return StateVector(n_qubits, std::move(a));
}

StateVector apply_pulse(const StateVector& state, const PulseEvent& pulse) {
  const int n = state.n_qubits();
  pulse.validate(n);
  if (pulse.kind == PulseKind::rotation) {
    CMatrix m = state.amplitudes();
    apply_gate_rows(m, pulse.qubit, n, rotation_matrix(pulse.angle, pulse.axis_phase));
    return StateVector(n, m.col(0));
  }
  const CVector& a = state.amplitudes();
  CVector out(a.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out(static_cast<Eigen::Index>(permute(static_cast<std::size_t>(i), pulse, n))) = a(i);
  }
  return StateVector(n, std::move(out));
}

DensityMatrix apply_pulse(const DensityMatrix& rho, const PulseEvent& pulse) {
  const int n = rho.n_qubits();
  pulse.validate(n);
  if (pulse.kind == PulseKind::rotation) {
    // U rho U^dagger = (U (U rho)^dagger)^dagger
    const Gate2 u = rotation_matrix(pulse.angle, pulse.axis_phase);
    CMatrix m = rho.elements();
    apply_gate_rows(m, pulse.qubit, n, u);
    CMatrix t = m.adjoint();
    apply_gate_rows(t, pulse.qubit, n, u);
    return DensityMatrix(n, t.adjoint());
  }
  const CMatrix& r = rho.elements();
  const Eigen::Index dim = r.rows();
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(dim));
  for (Eigen::Index i = 0; i < dim; ++i) {
    perm[static_cast<std::size_t>(i)] =
        static_cast<Eigen::Index>(permute(static_cast<std::size_t>(i), pulse, n));
  }
  CMatrix out(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Eigen::Index pj = perm[static_cast<std::size_t>(j)];
    for (Eigen::Index i = 0; i < dim; ++i) out(perm[static_cast<std::size_t>(i)], pj) = r(i, j);
  }
  return DensityMatrix(n, std::move(out));
}

StateVector apply_cnot(const StateVector& state, int control, int target) {
  return apply_pulse(state, PulseEvent::cnot_gate(0.0, control, target));
}

StateVector ghz_target(int n_qubits) {
  if (n_qubits < 2) throw InputError("GHZ target needs at least 2 qubits");
  check_qubit_count(n_qubits);
  CVector a = CVector::Zero(Eigen::Index{1} << n_qubits);
  a(0) = a(a.size() - 1) = 1.0 / std::sqrt(2.0);
  return StateVector(n_qubits, std::move(a));
}

double fidelity(const StateVector& state, const StateVector& target) {
  if (state.dimension() != target.dimension()) throw InputError("fidelity: dimension mismatch");
  return std::min(1.0, std::norm(target.amplitudes().dot(state.amplitudes())));
}

double fidelity(const DensityMatrix& rho, const StateVector& target) {
  if (rho.dimension() != target.dimension()) throw InputError("fidelity: dimension mismatch");
  const CVector& t = target.amplitudes();
  const double f = t.dot(rho.elements() * t).real();
  return std::clamp(f, 0.0, 1.0);
}

namespace {

template <typename Prob>
std::map<std::string, double> collect(int n, std::span<const BasisLabel> labels, Prob prob) {
  std::map<std::string, double> out;
  for (const auto& l : labels) {
    if (l.size() != n) {
      throw InputError("label '" + l.str() + "' does not match " + std::to_string(n) + " qubits");
    }
    out[l.str()] = std::clamp(prob(static_cast<Eigen::Index>(l.index())), 0.0, 1.0);
  }
  return out;
}

}  // namespace

std::map<std::string, double> populations(const StateVector& state,
                                          std::span<const BasisLabel> labels) {
  const CVector& a = state.amplitudes();
  return collect(state.n_qubits(), labels, [&](Eigen::Index i) { return std::norm(a(i)); });
}

std::map<std::string, double> populations(const DensityMatrix& rho,
                                          std::span<const BasisLabel> labels) {
  const CMatrix& r = rho.elements();
  return collect(rho.n_qubits(), labels, [&](Eigen::Index i) { return r(i, i).real(); });
}

}  // namespace ghzflux
