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

#ifndef GHZFLUX_QSTATE_HPP
#define GHZFLUX_QSTATE_HPP

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghzflux/common.hpp"

namespace ghzflux {

/// Computational-basis ket written as a bitstring. The leftmost character is
/// qubit 1, which is also the most significant bit of the basis index, so
/// "100" on three qubits is index 4.
class BasisLabel {
 public:
  explicit BasisLabel(std::string bits);
  static BasisLabel from_index(std::size_t index, int n_qubits);

  int size() const { return static_cast<int>(bits_.size()); }
  std::size_t index() const;
  const std::string& str() const { return bits_; }
  /// Bit of qubit q (1-based).
  bool bit(int q) const { return bits_.at(static_cast<std::size_t>(q - 1)) == '1'; }
  int excitations() const;

  friend bool operator==(const BasisLabel&, const BasisLabel&) = default;
  friend auto operator<=>(const BasisLabel&, const BasisLabel&) = default;

 private:
  std::string bits_;
};

/// Bit mask of qubit q (1-based) inside an n-qubit basis index.
inline std::size_t qubit_mask(int q, int n_qubits) {
  return std::size_t{1} << (n_qubits - q);
}

class StateVector {
 public:
  StateVector() = default;
  StateVector(int n_qubits, CVector amplitudes);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector& amplitudes() const { return amplitudes_; }
  Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
  double norm() const { return amplitudes_.norm(); }

 private:
  int n_qubits_ = 0;
  CVector amplitudes_;
};

class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, CMatrix elements);
  static DensityMatrix from_pure(const StateVector& psi);

  int n_qubits() const { return n_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(elements_.rows()); }
  const CMatrix& elements() const { return elements_; }

  double trace() const { return elements_.trace().real(); }
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  int n_qubits_;
  CMatrix elements_;
};

enum class PulseKind {
  rotation,  // exp(-i angle/2 (cos(phase) X + sin(phase) Y))
  flip_x,    // exact bit flip |0> <-> |1>, no phase
  cnot,      // controlled bit flip, `control` -> `qubit`
};

/// Instantaneous control operation at a point in time. Pulses are modelled as
/// ideal unitaries with no duration.
struct PulseEvent {
  double time = 0.0;  // ns
  int qubit = 1;      // target, 1-based
  double angle = 0.0;
  double axis_phase = 0.0;
  PulseKind kind = PulseKind::rotation;
  int control = 0;  // only for cnot

  static PulseEvent rotation(double time, int qubit, double angle, double axis_phase);
  static PulseEvent rotation_y(double time, int qubit, double angle) {
    return rotation(time, qubit, angle, kPi / 2);
  }
  static PulseEvent flip(double time, int qubit);
  static PulseEvent cnot_gate(double time, int control, int target);

  bool is_pi_pulse() const;
  bool is_half_pi_pulse() const;
  bool touches(int q) const { return qubit == q || (kind == PulseKind::cnot && control == q); }

  void validate(int n_qubits) const;
  friend bool operator==(const PulseEvent&, const PulseEvent&) = default;
};

StateVector make_basis_state(int n_qubits, const BasisLabel& label);

StateVector apply_pulse(const StateVector& state, const PulseEvent& pulse);
DensityMatrix apply_pulse(const DensityMatrix& rho, const PulseEvent& pulse);

StateVector apply_cnot(const StateVector& state, int control, int target);

/// (|0...0> + |1...1>)/sqrt(2).
StateVector ghz_target(int n_qubits);

/// |<target|psi>|^2 for pure input, <target|rho|target> for mixed input.
double fidelity(const StateVector& state, const StateVector& target);
double fidelity(const DensityMatrix& rho, const StateVector& target);

std::map<std::string, double> populations(const StateVector& state,
                                          std::span<const BasisLabel> labels);
std::map<std::string, double> populations(const DensityMatrix& rho,
                                          std::span<const BasisLabel> labels);

/// All 2^n labels in index order.
std::vector<BasisLabel> all_basis_labels(int n_qubits);

}  // namespace ghzflux

#endif  // GHZFLUX_QSTATE_HPP
