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

#include <Eigen/Sparse>

#include "ghzflux/dynamics.hpp"

namespace ghzflux {

namespace {

using SparseH = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

int steps_for(double duration, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("integrator step must be positive");
  if (!(duration >= 0.0)) throw InputError("duration must be non-negative");
  const double raw = std::ceil(duration / step - 1e-9);
  if (raw > 5e8) throw InputError("integration would need more than 5e8 steps");
  return std::max(1, static_cast<int>(raw));
}

// Matrix-free Lindblad right-hand side on the full register.
class LindbladRhs {
 public:
  LindbladRhs(const HamiltonianMatrix& h, const NoiseRates& noise)
      : n_(h.n_qubits()), dim_(h.dimension()) {
    h_ = h.matrix().sparseView(0.0, 0.0);
    h_.makeCompressed();
    damping_.setZero(dim_, dim_);
    for (int q = 1; q <= n_; ++q) {
      const double g = noise.decay[static_cast<std::size_t>(q - 1)];
      const double gp = noise.dephasing[static_cast<std::size_t>(q - 1)];
      const std::size_t m = qubit_mask(q, n_);
      if (g > 0.0) jumps_.emplace_back(m, g);
      for (Eigen::Index j = 0; j < dim_; ++j) {
        const bool bj = static_cast<std::size_t>(j) & m;
        for (Eigen::Index i = 0; i < dim_; ++i) {
          const bool bi = static_cast<std::size_t>(i) & m;
          // -1/2 {n, rho} from sigma^- and (gp/2)(sigma^z rho sigma^z - rho).
          damping_(i, j) -= 0.5 * g * (static_cast<double>(bi) + static_cast<double>(bj));
          if (bi != bj) damping_(i, j) -= gp;
        }
      }
    }
  }

  void operator()(const CMatrix& rho, CMatrix& out) const {
    const CMatrix hr = h_ * rho;
    const CMatrix rh = rho * h_;
    const Complex mi(0.0, -1.0);
    out = mi * (hr - rh);
    out.array() += damping_.array() * rho.array();
    for (const auto& [m, g] : jumps_) {
      for (Eigen::Index j = 0; j < dim_; ++j) {
        if (static_cast<std::size_t>(j) & m) continue;
        const auto j1 = static_cast<Eigen::Index>(static_cast<std::size_t>(j) | m);
        for (Eigen::Index i = 0; i < dim_; ++i) {
          if (static_cast<std::size_t>(i) & m) continue;
          out(i, j) += g * rho(static_cast<Eigen::Index>(static_cast<std::size_t>(i) | m), j1);
        }
      }
    }
  }

 private:
  int n_;
  Eigen::Index dim_;
  SparseH h_;
  Eigen::MatrixXd damping_;
  std::vector<std::pair<std::size_t, double>> jumps_;
};

struct LindbladRun {
  CMatrix rho;
  double worst_trace_drift;
};

LindbladRun integrate_lindblad(const CMatrix& rho0, const LindbladRhs& rhs, double duration,
                               double step) {
  const int n_steps = steps_for(duration, step);
  const double h = duration / n_steps;
  const double tr0 = rho0.trace().real();
  CMatrix y = rho0;
  CMatrix k1, k2, k3, k4, tmp;
  double worst = 0.0;
  for (int s = 0; s < n_steps; ++s) {
    rhs(y, k1);
    tmp = y + 0.5 * h * k1;
    rhs(tmp, k2);
    tmp = y + 0.5 * h * k2;
    rhs(tmp, k3);
    tmp = y + h * k3;
    rhs(tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    worst = std::max(worst, std::abs(y.trace().real() - tr0));
  }
  return {y, worst};
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix single_qubit_op(int q, int k, const Eigen::Matrix2cd& op) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int p = 1; p <= k; ++p) {
    out = kron(out, p == q ? CMatrix(op) : CMatrix(CMatrix::Identity(2, 2)));
  }
  return out;
}

// Column-major vec convention: vec(A X B) = (B^T kron A) vec(X).
CMatrix lindblad_superoperator(const HamiltonianMatrix& h, std::span<const double> decay,
                               std::span<const double> dephasing) {
  const int k = h.n_qubits();
  const Eigen::Index d = h.dimension();
  const CMatrix id = CMatrix::Identity(d, d);
  const Complex mi(0.0, -1.0);
  CMatrix l = mi * (kron(id, h.matrix()) - kron(h.matrix().transpose(), id));
  auto add_dissipator = [&](const CMatrix& op, double rate) {
    if (rate == 0.0) return;
    const CMatrix ldl = op.adjoint() * op;
    l += rate * (kron(op.conjugate(), op) - 0.5 * kron(id, ldl) - 0.5 * kron(ldl.transpose(), id));
  };
  Eigen::Matrix2cd lower;
  lower << 0, 1, 0, 0;  // |0><1|
  Eigen::Matrix2cd z;
  z << -1, 0, 0, 1;  // |1><1| - |0><0|
  for (int q = 1; q <= k; ++q) {
    add_dissipator(single_qubit_op(q, k, lower), decay[static_cast<std::size_t>(q - 1)]);
    add_dissipator(single_qubit_op(q, k, z), 0.5 * dephasing[static_cast<std::size_t>(q - 1)]);
  }
  return l;
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

}  // namespace

DensityMatrix evolve_lindblad(const DensityMatrix& rho, const HamiltonianMatrix& h,
                              const NoiseRates& noise, double duration,
                              const IntegratorSettings& settings) {
  if (rho.n_qubits() != h.n_qubits()) throw InputError("evolve_lindblad: dimension mismatch");
  noise.validate(rho.n_qubits());
  if (h.hermiticity_error() > 1e-12 * std::max(1.0, h.matrix().cwiseAbs().maxCoeff())) {
    throw InputError("evolve_lindblad: non-Hermitian Hamiltonian");
  }
  if (duration == 0.0) return rho;
  const LindbladRhs rhs(h, noise);
  const LindbladRun coarse = integrate_lindblad(rho.elements(), rhs, duration, settings.step);
  if (coarse.worst_trace_drift > settings.tolerance) {
    throw AccuracyError("evolve_lindblad: trace drift " + std::to_string(coarse.worst_trace_drift) +
                            " exceeds tolerance",
                        coarse.worst_trace_drift);
  }
  DensityMatrix out(rho.n_qubits(), coarse.rho);
  if (out.hermiticity_error() > settings.tolerance) {
    throw AccuracyError("evolve_lindblad: result lost Hermiticity", out.hermiticity_error());
  }
  if (settings.check_step_halving) {
    const LindbladRun fine = integrate_lindblad(rho.elements(), rhs, duration, 0.5 * settings.step);
    const double change = (fine.rho - coarse.rho).cwiseAbs().maxCoeff();
    if (change > settings.tolerance) {
      throw AccuracyError("evolve_lindblad: halving the step changed the state by " +
                              std::to_string(change),
                          change);
    }
  }
  return out;
}

// ------------------------------------------------------------- idle noise

DensityMatrix apply_idle_noise(const DensityMatrix& rho, const NoiseRates& noise, double duration,
                               std::size_t skip_mask) {
  const int n = rho.n_qubits();
  noise.validate(n);
  if (!(duration >= 0.0)) throw InputError("apply_idle_noise: negative duration");
  CMatrix r = rho.elements();
  const Eigen::Index dim = r.rows();
  for (int q = 1; q <= n; ++q) {
    const std::size_t m = qubit_mask(q, n);
    if (skip_mask & m) continue;
    const double g = noise.decay[static_cast<std::size_t>(q - 1)];
    const double gp = noise.dephasing[static_cast<std::size_t>(q - 1)];
    if (g == 0.0 && gp == 0.0) continue;
    const double keep = std::exp(-g * duration);
    const double coh = std::exp(-(0.5 * g + gp) * duration);
    for (Eigen::Index j0 = 0; j0 < dim; ++j0) {
      if (static_cast<std::size_t>(j0) & m) continue;
      const auto j1 = static_cast<Eigen::Index>(static_cast<std::size_t>(j0) | m);
      for (Eigen::Index i0 = 0; i0 < dim; ++i0) {
        if (static_cast<std::size_t>(i0) & m) continue;
        const auto i1 = static_cast<Eigen::Index>(static_cast<std::size_t>(i0) | m);
        const Complex r11 = r(i1, j1);
        r(i0, j0) += (1.0 - keep) * r11;
        r(i1, j1) = keep * r11;
        r(i0, j1) *= coh;
        r(i1, j0) *= coh;
      }
    }
  }
  return DensityMatrix(n, std::move(r));
}

// ------------------------------------------------ LocalLindbladPropagator

LocalLindbladPropagator::LocalLindbladPropagator(int n_qubits, std::vector<int> active,
                                                 const HamiltonianMatrix& local_h,
                                                 const NoiseRates& noise, double duration,
                                                 const IntegratorSettings& settings)
    : n_qubits_(n_qubits), active_(std::move(active)), noise_(noise), duration_(duration) {
  noise_.validate(n_qubits_);
  const int k = static_cast<int>(active_.size());
  if (k < 1 || k > 6 || k != local_h.n_qubits()) {
    throw InputError("LocalLindbladPropagator: active qubit list does not match the local Hamiltonian");
  }
  std::size_t seen = 0;
  for (int q : active_) {
    if (q < 1 || q > n_qubits_) throw InputError("LocalLindbladPropagator: qubit out of range");
    const std::size_t m = qubit_mask(q, n_qubits_);
    if (seen & m) throw InputError("LocalLindbladPropagator: repeated qubit");
    seen |= m;
  }
  if (local_h.hermiticity_error() > 1e-12 * std::max(1.0, local_h.matrix().cwiseAbs().maxCoeff())) {
    throw InputError("LocalLindbladPropagator: non-Hermitian Hamiltonian");
  }
  std::vector<double> decay, dephasing;
  for (int q : active_) {
    decay.push_back(noise_.decay[static_cast<std::size_t>(q - 1)]);
    dephasing.push_back(noise_.dephasing[static_cast<std::size_t>(q - 1)]);
  }
  const CMatrix gen = lindblad_superoperator(local_h, decay, dephasing);

  // Fixed-step RK4 on a constant linear generator is the one-step matrix
  // applied n times; powers are formed by repeated squaring.
  const int n_steps = steps_for(duration, settings.step);
  const double h = duration / n_steps;
  superop_ = matrix_power(rk4_step_matrix(gen, h), n_steps);

  const Eigen::Index d = local_h.dimension();
  double drift = 0.0;
  for (Eigen::Index col = 0; col < d * d; col += d + 1) {  // inputs |i><i|
    Complex tr = 0.0;
    for (Eigen::Index i = 0; i < d; ++i) tr += superop_(i * d + i, col);
    drift = std::max(drift, std::abs(tr - 1.0));
  }
  if (drift > settings.tolerance) {
    throw AccuracyError("LocalLindbladPropagator: trace drift " + std::to_string(drift), drift);
  }
  if (settings.check_step_halving) {
    const CMatrix fine = matrix_power(rk4_step_matrix(gen, 0.5 * h), 2L * n_steps);
    const double change = (fine - superop_).cwiseAbs().maxCoeff();
    if (change > settings.tolerance) {
      throw AccuracyError("LocalLindbladPropagator: halving the step changed the propagator by " +
                              std::to_string(change),
                          change);
    }
  }
}

DensityMatrix LocalLindbladPropagator::apply_local(const DensityMatrix& rho) const {
  if (rho.n_qubits() != n_qubits_) throw InputError("LocalLindbladPropagator: dimension mismatch");
  const int k = static_cast<int>(active_.size());
  const Eigen::Index d = Eigen::Index{1} << k;
  std::vector<std::size_t> offset(static_cast<std::size_t>(d), 0);
  std::size_t active_mask = 0;
  for (Eigen::Index l = 0; l < d; ++l) {
    for (int p = 0; p < k; ++p) {
      if (static_cast<std::size_t>(l) & (std::size_t{1} << (k - 1 - p))) {
        offset[static_cast<std::size_t>(l)] |= qubit_mask(active_[static_cast<std::size_t>(p)], n_qubits_);
      }
    }
  }
  for (int q : active_) active_mask |= qubit_mask(q, n_qubits_);
  std::vector<std::size_t> bases;
  const std::size_t dim = rho.dimension();
  for (std::size_t i = 0; i < dim; ++i) {
    if (!(i & active_mask)) bases.push_back(i);
  }

  const CMatrix& in = rho.elements();
  CMatrix out(in.rows(), in.cols());
  CVector v(d * d), w(d * d);
  for (std::size_t bc : bases) {
    for (std::size_t br : bases) {
      for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
          v(r + d * c) = in(static_cast<Eigen::Index>(br | offset[static_cast<std::size_t>(r)]),
                            static_cast<Eigen::Index>(bc | offset[static_cast<std::size_t>(c)]));
        }
      }
      w.noalias() = superop_ * v;
      for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) {
          out(static_cast<Eigen::Index>(br | offset[static_cast<std::size_t>(r)]),
              static_cast<Eigen::Index>(bc | offset[static_cast<std::size_t>(c)])) = w(r + d * c);
        }
      }
    }
  }
  return DensityMatrix(n_qubits_, std::move(out));
}

DensityMatrix LocalLindbladPropagator::apply(const DensityMatrix& rho) const {
  std::size_t active_mask = 0;
  for (int q : active_) active_mask |= qubit_mask(q, n_qubits_);
  return apply_idle_noise(apply_local(rho), noise_, duration_, active_mask);
}

std::size_t LocalLindbladPropagator::active_mask() const {
  std::size_t m = 0;
  for (int q : active_) m |= qubit_mask(q, n_qubits_);
  return m;
}

}  // namespace ghzflux
