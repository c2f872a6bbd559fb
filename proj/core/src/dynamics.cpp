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

#include "ghzflux/dynamics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>


namespace ghzflux {

// --------------------------------------------------------------- NoiseRates

NoiseRates NoiseRates::none(int n_qubits) { return uniform(n_qubits, 0.0, 0.0); }

NoiseRates NoiseRates::uniform(int n_qubits, double gamma, double gamma_phi) {
  const auto n = static_cast<std::size_t>(std::max(n_qubits, 0));
  return {std::vector<double>(n, gamma), std::vector<double>(n, gamma_phi)};
}

NoiseRates NoiseRates::from_config(const SystemConfig& config) {
  return {config.decay, config.dephasing};
}

bool NoiseRates::silent() const {
  auto zero = [](double r) { return r == 0.0; };
  return std::all_of(decay.begin(), decay.end(), zero) &&
         std::all_of(dephasing.begin(), dephasing.end(), zero);
}

void NoiseRates::validate(int n_qubits) const {
  const auto n = static_cast<std::size_t>(n_qubits);
  if (decay.size() != n || dephasing.size() != n) {
    throw InputError("noise rates need one entry per qubit");
  }
  for (std::size_t q = 0; q < n; ++q) {
    if (!(decay[q] >= 0.0) || !(dephasing[q] >= 0.0) || !std::isfinite(decay[q]) ||
        !std::isfinite(dephasing[q])) {
      throw InputError("noise rates must be finite and non-negative");
    }
  }
}

// ------------------------------------------------------- IntegratorSettings

IntegratorSettings IntegratorSettings::effective_frame(double swap_time) {
  IntegratorSettings s;
  s.step = swap_time / 2000.0;
  return s;
}

IntegratorSettings IntegratorSettings::lab_frame(const SystemConfig& config) {
  double wmax = 0.0;
  for (double w : config.omega) wmax = std::max(wmax, std::abs(w));
  if (wmax == 0.0) throw InputError("lab-frame settings need nonzero qubit frequencies");
  IntegratorSettings s;
  s.step = kTwoPi / (40.0 * wmax);
  return s;
}

namespace {

int steps_for(double duration, double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("integrator step must be positive");
  if (!(duration >= 0.0)) throw InputError("duration must be non-negative");
  const double raw = std::ceil(duration / step - 1e-9);
  if (raw > 5e8) throw InputError("integration would need more than 5e8 steps");
  return std::max(1, static_cast<int>(raw));
}

void require_hermitian(const HamiltonianMatrix& h) {
  const double scale = std::max(1.0, h.matrix().cwiseAbs().maxCoeff());
  const double err = h.hermiticity_error();
  if (err > 1e-12 * scale) {
    throw InputError("non-Hermitian Hamiltonian (max |H - H^dagger| = " + std::to_string(err) + ")");
  }
}

}  // namespace

// --------------------------------------------------------- StaticPropagator

StaticPropagator::StaticPropagator(const HamiltonianMatrix& h) : n_qubits_(h.n_qubits()) {
  require_hermitian(h);
  const CMatrix herm = 0.5 * (h.matrix() + h.matrix().adjoint());
  const Eigen::Index dim = h.dimension();
  std::vector<std::vector<Eigen::Index>> groups;
  if (h.conserves_excitation()) {
    groups.resize(static_cast<std::size_t>(n_qubits_) + 1);
    for (Eigen::Index i = 0; i < dim; ++i) {
      groups[static_cast<std::size_t>(std::popcount(static_cast<std::size_t>(i)))].push_back(i);
    }
  } else {
    groups.emplace_back();
    for (Eigen::Index i = 0; i < dim; ++i) groups.back().push_back(i);
  }
  for (auto& idx : groups) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    CMatrix sub(m, m);
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) {
        sub(r, c) = herm(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
      }
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(sub);
    blocks_.push_back(Block{std::move(idx), es.eigenvalues(), es.eigenvectors()});
  }
}

StateVector StaticPropagator::evolve(const StateVector& state, double duration) const {
  if (state.n_qubits() != n_qubits_) throw InputError("evolve_static: dimension mismatch");
  const CVector& in = state.amplitudes();
  CVector out(in.size());
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.indices.size());
    CVector local(m);
    for (Eigen::Index r = 0; r < m; ++r) local(r) = in(b.indices[static_cast<std::size_t>(r)]);
    CVector c = b.vectors.adjoint() * local;
    for (Eigen::Index r = 0; r < m; ++r) c(r) *= std::polar(1.0, -b.energies(r) * duration);
    local = b.vectors * c;
    for (Eigen::Index r = 0; r < m; ++r) out(b.indices[static_cast<std::size_t>(r)]) = local(r);
  }
  return StateVector(n_qubits_, std::move(out));
}

CMatrix StaticPropagator::unitary(double duration) const {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits_;
  CMatrix u = CMatrix::Zero(dim, dim);
  for (const auto& b : blocks_) {
    const auto m = static_cast<Eigen::Index>(b.indices.size());
    CVector phases(m);
    for (Eigen::Index r = 0; r < m; ++r) phases(r) = std::polar(1.0, -b.energies(r) * duration);
    const CMatrix local = b.vectors * phases.asDiagonal() * b.vectors.adjoint();
    for (Eigen::Index r = 0; r < m; ++r) {
      for (Eigen::Index c = 0; c < m; ++c) {
        u(b.indices[static_cast<std::size_t>(r)], b.indices[static_cast<std::size_t>(c)]) = local(r, c);
      }
    }
  }
  return u;
}

StateVector evolve_static(const StateVector& state, const HamiltonianMatrix& h, double duration) {
  if (state.n_qubits() != h.n_qubits()) throw InputError("evolve_static: dimension mismatch");
  return StaticPropagator(h).evolve(state, duration);
}

// -------------------------------------------------------------- lab frame

namespace {

Eigen::VectorXd bare_energies(const SystemConfig& config) {
  const int n = config.n_qubits;
  const Eigen::Index dim = Eigen::Index{1} << n;
  Eigen::VectorXd e(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    double v = 0.0;
    for (int q = 1; q <= n; ++q) {
      const bool up = static_cast<std::size_t>(i) & qubit_mask(q, n);
      v += 0.5 * config.omega[static_cast<std::size_t>(q - 1)] * (up ? 1.0 : -1.0);
    }
    e(i) = v;
  }
  return e;
}

struct HopTerm {
  CouplingSpec spec;
  double frame_detuning;  // E(to) - E(from) = omega_i - omega_j
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;  // (from, to)
};

struct LabRun {
  CVector psi_frame;
  double norm_drift;
};

LabRun integrate_lab(const CVector& psi0, const SystemConfig& config,
                     const std::vector<HopTerm>& terms, const Eigen::VectorXd& energies, double t0,
                     double t1, double step, const LabObserver& observer) {
  const int n = config.n_qubits;
  const int n_steps = steps_for(t1 - t0, step);
  const double h = (t1 - t0) / n_steps;
  const Complex mi(0.0, -1.0);

  std::vector<Complex> coeff(terms.size());
  auto rhs = [&](double t, const CVector& y, CVector& out) {
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const auto& term = terms[k];
      const Complex amp = term.spec.degenerate()
                              ? 0.5 * term.spec.g0 * std::polar(1.0, -term.spec.phase)
                              : Complex(coupling_amplitude(term.spec, t), 0.0);
      coeff[k] = amp * std::polar(1.0, term.frame_detuning * t);
    }
    out.setZero();
    for (std::size_t k = 0; k < terms.size(); ++k) {
      const Complex c = mi * coeff[k];
      const Complex cc = mi * std::conj(coeff[k]);
      for (const auto& [from, to] : terms[k].pairs) {
        out(to) += c * y(from);
        out(from) += cc * y(to);
      }
    }
  };

  CVector y(psi0.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = psi0(i) * std::polar(1.0, energies(i) * t0);
  const double norm0 = y.norm();
  CVector k1(y.size()), k2(y.size()), k3(y.size()), k4(y.size()), tmp(y.size());
  for (int s = 0; s < n_steps; ++s) {
    const double t = t0 + s * h;
    rhs(t, y, k1);
    tmp = y + 0.5 * h * k1;
    rhs(t + 0.5 * h, tmp, k2);
    tmp = y + 0.5 * h * k2;
    rhs(t + 0.5 * h, tmp, k3);
    tmp = y + h * k3;
    rhs(t + h, tmp, k4);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (observer) {
      const double tn = (s + 1 == n_steps) ? t1 : t0 + (s + 1) * h;
      CVector lab(y.size());
      for (Eigen::Index i = 0; i < y.size(); ++i) lab(i) = y(i) * std::polar(1.0, -energies(i) * tn);
      observer(tn, StateVector(n, std::move(lab)));
    }
  }
  return {y, std::abs(y.norm() - norm0)};
}

}  // namespace

StateVector interaction_frame(const StateVector& state, const SystemConfig& config, double t) {
  if (state.n_qubits() != config.n_qubits) throw InputError("interaction_frame: dimension mismatch");
  const Eigen::VectorXd e = bare_energies(config);
  CVector out = state.amplitudes();
  for (Eigen::Index i = 0; i < out.size(); ++i) out(i) *= std::polar(1.0, e(i) * t);
  return StateVector(state.n_qubits(), std::move(out));
}

StateVector evolve_lab(const StateVector& state, const SystemConfig& config,
                       std::span<const CouplingSpec> specs, double t0, double t1,
                       const IntegratorSettings& settings, const LabObserver& observer) {
  const int n = config.n_qubits;
  if (state.n_qubits() != n) throw InputError("evolve_lab: dimension mismatch");
  if (config.omega.size() != static_cast<std::size_t>(n)) throw InputError("evolve_lab: missing frequencies");
  if (!(t1 > t0)) throw InputError("evolve_lab: t1 must exceed t0");
  double wmax = 0.0;
  for (double w : config.omega) wmax = std::max(wmax, std::abs(w));
  if (wmax > 0.0 && settings.step > kTwoPi / (20.0 * wmax) * (1.0 + 1e-12)) {
    throw InputError("evolve_lab: step " + std::to_string(settings.step) +
                     " ns does not resolve the fastest qubit frequency (limit " +
                     std::to_string(kTwoPi / (20.0 * wmax)) + " ns)");
  }

  std::vector<HopTerm> terms;
  for (const auto& s : specs) {
    if (s.i < 1 || s.i > n || s.j < 1 || s.j > n || s.i == s.j) {
      throw InputError("evolve_lab: coupling indices out of range");
    }
    HopTerm term{s,
                 config.omega[static_cast<std::size_t>(s.i - 1)] -
                     config.omega[static_cast<std::size_t>(s.j - 1)],
                 {}};
    const std::size_t mi = qubit_mask(s.i, n);
    const std::size_t mj = qubit_mask(s.j, n);
    for (std::size_t i = 0; i < state.dimension(); ++i) {
      if ((i & mi) || !(i & mj)) continue;
      term.pairs.emplace_back(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i ^ mi ^ mj));
    }
    terms.push_back(std::move(term));
  }

  const Eigen::VectorXd energies = bare_energies(config);
  const LabRun coarse = integrate_lab(state.amplitudes(), config, terms, energies, t0, t1,
                                      settings.step, observer);
  if (coarse.norm_drift > settings.tolerance) {
    throw AccuracyError("evolve_lab: norm drift " + std::to_string(coarse.norm_drift) +
                            " exceeds tolerance",
                        coarse.norm_drift);
  }
  if (settings.check_step_halving) {
    const LabRun fine = integrate_lab(state.amplitudes(), config, terms, energies, t0, t1,
                                      0.5 * settings.step, {});
    const double overlap = std::norm(fine.psi_frame.dot(coarse.psi_frame)) /
                           (fine.psi_frame.squaredNorm() * coarse.psi_frame.squaredNorm());
    const double change = std::abs(1.0 - overlap);
    if (change > settings.tolerance) {
      throw AccuracyError("evolve_lab: halving the step changed the final state by " +
                              std::to_string(change),
                          change);
    }
  }
  CVector lab(coarse.psi_frame.size());
  for (Eigen::Index i = 0; i < lab.size(); ++i) {
    lab(i) = coarse.psi_frame(i) * std::polar(1.0, -energies(i) * t1);
  }
  return StateVector(n, std::move(lab));
}

// -------------------------------------------------------------------- misc

CMatrix rk4_step_matrix(const CMatrix& generator, double h) {
  const Eigen::Index d = generator.rows();
  const CMatrix a = h * generator;
  CMatrix out = CMatrix::Identity(d, d);
  const double inv_fact[] = {1.0, 1.0 / 2.0, 1.0 / 6.0, 1.0 / 24.0};
  CMatrix power = CMatrix::Identity(d, d);
  for (double f : inv_fact) {
    power = power * a;
    out += f * power;
  }
  return out;
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dimension() != b.dimension()) throw InputError("trace_distance: dimension mismatch");
  CMatrix d = a.elements() - b.elements();
  d = 0.5 * (d + d.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(d, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace ghzflux
