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

#include "ghzflux/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "ghzflux/loop3.hpp"
#include "numfmt.hpp"

namespace ghzflux {

const std::vector<double>& PopulationTrace::column(const std::string& label) const {
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (labels[k].str() == label) return columns[k];
  }
  throw InputError("population trace has no column " + label);
}

std::string PopulationTrace::to_csv() const {
  std::ostringstream os;
  os << "t_ns";
  for (const auto& l : labels) os << ",P_" << l.str();
  os << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << detail::shortest(times[i]);
    for (const auto& c : columns) os << ',' << detail::shortest(c[i]);
    os << '\n';
  }
  return os.str();
}

PopulationTrace population_trace(const SystemConfig& config, const LoopWindow& window,
                                 const BasisLabel& initial, double t_max, int samples) {
  if (samples < 2) throw InputError("population_trace: need at least 2 samples");
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw InputError("population_trace: t_max must be positive");
  if (initial.size() != config.n_qubits) {
    throw InputError("population_trace: initial label '" + initial.str() + "' has the wrong length");
  }
  window.validate(config.n_qubits);

  int exc = 0;
  for (int q : window.loop) exc += initial.bit(q) ? 1 : 0;
  PopulationTrace tr;
  auto with_pattern = [&](std::array<bool, 3> pat) {
    std::string bits = initial.str();
    for (std::size_t k = 0; k < 3; ++k) {
      bits[static_cast<std::size_t>(window.loop[k] - 1)] = pat[k] ? '1' : '0';
    }
    return BasisLabel(bits);
  };
  if (exc == 0 || exc == 3) {
    tr.labels.push_back(initial);
  } else {
    for (std::size_t k = 0; k < 3; ++k) {
      std::array<bool, 3> pat{};
      pat.fill(exc == 2);
      pat[k] = exc == 1;
      tr.labels.push_back(with_pattern(pat));
    }
  }

  const StaticPropagator prop(effective_hamiltonian(config, window));
  const StateVector psi0 = make_basis_state(config.n_qubits, initial);
  tr.columns.assign(tr.labels.size(), {});
  for (int i = 0; i < samples; ++i) {
    const double t = t_max * i / (samples - 1);
    const StateVector psi = prop.evolve(psi0, t);
    tr.times.push_back(t);
    for (std::size_t k = 0; k < tr.labels.size(); ++k) {
      tr.columns[k].push_back(std::norm(psi[tr.labels[k].index()]));
    }
  }
  return tr;
}

std::string reports_to_csv(std::span<const FidelityReport> reports) {
  std::ostringstream os;
  os << "n,gamma_per_ns,gamma_phi_per_ns,T_ns,fidelity,step_ns,ideal_fidelity\n";
  for (const auto& r : reports) {
    os << r.n << ',' << detail::shortest(r.gamma) << ',' << detail::shortest(r.gamma_phi) << ','
       << detail::shortest(r.swap_time) << ',' << detail::shortest(r.fidelity) << ','
       << detail::shortest(r.step) << ',' << detail::shortest(r.ideal_fidelity) << '\n';
  }
  return os.str();
}

std::string reports_to_json(std::span<const FidelityReport> reports) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) {
    arr.push_back(nlohmann::ordered_json{{"n", r.n},
                                         {"gamma_per_ns", r.gamma},
                                         {"gamma_phi_per_ns", r.gamma_phi},
                                         {"T_ns", r.swap_time},
                                         {"fidelity", r.fidelity},
                                         {"step_ns", r.step},
                                         {"ideal_fidelity", r.ideal_fidelity}});
  }
  return arr.dump(2) + "\n";
}

std::vector<FidelityReport> fidelity_vs_n(std::span<const int> ns, std::span<const double> gammas,
                                          double g0, IntegratorSettings settings,
                                          double gamma_phi, NoisyMethod method) {
  if (ns.empty() || gammas.empty()) throw InputError("fidelity_vs_n: empty sweep");
  for (int n : ns) {
    if (n < 2 || n > 20) throw InputError("fidelity_vs_n: n must be 2..20");
  }
  for (double g : gammas) {
    if (!(g >= 0.0) || !std::isfinite(g)) throw InputError("fidelity_vs_n: rates must be >= 0");
  }
  const double T = circulation_period(g0).swap_time;
  if (settings.step == 0.0) settings = IntegratorSettings::effective_frame(T);

  std::vector<FidelityReport> out;
  for (int n : ns) {
    const SystemConfig config = SystemConfig::uniform(n, g0);
    const Schedule schedule = build_ghz_schedule(n, g0);
    const double ideal = execute_ideal(config, schedule, false).ghz_fidelity;
    for (double gamma : gammas) {
      const auto t0 = std::chrono::steady_clock::now();
      const NoisyRun run = execute_noisy(config, schedule, NoiseRates::uniform(n, gamma, gamma_phi),
                                         settings, method);
      const auto t1 = std::chrono::steady_clock::now();
      FidelityReport r;
      r.n = n;
      r.gamma = gamma;
      r.gamma_phi = gamma_phi;
      r.swap_time = T;
      r.fidelity = std::clamp(run.fidelity, 0.0, 1.0);
      r.step = settings.step;
      r.ideal_fidelity = ideal;
      r.wall_time = std::chrono::duration<double>(t1 - t0).count();
      out.push_back(r);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const FidelityReport& a, const FidelityReport& b) {
    return a.n != b.n ? a.n < b.n : a.gamma < b.gamma;
  });
  return out;
}

std::vector<RwaRow> rwa_sweep(std::span<const double> ratios, const RwaTemplate& tmpl) {
  if (ratios.empty()) throw InputError("rwa_sweep: empty ratio list");
  for (double r : ratios) {
    if (!(r > 0.0 && r <= 0.2)) {
      throw InputError("rwa_sweep: ratio " + detail::shortest(r) + " outside (0, 0.2]");
    }
  }
  if (!(tmpl.detuning > 0.0) || !(tmpl.omega_high > tmpl.detuning)) {
    throw InputError("rwa_sweep: need 0 < detuning < omega_high");
  }
  std::vector<RwaRow> rows;
  for (double ratio : ratios) {
    const double g0 = ratio * tmpl.detuning;
    const SystemConfig config = SystemConfig::alternating(3, g0, tmpl.omega_high, tmpl.detuning);
    LoopWindow w;
    w.loop = {1, 2, 3};
    w.phases = tmpl.phases;
    w.duration = circulation_period(g0).swap_time;
    IntegratorSettings settings = IntegratorSettings::lab_frame(config);
    if (tmpl.step > 0.0) settings.step = tmpl.step;

    CVector a = CVector::Zero(8);
    a(BasisLabel("010").index()) = 1.0 / std::sqrt(2.0);
    a(BasisLabel("110").index()) = 1.0 / std::sqrt(2.0);
    const StateVector psi0(3, a);
    const StaticPropagator eff(effective_hamiltonian(config, w));
    double worst = 0.0;
    auto deficit = [&](double t, const StateVector& lab) {
      const StateVector rot = interaction_frame(lab, config, t);
      const StateVector ref = eff.evolve(psi0, t);
      return std::max(0.0, 1.0 - fidelity(rot, ref));
    };
    const auto specs = lab_couplings(config, w);
    const StateVector last = evolve_lab(
        psi0, config, specs, 0.0, w.duration, settings,
        [&](double t, const StateVector& lab) { worst = std::max(worst, deficit(t, lab)); });

    RwaRow row;
    row.ratio = ratio;
    row.g0 = g0;
    row.delta = tmpl.detuning;
    row.swap_time = w.duration;
    row.final_infidelity = deficit(w.duration, last);
    row.infidelity = std::max(worst, row.final_infidelity);
    row.step = settings.step;
    rows.push_back(row);
  }
  return rows;
}

std::string rwa_to_csv(std::span<const RwaRow> rows) {
  std::ostringstream os;
  os << "ratio,g0_rad_per_ns,delta_rad_per_ns,T_ns,infidelity,final_infidelity,step_ns\n";
  for (const auto& r : rows) {
    os << detail::shortest(r.ratio) << ',' << detail::shortest(r.g0) << ','
       << detail::shortest(r.delta) << ',' << detail::shortest(r.swap_time) << ','
       << detail::shortest(r.infidelity) << ',' << detail::shortest(r.final_infidelity) << ','
       << detail::shortest(r.step) << '\n';
  }
  return os.str();
}

}  // namespace ghzflux
