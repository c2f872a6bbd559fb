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

#include "ghzflux/protocol.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include "ghzflux/loop3.hpp"

namespace ghzflux {

namespace {

constexpr double kTimeEps = 1e-9;

bool same_time(double a, double b) { return std::abs(a - b) <= kTimeEps * std::max(1.0, std::abs(a)); }

struct Timeline {
  std::vector<double> times;  // merged breakpoints
};

Timeline build_timeline(const Schedule& s) {
  std::vector<double> t{0.0};
  for (const auto& p : s.pulses) t.push_back(p.time);
  for (const auto& w : s.windows) {
    t.push_back(w.start);
    t.push_back(w.end());
  }
  std::sort(t.begin(), t.end());
  Timeline tl;
  for (double x : t) {
    if (tl.times.empty() || !same_time(tl.times.back(), x)) tl.times.push_back(x);
  }
  return tl;
}

std::vector<const PulseEvent*> pulses_at(const Schedule& s, double t) {
  std::vector<const PulseEvent*> out;
  for (const auto& p : s.pulses) {
    if (same_time(p.time, t)) out.push_back(&p);
  }
  return out;
}

std::vector<LoopWindow> active_windows(const Schedule& s, double t0, double t1) {
  std::vector<LoopWindow> out;
  for (const auto& w : s.windows) {
    if (w.start <= t0 + kTimeEps && w.end() >= t1 - kTimeEps) out.push_back(w);
  }
  return out;
}

bool window_ends_at(const Schedule& s, double t) {
  return std::any_of(s.windows.begin(), s.windows.end(),
                     [&](const LoopWindow& w) { return same_time(w.end(), t); });
}

// Tracks the ideal chain as a set of classical bit strings in equal
// superposition. Becomes invalid on anything it cannot follow exactly.
class BranchTracker {
 public:
  explicit BranchTracker(int n) : n_(n), branches_{0} {}

  bool valid() const { return valid_; }

  void pulse(const PulseEvent& p) {
    if (!valid_) return;
    const std::size_t m = qubit_mask(p.qubit, n_);
    switch (p.kind) {
      case PulseKind::flip_x:
        for (auto& b : branches_) b ^= m;
        return;
      case PulseKind::cnot: {
        const std::size_t c = qubit_mask(p.control, n_);
        for (auto& b : branches_) {
          if (b & c) b ^= m;
        }
        return;
      }
      case PulseKind::rotation:
        if (p.is_half_pi_pulse() && p.angle > 0 && same_time(p.axis_phase, kPi / 2) &&
            branches_.size() == 1 && (branches_[0] & m) == 0) {
          branches_.push_back(branches_[0] | m);
          return;
        }
        if (p.is_pi_pulse() && same_time(std::abs(p.angle), kPi)) {
          if (branches_.size() == 1) {
            branches_[0] ^= m;
            return;
          }
        }
        valid_ = false;
        return;
    }
  }

  void window(const SystemConfig& config, const LoopWindow& w, double duration) {
    if (!valid_) return;
    const double flux = effective_flux(config, w);
    if (std::abs(std::abs(flux) - kPi / 2) > 1e-9) {
      valid_ = false;
      return;
    }
    const double swap = circulation_period(w.coupling(config)).swap_time;
    const double steps = duration / swap;
    const double rounded = std::round(steps);
    if (std::abs(steps - rounded) > 1e-9) {
      valid_ = false;
      return;
    }
    const int shift = static_cast<int>(rounded) % 3;
    const int sense = flux > 0 ? +1 : -1;
    for (auto& b : branches_) {
      std::array<bool, 3> bits{};
      int exc = 0;
      for (int k = 0; k < 3; ++k) {
        bits[static_cast<std::size_t>(k)] = (b & qubit_mask(w.loop[static_cast<std::size_t>(k)], n_)) != 0;
        exc += bits[static_cast<std::size_t>(k)] ? 1 : 0;
      }
      if (exc == 0 || exc == 3) continue;
      const int dir = exc == 1 ? sense : -sense;
      std::array<bool, 3> moved = bits;
      for (int s = 0; s < shift; ++s) {
        std::array<bool, 3> next{};
        for (int k = 0; k < 3; ++k) {
          // forward: content of slot k moves to slot k+1
          const int src = dir > 0 ? (k + 2) % 3 : (k + 1) % 3;
          next[static_cast<std::size_t>(k)] = moved[static_cast<std::size_t>(src)];
        }
        moved = next;
      }
      for (int k = 0; k < 3; ++k) {
        const std::size_t m = qubit_mask(w.loop[static_cast<std::size_t>(k)], n_);
        b = moved[static_cast<std::size_t>(k)] ? (b | m) : (b & ~m);
      }
    }
  }

  StateVector expected() const {
    const std::size_t dim = std::size_t{1} << n_;
    CVector v = CVector::Zero(static_cast<Eigen::Index>(dim));
    const double a = 1.0 / std::sqrt(static_cast<double>(branches_.size()));
    for (auto b : branches_) v(static_cast<Eigen::Index>(b)) += a;
    return StateVector(n_, v / v.norm());
  }

 private:
  int n_;
  std::vector<std::size_t> branches_;
  bool valid_ = true;
};

StateVector ground_state(int n) {
  CVector v = CVector::Zero(Eigen::Index{1} << n);
  v(0) = 1.0;
  return StateVector(n, std::move(v));
}

// Local config for the three qubits of a window, relabelled 1..3.
SystemConfig local_config(const SystemConfig& config, const LoopWindow& w) {
  SystemConfig c = SystemConfig::uniform(3, w.coupling(config));
  c.chirality_sign = config.chirality_sign;
  return c;
}

LoopWindow local_window(const LoopWindow& w, double duration) {
  LoopWindow lw = w;
  lw.loop = {1, 2, 3};
  lw.start = 0.0;
  lw.duration = duration;
  return lw;
}

template <class F>
void walk(const Schedule& s, F&& on_pulses, auto&& on_interval) {
  const Timeline tl = build_timeline(s);
  for (std::size_t i = 0; i < tl.times.size(); ++i) {
    const double t = tl.times[i];
    on_pulses(t, pulses_at(s, t));
    if (i + 1 < tl.times.size()) {
      const double t1 = tl.times[i + 1];
      on_interval(t, t1, active_windows(s, t, t1));
    }
  }
}

}  // namespace

double Schedule::duration() const {
  double d = 0.0;
  for (const auto& p : pulses) d = std::max(d, p.time);
  for (const auto& w : windows) d = std::max(d, w.end());
  return d;
}

int Schedule::count_pi_pulses() const {
  return static_cast<int>(std::count_if(pulses.begin(), pulses.end(),
                                        [](const PulseEvent& p) { return p.is_pi_pulse(); }));
}

int Schedule::count_half_pi_pulses() const {
  return static_cast<int>(std::count_if(pulses.begin(), pulses.end(),
                                        [](const PulseEvent& p) { return p.is_half_pi_pulse(); }));
}

void Schedule::canonicalize() {
  std::stable_sort(pulses.begin(), pulses.end(),
                   [](const PulseEvent& a, const PulseEvent& b) { return a.time < b.time; });
  std::stable_sort(windows.begin(), windows.end(),
                   [](const LoopWindow& a, const LoopWindow& b) { return a.start < b.start; });
}

void Schedule::validate() const {
  if (n_qubits < 1 || n_qubits > 20) {
    throw InputError("schedule: qubit count " + std::to_string(n_qubits) + " out of range");
  }
  for (const auto& p : pulses) {
    p.validate(n_qubits);
    if (p.time < 0.0) throw InputError("schedule: negative pulse time");
  }
  for (const auto& w : windows) w.validate(n_qubits);
  for (std::size_t i = 0; i < windows.size(); ++i) {
    for (std::size_t j = i + 1; j < windows.size(); ++j) {
      const auto& a = windows[i];
      const auto& b = windows[j];
      const bool overlap = a.start < b.end() - kTimeEps && b.start < a.end() - kTimeEps;
      if (!overlap) continue;
      for (int q : a.loop) {
        if (b.involves(q)) {
          throw InputError("schedule: overlapping windows share qubit " + std::to_string(q));
        }
      }
    }
  }
  for (const auto& p : pulses) {
    for (const auto& w : windows) {
      const bool inside = p.time > w.start + kTimeEps && p.time < w.end() - kTimeEps;
      if (!inside) continue;
      for (int q : w.loop) {
        if (p.touches(q)) {
          throw InputError("schedule: pulse at t=" + std::to_string(p.time) +
                           " inside a window on qubit " + std::to_string(q));
        }
      }
    }
  }
}

Schedule build_ghz_schedule(int n, double g0) {
  if (n < 2 || n > 20) throw InputError("build_ghz_schedule: need 2 <= n <= 20");
  if (!(g0 > 0.0) || !std::isfinite(g0)) throw InputError("build_ghz_schedule: g0 must be positive");
  const double T = circulation_period(g0).swap_time;
  Schedule s;
  s.n_qubits = n;
  s.pulses.push_back(PulseEvent::rotation_y(0.0, 1, kPi / 2));
  int a = 0;
  if (n % 2 == 1) {
    s.pulses.push_back(PulseEvent::flip(0.0, 2));
    a = 1;
  } else {
    s.pulses.push_back(PulseEvent::cnot_gate(0.0, 1, 2));
    if (n >= 3) s.pulses.push_back(PulseEvent::flip(0.0, 3));
    a = 2;
  }
  int k = 0;
  for (; a + 2 <= n; a += 2, ++k) {
    LoopWindow w;
    w.loop = {a, a + 1, a + 2};
    w.start = k * T;
    w.duration = T;
    w.phases = kGhzWindowPhases;
    s.windows.push_back(w);
    const double t_end = (k + 1) * T;
    s.pulses.push_back(PulseEvent::flip(t_end, a));
    if (a + 3 <= n) s.pulses.push_back(PulseEvent::flip(t_end, a + 3));
  }
  s.canonicalize();
  s.validate();
  return s;
}

IdealRun execute_ideal(const SystemConfig& config, const Schedule& schedule,
                       bool record_checkpoints) {
  config.validate();
  schedule.validate();
  if (config.n_qubits != schedule.n_qubits) throw InputError("execute_ideal: qubit count mismatch");
  const int n = schedule.n_qubits;
  StateVector psi = ground_state(n);
  BranchTracker tracker(n);
  std::vector<Checkpoint> cps;
  int label_index = 0;

  auto record = [&](double t, const std::string& label) {
    if (!record_checkpoints || !tracker.valid()) return;
    Checkpoint c;
    c.time = t;
    c.label = label;
    c.expected = tracker.expected();
    c.fidelity = fidelity(psi, c.expected);
    cps.push_back(std::move(c));
  };

  walk(
      schedule,
      [&](double t, const std::vector<const PulseEvent*>& ps) {
        const bool ended = window_ends_at(schedule, t);
        if (!ended && ps.empty()) return;
        const std::string base = "t" + std::to_string(++label_index);
        if (ended) record(t, base + ":pre");
        for (const auto* p : ps) {
          psi = apply_pulse(psi, *p);
          tracker.pulse(*p);
        }
        if (!ps.empty()) record(t, base + ":post");
      },
      [&](double t0, double t1, const std::vector<LoopWindow>& active) {
        if (active.empty()) return;
        psi = evolve_static(psi, effective_hamiltonian(config, std::span<const LoopWindow>(active)),
                            t1 - t0);
        for (const auto& w : active) tracker.window(config, w, t1 - t0);
      });

  IdealRun run{psi, {}, 0.0};
  const StateVector ghz = ghz_target(n);
  run.ghz_fidelity = fidelity(psi, ghz);
  if (record_checkpoints) {
    if (!tracker.valid()) cps.clear();
    Checkpoint fin;
    fin.time = schedule.duration();
    fin.label = "final";
    fin.expected = ghz;
    fin.fidelity = run.ghz_fidelity;
    cps.push_back(std::move(fin));
  }
  run.transcript.checkpoints = std::move(cps);
  return run;
}

NoisyRun execute_noisy(const SystemConfig& config, const Schedule& schedule,
                       const NoiseRates& noise, const IntegratorSettings& settings,
                       NoisyMethod method) {
  config.validate();
  schedule.validate();
  const int n = schedule.n_qubits;
  if (config.n_qubits != n) throw InputError("execute_noisy: qubit count mismatch");
  noise.validate(n);
  DensityMatrix rho = DensityMatrix::from_pure(ground_state(n));

  using Key = std::tuple<std::array<int, 3>, std::array<double, 3>, double, double>;
  std::map<Key, LocalLindbladPropagator> cache;

  walk(
      schedule,
      [&](double, const std::vector<const PulseEvent*>& ps) {
        for (const auto* p : ps) rho = apply_pulse(rho, *p);
      },
      [&](double t0, double t1, const std::vector<LoopWindow>& active) {
        const double dt = t1 - t0;
        if (method == NoisyMethod::full) {
          const HamiltonianMatrix h =
              effective_hamiltonian(config, std::span<const LoopWindow>(active));
          rho = evolve_lindblad(rho, h, noise, dt, settings);
          return;
        }
        std::size_t mask = 0;
        for (const auto& w : active) {
          const Key key{w.loop, w.phases, w.coupling(config), dt};
          auto it = cache.find(key);
          if (it == cache.end()) {
            const HamiltonianMatrix lh =
                effective_hamiltonian(local_config(config, w), local_window(w, dt));
            it = cache
                     .emplace(key, LocalLindbladPropagator(
                                       n, std::vector<int>(w.loop.begin(), w.loop.end()), lh,
                                       noise, dt, settings))
                     .first;
          }
          rho = it->second.apply_local(rho);
          for (int q : w.loop) mask |= qubit_mask(q, n);
        }
        rho = apply_idle_noise(rho, noise, dt, mask);
      });

  NoisyRun run{rho, 0.0};
  run.fidelity = fidelity(rho, ghz_target(n));
  return run;
}

TrajectoryRun execute_trajectories(const SystemConfig& config, const Schedule& schedule,
                                   const NoiseRates& noise, const IntegratorSettings& settings,
                                   int n_trajectories, std::uint64_t seed) {
  config.validate();
  schedule.validate();
  const int n = schedule.n_qubits;
  if (config.n_qubits != n) throw InputError("execute_trajectories: qubit count mismatch");
  noise.validate(n);
  TrajectoryEnsemble ens(ground_state(n), n_trajectories, seed);
  walk(
      schedule,
      [&](double, const std::vector<const PulseEvent*>& ps) {
        for (const auto* p : ps) ens.apply(*p);
      },
      [&](double t0, double t1, const std::vector<LoopWindow>& active) {
        ens.evolve(effective_hamiltonian(config, std::span<const LoopWindow>(active)), noise,
                   t1 - t0, settings);
      });
  TrajectoryRun run{ens.density_matrix(), 0.0, ens.jumps()};
  run.fidelity = ens.mean_fidelity(ghz_target(n));
  return run;
}

std::string CheckpointReport::summary() const {
  std::ostringstream os;
  if (pass) {
    os << "all checkpoints pass";
    return os.str();
  }
  os << failures.size() << " checkpoint(s) failed:";
  for (const auto& c : failures) os << ' ' << c.label << " (F=" << c.fidelity << ")";
  return os.str();
}

CheckpointReport verify_checkpoints(const CheckpointTranscript& transcript, double tolerance) {
  if (transcript.checkpoints.empty()) throw InputError("verify_checkpoints: empty transcript");
  if (!(tolerance >= 0.0)) throw InputError("verify_checkpoints: tolerance must be >= 0");
  CheckpointReport r;
  for (const auto& c : transcript.checkpoints) {
    if (!(c.fidelity >= 1.0 - tolerance)) r.failures.push_back(c);
  }
  r.pass = r.failures.empty();
  return r;
}

}  // namespace ghzflux
