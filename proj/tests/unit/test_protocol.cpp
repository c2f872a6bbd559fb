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

#include <gtest/gtest.h>

#include "ghzflux/loop3.hpp"
#include "ghzflux/protocol.hpp"
#include "oracles.hpp"

using namespace ghzflux;

namespace {

const double kG0 = coupling_for_swap_time(100.0);

// Reference chain built from explicit gate matrices and matrix exponentials.
CVector reference_chain(int n, double g0, int chirality) {
  const Eigen::Index dim = Eigen::Index{1} << n;
  CVector psi = CVector::Zero(dim);
  psi(0) = 1.0;
  const double T = 4 * oracle::kPi / (3 * std::sqrt(3.0) * g0);
  auto flip = [&](int q) { psi = oracle::embed(oracle::pauli_x(), q, n) * psi; };
  psi = oracle::embed(oracle::rotation(oracle::kPi / 2, oracle::kPi / 2), 1, n) * psi;
  int a = 1;
  if (n % 2 == 0) {
    CVector out = CVector::Zero(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
      const bool c = (i >> (n - 1)) & 1;
      out(c ? (i ^ (Eigen::Index{1} << (n - 2))) : i) += psi(i);
    }
    psi = out;
    if (n >= 3) flip(3);
    a = 2;
  } else {
    flip(2);
  }
  for (; a + 2 <= n; a += 2) {
    CMatrix h = CMatrix::Zero(dim, dim);
    const int loop[3] = {a, a + 1, a + 2};
    const double phi[3] = {0.0, oracle::kPi / 2, 0.0};
    for (int k = 0; k < 3; ++k) {
      const int x = loop[k];
      const int y = loop[(k + 1) % 3];
      // (g/2) e^{i s phi} sigma+_x sigma-_y + h.c.
      const CMatrix hop = oracle::embed(oracle::lowering().adjoint(), x, n) * oracle::embed(oracle::lowering(), y, n);
      const Complex amp = 0.5 * g0 * std::polar(1.0, chirality * phi[k]);
      h += amp * hop + std::conj(amp) * hop.adjoint();
    }
    psi = oracle::propagator(h, T) * psi;
    flip(a);
    if (a + 3 <= n) flip(a + 3);
  }
  return psi;
}

}  // namespace

TEST(BuildSchedule, PulseCountsFollowTheChainFormula) {
  for (int m = 1; m <= 4; ++m) {
    const Schedule s = build_ghz_schedule(2 * m + 1, kG0);
    EXPECT_EQ(s.count_pi_pulses(), 2 * m);
    EXPECT_EQ(s.count_half_pi_pulses(), 1);
    EXPECT_EQ(static_cast<int>(s.windows.size()), m);
  }
  const Schedule bell = build_ghz_schedule(2, kG0);
  EXPECT_EQ(bell.windows.size(), 0u);
  EXPECT_EQ(bell.duration(), 0.0);
}

TEST(BuildSchedule, WindowsAndTiming) {
  const Schedule s = build_ghz_schedule(7, kG0);
  ASSERT_EQ(s.windows.size(), 3u);
  for (int k = 0; k < 3; ++k) {
    EXPECT_EQ(s.windows[k].loop, (std::array<int, 3>{2 * k + 1, 2 * k + 2, 2 * k + 3}));
    EXPECT_NEAR(s.windows[k].start, 100.0 * k, 1e-9);
    EXPECT_NEAR(s.windows[k].duration, 100.0, 1e-9);
    EXPECT_NEAR(std::abs(loop_flux(s.windows[k])), oracle::kPi / 2, 1e-15);
  }
  EXPECT_NEAR(s.duration(), 300.0, 1e-9);
  const Schedule e = build_ghz_schedule(6, kG0);
  EXPECT_EQ(e.windows.front().loop, (std::array<int, 3>{2, 3, 4}));
  EXPECT_THROW(build_ghz_schedule(1, kG0), InputError);
  EXPECT_THROW(build_ghz_schedule(3, 0.0), InputError);
}

TEST(Schedule, ValidationCatchesConflicts) {
  Schedule s;
  s.n_qubits = 5;
  LoopWindow a;
  a.loop = {1, 2, 3};
  a.duration = 50;
  LoopWindow b = a;
  b.loop = {3, 4, 5};
  b.start = 40;
  s.windows = {a, b};
  try {
    s.validate();
    FAIL() << "expected overlap error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("qubit 3"), std::string::npos) << e.what();
  }
  b.start = 50;
  s.windows = {a, b};
  EXPECT_NO_THROW(s.validate());
  s.pulses = {PulseEvent::flip(25, 2)};
  EXPECT_THROW(s.validate(), InputError);
  s.pulses = {PulseEvent::flip(25, 4)};
  EXPECT_NO_THROW(s.validate());
  s.pulses = {PulseEvent::flip(50, 3)};
  EXPECT_NO_THROW(s.validate());
  s.pulses = {PulseEvent::cnot_gate(60, 4, 1)};
  EXPECT_THROW(s.validate(), InputError);
}

TEST(ExecuteIdeal, SevenQubitTranscriptMatchesChainStates) {
  const Schedule s = build_ghz_schedule(7, kG0);
  const IdealRun run = execute_ideal(SystemConfig::uniform(7, kG0), s);
  const std::vector<std::pair<std::string, CVector>> chain{
      {"t1:post", oracle::superpose({"0100000", "1100000"})},
      {"t2:pre", oracle::superpose({"1000000", "0110000"})},
      {"t2:post", oracle::superpose({"0001000", "1111000"})},
      {"t3:pre", oracle::superpose({"0010000", "1101100"})},
      {"t3:post", oracle::superpose({"0000010", "1111110"})},
      {"t4:pre", oracle::superpose({"0000100", "1111011"})},
      {"t4:post", oracle::superpose({"0000000", "1111111"})},
      {"final", oracle::superpose({"0000000", "1111111"})},
  };
  const auto& cps = run.transcript.checkpoints;
  ASSERT_EQ(cps.size(), chain.size());
  for (std::size_t k = 0; k < chain.size(); ++k) {
    EXPECT_EQ(cps[k].label, chain[k].first);
    EXPECT_NEAR(oracle::overlap2(cps[k].expected.amplitudes(), chain[k].second), 1.0, 1e-15) << cps[k].label;
    EXPECT_GE(cps[k].fidelity, 1 - 1e-6) << cps[k].label;
  }
  EXPECT_TRUE(verify_checkpoints(run.transcript, 1e-6).pass);
}

TEST(ExecuteIdeal, GhzForAllSizes) {
  for (int n = 2; n <= 9; ++n) {
    const IdealRun run = execute_ideal(SystemConfig::uniform(n, kG0), build_ghz_schedule(n, kG0));
    EXPECT_GE(run.ghz_fidelity, 1 - 1e-6) << n;
    EXPECT_TRUE(verify_checkpoints(run.transcript, 1e-6).pass) << n;
  }
}

TEST(ExecuteIdeal, MatchesIndependentGateReference) {
  for (int n = 3; n <= 6; ++n) {
    for (int s : {-1, +1}) {
      SystemConfig c = SystemConfig::uniform(n, kG0);
      c.chirality_sign = s;
      const IdealRun run = execute_ideal(c, build_ghz_schedule(n, kG0), false);
      const CVector ref = reference_chain(n, kG0, s);
      EXPECT_LT((run.final_state.amplitudes() - ref).norm(), 1e-9) << n << " " << s;
    }
  }
}

TEST(ExecuteIdeal, OppositeChiralityBreaksTheChain) {
  SystemConfig c = SystemConfig::uniform(3, kG0);
  c.chirality_sign = +1;
  const IdealRun run = execute_ideal(c, build_ghz_schedule(3, kG0));
  EXPECT_LT(run.ghz_fidelity, 0.9);
  EXPECT_FALSE(verify_checkpoints(run.transcript, 1e-6).pass);
}

TEST(ExecuteIdeal, UntrackableScheduleKeepsFinalCheckpointOnly) {
  Schedule s = build_ghz_schedule(3, kG0);
  s.pulses.push_back(PulseEvent::rotation(s.duration(), 2, 0.3, 0.0));
  const IdealRun run = execute_ideal(SystemConfig::uniform(3, kG0), s);
  ASSERT_EQ(run.transcript.checkpoints.size(), 1u);
  EXPECT_EQ(run.transcript.checkpoints[0].label, "final");
}

TEST(ExecuteIdeal, MismatchedConfigRejected) {
  EXPECT_THROW(execute_ideal(SystemConfig::uniform(4, kG0), build_ghz_schedule(3, kG0)), InputError);
}

TEST(VerifyCheckpoints, ReportsFailures) {
  CheckpointTranscript t;
  t.checkpoints.push_back({0.0, "a", ghz_target(2), 1.0});
  t.checkpoints.push_back({1.0, "b", ghz_target(2), 0.9});
  const CheckpointReport r = verify_checkpoints(t, 1e-6);
  EXPECT_FALSE(r.pass);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0].label, "b");
  EXPECT_NE(r.summary().find("b"), std::string::npos);
  EXPECT_TRUE(verify_checkpoints(t, 0.2).pass);
  EXPECT_THROW(verify_checkpoints(CheckpointTranscript{}, 1e-6), InputError);
}

TEST(ExecuteNoisy, NoiselessMatchesIdeal) {
  for (int n : {3, 4, 5}) {
    const SystemConfig c = SystemConfig::uniform(n, kG0);
    const Schedule s = build_ghz_schedule(n, kG0);
    const auto st = IntegratorSettings::effective_frame(100.0);
    EXPECT_NEAR(execute_noisy(c, s, NoiseRates::none(n), st).fidelity, 1.0, 1e-6);
    EXPECT_NEAR(execute_noisy(c, s, NoiseRates::none(n), st, NoisyMethod::full).fidelity, 1.0, 1e-6);
  }
}

TEST(ExecuteNoisy, LocalAndFullRoutesAgree) {
  for (int n : {3, 4, 5}) {
    const SystemConfig c = SystemConfig::uniform(n, kG0);
    const Schedule s = build_ghz_schedule(n, kG0);
    const auto st = IntegratorSettings::effective_frame(100.0);
    std::vector<double> decay, deph;
    for (int q = 1; q <= n; ++q) {
      decay.push_back(1e-4 * q);
      deph.push_back(5e-5 * (n - q));
    }
    const NoiseRates noise{decay, deph};
    const NoisyRun a = execute_noisy(c, s, noise, st);
    const NoisyRun b = execute_noisy(c, s, noise, st, NoisyMethod::full);
    EXPECT_LT((a.final_state.elements() - b.final_state.elements()).norm(), 1e-8) << n;
    EXPECT_LT(a.fidelity, 1.0);
  }
}

TEST(ExecuteNoisy, SingleBranchDecayAgainstClosedForm) {
  // Bell pair without windows: only the |11> branch decays.
  const double gamma = 1e-3;
  const SystemConfig c = SystemConfig::uniform(2, kG0);
  Schedule s = build_ghz_schedule(2, kG0);
  s.pulses.push_back(PulseEvent::rotation(200.0, 1, 0.0, 0.0));
  const auto st = IntegratorSettings::effective_frame(100.0);
  const NoisyRun r = execute_noisy(c, s, NoiseRates::uniform(2, gamma), st);
  const double e = std::exp(-gamma * 200.0);
  // P(11) = e^2, coherence e/2, the decayed weight lands on 00
  EXPECT_NEAR(r.fidelity, (1 + e * e) / 2, 1e-12);
}

TEST(ExecuteTrajectories, AgreesWithMasterEquation) {
  const int n = 3;
  const SystemConfig c = SystemConfig::uniform(n, kG0);
  const Schedule s = build_ghz_schedule(n, kG0);
  const auto st = IntegratorSettings::effective_frame(100.0);
  const NoiseRates noise = NoiseRates::uniform(n, 5e-4, 1e-4);
  const NoisyRun me = execute_noisy(c, s, noise, st);
  const TrajectoryRun tr = execute_trajectories(c, s, noise, st, 1000, 2024);
  EXPECT_NEAR(tr.fidelity, me.fidelity, 0.01);
  EXPECT_GT(tr.jumps, 0);
  EXPECT_LT(trace_distance(tr.final_state, me.final_state), 0.05);
}
