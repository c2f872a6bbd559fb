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

#include <json.hpp>

#include "ghzflux/analysis.hpp"
#include "ghzflux/loop3.hpp"
#include "oracles.hpp"

using namespace ghzflux;

namespace {

const double kG0 = units::mhz_to_rad_per_ns(3.849);
const double kSwap = 4 * oracle::kPi / (3 * std::sqrt(3.0) * kG0);

PopulationTrace fig1(const char* initial) {
  return population_trace(SystemConfig::uniform(3, kG0), symmetric_loop_window(), BasisLabel(initial),
                          3 * kSwap, 601);
}

}  // namespace

TEST(PopulationTrace, SingleExcitationPeaks) {
  const PopulationTrace tr = fig1("100");
  ASSERT_EQ(tr.times.size(), 601u);
  EXPECT_NEAR(tr.times[200], kSwap, 1e-9);
  EXPECT_GE(tr.column("010")[200], 1 - 1e-6);
  EXPECT_GE(tr.column("001")[400], 1 - 1e-6);
  EXPECT_GE(tr.column("100")[600], 1 - 1e-6);
}

TEST(PopulationTrace, DoubleExcitationPeaks) {
  const PopulationTrace tr = fig1("011");
  EXPECT_GE(tr.column("110")[200], 1 - 1e-6);
  EXPECT_GE(tr.column("101")[400], 1 - 1e-6);
}

TEST(PopulationTrace, MatchesClosedFormAndConservesProbability) {
  const PopulationTrace tr = fig1("100");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const auto cf = closed_form_populations(tr.times[i], kG0);
    EXPECT_NEAR(tr.column("100")[i], cf[0], 1e-9);
    EXPECT_NEAR(tr.column("010")[i], cf[1], 1e-9);
    EXPECT_NEAR(tr.column("001")[i], cf[2], 1e-9);
    const double sum = tr.columns[0][i] + tr.columns[1][i] + tr.columns[2][i];
    EXPECT_LE(sum, 1 + 1e-9);
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(PopulationTrace, SpectatorQubitsHeld) {
  LoopWindow w = symmetric_loop_window();
  w.loop = {2, 3, 4};
  const PopulationTrace tr =
      population_trace(SystemConfig::uniform(4, kG0), w, BasisLabel("1010"), kSwap, 11);
  EXPECT_EQ(tr.labels[0].str(), "1100");
  EXPECT_EQ(tr.labels[1].str(), "1010");
  EXPECT_EQ(tr.labels[2].str(), "1001");
}

TEST(PopulationTrace, CsvLayout) {
  const PopulationTrace tr = population_trace(SystemConfig::uniform(3, kG0), symmetric_loop_window(),
                                              BasisLabel("100"), kSwap, 3);
  const std::string csv = tr.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t_ns,P_100,P_010,P_001");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv, tr.to_csv());
}

TEST(PopulationTrace, RejectsBadArguments) {
  const SystemConfig c = SystemConfig::uniform(3, kG0);
  EXPECT_THROW(population_trace(c, symmetric_loop_window(), BasisLabel("10"), 1.0, 10), InputError);
  EXPECT_THROW(population_trace(c, symmetric_loop_window(), BasisLabel("100"), 1.0, 1), InputError);
  EXPECT_THROW(population_trace(c, symmetric_loop_window(), BasisLabel("100"), -1.0, 10), InputError);
}

TEST(FidelityVsN, NoiselessIsPerfect) {
  const std::vector<int> ns{3, 5, 7, 9};
  const std::vector<double> gammas{0.0};
  for (const auto& r : fidelity_vs_n(ns, gammas, coupling_for_swap_time(100.0), {})) {
    EXPECT_GE(r.fidelity, 1 - 1e-6) << r.n;
    EXPECT_GE(r.ideal_fidelity, 1 - 1e-6) << r.n;
    EXPECT_NEAR(r.step, 100.0 / 2000, 1e-15);
  }
}

TEST(FidelityVsN, OrderingAndGoldens) {
  const std::vector<int> ns{9, 3, 7, 5};
  const std::vector<double> gammas{5e-4, 2e-4};
  const auto reports = fidelity_vs_n(ns, gammas, coupling_for_swap_time(100.0), {});
  ASSERT_EQ(reports.size(), 8u);
  // first validated run, cross-checked against trajectories
  const std::map<std::pair<int, double>, double> golden{
      {{3, 2e-4}, 0.9727121717621092}, {{3, 5e-4}, 0.933286609954745},
      {{5, 2e-4}, 0.9257842309141376}, {{5, 5e-4}, 0.826544133880019},
      {{7, 2e-4}, 0.8649001896729411}, {{7, 5e-4}, 0.7026737770235316},
      {{9, 2e-4}, 0.7943565399007673}, {{9, 5e-4}, 0.5790090996519005},
  };
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const auto& r = reports[k];
    EXPECT_EQ(r.n, 3 + 2 * static_cast<int>(k / 2));
    EXPECT_NEAR(r.fidelity, golden.at({r.n, r.gamma}), 1e-9) << r.n << " " << r.gamma;
    if (k % 2 == 1) {
      EXPECT_LT(r.fidelity, reports[k - 1].fidelity);
    }
    if (k >= 2) {
      EXPECT_LT(r.fidelity, reports[k - 2].fidelity);
    }
  }
}

TEST(FidelityVsN, TrajectoryOracleAgrees) {
  for (int n : {3, 5}) {
    const double g0 = coupling_for_swap_time(100.0);
    const auto settings = IntegratorSettings::effective_frame(100.0);
    const std::vector<int> ns{n};
    const std::vector<double> gammas{5e-4};
    const double me = fidelity_vs_n(ns, gammas, g0, settings).front().fidelity;
    const TrajectoryRun tr = execute_trajectories(SystemConfig::uniform(n, g0), build_ghz_schedule(n, g0),
                                                  NoiseRates::uniform(n, 5e-4), settings, 2000, 20260101);
    EXPECT_NEAR(tr.fidelity, me, 0.005) << n;
  }
}

TEST(FidelityVsN, ReportsSerialize) {
  const std::vector<int> ns{3};
  const std::vector<double> gammas{2e-4};
  const auto r = fidelity_vs_n(ns, gammas, coupling_for_swap_time(100.0), {});
  const std::string csv = reports_to_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,gamma_per_ns,gamma_phi_per_ns,T_ns,fidelity,step_ns,ideal_fidelity");
  const auto j = nlohmann::json::parse(reports_to_json(r));
  ASSERT_TRUE(j.is_array());
  ASSERT_EQ(j.size(), 1u);
  for (const char* key : {"n", "gamma_per_ns", "gamma_phi_per_ns", "T_ns", "fidelity", "step_ns", "ideal_fidelity"}) {
    EXPECT_TRUE(j[0].contains(key)) << key;
  }
  EXPECT_EQ(j[0]["fidelity"].get<double>(), r[0].fidelity);
  EXPECT_EQ(reports_to_json(r), reports_to_json(fidelity_vs_n(ns, gammas, coupling_for_swap_time(100.0), {})));
}

TEST(FidelityVsN, RejectsBadSweeps) {
  const std::vector<int> bad_n{1};
  const std::vector<int> ok_n{3};
  const std::vector<double> g{0.0};
  const std::vector<double> neg{-1.0};
  EXPECT_THROW(fidelity_vs_n(bad_n, g, 0.1, {}), InputError);
  EXPECT_THROW(fidelity_vs_n(ok_n, neg, 0.1, {}), InputError);
  EXPECT_THROW(fidelity_vs_n(ok_n, std::vector<double>{}, 0.1, {}), InputError);
}

TEST(RwaSweep, ScalingAndBounds) {
  const std::vector<double> ratios{0.005, 0.01, 0.02, 0.05};
  const auto rows = rwa_sweep(ratios);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_LE(rows[2].infidelity, 0.01);
  const double factor = rows[2].infidelity / rows[1].infidelity;
  EXPECT_GE(factor, 3.0);
  EXPECT_LE(factor, 5.0);
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_GT(rows[k].infidelity, rows[k - 1].infidelity);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.g0, r.ratio * r.delta, 1e-15);
    EXPECT_NEAR(r.swap_time, 4 * oracle::kPi / (3 * std::sqrt(3.0) * r.g0), 1e-9);
    EXPECT_LE(r.final_infidelity, r.infidelity);
  }
  const std::string csv = rwa_to_csv(rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "ratio,g0_rad_per_ns,delta_rad_per_ns,T_ns,infidelity,final_infidelity,step_ns");
}

TEST(RwaSweep, RejectsOutOfDomainRatios) {
  EXPECT_THROW(rwa_sweep(std::vector<double>{0.5}), InputError);
  EXPECT_THROW(rwa_sweep(std::vector<double>{0.0}), InputError);
  EXPECT_THROW(rwa_sweep(std::vector<double>{}), InputError);
}
