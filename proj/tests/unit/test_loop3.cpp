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

#include "ghzflux/dynamics.hpp"
#include "ghzflux/loop3.hpp"
#include "oracles.hpp"

using namespace ghzflux;

namespace {

const double kG0 = units::mhz_to_rad_per_ns(3.849);

double swap_time(double g0) { return 4 * oracle::kPi / (3 * std::sqrt(3.0) * g0); }

double prob(const StateVector& s, const char* bits) { return std::norm(s[BasisLabel(bits).index()]); }

}  // namespace

TEST(Loop3, SwapTimeFormula) {
  EXPECT_NEAR(circulation_period(kG0).swap_time, swap_time(kG0), 1e-12);
  EXPECT_NEAR(circulation_period(kG0).period, 3 * swap_time(kG0), 1e-12);
  EXPECT_NEAR(circulation_period(kG0).swap_time, 100.0, 0.01);
  EXPECT_NEAR(coupling_for_swap_time(swap_time(0.123)), 0.123, 1e-15);
  EXPECT_THROW(circulation_period(0.0), InputError);
  EXPECT_THROW(coupling_for_swap_time(-1.0), InputError);
}

TEST(Loop3, SingleExcitationCirculatesForward) {
  const SystemConfig c = SystemConfig::uniform(3, kG0);
  const LoopWindow w = symmetric_loop_window();
  const HamiltonianMatrix h = effective_hamiltonian(c, w);
  const double T = swap_time(kG0);
  const StateVector psi0 = make_basis_state(3, BasisLabel("100"));
  EXPECT_GT(prob(evolve_static(psi0, h, T), "010"), 1 - 1e-12);
  EXPECT_GT(prob(evolve_static(psi0, h, 2 * T), "001"), 1 - 1e-12);
  EXPECT_GT(prob(evolve_static(psi0, h, 3 * T), "100"), 1 - 1e-12);
}

TEST(Loop3, DoubleExcitationCirculatesBackward) {
  const SystemConfig c = SystemConfig::uniform(3, kG0);
  const HamiltonianMatrix h = effective_hamiltonian(c, symmetric_loop_window());
  const double T = swap_time(kG0);
  const StateVector psi0 = make_basis_state(3, BasisLabel("011"));
  EXPECT_GT(prob(evolve_static(psi0, h, T), "110"), 1 - 1e-12);
  EXPECT_GT(prob(evolve_static(psi0, h, 2 * T), "101"), 1 - 1e-12);
}

TEST(Loop3, DirectionFollowsFluxSign) {
  SystemConfig c = SystemConfig::uniform(3, kG0);
  LoopWindow w = symmetric_loop_window();
  EXPECT_EQ(circulation_direction(c, w, 1), +1);
  EXPECT_EQ(circulation_direction(c, w, 2), -1);
  for (auto& p : w.phases) p = -p;
  EXPECT_EQ(circulation_direction(c, w, 1), -1);
  EXPECT_EQ(circulation_direction(c, w, 2), +1);
  w.phases = {0.0, oracle::kPi / 2, 0.0};
  EXPECT_EQ(circulation_direction(c, w, 1), -1);
  EXPECT_EQ(circulation_direction(c, w, 2), +1);
  w.phases = {0.0, 0.0, 0.0};
  EXPECT_THROW(circulation_direction(c, w, 1), PreconditionError);
  EXPECT_THROW(circulation_direction(c, symmetric_loop_window(), 3), InputError);
}

TEST(Loop3, ClosedFormMatchesPropagation) {
  const SystemConfig c = SystemConfig::uniform(3, kG0);
  const HamiltonianMatrix h = effective_hamiltonian(c, symmetric_loop_window());
  const double T = swap_time(kG0);
  const StaticPropagator p(h);
  const StateVector psi0 = make_basis_state(3, BasisLabel("100"));
  for (int k = 0; k < 300; ++k) {
    const double t = 3 * T * k / 299.0;
    const auto cf = closed_form_populations(t, kG0);
    const StateVector s = p.evolve(psi0, t);
    EXPECT_NEAR(cf[0], prob(s, "100"), 1e-9);
    EXPECT_NEAR(cf[1], prob(s, "010"), 1e-9);
    EXPECT_NEAR(cf[2], prob(s, "001"), 1e-9);
    const auto amp = closed_form_amplitudes(t, kG0);
    EXPECT_NEAR(amp[0] * amp[0], cf[0], 1e-12);
  }
}

TEST(Loop3, HalfSwapSpotValue) {
  const SystemConfig c = SystemConfig::uniform(3, kG0);
  const StateVector s = evolve_static(make_basis_state(3, BasisLabel("100")),
                                      effective_hamiltonian(c, symmetric_loop_window()), swap_time(kG0) / 2);
  EXPECT_NEAR(prob(s, "100"), 4.0 / 9, 1e-12);
  EXPECT_NEAR(prob(s, "010"), 4.0 / 9, 1e-12);
  EXPECT_NEAR(prob(s, "001"), 1.0 / 9, 1e-12);
  const auto cf = closed_form_populations(swap_time(kG0) / 2, kG0);
  EXPECT_NEAR(cf[0], 4.0 / 9, 1e-12);
  EXPECT_NEAR(cf[1], 4.0 / 9, 1e-12);
  EXPECT_NEAR(cf[2], 1.0 / 9, 1e-12);
}

TEST(Loop3, Eigensystem) {
  const double g = 0.37;
  for (int exc : {1, 2}) {
    const LoopEigensystem es = loop_eigensystem(g, exc);
    EXPECT_NEAR(es.eigenvalues[0], -std::sqrt(3.0) * g / 2, 1e-12);
    EXPECT_NEAR(es.eigenvalues[1], 0.0, 1e-12);
    EXPECT_NEAR(es.eigenvalues[2], std::sqrt(3.0) * g / 2, 1e-12);
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(std::abs(es.eigenvectors(k, 1) - 1 / std::sqrt(3.0)), 0.0, 1e-12);
    }
    const Eigen::Matrix3cd m = circulation_matrix(g, exc);
    for (int k = 0; k < 3; ++k) {
      const Eigen::Vector3cd v = es.eigenvectors.col(k);
      EXPECT_LT((m * v - es.eigenvalues[k] * v).norm(), 1e-12);
      EXPECT_NEAR(v.norm(), 1.0, 1e-12);
    }
  }
  EXPECT_EQ(loop_eigensystem(g, 2).basis[0].str(), "011");
}

TEST(Loop3, CirculationMatrixMatchesHamiltonianBlock) {
  const double g = 0.2;
  const SystemConfig c = SystemConfig::uniform(3, g);
  const HamiltonianMatrix h = effective_hamiltonian(c, symmetric_loop_window());
  for (int exc : {1, 2}) {
    const auto basis = loop_eigensystem(g, exc).basis;
    const CMatrix blk = block_in_basis(h, std::span<const BasisLabel>(basis.data(), 3));
    EXPECT_LT((blk - CMatrix(circulation_matrix(g, exc))).norm(), 1e-15);
  }
}
