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

#include "ghzflux/qstate.hpp"
#include "oracles.hpp"

using namespace ghzflux;

TEST(BasisLabel, QubitOneIsMostSignificant) {
  EXPECT_EQ(BasisLabel("100").index(), 4u);
  EXPECT_EQ(BasisLabel("001").index(), 1u);
  EXPECT_EQ(BasisLabel::from_index(6, 3).str(), "110");
  EXPECT_TRUE(BasisLabel("010").bit(2));
  EXPECT_FALSE(BasisLabel("010").bit(1));
  EXPECT_EQ(BasisLabel("1101").excitations(), 3);
}

TEST(BasisLabel, RoundTripsEveryIndex) {
  for (int n = 1; n <= 6; ++n) {
    for (std::size_t i = 0; i < (std::size_t{1} << n); ++i) {
      EXPECT_EQ(BasisLabel::from_index(i, n).index(), i);
    }
  }
}

TEST(BasisLabel, RejectsBadStrings) {
  EXPECT_THROW(BasisLabel("10a"), InputError);
  EXPECT_THROW(BasisLabel(""), InputError);
  EXPECT_THROW(BasisLabel(std::string(21, '0')), InputError);
}

TEST(StateVector, BasisStateMatchesKet) {
  const StateVector s = make_basis_state(3, BasisLabel("011"));
  EXPECT_NEAR((s.amplitudes() - oracle::ket("011")).norm(), 0.0, 0.0);
  EXPECT_DOUBLE_EQ(s.norm(), 1.0);
}

TEST(StateVector, RejectsWrongDimension) {
  EXPECT_THROW(StateVector(3, CVector::Zero(4)), InputError);
}

TEST(Pulse, FlipIsExactAndPhaseFree) {
  const StateVector s = apply_pulse(make_basis_state(2, BasisLabel("00")), PulseEvent::flip(0, 2));
  EXPECT_EQ(s[BasisLabel("01").index()], Complex(1.0, 0.0));
  const StateVector back = apply_pulse(s, PulseEvent::flip(0, 2));
  EXPECT_EQ(back[0], Complex(1.0, 0.0));
}

TEST(Pulse, RotationsMatchMatrixExponential) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3;
    const int q = 1 + trial % n;
    const double angle = u(rng);
    const double phase = u(rng);
    CVector psi(8);
    for (auto& a : psi) a = Complex(u(rng), u(rng));
    psi.normalize();
    const StateVector out = apply_pulse(StateVector(n, psi), PulseEvent::rotation(0, q, angle, phase));
    const CVector expect = oracle::embed(oracle::rotation(angle, phase), q, n) * psi;
    EXPECT_LT((out.amplitudes() - expect).norm(), 1e-12) << "trial " << trial;
  }
}

TEST(Pulse, HalfPiAboutYMakesEqualSuperposition) {
  const StateVector s = apply_pulse(make_basis_state(1, BasisLabel("0")),
                                    PulseEvent::rotation_y(0, 1, oracle::kPi / 2));
  EXPECT_NEAR(s[0].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(s[1].real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(std::abs(s[0].imag()) + std::abs(s[1].imag()), 0.0, 1e-15);
}

TEST(Pulse, CnotTruthTable) {
  for (const auto& [in, out] : std::vector<std::pair<std::string, std::string>>{
           {"00", "00"}, {"01", "01"}, {"10", "11"}, {"11", "10"}}) {
    const StateVector s = apply_cnot(make_basis_state(2, BasisLabel(in)), 1, 2);
    EXPECT_EQ(s[BasisLabel(out).index()], Complex(1.0, 0.0)) << in;
  }
  const StateVector rev = apply_pulse(make_basis_state(3, BasisLabel("001")), PulseEvent::cnot_gate(0, 3, 1));
  EXPECT_EQ(rev[BasisLabel("101").index()], Complex(1.0, 0.0));
}

TEST(Pulse, DensityMatrixMatchesConjugation) {
  const StateVector psi(2, oracle::superpose({"01", "10", "11"}));
  const DensityMatrix rho = DensityMatrix::from_pure(psi);
  for (const PulseEvent& p : {PulseEvent::rotation(0, 1, 0.7, 0.3), PulseEvent::flip(0, 2),
                              PulseEvent::cnot_gate(0, 2, 1)}) {
    const DensityMatrix a = apply_pulse(rho, p);
    const DensityMatrix b = DensityMatrix::from_pure(apply_pulse(psi, p));
    EXPECT_LT((a.elements() - b.elements()).norm(), 1e-14);
  }
}

TEST(Pulse, ClassifiesPiAndHalfPi) {
  EXPECT_TRUE(PulseEvent::flip(0, 1).is_pi_pulse());
  EXPECT_TRUE(PulseEvent::rotation(0, 1, oracle::kPi, 0).is_pi_pulse());
  EXPECT_TRUE(PulseEvent::rotation_y(0, 1, oracle::kPi / 2).is_half_pi_pulse());
  EXPECT_FALSE(PulseEvent::cnot_gate(0, 1, 2).is_pi_pulse());
  EXPECT_FALSE(PulseEvent::rotation(0, 1, 1.0, 0).is_half_pi_pulse());
}

TEST(Pulse, ValidationRejectsBadTargets) {
  EXPECT_THROW(PulseEvent::flip(0, 4).validate(3), InputError);
  EXPECT_THROW(PulseEvent::flip(0, 0).validate(3), InputError);
  EXPECT_THROW(PulseEvent::cnot_gate(0, 2, 2).validate(3), InputError);
  EXPECT_NO_THROW(PulseEvent::cnot_gate(0, 1, 3).validate(3));
}

TEST(Ghz, TargetAndFidelity) {
  const StateVector ghz = ghz_target(4);
  EXPECT_LT((ghz.amplitudes() - oracle::superpose({"0000", "1111"})).norm(), 1e-15);
  EXPECT_NEAR(fidelity(ghz, ghz), 1.0, 1e-15);
  EXPECT_NEAR(fidelity(make_basis_state(4, BasisLabel("0000")), ghz), 0.5, 1e-15);
  EXPECT_NEAR(fidelity(make_basis_state(4, BasisLabel("0101")), ghz), 0.0, 1e-15);
  EXPECT_THROW(ghz_target(1), InputError);
}

TEST(Ghz, MixedFidelityAgreesWithPure) {
  const StateVector psi(3, oracle::superpose({"000", "011", "111"}));
  EXPECT_NEAR(fidelity(DensityMatrix::from_pure(psi), ghz_target(3)), fidelity(psi, ghz_target(3)), 1e-15);
  CMatrix mixed = CMatrix::Zero(8, 8);
  mixed(0, 0) = 0.5;
  mixed(7, 7) = 0.5;
  EXPECT_NEAR(fidelity(DensityMatrix(3, mixed), ghz_target(3)), 0.5, 1e-15);
}

TEST(Populations, SumToOneOverFullBasis) {
  const StateVector psi(3, oracle::superpose({"001", "010", "110"}));
  const auto labels = all_basis_labels(3);
  ASSERT_EQ(labels.size(), 8u);
  const auto p = populations(psi, labels);
  double sum = 0.0;
  for (const auto& [k, v] : p) sum += v;
  EXPECT_NEAR(sum, 1.0, 1e-15);
  EXPECT_NEAR(p.at("010"), 1.0 / 3, 1e-15);
  const auto pr = populations(DensityMatrix::from_pure(psi), labels);
  EXPECT_NEAR(pr.at("110"), 1.0 / 3, 1e-15);
}

TEST(DensityMatrix, Diagnostics) {
  const DensityMatrix rho = DensityMatrix::from_pure(ghz_target(2));
  EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
  EXPECT_NEAR(rho.hermiticity_error(), 0.0, 1e-15);
  EXPECT_NEAR(rho.min_eigenvalue(), 0.0, 1e-12);
}
