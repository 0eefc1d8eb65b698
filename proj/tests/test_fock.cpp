// Copyright 2026 The bosonic-clt Authors
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

#include <cmath>

#include "test_support.hpp"

namespace bclt {
namespace {

using testing::max_abs;

const auto kMode20 = FockSpaceConfig::single_mode(20);

TEST(FockSpaceConfig, RejectsTinyCutoffAndBadModeCount) {
  EXPECT_THROW(FockSpaceConfig::single_mode(1), InvalidArgument);
  EXPECT_THROW(FockSpaceConfig::validated({10, 3}), InvalidArgument);
  EXPECT_EQ(FockSpaceConfig::two_mode(7).dim(), 49);
}

TEST(FockOperator, RejectsMismatchedDimensionsAndConfigs) {
  EXPECT_THROW(FockOperator(kMode20, CMatrix::Zero(3, 3)), DimensionMismatch);
  auto a = FockOperator::identity(kMode20);
  auto b = FockOperator::identity(FockSpaceConfig::single_mode(10));
  EXPECT_THROW(a + b, DimensionMismatch);
  EXPECT_THROW(trace_distance(a, b), DimensionMismatch);
}

TEST(Ladder, AnnihilationActsOnFockStates) {
  auto q = ladder_operators(kMode20);
  CVector one = CVector::Zero(20);
  one(1) = 1.0;
  CVector out = q.a.matrix() * one;
  EXPECT_NEAR(std::abs(out(0) - 1.0), 0.0, 1e-15);
  EXPECT_NEAR(out.tail(19).norm(), 0.0, 1e-15);
  CVector vac = CVector::Zero(20);
  vac(0) = 1.0;
  EXPECT_EQ((q.a.matrix() * vac).norm(), 0.0);
  for (int l = 1; l < 20; ++l) EXPECT_DOUBLE_EQ(q.a(l - 1, l).real(), std::sqrt(double(l)));
}

TEST(Ladder, QuadraturesAndCommutator) {
  auto q = ladder_operators(kMode20);
  const double s2 = std::sqrt(2.0);
  EXPECT_EQ(max_abs(q.x.matrix() - (q.a.matrix() + q.a_dagger.matrix()) / s2), 0.0);
  EXPECT_LT(max_abs(q.p.matrix() - (q.a.matrix() - q.a_dagger.matrix()) / (kI * s2)), 1e-16);
  CMatrix comm = q.x.matrix() * q.p.matrix() - q.p.matrix() * q.x.matrix();
  EXPECT_LT(max_abs(comm.topLeftCorner(19, 19) - kI * CMatrix::Identity(19, 19)), 1e-12);
  EXPECT_LT(max_abs(q.a_dagger.matrix() * q.a.matrix() - q.n_op.matrix()), 1e-12);
  EXPECT_NEAR((q.x * q.x * vacuum(kMode20)).trace().real(), 0.5, 1e-15);
}

TEST(CoherentState, VacuumTailAndPhotonNumber) {
  auto vac = coherent_state(0.0, kMode20);
  EXPECT_EQ(max_abs(vac.rho.matrix() - vacuum(kMode20).matrix()), 0.0);
  auto one = coherent_state(1.0, kMode20);
  double tail = 0.0, term = std::exp(-1.0);
  for (int n = 1; n < 20; ++n) term /= n;
  for (int n = 20; n < 60; ++n) tail += term, term /= (n + 1);
  EXPECT_LT(one.tail_mass, 1e-12);
  EXPECT_NEAR(one.tail_mass, tail, 1e-15);
  auto q = ladder_operators(kMode20);
  for (double re : {-1.0, -0.3, 0.4, 0.7})
    for (double im : {-0.5, 0.0, 0.6}) {
      const Complex alpha(re, im);
      if (std::abs(alpha) > 1.0) continue;
      auto s = coherent_state(alpha, kMode20);
      EXPECT_NEAR((q.n_op * s.rho).trace().real(), std::norm(alpha), 1e-10);
    }
}

TEST(Displacement, ZeroIsIdentityAndDisplacesVacuum) {
  EXPECT_LT(max_abs(displacement(0.0, kMode20).matrix() - CMatrix::Identity(20, 20)), 1e-15);
  for (Complex alpha : {Complex(1.0, 0.0), Complex(0.3, -0.8), Complex(-0.6, 0.2)}) {
    CVector state = displacement(alpha, kMode20).matrix().col(0);
    auto [amps, tail] = coherent_amplitudes(alpha, 20);
    EXPECT_LT((state - amps).norm(), 1e-10);
  }
}

TEST(Displacement, MatchesMatrixExponentialOnSafeBlock) {
  for (Complex z : {Complex(2.0, 0.0), Complex(0.5, 0.5), Complex(-1.2, 1.5), Complex(0.0, -2.0)}) {
    CMatrix ours = displacement(z, kMode20).matrix();
    CMatrix oracle = testing::displacement_by_expm(z, 20, 60);
    EXPECT_LT(max_abs(ours.topLeftCorner(11, 11) - oracle.topLeftCorner(11, 11)), 1e-9) << z;
    // every entry inside the cutoff is exact, not just the safe block
    EXPECT_LT(max_abs(ours - oracle), 1e-9) << z;
  }
}

TEST(Displacement, CompositionOnHalfBlockNeedsAmpleCutoff) {
  // |n> with n <= d/2 displaced by |z| = 2 must stay well inside the cutoff,
  // which first happens for d of order 200.
  for (int d : {200, 400}) {
    const auto config = FockSpaceConfig::single_mode(d);
    const int half = d / 2 + 1;
    for (Complex z : {Complex(2.0, 0.0), Complex(1.4, -1.4), Complex(-0.4, 1.9)}) {
      CMatrix prod = displacement(z, config).matrix().topRows(half) * displacement(-z, config).matrix().leftCols(half);
      EXPECT_LT(max_abs(prod - CMatrix::Identity(half, half)), 1e-8) << d << " " << z;
    }
  }
  CMatrix prod = displacement(0.5, kMode20).matrix() * displacement(-0.5, kMode20).matrix();
  EXPECT_LT(max_abs(prod.topLeftCorner(6, 6) - CMatrix::Identity(6, 6)), 1e-8);
}

TEST(BeamSplitter, UnitaryAndNumberConserving) {
  auto two = FockSpaceConfig::two_mode(20);
  CMatrix u = beamsplitter_50_50(two).matrix();
  EXPECT_LT(max_abs(u.adjoint() * u - CMatrix::Identity(400, 400)), 1e-12);
  CMatrix n = CMatrix::Zero(400, 400);
  for (int n1 = 0; n1 < 20; ++n1)
    for (int n2 = 0; n2 < 20; ++n2) n(n1 * 20 + n2, n1 * 20 + n2) = n1 + n2;
  EXPECT_LT((u * n - n * u).norm(), 1e-12);
}

TEST(BeamSplitter, VacuumHongOuMandelAndGeneratorOracle) {
  const int d = 12;
  const auto& bs = cached_beamsplitter(d);
  CVector v = CVector::Zero(d * d);
  v(0) = 1.0;
  EXPECT_LT((bs.apply(v) - v).norm(), 1e-15);
  CVector in = CVector::Zero(d * d);
  in(bs.index(1, 1)) = 1.0;
  CVector expect = CVector::Zero(d * d);
  expect(bs.index(2, 0)) = 1.0 / std::sqrt(2.0);
  expect(bs.index(0, 2)) = -1.0 / std::sqrt(2.0);
  EXPECT_LT((bs.apply(in) - expect).norm(), 1e-14);
  CMatrix oracle = testing::beamsplitter_by_expm(d);
  CMatrix ours = bs.dense();
  for (int n1 = 0; n1 < d; ++n1)
    for (int n2 = 0; n1 + n2 < d; ++n2)
      for (int m1 = 0; m1 < d; ++m1)
        for (int m2 = 0; m1 + m2 < d; ++m2)
          EXPECT_NEAR(std::abs(ours(n1 * d + n2, m1 * d + m2) - oracle(n1 * d + n2, m1 * d + m2)), 0.0, 1e-12);
}

TEST(BeamSplitter, CoherentInputsSplitEvenly) {
  const int d = 20;
  const auto& bs = cached_beamsplitter(d);
  for (Complex alpha : {Complex(1.0, 0.0), Complex(0.5, -0.5), Complex(0.0, 0.8)}) {
    for (Complex beta : {Complex(0.0, 0.0), Complex(-0.3, 0.4)}) {
      auto [ca, ta] = coherent_amplitudes(alpha, 60);
      auto [cb, tb] = coherent_amplitudes(beta, 60);
      CVector in(d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) in(i * d + j) = ca(i) * cb(j);
      auto [co, to] = coherent_amplitudes((alpha + beta) / std::sqrt(2.0), 60);
      auto [cp, tp] = coherent_amplitudes((alpha - beta) / std::sqrt(2.0), 60);
      CVector expect(d * d);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) expect(i * d + j) = co(i) * cp(j);
      EXPECT_LT((bs.apply(in) - expect).norm(), 1e-9) << alpha << beta;
    }
  }
}

TEST(PartialTrace, ProductsAndHongOuMandelMarginal) {
  auto& gen = testing::rng();
  auto rho = testing::random_state(kMode20, 3, 8, gen);
  auto sigma = testing::random_state(kMode20, 2, 8, gen);
  auto joint = tensor(rho, sigma);
  EXPECT_LT(max_abs(partial_trace(joint, 0).matrix() - rho.matrix()), 1e-14);
  EXPECT_LT(max_abs(partial_trace(joint, 1).matrix() - sigma.matrix()), 1e-14);
  auto one = fock_state(1, kMode20);
  auto out = beamsplitter_50_50(FockSpaceConfig::two_mode(20));
  auto joint11 = tensor(one, one);
  FockOperator mixed = partial_trace(out * joint11 * out.adjoint(), 0);
  CMatrix expect = CMatrix::Zero(20, 20);
  expect(0, 0) = expect(2, 2) = 0.5;
  EXPECT_LT(max_abs(mixed.matrix() - expect), 1e-13);
  EXPECT_NEAR(std::abs(mixed.trace() - joint11.trace()), 0.0, 1e-14);
}

TEST(TraceDistance, ClosedFormsAndTriangleInequality) {
  auto vac = vacuum(kMode20);
  EXPECT_EQ(trace_distance(vac, vac), 0.0);
  EXPECT_NEAR(trace_distance(vac, fock_state(1, kMode20)), 1.0, 1e-14);
  for (double a : {0.2, 0.6, 1.0}) {
    auto [amps, tail] = coherent_amplitudes(a, 20);
    FockOperator coh(kMode20, amps * amps.adjoint());
    EXPECT_NEAR(trace_distance(vac, coh), std::sqrt(1.0 - std::norm(amps(0))), 1e-12);
    EXPECT_NEAR(trace_distance(vac, coherent_state(a, kMode20).rho), std::sqrt(1.0 - std::exp(-a * a)), 1e-9);
  }
  auto& gen = testing::rng();
  for (int trial = 0; trial < 100; ++trial) {
    auto r1 = testing::random_state(kMode20, 2, 6, gen);
    auto r2 = testing::random_state(kMode20, 1, 6, gen);
    auto r3 = testing::random_state(kMode20, 3, 6, gen);
    EXPECT_NEAR(trace_distance(r1, r2), trace_distance(r2, r1), 1e-12);
    EXPECT_LE(trace_distance(r1, r3), trace_distance(r1, r2) + trace_distance(r2, r3) + 1e-9);
  }
}

TEST(Entropy, PureMixedAndThermal) {
  EXPECT_NEAR(von_neumann_entropy(coherent_state(0.7, kMode20).rho), 0.0, 1e-10);
  CMatrix mixed = CMatrix::Zero(20, 20);
  mixed(0, 0) = mixed(1, 1) = 0.5;
  EXPECT_NEAR(von_neumann_entropy({kMode20, mixed}), 1.0, 1e-14);
  EXPECT_NEAR(von_neumann_entropy({kMode20, mixed}, LogBase::kNats), std::log(2.0), 1e-14);
  EXPECT_DOUBLE_EQ(g_entropy(1.0), 2.0);
  auto big = FockSpaceConfig::single_mode(80);
  EXPECT_NEAR(von_neumann_entropy(thermal_state(1.0, big).rho), 2.0, 1e-12);
  CMatrix bad = CMatrix::Zero(20, 20);
  bad(0, 0) = 1.1;
  bad(1, 1) = -0.1;
  EXPECT_THROW(von_neumann_entropy({kMode20, bad}), NotAState);
}

TEST(CharFunction, OriginVacuumAndBoundedness) {
  auto& gen = testing::rng();
  auto rho = testing::random_state(kMode20, 3, 10, gen);
  EXPECT_NEAR(std::abs(char_function(rho, 0.0) - rho.trace()), 0.0, 1e-14);
  auto vac = vacuum(kMode20);
  for (Complex z : testing::standard_z_grid()) {
    if (std::abs(z) > 2.0) continue;
    EXPECT_NEAR(std::abs(char_function(vac, z) - std::exp(-0.5 * std::norm(z))), 0.0, 1e-10);
    EXPECT_LE(std::abs(char_function(rho, z)), 1.0 + 1e-9);
  }
  auto grid = char_function_grid(rho, testing::standard_z_grid());
  for (std::size_t i = 0; i < grid.size(); ++i)
    EXPECT_EQ(grid[i], char_function(rho, testing::standard_z_grid()[i]));
}

TEST(StateMoments, ClosedForms) {
  auto vac = state_moments(vacuum(kMode20));
  EXPECT_LT(vac.mean.norm(), 1e-15);
  EXPECT_LT((vac.cov - Mat2::Identity()).norm(), 1e-15);
  auto one = state_moments(fock_state(1, kMode20));
  EXPECT_LT((one.cov - 3.0 * Mat2::Identity()).norm(), 1e-14);
  EXPECT_DOUBLE_EQ(one.photon_mean, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Complex alpha = std::polar(0.05 * (i + 1), 0.9 * i);
    auto m = state_moments(coherent_state(alpha, kMode20).rho);
    EXPECT_LT((m.mean - std::sqrt(2.0) * Vec2(alpha.real(), alpha.imag())).norm(), 1e-10);
    EXPECT_LT((m.cov - Mat2::Identity()).norm(), 1e-10);
    EXPECT_NEAR(m.photon_mean, std::norm(alpha), 1e-10);
  }
}

TEST(StateMoments, RobertsonSchrodingerOnRandomStates) {
  auto& gen = testing::rng();
  for (int trial = 0; trial < 20; ++trial) {
    auto m = state_moments(testing::random_state(kMode20, 2, 15, gen));
    EXPECT_NEAR(m.cov(0, 1), m.cov(1, 0), 1e-10);
    Eigen::Matrix2cd h = m.cov.cast<Complex>() + kI * symplectic_form().cast<Complex>();
    EXPECT_GE(hermitian_eigenvalues(h).minCoeff(), -1e-9);
  }
}

}  // namespace
}  // namespace bclt
