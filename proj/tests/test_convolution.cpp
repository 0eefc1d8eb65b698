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
using testing::random_state;
using testing::rng;

const auto kMode20 = FockSpaceConfig::single_mode(20);

/// Dense Tr_2[U X U^dag] with U the library beamsplitter matrix.
CMatrix dense_trace_second_after_mixing(const CMatrix& x, int d) {
  const CMatrix u = cached_beamsplitter(d).matrix();
  const CMatrix y = u * x * u.adjoint();
  CMatrix out = CMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int l = 0; l < d; ++l) out(i, j) += y(i * d + l, j * d + l);
  return out;
}

/// N^{conv 2}(rho) from the definition, with explicit K_i (x) K_j products.
CMatrix dense_convolved_output(const KrausChannel& channel, const FockOperator& rho) {
  const int d = channel.cutoff();
  const CMatrix u = cached_beamsplitter(d).matrix();
  const CMatrix in = u * kron(rho.matrix(), vacuum(channel.config()).matrix()) * u.adjoint();
  CMatrix mid = CMatrix::Zero(d * d, d * d);
  for (const auto& ki : channel.kraus())
    for (const auto& kj : channel.kraus()) {
      const CMatrix k = kron(ki.matrix(), kj.matrix());
      mid += k * in * k.adjoint();
    }
  return dense_trace_second_after_mixing(mid, d);
}

double max_coherent_deviation(const KrausChannel& a, const KrausChannel& b) {
  double worst = 0.0;
  for (Complex alpha : {Complex(0.0), Complex(0.5), Complex(1.0), Complex(0.0, -1.0), Complex(0.6, 0.6)}) {
    const auto rho = coherent_state(alpha, a.config()).rho;
    worst = std::max(worst, trace_distance(a.apply(rho), b.apply(rho)));
  }
  return worst;
}

TEST(StateConvolve2, VacuumIsFixed) {
  const auto vac = vacuum(kMode20);
  EXPECT_LT(max_abs(state_convolve2(vac, vac).matrix() - vac.matrix()), 1e-15);
}

TEST(StateConvolve2, ThermalIsFixed) {
  const auto sigma = thermal_state(1.0, kMode20).rho;
  EXPECT_LT(trace_distance(state_convolve2(sigma, sigma), sigma), 1e-7);
}

TEST(StateConvolve2, SinglePhotonPair) {
  const auto one = fock_state(1, kMode20);
  CMatrix expected = CMatrix::Zero(20, 20);
  expected(0, 0) = expected(2, 2) = 0.5;
  EXPECT_LT(max_abs(state_convolve2(one, one).matrix() - expected), 1e-14);
}

TEST(StateConvolve2, MatchesDenseOracle) {
  const auto config = FockSpaceConfig::single_mode(10);
  const auto rho = random_state(config, 2, 10, rng());
  const auto sigma = random_state(config, 3, 10, rng());
  const CMatrix expected = dense_trace_second_after_mixing(kron(rho.matrix(), sigma.matrix()), 10);
  EXPECT_LT(max_abs(state_convolve2(rho, sigma).matrix() - expected), 1e-13);
}

TEST(StateConvolve2, RejectsMismatchedCutoffs) {
  EXPECT_THROW(state_convolve2(vacuum(kMode20), vacuum(FockSpaceConfig::single_mode(10))), DimensionMismatch);
}

TEST(ChannelConvolve2, MatchesDenseDefinitionForRandomChannel) {
  const auto config = FockSpaceConfig::single_mode(8);
  const auto channel = testing::random_centered_channel(config, 2, rng());
  const auto convolved = channel_convolve2(channel);
  for (int i = 0; i < 3; ++i) {
    const auto rho = random_state(config, 2, 8, rng());
    EXPECT_LT(max_abs(convolved.apply(rho).matrix() - dense_convolved_output(channel, rho)), 1e-10);
  }
}

TEST(ChannelConvolve2, KrausCountBoundedByChoiRank) {
  const auto config = FockSpaceConfig::single_mode(8);
  const auto channel = testing::random_centered_channel(config, 4, rng());
  EXPECT_LE(channel_convolve2(channel).size(), 64u);
}

TEST(ChannelConvolve2, IdentityIsFixed) {
  const auto convolved = channel_convolve2(identity_channel(kMode20));
  for (int i = 0; i < 3; ++i) {
    const auto rho = random_state(kMode20, 2, 20, rng());
    EXPECT_LT(max_abs(convolved.apply(rho).matrix() - rho.matrix()), 1e-10);
  }
}

TEST(ChannelConvolve2, ReplacementConvolvesItsState) {
  const auto sigma = random_state(kMode20, 2, 8, rng());
  const auto convolved = channel_convolve2(replacement_channel(sigma));
  const auto target = state_convolve2(sigma, sigma);
  for (int i = 0; i < 5; ++i) {
    const auto rho = random_state(kMode20, 1, 20, rng());
    EXPECT_LT(trace_distance(convolved.apply(rho), target), 1e-8);
  }
}

TEST(ChannelConvolve2, PureLossIsFixed) {
  for (double lambda : {0.3, 0.6, 0.7}) {
    const auto loss = pure_loss(lambda, kMode20);
    EXPECT_LT(max_coherent_deviation(channel_convolve2(loss), loss), 1e-7) << lambda;
  }
}

TEST(ChannelConvolve2, KrausExplosionIsReported) {
  ConvolutionPlan plan;
  plan.max_kraus = 3;
  const auto channel = dephasing_channel(AngularDistribution::von_mises(2.0), FockSpaceConfig::single_mode(8));
  EXPECT_THROW(channel_convolve2(channel, plan), KrausExplosion);
}

TEST(ConvolutionPlan, RejectsTooManyIterations) {
  EXPECT_THROW(channel_convolve_pow2(identity_channel(FockSpaceConfig::single_mode(4)), 11), InvalidArgument);
  EXPECT_THROW(channel_convolve_pow2(identity_channel(FockSpaceConfig::single_mode(4)), -1), InvalidArgument);
}

TEST(ChannelConvolvePow2, ZeroIterationsReturnsChannel) {
  const auto channel = pure_loss(0.4, kMode20);
  const auto history = channel_convolve_pow2(channel, 0);
  ASSERT_EQ(history.steps.size(), 1u);
  ASSERT_EQ(history.channel.size(), channel.size());
  for (std::size_t i = 0; i < channel.size(); ++i)
    EXPECT_EQ(max_abs(history.channel.kraus()[i].matrix() - channel.kraus()[i].matrix()), 0.0);
}

TEST(ChannelConvolvePow2, TwoIterationsEqualsRepeatedConvolution) {
  const auto config = FockSpaceConfig::single_mode(12);
  const auto channel = dephasing_channel(AngularDistribution::von_mises(2.0), config);
  const auto history = channel_convolve_pow2(channel, 2);
  const auto twice = channel_convolve2(channel_convolve2(channel));
  ASSERT_EQ(history.channel.size(), twice.size());
  for (std::size_t i = 0; i < twice.size(); ++i)
    EXPECT_EQ(max_abs(history.channel.kraus()[i].matrix() - twice.kraus()[i].matrix()), 0.0);
  ASSERT_EQ(history.steps.size(), 3u);
  EXPECT_EQ(history.steps[2].kraus_count, twice.size());
  for (const auto& step : history.steps) EXPECT_LT(step.completeness_defect, 1e-8);
  const Complex alpha(0.8, 0.3);
  const auto tau = channel.apply(coherent_state(alpha / 2.0, config).rho);
  const auto via_states = state_convolve_pow2(tau, 2);
  EXPECT_LT(trace_distance(twice.apply(coherent_state(alpha, config).rho), via_states), 1e-7);
}

TEST(ChannelConvolvePow2, PureLossStaysFixedForThreeIterations) {
  for (double lambda : {0.3, 0.7}) {
    const auto loss = pure_loss(lambda, kMode20);
    KrausChannel current = loss;
    for (int k = 1; k <= 3; ++k) {
      current = channel_convolve2(current);
      EXPECT_LT(max_coherent_deviation(current, loss), 1e-6) << lambda << " k=" << k;
    }
  }
}

TEST(ChannelConvolvePow2, DephasingApproachesGaussification) {
  const auto channel = dephasing_channel(AngularDistribution::von_mises(2.0), kMode20);
  const auto target = gaussification_output(channel, 1.0).rho;
  KrausChannel current = channel;
  double previous = 1.0;
  for (int k = 1; k <= 6; ++k) {
    current = channel_convolve2(current);
    const auto out = current.apply(coherent_state(1.0, kMode20).rho);
    const double distance = trace_distance(out, target);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-6);
    EXPECT_GE(hermitian_eigenvalues(out.matrix()).minCoeff(), -1e-8);
    if (k > 2) EXPECT_LT(distance, previous) << k;
    previous = distance;
    if (k == 6) EXPECT_LT(distance, 0.05);
  }
}

TEST(ExtendedConvolution, VacuumMarginalIsConvolvedChannel) {
  const auto channel = dephasing_channel(AngularDistribution::von_mises(2.0), kMode20);
  const auto convolved = channel_convolve2(channel);
  const auto ext = extended_convolution2(channel);
  for (int i = 0; i < 2; ++i) {
    const auto rho = random_state(kMode20, 2, 10, rng());
    EXPECT_LT(trace_distance(ext.marginal(rho, vacuum(kMode20), 0), convolved.apply(rho)), 1e-9);
  }
}

TEST(ExtendedConvolution, AdditiveNoiseIgnoresSecondInput) {
  const auto channel = additive_noise_channel(NoiseDistribution::symmetric_two_point(0.3), kMode20);
  const auto ext = extended_convolution2(channel);
  const auto rho = coherent_state(Complex(0.4, -0.2), kMode20).rho;
  const auto reference = ext.marginal(rho, vacuum(kMode20), 0);
  for (const auto& sigma : {coherent_state(0.7, kMode20).rho, thermal_state(0.5, kMode20).rho})
    EXPECT_LT(trace_distance(ext.marginal(rho, sigma, 0), reference), 1e-8);
}

TEST(ExtendedConvolution, SymmetricNoiseSecondMarginalIsConvolvedChannel) {
  const auto channel = additive_noise_channel(NoiseDistribution::symmetric_two_point(0.3), kMode20);
  const auto convolved = channel_convolve2(channel);
  const auto ext = extended_convolution2(channel);
  for (const auto& rho : {coherent_state(0.5, kMode20).rho, thermal_state(0.3, kMode20).rho})
    EXPECT_LT(trace_distance(ext.marginal(vacuum(kMode20), rho, 1), convolved.apply(rho)), 1e-8);
}

TEST(NoSignalling, IdentityAndAdditiveNoisePass) {
  const auto probes = linearity_probes(kMode20);
  EXPECT_LT(no_signalling_defect(identity_channel(kMode20), probes), 1e-10);
  EXPECT_LT(
      no_signalling_defect(additive_noise_channel(NoiseDistribution::symmetric_two_point(0.3), kMode20), probes),
      1e-8);
  EXPECT_THROW(no_signalling_defect(identity_channel(kMode20), {vacuum(kMode20)}), InvalidArgument);
}

TEST(NoSignalling, DephasingSignals) {
  const auto defect = no_signalling_defect(dephasing_channel(AngularDistribution::von_mises(2.0), kMode20),
                                           linearity_probes(kMode20));
  EXPECT_GT(defect, 1e-3);
  EXPECT_NEAR(defect, 0.1157, 1e-3);
}

TEST(ProductPreservation, GaussianChannelsKeepProducts) {
  const auto rho = coherent_state(Complex(0.6, 0.2), kMode20).rho;
  EXPECT_LT(product_preservation_defect(identity_channel(kMode20), rho, thermal_state(0.4, kMode20).rho), 1e-8);
  EXPECT_LT(product_preservation_defect(pure_loss(0.5, kMode20), rho, vacuum(kMode20)), 1e-7);
}

TEST(ProductPreservation, DephasingCorrelatesOutputs) {
  const auto channel = dephasing_channel(AngularDistribution::von_mises(2.0), kMode20);
  EXPECT_GT(product_preservation_defect(channel, coherent_state(1.0, kMode20).rho, vacuum(kMode20)), 1e-3);
}

TEST(CoherentIdentity, HoldsForNonGaussianChannels) {
  const auto dephasing = dephasing_channel(AngularDistribution::von_mises(2.0), kMode20);
  const auto noise = additive_noise_channel(NoiseDistribution::symmetric_two_point(0.3), kMode20);
  const auto random = testing::random_centered_channel(kMode20, 2, rng());
  const auto conv_dephasing = channel_convolve2(dephasing);
  const auto conv_noise = channel_convolve2(noise);
  EXPECT_LT(coherent_identity_check(conv_dephasing, dephasing, 1.0), 1e-7);
  EXPECT_LT(coherent_identity_check(conv_noise, noise, 0.5), 1e-7);
  EXPECT_LT(coherent_identity_check(random, 0.0), 1e-8);
  EXPECT_LT(coherent_identity_check(conv_dephasing, dephasing, Complex(0.3, -0.7)), 1e-7);
}

}  // namespace
}  // namespace bclt
