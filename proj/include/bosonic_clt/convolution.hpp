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

#pragma once

// Symmetric convolution of states and channels through the 50:50
// beamsplitter, iterated 2^k-fold, plus the two-mode extension channel and
// its diagnostics (no-signalling, marginal symmetry, product preservation).

#include <Eigen/Dense>

#include <chrono>
#include <cstddef>
#include <sstream>
#include <string>
#include <vector>

#include "bosonic_clt/channels.hpp"
#include "bosonic_clt/errors.hpp"
#include "bosonic_clt/fock.hpp"
#include "bosonic_clt/linalg.hpp"

namespace bclt {

struct ConvolutionPlan {
  int iterations = 0;
  /// Choi eigenvalues below prune_tolerance * Tr[J] are dropped.
  double prune_tolerance = 1e-12;
  std::size_t max_kraus = 4096;
  /// Largest completeness defect accepted on the interior block after pruning.
  double completeness_tolerance = 1e-6;
  /// Interior-block headroom; negative keeps the base channel's choice.
  int headroom = -1;

  ConvolutionPlan validated() const {
    if (iterations < 0 || iterations > 10) throw InvalidArgument("convolution iterations must lie in [0, 10]");
    if (!(prune_tolerance >= 0.0 && prune_tolerance < 1.0)) throw InvalidArgument("prune tolerance must lie in [0, 1)");
    if (max_kraus == 0) throw InvalidArgument("max_kraus must be positive");
    return *this;
  }
};

/// Tr_2[U (rho (x) sigma) U^dag].
inline FockOperator state_convolve2(const FockOperator& rho, const FockOperator& sigma) {
  require_single_mode(rho, "state_convolve2");
  rho.require_same(sigma, "state_convolve2");
  const CMatrix& r = rho.matrix();
  const CMatrix& s = sigma.matrix();
  return {rho.config(), cached_beamsplitter(rho.cutoff()).conjugate_trace_second(
                            [&](int i1, int i2, int j1, int j2) { return r(i1, j1) * s(i2, j2); })};
}

/// rho^{conv 2^k} by k rounds of self-convolution.
inline FockOperator state_convolve_pow2(FockOperator rho, int k) {
  for (int i = 0; i < k; ++i) rho = state_convolve2(rho, rho);
  return rho;
}

namespace detail {

/// N2(|a><b|) for the symmetric convolution N2 of the channel with transfer
/// matrix t. U|a,0> = sum_k c_k |k, a-k>, so (N (x) N) of the spread input is
/// a sum of products N(|k><m|) (x) N(|a-k><b-m|), formed here as one
/// realigned matrix product.
inline CMatrix convolved_matrix_unit(const CMatrix& t, const BeamSplitter& bs, int a, int b) {
  const int d = bs.cutoff();
  const int terms = (a + 1) * (b + 1);
  CMatrix left(d * d, terms), right(terms, d * d);
  int col = 0;
  for (int k = 0; k <= a; ++k) {
    const Complex ck = bs.matrix().coeff(bs.index(k, a - k), bs.index(a, 0));
    for (int m = 0; m <= b; ++m, ++col) {
      const Complex cm = bs.matrix().coeff(bs.index(m, b - m), bs.index(b, 0));
      left.col(col) = (ck * std::conj(cm)) * t.col(k + d * m);
      right.row(col) = t.col((a - k) + d * (b - m)).transpose();
    }
  }
  const CMatrix realigned = left * right;
  return bs.conjugate_trace_second(
      [&](int i1, int i2, int j1, int j2) { return realigned(i1 + d * j1, i2 + d * j2); });
}

}  // namespace detail

/// Choi matrix of N^{conv 2}, with the vacuum ancilla of the definition.
inline FockOperator convolved_choi(const KrausChannel& channel) {
  const int d = channel.cutoff();
  const CMatrix& t = channel.transfer_matrix();
  const auto& bs = cached_beamsplitter(d);
  std::vector<std::pair<int, int>> pairs;
  for (int b = 0; b < d; ++b)
    for (int a = 0; a <= b; ++a) pairs.emplace_back(a, b);
  std::vector<CMatrix> blocks(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    blocks[i] = detail::convolved_matrix_unit(t, bs, pairs[i].first, pairs[i].second);
  });
  CMatrix j(d * d, d * d);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [a, b] = pairs[i];
    j.block(a * d, b * d, d, d) = blocks[i];
    if (a != b) j.block(b * d, a * d, d, d) = blocks[i].adjoint();
  }
  return {channel.config().as_two_mode(), j};
}

/// N^{conv 2}: Kraus operators of the convolved channel from the
/// eigendecomposition of its Choi matrix. The minimal Kraus count is at most
/// d^2, independent of the base channel's Kraus count.
inline KrausChannel channel_convolve2(const KrausChannel& channel, const ConvolutionPlan& plan = {}) {
  plan.validated();
  const int d = channel.cutoff();
  const FockOperator choi = convolved_choi(channel);
  std::vector<CMatrix> kraus = kraus_from_choi(choi.matrix(), d, plan.prune_tolerance, 1e-8);
  if (kraus.size() > plan.max_kraus) {
    std::ostringstream msg;
    msg << "convolution produced " << kraus.size() << " Kraus operators (limit " << plan.max_kraus
        << "); raise the prune tolerance";
    throw KrausExplosion(msg.str());
  }
  const int headroom = plan.headroom < 0 ? channel.headroom() : plan.headroom;
  std::vector<FockOperator> ops;
  for (const auto& k : kraus) ops.emplace_back(channel.config(), k);
  const double defect = completeness_defect(ops, d - headroom);
  if (defect > plan.completeness_tolerance) {
    std::ostringstream msg;
    msg << "convolved channel lost trace: completeness defect " << defect << " exceeds "
        << plan.completeness_tolerance;
    throw NumericalError(msg.str());
  }
  return {channel.config(), std::move(kraus), channel.label() + "^conv2", headroom,
          std::max(plan.completeness_tolerance, channel.tolerance())};
}

struct ConvolutionStep {
  int iteration = 0;
  std::size_t kraus_count = 0;
  double completeness_defect = 0.0;
  double seconds = 0.0;
};

struct ConvolutionHistory {
  KrausChannel channel;
  std::vector<ConvolutionStep> steps;  // steps[k] describes N^{conv 2^k}
};

/// N^{conv 2^k} via N^{conv 2^{k+1}} = (N^{conv 2^k})^{conv 2}.
inline ConvolutionHistory channel_convolve_pow2(const KrausChannel& channel, int k, ConvolutionPlan plan = {}) {
  plan.iterations = k;
  plan.validated();
  ConvolutionHistory history{channel, {{0, channel.size(), channel.completeness_defect(), 0.0}}};
  for (int i = 1; i <= k; ++i) {
    const auto start = std::chrono::steady_clock::now();
    history.channel = channel_convolve2(history.channel, plan);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    history.steps.push_back({i, history.channel.size(), history.channel.completeness_defect(), secs});
  }
  return history;
}

/// rho12 -> U (N (x) N)(U^dag rho12 U) U^dag.
class ExtendedConvolution {
 public:
  explicit ExtendedConvolution(KrausChannel channel)
      : channel_(std::move(channel)), bs_(&cached_beamsplitter(channel_.cutoff())) {}

  const KrausChannel& channel() const { return channel_; }

  FockOperator apply(const FockOperator& rho12) const {
    require_two_mode(rho12, "extended convolution");
    if (rho12.cutoff() != channel_.cutoff()) throw DimensionMismatch("extended convolution: cutoff mismatch");
    // U is an involution, so U^dag X U = U X U^dag.
    FockOperator mixed(rho12.config(), bs_->conjugate(rho12.matrix()));
    FockOperator noisy = apply_pairwise(channel_, mixed);
    return {rho12.config(), bs_->conjugate(noisy.matrix())};
  }

  FockOperator operator()(const FockOperator& rho12) const { return apply(rho12); }

  /// Output marginal on mode `keep` for the product input rho (x) sigma.
  FockOperator marginal(const FockOperator& rho, const FockOperator& sigma, int keep) const {
    return partial_trace(apply(tensor(rho, sigma)), keep);
  }

 private:
  KrausChannel channel_;
  const BeamSplitter* bs_;
};

inline ExtendedConvolution extended_convolution2(const KrausChannel& channel) { return ExtendedConvolution(channel); }

/// Largest change of the mode-1 output marginal when the second input is
/// swapped between probes, over every probe used as first input.
inline double no_signalling_defect(const KrausChannel& channel, const std::vector<FockOperator>& probes) {
  if (probes.size() < 2) throw InvalidArgument("no_signalling_defect needs at least two probe states");
  ExtendedConvolution ext(channel);
  double worst = 0.0;
  for (const auto& first : probes) {
    std::vector<FockOperator> outs;
    for (const auto& second : probes) outs.push_back(ext.marginal(first, second, 0));
    for (std::size_t i = 0; i < outs.size(); ++i)
      for (std::size_t j = i + 1; j < outs.size(); ++j) worst = std::max(worst, trace_distance(outs[i], outs[j]));
  }
  return worst;
}

/// Largest distance between the mode-2 channel (vacuum on mode 1) and the
/// mode-1 channel (vacuum on mode 2) of the extension, over the probes.
inline double marginal_symmetry_defect(const KrausChannel& channel, const std::vector<FockOperator>& probes) {
  ExtendedConvolution ext(channel);
  const FockOperator vac = vacuum(channel.config());
  double worst = 0.0;
  for (const auto& rho : probes)
    worst = std::max(worst, trace_distance(ext.marginal(vac, rho, 1), ext.marginal(rho, vac, 0)));
  return worst;
}

/// Quantum mutual information I(B1:B2), in bits, of the extension's output
/// on rho (x) sigma.
inline double product_preservation_defect(const KrausChannel& channel, const FockOperator& rho,
                                          const FockOperator& sigma) {
  const FockOperator out = ExtendedConvolution(channel).apply(tensor(rho, sigma));
  const double mi = von_neumann_entropy(partial_trace(out, 0)) + von_neumann_entropy(partial_trace(out, 1)) -
                    von_neumann_entropy(out);
  return std::max(0.0, mi);
}

/// Trace distance between N^{conv 2}(|alpha><alpha|), from the convolved
/// channel's Kraus set, and tau conv tau with tau = N(|alpha/sqrt2><.|).
inline double coherent_identity_check(const KrausChannel& convolved, const KrausChannel& channel, Complex alpha) {
  const auto coh = coherent_state(alpha, channel.config()).rho;
  const auto tau = channel.apply(coherent_state(alpha / std::sqrt(2.0), channel.config()).rho);
  return trace_distance(convolved.apply(coh), state_convolve2(tau, tau));
}

inline double coherent_identity_check(const KrausChannel& channel, Complex alpha) {
  return coherent_identity_check(channel_convolve2(channel), channel, alpha);
}

}  // namespace bclt
