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

// Experiment drivers: convergence of N^{conv 2^k} toward the
// Gaussification, the classical and Cushen-Hudson special cases, coherent
// information, capacity formulas and the finite-k capacity bound data.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bosonic_clt/channels.hpp"
#include "bosonic_clt/convolution.hpp"
#include "bosonic_clt/errors.hpp"
#include "bosonic_clt/fock.hpp"
#include "bosonic_clt/gaussification.hpp"

namespace bclt {

/// 5 x 5 grid with Re z, Im z in {-1.5, -0.75, 0, 0.75, 1.5}.
inline std::vector<Complex> default_z_grid() {
  std::vector<Complex> zs;
  const double v[] = {-1.5, -0.75, 0.0, 0.75, 1.5};
  for (double re : v)
    for (double im : v) zs.emplace_back(re, im);
  return zs;
}

struct ConvergenceRow {
  int k = 0;
  double trace_distance = 0.0;  // to the Gaussification output
  double char_sup_dev = 0.0;    // sup over the grid of |chi_out - chi_gauss|
  double mean_dev = 0.0;
  double cov_dev = 0.0;
  std::optional<std::size_t> kraus_count;         // channel side only
  std::optional<double> completeness_defect;      // channel side only
  std::optional<double> channel_state_gap;        // channel side vs state side
  double trace = 1.0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string label;
  Complex alpha;
  int cutoff = 0;
  std::vector<Complex> z_grid;
  GaussianChannelParams params;
  GaussianState target;
  double target_tail = 0.0;
  std::vector<ConvergenceRow> rows;
  /// Scalar check of the classical CLT, filled by classical_clt_demo.
  std::vector<double> scalar_sup_dev;
  std::vector<double> factorization_dev;
};

struct ConvergenceOptions {
  int k_max = 8;
  int channel_side_max_k = 3;
  std::vector<Complex> z_grid = default_z_grid();
};

/// Distances between N^{conv 2^k}(|alpha><alpha|) and N_G(|alpha><alpha|)
/// for k = 0..k_max. Outputs come from the coherent-input identity
/// N^{conv n}(|alpha><alpha|) = N(|alpha/sqrt n><.|)^{conv n}; for small k
/// the convolved channel is also built and applied as a cross-check.
inline ConvergenceReport convergence_study(const KrausChannel& channel, Complex alpha,
                                           const ConvergenceOptions& options = {}) {
  if (options.k_max < 0 || options.k_max > 10) throw InvalidArgument("k_max must lie in [0, 10]");
  const auto& config = channel.config();
  ConvergenceReport report;
  report.label = channel.label();
  report.alpha = alpha;
  report.cutoff = config.cutoff;
  report.z_grid = options.z_grid;
  report.params = extract_xy(channel);
  report.target = gaussian_apply(report.params, GaussianState::coherent(alpha));
  const TruncatedState target = gaussian_state_to_fock(report.target, config);
  report.target_tail = target.tail_mass;
  std::vector<Complex> target_chi;
  for (Complex z : options.z_grid) target_chi.push_back(gaussian_char(report.target, z));

  std::optional<KrausChannel> convolved;
  const FockOperator coherent_input = coherent_state(alpha, config).rho;
  for (int k = 0; k <= options.k_max; ++k) {
    const auto start = std::chrono::steady_clock::now();
    ConvergenceRow row;
    row.k = k;
    const double scale = std::pow(2.0, -0.5 * k);
    const FockOperator tau = channel.apply(coherent_state(alpha * scale, config).rho);
    const FockOperator out = state_convolve_pow2(tau, k);
    row.trace = out.trace().real();
    row.trace_distance = trace_distance(out, target.rho);
    const auto chi = char_function_grid(out, options.z_grid);
    for (std::size_t i = 0; i < chi.size(); ++i)
      row.char_sup_dev = std::max(row.char_sup_dev, std::abs(chi[i] - target_chi[i]));
    const StateMoments m = state_moments(out);
    row.mean_dev = (m.mean - report.target.mean).norm();
    row.cov_dev = (m.cov - report.target.cov).norm();
    if (k <= options.channel_side_max_k) {
      convolved = k == 0 ? channel : channel_convolve2(*convolved);
      row.kraus_count = convolved->size();
      row.completeness_defect = convolved->completeness_defect();
      row.channel_state_gap = trace_distance(convolved->apply(coherent_input), out);
    }
    row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(row);
  }
  return report;
}

/// chi_W(z / sqrt n)^n for n = 2^k.
inline Complex convolved_noise_char(const NoiseDistribution& dist, Complex z, int k) {
  const double n = std::pow(2.0, k);
  return std::pow(dist.symplectic_char(z / std::sqrt(n)), n);
}

/// Characteristic function of the centred Gaussian with the covariance of W:
/// exp(-2 (Im z, -Re z) C (Im z, -Re z)^T).
inline Complex gaussian_noise_char(const NoiseDistribution& dist, Complex z) {
  const Vec2 w(z.imag(), -z.real());
  return std::exp(-2.0 * w.dot(dist.covariance() * w));
}

/// Classical CLT through the additive-noise channel: the convergence study
/// of N_W on the vacuum plus the scalar check chi_W(z/sqrt n)^n -> Gaussian
/// and the factorisation chi_out(z) = chi_in(z) chi_{W^{conv n}}(z).
inline ConvergenceReport classical_clt_demo(const NoiseDistribution& dist, const FockSpaceConfig& config,
                                            const ConvergenceOptions& options = {}) {
  if (std::abs(dist.mean()) > 1e-12) throw NotCentered("channel not centered: noise distribution has nonzero mean");
  const KrausChannel channel = additive_noise_channel(dist, config, "additive_noise");
  ConvergenceReport report = convergence_study(channel, 0.0, options);
  const FockOperator vac = vacuum(config);
  for (int k = 0; k <= options.k_max; ++k) {
    double scalar = 0.0, factor = 0.0;
    const FockOperator out = state_convolve_pow2(channel.apply(vac), k);
    const auto chi = char_function_grid(out, options.z_grid);
    for (std::size_t i = 0; i < options.z_grid.size(); ++i) {
      const Complex z = options.z_grid[i];
      const Complex predicted = convolved_noise_char(dist, z, k);
      scalar = std::max(scalar, std::abs(predicted - gaussian_noise_char(dist, z)));
      factor = std::max(factor, std::abs(chi[i] - std::exp(-0.5 * std::norm(z)) * predicted));
    }
    report.scalar_sup_dev.push_back(scalar);
    report.factorization_dev.push_back(factor);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Coherent information

/// I(R>B) = S(N(rho)) - S(sigma_E), sigma_E[i][j] = Tr[K_i rho K_j^dag].
inline double coherent_information(const KrausChannel& channel, const FockOperator& rho) {
  require_single_mode(rho, "coherent_information");
  if (!(rho.config() == channel.config())) throw DimensionMismatch("coherent_information: config mismatch");
  if (rho.hermiticity_defect() > 1e-8 || std::abs(rho.trace() - 1.0) > 1e-8) {
    throw NotAState("coherent_information: input is not a unit-trace Hermitian operator");
  }
  if (hermitian_eigenvalues(rho.matrix()).minCoeff() < -1e-8) throw NotAState("coherent_information: input not positive");
  const auto& ks = channel.kraus();
  const int r = static_cast<int>(ks.size());
  std::vector<CMatrix> applied(r);
  for (int i = 0; i < r; ++i) applied[i] = ks[i].matrix() * rho.matrix();
  CMatrix env(r, r);
  parallel_for(r, [&](std::size_t i) {
    for (int j = 0; j < r; ++j) env(i, j) = applied[i].cwiseProduct(ks[j].matrix().conjugate()).sum();
  });
  const FockOperator out = channel.apply(rho);
  RVector env_eigs = hermitian_eigenvalues(env);
  for (double& l : env_eigs) {
    if (l < -1e-8) throw NotAState("coherent_information: environment state not positive");
    l = std::max(l, 0.0);
  }
  return von_neumann_entropy(out) - spectrum_entropy(env_eigs);
}

struct CoherentInfoBound {
  double value = 0.0;
  double best_mean_photon = 0.0;
};

/// Lower bound to the energy-constrained coherent information: golden-section
/// search of I(R>B) over thermal inputs with mean photon number in [0, E].
inline CoherentInfoBound coherent_information_lower_bound(const KrausChannel& channel, double energy,
                                                          int iterations = 40) {
  auto f = [&](double nbar) { return coherent_information(channel, thermal_state(nbar, channel.config()).rho); };
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = energy;
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = f(x1), f2 = f(x2);
  for (int i = 0; i < iterations && hi - lo > 1e-9; ++i) {
    if (f1 < f2) {
      lo = x1, x1 = x2, f1 = f2, x2 = lo + phi * (hi - lo), f2 = f(x2);
    } else {
      hi = x2, x2 = x1, f2 = f1, x1 = hi - phi * (hi - lo), f1 = f(x1);
    }
  }
  CoherentInfoBound best{f(energy), energy};
  for (auto [x, v] : {std::pair{x1, f1}, std::pair{x2, f2}, std::pair{0.0, f(0.0)}})
    if (v > best.value) best = {v, x};
  return best;
}

// ---------------------------------------------------------------------------
// Capacities

/// log2(2 pi) - h(p), with h the differential entropy in bits.
inline double dephasing_capacity(const AngularDistribution& dist) {
  return std::log2(2.0 * std::numbers::pi) - dist.differential_entropy_nats() / std::log(2.0);
}

/// (kappa I1/I0 - ln I0)/ln 2, the closed form for the von Mises density.
inline double von_mises_dephasing_capacity(double kappa) {
  const double i0 = std::cyl_bessel_i(0.0, kappa), i1 = std::cyl_bessel_i(1.0, kappa);
  return (kappa * i1 / i0 - std::log(i0)) / std::log(2.0);
}

inline double pure_loss_capacity(double lambda) {
  if (!(lambda >= 0.0 && lambda < 1.0)) throw InvalidArgument("pure_loss_capacity: transmissivity must lie in [0, 1)");
  if (lambda <= 0.5) return 0.0;
  return std::max(0.0, std::log2(lambda / (1.0 - lambda)));
}

struct CoherentInfoSample {
  int k = 0;
  double energy = 0.0;
  double value = 0.0;
};

struct CapacityReport {
  std::string label;
  std::optional<double> dephasing_capacity;
  double transmissivity = 0.0;
  double pure_loss_capacity = 0.0;
  std::string gap_sign;  // "gaussification_larger", "dephasing_larger" or "equal"
  std::vector<CoherentInfoSample> samples;
};

inline std::string capacity_gap_sign(double deph, double loss, double tol = 1e-12) {
  if (loss > deph + tol) return "gaussification_larger";
  if (deph > loss + tol) return "dephasing_larger";
  return "equal";
}

/// Capacity of the dephasing channel against that of its Gaussification, the
/// pure-loss channel with transmissivity |Phi(1)|^2.
inline CapacityReport capacity_comparison(const AngularDistribution& dist, std::string label = "dephasing") {
  CapacityReport report;
  report.label = std::move(label);
  report.dephasing_capacity = dephasing_capacity(dist);
  report.transmissivity = std::norm(dist.phi(1));
  if (report.transmissivity >= 1.0) throw InvalidArgument("capacity_comparison: density is a point mass");
  report.pure_loss_capacity = pure_loss_capacity(report.transmissivity);
  report.gap_sign = capacity_gap_sign(*report.dephasing_capacity, report.pure_loss_capacity);
  return report;
}

// ---------------------------------------------------------------------------
// Finite-k capacity bound data

struct LinearityScreen {
  double no_signalling = 0.0;
  double marginal_symmetry = 0.0;
};

inline constexpr double kLinearityTolerance = 1e-8;

inline std::vector<FockOperator> linearity_probes(const FockSpaceConfig& config) {
  return {vacuum(config), coherent_state(0.7, config).rho, thermal_state(0.5, config).rho};
}

/// Heuristic check that the channel is linear with an even scaling function.
inline LinearityScreen linearity_screen(const KrausChannel& channel) {
  const auto probes = linearity_probes(channel.config());
  return {no_signalling_defect(channel, probes), marginal_symmetry_defect(channel, probes)};
}

struct QBoundRow {
  int k = 0;
  double energy = 0.0;
  double convolved = 0.0;      // I(R>B) of N^{conv 2^k} on thermal(E)
  double product_rate = 0.0;   // I(R>B) of N on thermal(E), the i.i.d. rate
  double gaussification = 0.0; // I(R>B) of N_G on thermal(E)
  std::optional<double> two_copy;  // I(R>B) of N (x) N on U(thermal (x) vac)U^dag, k = 1
};

struct QBoundReport {
  std::string label;
  LinearityScreen screen;
  std::vector<QBoundRow> rows;
};

/// I(R>B) of N (x) N on U (rho (x) |0><0|) U^dag. The environment state is
/// assembled from the input's eigenvectors, (K_i (x) K_j) v = vec(K_i V K_j^T).
inline double two_copy_coherent_information(const KrausChannel& channel, const FockOperator& rho) {
  const int d = channel.cutoff();
  const auto& bs = cached_beamsplitter(d);
  const FockOperator input(channel.config().as_two_mode(),
                           bs.conjugate(kron(rho.matrix(), vacuum(channel.config()).matrix())));
  const FockOperator out = apply_pairwise(channel, input);
  const auto& ks = channel.kraus();
  const int r = static_cast<int>(ks.size());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(input.matrix()));
  CMatrix env = CMatrix::Zero(r * r, r * r);
  CMatrix w(d * d, r * r);
  for (int m = 0; m < d * d; ++m) {
    const double p = solver.eigenvalues()(m);
    if (p <= 1e-15) continue;
    const CMatrix v = solver.eigenvectors().col(m).reshaped<Eigen::RowMajor>(d, d);
    parallel_for(r, [&](std::size_t i) {
      const CMatrix left = ks[i].matrix() * v;
      for (int j = 0; j < r; ++j) {
        const CMatrix y = left * ks[j].matrix().transpose();
        w.col(i * r + j) = y.reshaped<Eigen::RowMajor>();
      }
    });
    env.noalias() += p * w.adjoint() * w;
  }
  RVector eigs = hermitian_eigenvalues(env.transpose());
  for (double& l : eigs) l = std::max(l, 0.0);
  return von_neumann_entropy(out) - spectrum_entropy(eigs);
}

/// Finite-k data for the capacity lower bound: for each k the coherent
/// information of N^{conv 2^k} at thermal(E), next to the i.i.d. rate of N and
/// the Gaussification's value. Nonlinear channels are refused.
inline QBoundReport q_lower_bound_experiment(const KrausChannel& channel, double energy, const std::vector<int>& ks,
                                             bool with_two_copy = false) {
  QBoundReport report;
  report.label = channel.label();
  report.screen = linearity_screen(channel);
  if (report.screen.no_signalling > kLinearityTolerance || report.screen.marginal_symmetry > kLinearityTolerance) {
    std::ostringstream msg;
    msg << "nonlinear channel: no-signalling defect " << report.screen.no_signalling << ", marginal-symmetry defect "
        << report.screen.marginal_symmetry << " (the capacity bound does not apply)";
    throw NonlinearChannel(msg.str());
  }
  const FockOperator thermal = thermal_state(energy, channel.config()).rho;
  const double rate = coherent_information(channel, thermal);
  const double gauss = gaussian_coherent_information(extract_xy(channel), energy);
  KrausChannel current = channel;
  int built = 0;
  std::vector<int> sorted = ks;
  std::sort(sorted.begin(), sorted.end());
  for (int k : sorted) {
    if (k < 0 || k > 10) throw InvalidArgument("k must lie in [0, 10]");
    for (; built < k; ++built) current = channel_convolve2(current);
    QBoundRow row{k, energy, coherent_information(current, thermal), rate, gauss, std::nullopt};
    if (with_two_copy && k == 1) row.two_copy = two_copy_coherent_information(channel, thermal);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace bclt
