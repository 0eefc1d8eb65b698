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

// Kraus-operator channels on one truncated mode, and the builtin channel
// families: identity, replacement, bosonic dephasing, additive classical
// noise, pure loss and amplification, plus channels read from a Choi matrix.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "bosonic_clt/errors.hpp"
#include "bosonic_clt/fock.hpp"
#include "bosonic_clt/linalg.hpp"

namespace bclt {

/// Operator norm of (sum K^dag K - I) on levels 0..interior-1.
inline double completeness_defect(const std::vector<FockOperator>& kraus, int interior) {
  if (kraus.empty()) return 1.0;
  const int d = kraus.front().cutoff();
  interior = std::clamp(interior, 1, d);
  CMatrix gram = CMatrix::Zero(d, d);
  for (const auto& k : kraus) gram.noalias() += k.matrix().adjoint() * k.matrix();
  CMatrix block = gram.topLeftCorner(interior, interior) - CMatrix::Identity(interior, interior);
  return hermitian_eigenvalues(block).cwiseAbs().maxCoeff();
}

/// Single-mode channel rho -> sum_i K_i rho K_i^dag, immutable after construction.
///
/// Truncation breaks completeness near the cutoff for channels that raise
/// photon number, so completeness is audited on the interior block
/// |0..d-headroom-1> only. The measured defect is stored, never renormalised
/// away.
class KrausChannel {
 public:
  static constexpr double kDefaultTolerance = 1e-8;

  KrausChannel(FockSpaceConfig config, std::vector<CMatrix> kraus, std::string label, int headroom = -1,
               double tolerance = kDefaultTolerance)
      : config_(FockSpaceConfig::validated(config)), label_(std::move(label)), tolerance_(tolerance),
        cache_(std::make_shared<Cache>()) {
    if (config_.modes != 1) throw InvalidArgument("KrausChannel: channels act on a single mode");
    if (kraus.empty()) throw InvalidArgument("KrausChannel '" + label_ + "': empty Kraus list");
    headroom_ = headroom < 0 ? config_.cutoff / 4 : headroom;
    if (headroom_ >= config_.cutoff) throw InvalidArgument("KrausChannel: headroom leaves no interior block");
    kraus_.reserve(kraus.size());
    for (auto& k : kraus) kraus_.emplace_back(config_, std::move(k));
    defect_ = bclt::completeness_defect(kraus_, config_.cutoff - headroom_);
    if (defect_ > tolerance_) {
      std::ostringstream msg;
      msg << "KrausChannel '" << label_ << "': completeness defect " << defect_ << " on the interior block exceeds "
          << tolerance_;
      throw InvalidArgument(msg.str());
    }
  }

  const FockSpaceConfig& config() const { return config_; }
  int cutoff() const { return config_.cutoff; }
  const std::vector<FockOperator>& kraus() const { return kraus_; }
  std::size_t size() const { return kraus_.size(); }
  const std::string& label() const { return label_; }
  int headroom() const { return headroom_; }
  int interior() const { return config_.cutoff - headroom_; }
  double completeness_defect() const { return defect_; }
  double tolerance() const { return tolerance_; }

  FockOperator apply(const FockOperator& rho) const {
    if (!(rho.config() == config_)) {
      throw DimensionMismatch("apply: state " + describe(rho.config()) + " does not match channel " + describe(config_));
    }
    CMatrix out = CMatrix::Zero(config_.cutoff, config_.cutoff);
    for (const auto& k : kraus_) out.noalias() += k.matrix() * rho.matrix() * k.matrix().adjoint();
    return {config_, out};
  }

  FockOperator operator()(const FockOperator& rho) const { return apply(rho); }

  /// Superoperator T with T vec(rho) = vec(N(rho)) (column-major vec).
  const CMatrix& transfer_matrix() const {
    std::call_once(cache_->once, [this] {
      const int d2 = config_.cutoff * config_.cutoff;
      CMatrix t = CMatrix::Zero(d2, d2);
      for (const auto& k : kraus_) t.noalias() += kron(k.matrix().conjugate(), k.matrix());
      cache_->transfer = std::move(t);
    });
    return cache_->transfer;
  }

 private:
  struct Cache {
    std::once_flag once;
    CMatrix transfer;
  };

  FockSpaceConfig config_;
  std::vector<FockOperator> kraus_;
  std::string label_;
  int headroom_ = 0;
  double tolerance_ = kDefaultTolerance;
  double defect_ = 0.0;
  std::shared_ptr<Cache> cache_;
};

inline FockOperator apply(const KrausChannel& channel, const FockOperator& rho) { return channel.apply(rho); }

/// (N (x) N)(rho12), applied as local superoperators on each mode.
inline FockOperator apply_pairwise(const KrausChannel& channel, const FockOperator& rho12) {
  require_two_mode(rho12, "apply_pairwise");
  if (rho12.cutoff() != channel.cutoff()) throw DimensionMismatch("apply_pairwise: cutoff mismatch");
  const int d = channel.cutoff();
  const CMatrix& t = channel.transfer_matrix();
  CMatrix r = realign(rho12.matrix(), d);
  CMatrix tr = t * r;
  r.noalias() = tr * t.transpose();
  return {rho12.config(), unrealign(r, d)};
}

/// Choi matrix J = sum_ab |a><b| (x) N(|a><b|), input factor first.
inline FockOperator choi_matrix(const KrausChannel& channel) {
  const int d = channel.cutoff();
  CMatrix j = CMatrix::Zero(d * d, d * d);
  for (const auto& k : channel.kraus()) {
    CVector v = vec(k.matrix());
    j.noalias() += v * v.adjoint();
  }
  return {channel.config().as_two_mode(), j};
}

/// Minimal Kraus set from a Choi matrix; eigenvalues below prune_relative *
/// Tr[J] are dropped. Each operator's largest entry is made real positive so
/// the output is reproducible.
inline std::vector<CMatrix> kraus_from_choi(const CMatrix& choi, int d, double prune_relative,
                                            double psd_tolerance = 1e-8) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(choi));
  if (solver.info() != Eigen::Success) throw NumericalError("Choi eigendecomposition failed");
  const RVector& lam = solver.eigenvalues();
  if (lam.minCoeff() < -psd_tolerance) {
    std::ostringstream msg;
    msg << "Choi matrix is not positive semidefinite (min eigenvalue " << lam.minCoeff() << ")";
    throw InvalidArgument(msg.str());
  }
  const double total = std::max(lam.cwiseMax(0.0).sum(), 1e-300);
  std::vector<CMatrix> kraus;
  for (Eigen::Index i = lam.size() - 1; i >= 0; --i) {
    if (lam(i) <= prune_relative * total) break;
    CMatrix k = unvec(solver.eigenvectors().col(i), d) * std::sqrt(lam(i));
    Eigen::Index r = 0, c = 0;
    k.cwiseAbs().maxCoeff(&r, &c);
    k *= std::conj(k(r, c)) / std::abs(k(r, c));
    kraus.push_back(std::move(k));
  }
  return kraus;
}

/// Channel from a user-supplied Choi matrix (convention of choi_matrix).
inline KrausChannel from_choi(const FockOperator& choi, std::string label = "choi") {
  require_two_mode(choi, "from_choi");
  const int d = choi.cutoff();
  if (choi.hermiticity_defect() > 1e-8) throw InvalidArgument("from_choi: Choi matrix is not Hermitian");
  FockOperator reduced = partial_trace(choi, 0);
  const double tp_defect = (reduced.matrix() - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (tp_defect > 1e-6) {
    throw InvalidArgument("from_choi: Choi matrix is not trace preserving (partial-trace defect " +
                          std::to_string(tp_defect) + ")");
  }
  return {choi.config().as_single(), kraus_from_choi(choi.matrix(), d, 1e-12), std::move(label), -1, 1e-6};
}

// ---------------------------------------------------------------------------
// Builtin channels

inline KrausChannel identity_channel(const FockSpaceConfig& config) {
  return {config, {CMatrix::Identity(config.cutoff, config.cutoff)}, "identity"};
}

inline std::string format_label(const std::string& name, double value) {
  std::ostringstream s;
  s << name << "(" << value << ")";
  return s.str();
}

inline double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// Attenuator with transmissivity lambda. K_l lowers by l photons, so the
/// truncated Kraus set is exactly complete.
inline KrausChannel pure_loss(double lambda, const FockSpaceConfig& config) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvalidArgument("pure_loss: transmissivity must lie in [0, 1]");
  const int d = config.cutoff;
  std::vector<CMatrix> kraus;
  for (int l = 0; l < d; ++l) {
    CMatrix k = CMatrix::Zero(d, d);
    for (int n = l; n < d; ++n) {
      k(n - l, n) = std::sqrt(std::exp(log_binomial(n, l)) * std::pow(lambda, n - l) * std::pow(1.0 - lambda, l));
    }
    if (k.cwiseAbs().maxCoeff() > 0.0) kraus.push_back(std::move(k));
  }
  return {config, std::move(kraus), format_label("pure_loss", lambda)};
}

/// Smallest headroom >= d/4 whose interior block has defect <= tolerance.
inline int trusted_headroom(const std::vector<CMatrix>& kraus, const FockSpaceConfig& config, double tolerance) {
  std::vector<FockOperator> ops;
  for (const auto& k : kraus) ops.emplace_back(config, k);
  const int d = config.cutoff;
  for (int h = d / 4; h < d; ++h)
    if (completeness_defect(ops, d - h) <= tolerance) return h;
  throw InvalidArgument("cutoff " + std::to_string(d) + " too small: channel leaks probability even from the vacuum");
}

/// Phase-insensitive amplifier with gain g >= 1.
inline KrausChannel amplifier(double gain, const FockSpaceConfig& config) {
  if (!(gain >= 1.0)) throw InvalidArgument("amplifier: gain must be >= 1");
  const int d = config.cutoff;
  std::vector<CMatrix> kraus;
  for (int l = 0; l < d; ++l) {
    CMatrix k = CMatrix::Zero(d, d);
    for (int n = 0; n + l < d; ++n) {
      k(n + l, n) = std::sqrt(std::exp(log_binomial(n + l, n)) * std::pow(1.0 / gain, n + 1) *
                              std::pow(1.0 - 1.0 / gain, l));
    }
    if (k.cwiseAbs().maxCoeff() > 0.0) kraus.push_back(std::move(k));
  }
  const int h = trusted_headroom(kraus, config, KrausChannel::kDefaultTolerance);
  return {config, std::move(kraus), format_label("amplifier", gain), h};
}

/// T -> Tr[T] sigma.
inline KrausChannel replacement_channel(const FockOperator& sigma, std::string label = "replacement") {
  require_single_mode(sigma, "replacement_channel");
  if (sigma.hermiticity_defect() > 1e-8) throw NotAState("replacement_channel: state is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(sigma.matrix()));
  const RVector& lam = solver.eigenvalues();
  if (lam.minCoeff() < -1e-8) throw NotAState("replacement_channel: state is not positive");
  const int d = sigma.cutoff();
  std::vector<CMatrix> kraus;
  for (Eigen::Index k = lam.size() - 1; k >= 0; --k) {
    if (lam(k) <= 1e-15) continue;
    const CVector e = solver.eigenvectors().col(k) * std::sqrt(lam(k));
    for (int l = 0; l < d; ++l) {
      CMatrix op = CMatrix::Zero(d, d);
      op.col(l) = e;
      kraus.push_back(std::move(op));
    }
  }
  // Completeness equals Tr[sigma]; allow the caller's normalisation error.
  const double tol = std::max(KrausChannel::kDefaultTolerance, 2.0 * std::abs(sigma.trace() - 1.0));
  return {sigma.config(), std::move(kraus), std::move(label), -1, tol};
}

// ---------------------------------------------------------------------------
// Dephasing

/// Angular density sampled on an M-point midpoint grid over [0, 2 pi).
class AngularDistribution {
 public:
  static AngularDistribution von_mises(double kappa, int grid = 256, double mean_angle = 0.0) {
    if (!(kappa >= 0.0)) throw InvalidArgument("von Mises concentration must be non-negative");
    const double norm = 2.0 * std::numbers::pi * std::cyl_bessel_i(0.0, kappa);
    std::vector<double> p(validated_grid(grid));
    for (int j = 0; j < grid; ++j) p[j] = std::exp(kappa * std::cos(angle(j, grid) - mean_angle)) / norm;
    return AngularDistribution(std::move(p));
  }

  static AngularDistribution uniform(int grid = 256) {
    return AngularDistribution(std::vector<double>(validated_grid(grid), 1.0 / (2.0 * std::numbers::pi)));
  }

  /// Density values at the grid midpoints theta_j = (j + 1/2) 2 pi / M.
  static AngularDistribution from_samples(std::vector<double> density) {
    validated_grid(static_cast<int>(density.size()));
    return AngularDistribution(std::move(density));
  }

  int size() const { return static_cast<int>(density_.size()); }
  double angle(int j) const { return angle(j, size()); }
  double weight() const { return 2.0 * std::numbers::pi / size(); }
  const std::vector<double>& density() const { return density_; }

  double normalization() const {
    double s = 0.0;
    for (double p : density_) s += p;
    return s * weight();
  }

  /// Phi_p(k) = int e^{i theta k} p(theta) d theta, by the midpoint rule
  /// normalised so that Phi_p(0) = 1 exactly.
  Complex phi(int k) const {
    Complex s = 0.0;
    for (int j = 0; j < size(); ++j) s += density_[j] * std::polar(1.0, k * angle(j));
    return s / mass_;
  }

  /// Quadrature weight of grid point j; the weights sum to one.
  double probability(int j) const { return density_[j] / mass_; }

  /// Differential entropy -int p ln p, in nats.
  double differential_entropy_nats() const {
    double s = 0.0;
    for (double p : density_)
      if (p > 0.0) s -= p * std::log(p);
    return s * weight();
  }

 private:
  explicit AngularDistribution(std::vector<double> density) : density_(std::move(density)) {
    for (double p : density_) {
      if (!(p >= 0.0)) throw InvalidArgument("angular density must be non-negative");
      mass_ += p;
    }
    if (std::abs(normalization() - 1.0) > 1e-8) {
      throw InvalidArgument("angular density integrates to " + std::to_string(normalization()) + ", not 1");
    }
  }

  static int validated_grid(int grid) {
    if (grid < 2) throw InvalidArgument("angular grid needs at least 2 points");
    return grid;
  }

  static double angle(int j, int grid) { return (j + 0.5) * 2.0 * std::numbers::pi / grid; }

  std::vector<double> density_;
  double mass_ = 0.0;
};

/// K_j = sqrt(w p(theta_j)) exp(i theta_j N).
inline KrausChannel dephasing_channel(const AngularDistribution& dist, const FockSpaceConfig& config,
                                      std::string label = "dephasing") {
  const int d = config.cutoff;
  std::vector<CMatrix> kraus;
  for (int j = 0; j < dist.size(); ++j) {
    const double w = dist.probability(j);
    if (w <= 0.0) continue;
    CMatrix k = CMatrix::Zero(d, d);
    for (int n = 0; n < d; ++n) k(n, n) = std::sqrt(w) * std::polar(1.0, n * dist.angle(j));
    kraus.push_back(std::move(k));
  }
  return {config, std::move(kraus), std::move(label)};
}

/// Exact elementwise action rho_nm -> Phi(n - m) rho_nm.
inline FockOperator dephasing_apply_elementwise(const AngularDistribution& dist, const FockOperator& rho) {
  require_single_mode(rho, "dephasing_apply_elementwise");
  const int d = rho.cutoff();
  std::vector<Complex> phi(2 * d - 1);
  for (int k = -(d - 1); k <= d - 1; ++k) phi[k + d - 1] = dist.phi(k);
  CMatrix out = rho.matrix();
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) out(n, m) *= phi[n - m + d - 1];
  return {rho.config(), out};
}

/// Elementwise (N_p (x) N_p) on a two-mode operator.
inline FockOperator dephasing_apply_pairwise_elementwise(const AngularDistribution& dist, const FockOperator& rho12) {
  require_two_mode(rho12, "dephasing_apply_pairwise_elementwise");
  const int d = rho12.cutoff();
  std::vector<Complex> phi(2 * d - 1);
  for (int k = -(d - 1); k <= d - 1; ++k) phi[k + d - 1] = dist.phi(k);
  CMatrix out = rho12.matrix();
  for (int m1 = 0; m1 < d; ++m1)
    for (int m2 = 0; m2 < d; ++m2)
      for (int n1 = 0; n1 < d; ++n1)
        for (int n2 = 0; n2 < d; ++n2)
          out(n1 * d + n2, m1 * d + m2) *= phi[n1 - m1 + d - 1] * phi[n2 - m2 + d - 1];
  return {rho12.config(), out};
}

// ---------------------------------------------------------------------------
// Additive classical noise

/// Finite mixture of displacements: W takes value points[j] with
/// probability weights[j].
class NoiseDistribution {
 public:
  NoiseDistribution(std::vector<Complex> points, std::vector<double> weights)
      : points_(std::move(points)), weights_(std::move(weights)) {
    if (points_.empty() || points_.size() != weights_.size()) {
      throw InvalidArgument("noise distribution needs one weight per point");
    }
    double total = 0.0;
    for (double w : weights_) {
      if (!(w > 0.0)) throw InvalidArgument("noise weights must be positive");
      total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw InvalidArgument("noise weights sum to " + std::to_string(total) + ", not 1");
    }
  }

  static NoiseDistribution single_point(Complex omega) { return {{omega}, {1.0}}; }
  static NoiseDistribution symmetric_two_point(Complex c) { return {{c, -c}, {0.5, 0.5}}; }

  /// Complex Gaussian W = u + i v with independent u ~ N(0, sigma_re^2),
  /// v ~ N(0, sigma_im^2), discretised on an order x order Gauss-Hermite
  /// product grid (a zero sigma collapses that axis to one atom).
  static NoiseDistribution gaussian(double sigma_re, double sigma_im, int order = 16) {
    if (!(sigma_re >= 0.0 && sigma_im >= 0.0)) throw InvalidArgument("Gaussian noise widths must be non-negative");
    auto axis = [order](double sigma) {
      std::vector<std::pair<double, double>> atoms;
      if (sigma == 0.0) return std::vector<std::pair<double, double>>{{0.0, 1.0}};
      auto [nodes, weights] = gauss_hermite(order);
      double total = 0.0;
      for (double w : weights) total += w;
      for (int i = 0; i < order; ++i) atoms.emplace_back(std::sqrt(2.0) * sigma * nodes[i], weights[i] / total);
      return atoms;
    };
    std::vector<Complex> points;
    std::vector<double> weights;
    for (auto [u, wu] : axis(sigma_re))
      for (auto [v, wv] : axis(sigma_im)) {
        if (wu * wv <= 0.0) continue;
        points.emplace_back(u, v);
        weights.push_back(wu * wv);
      }
    double total = 0.0;
    for (double w : weights) total += w;
    for (double& w : weights) w /= total;
    return {std::move(points), std::move(weights)};
  }

  /// Golub-Welsch nodes and weights for weight exp(-x^2).
  static std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int order) {
    if (order < 1) throw InvalidArgument("Gauss-Hermite order must be positive");
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
    for (int i = 1; i < order; ++i) jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(i / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    std::vector<double> nodes(order), weights(order);
    for (int i = 0; i < order; ++i) {
      nodes[i] = solver.eigenvalues()(i);
      const double v0 = solver.eigenvectors()(0, i);
      weights[i] = std::sqrt(std::numbers::pi) * v0 * v0;
    }
    return {nodes, weights};
  }

  const std::vector<Complex>& points() const { return points_; }
  const std::vector<double>& weights() const { return weights_; }

  Complex mean() const {
    Complex m = 0.0;
    for (std::size_t j = 0; j < points_.size(); ++j) m += weights_[j] * points_[j];
    return m;
  }

  /// chi_W(z) = E[exp(z conj(W) - conj(z) W)], the factor multiplying chi_T
  /// under the channel.
  Complex symplectic_char(Complex z) const {
    Complex s = 0.0;
    for (std::size_t j = 0; j < points_.size(); ++j)
      s += weights_[j] * std::exp(z * std::conj(points_[j]) - std::conj(z) * points_[j]);
    return s;
  }

  /// Covariance of (Re W, Im W).
  Mat2 covariance() const {
    const Complex m = mean();
    Mat2 c = Mat2::Zero();
    for (std::size_t j = 0; j < points_.size(); ++j) {
      const Vec2 v(points_[j].real() - m.real(), points_[j].imag() - m.imag());
      c += weights_[j] * v * v.transpose();
    }
    return c;
  }

 private:
  std::vector<Complex> points_;
  std::vector<double> weights_;
};

/// Kraus {sqrt(w_j) D_{omega_j}}. Displacements leak photons past the
/// cutoff, so the trusted interior block is chosen adaptively.
inline KrausChannel additive_noise_channel(const NoiseDistribution& dist, const FockSpaceConfig& config,
                                           std::string label = "additive_noise") {
  std::vector<CMatrix> kraus;
  for (std::size_t j = 0; j < dist.points().size(); ++j)
    kraus.push_back(std::sqrt(dist.weights()[j]) * displacement(dist.points()[j], config).matrix());
  const int h = trusted_headroom(kraus, config, KrausChannel::kDefaultTolerance);
  return {config, std::move(kraus), std::move(label), h};
}

/// ||Tr[N(|0><0|) R]||_2.
inline double is_centered(const KrausChannel& channel) {
  return state_moments(channel.apply(vacuum(channel.config()))).mean.norm();
}

}  // namespace bclt
