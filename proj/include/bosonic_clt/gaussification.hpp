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

// Gaussification of a centred single-mode channel: the moment data of the
// channel, the Gaussian parameters (X, Y), the uncertainty certificate,
// Gaussian states in phase space and in Fock space, and the Gaussian
// coherent information.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "bosonic_clt/channels.hpp"
#include "bosonic_clt/errors.hpp"
#include "bosonic_clt/fock.hpp"
#include "bosonic_clt/linalg.hpp"

namespace bclt {

/// Low-order moments of a channel read off its action on the 0/1 block.
struct MomentData {
  Complex t;        // Tr[N(|1><0|) a]
  Complex s;        // Tr[N(|0><1|) a]
  Complex g;        // Tr[N(|0><0|) a^dag^2]
  double h = 1.0;   // Tr[N(|0><0|) (2 a^dag a + 1)]
  Mat2 v = Mat2::Identity();       // covariance of N(|0><0|)
  Vec2 mean_defect = Vec2::Zero();  // first moments of N(|0><0|)
};

namespace detail {

inline FockOperator matrix_unit(int row, int col, const FockSpaceConfig& config) {
  CMatrix m = CMatrix::Zero(config.cutoff, config.cutoff);
  m(row, col) = 1.0;
  return {config, m};
}

/// Tr[M a] = sum_l sqrt(l) M(l, l-1).
inline Complex trace_with_a(const CMatrix& m) {
  Complex s = 0.0;
  for (Eigen::Index l = 1; l < m.rows(); ++l) s += std::sqrt(double(l)) * m(l, l - 1);
  return s;
}

}  // namespace detail

inline MomentData extract_moments(const KrausChannel& channel) {
  const auto& config = channel.config();
  const FockOperator out00 = channel.apply(detail::matrix_unit(0, 0, config));
  const FockOperator out01 = channel.apply(detail::matrix_unit(0, 1, config));
  const FockOperator out10 = channel.apply(detail::matrix_unit(1, 0, config));
  MomentData m;
  m.t = detail::trace_with_a(out10.matrix());
  m.s = detail::trace_with_a(out01.matrix());
  const CMatrix& r = out00.matrix();
  Complex g = 0.0, n = 0.0;
  for (int l = 0; l < config.cutoff; ++l) {
    n += double(l) * r(l, l);
    if (l >= 2) g += std::sqrt(double(l) * (l - 1)) * r(l - 2, l);
  }
  m.g = g;
  m.h = (2.0 * n + r.trace()).real();
  const StateMoments vac = state_moments(out00);
  m.v = vac.cov;
  m.mean_defect = vac.mean;
  if (m.h < 1.0 - 1e-8) throw NumericalError("moment data: Tr[N(vac)(2N+1)] below 1");
  return m;
}

/// Gaussian channel acting on moments as mean -> X mean, cov -> X cov X^T + Y.
struct GaussianChannelParams {
  Mat2 x = Mat2::Identity();
  Mat2 y = Mat2::Zero();
  double centered_defect = 0.0;
  std::string warning;
};

inline constexpr double kCenteredWarn = 1e-6;
inline constexpr double kCenteredReject = 1e-3;

/// (X, Y) of the Gaussification: X_jk = Tr[R_j N(O_k)]/sqrt2 for the
/// quadrature-like inputs O_1 = |0><1| + |1><0| and O_2 = -i|0><1| + i|1><0|,
/// and Y = V - X X^T with V the covariance of N(|0><0|).
inline GaussianChannelParams extract_xy(const KrausChannel& channel) {
  const MomentData m = extract_moments(channel);
  GaussianChannelParams p;
  p.centered_defect = m.mean_defect.norm();
  if (p.centered_defect > kCenteredReject) {
    std::ostringstream msg;
    msg << "channel not centered: |Tr[N(|0><0|) R]| = " << p.centered_defect;
    throw NotCentered(msg.str());
  }
  if (p.centered_defect > kCenteredWarn) {
    std::ostringstream msg;
    msg << "channel only approximately centered (defect " << p.centered_defect << ")";
    p.warning = msg.str();
  }
  const auto& config = channel.config();
  const auto q = ladder_operators(config);
  const FockOperator out01 = channel.apply(detail::matrix_unit(0, 1, config));
  const FockOperator out10 = channel.apply(detail::matrix_unit(1, 0, config));
  const FockOperator o1 = out01 + out10;
  const FockOperator o2 = Complex(0.0, -1.0) * out01 + kI * out10;
  const FockOperator* quad[2] = {&q.x, &q.p};
  const FockOperator* outs[2] = {&o1, &o2};
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) p.x(j, k) = ((*quad[j]) * (*outs[k])).trace().real() / std::sqrt(2.0);
  Mat2 y = m.v - p.x * p.x.transpose();
  p.y = 0.5 * (y + y.transpose());
  return p;
}

struct Certificate {
  double min_eigenvalue = 0.0;
  bool physical = true;
};

inline constexpr double kCertificateTolerance = 1e-8;

/// Smallest eigenvalue of the Hermitian matrix Y + i Omega - i X Omega X^T.
inline Certificate uncertainty_certificate(const GaussianChannelParams& params) {
  const Mat2 omega = symplectic_form();
  Eigen::Matrix2cd m = params.y.cast<Complex>() + kI * (omega - params.x * omega * params.x.transpose()).cast<Complex>();
  Certificate c;
  c.min_eigenvalue = hermitian_eigenvalues(m).minCoeff();
  c.physical = c.min_eigenvalue >= -kCertificateTolerance;
  return c;
}

struct GaussianState {
  Vec2 mean = Vec2::Zero();
  Mat2 cov = Mat2::Identity();

  static GaussianState coherent(Complex alpha) {
    return {std::sqrt(2.0) * Vec2(alpha.real(), alpha.imag()), Mat2::Identity()};
  }
  static GaussianState thermal(double nbar) { return {Vec2::Zero(), (2.0 * nbar + 1.0) * Mat2::Identity()}; }
};

/// Smallest eigenvalue of cov + i Omega.
inline double robertson_schrodinger_gap(const Mat2& cov) {
  return hermitian_eigenvalues(cov.cast<Complex>() + kI * symplectic_form().cast<Complex>()).minCoeff();
}

inline GaussianState gaussian_apply(const GaussianChannelParams& params, const GaussianState& g) {
  return {params.x * g.mean, params.x * g.cov * params.x.transpose() + params.y};
}

/// exp(-w^T cov w / 4 + i mean^T w) with w = Lambda zhat = sqrt2 (Im z, -Re z).
inline Complex gaussian_char(const GaussianState& g, Complex z) {
  const Vec2 w = std::sqrt(2.0) * Vec2(z.imag(), -z.real());
  return std::exp(Complex(-0.25 * w.dot(g.cov * w), g.mean.dot(w)));
}

/// Limit of chi_{N^{conv n}(|alpha><alpha|)}(z) built from the moment data:
/// exp[(z^2 G - |z|^2 H + conj(z)^2 conj(G))/2 + z(alpha s* + alpha* t*)
///     - conj(z)(alpha t + alpha* s)].
inline Complex coherent_limit_char(const MomentData& m, Complex alpha, Complex z) {
  const Complex zb = std::conj(z);
  const Complex quad = 0.5 * (z * z * m.g - std::norm(z) * m.h + zb * zb * std::conj(m.g));
  const Complex lin = z * (alpha * std::conj(m.s) + std::conj(alpha) * std::conj(m.t)) -
                      zb * (alpha * m.t + std::conj(alpha) * m.s);
  return std::exp(quad + lin);
}

/// Fock-space realisation of a Gaussian state: thermal state with the
/// symplectic eigenvalue, squeezed, rotated and displaced. The state is built
/// at an enlarged internal cutoff and compressed to the requested one;
/// tail_mass is the probability lost in the compression.
inline TruncatedState gaussian_state_to_fock(const GaussianState& g, const FockSpaceConfig& config,
                                             int internal_cutoff = -1) {
  if (config.modes != 1) throw InvalidArgument("gaussian_state_to_fock: single-mode config required");
  if ((g.cov - g.cov.transpose()).cwiseAbs().maxCoeff() > 1e-9) throw UnphysicalCovariance("covariance not symmetric");
  if (robertson_schrodinger_gap(g.cov) < -1e-8) {
    throw UnphysicalCovariance("covariance violates cov + i Omega >= 0");
  }
  const Mat2 cov = 0.5 * (g.cov + g.cov.transpose());
  double nu = std::sqrt(cov.determinant());
  if (nu < 1.0 - 1e-8) throw UnphysicalCovariance("symplectic eigenvalue below 1");
  nu = std::max(nu, 1.0);

  // cov / nu = R(phi) diag(e^{2r}, e^{-2r}) R(phi)^T
  Eigen::SelfAdjointEigenSolver<Mat2> eig(cov / nu);
  const double big = eig.eigenvalues()(1);
  const double r = 0.25 * std::log(std::max(big, 1.0) / std::max(eig.eigenvalues()(0), 1e-300));
  const Vec2 axis = eig.eigenvectors().col(1);
  const double phi = std::atan2(axis(1), axis(0));

  const int d = config.cutoff;
  const int dim = internal_cutoff > 0 ? std::max(internal_cutoff, d) : 2 * d + 40;
  const auto big_config = FockSpaceConfig::single_mode(dim);
  CMatrix rho = thermal_state((nu - 1.0) / 2.0, big_config).rho.matrix();

  if (r > 1e-14) {
    // exp((r/2)(a^dag^2 - a^2)) stretches x by e^{r}; K is its Hermitian generator.
    const auto q = ladder_operators(big_config);
    const CMatrix a2 = q.a.matrix() * q.a.matrix();
    const CMatrix k = Complex(0.0, 0.5 * r) * (a2.adjoint() - a2);
    Eigen::SelfAdjointEigenSolver<CMatrix> gen(hermitian_part(k));
    if (gen.info() != Eigen::Success) throw NumericalError("squeezer eigendecomposition failed");
    CVector phases(dim);
    for (int i = 0; i < dim; ++i) phases(i) = std::polar(1.0, -gen.eigenvalues()(i));
    const CMatrix u = gen.eigenvectors() * phases.asDiagonal() * gen.eigenvectors().adjoint();
    rho = u * rho * u.adjoint();
  }
  if (phi != 0.0) {
    CVector rot(dim);
    for (int n = 0; n < dim; ++n) rot(n) = std::polar(1.0, n * phi);
    rho = rot.asDiagonal() * rho * rot.conjugate().asDiagonal();
  }
  const Complex beta(g.mean(0) / std::sqrt(2.0), g.mean(1) / std::sqrt(2.0));
  if (beta != 0.0) {
    const CMatrix dz = displacement(beta, big_config).matrix();
    rho = dz * rho * dz.adjoint();
  }
  CMatrix kept = hermitian_part(rho.topLeftCorner(d, d));
  const double mass = kept.trace().real();
  return {{config, kept / mass}, std::max(0.0, 1.0 - mass)};
}

/// N_G(|alpha><alpha|) in Fock space, the limit target of N^{conv n}.
inline TruncatedState gaussification_output(const GaussianChannelParams& params, Complex alpha,
                                            const FockSpaceConfig& config) {
  return gaussian_state_to_fock(gaussian_apply(params, GaussianState::coherent(alpha)), config);
}

inline TruncatedState gaussification_output(const KrausChannel& channel, Complex alpha) {
  return gaussification_output(extract_xy(channel), alpha, channel.config());
}

/// Symplectic eigenvalues of a 2n x 2n covariance matrix (ascending).
inline Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& cov) {
  const int n = static_cast<int>(cov.rows()) / 2;
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int i = 0; i < n; ++i) {
    omega(2 * i, 2 * i + 1) = 1.0;
    omega(2 * i + 1, 2 * i) = -1.0;
  }
  // i Omega cov has eigenvalues +-nu_k.
  const CMatrix m = kI * (omega * cov).cast<Complex>();
  Eigen::ComplexEigenSolver<CMatrix> solver(m);
  std::vector<double> vals;
  for (int i = 0; i < 2 * n; ++i) vals.push_back(std::abs(solver.eigenvalues()(i).real()));
  std::sort(vals.begin(), vals.end());
  Eigen::VectorXd out(n);
  for (int i = 0; i < n; ++i) out(i) = 0.5 * (vals[2 * i] + vals[2 * i + 1]);
  return out;
}

/// Entropy (bits) of a Gaussian state with the given symplectic eigenvalues.
inline double gaussian_entropy(const Eigen::VectorXd& nus) {
  double s = 0.0;
  for (double nu : nus) s += g_entropy(std::max(0.0, (nu - 1.0) / 2.0));
  return s;
}

/// I(R>B) of the Gaussian channel on the purification of thermal(energy):
/// the reference keeps one arm of a two-mode squeezed vacuum.
inline double gaussian_coherent_information(const GaussianChannelParams& params, double energy) {
  if (!(energy >= 0.0)) throw InvalidArgument("energy must be non-negative");
  const double a = 2.0 * energy + 1.0;
  const double c = 2.0 * std::sqrt(energy * (energy + 1.0));
  Mat2 z;
  z << 1.0, 0.0, 0.0, -1.0;
  Eigen::Matrix4d cov;
  cov.topLeftCorner<2, 2>() = a * Mat2::Identity();
  cov.topRightCorner<2, 2>() = c * z * params.x.transpose();
  cov.bottomLeftCorner<2, 2>() = c * params.x * z;
  cov.bottomRightCorner<2, 2>() = a * params.x * params.x.transpose() + params.y;
  const Mat2 out_b = cov.bottomRightCorner<2, 2>();
  Eigen::VectorXd nu_b(1);
  nu_b(0) = std::sqrt(std::max(out_b.determinant(), 0.0));
  return gaussian_entropy(nu_b) - gaussian_entropy(symplectic_eigenvalues(cov));
}

}  // namespace bclt
