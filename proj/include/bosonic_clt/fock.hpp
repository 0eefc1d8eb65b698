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

// Truncated Fock-space numerics for one and two bosonic modes.
//
// Conventions used throughout the library:
//   * quadratures x = (a + a^dag)/sqrt2, p = (a - a^dag)/(i sqrt2), [x, p] = i;
//   * covariance matrices use the anticommutator convention, so the vacuum
//     has covariance I (not I/2);
//   * D_z = exp(z a^dag - conj(z) a), chi_T(z) = Tr[T D_z];
//   * two-mode product index is n1 * d + n2 (mode 1 major).

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "bosonic_clt/errors.hpp"
#include "bosonic_clt/linalg.hpp"

namespace bclt {

struct FockSpaceConfig {
  int cutoff = 20;  // Fock levels 0..cutoff-1 per mode
  int modes = 1;

  static FockSpaceConfig single_mode(int cutoff) { return validated({cutoff, 1}); }
  static FockSpaceConfig two_mode(int cutoff) { return validated({cutoff, 2}); }

  static FockSpaceConfig validated(FockSpaceConfig c) {
    if (c.cutoff < 2) throw InvalidArgument("Fock cutoff must be at least 2, got " + std::to_string(c.cutoff));
    if (c.modes != 1 && c.modes != 2) throw InvalidArgument("only one- and two-mode spaces are supported");
    return c;
  }

  int dim() const { return modes == 1 ? cutoff : cutoff * cutoff; }
  FockSpaceConfig as_single() const { return single_mode(cutoff); }
  FockSpaceConfig as_two_mode() const { return two_mode(cutoff); }

  friend bool operator==(const FockSpaceConfig&, const FockSpaceConfig&) = default;
};

inline std::string describe(const FockSpaceConfig& c) {
  return "(cutoff " + std::to_string(c.cutoff) + ", " + std::to_string(c.modes) + " mode" +
         (c.modes == 1 ? ")" : "s)");
}

/// Dense operator on a truncated Fock space. The matrix dimension always
/// matches the config; binary operations require equal configs.
class FockOperator {
 public:
  FockOperator(FockSpaceConfig config, CMatrix matrix)
      : config_(FockSpaceConfig::validated(config)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != config_.dim() || matrix_.cols() != config_.dim()) {
      throw DimensionMismatch("matrix of size " + std::to_string(matrix_.rows()) + "x" +
                              std::to_string(matrix_.cols()) + " does not match Fock space " +
                              describe(config_));
    }
  }

  static FockOperator zero(const FockSpaceConfig& c) {
    return {c, CMatrix::Zero(c.dim(), c.dim())};
  }
  static FockOperator identity(const FockSpaceConfig& c) {
    return {c, CMatrix::Identity(c.dim(), c.dim())};
  }

  const FockSpaceConfig& config() const { return config_; }
  const CMatrix& matrix() const { return matrix_; }
  int cutoff() const { return config_.cutoff; }
  int dim() const { return config_.dim(); }

  Complex operator()(Eigen::Index i, Eigen::Index j) const { return matrix_(i, j); }
  Complex trace() const { return matrix_.trace(); }
  FockOperator adjoint() const { return {config_, matrix_.adjoint()}; }

  /// Largest entry of |A - A^dag|.
  double hermiticity_defect() const {
    return (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  }

  friend FockOperator operator+(const FockOperator& a, const FockOperator& b) {
    a.require_same(b, "operator+");
    return {a.config_, a.matrix_ + b.matrix_};
  }
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b) {
    a.require_same(b, "operator-");
    return {a.config_, a.matrix_ - b.matrix_};
  }
  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) {
    a.require_same(b, "operator*");
    return {a.config_, a.matrix_ * b.matrix_};
  }
  friend FockOperator operator*(Complex s, const FockOperator& a) { return {a.config_, s * a.matrix_}; }
  friend FockOperator operator*(double s, const FockOperator& a) { return {a.config_, s * a.matrix_}; }

  void require_same(const FockOperator& other, const char* what) const {
    if (!(config_ == other.config_)) {
      throw DimensionMismatch(std::string(what) + ": Fock spaces differ " + describe(config_) + " vs " +
                              describe(other.config_));
    }
  }

 private:
  FockSpaceConfig config_;
  CMatrix matrix_;
};

/// a (x) b for two single-mode operators with the same cutoff.
inline FockOperator tensor(const FockOperator& a, const FockOperator& b) {
  if (a.config().modes != 1 || b.config().modes != 1 || a.cutoff() != b.cutoff()) {
    throw DimensionMismatch("tensor: expects two single-mode operators with equal cutoff");
  }
  return {a.config().as_two_mode(), kron(a.matrix(), b.matrix())};
}

inline void require_single_mode(const FockOperator& op, const char* what) {
  if (op.config().modes != 1) throw DimensionMismatch(std::string(what) + ": expects a single-mode operator");
}

inline void require_two_mode(const FockOperator& op, const char* what) {
  if (op.config().modes != 2) throw DimensionMismatch(std::string(what) + ": expects a two-mode operator");
}

// ---------------------------------------------------------------------------
// Ladder and quadrature operators

struct QuadratureSet {
  FockOperator a;
  FockOperator a_dagger;
  FockOperator x;
  FockOperator p;
  FockOperator n_op;
};

inline QuadratureSet ladder_operators(const FockSpaceConfig& config) {
  if (config.modes != 1) throw InvalidArgument("ladder_operators: single-mode config required");
  const int d = config.cutoff;
  CMatrix a = CMatrix::Zero(d, d);
  for (int l = 1; l < d; ++l) a(l - 1, l) = std::sqrt(static_cast<double>(l));
  CMatrix ad = a.adjoint();
  const double s2 = std::sqrt(2.0);
  CMatrix x = (a + ad) / s2;
  CMatrix p = (a - ad) / (kI * s2);
  CMatrix n = CMatrix::Zero(d, d);
  for (int l = 0; l < d; ++l) n(l, l) = l;
  return {{config, a}, {config, ad}, {config, x}, {config, p}, {config, n}};
}

// ---------------------------------------------------------------------------
// States

/// A state built by truncating an infinite-dimensional one. tail_mass is the
/// probability that fell outside the cutoff before renormalisation.
struct TruncatedState {
  FockOperator rho;
  double tail_mass = 0.0;
};

inline FockOperator fock_state(int n, const FockSpaceConfig& config) {
  if (config.modes != 1) throw InvalidArgument("fock_state: single-mode config required");
  if (n < 0 || n >= config.cutoff) throw InvalidArgument("fock_state: photon number outside the cutoff");
  CMatrix m = CMatrix::Zero(config.cutoff, config.cutoff);
  m(n, n) = 1.0;
  return {config, m};
}

inline FockOperator vacuum(const FockSpaceConfig& config) { return fock_state(0, config); }

/// Normalised amplitudes of |alpha> on levels 0..d-1 plus the dropped mass.
inline std::pair<CVector, double> coherent_amplitudes(Complex alpha, int d) {
  CVector c(d);
  c(0) = std::exp(-0.5 * std::norm(alpha));
  for (int n = 1; n < d; ++n) c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
  double kept = c.squaredNorm();
  double tail = std::max(0.0, 1.0 - kept);
  return {c / std::sqrt(kept), tail};
}

inline TruncatedState coherent_state(Complex alpha, const FockSpaceConfig& config) {
  if (config.modes != 1) throw InvalidArgument("coherent_state: single-mode config required");
  auto [c, tail] = coherent_amplitudes(alpha, config.cutoff);
  return {{config, c * c.adjoint()}, tail};
}

/// Geometric photon distribution with mean nbar, covariance (2 nbar + 1) I.
inline TruncatedState thermal_state(double nbar, const FockSpaceConfig& config) {
  if (config.modes != 1) throw InvalidArgument("thermal_state: single-mode config required");
  if (!(nbar >= 0.0)) throw InvalidArgument("thermal_state: mean photon number must be non-negative");
  const int d = config.cutoff;
  const double q = nbar / (nbar + 1.0);
  CMatrix m = CMatrix::Zero(d, d);
  double w = 1.0 / (nbar + 1.0), kept = 0.0;
  for (int n = 0; n < d; ++n) {
    m(n, n) = w;
    kept += w;
    w *= q;
  }
  return {{config, m / kept}, std::max(0.0, 1.0 - kept)};
}

// ---------------------------------------------------------------------------
// Displacement

/// <m|D_z|n> restricted to the cutoff. Elements come from the associated
/// Laguerre closed form, evaluated by a scaled three-term recurrence that
/// keeps every intermediate O(1) (no factorial overflow at large cutoffs).
inline FockOperator displacement(Complex z, const FockSpaceConfig& config) {
  if (config.modes != 1) throw InvalidArgument("displacement: single-mode config required");
  const int d = config.cutoff;
  CMatrix out = CMatrix::Zero(d, d);
  const double r = std::abs(z);
  const double x = r * r;
  const double theta = std::arg(z);
  for (int delta = 0; delta < d; ++delta) {
    double h = 0.0;
    if (r > 0.0) {
      h = std::exp(delta * std::log(r) - 0.5 * std::lgamma(delta + 1.0) - 0.5 * x);
    } else if (delta == 0) {
      h = 1.0;
    }
    if (h == 0.0) continue;
    const Complex lower = std::polar(1.0, delta * theta);
    const Complex upper = (delta % 2 ? -1.0 : 1.0) * std::conj(lower);
    double prev = 0.0;
    for (int n = 0; n + delta < d; ++n) {
      out(n + delta, n) = h * lower;
      if (delta > 0) out(n, n + delta) = h * upper;
      const double next = ((2.0 * n + 1.0 + delta - x) * h - std::sqrt(double(n) * (n + delta)) * prev) /
                          std::sqrt((n + 1.0) * (n + 1.0 + delta));
      prev = h;
      h = next;
    }
  }
  return {config, out};
}

// ---------------------------------------------------------------------------
// 50:50 beamsplitter

/// Two-mode 50:50 beamsplitter with U a1^dag U^dag = (a1^dag + a2^dag)/sqrt2 and
/// U a2^dag U^dag = (a1^dag - a2^dag)/sqrt2, so U|alpha, beta> =
/// |(alpha+beta)/sqrt2, (alpha-beta)/sqrt2>. U is real, symmetric and an
/// involution. It is block diagonal over total photon number; sectors that
/// fit inside the cutoff use the binomial closed form, sectors clipped by the
/// cutoff use the nearest unitary to the clipped block.
class BeamSplitter {
 public:
  explicit BeamSplitter(int cutoff) : d_(cutoff) {
    if (cutoff < 2) throw InvalidArgument("beamsplitter: cutoff must be at least 2");
    std::vector<Eigen::Triplet<Complex>> triplets;
    for (int total = 0; total <= 2 * d_ - 2; ++total) {
      const int lo = std::max(0, total - d_ + 1);
      const int hi = std::min(total, d_ - 1);
      const int kept = hi - lo + 1;
      CMatrix block(kept, kept);
      for (int col = 0; col < kept; ++col)
        for (int row = 0; row < kept; ++row) block(row, col) = sector_element(total, lo + row, lo + col);
      // Clipped sectors: nearest unitary. Full sectors: only strips round-off.
      block = polar_unitary(block);
      sectors_.push_back({total, lo, block});
      for (int col = 0; col < kept; ++col) {
        for (int row = 0; row < kept; ++row) {
          const double v = block(row, col).real();
          if (v != 0.0) triplets.emplace_back(index(lo + row, total - lo - row), index(lo + col, total - lo - col), v);
        }
      }
    }
    u_.resize(d_ * d_, d_ * d_);
    u_.setFromTriplets(triplets.begin(), triplets.end());
    u_.makeCompressed();
  }

  int cutoff() const { return d_; }
  const Eigen::SparseMatrix<Complex>& matrix() const { return u_; }
  CMatrix dense() const { return CMatrix(u_); }

  /// U X U^dag.
  CMatrix conjugate(const CMatrix& x) const {
    CMatrix left = u_ * x;
    return (u_ * left.adjoint()).adjoint();
  }

  CVector apply(const CVector& v) const { return u_ * v; }

  /// Tr_2[U X U^dag] for X[(i1,i2),(j1,j2)] = x(i1, i2, j1, j2), touching
  /// only the photon-number sector blocks that reach the kept diagonal.
  template <class Accessor>
  CMatrix conjugate_trace_second(const Accessor& x) const {
    CMatrix out = CMatrix::Zero(d_, d_);
    CMatrix xb, left;
    for (const auto& s1 : sectors_) {
      const int n1 = static_cast<int>(s1.block.rows());
      for (const auto& s2 : sectors_) {
        const int n2 = static_cast<int>(s2.block.rows());
        // Output (p, l) sits at row p - lo of its sector; l runs over both.
        const int l_lo = std::max({0, s1.total - s1.lo - n1 + 1, s2.total - s2.lo - n2 + 1});
        const int l_hi = std::min({d_ - 1, s1.total - s1.lo, s2.total - s2.lo});
        if (l_lo > l_hi) continue;
        xb.resize(n1, n2);
        for (int c = 0; c < n2; ++c)
          for (int r = 0; r < n1; ++r)
            xb(r, c) = x(s1.lo + r, s1.total - s1.lo - r, s2.lo + c, s2.total - s2.lo - c);
        left.noalias() = s1.block * xb;
        for (int l = l_lo; l <= l_hi; ++l) {
          const int p = s1.total - l, q = s2.total - l;
          out(p, q) += left.row(p - s1.lo).cwiseProduct(s2.block.row(q - s2.lo).conjugate()).sum();
        }
      }
    }
    return out;
  }

  int index(int n1, int n2) const { return n1 * d_ + n2; }

  /// Closed-form <j, N-j| U |k, N-k>, computed in extended precision.
  static double sector_element(int total, int j, int k) {
    const int m = total - k;
    long double sum = 0.0L;
    const long double log_norm = 0.5L * (std::lgamma(j + 1.0L) + std::lgamma(total - j + 1.0L) -
                                         std::lgamma(k + 1.0L) - std::lgamma(m + 1.0L)) -
                                 0.5L * total * std::log(2.0L);
    for (int p = std::max(0, j - m); p <= std::min(k, j); ++p) {
      const int q = j - p;
      const long double binom = std::exp(std::lgamma(k + 1.0L) - std::lgamma(p + 1.0L) - std::lgamma(k - p + 1.0L) +
                                         std::lgamma(m + 1.0L) - std::lgamma(q + 1.0L) - std::lgamma(m - q + 1.0L) +
                                         log_norm);
      sum += ((m - q) % 2 ? -1.0L : 1.0L) * binom;
    }
    return static_cast<double>(sum);
  }

 private:
  struct Sector {
    int total;  // n1 + n2
    int lo;     // smallest kept n1
    CMatrix block;
  };

  int d_;
  Eigen::SparseMatrix<Complex> u_;
  std::vector<Sector> sectors_;
};

/// Shared, immutable beamsplitter per cutoff.
inline const BeamSplitter& cached_beamsplitter(int cutoff) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<BeamSplitter>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[cutoff];
  if (!slot) slot = std::make_unique<BeamSplitter>(cutoff);
  return *slot;
}

inline FockOperator beamsplitter_50_50(const FockSpaceConfig& config) {
  if (config.modes != 2) throw InvalidArgument("beamsplitter_50_50: two-mode config required");
  return {config, cached_beamsplitter(config.cutoff).dense()};
}

// ---------------------------------------------------------------------------
// Partial trace, distances, entropies

/// Traces out the other mode and keeps mode `keep` (0 or 1).
inline FockOperator partial_trace(const FockOperator& op, int keep) {
  require_two_mode(op, "partial_trace");
  if (keep != 0 && keep != 1) throw InvalidArgument("partial_trace: keep must be 0 or 1");
  const int d = op.cutoff();
  const CMatrix& x = op.matrix();
  CMatrix out = CMatrix::Zero(d, d);
  for (int q = 0; q < d; ++q)
    for (int p = 0; p < d; ++p) {
      Complex s = 0.0;
      for (int l = 0; l < d; ++l) s += keep == 0 ? x(p * d + l, q * d + l) : x(l * d + p, l * d + q);
      out(p, q) = s;
    }
  return {op.config().as_single(), out};
}

/// (1/2)||A - B||_1. Uses the Hermitian spectrum when A - B is Hermitian and
/// singular values otherwise.
inline double trace_distance(const FockOperator& a, const FockOperator& b) {
  a.require_same(b, "trace_distance");
  const CMatrix diff = a.matrix() - b.matrix();
  const double scale = std::max(1.0, diff.cwiseAbs().maxCoeff());
  if ((diff - diff.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    Eigen::JacobiSVD<CMatrix> svd(diff);
    return 0.5 * svd.singularValues().sum();
  }
  return 0.5 * hermitian_eigenvalues(diff).cwiseAbs().sum();
}

enum class LogBase { kBits, kNats };

/// Eigenvalues in [-1e-10, 0] are clamped to 0; anything below -1e-8 means
/// the operator is not a state.
inline double von_neumann_entropy(const FockOperator& rho, LogBase base = LogBase::kBits) {
  RVector lam = hermitian_eigenvalues(rho.matrix());
  for (double& l : lam) {
    if (l < -1e-8) throw NotAState("von_neumann_entropy: eigenvalue " + std::to_string(l) + " below -1e-8");
    if (l < 0.0) l = 0.0;
  }
  return spectrum_entropy(lam, base == LogBase::kBits);
}

/// Binary-log entropy of a thermal state with mean photon number x.
inline double g_entropy(double x) {
  if (x <= 0.0) return 0.0;
  return ((x + 1.0) * std::log(x + 1.0) - x * std::log(x)) / std::log(2.0);
}

// ---------------------------------------------------------------------------
// Characteristic function and moments

inline Complex char_function(const FockOperator& t, Complex z) {
  require_single_mode(t, "char_function");
  const CMatrix dz = displacement(z, t.config()).matrix();
  // Tr[T D] = sum_ij T_ij D_ji
  return t.matrix().cwiseProduct(dz.transpose()).sum();
}

inline std::vector<Complex> char_function_grid(const FockOperator& t, const std::vector<Complex>& zs) {
  std::vector<Complex> out(zs.size());
  parallel_for(zs.size(), [&](std::size_t i) { out[i] = char_function(t, zs[i]); });
  return out;
}

struct StateMoments {
  Vec2 mean = Vec2::Zero();
  Mat2 cov = Mat2::Identity();
  double photon_mean = 0.0;
};

/// First and second moments. Second moments use normal-ordered expressions
/// (a^2, a^dag a) that are exact at the cutoff, so the top Fock level does not
/// pick up the truncation artefact of x_trunc^2.
inline StateMoments state_moments(const FockOperator& rho) {
  require_single_mode(rho, "state_moments");
  const int d = rho.cutoff();
  const CMatrix& m = rho.matrix();
  Complex tr = m.trace(), ea = 0.0, ea2 = 0.0, ead2 = 0.0, en = 0.0;
  for (int l = 0; l < d; ++l) {
    en += double(l) * m(l, l);
    if (l >= 1) ea += std::sqrt(double(l)) * m(l, l - 1);               // Tr[rho a] = sum rho_{l,l-1} sqrt(l)
    if (l >= 2) {
      const double c = std::sqrt(double(l) * (l - 1));
      ea2 += c * m(l, l - 2);    // Tr[rho a^2]
      ead2 += c * m(l - 2, l);   // Tr[rho a^dag^2]
    }
  }
  Complex ead = 0.0;
  for (int l = 1; l < d; ++l) ead += std::sqrt(double(l)) * m(l - 1, l);
  const double s2 = std::sqrt(2.0);
  StateMoments out;
  out.mean(0) = ((ea + ead) / s2).real();
  out.mean(1) = ((ea - ead) / (kI * s2)).real();
  const double xx = (ea2 + ead2 + 2.0 * en + tr).real();
  const double pp = (-ea2 - ead2 + 2.0 * en + tr).real();
  const double xp = (-kI * (ea2 - ead2)).real();
  out.cov(0, 0) = xx - 2.0 * out.mean(0) * out.mean(0);
  out.cov(1, 1) = pp - 2.0 * out.mean(1) * out.mean(1);
  out.cov(0, 1) = out.cov(1, 0) = xp - 2.0 * out.mean(0) * out.mean(1);
  out.photon_mean = en.real();
  return out;
}

}  // namespace bclt
