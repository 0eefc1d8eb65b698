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

// Dense complex linear-algebra helpers shared by every module.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include "bosonic_clt/errors.hpp"

namespace bclt {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;

inline constexpr Complex kI{0.0, 1.0};

/// Symplectic form in (x, p) ordering.
inline Mat2 symplectic_form() {
  Mat2 omega;
  omega << 0.0, 1.0, -1.0, 0.0;
  return omega;
}

/// Worker count for data-parallel kernels. BOSONIC_CLT_THREADS caps it.
inline unsigned kernel_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BOSONIC_CLT_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) return std::min<unsigned>(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

/// Runs body(i) for i in [0, count). Every index owns its output slot, so the
/// result does not depend on the thread count or scheduling.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  unsigned threads = std::min<std::size_t>(kernel_threads(), count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

inline CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

/// Eigenvalues (ascending) of the Hermitian part of m.
inline RVector hermitian_eigenvalues(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  return solver.eigenvalues();
}

/// Nearest unitary (polar factor) of a square matrix.
inline CMatrix polar_unitary(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Reshuffles a two-mode operator X[(p1,p2),(q1,q2)] into
/// R[(p1,q1),(p2,q2)], with composite indices p + d*q on the right-hand side
/// (column-major vec convention). Local superoperators then act as T*R*T^T.
inline CMatrix realign(const CMatrix& x, int d) {
  CMatrix r(d * d, d * d);
  for (int q1 = 0; q1 < d; ++q1)
    for (int q2 = 0; q2 < d; ++q2)
      for (int p1 = 0; p1 < d; ++p1)
        for (int p2 = 0; p2 < d; ++p2) r(p1 + d * q1, p2 + d * q2) = x(p1 * d + p2, q1 * d + q2);
  return r;
}

inline CMatrix unrealign(const CMatrix& r, int d) {
  CMatrix x(d * d, d * d);
  for (int q1 = 0; q1 < d; ++q1)
    for (int q2 = 0; q2 < d; ++q2)
      for (int p1 = 0; p1 < d; ++p1)
        for (int p2 = 0; p2 < d; ++p2) x(p1 * d + p2, q1 * d + q2) = r(p1 + d * q1, p2 + d * q2);
  return x;
}

/// Column-major vectorisation: vec(m)[i + d*j] = m(i, j).
inline CVector vec(const CMatrix& m) {
  return Eigen::Map<const CVector>(m.data(), m.size());
}

inline CMatrix unvec(const CVector& v, int rows) {
  return Eigen::Map<const CMatrix>(v.data(), rows, v.size() / rows);
}

/// Shannon-style entropy of a spectrum, in bits when base2 is set.
inline double spectrum_entropy(const RVector& eigenvalues, bool base2 = true) {
  double s = 0.0;
  for (double lam : eigenvalues)
    if (lam > 0.0) s -= lam * std::log(lam);
  return base2 ? s / std::log(2.0) : s;
}

}  // namespace bclt
