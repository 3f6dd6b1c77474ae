// Copyright 2026 The fluxtheo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Independent reference implementations used only by the tests. Everything
// here deliberately takes the slow, obviously-correct route (column-major
// superoperators, dense quadrature, direct sums) so that the library can be
// checked against arithmetic that shares none of its code paths.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fluxtheo/types.hpp"

namespace fluxtheo::oracles {

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline Vector vec(const Matrix& x) {
  Vector out(x.size());
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) out[k++] = x(i, j);
  return out;
}

inline Matrix unvec(const Vector& v, Eigen::Index n) {
  Matrix out(n, n);
  Eigen::Index k = 0;
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = v[k++];
  return out;
}

// vec(A X A^dag) = (conj(A) kron A) vec(X), summed over Kraus terms.
inline Matrix superop(const std::vector<Matrix>& kraus) {
  const Eigen::Index d = kraus.front().rows();
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const Matrix& a : kraus) s += kron(a.conjugate(), a);
  return s;
}

// vec(A^dag X A) = (A^T kron A^dag) vec(X), summed over Kraus terms.
inline Matrix superop_dual(const std::vector<Matrix>& kraus) {
  const Eigen::Index d = kraus.front().rows();
  Matrix s = Matrix::Zero(d * d, d * d);
  for (const Matrix& a : kraus) s += kron(a.transpose(), a.adjoint());
  return s;
}

inline Matrix apply_superop(const Matrix& s, const Matrix& x) {
  return unvec(s * vec(x), x.rows());
}

inline double shannon(const RealVector& p) {
  double h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0) h -= p[i] * std::log(p[i]);
  return h;
}

inline double kl(const RealVector& p, const RealVector& q) {
  double h = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0) h += p[i] * std::log(p[i] / q[i]);
  return h;
}

// Principal value of int f(w') / (w - w') dw' over [lo, hi] by trapezoid on a
// uniform grid with w pinned to a node and the singular node skipped. The
// symmetric neighbourhood of the pole cancels in the limit, so refining the
// grid converges to the principal value. Interval halving until |change| falls
// below tol or the cap is hit.
inline double pv_integral(const std::function<double(double)>& f, double w,
                          double lo, double hi, double tol = 1e-8,
                          int max_doublings = 22) {
  auto eval = [&](Eigen::Index n) {
    // Grid chosen so that w lands exactly on a node when inside the range.
    double h = (hi - lo) / double(n);
    double shift = 0;
    if (w > lo && w < hi) {
      const double frac = (w - lo) / h;
      shift = (frac - std::round(frac)) * h;
    }
    double acc = 0;
    for (Eigen::Index i = 0; i <= n; ++i) {
      const double x = lo + double(i) * h + shift;
      if (x < lo - 0.5 * h || x > hi + 0.5 * h) continue;
      if (std::abs(x - w) < 0.5 * h) continue;  // skip the pole node
      const double weight = (i == 0 || i == n) ? 0.5 : 1.0;
      acc += weight * f(x) / (w - x);
    }
    return acc * h;
  };
  Eigen::Index n = 1 << 10;
  double prev = eval(n);
  for (int k = 0; k < max_doublings; ++k) {
    n *= 2;
    const double cur = eval(n);
    if (std::abs(cur - prev) < tol) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace fluxtheo::oracles
