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

#include "fluxtheo/random.hpp"

#include <algorithm>
#include <cmath>

#include "fluxtheo/errors.hpp"

namespace fluxtheo {

Matrix haar_unitary(int dim, Rng& rng) {
  if (dim <= 0) throw ValidationError("haar_unitary: dim must be positive");
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the phase gauge so the distribution is Haar
  for (int i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    const double a = std::abs(d);
    q.col(i) *= (a > 0) ? d / a : Complex(1, 0);
  }
  return q;
}

Matrix random_density(int dim, Rng& rng, double mix) {
  if (dim <= 0) throw ValidationError("random_density: dim must be positive");
  Matrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = rng.cnormal();
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (1.0 - mix) * rho + mix * Matrix::Identity(dim, dim) / double(dim);
}

Channel random_channel(int dim, int n_kraus, Rng& rng) {
  if (n_kraus <= 0) throw ValidationError("random_channel: need n_kraus >= 1");
  // Isometry = first dim columns of a Haar unitary on dim * n_kraus.
  Matrix u = haar_unitary(dim * n_kraus, rng);
  std::vector<Matrix> ks(n_kraus, Matrix(dim, dim));
  for (int i = 0; i < n_kraus; ++i)
    ks[i] = u.block(i * dim, 0, dim, dim);
  return Channel::from_kraus(std::move(ks));
}

Channel random_unital_channel(int dim, int n_unitaries, Rng& rng) {
  if (n_unitaries <= 0)
    throw ValidationError("random_unital_channel: need n_unitaries >= 1");
  RealVector w = random_prob_vector(n_unitaries, rng);
  std::vector<Matrix> ks;
  ks.reserve(n_unitaries);
  for (int i = 0; i < n_unitaries; ++i)
    ks.push_back(std::sqrt(w[i]) * haar_unitary(dim, rng));
  return Channel::from_kraus(std::move(ks));
}

Measurement random_rank1_projective(int dim, Rng& rng) {
  Matrix u = haar_unitary(dim, rng);
  std::vector<Matrix> ops;
  ops.reserve(dim);
  for (int a = 0; a < dim; ++a) {
    const Vector col = u.col(a);
    ops.push_back(col * col.adjoint());
  }
  return Measurement::from_ops(std::move(ops));
}

RealVector random_prob_vector(int n, Rng& rng, double floor_frac) {
  if (n <= 0) throw ValidationError("random_prob_vector: n must be positive");
  RealVector p(n);
  for (int i = 0; i < n; ++i) p[i] = -std::log(1.0 - rng.uniform());
  p /= p.sum();
  const double fl = floor_frac / n;
  for (int i = 0; i < n; ++i) p[i] = std::max(p[i], fl);
  p /= p.sum();
  return p;
}

std::vector<std::int64_t> multinomial_sample(const RealVector& p,
                                             std::int64_t shots, Rng& rng) {
  const int n = static_cast<int>(p.size());
  std::vector<std::int64_t> counts(n, 0);
  double remaining_p = 1.0;
  std::int64_t remaining = shots;
  for (int i = 0; i < n - 1 && remaining > 0; ++i) {
    const double cond = std::clamp(p[i] / remaining_p, 0.0, 1.0);
    std::binomial_distribution<std::int64_t> bin(remaining, cond);
    counts[i] = bin(rng.engine());
    remaining -= counts[i];
    remaining_p -= p[i];
    if (remaining_p <= 0) break;
  }
  if (n > 0) counts[n - 1] += remaining;
  return counts;
}

}  // namespace fluxtheo
