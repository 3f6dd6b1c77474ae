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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "fluxtheo/errors.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/random.hpp"
#include "oracles.hpp"

using namespace fluxtheo;

TEST_SUITE("linalg") {

TEST_CASE("eig_hermitian reconstructs and sorts") {
  Rng rng(11);
  for (int d : {2, 3, 5}) {
    Matrix g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = rng.cnormal();
    Matrix h = g + g.adjoint();
    Spectrum s = eig_hermitian(h);
    Matrix back = s.vectors * s.values.asDiagonal() * s.vectors.adjoint();
    CHECK((back - h).cwiseAbs().maxCoeff() < 1e-12);
    for (Eigen::Index i = 1; i < s.values.size(); ++i)
      CHECK(s.values[i] >= s.values[i - 1]);
    Matrix overlap = s.vectors.adjoint() * s.vectors;
    CHECK((overlap - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("eig_hermitian rejects non hermitian and non square input") {
  Matrix m(2, 2);
  m << 1, 2, 3, 4;  // real but asymmetric
  CHECK_THROWS_AS(eig_hermitian(m), ValidationError);
  CHECK_THROWS_AS(eig_hermitian(Matrix::Zero(4, 1)), ValidationError);
  CHECK_THROWS_AS(eig_hermitian(Matrix()), ValidationError);
}

TEST_CASE("hermitian_power matches direct spectral arithmetic") {
  Rng rng(12);
  Matrix rho = random_density(3, rng);
  Matrix sq = hermitian_power(rho, 0.5);
  CHECK((sq * sq - rho).cwiseAbs().maxCoeff() < 1e-10);

  // Negative powers on a singular state must refuse.
  Matrix proj = Matrix::Zero(2, 2);
  proj(0, 0) = 1.0;
  CHECK_THROWS_AS(hermitian_power(proj, -0.5), DomainError);
}

TEST_CASE("entropy of a known diagonal state") {
  Matrix rho = Matrix::Zero(2, 2);
  rho(0, 0) = 0.7;
  rho(1, 1) = 0.3;
  // -0.7 ln 0.7 - 0.3 ln 0.3
  CHECK(von_neumann_entropy(rho) == doctest::Approx(0.6108643020548935).epsilon(1e-12));
  CHECK(von_neumann_entropy(Matrix::Identity(4, 4) / 4.0) ==
        doctest::Approx(1.3862943611198906).epsilon(1e-12));

  // Basis invariance.
  Rng rng(13);
  Matrix u = haar_unitary(2, rng);
  CHECK(von_neumann_entropy(u * rho * u.adjoint()) ==
        doctest::Approx(0.6108643020548935).epsilon(1e-10));
}

TEST_CASE("relative entropy against the classical oracle") {
  Rng rng(14);
  // Commuting pair: S(rho||sigma) reduces to the classical divergence.
  RealVector p = random_prob_vector(4, rng);
  RealVector q = random_prob_vector(4, rng);
  Matrix rho = Matrix::Zero(4, 4), sig = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    rho(i, i) = p[i];
    sig(i, i) = q[i];
  }
  CHECK(relative_entropy(rho, sig) ==
        doctest::Approx(oracles::kl(p, q)).epsilon(1e-10));

  // Unitary covariance in the genuinely noncommuting case.
  Matrix a = random_density(3, rng), b = random_density(3, rng);
  Matrix u = haar_unitary(3, rng);
  CHECK(relative_entropy(u * a * u.adjoint(), u * b * u.adjoint()) ==
        doctest::Approx(relative_entropy(a, b)).epsilon(1e-9));
  CHECK(relative_entropy(a, a) == doctest::Approx(0.0).epsilon(1e-10));
  CHECK(relative_entropy(a, b) >= -1e-12);
}

TEST_CASE("relative entropy is infinite outside the support") {
  Matrix rho = Matrix::Identity(2, 2) / 2.0;
  Matrix proj = Matrix::Zero(2, 2);
  proj(0, 0) = 1.0;
  CHECK(std::isinf(relative_entropy(rho, proj)));
}

TEST_CASE("classical entropy helpers agree with direct sums") {
  Rng rng(15);
  RealVector p = random_prob_vector(6, rng);
  RealVector q = random_prob_vector(6, rng);
  CHECK(shannon_entropy(p) == doctest::Approx(oracles::shannon(p)).epsilon(1e-13));
  CHECK(classical_relative_entropy(p, q) ==
        doctest::Approx(oracles::kl(p, q)).epsilon(1e-13));
  CHECK(classical_cross_entropy(p, q) ==
        doctest::Approx(oracles::shannon(p) + oracles::kl(p, q)).epsilon(1e-12));
}

TEST_CASE("gibbs state and partition function consistency") {
  Rng rng(16);
  Matrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.cnormal();
  Matrix h = g + g.adjoint();
  const double beta = 0.7;

  Matrix rho = gibbs_state(h, beta);
  validate_density(rho, "gibbs");

  // Direct route through the spectrum.
  Spectrum s = eig_hermitian(h);
  double z = 0;
  for (int i = 0; i < 3; ++i) z += std::exp(-beta * s.values[i]);
  CHECK(log_partition_function(h, beta) == doctest::Approx(std::log(z)).epsilon(1e-12));
  CHECK(log_partition_from_levels(s.values, beta) ==
        doctest::Approx(std::log(z)).epsilon(1e-12));
  CHECK(free_energy(h, beta) == doctest::Approx(-std::log(z) / beta).epsilon(1e-12));

  Matrix direct = Matrix::Zero(3, 3);
  for (int i = 0; i < 3; ++i)
    direct += std::exp(-beta * s.values[i]) / z *
              (s.vectors.col(i) * s.vectors.col(i).adjoint());
  CHECK((rho - direct).cwiseAbs().maxCoeff() < 1e-12);

  // beta = 0 is maximally mixed; beta < 0 refuses.
  Matrix flat = gibbs_state(h, 0.0);
  CHECK((flat - Matrix::Identity(3, 3) / 3.0).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(gibbs_state(h, -1.0), DomainError);
  CHECK_THROWS_AS(free_energy(h, 0.0), DomainError);
}

TEST_CASE("log partition survives huge beta without overflow") {
  Matrix h = Matrix::Zero(2, 2);
  h(0, 0) = -500.0;
  h(1, 1) = 500.0;
  const double lnz = log_partition_function(h, 50.0);
  CHECK(std::isfinite(lnz));
  CHECK(lnz == doctest::Approx(50.0 * 500.0).epsilon(1e-12));
}

TEST_CASE("norms agree with singular value sums") {
  Rng rng(17);
  Matrix g(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.cnormal();
  Eigen::JacobiSVD<Matrix> svd(g);
  CHECK(trace_norm(g) == doctest::Approx(svd.singularValues().sum()).epsilon(1e-12));
  CHECK(operator_norm(g) ==
        doctest::Approx(svd.singularValues().maxCoeff()).epsilon(1e-12));
  Matrix rho = random_density(3, rng);
  CHECK(purity(rho) ==
        doctest::Approx((rho * rho).trace().real()).epsilon(1e-13));
}

TEST_CASE("validate_density catches each defect") {
  Matrix ok = Matrix::Identity(2, 2) / 2.0;
  CHECK_NOTHROW(validate_density(ok, "ok"));

  Matrix bad_trace = Matrix::Identity(2, 2);
  CHECK_THROWS_AS(validate_density(bad_trace, "trace"), ValidationError);

  Matrix bad_herm(2, 2);
  bad_herm << 0.5, 0.3, -0.3, 0.5;
  CHECK_THROWS_AS(validate_density(bad_herm, "herm"), ValidationError);

  Matrix bad_psd(2, 2);
  bad_psd << 1.2, 0.0, 0.0, -0.2;
  CHECK_THROWS_AS(validate_density(bad_psd, "psd"), ValidationError);
}

}  // TEST_SUITE
