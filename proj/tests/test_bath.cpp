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
#include <numbers>

#include "doctest.h"
#include "fluxtheo/bath.hpp"
#include "fluxtheo/errors.hpp"
#include "oracles.hpp"

using namespace fluxtheo;

namespace {
const BathParams kBath{/*beta=*/0.7, /*kappa=*/0.2, /*omega_c=*/3.0};
}

TEST_SUITE("bath") {

TEST_CASE("rate is continuous at zero with value kappa over beta") {
  CHECK(ohmic_rate(kBath, 0.0) == kBath.kappa / kBath.beta);
  CHECK(ohmic_rate(kBath, 1e-10) ==
        doctest::Approx(kBath.kappa / kBath.beta).epsilon(1e-9));
  CHECK(ohmic_rate(kBath, -1e-10) ==
        doctest::Approx(kBath.kappa / kBath.beta).epsilon(1e-9));
}

TEST_CASE("rate matches the defining formula away from zero") {
  for (double w : {0.3, 1.0, 4.7, -0.3, -2.2}) {
    const double direct = kBath.kappa * w * std::exp(-std::abs(w) / kBath.omega_c) /
                          (1.0 - std::exp(-kBath.beta * w));
    CHECK(ohmic_rate(kBath, w) == doctest::Approx(direct).epsilon(1e-14));
    CHECK(ohmic_rate(kBath, w) > 0);
  }
}

TEST_CASE("detailed balance holds to machine precision") {
  for (double w : {1e-6, 0.1, 0.9, 3.3, 17.0}) {
    const double lhs = ohmic_rate(kBath, -w);
    const double rhs = std::exp(-kBath.beta * w) * ohmic_rate(kBath, w);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
  }
}

TEST_CASE("infinite temperature uses the rescaled symmetric limit") {
  BathParams hot = kBath;
  hot.beta = 0;
  CHECK(ohmic_rate(hot, 0.0) == hot.kappa);
  for (double w : {0.4, 2.0, 9.0}) {
    CHECK(ohmic_rate(hot, w) ==
          doctest::Approx(hot.kappa * std::exp(-w / hot.omega_c)).epsilon(1e-14));
    CHECK(ohmic_rate(hot, w) == ohmic_rate(hot, -w));
  }
}

TEST_CASE("rate scales linearly in kappa") {
  BathParams twice = kBath;
  twice.kappa = 2 * kBath.kappa;
  for (double w : {0.0, 0.8, -1.5})
    CHECK(ohmic_rate(twice, w) == doctest::Approx(2 * ohmic_rate(kBath, w)));
}

TEST_CASE("lamb shift agrees with a brute force principal value") {
  // Tail bounds matched to the rate's decay: exp(-w/omega_c) on the right,
  // exp(w (beta + 1/omega_c)) on the left.
  auto gamma = [&](double w) { return ohmic_rate(kBath, w); };
  const double lo = -80.0, hi = 250.0;
  for (double w : {0.0, 0.7, -1.3, 5.0}) {
    const double oracle =
        oracles::pv_integral(gamma, w, lo, hi, 1e-7) / (2.0 * std::numbers::pi);
    const double impl = lamb_shift_integral(kBath, w, 1e-9);
    CHECK(impl == doctest::Approx(oracle).epsilon(2e-6));
  }
}

TEST_CASE("lamb shift of a symmetric rate vanishes at zero frequency") {
  BathParams hot = kBath;
  hot.beta = 0;
  CHECK(std::abs(lamb_shift_integral(hot, 0.0, 1e-10)) < 1e-10);
}

TEST_CASE("lamb shift scales linearly in kappa and is zero without coupling") {
  BathParams twice = kBath;
  twice.kappa = 2 * kBath.kappa;
  const double base = lamb_shift_integral(kBath, 1.1, 1e-10);
  CHECK(lamb_shift_integral(twice, 1.1, 1e-10) ==
        doctest::Approx(2 * base).epsilon(1e-8));

  BathParams off = kBath;
  off.kappa = 0;
  CHECK(lamb_shift_integral(off, 1.1) == 0.0);
}

TEST_CASE("spline table reproduces the integral between knots") {
  LambShiftTable table(kBath, 2.0, 0.05);
  CHECK(table.omega_max() == 2.0);
  // Interior points, including one off the knot grid on each side.
  for (double w : {0.0, 0.512345, -1.27})
    CHECK(std::abs(table(w) - lamb_shift_integral(kBath, w, 1e-10)) < 5e-7);
  // The natural spline end condition costs accuracy only inside the last
  // interval.
  CHECK(std::abs(table(1.999) - lamb_shift_integral(kBath, 1.999, 1e-10)) <
        1e-4);
  CHECK_THROWS_AS(table(2.5), DomainError);
}

TEST_CASE("parameter validation") {
  BathParams bad = kBath;
  bad.omega_c = 0;
  CHECK_THROWS_AS(ohmic_rate(bad, 1.0), ValidationError);
  bad = kBath;
  bad.beta = -0.1;
  CHECK_THROWS_AS(lamb_shift_integral(bad, 1.0), ValidationError);
  CHECK_THROWS_AS(LambShiftTable(kBath, -1.0), ValidationError);
}

}  // TEST_SUITE
