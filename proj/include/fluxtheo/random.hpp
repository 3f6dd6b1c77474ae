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

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "fluxtheo/channels.hpp"
#include "fluxtheo/measurements.hpp"
#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Seeded generator for reproducible fixtures and sampling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform() { return unif_(gen_); }
  double normal() { return norm_(gen_); }
  Complex cnormal() { return {norm_(gen_), norm_(gen_)}; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

// QR of a complex Ginibre matrix with the phase convention fixed, Haar
// distributed.
Matrix haar_unitary(int dim, Rng& rng);

// G G^dag / Tr, mixed with the maximally mixed state so the smallest
// eigenvalue stays well away from zero.
Matrix random_density(int dim, Rng& rng, double mix = 0.1);

// Trace preserving channel from a Haar random Stinespring isometry with
// n_kraus environment levels. Generally not unital.
Channel random_channel(int dim, int n_kraus, Rng& rng);

// Convex mixture of Haar random unitaries: unital and trace preserving.
Channel random_unital_channel(int dim, int n_unitaries, Rng& rng);

// Rank one projectors onto a Haar random orthonormal basis.
Measurement random_rank1_projective(int dim, Rng& rng);

// Strictly positive probability vector; entries are floored at floor_frac/n
// before renormalization.
RealVector random_prob_vector(int n, Rng& rng, double floor_frac = 0.05);

// Multinomial counts by repeated binomial splitting.
std::vector<std::int64_t> multinomial_sample(const RealVector& p,
                                             std::int64_t shots, Rng& rng);

}  // namespace fluxtheo
