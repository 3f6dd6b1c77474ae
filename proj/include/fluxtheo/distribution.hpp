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

#include <vector>

#include "fluxtheo/types.hpp"

namespace fluxtheo {

struct Atom {
  double v = 0;  // observable value
  double p = 0;  // weight
};

// Discrete distribution of a protocol observable: a sorted list of atoms.
// Atoms whose v values agree within merge_tol are combined, with v replaced
// by the weight average. The weights need not sum to one; pseudo
// distributions carry their raw total.
class ObservableDistribution {
 public:
  ObservableDistribution() = default;

  static ObservableDistribution from_atoms(std::vector<Atom> atoms,
                                           double merge_tol);

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::size_t size() const { return atoms_.size(); }

  double total() const;          // sum of weights
  double mean() const;           // sum p v (unnormalized first moment)
  double second_moment() const;  // sum p v^2

  // sum_p exp(lambda v), evaluated with a log-sum-exp over positive-weight
  // atoms. Returns +infinity instead of overflowing.
  double mgf(double lambda) const;

 private:
  explicit ObservableDistribution(std::vector<Atom> atoms)
      : atoms_(std::move(atoms)) {}
  std::vector<Atom> atoms_;
};

}  // namespace fluxtheo
