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

// Completely positive map in Kraus form, E(X) = sum_i A_i X A_i^dag.
// from_kraus validates trace preservation (sum A^dag A = 1) within
// tolerances().tp unless allow_trace_decreasing is set, which only requires
// sum A^dag A <= 1 (used for conditional maps such as feedback branches).
class Channel {
 public:
  // Empty channel; every factory below returns a usable one.
  Channel() = default;

  static Channel from_kraus(std::vector<Matrix> kraus,
                            bool allow_trace_decreasing = false);
  static Channel unitary(const Matrix& u);
  static Channel identity(int dim);
  // outer(inner(x)); Kraus set is the pairwise product set.
  static Channel compose(const Channel& outer, const Channel& inner);

  int dim() const { return dim_; }
  const std::vector<Matrix>& kraus() const { return kraus_; }

  Matrix apply(const Matrix& x) const;       // sum A x A^dag
  Matrix dual_apply(const Matrix& x) const;  // sum A^dag x A

  double tp_residual() const;        // ||sum A^dag A - 1||_op
  double unitality_residual() const; // ||sum A A^dag - 1||_op = ||E(1) - 1||_op
  bool is_unital(double tol) const { return unitality_residual() <= tol; }

 private:
  Channel(std::vector<Matrix> kraus, int dim) : kraus_(std::move(kraus)), dim_(dim) {}
  std::vector<Matrix> kraus_;
  int dim_ = 0;
};

}  // namespace fluxtheo
