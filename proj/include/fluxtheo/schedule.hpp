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

#include <string>

#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Anneal envelopes A(s), B(s) on the dimensionless time s in [0, 1].
// Tabulated schedules interpolate linearly between knots.
class Schedule {
 public:
  // A(s) = a0 (1 - s), B(s) = b_end s.
  static Schedule linear(double a0, double b_end);
  // Knots must be strictly increasing and span exactly [0, 1].
  static Schedule from_table(RealVector s, RealVector a, RealVector b);
  // CSV with a "s,A,B" header row, values in GHz.
  static Schedule from_csv(const std::string& path);

  double a(double s) const;
  double b(double s) const;
  bool is_linear() const { return linear_; }

 private:
  Schedule() = default;
  bool linear_ = true;
  double a0_ = 0, b_end_ = 0;
  RealVector s_, av_, bv_;
  double interp(const RealVector& v, double s) const;
};

}  // namespace fluxtheo
