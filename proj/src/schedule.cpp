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

#include "fluxtheo/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "fluxtheo/errors.hpp"

namespace fluxtheo {

Schedule Schedule::linear(double a0, double b_end) {
  if (a0 < 0 || b_end < 0)
    throw ValidationError("Schedule: envelope amplitudes must be >= 0");
  Schedule sch;
  sch.linear_ = true;
  sch.a0_ = a0;
  sch.b_end_ = b_end;
  return sch;
}

Schedule Schedule::from_table(RealVector s, RealVector a, RealVector b) {
  const Eigen::Index n = s.size();
  if (n < 2 || a.size() != n || b.size() != n)
    throw ValidationError("Schedule: table needs at least two aligned rows");
  if (std::abs(s[0]) > 1e-12 || std::abs(s[n - 1] - 1.0) > 1e-12)
    throw ValidationError("Schedule: knots must span exactly [0, 1]");
  for (Eigen::Index i = 1; i < n; ++i)
    if (s[i] <= s[i - 1])
      throw ValidationError("Schedule: knots must be strictly increasing");
  for (Eigen::Index i = 0; i < n; ++i)
    if (a[i] < 0 || b[i] < 0)
      throw ValidationError("Schedule: envelope values must be >= 0");
  Schedule sch;
  sch.linear_ = false;
  sch.s_ = std::move(s);
  sch.av_ = std::move(a);
  sch.bv_ = std::move(b);
  return sch;
}

Schedule Schedule::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("Schedule: cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line))
    throw ValidationError("Schedule: '" + path + "' is empty");
  // tolerate whitespace and an optional header
  auto parse_row = [](const std::string& row, double out[3]) {
    std::istringstream is(row);
    std::string cell;
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(is, cell, ',')) return false;
      try {
        std::size_t used = 0;
        out[k] = std::stod(cell, &used);
      } catch (...) {
        return false;
      }
    }
    return true;
  };
  std::vector<double> ss, aa, bb;
  double row[3];
  if (parse_row(line, row)) {
    ss.push_back(row[0]);
    aa.push_back(row[1]);
    bb.push_back(row[2]);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (!parse_row(line, row))
      throw ValidationError("Schedule: bad row in '" + path + "': " + line);
    ss.push_back(row[0]);
    aa.push_back(row[1]);
    bb.push_back(row[2]);
  }
  if (ss.size() < 2)
    throw ValidationError("Schedule: '" + path + "' needs at least two rows");
  const Eigen::Index n = static_cast<Eigen::Index>(ss.size());
  RealVector s(n), a(n), b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    s[i] = ss[i];
    a[i] = aa[i];
    b[i] = bb[i];
  }
  return from_table(std::move(s), std::move(a), std::move(b));
}

double Schedule::interp(const RealVector& v, double s) const {
  if (s <= s_[0]) return v[0];
  const Eigen::Index n = s_.size();
  if (s >= s_[n - 1]) return v[n - 1];
  Eigen::Index lo = 0, hi = n - 1;
  while (hi - lo > 1) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (s_[mid] <= s)
      lo = mid;
    else
      hi = mid;
  }
  const double t = (s - s_[lo]) / (s_[hi] - s_[lo]);
  return (1 - t) * v[lo] + t * v[hi];
}

double Schedule::a(double s) const {
  if (s < -1e-12 || s > 1 + 1e-12)
    throw DomainError("Schedule: s outside [0, 1]");
  if (linear_) return a0_ * (1.0 - std::clamp(s, 0.0, 1.0));
  return interp(av_, s);
}

double Schedule::b(double s) const {
  if (s < -1e-12 || s > 1 + 1e-12)
    throw DomainError("Schedule: s outside [0, 1]");
  if (linear_) return b_end_ * std::clamp(s, 0.0, 1.0);
  return interp(bv_, s);
}

}  // namespace fluxtheo
