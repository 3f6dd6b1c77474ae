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

#include "fluxtheo/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fluxtheo/errors.hpp"

namespace fluxtheo {

ObservableDistribution ObservableDistribution::from_atoms(
    std::vector<Atom> atoms, double merge_tol) {
  for (const auto& a : atoms) {
    if (!std::isfinite(a.v) || !std::isfinite(a.p))
      throw ValidationError("ObservableDistribution: atoms must be finite");
  }
  // Exact zero weights carry nothing and would only perturb the merge step.
  std::erase_if(atoms, [](const Atom& a) { return a.p == 0.0; });
  std::sort(atoms.begin(), atoms.end(),
            [](const Atom& x, const Atom& y) { return x.v < y.v; });
  std::vector<Atom> merged;
  merged.reserve(atoms.size());
  for (const auto& a : atoms) {
    if (!merged.empty() && a.v - merged.back().v <= merge_tol) {
      Atom& m = merged.back();
      const double w = m.p + a.p;
      // weight averaged position; equal weights fall back to the midpoint
      m.v = (std::abs(w) > 0) ? (m.v * m.p + a.v * a.p) / w : 0.5 * (m.v + a.v);
      m.p = w;
    } else {
      merged.push_back(a);
    }
  }
  return ObservableDistribution(std::move(merged));
}

double ObservableDistribution::total() const {
  double s = 0;
  for (const auto& a : atoms_) s += a.p;
  return s;
}

double ObservableDistribution::mean() const {
  double s = 0;
  for (const auto& a : atoms_) s += a.p * a.v;
  return s;
}

double ObservableDistribution::second_moment() const {
  double s = 0;
  for (const auto& a : atoms_) s += a.p * a.v * a.v;
  return s;
}

double ObservableDistribution::mgf(double lambda) const {
  // log-sum-exp over the positive weights, then the (rare) negative weights
  // are subtracted in the shifted frame.
  double top = -std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) {
    if (a.p == 0) continue;
    top = std::max(top, lambda * a.v);
  }
  if (!std::isfinite(top)) return 0;
  double pos = 0, neg = 0;
  for (const auto& a : atoms_) {
    if (a.p == 0) continue;
    const double term = std::exp(lambda * a.v - top);
    if (a.p > 0)
      pos += a.p * term;
    else
      neg += (-a.p) * term;
  }
  const double log_mag = top + std::log(std::max(pos - neg, 0.0));
  if (pos - neg <= 0) return 0;
  if (log_mag > 709.0) return std::numeric_limits<double>::infinity();
  return std::exp(log_mag);
}

}  // namespace fluxtheo
