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
#include <string>
#include <vector>

namespace fluxtheo {

struct CriterionResult {
  int index = 0;
  std::string name;
  bool pass = false;
  std::string detail;   // worst residuals, counts, timings
  double seconds = 0;
};

inline constexpr int kNumCriteria = 10;

// Runs one of the ten release gates. quick shrinks the workload for the CLI
// selftest; the acceptance binary always runs the full version. Workloads
// with a stated wall clock budget fail when they exceed it.
CriterionResult run_criterion(int index, std::uint64_t seed, bool quick);

std::vector<CriterionResult> run_all_criteria(std::uint64_t seed, bool quick);

std::string format_criterion_line(const CriterionResult& r);

}  // namespace fluxtheo
