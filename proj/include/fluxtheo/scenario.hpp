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
#include <optional>
#include <string>

#include "json.hpp"

#include "fluxtheo/ame.hpp"
#include "fluxtheo/feedback.hpp"
#include "fluxtheo/fluctuation.hpp"
#include "fluxtheo/types.hpp"

namespace fluxtheo {

using Json = nlohmann::json;

// Matrices are serialized as row lists of [re, im] pairs.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& what);

Json load_json_file(const std::string& path);

// Floats rendered with 17 significant digits so values round trip exactly.
std::string format_g17(double x);

ProtocolSpec protocol_from_json(const Json& j);
UnitaryFeedbackSpec feedback_from_json(const Json& j);
// base_dir resolves relative schedule file references.
AnnealSpec anneal_from_json(const Json& j, const std::string& base_dir);
Json anneal_to_json(const AnnealSpec& spec);

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> ode_tol;
  std::optional<std::string> schedule_csv;
};

// Throws ValidationError on malformed scenarios; returns the scenario kind.
std::string validate_scenario(const Json& scenario, const std::string& base_dir);

// Runs a scenario of kind "protocol", "feedback", "anneal" or "fit".
// Writes results.json (and trajectory.csv plus counts.csv for anneal runs)
// under out_dir, returns the results document.
Json run_scenario(const Json& scenario, const std::string& base_dir,
                  const std::string& out_dir, const RunOverrides& ovr);

}  // namespace fluxtheo
