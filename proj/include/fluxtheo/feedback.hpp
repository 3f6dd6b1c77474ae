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

#include <optional>
#include <vector>

#include "fluxtheo/channels.hpp"
#include "fluxtheo/distribution.hpp"
#include "fluxtheo/fluctuation.hpp"
#include "fluxtheo/measurements.hpp"
#include "fluxtheo/types.hpp"

namespace fluxtheo {

// One feedback branch j: the conditional (trace decreasing) map E_j that
// includes the mid-circuit measurement outcome, the final measurement chosen
// for that record, and its reference distribution q_{b|j}.
struct FeedbackBranch {
  Channel map;           // CP, sum over branches is trace preserving
  Measurement final_m;   // Q_{b|j}
  RealVector q;          // strictly positive, sums to one
};

struct FeedbackProtocol {
  Matrix rho;
  Measurement prepared;  // P, must be rank one projective
  std::vector<FeedbackBranch> branches;
};

void validate_feedback(const FeedbackProtocol& fb);

// Joint outcome observable v = ln(p_a / q_{b|j}).
ObservableDistribution feedback_forward_pdf(const FeedbackProtocol& fb);

// Pseudo distribution through the branch duals: atoms at -v with weights
// Tr[P_a E_j*(rhot_{b|j})] q_{b|j}.
ObservableDistribution feedback_reverse_pseudo_pdf(const FeedbackProtocol& fb);

struct FeedbackEfficacy {
  double atom_route = 0;
  double closed_form = 0;  // sum_j Tr[E_j*(rho_{q|j})]
  double gamma = 0;
};

FeedbackEfficacy feedback_efficacy(const FeedbackProtocol& fb);

struct FeedbackMgf {
  double chi_forward = 0;  // chi(lambda - 1) from the forward atoms
  double middle = 0;       // sum_j Tr[rho_{q|j}^{1-lambda} E_j(rho_p^lambda)]
  double chi_reverse = 0;  // from the pseudo distribution at -lambda
  double max_residual = 0; // largest relative pairwise gap
};

// Requires rank one projective final measurements (the middle expression uses
// matrix powers of rho_{q|j} built from them).
FeedbackMgf feedback_mgf_identity(const FeedbackProtocol& fb, double lambda);

// Measurement-based control loop: measure P, evolve with `pre`, measure the
// projective `mid`, classical readout error sends outcome j to record j' with
// probability confusion(j', j), then apply control u[j'] and measure
// final_m[j'] against q[j']. Identity confusion when absent.
struct UnitaryFeedbackSpec {
  Matrix rho;
  Measurement prepared;            // rank one projective
  Matrix pre;                      // unitary evolution before the mid measurement
  Measurement mid;                 // projective (projector operators)
  std::vector<Matrix> controls;    // one unitary per record j'
  std::vector<Measurement> final_m;
  std::vector<RealVector> q;
  std::optional<RealMatrix> confusion;  // column stochastic p(j' | j)
};

void validate_unitary_feedback(const UnitaryFeedbackSpec& spec);

// Lowers the control loop to branches: branch j' holds Kraus operators
// sqrt(p(j'|k)) u[j'] mid_k pre over true outcomes k.
FeedbackProtocol build_unitary_feedback(const UnitaryFeedbackSpec& spec);

// gamma = sum_{j,j'} p(j'|j) Tr[mid_j u[j']^dag rho_{q|j'} u[j'] mid_j],
// evaluated directly from the spec without touching the branch container.
double unitary_feedback_efficacy_closed_form(const UnitaryFeedbackSpec& spec);

// Observable extended by the measurement information content:
// v = ln(p_a / q_{b|j'}) + ln(p(j'|j) / p(j')), whose exponential average is
// exactly one. p(j') is the true marginal of the executed protocol.
struct MutualInfoResult {
  ObservableDistribution pdf;
  double integral = 0;          // <exp(-v)>, equals 1
  double mean_info = 0;         // average of the information term
  RealMatrix info;              // ln(p(j'|j)/p(j')) table
  RealVector record_marginal;   // p(j')
  Matrix rho_hat;               // sum_{b,j'} p(j') q_{b|j'} u^dag Q u, a state
  double rho_hat_herm_residual = 0;
  double rho_hat_trace_residual = 0;
  double rho_hat_min_eig = 0;
};

MutualInfoResult mutual_info_pdf(const UnitaryFeedbackSpec& spec);

}  // namespace fluxtheo
