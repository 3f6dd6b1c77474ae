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
#include <string>
#include <vector>

#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Generalized measurement given by operators {M_a} with sum M^dag M = 1
// (validated within tolerances().meas). Outcome a on state rho has
// probability Tr[M^dag M rho] and post state M rho M^dag / p.
class Measurement {
 public:
  // Empty measurement; from_ops is the real constructor.
  Measurement() = default;

  static Measurement from_ops(std::vector<Matrix> ops,
                              std::vector<std::string> labels = {});

  int n_outcomes() const { return static_cast<int>(ops_.size()); }
  int dim() const { return dim_; }
  const Matrix& op(int a) const { return ops_[a]; }
  const std::vector<Matrix>& ops() const { return ops_; }
  const std::string& label(int a) const { return labels_[a]; }

  Matrix effect(int a) const;  // M_a^dag M_a

  // True when every operator is a rank one orthogonal projector and the
  // outcome count equals the dimension.
  bool is_rank1_projective(double tol) const;

 private:
  Measurement(std::vector<Matrix> ops, std::vector<std::string> labels, int dim)
      : ops_(std::move(ops)), labels_(std::move(labels)), dim_(dim) {}
  std::vector<Matrix> ops_;
  std::vector<std::string> labels_;
  int dim_ = 0;
};

// Outcome probabilities and post states of a measure-then-prepare step.
// Probabilities are kept exactly as computed (no flooring, no renormalizing);
// the post state is only defined where p_a > tolerances().p_floor, flagged by
// has_state.
struct PreparedEnsemble {
  RealVector probs;
  std::vector<Matrix> states;
  std::vector<bool> has_state;
};

PreparedEnsemble measure_prepare(const Measurement& m, const Matrix& rho);

// Result of testing the pair (P, Q) for the two closure conditions that the
// reverse protocol construction needs: every post state of P is independent
// of the input state and those constants sum to the identity, and every
// effect of Q has unit trace. Both measurements must have exactly dim
// outcomes.
struct MicroreversibilityReport {
  bool pass = false;
  bool prepared_side_pass = false;  // P condition
  bool final_side_pass = false;     // Q condition
  bool outcome_count_ok = false;
  double prep_residual = 0;        // max over outcomes and basis elements
  double prep_sum_residual = 0;    // || sum_a C_a - 1 ||_op
  double final_trace_residual = 0; // max_b |Tr[Q^dag Q] - 1|
  std::vector<std::string> failures;
};

// The state independence of P's post states is linear once written as
// P_a X P_a^dag = Tr[P_a^dag P_a X] C_a with C_a = P_a P_a^dag / Tr[P_a^dag P_a],
// so it is checked exactly on the d^2 hermitian basis elements.
MicroreversibilityReport check_microreversible(const Measurement& p,
                                               const Measurement& q,
                                               double tol = 1e-9);

struct ReverseMeasurements {
  Measurement prepared;  // reverse first measurement, built from Q and q
  Measurement final_m;   // reverse final measurement, built from P and rho
  Matrix rho_tilde;      // reverse input state actually used
};

// Builds the reverse protocol measurements
//   Qr_b = sqrt(q_b) Q_b^dag Ub rho_tilde^{-1/2},
//   Pr_a = Ua sqrt(rho) P_a^dag / sqrt(p_a),
// where p_a are the forward outcome probabilities on rho. The unitaries
// default to the identity. When rho_tilde is not given it is taken as
// sum_b q_b Ub^dag Q_b Q_b^dag Ub, the unique choice that makes the reverse
// first measurement complete; a supplied rho_tilde is validated against that
// completeness requirement instead.
ReverseMeasurements build_reverse_measurements(
    const Measurement& p, const Measurement& q, const RealVector& qprobs,
    const Matrix& rho, const std::optional<Matrix>& rho_tilde = std::nullopt,
    const std::vector<Matrix>& u_alpha = {},
    const std::vector<Matrix>& u_beta = {});

}  // namespace fluxtheo
