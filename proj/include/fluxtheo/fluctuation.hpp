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

#include "fluxtheo/channels.hpp"
#include "fluxtheo/distribution.hpp"
#include "fluxtheo/measurements.hpp"
#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Observable assigned to an outcome pair (a, b):
//   LogPQ   v = ln(p_a / q_b)
//   LogCondQ v = ln(p_{b|a} / q_b)
//   LogCondF v = ln(p_{b|a} / f_b)
enum class VChoice { LogPQ, LogCondQ, LogCondF };

// Two point protocol: measure P on rho, send the post state through the
// channel, measure Q, score against the reference distribution q.
struct ProtocolSpec {
  Matrix rho;
  Measurement prepared;  // P
  Channel channel;
  Measurement final_m;   // Q
  RealVector q;
};

// Shape and state validation shared by every protocol entry point. q must be
// strictly positive and sum to one within tolerances().trace.
void validate_protocol(const ProtocolSpec& spec);

struct ForwardStatistics {
  PreparedEnsemble ensemble;  // p_a and post states
  RealMatrix transition;      // (b, a) conditional probabilities, column stochastic
  RealVector f;               // marginal final distribution f_b = sum_a p_{b|a} p_a
  RealVector f_dephased;      // f through the dephased input, Tr[Q^dag Q E(rho_p)]
};

ForwardStatistics forward_statistics(const ProtocolSpec& spec);

// Forward distribution of v. Outcomes with p_a <= p_floor contribute nothing
// (their conditional column is undefined); a zero reference probability on a
// supported outcome raises DomainError naming the outcome.
ObservableDistribution forward_pdf(const ProtocolSpec& spec, VChoice v);

// Pseudo distribution of the reverse process through the dual map: atoms at
// -v_{ab} with weights Tr[rho_a E*(rhot_b)] q_b where rhot_b = Q^dag Q.
// Its total is the efficacy gamma. LogPQ observable only.
ObservableDistribution reverse_pseudo_pdf(const ProtocolSpec& spec);

struct Efficacy {
  double atom_route = 0;           // <exp(-v)> from the forward distribution
  double closed_form = 0;          // Tr[E*(rho_q)], rho_q = sum_b q_b Q^dag Q
  bool closed_form_valid = false;  // requires the microreversible pair
  double gamma = 0;                // the value to use
};

// gamma = <exp(-v)> for the LogPQ observable. The closed form requires the
// (P, Q) pair to pass check_microreversible; when valid both routes are
// computed and gamma is the closed form.
Efficacy efficacy(const ProtocolSpec& spec);

// |<exp(-v)> - target|: target is gamma for LogPQ and exactly 1 for the two
// conditional observables.
double jarzynski_residual(const ProtocolSpec& spec, VChoice v);

// chi(lambda) = Tr[rho_q^{-lambda} E(rho_p^{lambda+1})] for rank one
// projective P, Q with rho_p = sum p_a P_a and rho_q = sum q_b Q_b.
// DomainError when a needed negative power hits a singular state.
double mgf_projective_closed_form(const Matrix& rho_p, const Matrix& rho_q,
                                  const Channel& channel, double lambda);

struct MgfIdentityCheck {
  double chi_forward = 0;     // chi_E(lambda - 1)
  double chi_reverse = 0;     // chit_{E*}(-lambda) from the pseudo distribution
  double residual = 0;        // relative gap between the two routes
  std::optional<double> closed_form;  // projective expression when applicable
  double closed_form_residual = 0;
};

MgfIdentityCheck mgf_identity_check(const ProtocolSpec& spec, double lambda);

struct CrooksCheck {
  double unitality_residual = 0;  // ||E(1) - 1||, small by admission
  double max_atom_residual = 0;   // max |P(v) e^{-v} - Pr(-v)| over atoms
  int atoms_compared = 0;
};

// Executes the reverse protocol (reverse measurements from
// build_reverse_measurements, dual map, Born rule) and compares atom by atom
// with the forward distribution. Throws DomainError naming the unitality
// residual when the channel is not unital, since the reverse protocol is then
// not trace preserving.
CrooksCheck crooks_check(const ProtocolSpec& spec,
                         const std::vector<Matrix>& u_alpha = {},
                         const std::vector<Matrix>& u_beta = {});

struct BistochasticityReport {
  bool unital = false;
  bool microreversible = false;
  double forward_col_residual = 0;  // always ~0: columns of p_{b|a}
  double forward_row_residual = 0;  // ~0 iff unital (given microreversibility)
  double reverse_col_residual = 0;  // executed reverse transition columns
  double symmetry_residual = 0;     // max |p_{b|a} - pr_{a|b}|
};

BistochasticityReport bistochasticity_report(const ProtocolSpec& spec);

// d * min(||rho_q||_op, ||E(1/d)||_op), an upper bound for gamma.
double gamma_upper_bound(const Channel& channel, const Matrix& rho_q);
double gamma_upper_bound(const ProtocolSpec& spec);

// Decomposition of <v> for the LogPQ observable, together with the projective
// entropy identities when P and Q are rank one projective.
struct EntropyDecomposition {
  double mean_v = 0;

  // generalized split, valid for any protocol:
  // <v> = H(f||q) + H(f) - H(p), f the dephased-input marginal
  double cross_term = 0;   // -sum_b f_b ln q_b
  double h_f = 0;
  double h_p = 0;
  double rhs_general = 0;
  double residual_general = 0;
  bool general_infinite = false;

  // projective identity (a): S(E(rho_p)) - S(rho_p) + S(E(rho_p) || rho_q)
  bool projective = false;
  double s_out = 0;
  double s_in = 0;
  double s_rel = 0;
  double rhs_projective_a = 0;
  double residual_projective_a = 0;
  bool projective_a_infinite = false;

  // projective identity (b): S(rho_q) - S(rho_p) + Tr[(rho_q - E(rho_p)) ln rho_q]
  double s_ref = 0;
  double heat_like_term = 0;  // Tr[(rho_q - E(rho_p)) ln rho_q]
  double rhs_projective_b = 0;
  double residual_projective_b = 0;

  // thermal reading of the heat like term when (H_final, beta) is supplied:
  // heat_like_term = beta (Tr[H E(rho_p)] - Tr[H rho_q]) = -beta Q
  bool thermal = false;
  double minus_beta_heat = 0;
  double residual_thermal = 0;

  // reported bound: |heat_like_term| <= ||E(rho_p) - rho_q||_1 |ln min_b q_b|
  double heat_term_bound = 0;
  bool heat_term_bound_holds = false;
};

EntropyDecomposition entropy_decomposition(
    const ProtocolSpec& spec,
    const std::optional<std::pair<Matrix, double>>& thermal = std::nullopt);

struct SecondLawCheck {
  double mean_v = 0;
  double gamma = 0;
  double lower_bound = 0;  // -ln gamma
  double margin = 0;       // mean_v - lower_bound, >= 0 up to roundoff
  bool holds = false;
};

SecondLawCheck second_law_check(const ProtocolSpec& spec);

}  // namespace fluxtheo
