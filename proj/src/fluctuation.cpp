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

#include "fluxtheo/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/tolerances.hpp"

namespace fluxtheo {

void validate_protocol(const ProtocolSpec& spec) {
  const int d = spec.prepared.dim();
  if (spec.channel.dim() != d || spec.final_m.dim() != d)
    throw ValidationError(
        "protocol: state, measurements and channel must share one dimension");
  validate_density(spec.rho, "protocol: rho");
  if (spec.rho.rows() != d)
    throw ValidationError("protocol: rho dimension mismatch");
  if (spec.q.size() != spec.final_m.n_outcomes())
    throw ValidationError(
        "protocol: one reference probability per final outcome");
  double sum = 0;
  for (Eigen::Index b = 0; b < spec.q.size(); ++b) {
    if (spec.q[b] < 0)
      throw ValidationError("protocol: reference probabilities must be >= 0");
    sum += spec.q[b];
  }
  if (std::abs(sum - 1.0) > tolerances().trace) {
    std::ostringstream os;
    os << "protocol: reference probabilities sum to " << sum;
    throw ValidationError(os.str());
  }
}

ForwardStatistics forward_statistics(const ProtocolSpec& spec) {
  validate_protocol(spec);
  ForwardStatistics out;
  out.ensemble = measure_prepare(spec.prepared, spec.rho);
  const int na = spec.prepared.n_outcomes();
  const int nb = spec.final_m.n_outcomes();

  std::vector<Matrix> effects(nb);
  for (int b = 0; b < nb; ++b) effects[b] = spec.final_m.effect(b);

  out.transition = RealMatrix::Zero(nb, na);
  for (int a = 0; a < na; ++a) {
    if (!out.ensemble.has_state[a]) continue;
    const Matrix evolved = spec.channel.apply(out.ensemble.states[a]);
    for (int b = 0; b < nb; ++b) {
      double w = (effects[b] * evolved).trace().real();
      if (w < 0 && w > -tolerances().psd) w = 0;
      out.transition(b, a) = w;
    }
  }

  out.f = RealVector::Zero(nb);
  for (int a = 0; a < na; ++a)
    if (out.ensemble.has_state[a])
      out.f += out.ensemble.probs[a] * out.transition.col(a);

  // dephased-input marginal, defined whether or not every outcome supports a
  // post state
  Matrix rho_p = Matrix::Zero(spec.rho.rows(), spec.rho.cols());
  for (int a = 0; a < na; ++a)
    rho_p += spec.prepared.op(a) * spec.rho * spec.prepared.op(a).adjoint();
  const Matrix evolved_p = spec.channel.apply(rho_p);
  out.f_dephased = RealVector(nb);
  for (int b = 0; b < nb; ++b)
    out.f_dephased[b] = std::max((effects[b] * evolved_p).trace().real(), 0.0);
  return out;
}

namespace {

constexpr double kWeightFloor = 1e-300;

ObservableDistribution atoms_from_stats(const ProtocolSpec& spec,
                                        const ForwardStatistics& fs,
                                        VChoice v) {
  const int na = spec.prepared.n_outcomes();
  const int nb = spec.final_m.n_outcomes();
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(na) * nb);
  for (int a = 0; a < na; ++a) {
    if (!fs.ensemble.has_state[a]) continue;
    const double pa = fs.ensemble.probs[a];
    for (int b = 0; b < nb; ++b) {
      const double w = fs.transition(b, a) * pa;
      if (w <= kWeightFloor) continue;
      double val = 0;
      switch (v) {
        case VChoice::LogPQ:
          if (spec.q[b] <= 0) {
            std::ostringstream os;
            os << "forward_pdf: reference probability is zero on supported "
                  "final outcome '"
               << spec.final_m.label(b) << "'";
            throw DomainError(os.str());
          }
          val = std::log(pa) - std::log(spec.q[b]);
          break;
        case VChoice::LogCondQ:
          if (spec.q[b] <= 0) {
            std::ostringstream os;
            os << "forward_pdf: reference probability is zero on supported "
                  "final outcome '"
               << spec.final_m.label(b) << "'";
            throw DomainError(os.str());
          }
          val = std::log(fs.transition(b, a)) - std::log(spec.q[b]);
          break;
        case VChoice::LogCondF:
          val = std::log(fs.transition(b, a)) - std::log(fs.f_dephased[b]);
          break;
      }
      atoms.push_back({val, w});
    }
  }
  return ObservableDistribution::from_atoms(std::move(atoms),
                                            tolerances().v_merge);
}

}  // namespace

ObservableDistribution forward_pdf(const ProtocolSpec& spec, VChoice v) {
  return atoms_from_stats(spec, forward_statistics(spec), v);
}

ObservableDistribution reverse_pseudo_pdf(const ProtocolSpec& spec) {
  validate_protocol(spec);
  const PreparedEnsemble ens = measure_prepare(spec.prepared, spec.rho);
  const int na = spec.prepared.n_outcomes();
  const int nb = spec.final_m.n_outcomes();
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(na) * nb);
  for (int b = 0; b < nb; ++b) {
    if (spec.q[b] <= 0) continue;  // zero reference weight carries no atom
    const Matrix dual_effect = spec.channel.dual_apply(spec.final_m.effect(b));
    for (int a = 0; a < na; ++a) {
      if (!ens.has_state[a]) continue;
      const double w =
          spec.q[b] * (ens.states[a] * dual_effect).trace().real();
      if (std::abs(w) <= kWeightFloor) continue;
      const double val = std::log(spec.q[b]) - std::log(ens.probs[a]);
      atoms.push_back({val, w});
    }
  }
  return ObservableDistribution::from_atoms(std::move(atoms),
                                            tolerances().v_merge);
}

Efficacy efficacy(const ProtocolSpec& spec) {
  Efficacy out;
  out.atom_route = forward_pdf(spec, VChoice::LogPQ).mgf(-1.0);
  const auto rep = check_microreversible(spec.prepared, spec.final_m);
  out.closed_form_valid = rep.prepared_side_pass;
  const int d = spec.prepared.dim();
  Matrix rho_q = Matrix::Zero(d, d);
  for (int b = 0; b < spec.final_m.n_outcomes(); ++b)
    rho_q += spec.q[b] * spec.final_m.effect(b);
  out.closed_form = spec.channel.dual_apply(rho_q).trace().real();
  out.gamma = out.closed_form_valid ? out.closed_form : out.atom_route;
  return out;
}

double jarzynski_residual(const ProtocolSpec& spec, VChoice v) {
  const double avg = forward_pdf(spec, v).mgf(-1.0);
  if (v == VChoice::LogPQ) return std::abs(avg - efficacy(spec).gamma);
  return std::abs(avg - 1.0);
}

double mgf_projective_closed_form(const Matrix& rho_p, const Matrix& rho_q,
                                  const Channel& channel, double lambda) {
  const Matrix lhs = hermitian_power(rho_q, -lambda);
  const Matrix rhs = channel.apply(hermitian_power(rho_p, lambda + 1.0));
  return (lhs * rhs).trace().real();
}

MgfIdentityCheck mgf_identity_check(const ProtocolSpec& spec, double lambda) {
  MgfIdentityCheck out;
  out.chi_forward = forward_pdf(spec, VChoice::LogPQ).mgf(lambda - 1.0);
  out.chi_reverse = reverse_pseudo_pdf(spec).mgf(-lambda);
  const double scale =
      std::max({std::abs(out.chi_forward), std::abs(out.chi_reverse), 1e-30});
  out.residual = std::abs(out.chi_forward - out.chi_reverse) / scale;

  const double tol = tolerances().meas;
  if (spec.prepared.is_rank1_projective(tol) &&
      spec.final_m.is_rank1_projective(tol)) {
    const int d = spec.prepared.dim();
    const PreparedEnsemble ens = measure_prepare(spec.prepared, spec.rho);
    Matrix rho_p = Matrix::Zero(d, d);
    for (int a = 0; a < spec.prepared.n_outcomes(); ++a)
      rho_p += ens.probs[a] * spec.prepared.op(a);
    Matrix rho_q = Matrix::Zero(d, d);
    for (int b = 0; b < spec.final_m.n_outcomes(); ++b)
      rho_q += spec.q[b] * spec.final_m.op(b);
    const double cf =
        mgf_projective_closed_form(rho_p, rho_q, spec.channel, lambda - 1.0);
    out.closed_form = cf;
    out.closed_form_residual =
        std::abs(cf - out.chi_forward) / std::max({std::abs(cf), 1e-30});
  }
  return out;
}

CrooksCheck crooks_check(const ProtocolSpec& spec,
                         const std::vector<Matrix>& u_alpha,
                         const std::vector<Matrix>& u_beta) {
  validate_protocol(spec);
  CrooksCheck out;
  out.unitality_residual = spec.channel.unitality_residual();
  if (out.unitality_residual > tolerances().tp) {
    std::ostringstream os;
    os << "crooks_check: channel is not unital, ||E(1) - 1|| = "
       << out.unitality_residual
       << "; the reverse protocol would not be trace preserving";
    throw DomainError(os.str());
  }
  const auto rep = check_microreversible(spec.prepared, spec.final_m);
  if (!rep.pass) {
    std::string detail = rep.failures.empty() ? "" : (": " + rep.failures[0]);
    throw DomainError(
        "crooks_check: measurement pair fails the closure conditions" + detail);
  }
  for (Eigen::Index b = 0; b < spec.q.size(); ++b)
    if (spec.q[b] <= 0)
      throw DomainError(
          "crooks_check: reference probabilities must be strictly positive");

  const PreparedEnsemble fw_ens = measure_prepare(spec.prepared, spec.rho);
  for (int a = 0; a < spec.prepared.n_outcomes(); ++a)
    if (fw_ens.probs[a] <= tolerances().p_floor)
      throw DomainError(
          "crooks_check: every prepared outcome needs positive probability");

  const ReverseMeasurements rev = build_reverse_measurements(
      spec.prepared, spec.final_m, spec.q, spec.rho, std::nullopt, u_alpha,
      u_beta);

  // The dual map is itself trace preserving here (that is what unitality
  // means), so the reverse protocol runs through the ordinary forward code.
  std::vector<Matrix> dual_kraus;
  dual_kraus.reserve(spec.channel.kraus().size());
  for (const auto& k : spec.channel.kraus()) dual_kraus.push_back(k.adjoint());
  ProtocolSpec reverse{rev.rho_tilde, rev.prepared,
                       Channel::from_kraus(std::move(dual_kraus)), rev.final_m,
                       fw_ens.probs};

  const ObservableDistribution fwd = forward_pdf(spec, VChoice::LogPQ);
  const ObservableDistribution bwd = forward_pdf(reverse, VChoice::LogPQ);

  // match fwd atom at v with bwd atom at -v
  std::vector<char> used(bwd.size(), 0);
  const double vtol = 10 * tolerances().v_merge;
  for (const auto& atom : fwd.atoms()) {
    const double target = -atom.v;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_i = bwd.size();
    for (std::size_t i = 0; i < bwd.size(); ++i) {
      const double dist = std::abs(bwd.atoms()[i].v - target);
      if (dist < best) {
        best = dist;
        best_i = i;
      }
    }
    const double lhs = atom.p * std::exp(-atom.v);
    if (best_i < bwd.size() && best <= vtol) {
      used[best_i] = 1;
      out.max_atom_residual =
          std::max(out.max_atom_residual, std::abs(lhs - bwd.atoms()[best_i].p));
    } else {
      out.max_atom_residual = std::max(out.max_atom_residual, std::abs(lhs));
    }
    out.atoms_compared++;
  }
  for (std::size_t i = 0; i < bwd.size(); ++i)
    if (!used[i])
      out.max_atom_residual =
          std::max(out.max_atom_residual, std::abs(bwd.atoms()[i].p));
  return out;
}

BistochasticityReport bistochasticity_report(const ProtocolSpec& spec) {
  BistochasticityReport out;
  const ForwardStatistics fs = forward_statistics(spec);
  out.unital = spec.channel.is_unital(tolerances().tp);
  out.microreversible =
      check_microreversible(spec.prepared, spec.final_m).pass;

  const int na = spec.prepared.n_outcomes();
  const int nb = spec.final_m.n_outcomes();
  for (int a = 0; a < na; ++a) {
    if (!fs.ensemble.has_state[a]) continue;
    out.forward_col_residual = std::max(
        out.forward_col_residual, std::abs(fs.transition.col(a).sum() - 1.0));
  }
  for (int b = 0; b < nb; ++b)
    out.forward_row_residual = std::max(
        out.forward_row_residual, std::abs(fs.transition.row(b).sum() - 1.0));

  // adjoint identity, route independent of forward_statistics
  for (int b = 0; b < nb; ++b) {
    const Matrix dual_effect = spec.channel.dual_apply(spec.final_m.effect(b));
    for (int a = 0; a < na; ++a) {
      if (!fs.ensemble.has_state[a]) continue;
      const double via_dual =
          (fs.ensemble.states[a] * dual_effect).trace().real();
      out.symmetry_residual = std::max(
          out.symmetry_residual, std::abs(via_dual - fs.transition(b, a)));
    }
  }

  out.reverse_col_residual = std::numeric_limits<double>::quiet_NaN();
  if (out.unital && out.microreversible) {
    bool positive = true;
    for (Eigen::Index b = 0; b < spec.q.size(); ++b)
      if (spec.q[b] <= 0) positive = false;
    if (positive) {
      const ReverseMeasurements rev = build_reverse_measurements(
          spec.prepared, spec.final_m, spec.q, spec.rho);
      std::vector<Matrix> dual_kraus;
      for (const auto& k : spec.channel.kraus())
        dual_kraus.push_back(k.adjoint());
      ProtocolSpec reverse{rev.rho_tilde, rev.prepared,
                           Channel::from_kraus(std::move(dual_kraus)),
                           rev.final_m, fs.ensemble.probs};
      const ForwardStatistics rs = forward_statistics(reverse);
      out.reverse_col_residual = 0;
      for (int b = 0; b < nb; ++b) {
        if (!rs.ensemble.has_state[b]) continue;
        out.reverse_col_residual =
            std::max(out.reverse_col_residual,
                     std::abs(rs.transition.col(b).sum() - 1.0));
      }
    }
  }
  return out;
}

double gamma_upper_bound(const Channel& channel, const Matrix& rho_q) {
  const int d = channel.dim();
  const double lhs = double(d) * operator_norm(rho_q);
  const double rhs =
      operator_norm(channel.apply(Matrix::Identity(d, d)));
  return std::min(lhs, rhs);
}

double gamma_upper_bound(const ProtocolSpec& spec) {
  const int d = spec.prepared.dim();
  Matrix rho_q = Matrix::Zero(d, d);
  for (int b = 0; b < spec.final_m.n_outcomes(); ++b)
    rho_q += spec.q[b] * spec.final_m.effect(b);
  return gamma_upper_bound(spec.channel, rho_q);
}

EntropyDecomposition entropy_decomposition(
    const ProtocolSpec& spec,
    const std::optional<std::pair<Matrix, double>>& thermal) {
  EntropyDecomposition out;
  const ForwardStatistics fs = forward_statistics(spec);
  const ObservableDistribution pdf =
      atoms_from_stats(spec, fs, VChoice::LogPQ);
  out.mean_v = pdf.mean();

  RealVector p = fs.ensemble.probs;
  out.h_p = shannon_entropy(p);
  out.h_f = shannon_entropy(fs.f);
  const double h_fq = classical_relative_entropy(fs.f, spec.q);
  out.cross_term = classical_cross_entropy(fs.f, spec.q);
  out.rhs_general = h_fq + out.h_f - out.h_p;
  out.general_infinite = !std::isfinite(out.rhs_general);
  out.residual_general = out.general_infinite
                             ? std::numeric_limits<double>::quiet_NaN()
                             : std::abs(out.mean_v - out.rhs_general);

  const double tol = tolerances().meas;
  out.projective = spec.prepared.is_rank1_projective(tol) &&
                   spec.final_m.is_rank1_projective(tol);
  if (!out.projective) return out;

  const int d = spec.prepared.dim();
  Matrix rho_p = Matrix::Zero(d, d);
  for (int a = 0; a < spec.prepared.n_outcomes(); ++a)
    rho_p += spec.prepared.op(a) * spec.rho * spec.prepared.op(a).adjoint();
  Matrix rho_q = Matrix::Zero(d, d);
  for (int b = 0; b < spec.final_m.n_outcomes(); ++b)
    rho_q += spec.q[b] * spec.final_m.op(b);
  const Matrix out_state = spec.channel.apply(rho_p);

  out.s_in = von_neumann_entropy(rho_p);
  out.s_out = von_neumann_entropy(out_state);
  out.s_rel = relative_entropy(out_state, rho_q);
  out.rhs_projective_a = out.s_out - out.s_in + out.s_rel;
  out.projective_a_infinite = !std::isfinite(out.rhs_projective_a);
  out.residual_projective_a =
      out.projective_a_infinite ? std::numeric_limits<double>::quiet_NaN()
                                : std::abs(out.mean_v - out.rhs_projective_a);

  out.s_ref = von_neumann_entropy(rho_q);
  double min_q = std::numeric_limits<double>::infinity();
  bool q_positive = true;
  for (Eigen::Index b = 0; b < spec.q.size(); ++b) {
    if (spec.q[b] <= 0) q_positive = false;
    min_q = std::min(min_q, spec.q[b]);
  }
  if (q_positive) {
    Matrix log_rho_q = Matrix::Zero(d, d);
    for (int b = 0; b < spec.final_m.n_outcomes(); ++b)
      log_rho_q += std::log(spec.q[b]) * spec.final_m.op(b);
    out.heat_like_term = ((rho_q - out_state) * log_rho_q).trace().real();
    out.rhs_projective_b = out.s_ref - out.s_in + out.heat_like_term;
    out.residual_projective_b = std::abs(out.mean_v - out.rhs_projective_b);

    out.heat_term_bound =
        trace_norm(out_state - rho_q) * std::abs(std::log(min_q));
    out.heat_term_bound_holds =
        std::abs(out.heat_like_term) <= out.heat_term_bound + 1e-12;

    if (thermal.has_value()) {
      out.thermal = true;
      const Matrix& hf = thermal->first;
      const double beta = thermal->second;
      out.minus_beta_heat = beta * ((hf * out_state).trace().real() -
                                    (hf * rho_q).trace().real());
      out.residual_thermal =
          std::abs(out.heat_like_term - out.minus_beta_heat);
    }
  } else {
    out.rhs_projective_b = std::numeric_limits<double>::infinity();
    out.residual_projective_b = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

SecondLawCheck second_law_check(const ProtocolSpec& spec) {
  SecondLawCheck out;
  out.mean_v = forward_pdf(spec, VChoice::LogPQ).mean();
  out.gamma = efficacy(spec).gamma;
  out.lower_bound = -std::log(out.gamma);
  out.margin = out.mean_v - out.lower_bound;
  out.holds = out.margin >= -1e-9 * std::max(1.0, std::abs(out.mean_v));
  return out;
}

}  // namespace fluxtheo
