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

#include "fluxtheo/feedback.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/tolerances.hpp"

namespace fluxtheo {

namespace {

constexpr double kWeightFloor = 1e-300;

void check_prob_vector(const RealVector& q, const char* who) {
  double sum = 0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    if (q[i] <= 0) {
      std::ostringstream os;
      os << who << ": reference probabilities must be strictly positive";
      throw ValidationError(os.str());
    }
    sum += q[i];
  }
  if (std::abs(sum - 1.0) > tolerances().trace) {
    std::ostringstream os;
    os << who << ": reference probabilities sum to " << sum;
    throw ValidationError(os.str());
  }
}

}  // namespace

void validate_feedback(const FeedbackProtocol& fb) {
  const int d = fb.prepared.dim();
  validate_density(fb.rho, "feedback: rho");
  if (fb.rho.rows() != d)
    throw ValidationError("feedback: rho dimension mismatch");
  if (!fb.prepared.is_rank1_projective(tolerances().meas))
    throw ValidationError(
        "feedback: the first measurement must be rank one projective");
  if (fb.branches.empty())
    throw ValidationError("feedback: need at least one branch");
  Matrix acc = Matrix::Zero(d, d);
  for (std::size_t j = 0; j < fb.branches.size(); ++j) {
    const auto& br = fb.branches[j];
    if (br.map.dim() != d || br.final_m.dim() != d)
      throw ValidationError("feedback: branch dimension mismatch");
    if (br.q.size() != br.final_m.n_outcomes())
      throw ValidationError(
          "feedback: one reference probability per final outcome per branch");
    check_prob_vector(br.q, "feedback");
    for (const auto& k : br.map.kraus()) acc += k.adjoint() * k;
  }
  const double res = operator_norm(acc - Matrix::Identity(d, d));
  if (res > tolerances().tp) {
    std::ostringstream os;
    os << "feedback: branch maps must sum to a trace preserving map, residual "
       << res;
    throw ValidationError(os.str());
  }
}

ObservableDistribution feedback_forward_pdf(const FeedbackProtocol& fb) {
  validate_feedback(fb);
  const PreparedEnsemble ens = measure_prepare(fb.prepared, fb.rho);
  std::vector<Atom> atoms;
  for (int a = 0; a < fb.prepared.n_outcomes(); ++a) {
    if (!ens.has_state[a]) continue;
    const double pa = ens.probs[a];
    for (const auto& br : fb.branches) {
      const Matrix evolved = br.map.apply(ens.states[a]);
      for (int b = 0; b < br.final_m.n_outcomes(); ++b) {
        const double w =
            pa * (br.final_m.effect(b) * evolved).trace().real();
        if (w <= kWeightFloor) continue;
        atoms.push_back({std::log(pa) - std::log(br.q[b]), w});
      }
    }
  }
  return ObservableDistribution::from_atoms(std::move(atoms),
                                            tolerances().v_merge);
}

ObservableDistribution feedback_reverse_pseudo_pdf(const FeedbackProtocol& fb) {
  validate_feedback(fb);
  const PreparedEnsemble ens = measure_prepare(fb.prepared, fb.rho);
  std::vector<Atom> atoms;
  for (const auto& br : fb.branches) {
    for (int b = 0; b < br.final_m.n_outcomes(); ++b) {
      const Matrix dual_effect = br.map.dual_apply(br.final_m.effect(b));
      for (int a = 0; a < fb.prepared.n_outcomes(); ++a) {
        if (!ens.has_state[a]) continue;
        const double w =
            br.q[b] * (ens.states[a] * dual_effect).trace().real();
        if (std::abs(w) <= kWeightFloor) continue;
        atoms.push_back({std::log(br.q[b]) - std::log(ens.probs[a]), w});
      }
    }
  }
  return ObservableDistribution::from_atoms(std::move(atoms),
                                            tolerances().v_merge);
}

FeedbackEfficacy feedback_efficacy(const FeedbackProtocol& fb) {
  FeedbackEfficacy out;
  out.atom_route = feedback_forward_pdf(fb).mgf(-1.0);
  const int d = fb.prepared.dim();
  double acc = 0;
  for (const auto& br : fb.branches) {
    Matrix rho_q = Matrix::Zero(d, d);
    for (int b = 0; b < br.final_m.n_outcomes(); ++b)
      rho_q += br.q[b] * br.final_m.effect(b);
    acc += br.map.dual_apply(rho_q).trace().real();
  }
  out.closed_form = acc;
  out.gamma = acc;
  return out;
}

FeedbackMgf feedback_mgf_identity(const FeedbackProtocol& fb, double lambda) {
  validate_feedback(fb);
  FeedbackMgf out;
  out.chi_forward = feedback_forward_pdf(fb).mgf(lambda - 1.0);
  out.chi_reverse = feedback_reverse_pseudo_pdf(fb).mgf(-lambda);

  const PreparedEnsemble ens = measure_prepare(fb.prepared, fb.rho);
  const int d = fb.prepared.dim();
  Matrix rho_p = Matrix::Zero(d, d);
  for (int a = 0; a < fb.prepared.n_outcomes(); ++a)
    rho_p += ens.probs[a] * fb.prepared.op(a);
  const Matrix rho_p_pow = hermitian_power(rho_p, lambda);
  double mid = 0;
  for (const auto& br : fb.branches) {
    if (!br.final_m.is_rank1_projective(tolerances().meas))
      throw DomainError(
          "feedback_mgf_identity: final measurements must be rank one "
          "projective");
    Matrix rho_q = Matrix::Zero(d, d);
    for (int b = 0; b < br.final_m.n_outcomes(); ++b)
      rho_q += br.q[b] * br.final_m.op(b);
    mid += (hermitian_power(rho_q, 1.0 - lambda) * br.map.apply(rho_p_pow))
               .trace()
               .real();
  }
  out.middle = mid;

  const double scale = std::max(
      {std::abs(out.chi_forward), std::abs(out.middle),
       std::abs(out.chi_reverse), 1e-30});
  out.max_residual =
      std::max({std::abs(out.chi_forward - out.middle),
                std::abs(out.middle - out.chi_reverse),
                std::abs(out.chi_forward - out.chi_reverse)}) /
      scale;
  return out;
}

void validate_unitary_feedback(const UnitaryFeedbackSpec& spec) {
  const int d = spec.prepared.dim();
  validate_density(spec.rho, "unitary feedback: rho");
  if (spec.rho.rows() != d)
    throw ValidationError("unitary feedback: rho dimension mismatch");
  if (!spec.prepared.is_rank1_projective(tolerances().meas))
    throw ValidationError(
        "unitary feedback: the first measurement must be rank one projective");
  if (spec.pre.rows() != d || spec.pre.cols() != d)
    throw ValidationError("unitary feedback: evolution dimension mismatch");
  if (operator_norm(spec.pre.adjoint() * spec.pre - Matrix::Identity(d, d)) >
      tolerances().tp)
    throw ValidationError("unitary feedback: evolution must be unitary");
  if (spec.mid.dim() != d)
    throw ValidationError("unitary feedback: mid measurement dimension");
  for (int j = 0; j < spec.mid.n_outcomes(); ++j) {
    const Matrix& m = spec.mid.op(j);
    if (hermiticity_residual(m) > tolerances().meas ||
        (m * m - m).cwiseAbs().maxCoeff() > 1e-9)
      throw ValidationError(
          "unitary feedback: mid measurement operators must be projectors");
  }
  const std::size_t n_rec = spec.controls.size();
  if (n_rec == 0)
    throw ValidationError("unitary feedback: need at least one control");
  if (spec.final_m.size() != n_rec || spec.q.size() != n_rec)
    throw ValidationError(
        "unitary feedback: one final measurement and reference per record");
  for (std::size_t r = 0; r < n_rec; ++r) {
    const Matrix& u = spec.controls[r];
    if (u.rows() != d || u.cols() != d ||
        operator_norm(u.adjoint() * u - Matrix::Identity(d, d)) >
            tolerances().tp)
      throw ValidationError("unitary feedback: controls must be unitary");
    if (spec.final_m[r].dim() != d)
      throw ValidationError("unitary feedback: final measurement dimension");
    if (spec.q[r].size() != spec.final_m[r].n_outcomes())
      throw ValidationError(
          "unitary feedback: one reference probability per final outcome");
    check_prob_vector(spec.q[r], "unitary feedback");
  }
  if (spec.confusion.has_value()) {
    const RealMatrix& c = *spec.confusion;
    if (c.rows() != static_cast<Eigen::Index>(n_rec) ||
        c.cols() != spec.mid.n_outcomes())
      throw ValidationError(
          "unitary feedback: confusion must be n_records x n_mid_outcomes");
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
      double s = 0;
      for (Eigen::Index r = 0; r < c.rows(); ++r) {
        if (c(r, j) < 0)
          throw ValidationError(
              "unitary feedback: confusion entries must be >= 0");
        s += c(r, j);
      }
      if (std::abs(s - 1.0) > tolerances().trace)
        throw ValidationError(
            "unitary feedback: confusion columns must sum to one");
    }
  } else if (n_rec != static_cast<std::size_t>(spec.mid.n_outcomes())) {
    throw ValidationError(
        "unitary feedback: without a confusion matrix, records must match "
        "mid outcomes one to one");
  }
}

FeedbackProtocol build_unitary_feedback(const UnitaryFeedbackSpec& spec) {
  validate_unitary_feedback(spec);
  const int d = spec.prepared.dim();
  const int n_mid = spec.mid.n_outcomes();
  const std::size_t n_rec = spec.controls.size();

  auto confusion = [&](std::size_t r, int j) -> double {
    if (spec.confusion.has_value()) return (*spec.confusion)(r, j);
    return (static_cast<int>(r) == j) ? 1.0 : 0.0;
  };

  FeedbackProtocol fb;
  fb.rho = spec.rho;
  fb.prepared = spec.prepared;
  for (std::size_t r = 0; r < n_rec; ++r) {
    std::vector<Matrix> ks;
    ks.reserve(n_mid);
    for (int j = 0; j < n_mid; ++j) {
      const double p = confusion(r, j);
      if (p == 0) continue;
      ks.push_back(std::sqrt(p) * spec.controls[r] * spec.mid.op(j) *
                   spec.pre);
    }
    if (ks.empty()) ks.push_back(Matrix::Zero(d, d));
    fb.branches.push_back(FeedbackBranch{
        Channel::from_kraus(std::move(ks), /*allow_trace_decreasing=*/true),
        spec.final_m[r], spec.q[r]});
  }
  return fb;
}

double unitary_feedback_efficacy_closed_form(const UnitaryFeedbackSpec& spec) {
  validate_unitary_feedback(spec);
  const std::size_t n_rec = spec.controls.size();
  const int n_mid = spec.mid.n_outcomes();
  const int d = spec.prepared.dim();
  auto confusion = [&](std::size_t r, int j) -> double {
    if (spec.confusion.has_value()) return (*spec.confusion)(r, j);
    return (static_cast<int>(r) == j) ? 1.0 : 0.0;
  };
  double acc = 0;
  for (std::size_t r = 0; r < n_rec; ++r) {
    Matrix rho_q = Matrix::Zero(d, d);
    for (int b = 0; b < spec.final_m[r].n_outcomes(); ++b)
      rho_q += spec.q[r][b] * spec.final_m[r].effect(b);
    const Matrix rotated =
        spec.controls[r].adjoint() * rho_q * spec.controls[r];
    for (int j = 0; j < n_mid; ++j) {
      const double p = confusion(r, j);
      if (p == 0) continue;
      acc += p * (spec.mid.op(j) * rotated * spec.mid.op(j)).trace().real();
    }
  }
  return acc;
}

MutualInfoResult mutual_info_pdf(const UnitaryFeedbackSpec& spec) {
  validate_unitary_feedback(spec);
  const int d = spec.prepared.dim();
  const int n_mid = spec.mid.n_outcomes();
  const std::size_t n_rec = spec.controls.size();
  auto confusion = [&](std::size_t r, int j) -> double {
    if (spec.confusion.has_value()) return (*spec.confusion)(r, j);
    return (static_cast<int>(r) == j) ? 1.0 : 0.0;
  };

  const PreparedEnsemble ens = measure_prepare(spec.prepared, spec.rho);
  Matrix rho_p = Matrix::Zero(d, d);
  for (int a = 0; a < spec.prepared.n_outcomes(); ++a)
    rho_p += ens.probs[a] * spec.prepared.op(a);

  // true mid outcome distribution and record marginal
  const Matrix evolved_p = spec.pre * rho_p * spec.pre.adjoint();
  RealVector p_mid(n_mid);
  for (int j = 0; j < n_mid; ++j)
    p_mid[j] = std::max(
        (spec.mid.op(j) * evolved_p * spec.mid.op(j)).trace().real(), 0.0);

  MutualInfoResult out;
  out.record_marginal = RealVector::Zero(n_rec);
  for (std::size_t r = 0; r < n_rec; ++r)
    for (int j = 0; j < n_mid; ++j)
      out.record_marginal[r] += confusion(r, j) * p_mid[j];

  out.info = RealMatrix::Zero(n_rec, n_mid);
  for (std::size_t r = 0; r < n_rec; ++r) {
    if (out.record_marginal[r] <= 0) {
      std::ostringstream os;
      os << "mutual_info_pdf: record " << r
         << " is never produced; its information content is undefined";
      throw DomainError(os.str());
    }
    for (int j = 0; j < n_mid; ++j) {
      const double c = confusion(r, j);
      out.info(r, j) =
          (c > 0) ? std::log(c / out.record_marginal[r])
                  : -std::numeric_limits<double>::infinity();
    }
  }

  std::vector<Atom> atoms;
  double integral = 0;
  double mean_info = 0;
  for (int a = 0; a < spec.prepared.n_outcomes(); ++a) {
    const double pa = ens.probs[a];
    // The projector itself is the normalized post state here, and unlike the
    // ensemble state it stays defined for outcomes the initial state never
    // populates, whose reverse weight still counts below.
    const Matrix state1 = spec.pre * spec.prepared.op(a) * spec.pre.adjoint();
    for (int j = 0; j < n_mid; ++j) {
      const Matrix state2 = spec.mid.op(j) * state1 * spec.mid.op(j);
      for (std::size_t r = 0; r < n_rec; ++r) {
        const double c = confusion(r, j);
        const Matrix state3 = spec.controls[r] * state2 *
                              spec.controls[r].adjoint();
        for (int b = 0; b < spec.final_m[r].n_outcomes(); ++b) {
          const double t = std::max(
              (spec.final_m[r].effect(b) * state3).trace().real(), 0.0);
          // Reverse side mass: q_r(b) P(r) t equals w e^{-v} wherever the
          // forward weight w is nonzero, and it keeps the trajectories the
          // forward process cannot reach (misreads with zero probability),
          // without which the integral would fall short of one.
          integral += out.record_marginal[r] * spec.q[r][b] * t;
          const double w = pa * c * t;
          if (w <= kWeightFloor) continue;
          const double v =
              std::log(pa) - std::log(spec.q[r][b]) + out.info(r, j);
          atoms.push_back({v, w});
          mean_info += w * out.info(r, j);
        }
      }
    }
  }
  out.pdf =
      ObservableDistribution::from_atoms(std::move(atoms), tolerances().v_merge);
  out.integral = integral;
  out.mean_info = mean_info;

  out.rho_hat = Matrix::Zero(d, d);
  for (std::size_t r = 0; r < n_rec; ++r) {
    Matrix rho_q = Matrix::Zero(d, d);
    for (int b = 0; b < spec.final_m[r].n_outcomes(); ++b)
      rho_q += spec.q[r][b] * spec.final_m[r].effect(b);
    out.rho_hat += out.record_marginal[r] * spec.controls[r].adjoint() *
                   rho_q * spec.controls[r];
  }
  out.rho_hat_herm_residual = hermiticity_residual(out.rho_hat);
  out.rho_hat_trace_residual = std::abs(out.rho_hat.trace().real() - 1.0);
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      0.5 * (out.rho_hat + out.rho_hat.adjoint()), Eigen::EigenvaluesOnly);
  out.rho_hat_min_eig = es.eigenvalues().minCoeff();
  return out;
}

}  // namespace fluxtheo
