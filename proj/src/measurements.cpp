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

#include "fluxtheo/measurements.hpp"

#include <cmath>
#include <sstream>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/tolerances.hpp"

namespace fluxtheo {

Measurement Measurement::from_ops(std::vector<Matrix> ops,
                                  std::vector<std::string> labels) {
  if (ops.empty())
    throw ValidationError("Measurement: need at least one operator");
  const Eigen::Index d = ops.front().rows();
  for (const auto& m : ops) {
    if (m.rows() != d || m.cols() != d)
      throw ValidationError(
          "Measurement: operators must be square and share one dimension");
  }
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& m : ops) acc += m.adjoint() * m;
  const double res = operator_norm(acc - Matrix::Identity(d, d));
  if (res > tolerances().meas) {
    std::ostringstream os;
    os << "Measurement: not complete, ||sum M^dag M - 1|| = " << res;
    throw ValidationError(os.str());
  }
  if (labels.empty()) {
    labels.reserve(ops.size());
    for (std::size_t a = 0; a < ops.size(); ++a)
      labels.push_back(std::to_string(a));
  } else if (labels.size() != ops.size()) {
    throw ValidationError("Measurement: one label per operator required");
  }
  return Measurement(std::move(ops), std::move(labels), static_cast<int>(d));
}

Matrix Measurement::effect(int a) const {
  return ops_[a].adjoint() * ops_[a];
}

bool Measurement::is_rank1_projective(double tol) const {
  if (n_outcomes() != dim_) return false;
  for (const auto& m : ops_) {
    if (hermiticity_residual(m) > tol) return false;
    if ((m * m - m).cwiseAbs().maxCoeff() > tol) return false;
    if (std::abs(m.trace().real() - 1.0) > tol) return false;
  }
  return true;
}

PreparedEnsemble measure_prepare(const Measurement& m, const Matrix& rho) {
  validate_density(rho, "measure_prepare: rho");
  if (rho.rows() != m.dim())
    throw ValidationError("measure_prepare: state dimension mismatch");
  const int n = m.n_outcomes();
  PreparedEnsemble out;
  out.probs = RealVector(n);
  out.states.resize(n);
  out.has_state.assign(n, false);
  for (int a = 0; a < n; ++a) {
    const Matrix post = m.op(a) * rho * m.op(a).adjoint();
    double p = post.trace().real();
    if (p < 0 && p > -tolerances().p_floor) p = 0;
    out.probs[a] = p;
    if (p > tolerances().p_floor) {
      out.states[a] = post / p;
      out.has_state[a] = true;
    }
  }
  return out;
}

namespace {

// Hermitian basis of d x d: diagonal units, then symmetric and antisymmetric
// pair combinations. Not normalized; the check is homogeneous in the element.
std::vector<Matrix> hermitian_basis(int d) {
  std::vector<Matrix> basis;
  basis.reserve(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1;
    basis.push_back(e);
  }
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1;
      e(j, i) = 1;
      basis.push_back(e);
      Matrix f = Matrix::Zero(d, d);
      f(i, j) = Complex(0, 1);
      f(j, i) = Complex(0, -1);
      basis.push_back(f);
    }
  }
  return basis;
}

}  // namespace

MicroreversibilityReport check_microreversible(const Measurement& p,
                                               const Measurement& q,
                                               double tol) {
  MicroreversibilityReport rep;
  if (p.dim() != q.dim()) {
    rep.failures.push_back("dimension mismatch between the two measurements");
    return rep;
  }
  const int d = p.dim();
  rep.outcome_count_ok = (p.n_outcomes() == d && q.n_outcomes() == d);
  if (!rep.outcome_count_ok) {
    std::ostringstream os;
    os << "need exactly " << d << " outcomes on both sides, got "
       << p.n_outcomes() << " and " << q.n_outcomes();
    rep.failures.push_back(os.str());
  }

  // Prepared side: post states independent of the input. Writing the post
  // state with its normalization, the condition is linear in the input, so a
  // hermitian operator basis settles it for every state.
  const auto basis = hermitian_basis(d);
  std::vector<Matrix> c(p.n_outcomes());
  bool prep_ok = true;
  Matrix csum = Matrix::Zero(d, d);
  for (int a = 0; a < p.n_outcomes(); ++a) {
    const Matrix pa = p.op(a);
    const double na = (pa.adjoint() * pa).trace().real();
    if (na <= tolerances().p_floor) {
      prep_ok = false;
      std::ostringstream os;
      os << "outcome " << p.label(a) << " has a vanishing operator";
      rep.failures.push_back(os.str());
      c[a] = Matrix::Zero(d, d);
      continue;
    }
    c[a] = pa * pa.adjoint() / na;
    csum += c[a];
    const Matrix eff = pa.adjoint() * pa;
    for (std::size_t k = 0; k < basis.size(); ++k) {
      const Complex w = (eff * basis[k]).trace();
      const Matrix lhs = pa * basis[k] * pa.adjoint();
      const double res = (lhs - w * c[a]).cwiseAbs().maxCoeff();
      rep.prep_residual = std::max(rep.prep_residual, res);
      if (res > tol) {
        prep_ok = false;
        std::ostringstream os;
        os << "post state of outcome " << p.label(a)
           << " depends on the input (basis element " << k << ", residual "
           << res << ")";
        rep.failures.push_back(os.str());
      }
    }
  }
  rep.prep_sum_residual =
      operator_norm(csum - Matrix::Identity(d, d));
  if (rep.prep_sum_residual > tol) {
    prep_ok = false;
    std::ostringstream os;
    os << "post states sum to the identity only within "
       << rep.prep_sum_residual;
    rep.failures.push_back(os.str());
  }
  rep.prepared_side_pass = prep_ok && rep.outcome_count_ok;

  bool final_ok = true;
  for (int b = 0; b < q.n_outcomes(); ++b) {
    const double tr = (q.op(b).adjoint() * q.op(b)).trace().real();
    const double res = std::abs(tr - 1.0);
    rep.final_trace_residual = std::max(rep.final_trace_residual, res);
    if (res > tol) {
      final_ok = false;
      std::ostringstream os;
      os << "effect of outcome " << q.label(b) << " has trace " << tr;
      rep.failures.push_back(os.str());
    }
  }
  rep.final_side_pass = final_ok && rep.outcome_count_ok;
  rep.pass = rep.prepared_side_pass && rep.final_side_pass;
  return rep;
}

ReverseMeasurements build_reverse_measurements(
    const Measurement& p, const Measurement& q, const RealVector& qprobs,
    const Matrix& rho, const std::optional<Matrix>& rho_tilde,
    const std::vector<Matrix>& u_alpha, const std::vector<Matrix>& u_beta) {
  const int d = p.dim();
  if (q.dim() != d)
    throw ValidationError("build_reverse_measurements: dimension mismatch");
  if (qprobs.size() != q.n_outcomes())
    throw ValidationError(
        "build_reverse_measurements: one reference probability per final outcome");
  for (Eigen::Index b = 0; b < qprobs.size(); ++b)
    if (qprobs[b] <= 0)
      throw ValidationError(
          "build_reverse_measurements: reference probabilities must be positive");
  validate_density(rho, "build_reverse_measurements: rho");
  if (!u_alpha.empty() && static_cast<int>(u_alpha.size()) != p.n_outcomes())
    throw ValidationError(
        "build_reverse_measurements: one unitary per prepared outcome or none");
  if (!u_beta.empty() && static_cast<int>(u_beta.size()) != q.n_outcomes())
    throw ValidationError(
        "build_reverse_measurements: one unitary per final outcome or none");

  auto ub = [&](int b) -> Matrix {
    return u_beta.empty() ? Matrix::Identity(d, d) : u_beta[b];
  };
  auto ua = [&](int a) -> Matrix {
    return u_alpha.empty() ? Matrix::Identity(d, d) : u_alpha[a];
  };

  Matrix rt;
  if (rho_tilde.has_value()) {
    rt = *rho_tilde;
    validate_density(rt, "build_reverse_measurements: rho_tilde");
  } else {
    rt = Matrix::Zero(d, d);
    for (int b = 0; b < q.n_outcomes(); ++b)
      rt += qprobs[b] * ub(b).adjoint() * q.op(b) * q.op(b).adjoint() * ub(b);
    validate_density(rt, "build_reverse_measurements: induced rho_tilde");
  }

  Spectrum srt = eig_hermitian(rt);
  if (srt.values.minCoeff() <= tolerances().psd)
    throw DomainError(
        "build_reverse_measurements: rho_tilde must have full rank");
  RealVector inv_sqrt(srt.values.size());
  for (Eigen::Index i = 0; i < srt.values.size(); ++i)
    inv_sqrt[i] = 1.0 / std::sqrt(srt.values[i]);
  const Matrix rt_inv_sqrt =
      srt.vectors * inv_sqrt.asDiagonal() * srt.vectors.adjoint();

  std::vector<Matrix> q_rev;
  q_rev.reserve(q.n_outcomes());
  for (int b = 0; b < q.n_outcomes(); ++b)
    q_rev.push_back(std::sqrt(qprobs[b]) * q.op(b).adjoint() * ub(b) *
                    rt_inv_sqrt);

  const Matrix sqrt_rho = hermitian_power(rho, 0.5);
  PreparedEnsemble fw = measure_prepare(p, rho);
  std::vector<Matrix> p_rev;
  p_rev.reserve(p.n_outcomes());
  for (int a = 0; a < p.n_outcomes(); ++a) {
    if (fw.probs[a] <= tolerances().p_floor) {
      std::ostringstream os;
      os << "build_reverse_measurements: forward outcome " << p.label(a)
         << " has probability " << fw.probs[a]
         << "; its reverse operator is undefined";
      throw DomainError(os.str());
    }
    p_rev.push_back(ua(a) * sqrt_rho * p.op(a).adjoint() /
                    std::sqrt(fw.probs[a]));
  }

  // Completeness of both sides is what makes the reverse protocol physical;
  // from_ops enforces it within the measurement tolerance.
  ReverseMeasurements out{Measurement::from_ops(std::move(q_rev)),
                          Measurement::from_ops(std::move(p_rev)), rt};
  return out;
}

}  // namespace fluxtheo
