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

#include "fluxtheo/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/tolerances.hpp"

namespace fluxtheo {

namespace {

constexpr double kEntropyClampTol = 1e-6;

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream os;
    os << who << ": expected a nonempty square matrix, got " << m.rows() << "x"
       << m.cols();
    throw ValidationError(os.str());
  }
}

}  // namespace

Tolerances& tolerances() {
  static Tolerances t;
  return t;
}

double hermiticity_residual(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && hermiticity_residual(m) <= tol;
}

Spectrum eig_hermitian(const Matrix& m) {
  require_square(m, "eig_hermitian");
  const double r = hermiticity_residual(m);
  if (r > tolerances().herm) {
    std::ostringstream os;
    os << "eig_hermitian: matrix is not hermitian, residual " << r;
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()));
  if (es.info() != Eigen::Success)
    throw NumericalError("eig_hermitian: eigensolver failed to converge");
  return Spectrum{es.eigenvalues(), es.eigenvectors()};
}

void validate_density(const Matrix& rho, const std::string& what) {
  require_square(rho, what.c_str());
  const auto& tol = tolerances();
  const double hres = hermiticity_residual(rho);
  if (hres > tol.herm) {
    std::ostringstream os;
    os << what << ": not hermitian, residual " << hres;
    throw ValidationError(os.str());
  }
  const double tres = std::abs(rho.trace().real() - 1.0) + std::abs(rho.trace().imag());
  if (tres > tol.trace) {
    std::ostringstream os;
    os << what << ": trace is " << rho.trace().real() << ", residual " << tres;
    throw ValidationError(os.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                           Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin < -tol.psd) {
    std::ostringstream os;
    os << what << ": not positive semidefinite, smallest eigenvalue " << lmin;
    throw ValidationError(os.str());
  }
}

Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f) {
  Spectrum s = eig_hermitian(h);
  RealVector fv(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) fv[i] = f(s.values[i]);
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

Matrix hermitian_power(const Matrix& h, double p) {
  Spectrum s = eig_hermitian(h);
  const double clamp = tolerances().psd;
  RealVector fv(s.values.size());
  for (Eigen::Index i = 0; i < s.values.size(); ++i) {
    double x = s.values[i];
    if (p >= 0) {
      if (x < 0) {
        if (x < -clamp) {
          std::ostringstream os;
          os << "hermitian_power: negative eigenvalue " << x
             << " outside the clamp window";
          throw DomainError(os.str());
        }
        x = 0;
      }
      fv[i] = (x == 0 && p == 0) ? 1.0 : std::pow(x, p);
    } else {
      if (x <= clamp) {
        std::ostringstream os;
        os << "hermitian_power: exponent " << p
           << " needs a strictly positive spectrum, got eigenvalue " << x;
        throw DomainError(os.str());
      }
      fv[i] = std::pow(x, p);
    }
  }
  return s.vectors * fv.asDiagonal() * s.vectors.adjoint();
}

double trace_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

double operator_norm(const Matrix& m) {
  if (m.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

double purity(const Matrix& rho) { return (rho * rho).trace().real(); }

namespace {

// Clamped eigenvalues of a state-like operator, rejecting clearly non states.
RealVector state_eigenvalues(const Matrix& rho, const char* who) {
  Spectrum s = eig_hermitian(rho);
  RealVector v = s.values;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < -kEntropyClampTol) {
      std::ostringstream os;
      os << who << ": eigenvalue " << v[i] << " is too negative for a state";
      throw ValidationError(os.str());
    }
    if (v[i] < 0) v[i] = 0;
  }
  return v;
}

}  // namespace

double von_neumann_entropy(const Matrix& rho) {
  RealVector v = state_eigenvalues(rho, "von_neumann_entropy");
  double s = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] > 0) s -= v[i] * std::log(v[i]);
  return s;
}

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw ValidationError("relative_entropy: dimension mismatch");
  Spectrum ss = eig_hermitian(sigma);
  RealVector sv = ss.values;
  // weight of rho outside the support of sigma
  const double support_tol = 1e-12;
  double outside = 0;
  Matrix log_sigma = Matrix::Zero(sigma.rows(), sigma.cols());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const Vector u = ss.vectors.col(i);
    const double w = (u.adjoint() * rho * u).real()(0, 0);
    if (sv[i] <= support_tol) {
      outside += std::max(w, 0.0);
    } else {
      log_sigma += std::log(sv[i]) * (u * u.adjoint());
    }
  }
  if (outside > 1e-10) return std::numeric_limits<double>::infinity();
  const double cross = -(rho * log_sigma).trace().real();
  return cross - von_neumann_entropy(rho);
}

double shannon_entropy(const RealVector& p) {
  double s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p[i] > 0) s -= p[i] * std::log(p[i]);
  return s;
}

double classical_relative_entropy(const RealVector& p, const RealVector& q) {
  if (p.size() != q.size())
    throw ValidationError("classical_relative_entropy: size mismatch");
  double s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0) return std::numeric_limits<double>::infinity();
    s += p[i] * std::log(p[i] / q[i]);
  }
  return s;
}

double classical_cross_entropy(const RealVector& p, const RealVector& q) {
  if (p.size() != q.size())
    throw ValidationError("classical_cross_entropy: size mismatch");
  double s = 0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p[i] <= 0) continue;
    if (q[i] <= 0) return std::numeric_limits<double>::infinity();
    s -= p[i] * std::log(q[i]);
  }
  return s;
}

double log_partition_from_levels(const RealVector& levels, double beta) {
  if (beta < 0)
    throw DomainError("log_partition_from_levels: beta must be >= 0");
  if (levels.size() == 0)
    throw ValidationError("log_partition_from_levels: empty spectrum");
  // log sum exp of -beta * eps, anchored at the ground state
  const double e0 = levels.minCoeff();
  double acc = 0;
  for (Eigen::Index i = 0; i < levels.size(); ++i)
    acc += std::exp(-beta * (levels[i] - e0));
  return -beta * e0 + std::log(acc);
}

double log_partition_function(const Matrix& h, double beta) {
  return log_partition_from_levels(eig_hermitian(h).values, beta);
}

double free_energy(const Matrix& h, double beta) {
  if (beta <= 0)
    throw DomainError("free_energy: beta must be > 0 (diverges at beta = 0)");
  return -log_partition_function(h, beta) / beta;
}

Matrix gibbs_state(const Matrix& h, double beta) {
  if (beta < 0) throw DomainError("gibbs_state: beta must be >= 0");
  Spectrum s = eig_hermitian(h);
  const Eigen::Index d = s.values.size();
  if (beta == 0) return Matrix::Identity(d, d) / double(d);
  const double e0 = s.values.minCoeff();
  RealVector w(d);
  double z = 0;
  for (Eigen::Index i = 0; i < d; ++i) {
    w[i] = std::exp(-beta * (s.values[i] - e0));
    z += w[i];
  }
  w /= z;
  return s.vectors * w.asDiagonal() * s.vectors.adjoint();
}

}  // namespace fluxtheo
