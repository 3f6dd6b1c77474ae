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

#include "fluxtheo/channels.hpp"

#include <sstream>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/tolerances.hpp"

namespace fluxtheo {

Channel Channel::from_kraus(std::vector<Matrix> kraus,
                            bool allow_trace_decreasing) {
  if (kraus.empty())
    throw ValidationError("Channel: need at least one Kraus operator");
  const Eigen::Index d = kraus.front().rows();
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != d)
      throw ValidationError("Channel: Kraus operators must be square and share one dimension");
  }
  Matrix acc = Matrix::Zero(d, d);
  for (const auto& k : kraus) acc += k.adjoint() * k;
  if (allow_trace_decreasing) {
    // require sum A^dag A <= 1: largest eigenvalue at most 1
    Eigen::SelfAdjointEigenSolver<Matrix> es(acc, Eigen::EigenvaluesOnly);
    const double top = es.eigenvalues().maxCoeff();
    if (top > 1.0 + tolerances().tp) {
      std::ostringstream os;
      os << "Channel: trace decreasing map exceeds the identity, top eigenvalue "
         << top;
      throw ValidationError(os.str());
    }
  } else {
    const double res = operator_norm(acc - Matrix::Identity(d, d));
    if (res > tolerances().tp) {
      std::ostringstream os;
      os << "Channel: not trace preserving, ||sum A^dag A - 1|| = " << res;
      throw ValidationError(os.str());
    }
  }
  return Channel(std::move(kraus), static_cast<int>(d));
}

Channel Channel::unitary(const Matrix& u) {
  const Eigen::Index d = u.rows();
  if (d == 0 || u.cols() != d)
    throw ValidationError("Channel::unitary: need a square matrix");
  const double res = operator_norm(u.adjoint() * u - Matrix::Identity(d, d));
  if (res > tolerances().tp) {
    std::ostringstream os;
    os << "Channel::unitary: not unitary, ||U^dag U - 1|| = " << res;
    throw ValidationError(os.str());
  }
  return Channel({u}, static_cast<int>(d));
}

Channel Channel::identity(int dim) {
  if (dim <= 0) throw ValidationError("Channel::identity: dim must be positive");
  return Channel({Matrix::Identity(dim, dim)}, dim);
}

Channel Channel::compose(const Channel& outer, const Channel& inner) {
  if (outer.dim() != inner.dim())
    throw ValidationError("Channel::compose: dimension mismatch");
  std::vector<Matrix> ks;
  ks.reserve(outer.kraus_.size() * inner.kraus_.size());
  for (const auto& a : outer.kraus_)
    for (const auto& b : inner.kraus_) ks.push_back(a * b);
  return Channel(std::move(ks), outer.dim());
}

Matrix Channel::apply(const Matrix& x) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) out.noalias() += k * x * k.adjoint();
  return out;
}

Matrix Channel::dual_apply(const Matrix& x) const {
  Matrix out = Matrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) out.noalias() += k.adjoint() * x * k;
  return out;
}

double Channel::tp_residual() const {
  Matrix acc = Matrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) acc += k.adjoint() * k;
  return operator_norm(acc - Matrix::Identity(dim_, dim_));
}

double Channel::unitality_residual() const {
  Matrix acc = Matrix::Zero(dim_, dim_);
  for (const auto& k : kraus_) acc += k * k.adjoint();
  return operator_norm(acc - Matrix::Identity(dim_, dim_));
}

}  // namespace fluxtheo
