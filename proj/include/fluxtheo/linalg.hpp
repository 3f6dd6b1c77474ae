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

#include <functional>
#include <string>

#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Eigendecomposition of a hermitian operator, eigenvalues ascending.
// h = vectors * values.asDiagonal() * vectors.adjoint()
struct Spectrum {
  RealVector values;
  Matrix vectors;
};

double hermiticity_residual(const Matrix& m);
bool is_hermitian(const Matrix& m, double tol);

// Throws ValidationError if m is not hermitian within tolerances().herm.
Spectrum eig_hermitian(const Matrix& m);

// Throws ValidationError naming `what` unless rho is hermitian, PSD and unit
// trace within the global tolerances.
void validate_density(const Matrix& rho, const std::string& what);

// f applied to the eigenvalues of a hermitian matrix.
Matrix hermitian_function(const Matrix& h, const std::function<double(double)>& f);

// h^p through the spectrum. Eigenvalues in [-psd_tol, 0) are clamped to zero
// for p >= 0; for p < 0 any eigenvalue <= clamp_tol raises DomainError.
Matrix hermitian_power(const Matrix& h, double p);

double trace_norm(const Matrix& m);     // sum of singular values
double operator_norm(const Matrix& m);  // largest singular value
double purity(const Matrix& rho);       // Tr[rho^2]

// Entropies are in nats. Eigenvalues of states are clamped to [0, 1] after a
// sanity window: anything below -1e-6 is rejected as not a state.
double von_neumann_entropy(const Matrix& rho);

// S(rho || sigma). Returns +infinity when rho has weight outside the support
// of sigma; never throws for that case.
double relative_entropy(const Matrix& rho, const Matrix& sigma);

// Classical counterparts on probability vectors (no validation beyond size).
double shannon_entropy(const RealVector& p);
// H(p || q) = sum p ln(p/q); +infinity if some q_i == 0 with p_i > 0.
double classical_relative_entropy(const RealVector& p, const RealVector& q);
// Cross term -sum_i p_i ln q_i.
double classical_cross_entropy(const RealVector& p, const RealVector& q);

// ln Z = ln Tr[exp(-beta h)] evaluated with a log-sum-exp so that large beta
// or large spectra cannot overflow. Requires beta >= 0.
double log_partition_function(const Matrix& h, double beta);

// Same quantity from an already diagonalized spectrum.
double log_partition_from_levels(const RealVector& levels, double beta);

// F = -ln(Z)/beta. beta == 0 is a DomainError (F diverges).
double free_energy(const Matrix& h, double beta);

// exp(-beta h)/Z. beta == 0 gives the maximally mixed state. beta < 0 is a
// DomainError. Large beta degrades gracefully to the ground space projector.
Matrix gibbs_state(const Matrix& h, double beta);

}  // namespace fluxtheo
