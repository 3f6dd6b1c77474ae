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

#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Ohmic bath with exponential cutoff. Energies and frequencies are angular
// GHz (rad/ns), beta is in inverse angular GHz, times in ns.
struct BathParams {
  double beta = 0;
  double kappa = 0;
  double omega_c = 0;
};

// gamma(w) = kappa w exp(-|w|/w_c) / (1 - exp(-beta w)), continuous at w = 0
// with gamma(0) = kappa/beta. The |w| in the cutoff makes detailed balance
// gamma(w) = exp(beta w) gamma(-w) exact. For beta == 0 the formula diverges
// for every w, so that case uses the rescaled limit of beta*gamma instead:
// gamma(w) = kappa exp(-|w|/w_c), symmetric in w.
double ohmic_rate(const BathParams& bath, double omega);

// S(w) = (1/2pi) PV int gamma(w') / (w - w') dw'. The singularity is handled
// with a symmetric window (the windowed integrand is smooth) and the tails
// with adaptive Gauss-Kronrod panels; rel_tol is the target relative
// accuracy.
double lamb_shift_integral(const BathParams& bath, double omega,
                           double rel_tol = 1e-9);

// Cubic spline table of S(w) on [-omega_max, omega_max], built once per bath
// and reused at every evaluation time (S does not depend on t).
class LambShiftTable {
 public:
  LambShiftTable(const BathParams& bath, double omega_max, double spacing = 0.005);
  double operator()(double omega) const;
  double omega_max() const { return omega_max_; }

 private:
  double omega_max_ = 0;
  double x0_ = 0, dx_ = 0;
  RealVector y_, m_;  // values and second derivatives at the knots
};

}  // namespace fluxtheo
