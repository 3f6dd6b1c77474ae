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

namespace fluxtheo {

// Numerical gates used across the library. The defaults are frozen; tests
// assert against them, so change them only together with the test suite.
struct Tolerances {
  double herm = 1e-10;        // hermiticity residual of validated operators
  double trace = 1e-10;       // unit-trace residual of density matrices
  double psd = 1e-9;          // most negative admissible eigenvalue of a state
  double eig = 1e-10;         // eigendecomposition reconstruction residual
  double tp = 1e-8;           // trace-preservation residual of user channels
  double meas = 1e-10;        // measurement completeness residual
  double p_floor = 1e-14;     // below this an outcome has no post state
  double v_merge = 1e-9;      // atoms closer than this in v are merged
  double pv_rel = 1e-6;       // relative accuracy of principal value integrals
  double ode = 1e-8;          // default relative and absolute ODE tolerance
};

Tolerances& tolerances();

}  // namespace fluxtheo
