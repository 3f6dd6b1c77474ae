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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/types.hpp"

namespace fluxtheo {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-8;
  double h_init = 0;  // 0 selects automatically
  double h_max = std::numeric_limits<double>::infinity();
  std::int64_t max_steps = 200'000'000;
};

struct OdeStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t rhs_evals = 0;
  double h_last = 0;
};

// Dormand-Prince 5(4) embedded pair with FSAL and a PI step controller.
// rhs(t, y, dydt) fills dydt; observer(t, y) runs at t0 and after every
// accepted step. y is any complex matrix shape; the error norm is a scaled
// RMS over entries. Throws NumericalError on step underflow or when the step
// budget runs out.
template <class Rhs, class Observer>
OdeStats integrate_dopri5(Rhs&& rhs, double t0, double t1, Matrix& y,
                          const OdeOptions& opt, Observer&& observer) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // y5 - y4 error weights (e7 multiplies k7 = f(t+h, y5))
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695,
                          e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (!(t1 > t0)) throw ValidationError("integrate_dopri5: need t1 > t0");

  const auto rows = y.rows(), cols = y.cols();
  Matrix k1(rows, cols), k2(rows, cols), k3(rows, cols), k4(rows, cols),
      k5(rows, cols), k6(rows, cols), k7(rows, cols), ytmp(rows, cols),
      ynew(rows, cols), yerr(rows, cols);

  OdeStats st;
  double t = t0;
  rhs(t, y, k1);
  st.rhs_evals++;
  observer(t, y);

  double h = opt.h_init;
  if (h <= 0) {
    // Modest heuristic; the controller corrects it within a few steps.
    const double f0 = k1.norm() / std::sqrt(double(rows * cols));
    h = (f0 > 0) ? 0.01 * (opt.atol + opt.rtol) / f0 : 1e-6 * (t1 - t0);
    h = std::min(h, (t1 - t0) / 10);
    h = std::min(h, opt.h_max);
    h = std::max(h, 1e-14 * (t1 - t0));
  }

  double err_prev = 1.0;
  bool first = true;
  const double expo = 1.0 / 5.0;

  while (t < t1) {
    if (st.accepted + st.rejected >= opt.max_steps)
      throw NumericalError("integrate_dopri5: step budget exhausted");
    if (h < 1e-14 * std::max(std::abs(t), 1.0))
      throw NumericalError("integrate_dopri5: step size underflow");
    bool last = false;
    if (t + h >= t1) {
      h = t1 - t;
      last = true;
    }

    ytmp = y + h * (a21 * k1);
    rhs(t + c2 * h, ytmp, k2);
    ytmp = y + h * (a31 * k1 + a32 * k2);
    rhs(t + c3 * h, ytmp, k3);
    ytmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
    rhs(t + c4 * h, ytmp, k4);
    ytmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
    rhs(t + c5 * h, ytmp, k5);
    ytmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
    rhs(t + h, ytmp, k6);
    ynew = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    rhs(t + h, ynew, k7);
    st.rhs_evals += 6;

    yerr = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double acc = 0;
    for (Eigen::Index j = 0; j < cols; ++j) {
      for (Eigen::Index i = 0; i < rows; ++i) {
        const double sc =
            opt.atol +
            opt.rtol * std::max(std::abs(y(i, j)), std::abs(ynew(i, j)));
        const double e = std::abs(yerr(i, j)) / sc;
        acc += e * e;
      }
    }
    const double err = std::sqrt(acc / double(rows * cols));
    if (!std::isfinite(err))
      throw NumericalError("integrate_dopri5: non-finite error estimate");

    if (err <= 1.0) {
      t = last ? t1 : t + h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      observer(t, y);
      st.accepted++;
      const double e_clamped = std::max(err, 1e-10);
      double fac = 0.9 * std::pow(e_clamped, -0.7 * expo) *
                   std::pow(std::max(err_prev, 1e-10), 0.4 * expo);
      if (first) fac = std::min(fac, 5.0);
      fac = std::clamp(fac, 0.2, 10.0);
      h = std::min(h * fac, opt.h_max);
      err_prev = e_clamped;
      first = false;
    } else {
      st.rejected++;
      const double fac =
          std::clamp(0.9 * std::pow(err, -expo), 0.1, 1.0);
      h *= fac;
    }
  }
  st.h_last = h;
  return st;
}

}  // namespace fluxtheo
