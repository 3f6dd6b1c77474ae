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

#include "fluxtheo/bath.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <queue>
#include <sstream>
#include <vector>

#include "fluxtheo/errors.hpp"

namespace fluxtheo {

namespace {

void check_bath(const BathParams& bath, const char* who) {
  if (bath.beta < 0 || bath.kappa < 0 || bath.omega_c <= 0) {
    std::ostringstream os;
    os << who << ": need beta >= 0, kappa >= 0, omega_c > 0";
    throw ValidationError(os.str());
  }
}

}  // namespace

double ohmic_rate(const BathParams& bath, double omega) {
  check_bath(bath, "ohmic_rate");
  const double cutoff = std::exp(-std::abs(omega) / bath.omega_c);
  if (bath.beta == 0) {
    // rescaled infinite temperature limit, symmetric in omega
    return bath.kappa * cutoff;
  }
  if (omega == 0) return bath.kappa / bath.beta;
  // -expm1(-x) = 1 - exp(-x) without cancellation near x = 0
  return bath.kappa * omega * cutoff / (-std::expm1(-bath.beta * omega));
}

namespace {

// 15 point Kronrod rule with the embedded 7 point Gauss rule (QUADPACK
// constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <class F>
Panel gk15(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = kWgk[7] * f(c);
  double resg = kWg[3] * f(c);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kXgk[i];
    const double fsum = f(c - dx) + f(c + dx);
    resk += kWgk[i] * fsum;
    if (i % 2 == 1) resg += kWg[i / 2] * fsum;
  }
  resk *= h;
  resg *= h;
  return Panel{a, b, resk, std::abs(resk - resg)};
}

template <class F>
double adaptive_gk(const F& f, double a, double b, double rel_tol,
                   double abs_floor) {
  if (!(b > a)) return 0;
  std::priority_queue<Panel> panels;
  Panel first = gk15(f, a, b);
  double total = first.value;
  double err = first.error;
  panels.push(first);
  int evals = 1;
  const int budget = 20000;
  while (err > std::max(abs_floor, rel_tol * std::abs(total))) {
    if (evals >= budget)
      throw NumericalError("adaptive_gk: panel budget exhausted");
    Panel worst = panels.top();
    panels.pop();
    total -= worst.value;
    err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b)
      throw NumericalError("adaptive_gk: interval underflow");
    Panel left = gk15(f, worst.a, mid);
    Panel right = gk15(f, mid, worst.b);
    total += left.value + right.value;
    err += left.error + right.error;
    panels.push(left);
    panels.push(right);
    evals += 2;
  }
  return total;
}

}  // namespace

double lamb_shift_integral(const BathParams& bath, double omega,
                           double rel_tol) {
  check_bath(bath, "lamb_shift_integral");
  if (bath.kappa == 0) return 0;

  auto gamma = [&](double w) { return ohmic_rate(bath, w); };

  // Window half width: stay clear of the rate function's corner at zero
  // unless the window is centered there.
  const double awin = std::abs(omega);
  const double delta = (awin > 1e-9) ? std::min(1.0, 0.5 * awin) : 1.0;

  // inside the window the principal value pairs symmetric points
  auto windowed = [&](double u) {
    return (gamma(omega - u) - gamma(omega + u)) / u;
  };
  const double scale = bath.kappa * (1.0 + bath.omega_c);
  const double abs_floor = 1e-14 * scale;
  double acc = adaptive_gk(windowed, 0.0, delta, rel_tol, abs_floor);

  auto tail = [&](double w) { return gamma(w) / (omega - w); };
  const double span_pos = awin + 10.0 + 60.0 * bath.omega_c;
  const double span_neg =
      awin + 10.0 + 60.0 / (bath.beta + 1.0 / bath.omega_c);
  acc += adaptive_gk(tail, -span_neg, omega - delta, rel_tol, abs_floor);
  acc += adaptive_gk(tail, omega + delta, span_pos, rel_tol, abs_floor);

  return acc / (2.0 * std::numbers::pi);
}

LambShiftTable::LambShiftTable(const BathParams& bath, double omega_max,
                               double spacing) {
  check_bath(bath, "LambShiftTable");
  if (omega_max <= 0 || spacing <= 0)
    throw ValidationError("LambShiftTable: need omega_max > 0 and spacing > 0");
  omega_max_ = omega_max;
  const Eigen::Index half = static_cast<Eigen::Index>(
      std::ceil(omega_max / spacing));
  const Eigen::Index n = 2 * half + 1;
  dx_ = omega_max / double(half);
  x0_ = -omega_max;
  y_ = RealVector(n);
  for (Eigen::Index i = 0; i < n; ++i)
    y_[i] = lamb_shift_integral(bath, x0_ + dx_ * double(i), 1e-9);

  // natural cubic spline second derivatives (tridiagonal solve)
  m_ = RealVector::Zero(n);
  if (n >= 3) {
    RealVector diag = RealVector::Constant(n - 2, 4.0);
    RealVector rhs(n - 2);
    for (Eigen::Index i = 1; i + 1 < n; ++i)
      rhs[i - 1] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
    // Thomas sweep with unit off-diagonals
    for (Eigen::Index i = 1; i < n - 2; ++i) {
      const double w = 1.0 / diag[i - 1];
      diag[i] -= w;
      rhs[i] -= w * rhs[i - 1];
    }
    m_[n - 2] = rhs[n - 3] / diag[n - 3];
    for (Eigen::Index i = n - 3; i >= 1; --i)
      m_[i] = (rhs[i - 1] - m_[i + 1]) / diag[i - 1];
  }
}

double LambShiftTable::operator()(double omega) const {
  if (std::abs(omega) > omega_max_ + 1e-9) {
    std::ostringstream os;
    os << "LambShiftTable: omega " << omega << " outside the tabulated range "
       << omega_max_;
    throw DomainError(os.str());
  }
  const Eigen::Index n = y_.size();
  double t = (omega - x0_) / dx_;
  Eigen::Index i = static_cast<Eigen::Index>(std::floor(t));
  i = std::max<Eigen::Index>(0, std::min(i, n - 2));
  const double u = t - double(i);
  const double a = 1.0 - u, b = u;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) *
             (dx_ * dx_) / 6.0;
}

}  // namespace fluxtheo
