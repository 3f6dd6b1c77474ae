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

#include "fluxtheo/ame.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>
#include <vector>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/log.hpp"
#include "fluxtheo/ode.hpp"
#include "fluxtheo/tolerances.hpp"

namespace fluxtheo {

namespace {

constexpr double kOmegaBin = 1e-8;    // Bohr frequency binning width
constexpr double kEntryFloor = 1e-14; // drop vanishing matrix elements

void require_time(const AnnealSpec& spec, double t_us, const char* who) {
  if (t_us < -1e-12 || t_us > spec.t_f_us * (1 + 1e-12)) {
    std::ostringstream os;
    os << who << ": t = " << t_us << " outside [0, " << spec.t_f_us << "]";
    throw DomainError(os.str());
  }
}

struct Topology {
  int n = 0;
  Eigen::Index d = 0;
  RealMatrix xsum;                // sum over qubits of sigma^x
  std::vector<RealVector> zdiag;  // sigma^z eigenvalues per qubit
  RealVector ising;               // diagonal of the Ising term
  double interaction_scale = 0;   // sum |h| + sum |J|
};

Topology build_topology(const AnnealSpec& spec) {
  Topology top;
  top.n = spec.n_qubits;
  top.d = Eigen::Index(1) << spec.n_qubits;
  top.xsum = RealMatrix::Zero(top.d, top.d);
  for (int qb = 0; qb < top.n; ++qb) {
    const Eigen::Index bit = Eigen::Index(1) << qb;
    for (Eigen::Index s = 0; s < top.d; ++s) top.xsum(s ^ bit, s) += 1.0;
  }
  top.zdiag.resize(top.n);
  for (int qb = 0; qb < top.n; ++qb) {
    top.zdiag[qb] = RealVector(top.d);
    const Eigen::Index bit = Eigen::Index(1) << qb;
    for (Eigen::Index s = 0; s < top.d; ++s)
      top.zdiag[qb][s] = (s & bit) ? -1.0 : 1.0;
  }
  top.ising = RealVector::Zero(top.d);
  for (Eigen::Index s = 0; s < top.d; ++s) {
    double e = 0;
    for (int i = 0; i < top.n; ++i) e -= spec.h[i] * top.zdiag[i][s];
    for (const auto& [i, j, val] : spec.j)
      e -= val * top.zdiag[i][s] * top.zdiag[j][s];
    top.ising[s] = e;
  }
  top.interaction_scale = spec.h.cwiseAbs().sum();
  for (const auto& [i, j, val] : spec.j) top.interaction_scale += std::abs(val);
  return top;
}

RealMatrix hamiltonian_real(const Topology& top, const Schedule& sch,
                            double s) {
  RealMatrix h = -sch.a(s) * top.xsum;
  h.diagonal() += sch.b(s) * top.ising;
  return h;
}

// Largest possible Bohr frequency over the whole anneal, with margin.
double omega_bound(const Topology& top, const Schedule& sch) {
  double worst = 0;
  for (int k = 0; k <= 200; ++k) {
    const double s = k / 200.0;
    worst = std::max(worst,
                     sch.a(s) * top.n + sch.b(s) * top.interaction_scale);
  }
  return 2.0 * worst * 1.05 + 1.0;
}

// Lamb shift scales linearly in kappa, so tables are cached at kappa = 1 and
// rescaled. Keyed by the remaining bath parameters and the frequency range.
const LambShiftTable& unit_kappa_table(double beta, double omega_c,
                                       double omega_max) {
  static std::map<std::tuple<double, double, double>,
                  std::unique_ptr<LambShiftTable>>
      cache;
  const double rounded = std::ceil(omega_max / 10.0) * 10.0;
  const auto key = std::make_tuple(beta, omega_c, rounded);
  auto it = cache.find(key);
  if (it == cache.end()) {
    log_line("building lamb shift table up to omega " +
             std::to_string(rounded));
    BathParams unit{beta, 1.0, omega_c};
    it = cache
             .emplace(key, std::make_unique<LambShiftTable>(unit, rounded,
                                                            0.02))
             .first;
  }
  return *it->second;
}

struct Entry {
  int a = 0, b = 0;
  double s = 0;
};

// Everything the generator needs at one time, shared by all columns.
struct Stage {
  double s_at = -1;
  RealVector eps;
  RealMatrix v;
  Matrix vc;   // complex copy of v
  std::vector<double> omega;  // bin centers
  std::vector<double> rate;
  std::vector<std::vector<std::vector<Entry>>> entries;  // [qubit][bin]
  Matrix w_anti;  // sum_k rate_k L^dag L, eigenbasis
  Matrix hls;     // lamb shift, eigenbasis
};

class AmeWorkspace {
 public:
  AmeWorkspace(const AnnealSpec& spec)
      : spec_(spec),
        top_(build_topology(spec)),
        bath_(bath_of(spec)),
        t_f_ns_(spec.t_f_us * 1000.0) {
    if (spec.lamb_shift && spec.kappa > 0)
      table_ = &unit_kappa_table(bath_.beta, bath_.omega_c,
                                 omega_bound(top_, spec.schedule));
    const Eigen::Index d = top_.d;
    stage_.eps = RealVector(d);
    stage_.v = RealMatrix(d, d);
    stage_.vc = Matrix(d, d);
    stage_.entries.assign(top_.n, {});
    sz_scratch_.assign(top_.n, RealMatrix(d, d));
    y_eig_ = Matrix(d, d);
    d_eig_ = Matrix(d, d);
    tmp_ = Matrix(d, d);
  }

  const Topology& topology() const { return top_; }
  double t_f_ns() const { return t_f_ns_; }
  const Stage& stage() const { return stage_; }

  void prepare(double s) {
    s = std::clamp(s, 0.0, 1.0);
    if (s == stage_.s_at) return;
    stage_.s_at = s;
    es_.compute(hamiltonian_real(top_, spec_.schedule, s));
    if (es_.info() != Eigen::Success)
      throw NumericalError("ame: eigensolver failed during propagation");
    stage_.eps = es_.eigenvalues();
    stage_.v = es_.eigenvectors();
    stage_.vc = stage_.v.cast<Complex>();
    const Eigen::Index d = top_.d;
    for (int qb = 0; qb < top_.n; ++qb)
      sz_scratch_[qb].noalias() =
          stage_.v.transpose() * top_.zdiag[qb].asDiagonal() * stage_.v;

    // cluster the d^2 Bohr frequencies
    pairs_.clear();
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index b = 0; b < d; ++b)
        pairs_.push_back({stage_.eps[b] - stage_.eps[a],
                          static_cast<int>(a), static_cast<int>(b)});
    std::sort(pairs_.begin(), pairs_.end(),
              [](const PairRec& x, const PairRec& y) { return x.w < y.w; });
    stage_.omega.clear();
    stage_.rate.clear();
    for (int qb = 0; qb < top_.n; ++qb) stage_.entries[qb].clear();
    std::size_t i = 0;
    while (i < pairs_.size()) {
      std::size_t j = i;
      double acc = 0;
      while (j < pairs_.size() && pairs_[j].w - pairs_[i].w <= kOmegaBin) {
        acc += pairs_[j].w;
        ++j;
      }
      const double center = acc / double(j - i);
      stage_.omega.push_back(center);
      for (int qb = 0; qb < top_.n; ++qb) {
        stage_.entries[qb].emplace_back();
        auto& list = stage_.entries[qb].back();
        for (std::size_t k = i; k < j; ++k) {
          const double val = sz_scratch_[qb](pairs_[k].a, pairs_[k].b);
          if (std::abs(val) > kEntryFloor)
            list.push_back({pairs_[k].a, pairs_[k].b, val});
        }
      }
      i = j;
    }
    for (const double w : stage_.omega)
      stage_.rate.push_back(spec_.kappa > 0 ? ohmic_rate(bath_, w) : 0.0);

    // W = sum rate L^dag L and the lamb shift operator share the same
    // row-grouped entry products.
    stage_.w_anti = Matrix::Zero(d, d);
    stage_.hls = Matrix::Zero(d, d);
    const bool lamb = table_ != nullptr;
    for (int qb = 0; qb < top_.n; ++qb) {
      for (std::size_t k = 0; k < stage_.omega.size(); ++k) {
        const auto& list = stage_.entries[qb][k];
        if (list.empty()) continue;
        const double g = stage_.rate[k];
        const double sv =
            lamb ? spec_.kappa * (*table_)(stage_.omega[k]) : 0.0;
        for (const auto& e1 : list) {
          for (const auto& e2 : list) {
            if (e1.a != e2.a) continue;
            const double prod = e1.s * e2.s;
            stage_.w_anti(e1.b, e2.b) += g * prod;
            if (lamb) stage_.hls(e1.b, e2.b) += sv * prod;
          }
        }
      }
    }
  }

  // dy for a block of m operators side by side, physical time in ns.
  void rhs(double t_ns, const Matrix& y, Matrix& dy) {
    prepare(t_ns / t_f_ns_);
    const Eigen::Index d = top_.d;
    const Eigen::Index m = y.cols() / d;
    for (Eigen::Index blk = 0; blk < m; ++blk) {
      const auto x = y.block(0, blk * d, d, d);
      auto dx = dy.block(0, blk * d, d, d);

      tmp_.noalias() = x * stage_.vc;
      y_eig_.noalias() = stage_.vc.transpose() * tmp_;

      for (Eigen::Index col = 0; col < d; ++col)
        for (Eigen::Index row = 0; row < d; ++row)
          d_eig_(row, col) = Complex(0, -(stage_.eps[row] - stage_.eps[col])) *
                             y_eig_(row, col);

      if (table_ != nullptr) {
        tmp_.noalias() = stage_.hls * y_eig_;
        tmp_.noalias() -= y_eig_ * stage_.hls;
        d_eig_.noalias() += Complex(0, -1) * tmp_;
      }

      if (spec_.kappa > 0) {
        for (int qb = 0; qb < top_.n; ++qb) {
          for (std::size_t k = 0; k < stage_.omega.size(); ++k) {
            const auto& list = stage_.entries[qb][k];
            if (list.empty()) continue;
            const double g = stage_.rate[k];
            for (const auto& e1 : list)
              for (const auto& e2 : list)
                d_eig_(e1.a, e2.a) +=
                    g * e1.s * e2.s * y_eig_(e1.b, e2.b);
          }
        }
        tmp_.noalias() = stage_.w_anti * y_eig_;
        tmp_.noalias() += y_eig_ * stage_.w_anti;
        d_eig_.noalias() -= 0.5 * tmp_;
      }

      tmp_.noalias() = d_eig_ * stage_.vc.transpose();
      dx.noalias() = stage_.vc * tmp_;
    }
  }

  // dissipator applied to the identity, eigenbasis
  Matrix witness_eig() {
    const Eigen::Index d = top_.d;
    Matrix out = Matrix::Zero(d, d);
    for (int qb = 0; qb < top_.n; ++qb) {
      for (std::size_t k = 0; k < stage_.omega.size(); ++k) {
        const auto& list = stage_.entries[qb][k];
        const double g = stage_.rate[k];
        for (const auto& e1 : list)
          for (const auto& e2 : list)
            if (e1.b == e2.b) out(e1.a, e2.a) += g * e1.s * e2.s;
      }
    }
    out -= stage_.w_anti;
    return out;
  }

 private:
  struct PairRec {
    double w = 0;
    int a = 0, b = 0;
  };

  AnnealSpec spec_;
  Topology top_;
  BathParams bath_;
  double t_f_ns_ = 0;
  const LambShiftTable* table_ = nullptr;
  Stage stage_;
  Eigen::SelfAdjointEigenSolver<RealMatrix> es_;
  std::vector<RealMatrix> sz_scratch_;
  std::vector<PairRec> pairs_;
  Matrix y_eig_, d_eig_, tmp_;
};

}  // namespace

void validate_anneal(const AnnealSpec& spec) {
  if (spec.n_qubits < 1 || spec.n_qubits > 10)
    throw ValidationError("anneal: n_qubits must be in [1, 10]");
  if (spec.h.size() != spec.n_qubits)
    throw ValidationError("anneal: one local field per qubit");
  for (const auto& [i, j, val] : spec.j) {
    (void)val;
    if (i < 0 || j < 0 || i >= spec.n_qubits || j >= spec.n_qubits || i >= j)
      throw ValidationError("anneal: couplings need indices 0 <= i < j < n");
  }
  if (spec.t_f_us <= 0) throw ValidationError("anneal: t_f_us must be > 0");
  if (spec.beta < 0) throw ValidationError("anneal: beta must be >= 0");
  if (spec.kappa < 0) throw ValidationError("anneal: kappa must be >= 0");
  if (spec.omega_c <= 0) throw ValidationError("anneal: omega_c must be > 0");
  if (spec.ode_tol <= 0 || spec.ode_tol > 1e-2)
    throw ValidationError("anneal: ode_tol must be in (0, 1e-2]");
  if (spec.validate_endpoints) {
    const double a0 = spec.schedule.a(0), b0 = spec.schedule.b(0);
    const double a1 = spec.schedule.a(1), b1 = spec.schedule.b(1);
    if (a0 <= 0 || b1 <= 0 || b0 > 0.1 * a0 || a1 > 0.1 * b1)
      throw ValidationError(
          "anneal: schedule must start transverse dominated and end Ising "
          "dominated");
  }
}

BathParams bath_of(const AnnealSpec& spec) {
  return BathParams{spec.beta, spec.kappa, spec.omega_c};
}

Matrix hamiltonian_at(const AnnealSpec& spec, double t_us) {
  validate_anneal(spec);
  require_time(spec, t_us, "hamiltonian_at");
  const Topology top = build_topology(spec);
  return hamiltonian_real(top, spec.schedule, t_us / spec.t_f_us)
      .cast<Complex>();
}

LindbladSet lindblad_ops_at(const AnnealSpec& spec, double t_us) {
  validate_anneal(spec);
  require_time(spec, t_us, "lindblad_ops_at");
  AmeWorkspace ws(spec);
  ws.prepare(t_us / spec.t_f_us);
  const Stage& st = ws.stage();
  const Eigen::Index d = ws.topology().d;

  LindbladSet out;
  out.spectrum = Spectrum{st.eps, st.vc};
  out.omegas = st.omega;
  out.ops.assign(spec.n_qubits,
                 std::vector<Matrix>(st.omega.size(), Matrix::Zero(d, d)));
  for (int qb = 0; qb < spec.n_qubits; ++qb)
    for (std::size_t k = 0; k < st.omega.size(); ++k)
      for (const auto& e : st.entries[qb][k])
        out.ops[qb][k](e.a, e.b) = e.s;
  return out;
}

Matrix lamb_shift_at(const AnnealSpec& spec, double t_us) {
  validate_anneal(spec);
  require_time(spec, t_us, "lamb_shift_at");
  AmeWorkspace ws(spec);
  ws.prepare(t_us / spec.t_f_us);
  const Stage& st = ws.stage();
  return st.vc * st.hls * st.vc.transpose();
}

Matrix non_unitality_witness(const AnnealSpec& spec, double t_us) {
  validate_anneal(spec);
  require_time(spec, t_us, "non_unitality_witness");
  AmeWorkspace ws(spec);
  ws.prepare(t_us / spec.t_f_us);
  const Stage& st = ws.stage();
  return st.vc * ws.witness_eig() * st.vc.transpose();
}

std::vector<Matrix> propagate_block(const AnnealSpec& spec,
                                    const std::vector<Matrix>& inputs,
                                    std::vector<TrajectoryRecord>* trajectory,
                                    int record_stride) {
  validate_anneal(spec);
  if (inputs.empty())
    throw ValidationError("propagate_block: need at least one input");
  AmeWorkspace ws(spec);
  const Eigen::Index d = ws.topology().d;
  const Eigen::Index m = static_cast<Eigen::Index>(inputs.size());
  for (const auto& x : inputs)
    if (x.rows() != d || x.cols() != d)
      throw ValidationError("propagate_block: input dimension mismatch");

  Matrix y(d, m * d);
  for (Eigen::Index i = 0; i < m; ++i) y.block(0, i * d, d, d) = inputs[i];
  const Complex tr0 = y.block(0, 0, d, d).trace();

  OdeOptions opt;
  opt.rtol = spec.ode_tol;
  opt.atol = spec.ode_tol;

  std::int64_t counter = 0;
  auto observer = [&](double t_ns, const Matrix& cur) {
    if (trajectory == nullptr) return;
    if (record_stride <= 0) return;
    if (counter++ % record_stride != 0 && t_ns != ws.t_f_ns()) return;
    TrajectoryRecord rec;
    rec.t_us = t_ns / 1000.0;
    rec.s = t_ns / ws.t_f_ns();
    const auto first = cur.block(0, 0, d, d);
    rec.trace_residual = std::abs((first.trace() - tr0));
    // the workspace stage was prepared at this time by the last rhs call
    ws.prepare(rec.s);
    const Matrix rotated =
        ws.stage().vc.transpose() * first * ws.stage().vc;
    rec.eig_populations = rotated.diagonal().real();
    const Matrix sym = 0.5 * (first + first.adjoint());
    rec.min_eig = Eigen::SelfAdjointEigenSolver<Matrix>(sym)
                      .eigenvalues()
                      .minCoeff();
    trajectory->push_back(std::move(rec));
  };

  auto rhs = [&](double t_ns, const Matrix& cur, Matrix& dcur) {
    ws.rhs(t_ns, cur, dcur);
  };

  const OdeStats st =
      integrate_dopri5(rhs, 0.0, ws.t_f_ns(), y, opt, observer);
  if (log_enabled()) {
    std::ostringstream os;
    os << "propagate_block: " << st.accepted << " accepted, " << st.rejected
       << " rejected steps, " << st.rhs_evals << " rhs evals";
    log_line(os.str());
  }

  std::vector<Matrix> out;
  out.reserve(m);
  for (Eigen::Index i = 0; i < m; ++i) out.push_back(y.block(0, i * d, d, d));
  return out;
}

Matrix propagate(const AnnealSpec& spec, const Matrix& rho0,
                 std::vector<TrajectoryRecord>* trajectory,
                 int record_stride) {
  return propagate_block(spec, {rho0}, trajectory, record_stride)[0];
}

InducedStatistics induced_channel_statistics(
    const AnnealSpec& spec, std::vector<TrajectoryRecord>* trajectory,
    int record_stride) {
  validate_anneal(spec);
  InducedStatistics out;
  const Matrix h0 = hamiltonian_at(spec, 0.0);
  const Matrix hf = hamiltonian_at(spec, spec.t_f_us);
  out.initial = eig_hermitian(h0);
  out.final_m = eig_hermitian(hf);
  const Eigen::Index d = h0.rows();

  // Gibbs populations from the spectrum, anchored at the ground energy
  out.p0 = RealVector(d);
  const double e0 = out.initial.values.minCoeff();
  double z = 0;
  for (Eigen::Index a = 0; a < d; ++a) {
    out.p0[a] = std::exp(-spec.beta * (out.initial.values[a] - e0));
    z += out.p0[a];
  }
  out.p0 /= z;

  // Gibbs state first so the trajectory hook sees it.
  std::vector<Matrix> inputs;
  inputs.reserve(d + 2);
  Matrix rho_g0 = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const Vector u = out.initial.vectors.col(a);
    rho_g0 += out.p0[a] * (u * u.adjoint());
  }
  inputs.push_back(rho_g0);
  for (Eigen::Index a = 0; a < d; ++a) {
    const Vector u = out.initial.vectors.col(a);
    inputs.push_back(u * u.adjoint());
  }
  inputs.push_back(Matrix::Identity(d, d));

  const std::vector<Matrix> evolved =
      propagate_block(spec, inputs, trajectory, record_stride);

  out.transition = RealMatrix(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    const Matrix rotated = out.final_m.vectors.adjoint() * evolved[a + 1] *
                           out.final_m.vectors;
    out.transition.col(a) = rotated.diagonal().real();
  }
  out.channel_identity = evolved[d + 1];
  out.rho_final = evolved[0];
  const Matrix rotated_f =
      out.final_m.vectors.adjoint() * out.rho_final * out.final_m.vectors;
  out.f = rotated_f.diagonal().real();
  return out;
}

}  // namespace fluxtheo
