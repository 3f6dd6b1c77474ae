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

#include "fluxtheo/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/log.hpp"
#include "fluxtheo/random.hpp"

namespace fluxtheo {

namespace {

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

RealVector gibbs_weights(const RealVector& energies, double beta) {
  const double e0 = energies.minCoeff();
  RealVector w(energies.size());
  for (Eigen::Index i = 0; i < energies.size(); ++i)
    w[i] = std::exp(-beta * (energies[i] - e0));
  return w / w.sum();
}

AnnealSpec point_spec(const AnnealSpec& base, double j, double t_f_us,
                      double kappa) {
  AnnealSpec spec = base;
  if (spec.j.empty())
    throw ValidationError("experiment: base spec needs at least one coupling");
  for (auto& [a, b, val] : spec.j) {
    (void)a;
    (void)b;
    val = j;
  }
  spec.t_f_us = t_f_us;
  spec.kappa = kappa;
  return spec;
}

// Final state populations in the energy-ascending eigenbasis of H(t_f),
// starting from the Gibbs state of H(0). One column propagation.
RealVector final_populations(const AnnealSpec& spec) {
  const Spectrum s0 = eig_hermitian(hamiltonian_at(spec, 0.0));
  const Spectrum sf = eig_hermitian(hamiltonian_at(spec, spec.t_f_us));
  const RealVector w0 = gibbs_weights(s0.values, spec.beta);
  Matrix rho = Matrix::Zero(s0.values.size(), s0.values.size());
  for (Eigen::Index a = 0; a < s0.values.size(); ++a)
    rho += w0[a] * (s0.vectors.col(a) * s0.vectors.col(a).adjoint());
  const Matrix rho_f = propagate(spec, rho);
  const Matrix rotated = sf.vectors.adjoint() * rho_f * sf.vectors;
  return rotated.diagonal().real();
}

}  // namespace

EndpointData anneal_endpoints(const AnnealSpec& spec) {
  if (spec.beta <= 0)
    throw DomainError("anneal_endpoints: needs beta > 0 for free energies");
  EndpointData ep;
  ep.initial = eig_hermitian(hamiltonian_at(spec, 0.0));
  ep.final_m = eig_hermitian(hamiltonian_at(spec, spec.t_f_us));
  ep.ln_z0 = log_partition_from_levels(ep.initial.values, spec.beta);
  ep.ln_zf = log_partition_from_levels(ep.final_m.values, spec.beta);
  ep.delta_f = (ep.ln_z0 - ep.ln_zf) / spec.beta;
  ep.p0 = gibbs_weights(ep.initial.values, spec.beta);
  ep.mean_e0 = ep.p0.dot(ep.initial.values);
  return ep;
}

double mean_v_from_f(const EndpointData& ep, double beta,
                     const RealVector& f) {
  if (f.size() != ep.final_m.values.size())
    throw ValidationError("mean_v_from_f: distribution size mismatch");
  if (std::abs(f.sum() - 1.0) > 1e-6)
    throw ValidationError("mean_v_from_f: distribution must sum to 1, got " +
                          g17(f.sum()));
  return beta * (f.dot(ep.final_m.values) - ep.mean_e0 - ep.delta_f);
}

QjeCheck qje_from_stats(const AnnealSpec& spec, const EndpointData& ep,
                        const InducedStatistics& st) {
  QjeCheck out;
  const Eigen::Index d = ep.p0.size();
  double lhs = 0;
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      const double de = ep.final_m.values[b] - ep.initial.values[a];
      lhs += ep.p0[a] * st.transition(b, a) *
             std::exp(-spec.beta * (de - ep.delta_f));
    }
  }
  out.transition_route = lhs;

  const RealVector wf = gibbs_weights(ep.final_m.values, spec.beta);
  const Matrix id_rot =
      ep.final_m.vectors.adjoint() * st.channel_identity * ep.final_m.vectors;
  double gamma = 0;
  for (Eigen::Index b = 0; b < d; ++b)
    gamma += wf[b] * id_rot(b, b).real();
  out.gamma = gamma;
  out.residual = std::abs(out.transition_route - out.gamma);
  return out;
}

QjeCheck qje_experiment_check(const AnnealSpec& spec) {
  const EndpointData ep = anneal_endpoints(spec);
  const InducedStatistics st = induced_channel_statistics(spec);
  return qje_from_stats(spec, ep, st);
}

FirstMomentCheck first_moment_from_stats(const AnnealSpec& spec,
                                         const EndpointData& ep,
                                         const InducedStatistics& st) {
  FirstMomentCheck out;
  out.lhs = mean_v_from_f(ep, spec.beta, st.f);

  const Eigen::Index d = ep.p0.size();
  const Matrix rho_f = 0.5 * (st.rho_final + st.rho_final.adjoint());
  const RealVector wf = gibbs_weights(ep.final_m.values, spec.beta);
  Matrix rho_g = Matrix::Zero(d, d);
  for (Eigen::Index b = 0; b < d; ++b)
    rho_g +=
        wf[b] * (ep.final_m.vectors.col(b) * ep.final_m.vectors.col(b).adjoint());

  // S(rho_Gibbs(0)) = beta <e0> + ln Z0, exact from the spectrum
  const double s_g0 = spec.beta * ep.mean_e0 + ep.ln_z0;
  out.rhs = relative_entropy(rho_f, rho_g) + von_neumann_entropy(rho_f) - s_g0;
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

FirstMomentCheck first_moment_check(const AnnealSpec& spec) {
  const EndpointData ep = anneal_endpoints(spec);
  const InducedStatistics st = induced_channel_statistics(spec);
  return first_moment_from_stats(spec, ep, st);
}

ExperimentPoint synthetic_point(const AnnealSpec& base, double j,
                                double t_f_us, std::int64_t shots,
                                std::uint64_t seed) {
  const AnnealSpec spec = point_spec(base, j, t_f_us, base.kappa);
  RealVector f = final_populations(spec);
  if (shots > 0) {
    RealVector w = f.cwiseMax(0.0);
    w /= w.sum();
    Rng rng(seed);
    const std::vector<std::int64_t> counts = multinomial_sample(w, shots, rng);
    for (Eigen::Index i = 0; i < f.size(); ++i)
      f[i] = double(counts[i]) / double(shots);
  }
  return ExperimentPoint{j, t_f_us, std::move(f)};
}

std::vector<ExperimentPoint> load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open points file: " + path);

  std::vector<std::pair<double, double>> order;
  std::map<std::pair<double, double>, std::vector<std::pair<int, double>>>
      groups;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (lineno == 1 && line.find("state_label") != std::string::npos)
      continue;  // header
    std::istringstream ss(line);
    std::string cell;
    double vals[4];
    for (int c = 0; c < 4; ++c) {
      if (!std::getline(ss, cell, ','))
        throw ValidationError(path + ":" + std::to_string(lineno) +
                              ": expected J,t_f_us,state_label,count");
      try {
        vals[c] = std::stod(cell);
      } catch (const std::exception&) {
        throw ValidationError(path + ":" + std::to_string(lineno) +
                              ": bad number '" + cell + "'");
      }
    }
    const auto key = std::make_pair(vals[0], vals[1]);
    if (groups.find(key) == groups.end()) order.push_back(key);
    const int label = int(vals[2]);
    if (label < 0 || double(label) != vals[2] || vals[3] < 0)
      throw ValidationError(path + ":" + std::to_string(lineno) +
                            ": labels are indices >= 0, counts >= 0");
    groups[key].push_back({label, vals[3]});
  }

  std::vector<ExperimentPoint> pts;
  for (const auto& key : order) {
    const auto& rows = groups[key];
    int max_label = 0;
    for (const auto& [label, count] : rows) {
      (void)count;
      max_label = std::max(max_label, label);
    }
    RealVector f = RealVector::Zero(max_label + 1);
    for (const auto& [label, count] : rows) f[label] += count;
    const double total = f.sum();
    if (total <= 0)
      throw ValidationError(path + ": point J=" + g17(key.first) +
                            " t_f=" + g17(key.second) + " has zero counts");
    f /= total;
    pts.push_back(ExperimentPoint{key.first, key.second, std::move(f)});
  }
  if (pts.empty()) throw ValidationError(path + ": no data rows");
  return pts;
}

void save_points_csv(const std::string& path,
                     const std::vector<ExperimentPoint>& pts,
                     std::int64_t shots_hint) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write points file: " + path);
  out << "J,t_f_us,state_label,count\n";
  for (const auto& pt : pts) {
    for (Eigen::Index b = 0; b < pt.f.size(); ++b) {
      const double count =
          shots_hint > 0 ? pt.f[b] * double(shots_hint) : pt.f[b];
      out << g17(pt.j) << ',' << g17(pt.t_f_us) << ',' << b << ','
          << g17(count) << '\n';
    }
  }
}

double msd_mean_v(const AnnealSpec& base,
                  const std::vector<ExperimentPoint>& pts, double kappa) {
  if (pts.empty()) throw ValidationError("msd_mean_v: no points");
  double acc = 0;
  for (const auto& pt : pts) {
    const AnnealSpec spec = point_spec(base, pt.j, pt.t_f_us, kappa);
    const EndpointData ep = anneal_endpoints(spec);
    const double v_th = mean_v_from_f(ep, spec.beta, final_populations(spec));
    const double v_meas = mean_v_from_f(ep, spec.beta, pt.f);
    acc += (v_meas - v_th) * (v_meas - v_th);
  }
  return acc / double(pts.size());
}

FitResult fit_kappa(const AnnealSpec& base,
                    const std::vector<ExperimentPoint>& pts,
                    const FitOptions& opt) {
  if (!(opt.kappa_min > 0) || !(opt.kappa_max > opt.kappa_min))
    throw ValidationError("fit_kappa: need 0 < kappa_min < kappa_max");
  if (opt.grid_per_decade < 2)
    throw ValidationError("fit_kappa: grid_per_decade must be >= 2");

  FitResult res;
  auto eval = [&](double ln_k) {
    const double k = std::exp(ln_k);
    const double m = msd_mean_v(base, pts, k);
    res.evaluations++;
    res.trace.push_back({k, m});
    if (log_enabled())
      log_line("fit_kappa: kappa=" + g17(k) + " msd=" + g17(m));
    return m;
  };

  const double la = std::log(opt.kappa_min), lb = std::log(opt.kappa_max);
  const int n_grid = std::max(
      2, int(std::lround((lb - la) / std::log(10.0) * opt.grid_per_decade)) +
             1);
  std::vector<double> lk(n_grid), ms(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    lk[i] = la + (lb - la) * double(i) / double(n_grid - 1);
    ms[i] = eval(lk[i]);
  }
  int best = int(std::min_element(ms.begin(), ms.end()) - ms.begin());

  double a = lk[std::max(0, best - 1)];
  double b = lk[std::min(n_grid - 1, best + 1)];
  double best_x = lk[best], best_m = ms[best];

  const double r = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - r * (b - a), x2 = a + r * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > opt.ln_kappa_tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - r * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + r * (b - a);
      f2 = eval(x2);
    }
  }
  if (f1 < best_m) {
    best_m = f1;
    best_x = x1;
  }
  if (f2 < best_m) {
    best_m = f2;
    best_x = x2;
  }
  res.kappa = std::exp(best_x);
  res.msd = best_m;
  return res;
}

ProtocolSpec closed_system_protocol(const Matrix& h0, const Matrix& hf,
                                    const Channel& u, double beta) {
  if (h0.rows() != hf.rows() || h0.rows() != u.dim())
    throw ValidationError("closed_system_protocol: dimension mismatch");
  if (beta <= 0)
    throw DomainError("closed_system_protocol: needs beta > 0");
  const Spectrum s0 = eig_hermitian(h0);
  const Spectrum sf = eig_hermitian(hf);
  const Eigen::Index d = h0.rows();

  std::vector<Matrix> p_ops, q_ops;
  for (Eigen::Index a = 0; a < d; ++a) {
    p_ops.push_back(s0.vectors.col(a) * s0.vectors.col(a).adjoint());
    q_ops.push_back(sf.vectors.col(a) * sf.vectors.col(a).adjoint());
  }

  ProtocolSpec spec;
  spec.prepared = Measurement::from_ops(p_ops);
  spec.final_m = Measurement::from_ops(q_ops);
  spec.channel = u;
  const RealVector w0 = gibbs_weights(s0.values, beta);
  spec.rho = Matrix::Zero(d, d);
  for (Eigen::Index a = 0; a < d; ++a) spec.rho += w0[a] * p_ops[a];
  spec.q = gibbs_weights(sf.values, beta);
  return spec;
}

}  // namespace fluxtheo
