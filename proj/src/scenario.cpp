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

#include "fluxtheo/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <vector>

#include "fluxtheo/errors.hpp"
#include "fluxtheo/experiment.hpp"
#include "fluxtheo/log.hpp"
#include "fluxtheo/random.hpp"

namespace fluxtheo {

namespace fs = std::filesystem;

namespace {

const Json& need(const Json& j, const char* key, const char* ctx) {
  if (!j.contains(key))
    throw ValidationError(std::string(ctx) + ": missing field '" + key + "'");
  return j.at(key);
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  fs::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (fs::path(base_dir) / p).string();
}

// Non finite values are not representable in JSON; emit them as strings.
Json num(double x) {
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

RealVector real_vector_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw ValidationError(what + ": expected a non-empty number array");
  RealVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw ValidationError(what + ": entry " + std::to_string(i) +
                            " is not a number");
    v[Eigen::Index(i)] = j[i].get<double>();
  }
  return v;
}

RealMatrix real_matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw ValidationError(what + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].size();
  RealMatrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ValidationError(what + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c)
      m(Eigen::Index(r), Eigen::Index(c)) = j[r][c].get<double>();
  }
  return m;
}

std::vector<Matrix> matrices_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw ValidationError(what + ": expected a non-empty array of matrices");
  std::vector<Matrix> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(matrix_from_json(j[i], what + "[" + std::to_string(i) + "]"));
  return out;
}

Json real_vector_to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Json real_matrix_to_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Json distribution_to_json(const ObservableDistribution& dist) {
  Json atoms = Json::array();
  for (const auto& a : dist.atoms()) atoms.push_back({a.v, a.p});
  return Json{{"atoms", atoms},
              {"total", num(dist.total())},
              {"mean", num(dist.mean())}};
}

VChoice observable_from_json(const Json& j) {
  const std::string name = j.value("observable", "log_p_q");
  if (name == "log_p_q") return VChoice::LogPQ;
  if (name == "log_cond_q") return VChoice::LogCondQ;
  if (name == "log_cond_f") return VChoice::LogCondF;
  throw ValidationError("observable must be log_p_q, log_cond_q or log_cond_f");
}

Schedule schedule_from_json(const Json& j, const std::string& base_dir) {
  if (!j.contains("schedule")) return Schedule::linear(33.7, 33.6);
  const Json& s = j.at("schedule");
  if (s.is_string()) {
    if (s.get<std::string>() == "linear") return Schedule::linear(33.7, 33.6);
    throw ValidationError("schedule: only the name 'linear' is recognized");
  }
  if (s.is_object() && s.contains("file"))
    return Schedule::from_csv(
        resolve(base_dir, s.at("file").get<std::string>()));
  if (s.is_object() && s.contains("table")) {
    const Json& t = s.at("table");
    const RealVector knots = real_vector_from_json(need(t, "s", "schedule"),
                                                   "schedule.table.s");
    const RealVector a = real_vector_from_json(need(t, "a", "schedule"),
                                               "schedule.table.a");
    const RealVector b = real_vector_from_json(need(t, "b", "schedule"),
                                               "schedule.table.b");
    return Schedule::from_table(knots, a, b);
  }
  if (s.is_object() && s.contains("a0"))
    return Schedule::linear(s.at("a0").get<double>(),
                            need(s, "b_end", "schedule").get<double>());
  throw ValidationError(
      "schedule: expected 'linear', {a0, b_end}, {table} or {file}");
}

std::uint64_t seed_of(const Json& j, const RunOverrides& ovr) {
  if (ovr.seed) return *ovr.seed;
  return j.value("seed", std::uint64_t{12345});
}

Json run_protocol_scenario(const Json& scn);
Json run_feedback_scenario(const Json& scn);
Json run_anneal_scenario(const Json& scn, const std::string& base_dir,
                         const std::string& out_dir, const RunOverrides& ovr);
Json run_fit_scenario(const Json& scn, const std::string& base_dir,
                      const std::string& out_dir, const RunOverrides& ovr);

}  // namespace

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty())
    throw ValidationError(what + ": expected a non-empty array of rows");
  const std::size_t cols = j[0].size();
  if (cols == 0) throw ValidationError(what + ": empty row");
  Matrix m(j.size(), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ValidationError(what + ": ragged rows");
    for (std::size_t c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      if (e.is_number()) {
        m(Eigen::Index(r), Eigen::Index(c)) = Complex(e.get<double>(), 0);
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() &&
                 e[1].is_number()) {
        m(Eigen::Index(r), Eigen::Index(c)) =
            Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ValidationError(what + ": entries are numbers or [re, im]");
      }
    }
  }
  return m;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const Json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ProtocolSpec protocol_from_json(const Json& j) {
  ProtocolSpec spec;
  spec.rho = matrix_from_json(need(j, "rho", "protocol"), "rho");
  spec.prepared =
      Measurement::from_ops(matrices_from_json(need(j, "prepared", "protocol"),
                                               "prepared"));
  spec.channel = Channel::from_kraus(
      matrices_from_json(need(j, "kraus", "protocol"), "kraus"));
  spec.final_m = Measurement::from_ops(
      matrices_from_json(need(j, "final", "protocol"), "final"));
  spec.q = real_vector_from_json(need(j, "q", "protocol"), "q");
  validate_protocol(spec);
  return spec;
}

UnitaryFeedbackSpec feedback_from_json(const Json& j) {
  UnitaryFeedbackSpec spec;
  spec.rho = matrix_from_json(need(j, "rho", "feedback"), "rho");
  spec.prepared = Measurement::from_ops(
      matrices_from_json(need(j, "prepared", "feedback"), "prepared"));
  spec.pre = matrix_from_json(need(j, "pre", "feedback"), "pre");
  spec.mid = Measurement::from_ops(
      matrices_from_json(need(j, "mid", "feedback"), "mid"));
  for (const Json& u : need(j, "controls", "feedback"))
    spec.controls.push_back(matrix_from_json(u, "controls"));
  const Json& finals = need(j, "final", "feedback");
  const Json& qs = need(j, "q", "feedback");
  if (!finals.is_array() || !qs.is_array() || finals.size() != qs.size())
    throw ValidationError("feedback: final and q need one entry per record");
  for (std::size_t r = 0; r < finals.size(); ++r) {
    spec.final_m.push_back(Measurement::from_ops(
        matrices_from_json(finals[r], "final[" + std::to_string(r) + "]")));
    spec.q.push_back(
        real_vector_from_json(qs[r], "q[" + std::to_string(r) + "]"));
  }
  if (j.contains("confusion"))
    spec.confusion = real_matrix_from_json(j.at("confusion"), "confusion");
  validate_unitary_feedback(spec);
  return spec;
}

AnnealSpec anneal_from_json(const Json& j, const std::string& base_dir) {
  AnnealSpec spec;
  spec.n_qubits = need(j, "n_qubits", "anneal").get<int>();
  spec.h = real_vector_from_json(need(j, "h", "anneal"), "h");
  if (j.contains("J")) {
    for (const Json& row : j.at("J")) {
      if (!row.is_array() || row.size() != 3)
        throw ValidationError("anneal: J rows are [i, j, value]");
      spec.j.emplace_back(row[0].get<int>(), row[1].get<int>(),
                          row[2].get<double>());
    }
  }
  spec.t_f_us = need(j, "t_f_us", "anneal").get<double>();
  spec.beta = need(j, "beta_per_GHz", "anneal").get<double>();
  spec.kappa = need(j, "kappa", "anneal").get<double>();
  spec.omega_c = need(j, "omega_c", "anneal").get<double>();
  spec.schedule = schedule_from_json(j, base_dir);
  spec.lamb_shift = j.value("lamb_shift", true);
  spec.ode_tol = j.value("ode_tol", 1e-8);
  spec.validate_endpoints = j.value("validate_endpoints", true);
  validate_anneal(spec);
  return spec;
}

Json anneal_to_json(const AnnealSpec& spec) {
  Json j;
  j["n_qubits"] = spec.n_qubits;
  j["h"] = real_vector_to_json(spec.h);
  Json couplings = Json::array();
  for (const auto& [a, b, val] : spec.j) couplings.push_back({a, b, val});
  j["J"] = couplings;
  j["t_f_us"] = spec.t_f_us;
  j["beta_per_GHz"] = spec.beta;
  j["kappa"] = spec.kappa;
  j["omega_c"] = spec.omega_c;
  j["lamb_shift"] = spec.lamb_shift;
  j["ode_tol"] = spec.ode_tol;
  j["validate_endpoints"] = spec.validate_endpoints;
  if (spec.schedule.is_linear()) {
    j["schedule"] = Json{{"a0", spec.schedule.a(0.0)},
                         {"b_end", spec.schedule.b(1.0)}};
  } else {
    // tables do not retain their knots; echo a sampled table
    const int n = 41;
    Json sk = Json::array(), sa = Json::array(), sb = Json::array();
    for (int i = 0; i < n; ++i) {
      const double s = double(i) / (n - 1);
      sk.push_back(s);
      sa.push_back(spec.schedule.a(s));
      sb.push_back(spec.schedule.b(s));
    }
    j["schedule"] = Json{{"table", Json{{"s", sk}, {"a", sa}, {"b", sb}}}};
  }
  return j;
}

std::string validate_scenario(const Json& scenario,
                              const std::string& base_dir) {
  try {
    const std::string kind = need(scenario, "kind", "scenario").get<std::string>();
    if (kind == "protocol") {
      protocol_from_json(scenario);
      observable_from_json(scenario);
    } else if (kind == "feedback") {
      feedback_from_json(scenario);
    } else if (kind == "anneal") {
      anneal_from_json(scenario, base_dir);
    } else if (kind == "fit") {
      AnnealSpec base = anneal_from_json(need(scenario, "base", "fit"), base_dir);
      (void)base;
      const bool has_data = scenario.contains("data");
      const bool has_synth = scenario.contains("synthetic");
      if (has_data == has_synth)
        throw ValidationError("fit: needs exactly one of 'data' or 'synthetic'");
      if (has_data)
        load_points_csv(resolve(base_dir, scenario.at("data").get<std::string>()));
      if (has_synth) {
        const Json& sy = scenario.at("synthetic");
        const Json& pts = need(sy, "points", "fit.synthetic");
        if (!pts.is_array() || pts.empty())
          throw ValidationError("fit.synthetic: points is a list of [J, t_f_us]");
        for (const Json& p : pts)
          if (!p.is_array() || p.size() != 2)
            throw ValidationError("fit.synthetic: points are [J, t_f_us] pairs");
      }
    } else {
      throw ValidationError("unknown scenario kind '" + kind + "'");
    }
    return kind;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }
}

namespace {

Json run_protocol_scenario(const Json& scn) {
  const ProtocolSpec spec = protocol_from_json(scn);
  const VChoice obs = observable_from_json(scn);

  Json out;
  out["kind"] = "protocol";
  out["dim"] = spec.rho.rows();
  out["observable"] = scn.value("observable", "log_p_q");

  const ObservableDistribution fwd = forward_pdf(spec, obs);
  out["forward"] = distribution_to_json(fwd);
  out["jarzynski_residual"] = num(jarzynski_residual(spec, obs));
  out["reverse_pseudo"] = distribution_to_json(reverse_pseudo_pdf(spec));

  const Efficacy eff = efficacy(spec);
  out["efficacy"] = Json{{"atom_route", num(eff.atom_route)},
                         {"closed_form", num(eff.closed_form)},
                         {"closed_form_valid", eff.closed_form_valid},
                         {"gamma", num(eff.gamma)}};
  out["gamma_upper_bound"] = num(gamma_upper_bound(spec));

  const SecondLawCheck law = second_law_check(spec);
  out["second_law"] = Json{{"mean_v", num(law.mean_v)},
                           {"gamma", num(law.gamma)},
                           {"lower_bound", num(law.lower_bound)},
                           {"margin", num(law.margin)},
                           {"holds", law.holds}};

  const BistochasticityReport bis = bistochasticity_report(spec);
  out["bistochasticity"] =
      Json{{"unital", bis.unital},
           {"microreversible", bis.microreversible},
           {"forward_col_residual", num(bis.forward_col_residual)},
           {"forward_row_residual", num(bis.forward_row_residual)},
           {"reverse_col_residual", num(bis.reverse_col_residual)},
           {"symmetry_residual", num(bis.symmetry_residual)}};

  std::optional<std::pair<Matrix, double>> thermal;
  if (scn.contains("thermal")) {
    const Json& th = scn.at("thermal");
    thermal = std::make_pair(
        matrix_from_json(need(th, "h_final", "thermal"), "thermal.h_final"),
        need(th, "beta", "thermal").get<double>());
  }
  const EntropyDecomposition ent = entropy_decomposition(spec, thermal);
  Json je{{"mean_v", num(ent.mean_v)},
          {"cross_term", num(ent.cross_term)},
          {"h_f", num(ent.h_f)},
          {"h_p", num(ent.h_p)},
          {"rhs_general", num(ent.rhs_general)},
          {"residual_general", num(ent.residual_general)},
          {"general_infinite", ent.general_infinite},
          {"projective", ent.projective}};
  if (ent.projective) {
    je["s_out"] = num(ent.s_out);
    je["s_in"] = num(ent.s_in);
    je["s_rel"] = num(ent.s_rel);
    je["residual_projective_a"] = num(ent.residual_projective_a);
    je["s_ref"] = num(ent.s_ref);
    je["heat_like_term"] = num(ent.heat_like_term);
    je["residual_projective_b"] = num(ent.residual_projective_b);
    je["heat_term_bound"] = num(ent.heat_term_bound);
    je["heat_term_bound_holds"] = ent.heat_term_bound_holds;
    if (ent.thermal) {
      je["minus_beta_heat"] = num(ent.minus_beta_heat);
      je["residual_thermal"] = num(ent.residual_thermal);
    }
  }
  out["entropy"] = je;

  Json mgfs = Json::array();
  std::vector<double> lambdas{0.5};
  if (scn.contains("lambda")) {
    lambdas.clear();
    for (const Json& l : scn.at("lambda")) lambdas.push_back(l.get<double>());
  }
  for (const double l : lambdas) {
    const MgfIdentityCheck mc = mgf_identity_check(spec, l);
    Json m{{"lambda", l},
           {"chi_forward", num(mc.chi_forward)},
           {"chi_reverse", num(mc.chi_reverse)},
           {"residual", num(mc.residual)}};
    if (mc.closed_form) {
      m["closed_form"] = num(*mc.closed_form);
      m["closed_form_residual"] = num(mc.closed_form_residual);
    }
    mgfs.push_back(m);
  }
  out["mgf"] = mgfs;

  try {
    const CrooksCheck ck = crooks_check(spec);
    out["crooks"] = Json{{"unitality_residual", num(ck.unitality_residual)},
                         {"max_atom_residual", num(ck.max_atom_residual)},
                         {"atoms_compared", ck.atoms_compared}};
  } catch (const DomainError& e) {
    out["crooks"] = Json{{"skipped", e.what()}};
  }
  return out;
}

Json run_feedback_scenario(const Json& scn) {
  const UnitaryFeedbackSpec spec = feedback_from_json(scn);
  const FeedbackProtocol fb = build_unitary_feedback(spec);

  Json out;
  out["kind"] = "feedback";
  out["dim"] = spec.rho.rows();
  out["records"] = spec.controls.size();

  const ObservableDistribution fwd = feedback_forward_pdf(fb);
  out["forward"] = distribution_to_json(fwd);
  out["reverse_pseudo"] = distribution_to_json(feedback_reverse_pseudo_pdf(fb));

  const FeedbackEfficacy eff = feedback_efficacy(fb);
  out["efficacy"] = Json{{"atom_route", num(eff.atom_route)},
                         {"closed_form", num(eff.closed_form)},
                         {"gamma", num(eff.gamma)},
                         {"control_loop_closed_form",
                          num(unitary_feedback_efficacy_closed_form(spec))}};

  const double lambda = scn.value("lambda", 0.5);
  try {
    const FeedbackMgf mgf = feedback_mgf_identity(fb, lambda);
    out["mgf"] = Json{{"lambda", lambda},
                      {"chi_forward", num(mgf.chi_forward)},
                      {"middle", num(mgf.middle)},
                      {"chi_reverse", num(mgf.chi_reverse)},
                      {"max_residual", num(mgf.max_residual)}};
  } catch (const DomainError& e) {
    out["mgf"] = Json{{"skipped", e.what()}};
  }

  const MutualInfoResult mi = mutual_info_pdf(spec);
  out["mutual_info"] =
      Json{{"pdf", distribution_to_json(mi.pdf)},
           {"integral", num(mi.integral)},
           {"mean_info", num(mi.mean_info)},
           {"record_marginal", real_vector_to_json(mi.record_marginal)},
           {"rho_hat_herm_residual", num(mi.rho_hat_herm_residual)},
           {"rho_hat_trace_residual", num(mi.rho_hat_trace_residual)},
           {"rho_hat_min_eig", num(mi.rho_hat_min_eig)}};
  return out;
}

Json run_anneal_scenario(const Json& scn, const std::string& base_dir,
                         const std::string& out_dir, const RunOverrides& ovr) {
  AnnealSpec spec = anneal_from_json(scn, base_dir);
  if (ovr.ode_tol) spec.ode_tol = *ovr.ode_tol;
  if (ovr.schedule_csv) spec.schedule = Schedule::from_csv(*ovr.schedule_csv);
  validate_anneal(spec);

  std::vector<TrajectoryRecord> traj;
  const InducedStatistics st = induced_channel_statistics(spec, &traj);
  const EndpointData ep = anneal_endpoints(spec);
  const QjeCheck qje = qje_from_stats(spec, ep, st);
  const FirstMomentCheck fm = first_moment_from_stats(spec, ep, st);

  Json out;
  out["kind"] = "anneal";
  out["dim"] = ep.p0.size();
  out["spec"] = anneal_to_json(spec);
  out["ln_z0"] = ep.ln_z0;
  out["ln_zf"] = ep.ln_zf;
  out["delta_f"] = ep.delta_f;
  out["initial_energies"] = real_vector_to_json(ep.initial.values);
  out["final_energies"] = real_vector_to_json(ep.final_m.values);
  out["p0"] = real_vector_to_json(ep.p0);
  out["f"] = real_vector_to_json(st.f);
  out["transition"] = real_matrix_to_json(st.transition);
  out["mean_v"] = num(mean_v_from_f(ep, spec.beta, st.f));
  out["qje"] = Json{{"transition_route", num(qje.transition_route)},
                    {"gamma", num(qje.gamma)},
                    {"residual", num(qje.residual)}};
  out["first_moment"] = Json{{"lhs", num(fm.lhs)},
                             {"rhs", num(fm.rhs)},
                             {"residual", num(fm.residual)}};

  double max_trace = 0;
  for (const auto& rec : traj) max_trace = std::max(max_trace, rec.trace_residual);
  out["trajectory_rows"] = traj.size();
  out["max_trace_residual"] = num(max_trace);

  {
    std::ofstream tf(fs::path(out_dir) / "trajectory.csv");
    if (!tf) throw ValidationError("cannot write trajectory.csv in " + out_dir);
    tf << "t_us,s,trace_residual";
    const Eigen::Index d = ep.p0.size();
    for (Eigen::Index b = 0; b < d; ++b) tf << ",pop_" << b;
    tf << '\n';
    for (const auto& rec : traj) {
      tf << format_g17(rec.t_us) << ',' << format_g17(rec.s) << ','
         << format_g17(rec.trace_residual);
      for (Eigen::Index b = 0; b < rec.eig_populations.size(); ++b)
        tf << ',' << format_g17(rec.eig_populations[b]);
      tf << '\n';
    }
  }

  const std::int64_t shots = scn.value("emit_counts", std::int64_t{0});
  if (shots > 0) {
    RealVector w = st.f.cwiseMax(0.0);
    w /= w.sum();
    Rng rng(seed_of(scn, ovr));
    const auto counts = multinomial_sample(w, shots, rng);
    std::ofstream cf(fs::path(out_dir) / "counts.csv");
    if (!cf) throw ValidationError("cannot write counts.csv in " + out_dir);
    cf << "state_label,count\n";
    for (std::size_t b = 0; b < counts.size(); ++b)
      cf << b << ',' << counts[b] << '\n';
    out["counts_shots"] = shots;
  }
  return out;
}

Json run_fit_scenario(const Json& scn, const std::string& base_dir,
                      const std::string& out_dir, const RunOverrides& ovr) {
  AnnealSpec base = anneal_from_json(need(scn, "base", "fit"), base_dir);
  if (ovr.ode_tol) base.ode_tol = *ovr.ode_tol;
  if (ovr.schedule_csv) base.schedule = Schedule::from_csv(*ovr.schedule_csv);

  std::vector<ExperimentPoint> pts;
  std::optional<double> kappa_true;
  if (scn.contains("data")) {
    pts = load_points_csv(resolve(base_dir, scn.at("data").get<std::string>()));
  } else {
    const Json& sy = need(scn, "synthetic", "fit");
    const std::int64_t shots = sy.value("shots", std::int64_t{0});
    const std::uint64_t seed = seed_of(sy, ovr);
    AnnealSpec gen = base;
    gen.kappa = sy.value("kappa_true", base.kappa);
    kappa_true = gen.kappa;
    std::uint64_t i = 0;
    for (const Json& p : need(sy, "points", "fit.synthetic")) {
      pts.push_back(synthetic_point(gen, p[0].get<double>(),
                                    p[1].get<double>(), shots, seed + i));
      ++i;
    }
    save_points_csv((fs::path(out_dir) / "points.csv").string(), pts, shots);
  }

  FitOptions opt;
  opt.kappa_min = scn.value("kappa_min", opt.kappa_min);
  opt.kappa_max = scn.value("kappa_max", opt.kappa_max);
  opt.grid_per_decade = scn.value("grid_per_decade", opt.grid_per_decade);
  opt.ln_kappa_tol = scn.value("ln_kappa_tol", opt.ln_kappa_tol);

  const FitResult res = fit_kappa(base, pts, opt);

  Json out;
  out["kind"] = "fit";
  out["kappa"] = res.kappa;
  out["msd"] = num(res.msd);
  out["evaluations"] = res.evaluations;
  Json trace = Json::array();
  for (const auto& [k, m] : res.trace) trace.push_back({k, m});
  out["trace"] = trace;
  out["points"] = pts.size();
  if (kappa_true) {
    out["kappa_true"] = *kappa_true;
    out["kappa_rel_error"] = num(std::abs(res.kappa - *kappa_true) / *kappa_true);
  }
  return out;
}

}  // namespace

Json run_scenario(const Json& scenario, const std::string& base_dir,
                  const std::string& out_dir, const RunOverrides& ovr) {
  const std::string kind = validate_scenario(scenario, base_dir);
  fs::create_directories(out_dir);

  Json out;
  try {
    if (kind == "protocol") {
      out = run_protocol_scenario(scenario);
    } else if (kind == "feedback") {
      out = run_feedback_scenario(scenario);
    } else if (kind == "anneal") {
      out = run_anneal_scenario(scenario, base_dir, out_dir, ovr);
    } else {
      out = run_fit_scenario(scenario, base_dir, out_dir, ovr);
    }
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("scenario: ") + e.what());
  }

  std::ofstream rf(fs::path(out_dir) / "results.json");
  if (!rf) throw ValidationError("cannot write results.json in " + out_dir);
  rf << out.dump(2) << '\n';
  return out;
}

}  // namespace fluxtheo
