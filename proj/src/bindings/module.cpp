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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fluxtheo/acceptance.hpp"
#include "fluxtheo/ame.hpp"
#include "fluxtheo/bath.hpp"
#include "fluxtheo/channels.hpp"
#include "fluxtheo/errors.hpp"
#include "fluxtheo/experiment.hpp"
#include "fluxtheo/feedback.hpp"
#include "fluxtheo/fluctuation.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/measurements.hpp"
#include "fluxtheo/random.hpp"
#include "fluxtheo/schedule.hpp"

namespace py = pybind11;
using namespace fluxtheo;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Fluctuation relations and efficacies of quantum channels, with an "
      "adiabatic master equation backend";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError",
                                         PyExc_RuntimeError);

  // linear algebra
  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("values", &Spectrum::values)
      .def_readonly("vectors", &Spectrum::vectors);
  m.def("eig_hermitian", &eig_hermitian, py::arg("a"));
  m.def("von_neumann_entropy", &von_neumann_entropy, py::arg("rho"));
  m.def("relative_entropy", &relative_entropy, py::arg("rho"), py::arg("sigma"));
  m.def("shannon_entropy", &shannon_entropy, py::arg("p"));
  m.def("classical_relative_entropy", &classical_relative_entropy,
        py::arg("p"), py::arg("q"));
  m.def("trace_norm", &trace_norm, py::arg("a"));
  m.def("operator_norm", &operator_norm, py::arg("a"));
  m.def("purity", &purity, py::arg("rho"));
  m.def("gibbs_state", &gibbs_state, py::arg("h"), py::arg("beta"));
  m.def("free_energy", &free_energy, py::arg("h"), py::arg("beta"));
  m.def("log_partition_function", &log_partition_function, py::arg("h"),
        py::arg("beta"));
  m.def("log_partition_from_levels", &log_partition_from_levels,
        py::arg("levels"), py::arg("beta"));

  // channels and measurements
  py::class_<Channel>(m, "Channel")
      .def(py::init<>())
      .def_static("from_kraus", &Channel::from_kraus, py::arg("kraus"),
                  py::arg("allow_trace_decreasing") = false)
      .def_static("unitary", &Channel::unitary, py::arg("u"))
      .def_static("identity", &Channel::identity, py::arg("dim"))
      .def_static("compose", &Channel::compose, py::arg("outer"),
                  py::arg("inner"))
      .def_property_readonly("dim", &Channel::dim)
      .def_property_readonly("kraus", &Channel::kraus)
      .def("apply", &Channel::apply, py::arg("x"))
      .def("dual_apply", &Channel::dual_apply, py::arg("x"))
      .def("tp_residual", &Channel::tp_residual)
      .def("unitality_residual", &Channel::unitality_residual)
      .def("is_unital", &Channel::is_unital, py::arg("tol") = 1e-8);

  py::class_<Measurement>(m, "Measurement")
      .def(py::init<>())
      .def_static("from_ops", &Measurement::from_ops, py::arg("ops"),
                  py::arg("labels") = std::vector<std::string>{})
      .def_property_readonly("n_outcomes", &Measurement::n_outcomes)
      .def_property_readonly("dim", &Measurement::dim)
      .def("op", &Measurement::op, py::arg("a"))
      .def("effect", &Measurement::effect, py::arg("a"))
      .def("label", &Measurement::label, py::arg("a"))
      .def("is_rank1_projective", &Measurement::is_rank1_projective,
           py::arg("tol") = 1e-9);

  py::class_<PreparedEnsemble>(m, "PreparedEnsemble")
      .def_readonly("probs", &PreparedEnsemble::probs)
      .def_readonly("states", &PreparedEnsemble::states)
      .def_readonly("has_state", &PreparedEnsemble::has_state);
  m.def("measure_prepare", &measure_prepare, py::arg("measurement"),
        py::arg("rho"));

  py::class_<MicroreversibilityReport>(m, "MicroreversibilityReport")
      .def_readonly("pass_", &MicroreversibilityReport::pass)
      .def_readonly("prepared_side_pass",
                    &MicroreversibilityReport::prepared_side_pass)
      .def_readonly("final_side_pass",
                    &MicroreversibilityReport::final_side_pass)
      .def_readonly("outcome_count_ok",
                    &MicroreversibilityReport::outcome_count_ok)
      .def_readonly("prep_residual", &MicroreversibilityReport::prep_residual)
      .def_readonly("prep_sum_residual",
                    &MicroreversibilityReport::prep_sum_residual)
      .def_readonly("final_trace_residual",
                    &MicroreversibilityReport::final_trace_residual)
      .def_readonly("failures", &MicroreversibilityReport::failures);
  m.def("check_microreversible", &check_microreversible, py::arg("prepared"),
        py::arg("final"), py::arg("tol") = 1e-9);

  py::class_<ReverseMeasurements>(m, "ReverseMeasurements")
      .def_readonly("prepared", &ReverseMeasurements::prepared)
      .def_readonly("final_m", &ReverseMeasurements::final_m)
      .def_readonly("rho_tilde", &ReverseMeasurements::rho_tilde);
  m.def(
      "build_reverse_measurements",
      [](const Measurement& p, const Measurement& q, const RealVector& qprobs,
         const Matrix& rho, const std::optional<Matrix>& rho_tilde,
         const std::vector<Matrix>& u_alpha, const std::vector<Matrix>& u_beta) {
        return build_reverse_measurements(p, q, qprobs, rho, rho_tilde,
                                          u_alpha, u_beta);
      },
      py::arg("prepared"), py::arg("final"), py::arg("q"), py::arg("rho"),
      py::arg("rho_tilde") = std::nullopt,
      py::arg("u_alpha") = std::vector<Matrix>{},
      py::arg("u_beta") = std::vector<Matrix>{});

  // distributions and protocols
  py::class_<Atom>(m, "Atom")
      .def_readonly("v", &Atom::v)
      .def_readonly("p", &Atom::p)
      .def("__repr__", [](const Atom& a) {
        return "Atom(v=" + std::to_string(a.v) + ", p=" + std::to_string(a.p) +
               ")";
      });

  py::class_<ObservableDistribution>(m, "ObservableDistribution")
      .def_static("from_atoms",
                  [](const std::vector<std::pair<double, double>>& pairs,
                     double merge_tol) {
                    std::vector<Atom> atoms;
                    for (const auto& [v, p] : pairs) atoms.push_back({v, p});
                    return ObservableDistribution::from_atoms(atoms, merge_tol);
                  },
                  py::arg("atoms"), py::arg("merge_tol") = 1e-9)
      .def_property_readonly("atoms",
                             [](const ObservableDistribution& d) {
                               return d.atoms();
                             })
      .def("__len__", &ObservableDistribution::size)
      .def("total", &ObservableDistribution::total)
      .def("mean", &ObservableDistribution::mean)
      .def("second_moment", &ObservableDistribution::second_moment)
      .def("mgf", &ObservableDistribution::mgf, py::arg("lam"));

  py::enum_<VChoice>(m, "VChoice")
      .value("LOG_P_Q", VChoice::LogPQ)
      .value("LOG_COND_Q", VChoice::LogCondQ)
      .value("LOG_COND_F", VChoice::LogCondF);

  py::class_<ProtocolSpec>(m, "ProtocolSpec")
      .def(py::init<>())
      .def_readwrite("rho", &ProtocolSpec::rho)
      .def_readwrite("prepared", &ProtocolSpec::prepared)
      .def_readwrite("channel", &ProtocolSpec::channel)
      .def_readwrite("final_m", &ProtocolSpec::final_m)
      .def_readwrite("q", &ProtocolSpec::q);
  m.def("validate_protocol", &validate_protocol, py::arg("spec"));

  py::class_<ForwardStatistics>(m, "ForwardStatistics")
      .def_readonly("ensemble", &ForwardStatistics::ensemble)
      .def_readonly("transition", &ForwardStatistics::transition)
      .def_readonly("f", &ForwardStatistics::f)
      .def_readonly("f_dephased", &ForwardStatistics::f_dephased);
  m.def("forward_statistics", &forward_statistics, py::arg("spec"));
  m.def("forward_pdf", &forward_pdf, py::arg("spec"), py::arg("v"));
  m.def("reverse_pseudo_pdf", &reverse_pseudo_pdf, py::arg("spec"));

  py::class_<Efficacy>(m, "Efficacy")
      .def_readonly("atom_route", &Efficacy::atom_route)
      .def_readonly("closed_form", &Efficacy::closed_form)
      .def_readonly("closed_form_valid", &Efficacy::closed_form_valid)
      .def_readonly("gamma", &Efficacy::gamma);
  m.def("efficacy", &efficacy, py::arg("spec"));
  m.def("jarzynski_residual", &jarzynski_residual, py::arg("spec"),
        py::arg("v"));
  m.def("mgf_projective_closed_form", &mgf_projective_closed_form,
        py::arg("rho_p"), py::arg("rho_q"), py::arg("channel"),
        py::arg("lam"));

  py::class_<MgfIdentityCheck>(m, "MgfIdentityCheck")
      .def_readonly("chi_forward", &MgfIdentityCheck::chi_forward)
      .def_readonly("chi_reverse", &MgfIdentityCheck::chi_reverse)
      .def_readonly("residual", &MgfIdentityCheck::residual)
      .def_readonly("closed_form", &MgfIdentityCheck::closed_form)
      .def_readonly("closed_form_residual",
                    &MgfIdentityCheck::closed_form_residual);
  m.def("mgf_identity_check", &mgf_identity_check, py::arg("spec"),
        py::arg("lam"));

  py::class_<CrooksCheck>(m, "CrooksCheck")
      .def_readonly("unitality_residual", &CrooksCheck::unitality_residual)
      .def_readonly("max_atom_residual", &CrooksCheck::max_atom_residual)
      .def_readonly("atoms_compared", &CrooksCheck::atoms_compared);
  m.def("crooks_check", &crooks_check, py::arg("spec"),
        py::arg("u_alpha") = std::vector<Matrix>{},
        py::arg("u_beta") = std::vector<Matrix>{});

  py::class_<BistochasticityReport>(m, "BistochasticityReport")
      .def_readonly("unital", &BistochasticityReport::unital)
      .def_readonly("microreversible", &BistochasticityReport::microreversible)
      .def_readonly("forward_col_residual",
                    &BistochasticityReport::forward_col_residual)
      .def_readonly("forward_row_residual",
                    &BistochasticityReport::forward_row_residual)
      .def_readonly("reverse_col_residual",
                    &BistochasticityReport::reverse_col_residual)
      .def_readonly("symmetry_residual",
                    &BistochasticityReport::symmetry_residual);
  m.def("bistochasticity_report", &bistochasticity_report, py::arg("spec"));

  m.def("gamma_upper_bound",
        py::overload_cast<const Channel&, const Matrix&>(&gamma_upper_bound),
        py::arg("channel"), py::arg("rho_q"));
  m.def("gamma_upper_bound",
        py::overload_cast<const ProtocolSpec&>(&gamma_upper_bound),
        py::arg("spec"));

  py::class_<EntropyDecomposition>(m, "EntropyDecomposition")
      .def_readonly("mean_v", &EntropyDecomposition::mean_v)
      .def_readonly("cross_term", &EntropyDecomposition::cross_term)
      .def_readonly("h_f", &EntropyDecomposition::h_f)
      .def_readonly("h_p", &EntropyDecomposition::h_p)
      .def_readonly("rhs_general", &EntropyDecomposition::rhs_general)
      .def_readonly("residual_general", &EntropyDecomposition::residual_general)
      .def_readonly("general_infinite", &EntropyDecomposition::general_infinite)
      .def_readonly("projective", &EntropyDecomposition::projective)
      .def_readonly("s_out", &EntropyDecomposition::s_out)
      .def_readonly("s_in", &EntropyDecomposition::s_in)
      .def_readonly("s_rel", &EntropyDecomposition::s_rel)
      .def_readonly("rhs_projective_a", &EntropyDecomposition::rhs_projective_a)
      .def_readonly("residual_projective_a",
                    &EntropyDecomposition::residual_projective_a)
      .def_readonly("projective_a_infinite",
                    &EntropyDecomposition::projective_a_infinite)
      .def_readonly("s_ref", &EntropyDecomposition::s_ref)
      .def_readonly("heat_like_term", &EntropyDecomposition::heat_like_term)
      .def_readonly("rhs_projective_b", &EntropyDecomposition::rhs_projective_b)
      .def_readonly("residual_projective_b",
                    &EntropyDecomposition::residual_projective_b)
      .def_readonly("thermal", &EntropyDecomposition::thermal)
      .def_readonly("minus_beta_heat", &EntropyDecomposition::minus_beta_heat)
      .def_readonly("residual_thermal", &EntropyDecomposition::residual_thermal)
      .def_readonly("heat_term_bound", &EntropyDecomposition::heat_term_bound)
      .def_readonly("heat_term_bound_holds",
                    &EntropyDecomposition::heat_term_bound_holds);
  m.def(
      "entropy_decomposition",
      [](const ProtocolSpec& spec,
         const std::optional<std::pair<Matrix, double>>& thermal) {
        return entropy_decomposition(spec, thermal);
      },
      py::arg("spec"), py::arg("thermal") = std::nullopt);

  py::class_<SecondLawCheck>(m, "SecondLawCheck")
      .def_readonly("mean_v", &SecondLawCheck::mean_v)
      .def_readonly("gamma", &SecondLawCheck::gamma)
      .def_readonly("lower_bound", &SecondLawCheck::lower_bound)
      .def_readonly("margin", &SecondLawCheck::margin)
      .def_readonly("holds", &SecondLawCheck::holds);
  m.def("second_law_check", &second_law_check, py::arg("spec"));

  // feedback
  py::class_<FeedbackBranch>(m, "FeedbackBranch")
      .def(py::init<>())
      .def_readwrite("map", &FeedbackBranch::map)
      .def_readwrite("final_m", &FeedbackBranch::final_m)
      .def_readwrite("q", &FeedbackBranch::q);
  py::class_<FeedbackProtocol>(m, "FeedbackProtocol")
      .def(py::init<>())
      .def_readwrite("rho", &FeedbackProtocol::rho)
      .def_readwrite("prepared", &FeedbackProtocol::prepared)
      .def_readwrite("branches", &FeedbackProtocol::branches);
  m.def("validate_feedback", &validate_feedback, py::arg("fb"));
  m.def("feedback_forward_pdf", &feedback_forward_pdf, py::arg("fb"));
  m.def("feedback_reverse_pseudo_pdf", &feedback_reverse_pseudo_pdf,
        py::arg("fb"));

  py::class_<FeedbackEfficacy>(m, "FeedbackEfficacy")
      .def_readonly("atom_route", &FeedbackEfficacy::atom_route)
      .def_readonly("closed_form", &FeedbackEfficacy::closed_form)
      .def_readonly("gamma", &FeedbackEfficacy::gamma);
  m.def("feedback_efficacy", &feedback_efficacy, py::arg("fb"));

  py::class_<FeedbackMgf>(m, "FeedbackMgf")
      .def_readonly("chi_forward", &FeedbackMgf::chi_forward)
      .def_readonly("middle", &FeedbackMgf::middle)
      .def_readonly("chi_reverse", &FeedbackMgf::chi_reverse)
      .def_readonly("max_residual", &FeedbackMgf::max_residual);
  m.def("feedback_mgf_identity", &feedback_mgf_identity, py::arg("fb"),
        py::arg("lam"));

  py::class_<UnitaryFeedbackSpec>(m, "UnitaryFeedbackSpec")
      .def(py::init<>())
      .def_readwrite("rho", &UnitaryFeedbackSpec::rho)
      .def_readwrite("prepared", &UnitaryFeedbackSpec::prepared)
      .def_readwrite("pre", &UnitaryFeedbackSpec::pre)
      .def_readwrite("mid", &UnitaryFeedbackSpec::mid)
      .def_readwrite("controls", &UnitaryFeedbackSpec::controls)
      .def_readwrite("final_m", &UnitaryFeedbackSpec::final_m)
      .def_readwrite("q", &UnitaryFeedbackSpec::q)
      .def_readwrite("confusion", &UnitaryFeedbackSpec::confusion);
  m.def("validate_unitary_feedback", &validate_unitary_feedback,
        py::arg("spec"));
  m.def("build_unitary_feedback", &build_unitary_feedback, py::arg("spec"));
  m.def("unitary_feedback_efficacy_closed_form",
        &unitary_feedback_efficacy_closed_form, py::arg("spec"));

  py::class_<MutualInfoResult>(m, "MutualInfoResult")
      .def_readonly("pdf", &MutualInfoResult::pdf)
      .def_readonly("integral", &MutualInfoResult::integral)
      .def_readonly("mean_info", &MutualInfoResult::mean_info)
      .def_readonly("info", &MutualInfoResult::info)
      .def_readonly("record_marginal", &MutualInfoResult::record_marginal)
      .def_readonly("rho_hat", &MutualInfoResult::rho_hat)
      .def_readonly("rho_hat_herm_residual",
                    &MutualInfoResult::rho_hat_herm_residual)
      .def_readonly("rho_hat_trace_residual",
                    &MutualInfoResult::rho_hat_trace_residual)
      .def_readonly("rho_hat_min_eig", &MutualInfoResult::rho_hat_min_eig);
  m.def("mutual_info_pdf", &mutual_info_pdf, py::arg("spec"));

  // schedules and baths
  py::class_<Schedule>(m, "Schedule")
      .def_static("linear", &Schedule::linear, py::arg("a0"), py::arg("b_end"))
      .def_static("from_table", &Schedule::from_table, py::arg("s"),
                  py::arg("a"), py::arg("b"))
      .def_static("from_csv", &Schedule::from_csv, py::arg("path"))
      .def("a", &Schedule::a, py::arg("s"))
      .def("b", &Schedule::b, py::arg("s"));

  py::class_<BathParams>(m, "BathParams")
      .def(py::init<double, double, double>(), py::arg("beta"),
           py::arg("kappa"), py::arg("omega_c"))
      .def_readwrite("beta", &BathParams::beta)
      .def_readwrite("kappa", &BathParams::kappa)
      .def_readwrite("omega_c", &BathParams::omega_c);
  m.def("ohmic_rate", &ohmic_rate, py::arg("bath"), py::arg("omega"));
  m.def("lamb_shift_integral", &lamb_shift_integral, py::arg("bath"),
        py::arg("omega"), py::arg("rel_tol") = 1e-9);

  // anneal
  py::class_<AnnealSpec>(m, "AnnealSpec")
      .def(py::init<>())
      .def_readwrite("n_qubits", &AnnealSpec::n_qubits)
      .def_readwrite("h", &AnnealSpec::h)
      .def_readwrite("j", &AnnealSpec::j)
      .def_readwrite("t_f_us", &AnnealSpec::t_f_us)
      .def_readwrite("beta", &AnnealSpec::beta)
      .def_readwrite("kappa", &AnnealSpec::kappa)
      .def_readwrite("omega_c", &AnnealSpec::omega_c)
      .def_readwrite("schedule", &AnnealSpec::schedule)
      .def_readwrite("lamb_shift", &AnnealSpec::lamb_shift)
      .def_readwrite("ode_tol", &AnnealSpec::ode_tol)
      .def_readwrite("validate_endpoints", &AnnealSpec::validate_endpoints);
  m.def("validate_anneal", &validate_anneal, py::arg("spec"));
  m.def("hamiltonian_at", &hamiltonian_at, py::arg("spec"), py::arg("t_us"));

  py::class_<LindbladSet>(m, "LindbladSet")
      .def_readonly("spectrum", &LindbladSet::spectrum)
      .def_readonly("omegas", &LindbladSet::omegas)
      .def_readonly("ops", &LindbladSet::ops);
  m.def("lindblad_ops_at", &lindblad_ops_at, py::arg("spec"), py::arg("t_us"));
  m.def("lamb_shift_at", &lamb_shift_at, py::arg("spec"), py::arg("t_us"));
  m.def("non_unitality_witness", &non_unitality_witness, py::arg("spec"),
        py::arg("t_us"));

  py::class_<TrajectoryRecord>(m, "TrajectoryRecord")
      .def_readonly("t_us", &TrajectoryRecord::t_us)
      .def_readonly("s", &TrajectoryRecord::s)
      .def_readonly("trace_residual", &TrajectoryRecord::trace_residual)
      .def_readonly("min_eig", &TrajectoryRecord::min_eig)
      .def_readonly("eig_populations", &TrajectoryRecord::eig_populations);

  m.def(
      "propagate",
      [](const AnnealSpec& spec, const Matrix& rho0) {
        return propagate(spec, rho0);
      },
      py::arg("spec"), py::arg("rho0"));
  m.def(
      "propagate_with_trajectory",
      [](const AnnealSpec& spec, const Matrix& rho0, int record_stride) {
        std::vector<TrajectoryRecord> traj;
        Matrix out = propagate(spec, rho0, &traj, record_stride);
        return std::make_pair(out, traj);
      },
      py::arg("spec"), py::arg("rho0"), py::arg("record_stride") = 64);
  m.def(
      "propagate_block",
      [](const AnnealSpec& spec, const std::vector<Matrix>& inputs) {
        return propagate_block(spec, inputs);
      },
      py::arg("spec"), py::arg("inputs"));

  py::class_<InducedStatistics>(m, "InducedStatistics")
      .def_readonly("initial", &InducedStatistics::initial)
      .def_readonly("final_m", &InducedStatistics::final_m)
      .def_readonly("p0", &InducedStatistics::p0)
      .def_readonly("transition", &InducedStatistics::transition)
      .def_readonly("f", &InducedStatistics::f)
      .def_readonly("channel_identity", &InducedStatistics::channel_identity)
      .def_readonly("rho_final", &InducedStatistics::rho_final);
  m.def(
      "induced_channel_statistics",
      [](const AnnealSpec& spec) { return induced_channel_statistics(spec); },
      py::arg("spec"));

  // experiment
  py::class_<EndpointData>(m, "EndpointData")
      .def_readonly("initial", &EndpointData::initial)
      .def_readonly("final_m", &EndpointData::final_m)
      .def_readonly("ln_z0", &EndpointData::ln_z0)
      .def_readonly("ln_zf", &EndpointData::ln_zf)
      .def_readonly("delta_f", &EndpointData::delta_f)
      .def_readonly("mean_e0", &EndpointData::mean_e0)
      .def_readonly("p0", &EndpointData::p0);
  m.def("anneal_endpoints", &anneal_endpoints, py::arg("spec"));
  m.def("mean_v_from_f", &mean_v_from_f, py::arg("endpoints"), py::arg("beta"),
        py::arg("f"));

  py::class_<QjeCheck>(m, "QjeCheck")
      .def_readonly("transition_route", &QjeCheck::transition_route)
      .def_readonly("gamma", &QjeCheck::gamma)
      .def_readonly("residual", &QjeCheck::residual);
  m.def("qje_experiment_check", &qje_experiment_check, py::arg("spec"));
  m.def("qje_from_stats", &qje_from_stats, py::arg("spec"), py::arg("endpoints"),
        py::arg("stats"));

  py::class_<FirstMomentCheck>(m, "FirstMomentCheck")
      .def_readonly("lhs", &FirstMomentCheck::lhs)
      .def_readonly("rhs", &FirstMomentCheck::rhs)
      .def_readonly("residual", &FirstMomentCheck::residual);
  m.def("first_moment_check", &first_moment_check, py::arg("spec"));
  m.def("first_moment_from_stats", &first_moment_from_stats, py::arg("spec"),
        py::arg("endpoints"), py::arg("stats"));

  py::class_<ExperimentPoint>(m, "ExperimentPoint")
      .def(py::init<>())
      .def_readwrite("j", &ExperimentPoint::j)
      .def_readwrite("t_f_us", &ExperimentPoint::t_f_us)
      .def_readwrite("f", &ExperimentPoint::f);
  m.def("synthetic_point", &synthetic_point, py::arg("base"), py::arg("j"),
        py::arg("t_f_us"), py::arg("shots"), py::arg("seed"));
  m.def("load_points_csv", &load_points_csv, py::arg("path"));
  m.def("save_points_csv", &save_points_csv, py::arg("path"), py::arg("points"),
        py::arg("shots_hint") = 0);
  m.def("msd_mean_v", &msd_mean_v, py::arg("base"), py::arg("points"),
        py::arg("kappa"));

  py::class_<FitOptions>(m, "FitOptions")
      .def(py::init<>())
      .def_readwrite("kappa_min", &FitOptions::kappa_min)
      .def_readwrite("kappa_max", &FitOptions::kappa_max)
      .def_readwrite("grid_per_decade", &FitOptions::grid_per_decade)
      .def_readwrite("ln_kappa_tol", &FitOptions::ln_kappa_tol);
  py::class_<FitResult>(m, "FitResult")
      .def_readonly("kappa", &FitResult::kappa)
      .def_readonly("msd", &FitResult::msd)
      .def_readonly("evaluations", &FitResult::evaluations)
      .def_readonly("trace", &FitResult::trace);
  m.def("fit_kappa", &fit_kappa, py::arg("base"), py::arg("points"),
        py::arg("options") = FitOptions{});

  m.def("closed_system_protocol", &closed_system_protocol, py::arg("h0"),
        py::arg("hf"), py::arg("u"), py::arg("beta"));

  // randomness
  py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>(), py::arg("seed"));
  m.def("haar_unitary", &haar_unitary, py::arg("dim"), py::arg("rng"));
  m.def("random_density", &random_density, py::arg("dim"), py::arg("rng"),
        py::arg("mix") = 0.1);
  m.def("random_channel", &random_channel, py::arg("dim"), py::arg("n_kraus"),
        py::arg("rng"));
  m.def("random_unital_channel", &random_unital_channel, py::arg("dim"),
        py::arg("n_unitaries"), py::arg("rng"));
  m.def("random_rank1_projective", &random_rank1_projective, py::arg("dim"),
        py::arg("rng"));
  m.def("random_prob_vector", &random_prob_vector, py::arg("n"), py::arg("rng"),
        py::arg("floor_frac") = 0.05);
  m.def("multinomial_sample", &multinomial_sample, py::arg("p"),
        py::arg("shots"), py::arg("rng"));

  // release gates
  py::class_<CriterionResult>(m, "CriterionResult")
      .def_readonly("index", &CriterionResult::index)
      .def_readonly("name", &CriterionResult::name)
      .def_readonly("pass_", &CriterionResult::pass)
      .def_readonly("detail", &CriterionResult::detail)
      .def_readonly("seconds", &CriterionResult::seconds);
  m.def("run_criterion", &run_criterion, py::arg("index"), py::arg("seed"),
        py::arg("quick") = true);
}
