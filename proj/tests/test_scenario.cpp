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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "fluxtheo/errors.hpp"
#include "fluxtheo/random.hpp"
#include "fluxtheo/scenario.hpp"

using namespace fluxtheo;
namespace fs = std::filesystem;

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Json computational_projectors() {
  return Json::array({Json::array({Json::array({1, 0}), Json::array({0, 0})}),
                      Json::array({Json::array({0, 0}), Json::array({0, 1})})});
}

Json qubit_protocol_scenario() {
  Json scn;
  scn["kind"] = "protocol";
  scn["rho"] = Json::array({Json::array({0.625, Json::array({0.1, 0.05})}),
                            Json::array({Json::array({0.1, -0.05}), 0.375})});
  scn["prepared"] = computational_projectors();
  scn["kraus"] = Json::array({Json::array(
      {Json::array({kInvSqrt2, kInvSqrt2}),
       Json::array({kInvSqrt2, -kInvSqrt2})})});
  scn["final"] = computational_projectors();
  scn["q"] = Json::array({0.5, 0.5});
  return scn;
}

Json qubit_feedback_scenario() {
  const Json identity =
      Json::array({Json::array({1, 0}), Json::array({0, 1})});
  const Json flip = Json::array({Json::array({0, 1}), Json::array({1, 0})});
  Json scn;
  scn["kind"] = "feedback";
  scn["rho"] = Json::array({Json::array({0.7, 0}), Json::array({0, 0.3})});
  scn["prepared"] = computational_projectors();
  scn["pre"] = Json::array(
      {Json::array({kInvSqrt2, kInvSqrt2}),
       Json::array({kInvSqrt2, -kInvSqrt2})});
  scn["mid"] = computational_projectors();
  scn["controls"] = Json::array({flip, identity});
  scn["final"] =
      Json::array({computational_projectors(), computational_projectors()});
  scn["q"] = Json::array({Json::array({0.5, 0.5}), Json::array({0.6, 0.4})});
  return scn;
}

Json small_anneal_scenario() {
  Json scn;
  scn["kind"] = "anneal";
  scn["n_qubits"] = 1;
  scn["h"] = Json::array({0.5});
  scn["t_f_us"] = 0.002;
  scn["beta_per_GHz"] = 0.7;
  scn["kappa"] = 0.01;
  scn["omega_c"] = 2.0;
  scn["schedule"] = Json{{"a0", 2.0}, {"b_end", 1.0}};
  scn["lamb_shift"] = false;
  return scn;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(name) {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("matrices round trip through json") {
  Rng rng(111);
  Matrix m(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = rng.cnormal();
  const Matrix back = matrix_from_json(matrix_to_json(m), "round trip");
  CHECK((back - m).norm() == 0.0);

  // Plain numbers parse as real entries.
  const Json real = Json::array({Json::array({1.5, 2}), Json::array({3, -4})});
  const Matrix r = matrix_from_json(real, "real");
  CHECK(r(0, 0) == Complex(1.5, 0));
  CHECK(r(1, 1) == Complex(-4, 0));

  CHECK_THROWS_AS(matrix_from_json(Json::array(), "bad"), ValidationError);
  const Json ragged =
      Json::array({Json::array({1, 2}), Json::array({3})});
  CHECK_THROWS_AS(matrix_from_json(ragged, "bad"), ValidationError);
}

TEST_CASE("protocol parsing rejects missing and malformed fields") {
  Json scn = qubit_protocol_scenario();
  CHECK_NOTHROW(protocol_from_json(scn));

  Json missing = scn;
  missing.erase("kraus");
  CHECK_THROWS_AS(protocol_from_json(missing), ValidationError);

  Json bad_q = scn;
  bad_q["q"] = Json::array({0.5, 0.7});
  CHECK_THROWS_AS(protocol_from_json(bad_q), ValidationError);

  Json bad_obs = scn;
  bad_obs["observable"] = "nonsense";
  CHECK_THROWS_AS(validate_scenario(bad_obs, ""), ValidationError);

  Json unknown = scn;
  unknown["kind"] = "mystery";
  CHECK_THROWS_AS(validate_scenario(unknown, ""), ValidationError);
}

TEST_CASE("protocol scenario runs and reports the qubit identities") {
  TempDir dir("scn_out_protocol");
  const Json out =
      run_scenario(qubit_protocol_scenario(), "", dir.path.string(), {});

  CHECK(out.at("kind") == "protocol");
  CHECK(out.at("dim") == 2);
  // Unitary channel: unit efficacy and a clean executed reverse.
  CHECK(std::abs(out.at("efficacy").at("gamma").get<double>() - 1.0) < 1e-12);
  CHECK(out.at("jarzynski_residual").get<double>() < 1e-12);
  CHECK(out.at("second_law").at("holds").get<bool>());
  CHECK(out.at("bistochasticity").at("unital").get<bool>());
  REQUIRE(out.at("crooks").contains("max_atom_residual"));
  CHECK(out.at("crooks").at("max_atom_residual").get<double>() < 1e-10);
  CHECK(out.at("mgf")[0].at("residual").get<double>() < 1e-11);

  CHECK(fs::exists(dir.path / "results.json"));
  const Json file = load_json_file((dir.path / "results.json").string());
  CHECK(file.at("kind") == "protocol");
}

TEST_CASE("feedback scenario reports a unit information integral") {
  TempDir dir("scn_out_feedback");
  const Json out =
      run_scenario(qubit_feedback_scenario(), "", dir.path.string(), {});
  CHECK(out.at("kind") == "feedback");
  CHECK(out.at("records") == 2);
  CHECK(std::abs(out.at("mutual_info").at("integral").get<double>() - 1.0) <
        1e-11);
  const double gamma = out.at("efficacy").at("gamma").get<double>();
  CHECK(gamma ==
        doctest::Approx(
            out.at("efficacy").at("control_loop_closed_form").get<double>())
            .epsilon(1e-11));
  CHECK(out.at("mgf").contains("max_residual"));
  CHECK(out.at("mgf").at("max_residual").get<double>() < 1e-9);
}

TEST_CASE("anneal scenario writes results, trajectory and counts") {
  TempDir dir("scn_out_anneal");
  Json scn = small_anneal_scenario();
  scn["emit_counts"] = 500;
  scn["seed"] = 42;

  const Json out = run_scenario(scn, "", dir.path.string(), {});
  CHECK(out.at("kind") == "anneal");
  CHECK(out.at("qje").at("residual").get<double>() < 1e-6);
  CHECK(out.at("first_moment").at("residual").get<double>() < 1e-6);
  CHECK(out.at("max_trace_residual").get<double>() < 1e-8);
  CHECK(out.at("trajectory_rows").get<int>() > 0);
  CHECK(out.at("counts_shots") == 500);

  CHECK(fs::exists(dir.path / "results.json"));
  CHECK(fs::exists(dir.path / "trajectory.csv"));
  CHECK(fs::exists(dir.path / "counts.csv"));

  std::ifstream cf(dir.path / "counts.csv");
  std::string header;
  std::getline(cf, header);
  CHECK(header == "state_label,count");
  long total = 0, label, count;
  char comma;
  while (cf >> label >> comma >> count) total += count;
  CHECK(total == 500);
}

TEST_CASE("anneal overrides replace tolerance and schedule") {
  TempDir dir("scn_out_override");
  const fs::path csv = dir.path / "sched.csv";
  {
    std::ofstream out(csv);
    out << "s,A,B\n0,2,0\n0.5,1.2,0.4\n1,0,1\n";
  }
  RunOverrides ovr;
  ovr.ode_tol = 1e-6;
  ovr.schedule_csv = csv.string();

  const Json out =
      run_scenario(small_anneal_scenario(), "", dir.path.string(), ovr);
  CHECK(out.at("spec").at("ode_tol").get<double>() == 1e-6);
  // The sampled schedule echo reflects the csv knots, not the json linear one.
  const Json& table = out.at("spec").at("schedule").at("table");
  const double mid_a = table.at("a")[20].get<double>();
  CHECK(mid_a == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("anneal spec survives a json round trip") {
  AnnealSpec spec;
  spec.n_qubits = 2;
  spec.h = RealVector(2);
  spec.h << 0.3, 0.4;
  spec.j = {{0, 1, 0.8}};
  spec.t_f_us = 0.5;
  spec.beta = 0.45;
  spec.kappa = 3e-3;
  spec.omega_c = 25.0;
  spec.schedule = Schedule::linear(33.7, 33.6);

  const AnnealSpec back = anneal_from_json(anneal_to_json(spec), "");
  CHECK(back.n_qubits == spec.n_qubits);
  CHECK((back.h - spec.h).norm() == 0.0);
  REQUIRE(back.j.size() == 1);
  CHECK(std::get<2>(back.j[0]) == 0.8);
  CHECK(back.t_f_us == spec.t_f_us);
  CHECK(back.beta == spec.beta);
  CHECK(back.kappa == spec.kappa);
  CHECK(back.omega_c == spec.omega_c);
  CHECK(back.schedule.a(0.25) == doctest::Approx(spec.schedule.a(0.25)));
  CHECK(back.schedule.b(0.25) == doctest::Approx(spec.schedule.b(0.25)));
}

TEST_CASE("fit scenario validation demands exactly one data source") {
  Json scn;
  scn["kind"] = "fit";
  Json base = small_anneal_scenario();
  base.erase("kind");
  scn["base"] = base;
  CHECK_THROWS_AS(validate_scenario(scn, ""), ValidationError);

  scn["synthetic"] =
      Json{{"points", Json::array({Json::array({0.5, 0.002})})},
           {"kappa_true", 2e-3},
           {"shots", 0}};
  CHECK(validate_scenario(scn, "") == "fit");

  Json both = scn;
  both["data"] = "points.csv";
  CHECK_THROWS_AS(validate_scenario(both, ""), ValidationError);

  Json bad_pts = scn;
  bad_pts["synthetic"]["points"] = Json::array({Json::array({0.5})});
  CHECK_THROWS_AS(validate_scenario(bad_pts, ""), ValidationError);
}

TEST_CASE("fit scenario recovers a synthetic coupling") {
  TempDir dir("scn_out_fit");
  Json scn;
  scn["kind"] = "fit";
  Json base = small_anneal_scenario();
  base.erase("kind");
  base["n_qubits"] = 2;
  base["h"] = Json::array({1.0 / 3.0, 1.0 / 3.0});
  base["J"] = Json::array({Json::array({0, 1, 0.5})});
  base["kappa"] = 1e-3;  // starting value, not the target
  scn["base"] = base;
  scn["synthetic"] =
      Json{{"points", Json::array({Json::array({0.5, 0.002})})},
           {"kappa_true", 2e-3},
           {"shots", 0}};
  scn["kappa_min"] = 1e-4;
  scn["kappa_max"] = 1e-2;

  const Json out = run_scenario(scn, "", dir.path.string(), {});
  CHECK(out.at("kind") == "fit");
  CHECK(out.at("points") == 1);
  CHECK(out.at("kappa_true").get<double>() == 2e-3);
  CHECK(out.at("kappa_rel_error").get<double>() < 5e-3);
  CHECK(fs::exists(dir.path / "points.csv"));
  CHECK(fs::exists(dir.path / "results.json"));
}

}  // TEST_SUITE
