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

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "fluxtheo/acceptance.hpp"
#include "fluxtheo/errors.hpp"
#include "fluxtheo/scenario.hpp"

namespace {

std::string parent_dir(const std::string& path) {
  const auto p = std::filesystem::path(path).parent_path();
  return p.empty() ? std::string(".") : p.string();
}

int cmd_validate(const std::string& scenario_path) {
  const fluxtheo::Json scn = fluxtheo::load_json_file(scenario_path);
  const std::string kind =
      fluxtheo::validate_scenario(scn, parent_dir(scenario_path));
  std::cout << "ok: " << scenario_path << " is a valid '" << kind
            << "' scenario\n";
  return 0;
}

int cmd_run(const std::string& scenario_path, const std::string& out_dir,
            const fluxtheo::RunOverrides& ovr,
            const std::optional<std::string>& expect_kind) {
  const fluxtheo::Json scn = fluxtheo::load_json_file(scenario_path);
  const std::string base_dir = parent_dir(scenario_path);
  const std::string kind = fluxtheo::validate_scenario(scn, base_dir);
  if (expect_kind && kind != *expect_kind)
    throw fluxtheo::ValidationError("expected a '" + *expect_kind +
                                    "' scenario, got '" + kind + "'");
  const fluxtheo::Json results =
      fluxtheo::run_scenario(scn, base_dir, out_dir, ovr);
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "results.json").string()
            << "\n";
  if (kind == "fit")
    std::cout << "kappa = " << fluxtheo::format_g17(results.at("kappa").get<double>())
              << " after " << results.at("evaluations") << " evaluations\n";
  if (kind == "anneal")
    std::cout << "mean observable = "
              << results.at("mean_v").dump() << ", efficacy gap = "
              << results.at("qje").at("residual").dump() << "\n";
  return 0;
}

int cmd_selftest(std::uint64_t seed, bool full) {
  bool all_pass = true;
  for (int i = 1; i <= fluxtheo::kNumCriteria; ++i) {
    const auto r = fluxtheo::run_criterion(i, seed, !full);
    std::cout << fluxtheo::format_criterion_line(r) << "\n" << std::flush;
    all_pass = all_pass && r.pass;
  }
  std::cout << (all_pass ? "selftest passed" : "selftest FAILED") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fluxtheo: fluctuation relations and efficacies of quantum channels, "
      "with an adiabatic master equation backend"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out";
  fluxtheo::RunOverrides ovr;
  std::uint64_t seed = 20260816;
  double ode_tol = 0;
  std::string schedule_csv;
  int threads = 1;
  bool full = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("scenario", scenario_path, "scenario JSON file")
        ->required()
        ->check(CLI::ExistingFile);
  };
  auto add_run_opts = [&](CLI::App* cmd) {
    cmd->add_option("-o,--out", out_dir, "output directory")
        ->capture_default_str();
    cmd->add_option("--seed", seed, "override the scenario seed");
    cmd->add_option("--ode-tol", ode_tol,
                    "override the integrator tolerance (anneal and fit)");
    cmd->add_option("--schedule", schedule_csv,
                    "override the anneal schedule with a CSV file");
    cmd->add_option("--threads", threads,
                    "accepted for compatibility; execution is single threaded");
  };

  CLI::App* validate = app.add_subcommand(
      "validate", "check a scenario file without running it");
  add_common(validate);

  CLI::App* run = app.add_subcommand("run", "run a scenario and write results");
  add_common(run);
  add_run_opts(run);

  CLI::App* fit = app.add_subcommand(
      "fit", "run a coupling fit scenario (kind must be 'fit')");
  add_common(fit);
  add_run_opts(fit);

  CLI::App* selftest =
      app.add_subcommand("selftest", "run the built in release gates");
  selftest->add_option("--seed", seed, "random seed")->capture_default_str();
  bool quick = false;
  CLI::Option* quick_opt = selftest->add_flag(
      "--quick", quick, "run the quick subset (the default)");
  selftest
      ->add_flag("--full", full,
                 "run the full gates instead of the quick subset")
      ->excludes(quick_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate->parsed()) return cmd_validate(scenario_path);
    const bool seed_given =
        run->count("--seed") > 0 || fit->count("--seed") > 0;
    if (seed_given) ovr.seed = seed;
    if (ode_tol > 0) ovr.ode_tol = ode_tol;
    if (!schedule_csv.empty()) ovr.schedule_csv = schedule_csv;
    if (run->parsed()) return cmd_run(scenario_path, out_dir, ovr, std::nullopt);
    if (fit->parsed()) return cmd_run(scenario_path, out_dir, ovr, "fit");
    if (selftest->parsed()) return cmd_selftest(seed, full);
  } catch (const fluxtheo::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fluxtheo::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const fluxtheo::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
