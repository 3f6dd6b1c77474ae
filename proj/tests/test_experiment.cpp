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
#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "fluxtheo/errors.hpp"
#include "fluxtheo/experiment.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/random.hpp"

using namespace fluxtheo;

namespace {

// Small, fast anneal fixture shared by the checks below.
AnnealSpec fast_spec() {
  AnnealSpec spec;
  spec.n_qubits = 2;
  spec.h = RealVector(2);
  spec.h << 1.0 / 3.0, 1.0 / 3.0;
  spec.j = {{0, 1, 0.5}};
  spec.t_f_us = 0.01;
  spec.beta = 0.7;
  spec.kappa = 2e-3;
  spec.omega_c = 2.0;
  spec.schedule = Schedule::linear(2.0, 1.0);
  spec.ode_tol = 1e-8;
  return spec;
}

std::string temp_csv_path() {
  static int counter = 0;
  return std::string("fluxtheo_test_points_") + std::to_string(counter++) +
         ".csv";
}

}  // namespace

TEST_SUITE("experiment") {

TEST_CASE("endpoint data agrees with direct diagonalization") {
  AnnealSpec spec = fast_spec();
  EndpointData ep = anneal_endpoints(spec);

  Spectrum s0 = eig_hermitian(hamiltonian_at(spec, 0.0));
  Spectrum sf = eig_hermitian(hamiltonian_at(spec, spec.t_f_us));
  CHECK((ep.initial.values - s0.values).norm() < 1e-12);
  CHECK((ep.final_m.values - sf.values).norm() < 1e-12);

  double z0 = 0, zf = 0, mean = 0;
  for (int i = 0; i < 4; ++i) {
    z0 += std::exp(-spec.beta * s0.values[i]);
    zf += std::exp(-spec.beta * sf.values[i]);
  }
  CHECK(ep.ln_z0 == doctest::Approx(std::log(z0)).epsilon(1e-13));
  CHECK(ep.ln_zf == doctest::Approx(std::log(zf)).epsilon(1e-13));
  CHECK(ep.delta_f ==
        doctest::Approx(-(ep.ln_zf - ep.ln_z0) / spec.beta).epsilon(1e-13));

  CHECK(ep.p0.sum() == doctest::Approx(1.0).epsilon(1e-14));
  for (int i = 0; i < 4; ++i) mean += ep.p0[i] * s0.values[i];
  CHECK(ep.mean_e0 == doctest::Approx(mean).epsilon(1e-13));
}

TEST_CASE("mean v is the thermal combination of its inputs") {
  AnnealSpec spec = fast_spec();
  EndpointData ep = anneal_endpoints(spec);
  RealVector f(4);
  f << 0.6, 0.25, 0.1, 0.05;
  double ef = 0;
  for (int b = 0; b < 4; ++b) ef += f[b] * ep.final_m.values[b];
  const double expected = spec.beta * (ef - ep.mean_e0 - ep.delta_f);
  CHECK(mean_v_from_f(ep, spec.beta, f) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("jarzynski route and dual route agree on the simulated anneal") {
  AnnealSpec spec = fast_spec();
  QjeCheck qje = qje_experiment_check(spec);
  CHECK(qje.residual < 1e-7);
  CHECK(qje.transition_route ==
        doctest::Approx(qje.gamma).epsilon(1e-7));

  // The stats route is the same computation with shared intermediates.
  EndpointData ep = anneal_endpoints(spec);
  InducedStatistics st = induced_channel_statistics(spec);
  QjeCheck again = qje_from_stats(spec, ep, st);
  CHECK(again.residual < 1e-7);
  CHECK(again.transition_route ==
        doctest::Approx(qje.transition_route).epsilon(1e-10));
}

TEST_CASE("first moment identity holds on the simulated anneal") {
  AnnealSpec spec = fast_spec();
  FirstMomentCheck fm = first_moment_check(spec);
  CHECK(fm.residual < 1e-7);
  CHECK(fm.lhs == doctest::Approx(fm.rhs).epsilon(1e-6));
}

TEST_CASE("noiseless synthetic point is self consistent under msd") {
  AnnealSpec base = fast_spec();
  ExperimentPoint pt = synthetic_point(base, 0.5, 0.004, 0, 123);
  CHECK(pt.j == 0.5);
  CHECK(pt.t_f_us == 0.004);
  CHECK(pt.f.sum() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(msd_mean_v(base, {pt}, base.kappa) < 1e-22);
  CHECK(msd_mean_v(base, {pt}, 4 * base.kappa) > 1e-22);
}

TEST_CASE("sampled synthetic point is a multinomial draw from the model") {
  AnnealSpec base = fast_spec();
  const std::int64_t shots = 1000;
  ExperimentPoint pt = synthetic_point(base, 0.5, 0.004, shots, 7);
  CHECK(pt.f.sum() == doctest::Approx(1.0).epsilon(1e-12));
  for (int b = 0; b < pt.f.size(); ++b) {
    const double scaled = pt.f[b] * double(shots);
    CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
  }
  ExperimentPoint same = synthetic_point(base, 0.5, 0.004, shots, 7);
  CHECK((pt.f - same.f).norm() == 0.0);
}

TEST_CASE("points survive a csv round trip") {
  AnnealSpec base = fast_spec();
  std::vector<ExperimentPoint> pts;
  pts.push_back(synthetic_point(base, 0.5, 0.004, 100000, 11));
  pts.push_back(synthetic_point(base, 0.7, 0.002, 100000, 12));

  const std::string path = temp_csv_path();
  save_points_csv(path, pts, 100000);
  std::vector<ExperimentPoint> back = load_points_csv(path);
  std::remove(path.c_str());

  REQUIRE(back.size() == pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(back[i].j == pts[i].j);
    CHECK(back[i].t_f_us == pts[i].t_f_us);
    CHECK((back[i].f - pts[i].f).norm() < 1e-12);
  }

  CHECK_THROWS_AS(load_points_csv("does_not_exist.csv"), ValidationError);
}

TEST_CASE("kappa fit recovers the generating value without noise") {
  AnnealSpec base = fast_spec();
  std::vector<ExperimentPoint> pts;
  pts.push_back(synthetic_point(base, 0.5, 0.002, 0, 1));
  pts.push_back(synthetic_point(base, 0.8, 0.003, 0, 2));

  FitOptions opt;
  opt.kappa_min = 1e-4;
  opt.kappa_max = 1e-2;
  FitResult fit = fit_kappa(base, pts, opt);
  CHECK(std::abs(std::log(fit.kappa / base.kappa)) < 2e-3);
  // The search stops within ln_kappa_tol of the exact zero, not on it.
  CHECK(fit.msd < 1e-8);
  CHECK(fit.evaluations > 0);
  CHECK(fit.trace.size() == std::size_t(fit.evaluations));
}

TEST_CASE("closed system quench satisfies the work identities") {
  Rng rng(101);
  const int d = 3;
  Matrix g0(d, d), gf(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      g0(i, j) = rng.cnormal();
      gf(i, j) = rng.cnormal();
    }
  const Matrix h0 = g0 + g0.adjoint();
  const Matrix hf = gf + gf.adjoint();
  const double beta = 0.7;
  const Channel u = Channel::unitary(haar_unitary(d, rng));

  ProtocolSpec spec = closed_system_protocol(h0, hf, u, beta);
  validate_protocol(spec);

  // Unitary channels have unit efficacy, so the plain exponential average
  // closes at one.
  CHECK(efficacy(spec).gamma == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(jarzynski_residual(spec, VChoice::LogPQ) < 1e-12);
  CHECK(crooks_check(spec).max_atom_residual < 1e-10);

  EntropyDecomposition ed =
      entropy_decomposition(spec, std::make_pair(hf, beta));
  CHECK(ed.thermal);
  CHECK(ed.residual_thermal < 1e-9);

  // v = beta (de - dF) on every trajectory, so <v> has the thermal form.
  const double lnz0 = log_partition_function(h0, beta);
  const double lnzf = log_partition_function(hf, beta);
  const double delta_f = -(lnzf - lnz0) / beta;
  ForwardStatistics st = forward_statistics(spec);
  Spectrum s0 = eig_hermitian(h0);
  Spectrum sf = eig_hermitian(hf);
  double mean_de = 0;
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      mean_de += st.transition(b, a) * st.ensemble.probs[a] *
                 (sf.values[b] - s0.values[a]);
  CHECK(forward_pdf(spec, VChoice::LogPQ).mean() ==
        doctest::Approx(beta * (mean_de - delta_f)).epsilon(1e-10));
}

}  // TEST_SUITE
