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

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fluxtheo/ame.hpp"
#include "fluxtheo/fluctuation.hpp"
#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Spectral data of the anneal endpoints used by every observable below.
struct EndpointData {
  Spectrum initial;
  Spectrum final_m;
  double ln_z0 = 0;
  double ln_zf = 0;
  double delta_f = 0;   // F(t_f) - F(0) by diagonalization
  double mean_e0 = 0;   // Tr[H(0) rho_Gibbs(0)]
  RealVector p0;        // Gibbs populations of H(0)
};

EndpointData anneal_endpoints(const AnnealSpec& spec);

// <v> = beta (sum_b eps_b(t_f) f_b - <e(0)> - dF) for a measured or simulated
// final distribution f over the energy-sorted eigenstates of H(t_f).
double mean_v_from_f(const EndpointData& ep, double beta, const RealVector& f);

struct QjeCheck {
  double transition_route = 0;  // <exp(-beta (dE - dF))> over the joint law
  double gamma = 0;             // Tr[rho_Gibbs(t_f) E(1)]
  double residual = 0;
};

QjeCheck qje_experiment_check(const AnnealSpec& spec);
QjeCheck qje_from_stats(const AnnealSpec& spec, const EndpointData& ep,
                        const InducedStatistics& st);

struct FirstMomentCheck {
  double lhs = 0;  // beta (<dE> - dF) from the simulated f
  double rhs = 0;  // S(rho_f || rho_Gibbs(t_f)) + S(rho_f) - S(rho_Gibbs(0))
  double residual = 0;
};

FirstMomentCheck first_moment_check(const AnnealSpec& spec);
FirstMomentCheck first_moment_from_stats(const AnnealSpec& spec,
                                         const EndpointData& ep,
                                         const InducedStatistics& st);

// One experimental point: final state distribution for a given coupling and
// anneal time, on the shared two qubit problem shape.
struct ExperimentPoint {
  double j = 0;
  double t_f_us = 0;
  RealVector f;
};

// Simulates the point with the given kappa, then draws `shots` multinomial
// samples from the exact f. shots == 0 returns the exact distribution.
ExperimentPoint synthetic_point(const AnnealSpec& base, double j, double t_f_us,
                                std::int64_t shots, std::uint64_t seed);

// CSV with header "J,t_f_us,state_label,count"; rows grouped by (J, t_f_us),
// labels are energy-ascending eigenstate indices of H(t_f).
std::vector<ExperimentPoint> load_points_csv(const std::string& path);
void save_points_csv(const std::string& path,
                     const std::vector<ExperimentPoint>& pts,
                     std::int64_t shots_hint = 0);

// Mean squared deviation between measured and simulated <v> over the points.
double msd_mean_v(const AnnealSpec& base,
                  const std::vector<ExperimentPoint>& pts, double kappa);

struct FitOptions {
  double kappa_min = 1e-4;
  double kappa_max = 1e-1;
  int grid_per_decade = 11;
  double ln_kappa_tol = 5e-4;  // golden section stopping width
};

struct FitResult {
  double kappa = 0;
  double msd = 0;
  int evaluations = 0;
  std::vector<std::pair<double, double>> trace;  // (kappa, msd) visited
};

// Coarse log grid scan followed by golden section refinement in ln kappa.
// omega_c and beta stay fixed at the base spec values.
FitResult fit_kappa(const AnnealSpec& base,
                    const std::vector<ExperimentPoint>& pts,
                    const FitOptions& opt = {});

// Closed system protocol for a quench h0 -> hf under a unitary channel:
// thermal initial state, energy measurements at both ends, reference
// distribution Gibbs(hf). Useful as a fluctuation relation fixture.
ProtocolSpec closed_system_protocol(const Matrix& h0, const Matrix& hf,
                                    const Channel& u, double beta);

}  // namespace fluxtheo
