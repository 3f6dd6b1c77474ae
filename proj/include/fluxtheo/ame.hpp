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
#include <tuple>
#include <vector>

#include "fluxtheo/bath.hpp"
#include "fluxtheo/linalg.hpp"
#include "fluxtheo/schedule.hpp"
#include "fluxtheo/types.hpp"

namespace fluxtheo {

// Transverse field Ising anneal coupled to independent identical Ohmic baths
// through sigma^z on each qubit:
//   H(t) = -A(s) sum_i sigma^x_i + B(s) (-sum_i h_i sigma^z_i
//          - sum_{i<j} J_ij sigma^z_i sigma^z_j),  s = t / t_f.
// Energies in angular GHz, times in ns externally expressed as microseconds.
struct AnnealSpec {
  int n_qubits = 0;
  RealVector h;
  std::vector<std::tuple<int, int, double>> j;  // (i, j, J_ij), i < j
  double t_f_us = 0;
  double beta = 0;      // inverse angular GHz
  double kappa = 0;
  double omega_c = 0;
  Schedule schedule = Schedule::linear(33.7, 33.6);
  bool lamb_shift = true;
  double ode_tol = 1e-8;
  bool validate_endpoints = true;  // require A dominant at s=0, B at s=1
};

void validate_anneal(const AnnealSpec& spec);

BathParams bath_of(const AnnealSpec& spec);

// H(t) in the computational basis; t in microseconds within [0, t_f].
Matrix hamiltonian_at(const AnnealSpec& spec, double t_us);

// Jump operators at time t: for each qubit a list of operators, one per Bohr
// frequency of H(t), expressed in the instantaneous eigenbasis. Frequencies
// closer than the binning width count as one. The operators of one qubit sum
// to sigma^z of that qubit rotated into the eigenbasis.
struct LindbladSet {
  Spectrum spectrum;                      // of H(t), ascending
  std::vector<double> omegas;             // shared bin centers
  std::vector<std::vector<Matrix>> ops;   // [qubit][bin], eigenbasis
};

LindbladSet lindblad_ops_at(const AnnealSpec& spec, double t_us);

// Lamb shift operator sum_w S(w) L_w^dag L_w at time t, computational basis.
Matrix lamb_shift_at(const AnnealSpec& spec, double t_us);

// Dissipator and coherent part applied to the identity; zero exactly when
// the rate function is symmetric (infinite temperature) or kappa = 0.
Matrix non_unitality_witness(const AnnealSpec& spec, double t_us);

// Trajectory sample captured at accepted integrator steps.
struct TrajectoryRecord {
  double t_us = 0;
  double s = 0;
  double trace_residual = 0;      // |Tr y - Tr y(0)| of the first column
  double min_eig = 0;             // smallest eigenvalue of the first column
  RealVector eig_populations;     // diagonal in the instantaneous eigenbasis
};

// Integrates the master equation from t=0 to t=t_f for one input operator.
// The input need not be a state (the generator is linear); trace is
// preserved for any input.
Matrix propagate(const AnnealSpec& spec, const Matrix& rho0,
                 std::vector<TrajectoryRecord>* trajectory = nullptr,
                 int record_stride = 64);

// Integrates several inputs as one block, sharing the per-stage
// eigendecomposition, rates and Lamb shift between columns. Semantics match
// calling propagate on each input, up to a common adaptive step sequence.
std::vector<Matrix> propagate_block(
    const AnnealSpec& spec, const std::vector<Matrix>& inputs,
    std::vector<TrajectoryRecord>* trajectory = nullptr,
    int record_stride = 64);

// Two point statistics of the anneal viewed as a channel: prepare the
// eigenprojectors of H(0), propagate them together with the identity and the
// initial Gibbs state, read out in the eigenbasis of H(t_f).
struct InducedStatistics {
  Spectrum initial;        // H(0)
  Spectrum final_m;        // H(t_f)
  RealVector p0;           // Gibbs populations of H(0)
  RealMatrix transition;   // (b, a) columns: E(P_a) diagonal in final basis
  RealVector f;            // diagonal of E(rho_Gibbs(0)) in final basis
  Matrix channel_identity; // E(1)
  Matrix rho_final;        // E(rho_Gibbs(0))
};

// Optionally records the trajectory of the Gibbs state column.
InducedStatistics induced_channel_statistics(
    const AnnealSpec& spec, std::vector<TrajectoryRecord>* trajectory = nullptr,
    int record_stride = 64);

}  // namespace fluxtheo
