// Copyright 2026 The qme authors
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

#include <vector>

#include "qme/mpemba.hpp"
#include "qme/spectral.hpp"
#include "qme/types.hpp"

namespace qme {

struct DistanceSeries {
  std::vector<double> eq4, frobenius, bures, trace;
};

// Relaxation record on a strictly increasing time grid (units 1/Omega_1).
// rho_in is the state at t = 0; grids whose first entry is positive simply
// omit the initial point. overlaps/distances (vs the stationary state) are
// filled when a decomposition is available.
struct Trajectory {
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<OverlapVector> overlaps;
  DistanceSeries distances;
  int hermiticity_repairs = 0;  // symmetrizations applied beyond 1e-12 drift
};

// Strictly increasing grid; log spacing inserts t = 0 in front.
std::vector<double> make_time_grid(double t_min, double t_max, int points,
                                   bool log_spacing);

// rho(t) = sum_i c_i e^{lambda_i t} R_i, with recombined pairs propagated by
// the rotation form e^{at}(cos wt c_i' - sin wt c_j', sin wt c_i' + cos wt c_j').
Trajectory evolve_spectral(const SpectralDecomposition& dec,
                           const DensityMatrix& rho_in,
                           const std::vector<double>& times);

struct OdeOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double min_step = 1e-13;
  long max_steps = 50'000'000;
};

// Adaptive Dormand-Prince 5(4) on the matrix-form master equation. This path
// never touches the vectorized generator or its eigenbasis, so it serves as
// the independent oracle for the spectral propagation.
Trajectory evolve_ode(const Matrix3& h, const std::vector<Matrix3>& jumps,
                      DissipatorConvention convention,
                      const DensityMatrix& rho_in,
                      const std::vector<double>& times,
                      const OdeOptions& opts = {},
                      const SpectralDecomposition* dec = nullptr);

Trajectory evolve_ode(const ModelParams& p, const DensityMatrix& rho_in,
                      const std::vector<double>& times,
                      const OdeOptions& opts = {},
                      const SpectralDecomposition* dec = nullptr);

struct DecayFit {
  double rate = 0.0;       // slope of log(value); negative for decay
  double amplitude = 0.0;  // exp(intercept)
  double rms = 0.0;        // residual of the log-linear fit
};

// Least squares of log(values) on the samples with t in [window_lo, window_hi].
// Values must be positive inside the window.
DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& values, double window_lo,
                        double window_hi);

// Classical master equation on populations only. Coherences are eliminated
// adiabatically, leaving the bidirectional transfer rate Gamma_j =
// Omega_j^2 / kappa_j between levels 0 and j on top of the decays kappa_j.
// Demands kappa_j > 0 wherever Omega_j > 0.
std::vector<Eigen::Vector3d> rate_equation_evolve(
    const ModelParams& p, const Eigen::Vector3d& populations_in,
    const std::vector<double>& times);

Eigen::Matrix3d rate_equation_generator(const ModelParams& p);

// Reduced model of one engineered decay channel: a driven 1 <-> p transition
// (Rabi omega_p) with |p> spontaneously emitting at rate gamma.
struct EffectiveDecayParams {
  double omega_p = 0.0;
  double gamma = 0.0;
};

// Generator of x = (rho_11, rho_pp, -i (rho_1p - rho_p1)).
Eigen::Matrix3d effective_model_matrix(const EffectiveDecayParams& e);

// Closed forms  lambda_{1,2} = -(gamma -/+ sqrt(gamma^2 - 4 omega_p^2)) / 2,
// lambda_3 = -gamma / 2.
std::array<Complex, 3> effective_model_eigenvalues(
    const EffectiveDecayParams& e);

struct EffectiveDecayRate {
  double exact = 0.0;         // -Re lambda_1
  double approximate = 0.0;   // omega_p^2 / gamma
  double relative_gap = 0.0;  // (exact - approximate) / exact
};

// Only defined in the overdamped regime gamma > 2 omega_p.
EffectiveDecayRate effective_decay_rate(const EffectiveDecayParams& e);

}  // namespace qme
