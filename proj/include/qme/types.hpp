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

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qme {

using Complex = std::complex<double>;
using Matrix3 = Eigen::Matrix3cd;
using Vector3 = Eigen::Vector3cd;
using Matrix9 = Eigen::Matrix<Complex, 9, 9>;
using Vector9 = Eigen::Matrix<Complex, 9, 1>;

// A qutrit state: 3x3 complex, Hermitian, unit trace, positive semidefinite.
// Stored as a plain Eigen matrix; validity is checked at API boundaries with
// check_density_matrix().
using DensityMatrix = Matrix3;

// Normalized 3-vector of amplitudes (a, b, c).
using PureState = Vector3;

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kPsdTol = 1e-10;

enum class ErrorCode {
  InvalidArgument = 1,
  Defective = 2,          // decomposition flagged ill-conditioned (near an EP)
  DegenerateSteadyState = 3,
  NotConverged = 4,
  DomainError = 5,        // input outside an operation's validity regime
  Internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Two ways to weight the dissipator; they differ by an overall factor of two
// in the jump terms. MainText is the default and is the one consistent with
// the derived population equations used elsewhere in the code.
enum class DissipatorConvention { MainText, SuppFactor2 };

// Physical couplings of the driven-dissipative qutrit, in units of the 0<->1
// Rabi frequency (omega1 rescales everything and is kept for unit echoes).
// The drive phases multiply the raising operators |j><0|; they are zero
// except when a compiled state preparation forwards its deferred phase
// gates into the drives.
struct ModelParams {
  double omega1 = 1.0;
  double omega2_ratio = 0.0;   // Omega_2 / Omega_1
  double kappa1_ratio = 0.0;   // kappa_1 / Omega_1
  double kappa2_ratio = 0.0;   // kappa_2 / Omega_1
  double phi = 0.0;            // drive phase on 0<->1 (rad)
  double phi_prime = 0.0;      // drive phase on 0<->2 (rad)
  DissipatorConvention convention = DissipatorConvention::MainText;

  double omega2() const { return omega1 * omega2_ratio; }
  double kappa1() const { return omega1 * kappa1_ratio; }
  double kappa2() const { return omega1 * kappa2_ratio; }
};

// Throws Error(InvalidArgument) when a coupling is negative or not finite.
void validate_params(const ModelParams& p);

// Throws Error(InvalidArgument) when rho violates Hermiticity, unit trace or
// positive semidefiniteness beyond the stated tolerances.
void check_density_matrix(const DensityMatrix& rho);

// Throws Error(InvalidArgument) when the amplitudes are not normalized.
void check_pure_state(const PureState& psi);

inline DensityMatrix pure_to_density(const PureState& psi) {
  return psi * psi.adjoint();
}

}  // namespace qme
