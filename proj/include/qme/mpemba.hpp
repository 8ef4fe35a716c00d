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

#include "qme/spectral.hpp"
#include "qme/types.hpp"

namespace qme {

// The engineered initial state that excites no slowest decaying mode.
//
// L_1 (Hermitian for a real lambda_1 after a phase rotation) is rescaled to
// unit Frobenius norm and diagonalized; phi1/phi2 are its eigenvectors with
// the most negative (alpha1 < 0) and most positive (alpha2 > 0) eigenvalues.
// The state is cos(s)|phi1> - i sin(s)|phi2> with s = arctan sqrt|a1/a2|,
// which satisfies <state|L_1|state> = cos^2(s) a1 + sin^2(s) a2 = 0 exactly.
struct SmeConstruction {
  Vector3 phi1, phi2;
  double alpha1 = 0.0;  // < 0
  double alpha2 = 0.0;  // > 0
  double s = 0.0;       // rotation angle (rad)
  PureState state;
  Matrix3 unitary;  // unitary with unitary * |0> == state
};

// Mixing angle arctan sqrt(|alpha1 / alpha2|).
double sme_mixing_angle(double alpha1, double alpha2);

// Builds the zero-overlap state from the slowest decaying mode of dec.
// Requires lambda_1 real (below the exceptional point); above it, only one
// of the two coalescing functionals could be cancelled, and the op throws
// DomainError pointing at hermitian_recombination.
SmeConstruction sme_state(const SpectralDecomposition& dec);

// Tr sqrt((rho-sigma)^+ (rho-sigma)): the trace norm of the difference.
double distance_eq4(const DensityMatrix& rho, const DensityMatrix& sigma);

// sqrt(Tr[(rho-sigma)^2]): the Frobenius (Hilbert-Schmidt) norm.
double distance_frobenius(const DensityMatrix& rho, const DensityMatrix& sigma);

// sqrt(2 (1 - sqrt(F))) with fidelity F = (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double distance_bures(const DensityMatrix& rho, const DensityMatrix& sigma);

// Half the trace norm of the difference.
double distance_trace(const DensityMatrix& rho, const DensityMatrix& sigma);

// Uhlmann fidelity between two states (PSD-clamped before the square roots).
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

}  // namespace qme
