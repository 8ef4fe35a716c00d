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

#include <array>
#include <vector>

#include "qme/types.hpp"

namespace qme {

// Generator of the master equation in vectorized form. The 9x9 matrix acts
// on column-major vectorized density matrices, vec(rho)_k = rho(k % 3, k / 3).
// All spectral code relies on this ordering.
struct Superoperator {
  Matrix9 matrix = Matrix9::Zero();
  DissipatorConvention convention = DissipatorConvention::MainText;
};

inline Vector9 vectorize(const Matrix3& m) {
  return Eigen::Map<const Vector9>(m.data());
}

inline Matrix3 devectorize(const Vector9& v) {
  return Eigen::Map<const Matrix3>(v.data());
}

// H has couplings only between level 0 and levels 1, 2:
//   H[0][j] = (Omega_j / 2) e^{-i phi_j},  H[j][0] = (Omega_j / 2) e^{+i phi_j}.
Matrix3 build_hamiltonian(const ModelParams& p);

// The two decay channels J_j = sqrt(kappa_j) |0><j|, j = 1, 2.
std::array<Matrix3, 2> build_jump_operators(const ModelParams& p);

// Vectorized form of  -i[H, rho] + f * sum_j (J rho J^+ - {J^+ J, rho} / 2)
// with f = 1 (MainText) or f = 2 (SuppFactor2).
Superoperator build_liouvillian(const ModelParams& p);

// Operator-level variants. These accept arbitrary Hamiltonians and jump
// lists (any dimension-3 operators, including ones a ModelParams cannot
// express, e.g. all drives off with decay on).
Superoperator build_liouvillian(const Matrix3& h,
                                const std::vector<Matrix3>& jumps,
                                DissipatorConvention convention);
Matrix3 apply_liouvillian_direct(const Matrix3& h,
                                 const std::vector<Matrix3>& jumps,
                                 DissipatorConvention convention,
                                 const Matrix3& rho);

// Direct matrix-form evaluation of the generator; no vectorization involved.
// Serves as the independent route the vectorized form is checked against.
Matrix3 apply_liouvillian_direct(const ModelParams& p, const Matrix3& rho);

// devectorize(L.matrix * vectorize(rho)).
Matrix3 apply_liouvillian(const Superoperator& sup, const Matrix3& rho);

}  // namespace qme
