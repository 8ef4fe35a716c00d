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

#include <random>

#include "qme/types.hpp"

namespace qme::test {

// The standard operating point used throughout the tests: strong decay on
// 0<->1, a weakly driven and weakly decaying third level.
inline ModelParams reference_params() {
  ModelParams p;
  p.omega1 = 1.0;
  p.omega2_ratio = 0.06;
  p.kappa1_ratio = 2.0;
  p.kappa2_ratio = 0.0015;
  return p;
}

inline qme::Complex random_complex(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return {n(rng), n(rng)};
}

inline qme::Matrix3 random_matrix(std::mt19937_64& rng) {
  qme::Matrix3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = random_complex(rng);
  return m;
}

inline qme::Matrix3 random_hermitian(std::mt19937_64& rng) {
  qme::Matrix3 g = random_matrix(rng);
  return 0.5 * (g + g.adjoint()).eval();
}

inline qme::DensityMatrix random_density(std::mt19937_64& rng) {
  qme::Matrix3 g = random_matrix(rng);
  qme::Matrix3 rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint()).eval();
}

inline qme::PureState random_pure(std::mt19937_64& rng) {
  qme::Vector3 v;
  for (int i = 0; i < 3; ++i) v(i) = random_complex(rng);
  return v.normalized();
}

// Random couplings kept away from exceptional points and from the
// uncoupled degeneracies, so spectral decompositions stay well conditioned.
inline ModelParams random_params(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ModelParams p;
  p.omega1 = 1.0;
  p.omega2_ratio = 0.02 + 0.06 * u(rng);
  p.kappa1_ratio = 0.8 + 2.0 * u(rng);
  p.kappa2_ratio = 0.005 + 0.08 * u(rng);
  return p;
}

inline qme::Vector3 basis_ket(int i) {
  qme::Vector3 v = qme::Vector3::Zero();
  v(i) = 1.0;
  return v;
}

inline qme::DensityMatrix basis_projector(int i) {
  qme::Vector3 v = basis_ket(i);
  return v * v.adjoint();
}

}  // namespace qme::test
