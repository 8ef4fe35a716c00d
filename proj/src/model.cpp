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

#include "qme/model.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace qme {

namespace {
const Complex kI(0.0, 1.0);
}

void validate_params(const ModelParams& p) {
  auto bad = [](double v) { return !std::isfinite(v); };
  if (bad(p.omega1) || bad(p.omega2_ratio) || bad(p.kappa1_ratio) ||
      bad(p.kappa2_ratio) || bad(p.phi) || bad(p.phi_prime)) {
    throw Error(ErrorCode::InvalidArgument, "model params must be finite");
  }
  if (p.omega1 <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "omega1 must be positive");
  }
  if (p.omega2_ratio < 0.0 || p.kappa1_ratio < 0.0 || p.kappa2_ratio < 0.0) {
    throw Error(ErrorCode::InvalidArgument,
                "couplings omega2/kappa1/kappa2 must be nonnegative");
  }
}

void check_density_matrix(const DensityMatrix& rho) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw Error(ErrorCode::InvalidArgument, "density matrix not Hermitian");
  }
  if (std::abs(rho.trace() - Complex(1.0, 0.0)) > kTraceTol) {
    throw Error(ErrorCode::InvalidArgument, "density matrix trace != 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix3> es(rho);
  if (es.eigenvalues().minCoeff() < -kPsdTol) {
    throw Error(ErrorCode::InvalidArgument,
                "density matrix not positive semidefinite");
  }
}

void check_pure_state(const PureState& psi) {
  if (std::abs(psi.squaredNorm() - 1.0) > kTraceTol) {
    throw Error(ErrorCode::InvalidArgument, "pure state not normalized");
  }
}

Matrix3 build_hamiltonian(const ModelParams& p) {
  validate_params(p);
  Matrix3 h = Matrix3::Zero();
  const double half1 = 0.5 * p.omega1;
  const double half2 = 0.5 * p.omega2();
  h(0, 1) = half1 * std::exp(-kI * p.phi);
  h(1, 0) = half1 * std::exp(kI * p.phi);
  h(0, 2) = half2 * std::exp(-kI * p.phi_prime);
  h(2, 0) = half2 * std::exp(kI * p.phi_prime);
  return h;
}

std::array<Matrix3, 2> build_jump_operators(const ModelParams& p) {
  validate_params(p);
  std::array<Matrix3, 2> jumps = {Matrix3::Zero(), Matrix3::Zero()};
  jumps[0](0, 1) = std::sqrt(p.kappa1());
  jumps[1](0, 2) = std::sqrt(p.kappa2());
  return jumps;
}

Superoperator build_liouvillian(const Matrix3& h,
                                const std::vector<Matrix3>& jumps,
                                DissipatorConvention convention) {
  const double factor =
      convention == DissipatorConvention::SuppFactor2 ? 2.0 : 1.0;
  const Matrix3 id = Matrix3::Identity();

  // Column-major vectorization: vec(A X B) = (B^T (x) A) vec(X).
  Superoperator sup;
  sup.convention = convention;
  sup.matrix = -kI * (Eigen::kroneckerProduct(id, h).eval() -
                      Eigen::kroneckerProduct(h.transpose(), id).eval());
  for (const Matrix3& j : jumps) {
    const Matrix3 jdj = j.adjoint() * j;
    sup.matrix +=
        factor * (Eigen::kroneckerProduct(j.conjugate(), j).eval() -
                  0.5 * Eigen::kroneckerProduct(id, jdj).eval() -
                  0.5 * Eigen::kroneckerProduct(jdj.transpose(), id).eval());
  }
  return sup;
}

Superoperator build_liouvillian(const ModelParams& p) {
  const auto jumps = build_jump_operators(p);
  return build_liouvillian(build_hamiltonian(p), {jumps[0], jumps[1]},
                           p.convention);
}

Matrix3 apply_liouvillian_direct(const Matrix3& h,
                                 const std::vector<Matrix3>& jumps,
                                 DissipatorConvention convention,
                                 const Matrix3& rho) {
  const double factor =
      convention == DissipatorConvention::SuppFactor2 ? 2.0 : 1.0;
  Matrix3 out = -kI * (h * rho - rho * h);
  for (const Matrix3& j : jumps) {
    const Matrix3 jdj = j.adjoint() * j;
    out += factor * (j * rho * j.adjoint() - 0.5 * (jdj * rho + rho * jdj));
  }
  return out;
}

Matrix3 apply_liouvillian_direct(const ModelParams& p, const Matrix3& rho) {
  const auto jumps = build_jump_operators(p);
  return apply_liouvillian_direct(build_hamiltonian(p), {jumps[0], jumps[1]},
                                  p.convention, rho);
}

Matrix3 apply_liouvillian(const Superoperator& sup, const Matrix3& rho) {
  return devectorize(sup.matrix * vectorize(rho));
}

}  // namespace qme
