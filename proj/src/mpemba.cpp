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

#include "qme/mpemba.hpp"

#include <cmath>

namespace qme {

namespace {

const Complex kI(0.0, 1.0);

// Multiplies v so its largest-magnitude entry becomes real positive.
void fix_vector_phase(Vector3& v) {
  int arg = 0;
  double best = -1.0;
  for (int k = 0; k < 3; ++k) {
    if (std::abs(v(k)) > best) {
      best = std::abs(v(k));
      arg = k;
    }
  }
  if (best > 0.0) v *= std::conj(v(arg)) / best;
}

// PSD square root with small negative eigenvalues clamped to zero.
Matrix3 psd_sqrt(const Matrix3& m) {
  Eigen::SelfAdjointEigenSolver<Matrix3> es(0.5 * (m + m.adjoint()));
  Eigen::Vector3d vals = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * vals.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

double trace_norm(const Matrix3& m) {
  return Eigen::JacobiSVD<Matrix3>(m).singularValues().sum();
}

}  // namespace

double sme_mixing_angle(double alpha1, double alpha2) {
  if (!(alpha1 < 0.0) || !(alpha2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "mixing angle needs alpha1 < 0 < alpha2");
  }
  return std::atan(std::sqrt(-alpha1 / alpha2));
}

SmeConstruction sme_state(const SpectralDecomposition& dec) {
  if (dec.defective) {
    throw Error(ErrorCode::Defective,
                "decomposition flagged defective near the exceptional point");
  }
  // Below the exceptional point lambda_1 is real and L_1 Hermitizable. Above
  // it the construction still applies to the Hermitian pair basis produced
  // by hermitian_recombination, where it cancels one of the two coalescing
  // functionals (both is impossible).
  const Complex l1 = dec.eigenvalues[1];
  if (!dec.is_recombined(1) &&
      std::abs(l1.imag()) > 1e-10 * std::max(1.0, dec.scale())) {
    throw Error(ErrorCode::DomainError,
                "lambda_1 is complex (above the exceptional point): the two "
                "coalescing functionals cannot be cancelled simultaneously; "
                "see hermitian_recombination for the Hermitian pair basis");
  }

  // L_1 is Hermitian up to a global phase when lambda_1 is real. Rotate the
  // phase out via Tr[L^2] = e^{-2 i theta} ||L||^2, symmetrize the remainder
  // and normalize. c_1 = 0 is invariant under this rescaling.
  Matrix3 l = dec.left[1];
  const Complex t2 = (l * l).trace();
  if (std::abs(t2) > 0.0) {
    l *= std::exp(kI * (-0.5 * std::arg(t2)));
  }
  Matrix3 herm = 0.5 * (l + l.adjoint());
  if ((l - herm).cwiseAbs().maxCoeff() > 1e-8 * herm.norm()) {
    throw Error(ErrorCode::Internal,
                "L_1 not Hermitizable; decomposition too ill-conditioned");
  }
  herm /= herm.norm();

  Eigen::SelfAdjointEigenSolver<Matrix3> es(herm);
  Eigen::Vector3d alpha = es.eigenvalues();  // ascending

  // Overall sign of L_1 is free; fix it by making the largest-magnitude
  // eigenvalue positive so the (negative, positive) pair is deterministic.
  if (std::abs(alpha(0)) > std::abs(alpha(2))) {
    herm = -herm;
    es.compute(herm);
    alpha = es.eigenvalues();
  }
  if (!(alpha(0) < 0.0) || !(alpha(2) > 0.0)) {
    throw Error(ErrorCode::DomainError,
                "L_1 needs at least one negative and one positive eigenvalue");
  }

  SmeConstruction sme;
  sme.alpha1 = alpha(0);  // most negative
  sme.alpha2 = alpha(2);  // most positive
  sme.phi1 = es.eigenvectors().col(0);
  sme.phi2 = es.eigenvectors().col(2);
  fix_vector_phase(sme.phi1);
  fix_vector_phase(sme.phi2);

  sme.s = sme_mixing_angle(sme.alpha1, sme.alpha2);
  sme.state = std::cos(sme.s) * sme.phi1 - kI * std::sin(sme.s) * sme.phi2;
  sme.state.normalize();

  // Complete U|0> = state by Gram-Schmidt against the computational kets.
  sme.unitary.col(0) = sme.state;
  int filled = 1;
  for (int seed = 0; seed < 3 && filled < 3; ++seed) {
    Vector3 v = Vector3::Zero();
    v(seed) = 1.0;
    for (int c = 0; c < filled; ++c) {
      v -= sme.unitary.col(c) * (sme.unitary.col(c).adjoint() * v);
    }
    if (v.norm() > 1e-6) {
      sme.unitary.col(filled++) = v.normalized();
    }
  }
  if (filled != 3) {
    throw Error(ErrorCode::Internal, "failed to complete preparation unitary");
  }
  return sme;
}

double distance_eq4(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return trace_norm(rho - sigma);
}

double distance_frobenius(const DensityMatrix& rho,
                          const DensityMatrix& sigma) {
  return (rho - sigma).norm();
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const Matrix3 sr = psd_sqrt(rho);
  const Matrix3 inner = sr * sigma * sr;
  Eigen::SelfAdjointEigenSolver<Matrix3> es(0.5 * (inner + inner.adjoint()));
  const double root_sum = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return root_sum * root_sum;
}

double distance_bures(const DensityMatrix& rho, const DensityMatrix& sigma) {
  const double root_f = std::min(std::sqrt(fidelity(rho, sigma)), 1.0);
  return std::sqrt(2.0 * (1.0 - root_f));
}

double distance_trace(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return 0.5 * trace_norm(rho - sigma);
}

}  // namespace qme
