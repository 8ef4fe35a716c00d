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

#include "qme/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qme {

namespace {

const Complex kI(0.0, 1.0);

// Relative tolerance deciding whether an imaginary part is physical.
constexpr double kImagTolRel = 1e-10;
// Relative tolerance on |lambda1 - lambda2| for eigenvalue coalescence.
// A ratio located by locate_lep sits within ~1e-6 of the exceptional point,
// where the residual splitting is ~1e-3 of |lambda1|; genuinely separated
// spectra are two orders of magnitude above this.
constexpr double kCoalescenceTolRel = 2e-2;
// Absolute tolerance of the bisection on the drive ratio.
constexpr double kRatioTol = 1e-6;

// Multiplies v so its largest-magnitude entry becomes real positive.
// The first strict maximum wins, which keeps the choice deterministic.
template <typename Vec>
void fix_phase(Vec& v) {
  int arg = 0;
  double best = -1.0;
  for (int k = 0; k < v.size(); ++k) {
    double a = std::abs(v(k));
    if (a > best) {
      best = a;
      arg = k;
    }
  }
  if (best <= 0.0) return;
  v *= std::conj(v(arg)) / best;
}

Matrix3 fix_phase_matrix(const Matrix3& m) {
  Vector9 v = vectorize(m);
  fix_phase(v);
  return devectorize(v);
}

// Left functional matrix from a row of the inverted eigenvector matrix:
// Tr[L rho] = row . vec(rho)  requires  L(n, m) = row(m + 3 n).
Matrix3 left_from_row(const Eigen::Matrix<Complex, 1, 9>& row) {
  Vector9 v = row.transpose();
  return devectorize(v).transpose();
}

double imag_tolerance(const SpectralDecomposition& dec) {
  return kImagTolRel * std::max(1.0, dec.scale());
}

bool has_physical_imag(const SpectralDecomposition& dec, int i) {
  return std::abs(dec.eigenvalues[i].imag()) > imag_tolerance(dec);
}

}  // namespace

double SpectralDecomposition::scale() const {
  double s = 0.0;
  for (const Complex& l : eigenvalues) s = std::max(s, std::abs(l));
  return std::max(s, 1e-300);
}

bool SpectralDecomposition::is_recombined(int i) const {
  for (const auto& [a, b] : recombined_pairs) {
    if (a == i || b == i) return true;
  }
  return false;
}

SpectralDecomposition eigendecompose(const Superoperator& sup) {
  Eigen::ComplexEigenSolver<Matrix9> solver(sup.matrix);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Internal, "eigendecomposition failed to converge");
  }

  const Vector9 vals = solver.eigenvalues();
  double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);

  // Sort by descending real part; ties (quantized at 1e-9 of the spectral
  // scale) by ascending imaginary part, then by solver index.
  const double quantum = 1e-9 * scale;
  auto key_re = [&](int i) { return std::round(vals(i).real() / quantum); };
  std::array<int, 9> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double ra = key_re(a), rb = key_re(b);
    if (ra != rb) return ra > rb;
    if (vals(a).imag() != vals(b).imag())
      return vals(a).imag() < vals(b).imag();
    return a < b;
  });

  SpectralDecomposition dec;
  dec.convention = sup.convention;

  Matrix9 x;
  for (int i = 0; i < 9; ++i) {
    dec.eigenvalues[i] = vals(order[i]);
    Vector9 v = solver.eigenvectors().col(order[i]);
    fix_phase(v);
    x.col(i) = v;
  }

  // Tie conjugate pairs together: the +Im partner becomes the dagger of the
  // -Im one (an eigenvector of the conjugate eigenvalue by Hermiticity
  // preservation). Independent phase fixing would leave an arbitrary
  // relative phase between the two.
  const double pair_tol = 1e-8 * scale;
  for (int i = 0; i + 1 < 9; ++i) {
    const Complex a = dec.eigenvalues[i];
    const Complex b = dec.eigenvalues[i + 1];
    if (a.imag() < -1e-12 * scale && std::abs(a - std::conj(b)) <= pair_tol) {
      x.col(i + 1) = vectorize(devectorize(x.col(i)).adjoint().eval());
      ++i;
    }
  }

  // Zero-eigenvalue multiplicity (dark subspaces make the steady state
  // non-unique).
  const double zero_tol = 1e-9 * std::max(1.0, scale);
  dec.zero_multiplicity = 0;
  for (const Complex& l : dec.eigenvalues) {
    if (std::abs(l) <= zero_tol) ++dec.zero_multiplicity;
  }

  // Scale R_0 to unit trace so that L_0 comes out as the identity.
  const Complex t0 = devectorize(x.col(0)).trace();
  if (std::abs(t0) > 1e-8) {
    x.col(0) /= t0;
  }

  Eigen::JacobiSVD<Matrix9> svd(x);
  const double smin = svd.singularValues().minCoeff();
  dec.condition = smin > 0.0
                      ? svd.singularValues().maxCoeff() / smin
                      : std::numeric_limits<double>::infinity();
  dec.defective = !(dec.condition < kDefectiveCondition);

  const Matrix9 xinv = x.inverse();
  for (int i = 0; i < 9; ++i) {
    dec.right[i] = devectorize(x.col(i));
    dec.left[i] = left_from_row(xinv.row(i));
  }

  dec.gap = std::abs(dec.eigenvalues[1].real());
  dec.tau1 = dec.gap > 0.0 ? 1.0 / dec.gap
                           : std::numeric_limits<double>::infinity();
  const double g2 = std::abs(dec.eigenvalues[2].real());
  dec.tau2 = g2 > 0.0 ? 1.0 / g2 : std::numeric_limits<double>::infinity();
  return dec;
}

DensityMatrix stationary_state(const SpectralDecomposition& dec) {
  // Degeneracy is diagnosed from the eigenvalues alone, which stay reliable
  // even when the eigenbasis is defective, so it is reported first.
  if (dec.zero_multiplicity != 1) {
    std::ostringstream msg;
    msg << "stationary state not unique: " << dec.zero_multiplicity
        << " eigenvalues within tolerance of zero (indices";
    const double zero_tol = 1e-9 * std::max(1.0, dec.scale());
    for (int i = 0; i < 9; ++i) {
      if (std::abs(dec.eigenvalues[i]) <= zero_tol) msg << ' ' << i;
    }
    msg << ")";
    throw Error(ErrorCode::DegenerateSteadyState, msg.str());
  }
  if (dec.defective) {
    throw Error(ErrorCode::Defective,
                "decomposition flagged defective (condition too high)");
  }
  Matrix3 rho = dec.right[0];
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return rho;
}

OverlapVector overlaps(const SpectralDecomposition& dec,
                       const DensityMatrix& rho_in) {
  if (dec.defective) {
    throw Error(ErrorCode::Defective,
                "overlaps against a defective decomposition are unreliable; "
                "apply hermitian_recombination or evaluate at an "
                "epsilon-offset parameter instead");
  }
  OverlapVector c;
  for (int i = 0; i < 9; ++i) {
    c[i] = (dec.left[i] * rho_in).trace();
  }
  return c;
}

Complex normalized_overlap(const SpectralDecomposition& dec, int i,
                           const DensityMatrix& rho_in) {
  if (i < 0 || i > 8) {
    throw Error(ErrorCode::InvalidArgument, "mode index out of range");
  }
  Matrix3 l = dec.left[i];
  const double norm = l.norm();
  if (norm <= 0.0) {
    throw Error(ErrorCode::Internal, "left mode has zero norm");
  }
  l = fix_phase_matrix(l / norm);
  return (l * rho_in).trace();
}

SpectralDecomposition hermitian_recombination(
    const SpectralDecomposition& dec) {
  SpectralDecomposition out = dec;
  if (dec.is_recombined(1)) return out;

  // Only the slowest pair is recombined; the evolution handles the faster
  // conjugate pairs in complex form directly.
  const double pair_tol = 1e-8 * std::max(1.0, dec.scale());
  const Complex l1 = dec.eigenvalues[1];
  const Complex l2 = dec.eigenvalues[2];
  const bool conjugate_pair = std::abs(l1 - std::conj(l2)) <= pair_tol &&
                              std::abs(l1.imag()) > imag_tolerance(dec);
  if (!conjugate_pair) return out;  // identity transform, pair list empty

  const int plus = l1.imag() > 0.0 ? 1 : 2;
  const int minus = plus == 1 ? 2 : 1;
  out.right[1] = dec.right[plus] + dec.right[minus];
  out.right[2] = kI * (dec.right[plus] - dec.right[minus]);
  out.left[1] = 0.5 * (dec.left[plus] + dec.left[minus]);
  out.left[2] = (dec.left[plus] - dec.left[minus]) / (2.0 * kI);
  out.recombined_pairs.emplace_back(1, 2);
  return out;
}

std::vector<LepScanRow> lep_scan(const ModelParams& p,
                                 const std::vector<double>& ratios,
                                 const DensityMatrix& rho_in) {
  validate_params(p);
  for (std::size_t k = 0; k < ratios.size(); ++k) {
    if (ratios[k] <= 0.0 || (k > 0 && ratios[k] <= ratios[k - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "ratios must be positive and strictly increasing");
    }
  }

  std::vector<LepScanRow> table;
  table.reserve(ratios.size());
  for (double r : ratios) {
    ModelParams pr = p;
    pr.omega2_ratio = r;
    SpectralDecomposition dec = eigendecompose(build_liouvillian(pr));
    LepScanRow row;
    row.ratio = r;
    row.lambda1 = dec.eigenvalues[1];
    row.lambda2 = dec.eigenvalues[2];
    row.c1 = normalized_overlap(dec, 1, rho_in);
    row.c2 = normalized_overlap(dec, 2, rho_in);
    row.condition = dec.condition;
    row.flagged = dec.condition > 1e6;
    table.push_back(row);
  }
  return table;
}

namespace {

bool imag_at_ratio(const ModelParams& p, double ratio) {
  ModelParams pr = p;
  pr.omega2_ratio = ratio;
  SpectralDecomposition dec = eigendecompose(build_liouvillian(pr));
  return has_physical_imag(dec, 1);
}

}  // namespace

double locate_lep(const ModelParams& p, double lo, double hi) {
  validate_params(p);
  if (!(lo > 0.0) || !(hi > lo)) {
    throw Error(ErrorCode::InvalidArgument, "bracket must satisfy 0 < lo < hi");
  }
  if (imag_at_ratio(p, lo)) {
    throw Error(ErrorCode::InvalidArgument,
                "bracket invalid: Im lambda_1 already nonzero at lo");
  }
  if (!imag_at_ratio(p, hi)) {
    throw Error(ErrorCode::InvalidArgument,
                "bracket invalid: Im lambda_1 still zero at hi");
  }
  while (hi - lo > kRatioTol) {
    const double mid = 0.5 * (lo + hi);
    (imag_at_ratio(p, mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

RegimeReport classify_regime(const ModelParams& p) {
  validate_params(p);
  SpectralDecomposition dec = eigendecompose(build_liouvillian(p));
  const Complex l1 = dec.eigenvalues[1];
  const Complex l2 = dec.eigenvalues[2];
  const Complex l3 = dec.eigenvalues[3];

  RegimeReport report;
  const double local = std::max({std::abs(l1), std::abs(l2), 1e-300});
  if (std::abs(l1 - l2) <= kCoalescenceTolRel * local) {
    report.regime = Regime::SuperStrong;
    report.speedup_factor = (l1 - l3).real();
  } else if (has_physical_imag(dec, 1)) {
    report.regime = Regime::WeakOrNone;
    report.speedup_factor = 0.0;
  } else {
    report.regime = Regime::Strong;
    report.speedup_factor = (l1 - l2).real();
  }
  return report;
}

}  // namespace qme
