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
#include <optional>
#include <utility>
#include <vector>

#include "qme/model.hpp"
#include "qme/types.hpp"

namespace qme {

// Decompositions with a condition number beyond this are flagged defective;
// operations that need a clean eigenbasis refuse them.
constexpr double kDefectiveCondition = 1e8;

// Eigenmode expansion of the generator.
//
// Ordering: eigenvalues sorted by decreasing real part (the zero mode first),
// ties broken by ascending imaginary part, then by original index. Right
// eigenvector phases are fixed by making the largest-magnitude entry of each
// R_i real and positive; R_0 is rescaled to unit trace, making L_0 the
// identity. Left modes are biorthonormal to the right ones: Tr[L_i R_j] =
// delta_ij, so overlaps are c_i = Tr[L_i rho].
//
// When hermitian_recombination() has been applied, recombined_pairs lists
// index pairs (i, j) whose entries hold the Hermitian combinations
// R_i' = R_+ + R_-, R_j' = i (R_+ - R_-) instead of eigenmatrices; their
// eigenvalue slots keep the conjugate pair a -/+ i w.
struct SpectralDecomposition {
  DissipatorConvention convention = DissipatorConvention::MainText;
  std::array<Complex, 9> eigenvalues{};
  std::array<Matrix3, 9> right{};
  std::array<Matrix3, 9> left{};
  double gap = 0.0;        // |Re lambda_1|
  double tau1 = 0.0;       // 1 / |Re lambda_1|
  double tau2 = 0.0;       // 1 / |Re lambda_2|
  double condition = 1.0;  // condition number of the eigenvector matrix
  bool defective = false;
  int zero_multiplicity = 1;  // eigenvalues within tolerance of zero
  std::vector<std::pair<int, int>> recombined_pairs;

  double scale() const;  // max |eigenvalue|, at least 1e-300
  bool is_recombined(int i) const;
};

using OverlapVector = std::array<Complex, 9>;

enum class Regime { Strong, SuperStrong, WeakOrNone };

struct RegimeReport {
  Regime regime = Regime::WeakOrNone;
  double speedup_factor = 0.0;  // Re[l1 - l2], or Re[l1 - l3] at coalescence
  std::optional<double> lep_ratio;  // filled by flows that ran a LEP search
};

struct LepScanRow {
  double ratio = 0.0;
  Complex lambda1, lambda2;
  Complex c1, c2;  // normalized-functional overlaps of the fixed rho_in
  double condition = 1.0;
  bool flagged = false;  // high condition: values near the EP are unreliable
};

SpectralDecomposition eigendecompose(const Superoperator& sup);

// R_0 scaled to unit trace. Throws Defective on a flagged decomposition and
// DegenerateSteadyState when the zero eigenvalue is not simple.
DensityMatrix stationary_state(const SpectralDecomposition& dec);

// Expansion coefficients c_i = Tr[L_i rho_in]; refuses defective input.
OverlapVector overlaps(const SpectralDecomposition& dec,
                       const DensityMatrix& rho_in);

// Overlap against the scale-free functional L_i / ||L_i||_F with the phase
// fixed (largest entry real positive). Unlike the biorthonormal c_i these
// stay bounded near an exceptional point, where they coalesce pairwise.
Complex normalized_overlap(const SpectralDecomposition& dec, int i,
                           const DensityMatrix& rho_in);

// Replaces every conjugate eigenvalue pair with the Hermitian combinations
// described on SpectralDecomposition. Without any complex pair this is the
// identity transform (recombined_pairs stays empty).
SpectralDecomposition hermitian_recombination(const SpectralDecomposition& dec);

// One spectral row per requested Omega_2 / Omega_1 value; rows whose
// decomposition is ill conditioned are flagged rather than silently wrong.
std::vector<LepScanRow> lep_scan(const ModelParams& p,
                                 const std::vector<double>& ratios,
                                 const DensityMatrix& rho_in);

// Bisection on the indicator [Im lambda_1 != 0] over Omega_2 / Omega_1.
// Requires Im lambda_1 = 0 at lo and != 0 at hi; absolute tolerance 1e-6.
double locate_lep(const ModelParams& p, double lo, double hi);

RegimeReport classify_regime(const ModelParams& p);

}  // namespace qme
