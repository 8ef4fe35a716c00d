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
#include <cstdint>
#include <functional>
#include <string>

#include "qme/compiler.hpp"
#include "qme/types.hpp"

namespace qme {

// Ideal3 resolves all three outcomes of the rotated projective measurement;
// SD2 only tells the bright ground state apart from the dark manifold, the
// way a fluorescence readout does.
enum class DetectionModel { Ideal3, SD2 };

inline int outcome_count(DetectionModel m) {
  return m == DetectionModel::Ideal3 ? 3 : 2;
}

// Shot counts for the nine measurement bases (see tomography_bases()).
// counts[b] sums to shots_per_basis; SD2 uses the first two slots.
struct TomographyRecord {
  std::int64_t shots_per_basis = 0;
  std::uint64_t seed = 0;
  DetectionModel model = DetectionModel::Ideal3;
  std::array<std::array<std::int64_t, 3>, 9> counts{};
};

// POVM element of outcome `outcome` in basis `basis` (detection after the
// basis rotation pulses).
Matrix3 povm_element(int basis, int outcome, DetectionModel model);

// Born-rule outcome probabilities, clamped and renormalized.
std::array<double, 3> outcome_probabilities(const DensityMatrix& rho,
                                            int basis, DetectionModel model);

// Samples counts for every basis; deterministic for a fixed seed (one
// independent substream per basis).
TomographyRecord simulate_measurements(const DensityMatrix& rho,
                                       std::int64_t shots, std::uint64_t seed,
                                       DetectionModel model =
                                           DetectionModel::Ideal3);

struct MleOptions {
  double tol = 1e-10;        // trace-norm change between iterates
  int max_iterations = 10000;
  double dilution = 0.5;     // step weight in (I + eps R) / (1 + eps)
};

struct MleResult {
  DensityMatrix rho;
  bool converged = false;
  int iterations = 0;
  double log_likelihood = 0.0;
  bool monotone = true;  // likelihood never decreased across iterations
};

// Maximum-likelihood reconstruction by the diluted R rho R fixed point.
// Iterates are positive semidefinite with unit trace by construction.
// Throws InvalidArgument if any basis carries no counts.
MleResult mle_reconstruct(const TomographyRecord& rec,
                          const MleOptions& opts = {});

// Same fixed point fed with exact probabilities instead of counts
// (the infinite-shot limit).
MleResult mle_reconstruct_probabilities(
    const std::array<std::array<double, 3>, 9>& probabilities,
    DetectionModel model, const MleOptions& opts = {});

struct BootstrapResult {
  double mean = 0.0;
  double std_dev = 0.0;
};

// Parametric bootstrap: resamples counts from the observed frequencies,
// reruns the MLE and evaluates `statistic` on each reconstruction.
// Deterministic for a fixed seed.
BootstrapResult monte_carlo_errors(
    const TomographyRecord& rec, int resamples,
    const std::function<double(const DensityMatrix&)>& statistic,
    std::uint64_t seed, const MleOptions& opts = {});

// Text serialization; to_text output parses back bit for bit.
std::string record_to_text(const TomographyRecord& rec);
TomographyRecord record_from_text(const std::string& text);

}  // namespace qme
