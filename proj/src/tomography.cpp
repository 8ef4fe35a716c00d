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

#include "qme/tomography.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qme/mpemba.hpp"

namespace qme {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent substream: hash the seed with the stream tags.
std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag_a,
                            std::uint64_t tag_b) {
  std::uint64_t s = seed;
  splitmix64(s);
  s ^= 0x51d2cc5b4f1296a1ULL * (tag_a + 1);
  splitmix64(s);
  s ^= 0xd6e8feb86659fd93ULL * (tag_b + 1);
  return std::mt19937_64(splitmix64(s));
}

// Uniform double in [0, 1) from the standardized mt19937_64 sequence.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Rotation W_b mapping basis state b onto |0> (unrotated frame).
const std::array<Matrix3, 9>& basis_rotations() {
  static const std::array<Matrix3, 9> ws = [] {
    std::array<Matrix3, 9> out;
    for (int b = 0; b < 9; ++b) {
      Matrix3 w = Matrix3::Identity();
      for (const RotationGate& pulse : tomography_rotation(b, nullptr)) {
        w = rotation_matrix(pulse) * w;
      }
      out[b] = w;
    }
    return out;
  }();
  return ws;
}

void check_basis_outcome(int basis, int outcome, DetectionModel model) {
  if (basis < 0 || basis > 8 || outcome < 0 ||
      outcome >= outcome_count(model)) {
    throw Error(ErrorCode::InvalidArgument, "basis/outcome out of range");
  }
}

double log_likelihood_of(const std::array<std::array<double, 3>, 9>& weights,
                         const std::array<Matrix3, 27>& povms,
                         DetectionModel model, const Matrix3& rho) {
  double ll = 0.0;
  for (int b = 0; b < 9; ++b) {
    for (int o = 0; o < outcome_count(model); ++o) {
      if (weights[b][o] <= 0.0) continue;
      const double p =
          std::max(1e-300, (povms[3 * b + o] * rho).trace().real());
      ll += weights[b][o] * std::log(p);
    }
  }
  return ll;
}

MleResult mle_fixed_point(const std::array<std::array<double, 3>, 9>& weights,
                          DetectionModel model, const MleOptions& opts) {
  std::array<Matrix3, 27> povms;
  double total = 0.0;
  for (int b = 0; b < 9; ++b) {
    double row = 0.0;
    for (int o = 0; o < outcome_count(model); ++o) {
      povms[3 * b + o] = povm_element(b, o, model);
      row += weights[b][o];
    }
    if (row <= 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "incomplete record: a basis carries no counts");
    }
    total += row;
  }

  MleResult result;
  Matrix3 rho = Matrix3::Identity() / 3.0;
  double ll = log_likelihood_of(weights, povms, model, rho);
  double eps = opts.dilution;

  for (result.iterations = 1; result.iterations <= opts.max_iterations;
       ++result.iterations) {
    Matrix3 r = Matrix3::Zero();
    for (int b = 0; b < 9; ++b) {
      for (int o = 0; o < outcome_count(model); ++o) {
        if (weights[b][o] <= 0.0) continue;
        const double p =
            std::max(1e-12, (povms[3 * b + o] * rho).trace().real());
        r += (weights[b][o] / p) * povms[3 * b + o];
      }
    }
    r /= total;  // R(rho_mle) = I at an interior fixed point
    r = 0.5 * (r + r.adjoint()).eval();

    // Diluted update, halving the step until the likelihood does not drop.
    Matrix3 next;
    double ll_next = 0.0;
    double step = eps;
    bool accepted = false;
    for (int attempt = 0; attempt < 12; ++attempt) {
      const Matrix3 t =
          (Matrix3::Identity() + step * r) / (1.0 + step);
      next = t * rho * t;
      next = 0.5 * (next + next.adjoint()).eval();
      next /= next.trace().real();
      ll_next = log_likelihood_of(weights, povms, model, next);
      if (ll_next >= ll - 1e-9 * (std::abs(ll) + 1.0)) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) result.monotone = false;
    eps = std::min(opts.dilution, step * 2.0);

    const double change = distance_eq4(next, rho);
    rho = next;
    ll = ll_next;
    if (change <= opts.tol) {
      result.converged = true;
      break;
    }
  }
  result.rho = rho;
  result.log_likelihood = ll;
  return result;
}

}  // namespace

Matrix3 povm_element(int basis, int outcome, DetectionModel model) {
  check_basis_outcome(basis, outcome, model);
  const Matrix3& w = basis_rotations()[basis];
  if (model == DetectionModel::SD2 && outcome == 1) {
    Vector3 ket = Vector3::Zero();
    ket(0) = 1.0;
    return Matrix3::Identity() - w.adjoint() * (ket * ket.adjoint()) * w;
  }
  Vector3 ket = Vector3::Zero();
  ket(outcome) = 1.0;
  return w.adjoint() * (ket * ket.adjoint()) * w;
}

std::array<double, 3> outcome_probabilities(const DensityMatrix& rho,
                                            int basis, DetectionModel model) {
  check_basis_outcome(basis, 0, model);
  std::array<double, 3> p{0.0, 0.0, 0.0};
  double sum = 0.0;
  for (int o = 0; o < outcome_count(model); ++o) {
    p[o] = std::max(0.0, (povm_element(basis, o, model) * rho).trace().real());
    sum += p[o];
  }
  if (sum <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "state has no outcome weight");
  }
  for (double& v : p) v /= sum;
  return p;
}

TomographyRecord simulate_measurements(const DensityMatrix& rho,
                                       std::int64_t shots, std::uint64_t seed,
                                       DetectionModel model) {
  if (shots < 1) {
    throw Error(ErrorCode::InvalidArgument, "shots must be >= 1");
  }
  check_density_matrix(rho);

  TomographyRecord rec;
  rec.shots_per_basis = shots;
  rec.seed = seed;
  rec.model = model;
  for (int b = 0; b < 9; ++b) {
    const auto p = outcome_probabilities(rho, b, model);
    auto rng = make_stream(seed, 0x746f6d6fULL, static_cast<std::uint64_t>(b));
    for (std::int64_t s = 0; s < shots; ++s) {
      const double u = uniform01(rng);
      int o = 0;
      double acc = p[0];
      while (o + 1 < outcome_count(model) && u >= acc) {
        ++o;
        acc += p[o];
      }
      ++rec.counts[b][o];
    }
  }
  return rec;
}

MleResult mle_reconstruct(const TomographyRecord& rec, const MleOptions& opts) {
  if (rec.shots_per_basis < 1) {
    throw Error(ErrorCode::InvalidArgument, "record has no shots");
  }
  std::array<std::array<double, 3>, 9> weights{};
  for (int b = 0; b < 9; ++b) {
    std::int64_t row = 0;
    for (int o = 0; o < 3; ++o) {
      if (rec.counts[b][o] < 0) {
        throw Error(ErrorCode::InvalidArgument, "negative count");
      }
      weights[b][o] = static_cast<double>(rec.counts[b][o]);
      row += rec.counts[b][o];
    }
    if (row != rec.shots_per_basis) {
      throw Error(ErrorCode::InvalidArgument,
                  "counts of a basis do not sum to shots_per_basis");
    }
  }
  return mle_fixed_point(weights, rec.model, opts);
}

MleResult mle_reconstruct_probabilities(
    const std::array<std::array<double, 3>, 9>& probabilities,
    DetectionModel model, const MleOptions& opts) {
  return mle_fixed_point(probabilities, model, opts);
}

BootstrapResult monte_carlo_errors(
    const TomographyRecord& rec, int resamples,
    const std::function<double(const DensityMatrix&)>& statistic,
    std::uint64_t seed, const MleOptions& opts) {
  if (resamples < 100) {
    throw Error(ErrorCode::InvalidArgument, "need at least 100 resamples");
  }
  const double shots = static_cast<double>(rec.shots_per_basis);

  std::vector<double> values;
  values.reserve(resamples);
  for (int r = 0; r < resamples; ++r) {
    TomographyRecord sample = rec;
    sample.counts = {};
    for (int b = 0; b < 9; ++b) {
      std::array<double, 3> p{};
      for (int o = 0; o < 3; ++o) p[o] = rec.counts[b][o] / shots;
      auto rng = make_stream(seed, 0x62747374ULL + r, b);
      for (std::int64_t s = 0; s < rec.shots_per_basis; ++s) {
        const double u = uniform01(rng);
        int o = 0;
        double acc = p[0];
        while (o + 1 < outcome_count(rec.model) && u >= acc) {
          ++o;
          acc += p[o];
        }
        ++sample.counts[b][o];
      }
    }
    values.push_back(statistic(mle_reconstruct(sample, opts).rho));
  }

  BootstrapResult result;
  for (double v : values) result.mean += v;
  result.mean /= values.size();
  double ss = 0.0;
  for (double v : values) ss += (v - result.mean) * (v - result.mean);
  result.std_dev = std::sqrt(ss / (values.size() - 1));
  return result;
}

std::string record_to_text(const TomographyRecord& rec) {
  std::ostringstream out;
  out << "qme-tomo v1\n";
  out << "shots " << rec.shots_per_basis << "\n";
  out << "seed " << rec.seed << "\n";
  out << "model " << (rec.model == DetectionModel::Ideal3 ? "ideal3" : "sd2")
      << "\n";
  const auto& labels = tomography_basis_labels();
  for (int b = 0; b < 9; ++b) {
    out << labels[b];
    for (int o = 0; o < outcome_count(rec.model); ++o) {
      out << ' ' << rec.counts[b][o];
    }
    out << "\n";
  }
  return out.str();
}

TomographyRecord record_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line, word;
  // Leading '#' lines (e.g. a config echo prepended by a writer) are skipped.
  do {
    if (!std::getline(in, line)) {
      throw Error(ErrorCode::InvalidArgument, "bad tomography record header");
    }
  } while (!line.empty() && line[0] == '#');
  if (line != "qme-tomo v1") {
    throw Error(ErrorCode::InvalidArgument, "bad tomography record header");
  }
  TomographyRecord rec;
  std::string model;
  if (!(in >> word >> rec.shots_per_basis) || word != "shots" ||
      !(in >> word >> rec.seed) || word != "seed" || !(in >> word >> model) ||
      word != "model") {
    throw Error(ErrorCode::InvalidArgument, "bad tomography record fields");
  }
  if (model == "ideal3") {
    rec.model = DetectionModel::Ideal3;
  } else if (model == "sd2") {
    rec.model = DetectionModel::SD2;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown detection model");
  }
  const auto& labels = tomography_basis_labels();
  for (int b = 0; b < 9; ++b) {
    if (!(in >> word) || word != labels[b]) {
      throw Error(ErrorCode::InvalidArgument,
                  "tomography record bases out of order");
    }
    for (int o = 0; o < outcome_count(rec.model); ++o) {
      if (!(in >> rec.counts[b][o])) {
        throw Error(ErrorCode::InvalidArgument, "missing counts");
      }
    }
  }
  return rec;
}

}  // namespace qme
