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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "qme/mpemba.hpp"
#include "qme/spectral.hpp"
#include "qme/tomography.hpp"
#include "test_util.hpp"

using namespace qme;
using test::basis_projector;

TEST_CASE("povm elements resolve the identity per basis") {
  for (int model = 0; model < 2; ++model) {
    const DetectionModel m =
        model == 0 ? DetectionModel::Ideal3 : DetectionModel::SD2;
    for (int b = 0; b < 9; ++b) {
      Matrix3 sum = Matrix3::Zero();
      for (int o = 0; o < outcome_count(m); ++o) {
        const Matrix3 e = povm_element(b, o, m);
        Eigen::SelfAdjointEigenSolver<Matrix3> es(e);
        CHECK(es.eigenvalues().minCoeff() > -1e-12);
        sum += e;
      }
      CHECK((sum - Matrix3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  CHECK_THROWS_AS(povm_element(9, 0, DetectionModel::Ideal3), Error);
  CHECK_THROWS_AS(povm_element(0, 2, DetectionModel::SD2), Error);
}

TEST_CASE("deterministic outcome for an eigenstate of the first basis") {
  auto rec = simulate_measurements(basis_projector(0), 777, 42);
  CHECK(rec.counts[0][0] == 777);
  CHECK(rec.counts[0][1] == 0);
  CHECK(rec.counts[0][2] == 0);
}

TEST_CASE("maximally mixed state spreads evenly within binomial bounds") {
  const std::int64_t shots = 10000;
  auto rec = simulate_measurements(Matrix3::Identity() / 3.0, shots, 4242);
  const double sigma = std::sqrt((1.0 / 3) * (2.0 / 3) * shots);
  for (int b = 0; b < 9; ++b) {
    for (int o = 0; o < 3; ++o) {
      CHECK(std::abs(rec.counts[b][o] - shots / 3.0) < 5.0 * sigma);
    }
  }
}

TEST_CASE("empirical frequencies approach the Born probabilities") {
  auto dec = eigendecompose(build_liouvillian(test::reference_params()));
  auto sme = sme_state(dec);
  const DensityMatrix rho = pure_to_density(sme.state);
  const std::int64_t shots = 100000;
  auto rec = simulate_measurements(rho, shots, 31);
  for (int b = 0; b < 9; ++b) {
    const auto p = outcome_probabilities(rho, b, DetectionModel::Ideal3);
    for (int o = 0; o < 3; ++o) {
      const double f = static_cast<double>(rec.counts[b][o]) / shots;
      CHECK(std::abs(f - p[o]) < 5.0 / std::sqrt(static_cast<double>(shots)));
    }
  }
}

TEST_CASE("same seed, same counts; different seed, different counts") {
  std::mt19937_64 rng(9);
  const DensityMatrix rho = test::random_density(rng);
  auto a = simulate_measurements(rho, 5000, 123);
  auto b = simulate_measurements(rho, 5000, 123);
  auto c = simulate_measurements(rho, 5000, 124);
  CHECK(a.counts == b.counts);
  CHECK(a.counts != c.counts);
}

TEST_CASE("record text round trip is bit exact") {
  std::mt19937_64 rng(11);
  for (int model = 0; model < 2; ++model) {
    auto rec = simulate_measurements(
        test::random_density(rng), 2500, 9000 + model,
        model == 0 ? DetectionModel::Ideal3 : DetectionModel::SD2);
    const std::string text = record_to_text(rec);
    const TomographyRecord back = record_from_text(text);
    CHECK(record_to_text(back) == text);
    CHECK(back.counts == rec.counts);
    CHECK(back.shots_per_basis == rec.shots_per_basis);
    CHECK(back.seed == rec.seed);
  }
  CHECK_THROWS_AS(record_from_text("nonsense"), Error);

  // Leading comment lines (config echoes) do not disturb parsing.
  auto rec = simulate_measurements(basis_projector(0), 100, 1);
  const TomographyRecord back =
      record_from_text("# some comment\n# another\n" + record_to_text(rec));
  CHECK(back.counts == rec.counts);
}

TEST_CASE("mle recovers the truth from exact probabilities") {
  std::mt19937_64 rng(13);
  MleOptions opts;
  opts.tol = 1e-12;
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix truth = test::random_density(rng);
    std::array<std::array<double, 3>, 9> probs{};
    for (int b = 0; b < 9; ++b) {
      probs[b] = outcome_probabilities(truth, b, DetectionModel::Ideal3);
    }
    auto res = mle_reconstruct_probabilities(probs, DetectionModel::Ideal3,
                                             opts);
    CHECK(res.converged);
    CHECK(res.monotone);
    CHECK(distance_eq4(res.rho, truth) < 1e-8);
  }
  // The two-outcome detection model is informationally complete as well.
  const DensityMatrix truth = test::random_density(rng);
  std::array<std::array<double, 3>, 9> probs{};
  for (int b = 0; b < 9; ++b) {
    probs[b] = outcome_probabilities(truth, b, DetectionModel::SD2);
  }
  auto res = mle_reconstruct_probabilities(probs, DetectionModel::SD2, opts);
  CHECK(distance_eq4(res.rho, truth) < 1e-8);
}

TEST_CASE("mle output is always a density matrix, also for rank-1 truth") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 5; ++k) {
    const DensityMatrix truth = pure_to_density(test::random_pure(rng));
    auto rec = simulate_measurements(truth, 3000, 500 + k);
    auto res = mle_reconstruct(rec);
    CHECK_NOTHROW(check_density_matrix(res.rho));
    Eigen::SelfAdjointEigenSolver<Matrix3> es(res.rho);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    CHECK(res.monotone);
  }
}

TEST_CASE("mle rejects incomplete or inconsistent records") {
  TomographyRecord rec;
  rec.shots_per_basis = 100;
  for (int b = 0; b < 9; ++b) rec.counts[b] = {100, 0, 0};
  rec.counts[4] = {0, 0, 0};  // basis without data
  CHECK_THROWS_WITH_AS(mle_reconstruct(rec), doctest::Contains("sum"), Error);

  rec.counts[4] = {100, 0, 0};
  rec.counts[2] = {60, 30, 0};  // does not sum to shots
  CHECK_THROWS_AS(mle_reconstruct(rec), Error);
}

TEST_CASE("mle flags non-convergence at a tiny iteration budget") {
  std::mt19937_64 rng(19);
  auto rec = simulate_measurements(test::random_density(rng), 2000, 77);
  MleOptions opts;
  opts.max_iterations = 3;
  auto res = mle_reconstruct(rec, opts);
  CHECK(!res.converged);
  CHECK(res.iterations > 3);
  CHECK_NOTHROW(check_density_matrix(res.rho));
}

TEST_CASE("reconstruction is equivariant under basis relabeling") {
  // Reordering the (basis, counts) pairs changes nothing: feed the MLE the
  // same data through a permuted record by swapping two bases' POVMs via
  // their counts.
  std::mt19937_64 rng(23);
  const DensityMatrix truth = test::random_density(rng);
  auto rec = simulate_measurements(truth, 5000, 555);
  auto res1 = mle_reconstruct(rec);

  // The likelihood is a sum over bases, so any permutation of the rows
  // together with their POVMs is the identity transform; verify through
  // the probability-level interface.
  std::array<std::array<double, 3>, 9> weights{};
  for (int b = 0; b < 9; ++b) {
    for (int o = 0; o < 3; ++o) {
      weights[b][o] = static_cast<double>(rec.counts[b][o]);
    }
  }
  auto res2 =
      mle_reconstruct_probabilities(weights, DetectionModel::Ideal3);
  CHECK(distance_eq4(res1.rho, res2.rho) < 1e-9);
}

TEST_CASE("bootstrap: zero-variance record has zero spread") {
  TomographyRecord rec;
  rec.shots_per_basis = 400;
  for (int b = 0; b < 9; ++b) rec.counts[b] = {400, 0, 0};
  auto bs = monte_carlo_errors(
      rec, 100, [](const DensityMatrix& r) { return r(0, 0).real(); }, 5);
  CHECK(bs.std_dev < 1e-12);

  CHECK_THROWS_AS(
      monte_carlo_errors(
          rec, 50, [](const DensityMatrix& r) { return r(0, 0).real(); }, 5),
      Error);
}

TEST_CASE("bootstrap spread shrinks like one over sqrt(shots)") {
  std::mt19937_64 rng(29);
  const DensityMatrix truth = pure_to_density(test::random_pure(rng));
  std::vector<double> log_shots, log_std;
  for (const std::int64_t shots : {1000LL, 10000LL, 100000LL}) {
    auto rec = simulate_measurements(truth, shots, 808);
    auto bs = monte_carlo_errors(
        rec, 100, [](const DensityMatrix& r) { return r(0, 0).real(); },
        1234);
    log_shots.push_back(std::log10(static_cast<double>(shots)));
    log_std.push_back(std::log10(bs.std_dev));
  }
  // Least-squares slope over the three decades.
  const double mx = (log_shots[0] + log_shots[1] + log_shots[2]) / 3.0;
  const double my = (log_std[0] + log_std[1] + log_std[2]) / 3.0;
  double num = 0, den = 0;
  for (int i = 0; i < 3; ++i) {
    num += (log_shots[i] - mx) * (log_std[i] - my);
    den += (log_shots[i] - mx) * (log_shots[i] - mx);
  }
  const double slope = num / den;
  CHECK(slope > -0.6);
  CHECK(slope < -0.4);
}

TEST_CASE("bootstrap is deterministic for a fixed seed") {
  std::mt19937_64 rng(31);
  auto rec = simulate_measurements(test::random_density(rng), 2000, 99);
  auto stat = [](const DensityMatrix& r) { return r(1, 1).real(); };
  auto a = monte_carlo_errors(rec, 100, stat, 2024);
  auto b = monte_carlo_errors(rec, 100, stat, 2024);
  CHECK(a.mean == b.mean);
  CHECK(a.std_dev == b.std_dev);
}
