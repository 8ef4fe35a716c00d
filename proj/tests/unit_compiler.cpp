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

#include <cmath>
#include <numbers>

#include "qme/compiler.hpp"
#include "qme/dynamics.hpp"
#include "qme/mpemba.hpp"
#include "test_util.hpp"

using namespace qme;
constexpr double kPi = std::numbers::pi;

namespace {

PureState ket(int i) {
  Vector3 v = Vector3::Zero();
  v(i) = 1.0;
  return v;
}

double overlap_deficit(const Vector3& a, const Vector3& b) {
  // 0 iff the unit vectors agree up to a global phase (|<a|b>| = 1).
  return std::abs(1.0 - std::abs(a.dot(b)));
}

}  // namespace

TEST_CASE("rotation matrices: identity at theta 0, unitarity, block shape") {
  CHECK((rotation_matrix({RotationGate::Subspace::R01, 0.0, 0.3}) -
         Matrix3::Identity())
            .cwiseAbs()
            .maxCoeff() < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int k = 0; k < 50; ++k) {
    const RotationGate g{k % 2 == 0 ? RotationGate::Subspace::R01
                                    : RotationGate::Subspace::R02,
                         u(rng) + kPi, u(rng)};
    const Matrix3 m = rotation_matrix(g);
    CHECK((m.adjoint() * m - Matrix3::Identity()).cwiseAbs().maxCoeff() <
          1e-14);
    const int spectator = g.subspace == RotationGate::Subspace::R01 ? 2 : 1;
    CHECK(std::abs(m(spectator, spectator) - Complex(1.0, 0.0)) < 1e-15);
  }
}

TEST_CASE("factorization: examples") {
  // Target |0>: both factors act as the identity on |0>.
  auto [a0, b0] = ab_factorize(ket(0));
  CHECK(((a0 * b0).col(0) - ket(0)).cwiseAbs().maxCoeff() < 1e-12);

  // c = 0 branch: B is the identity factor, A carries gamma = pi/2.
  PureState t(std::sqrt(0.5) * (ket(0) + ket(1)));
  auto [a1, b1] = ab_factorize(t);
  CHECK((b1 - Matrix3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  const PhaseLedger ledger = rotation_params(a1, b1);
  CHECK(ledger.gamma == doctest::Approx(kPi / 2).epsilon(1e-12));
  CHECK(((a1 * b1).col(0) - t).cwiseAbs().maxCoeff() < 1e-12);

  // a = b = 0 branch: A is the identity factor.
  auto [a2, b2] = ab_factorize(ket(2));
  CHECK((a2 - Matrix3::Identity()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(((a2 * b2).col(0) - ket(2)).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(ab_factorize(Vector3(0.5, 0.5, 0.5)), Error);
}

TEST_CASE("factorization reaches every random target") {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 500; ++k) {
    const PureState t = test::random_pure(rng);
    auto [a, b] = ab_factorize(t);
    CHECK((a.adjoint() * a - Matrix3::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK((b.adjoint() * b - Matrix3::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    CHECK(((a * b).col(0) - t).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("phase extraction recomposes the factors exactly") {
  auto z01 = [](double x) {
    Matrix3 m = Matrix3::Identity();
    m(0, 0) = std::exp(Complex(0, -x));
    m(1, 1) = std::exp(Complex(0, x));
    return m;
  };
  auto z02 = [](double x) {
    Matrix3 m = Matrix3::Identity();
    m(0, 0) = std::exp(Complex(0, -x));
    m(2, 2) = std::exp(Complex(0, x));
    return m;
  };
  auto p01 = [](double x) {
    Matrix3 m = Matrix3::Identity();
    m(0, 0) = m(1, 1) = std::exp(Complex(0, x));
    return m;
  };
  auto p02 = [](double x) {
    Matrix3 m = Matrix3::Identity();
    m(0, 0) = m(2, 2) = std::exp(Complex(0, x));
    return m;
  };

  std::mt19937_64 rng(7);
  double worst_a = 0, worst_b = 0;
  for (int k = 0; k < 1000; ++k) {
    const PureState t = test::random_pure(rng);
    auto [a, b] = ab_factorize(t);
    const PhaseLedger l = rotation_params(a, b);

    const Matrix3 a_re =
        p01(l.alpha) * z01(l.beta + l.delta) *
        rotation_matrix(
            {RotationGate::Subspace::R01, l.gamma, kPi / 2 - 2 * l.delta});
    const Matrix3 b_re =
        p02(l.alpha_p) * z02(l.beta_p + l.delta_p) *
        rotation_matrix({RotationGate::Subspace::R02, l.gamma_p,
                         kPi / 2 - 2 * l.delta_p});
    worst_a = std::max(worst_a, (a_re - a).cwiseAbs().maxCoeff());
    worst_b = std::max(worst_b, (b_re - b).cwiseAbs().maxCoeff());
  }
  CHECK(worst_a < 1e-12);
  CHECK(worst_b < 1e-12);

  // Identity factors give all-zero angles.
  const PhaseLedger id =
      rotation_params(Matrix3::Identity(), Matrix3::Identity());
  CHECK(id.gamma == 0.0);
  CHECK(id.alpha == 0.0);
  CHECK(id.beta == 0.0);
  CHECK(id.delta == 0.0);

  CHECK_THROWS_AS(rotation_params(2 * Matrix3::Identity(),
                                  Matrix3::Identity()),
                  Error);
}

TEST_CASE("compilation: degenerate targets") {
  // Target |0>: both rotations collapse to zero angle; the sequence fixes
  // |0> exactly (the deferred gate only rephases the unpopulated levels).
  auto seq0 = compile_state_prep(ket(0));
  CHECK(seq0.gates[0].theta == 0.0);
  CHECK(seq0.gates[1].theta == 0.0);
  CHECK((compose(seq0).col(0) - ket(0)).cwiseAbs().maxCoeff() < 1e-12);

  // A sequence with no rotations and no deferred phases is the identity.
  GateSequence empty;
  empty.gates[0] = {RotationGate::Subspace::R01, 0.0, 0.0};
  empty.gates[1] = {RotationGate::Subspace::R02, 0.0, 0.0};
  CHECK((compose(empty) - Matrix3::Identity()).cwiseAbs().maxCoeff() <
        1e-15);

  // (0,0,1): a single half-turn on the 0-2 transition.
  auto seq2 = compile_state_prep(ket(2));
  CHECK(seq2.gates[0].theta == 0.0);
  CHECK(seq2.gates[1].theta == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(overlap_deficit(compose(seq2).col(0), ket(2)) < 1e-12);
}

TEST_CASE("round trip over random targets") {
  std::mt19937_64 rng(11);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const PureState t = test::random_pure(rng);
    const GateSequence seq = compile_state_prep(t);
    const Matrix3 u = compose(seq);
    CHECK((u.adjoint() * u - Matrix3::Identity()).cwiseAbs().maxCoeff() <
          1e-12);
    worst = std::max(worst, overlap_deficit(u.col(0), t));
    // Exactly two physical rotations, one per transition.
    CHECK(seq.gates[0].subspace == RotationGate::Subspace::R01);
    CHECK(seq.gates[1].subspace == RotationGate::Subspace::R02);
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("compose equals the factor product including deferred phases") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 100; ++k) {
    const PureState t = test::random_pure(rng);
    auto [a, b] = ab_factorize(t);
    const GateSequence seq = compile_state_prep(t);
    CHECK((compose(seq) - a * b).cwiseAbs().maxCoeff() < 1e-12);
    // The deferred gate undoes to the exact target, not only up to phase.
    CHECK((compose(seq).col(0) - t).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("frame map: zero ledger leaves the couplings untouched") {
  const ModelParams p = test::reference_params();
  const ModelParams q = frame_map(p, PhaseLedger{});
  CHECK(q.phi == p.phi);
  CHECK(q.phi_prime == p.phi_prime);
  CHECK(q.omega2_ratio == p.omega2_ratio);
}

TEST_CASE("frame equivalence: prepared-frame evolution undoes to the ideal "
          "one") {
  const ModelParams p = test::reference_params();
  auto dec = eigendecompose(build_liouvillian(p));
  auto sme = sme_state(dec);

  auto frame_residual = [&](const PureState& target, const ModelParams& pp) {
    const GateSequence seq = compile_state_prep(target);
    const Matrix3 v = deferred_phase_gate(seq.ledger);
    const PureState prepared =
        (rotation_matrix(seq.gates[0]) * rotation_matrix(seq.gates[1]))
            .col(0);
    const ModelParams mapped = frame_map(pp, seq.ledger);

    auto grid = make_time_grid(0.05, 30.0, 50, true);
    auto ideal = evolve_ode(pp, pure_to_density(PureState(
                                    (v * prepared).normalized())),
                            grid);
    auto physical = evolve_ode(mapped, pure_to_density(prepared), grid);
    double worst = 0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const Matrix3 undone =
          v * physical.states[k] * v.adjoint();
      worst = std::max(worst, distance_eq4(undone, ideal.states[k]));
    }
    return worst;
  };

  CHECK(frame_residual(sme.state, p) < 1e-8);

  std::mt19937_64 rng(17);
  for (int k = 0; k < 20; ++k) {
    const ModelParams pp = test::random_params(rng);
    for (int j = 0; j < 5; ++j) {
      CHECK(frame_residual(test::random_pure(rng), pp) < 1e-8);
    }
  }
}

TEST_CASE("tomography rotations map each basis state onto |0>") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 20; ++k) {
    const DensityMatrix rho = test::random_density(rng);
    for (int b = 0; b < 9; ++b) {
      Matrix3 w = Matrix3::Identity();
      for (const RotationGate& pulse : tomography_rotation(b, nullptr)) {
        w = rotation_matrix(pulse) * w;
      }
      const PureState& bs = tomography_bases()[b];
      const double born = (bs.adjoint() * rho * bs)(0).real();
      const double rotated = (w * rho * w.adjoint())(0, 0).real();
      CHECK(std::abs(born - rotated) < 1e-10);
    }
  }
  CHECK(tomography_rotation(0, nullptr).empty());
  CHECK(tomography_rotation(3, nullptr).size() == 1);
  CHECK(tomography_rotation(7, nullptr).size() == 2);
  CHECK_THROWS_AS(tomography_rotation(9, nullptr), Error);
}

TEST_CASE("ledger-shifted tomography probes the physically prepared frame") {
  const ModelParams p = test::reference_params();
  auto dec = eigendecompose(build_liouvillian(p));
  auto sme = sme_state(dec);
  const GateSequence seq = compile_state_prep(sme.state);
  const Matrix3 v = deferred_phase_gate(seq.ledger);

  std::mt19937_64 rng(23);
  for (int k = 0; k < 10; ++k) {
    const DensityMatrix rho = test::random_density(rng);
    const Matrix3 rho_frame = v.adjoint() * rho * v;
    for (int b = 0; b < 9; ++b) {
      Matrix3 w = Matrix3::Identity();
      for (const RotationGate& pulse : tomography_rotation(b, &seq.ledger)) {
        w = rotation_matrix(pulse) * w;
      }
      const PureState& bs = tomography_bases()[b];
      const double born = (bs.adjoint() * rho * bs)(0).real();
      const double rotated = (w * rho_frame * w.adjoint())(0, 0).real();
      CHECK(std::abs(born - rotated) < 1e-10);
    }
  }
}

TEST_CASE("gate sequence text record") {
  const ModelParams p = test::reference_params();
  auto dec = eigendecompose(build_liouvillian(p));
  auto sme = sme_state(dec);
  const GateSequence seq = compile_state_prep(sme.state);

  const std::string text = gate_sequence_to_text(seq);
  CHECK(text.rfind("qme-gates v1\n", 0) == 0);
  CHECK(text.find("gate R01 theta ") != std::string::npos);
  CHECK(text.find("phi_l2 ") != std::string::npos);

  const GateSequence back = gate_sequence_from_text(text);
  CHECK(gate_sequence_to_text(back) == text);
  CHECK(back.gates[0].theta ==
        doctest::Approx(seq.gates[0].theta).epsilon(1e-11));
  CHECK(back.ledger.phi_l1 ==
        doctest::Approx(seq.ledger.phi_l1).epsilon(1e-11));

  CHECK_THROWS_AS(gate_sequence_from_text("bogus"), Error);
}
