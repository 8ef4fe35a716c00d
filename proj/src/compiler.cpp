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

#include "qme/compiler.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace qme {

namespace {

const Complex kI(0.0, 1.0);
constexpr double kPi = std::numbers::pi;
constexpr double kDegenerateTol = 1e-14;

// Indices of the two-level block a subspace acts on.
std::pair<int, int> block_of(RotationGate::Subspace s) {
  return s == RotationGate::Subspace::R01 ? std::pair{0, 1} : std::pair{0, 2};
}

}  // namespace

Matrix3 rotation_matrix(const RotationGate& gate) {
  const auto [i, j] = block_of(gate.subspace);
  const double c = std::cos(0.5 * gate.theta);
  const double s = std::sin(0.5 * gate.theta);
  Matrix3 m = Matrix3::Identity();
  m(i, i) = c;
  m(j, j) = c;
  m(i, j) = -kI * std::exp(-kI * gate.phase) * s;
  m(j, i) = -kI * std::exp(kI * gate.phase) * s;
  return m;
}

Matrix3 deferred_phase_gate(const PhaseLedger& ledger) {
  const double b = ledger.beta + ledger.delta;
  const double bp = ledger.beta_p + ledger.delta_p;
  Matrix3 v = Matrix3::Zero();
  v(0, 0) = std::exp(kI * (ledger.alpha + ledger.alpha_p - b - bp));
  v(1, 1) = std::exp(kI * (ledger.alpha + b));
  v(2, 2) = std::exp(kI * (ledger.alpha_p + bp));
  return v;
}

std::pair<Matrix3, Matrix3> ab_factorize(const PureState& target) {
  check_pure_state(target);
  const Complex a = target(0), b = target(1), c = target(2);
  const double ap = std::sqrt(std::norm(a) + std::norm(b));

  Matrix3 ma = Matrix3::Identity();
  if (ap > kDegenerateTol) {
    ma(0, 0) = a / ap;
    ma(0, 1) = std::conj(b) / ap;
    ma(1, 0) = b / ap;
    ma(1, 1) = -std::conj(a) / ap;
  }

  Matrix3 mb = Matrix3::Identity();
  if (std::abs(c) > kDegenerateTol) {
    mb(0, 0) = ap;
    mb(0, 2) = std::conj(c);
    mb(2, 0) = c;
    mb(2, 2) = -ap;  // a' is real, so -a'* = -a'
  }
  return {ma, mb};
}

namespace {

// Extracts (gamma, alpha, beta, delta) of one two-level factor
//   P(alpha) Z(beta) R(gamma, pi/2) Z(delta)
// from the block entries m00 = e^{i(alpha-beta-delta)} cos(gamma/2),
// m10 = e^{i(alpha+beta-delta)} sin(gamma/2), m11 = e^{i(alpha+beta+delta)}
// cos(gamma/2). arg(0) = 0 keeps degenerate corners deterministic.
struct FactorParams {
  double gamma, alpha, beta, delta, clamp;
};

FactorParams extract(const Complex& m00, const Complex& m10,
                     const Complex& m11) {
  FactorParams f{};
  const double mag = std::abs(m00);
  f.clamp = std::max(0.0, mag - 1.0);
  f.gamma = 2.0 * std::acos(std::min(mag, 1.0));
  f.alpha = 0.5 * (std::arg(m00) + std::arg(m11));
  f.beta = 0.5 * (std::arg(m10) - std::arg(m00));
  f.delta = -f.alpha + std::arg(m11) - f.beta;
  return f;
}

}  // namespace

PhaseLedger rotation_params(const Matrix3& a, const Matrix3& b) {
  for (const Matrix3* m : {&a, &b}) {
    if ((m->adjoint() * (*m) - Matrix3::Identity()).cwiseAbs().maxCoeff() >
        1e-10) {
      throw Error(ErrorCode::InvalidArgument, "factor is not unitary");
    }
  }

  const FactorParams fa = extract(a(0, 0), a(1, 0), a(1, 1));
  const FactorParams fb = extract(b(0, 0), b(2, 0), b(2, 2));

  PhaseLedger ledger;
  ledger.gamma = fa.gamma;
  ledger.alpha = fa.alpha;
  ledger.beta = fa.beta;
  ledger.delta = fa.delta;
  ledger.gamma_p = fb.gamma;
  ledger.alpha_p = fb.alpha;
  ledger.beta_p = fb.beta;
  ledger.delta_p = fb.delta;
  ledger.clamp_epsilon = std::max(fa.clamp, fb.clamp);

  ledger.phi = ledger.alpha_p - (ledger.beta_p + ledger.delta_p) + 0.5 * kPi -
               2.0 * ledger.delta;
  ledger.phi_prime = 0.5 * kPi - 2.0 * ledger.delta_p;
  ledger.phi_l1 = ledger.alpha_p - 2.0 * (ledger.beta + ledger.delta) -
                  (ledger.beta_p + ledger.delta_p);
  ledger.phi_l2 = ledger.alpha - 2.0 * (ledger.beta_p + ledger.delta_p) -
                  (ledger.beta + ledger.delta);
  return ledger;
}

GateSequence compile_state_prep(const PureState& target) {
  const auto [a, b] = ab_factorize(target);
  GateSequence seq;
  seq.ledger = rotation_params(a, b);
  seq.gates[0] = {RotationGate::Subspace::R01, seq.ledger.gamma,
                  seq.ledger.phi};
  seq.gates[1] = {RotationGate::Subspace::R02, seq.ledger.gamma_p,
                  seq.ledger.phi_prime};
  seq.target = target;
  return seq;
}

Matrix3 compose(const GateSequence& seq) {
  return deferred_phase_gate(seq.ledger) * rotation_matrix(seq.gates[0]) *
         rotation_matrix(seq.gates[1]);
}

ModelParams frame_map(const ModelParams& p, const PhaseLedger& ledger) {
  validate_params(p);
  // Conjugating the generator by the deferred V shifts the raising amplitude
  // on 0<->j by arg v_0 - arg v_j, which is exactly phi_l1 / phi_l2.
  ModelParams out = p;
  out.phi = p.phi + ledger.phi_l1;
  out.phi_prime = p.phi_prime + ledger.phi_l2;
  return out;
}

const std::array<PureState, 9>& tomography_bases() {
  static const std::array<PureState, 9> bases = [] {
    std::array<PureState, 9> b;
    const double r = 1.0 / std::sqrt(2.0);
    auto ket = [](int i) {
      Vector3 v = Vector3::Zero();
      v(i) = 1.0;
      return v;
    };
    b[0] = ket(0);
    b[1] = ket(1);
    b[2] = ket(2);
    b[3] = r * (ket(0) + ket(1));
    b[4] = r * (ket(0) + kI * ket(1));
    b[5] = r * (ket(0) + ket(2));
    b[6] = r * (ket(0) + kI * ket(2));
    b[7] = r * (ket(1) + ket(2));
    b[8] = r * (ket(1) + kI * ket(2));
    return b;
  }();
  return bases;
}

const std::array<std::string, 9>& tomography_basis_labels() {
  static const std::array<std::string, 9> labels = {
      "0", "1", "2", "0+1", "0+i1", "0+2", "0+i2", "1+2", "1+i2"};
  return labels;
}

std::vector<RotationGate> tomography_rotation(int basis_index,
                                              const PhaseLedger* ledger) {
  if (basis_index < 0 || basis_index > 8) {
    throw Error(ErrorCode::InvalidArgument, "basis index out of range 0..8");
  }
  const double s1 = ledger != nullptr ? ledger->phi_l1 : 0.0;
  const double s2 = ledger != nullptr ? ledger->phi_l2 : 0.0;
  using S = RotationGate::Subspace;
  const double half = 0.5 * kPi;
  switch (basis_index) {
    case 0:
      return {};
    case 1:
      return {{S::R01, kPi, s1}};
    case 2:
      return {{S::R02, kPi, s2}};
    case 3:
      return {{S::R01, half, -half + s1}};
    case 4:
      return {{S::R01, half, s1}};
    case 5:
      return {{S::R02, half, -half + s2}};
    case 6:
      return {{S::R02, half, s2}};
    case 7:  // pi pulse moves |1> onto |0>, then a 0-2 half pulse
      return {{S::R01, kPi, s1}, {S::R02, half, s2}};
    case 8:
      return {{S::R01, kPi, s1}, {S::R02, half, half + s2}};
    default:
      return {};
  }
}

std::string gate_sequence_to_text(const GateSequence& seq) {
  std::ostringstream out;
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
  };
  out << "qme-gates v1\n";
  for (const RotationGate& g : seq.gates) {
    out << "gate "
        << (g.subspace == RotationGate::Subspace::R01 ? "R01" : "R02")
        << " theta " << num(g.theta) << " phase " << num(g.phase) << "\n";
  }
  out << "ledger alpha " << num(seq.ledger.alpha) << " beta "
      << num(seq.ledger.beta) << " gamma " << num(seq.ledger.gamma)
      << " delta " << num(seq.ledger.delta) << " alpha_p "
      << num(seq.ledger.alpha_p) << " beta_p " << num(seq.ledger.beta_p)
      << " gamma_p " << num(seq.ledger.gamma_p) << " delta_p "
      << num(seq.ledger.delta_p) << " phi " << num(seq.ledger.phi)
      << " phi_prime " << num(seq.ledger.phi_prime) << " phi_l1 "
      << num(seq.ledger.phi_l1) << " phi_l2 " << num(seq.ledger.phi_l2)
      << "\n";
  out << "target";
  for (int i = 0; i < 3; ++i) {
    out << ' ' << num(seq.target(i).real()) << ' ' << num(seq.target(i).imag());
  }
  out << "\n";
  return out.str();
}

GateSequence gate_sequence_from_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "qme-gates v1") {
    throw Error(ErrorCode::InvalidArgument, "bad gate record header");
  }
  GateSequence seq;
  for (int g = 0; g < 2; ++g) {
    std::string tag, subspace, key1, key2;
    double theta, phase;
    if (!(in >> tag >> subspace >> key1 >> theta >> key2 >> phase) ||
        tag != "gate" || key1 != "theta" || key2 != "phase") {
      throw Error(ErrorCode::InvalidArgument, "bad gate line");
    }
    seq.gates[g].subspace = subspace == "R01" ? RotationGate::Subspace::R01
                                              : RotationGate::Subspace::R02;
    seq.gates[g].theta = theta;
    seq.gates[g].phase = phase;
  }
  std::string tag;
  if (!(in >> tag) || tag != "ledger") {
    throw Error(ErrorCode::InvalidArgument, "bad ledger line");
  }
  auto field = [&](const char* name, double& v) {
    std::string key;
    if (!(in >> key >> v) || key != name) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("bad ledger field, expected ") + name);
    }
  };
  field("alpha", seq.ledger.alpha);
  field("beta", seq.ledger.beta);
  field("gamma", seq.ledger.gamma);
  field("delta", seq.ledger.delta);
  field("alpha_p", seq.ledger.alpha_p);
  field("beta_p", seq.ledger.beta_p);
  field("gamma_p", seq.ledger.gamma_p);
  field("delta_p", seq.ledger.delta_p);
  field("phi", seq.ledger.phi);
  field("phi_prime", seq.ledger.phi_prime);
  field("phi_l1", seq.ledger.phi_l1);
  field("phi_l2", seq.ledger.phi_l2);
  if (!(in >> tag) || tag != "target") {
    throw Error(ErrorCode::InvalidArgument, "bad target line");
  }
  for (int i = 0; i < 3; ++i) {
    double re, im;
    if (!(in >> re >> im)) {
      throw Error(ErrorCode::InvalidArgument, "bad target amplitudes");
    }
    seq.target(i) = Complex(re, im);
  }
  return seq;
}

}  // namespace qme
