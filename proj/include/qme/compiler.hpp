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

#include <string>
#include <vector>

#include "qme/types.hpp"

namespace qme {

// A physical two-level pulse on the 0<->1 or 0<->2 transition:
//   R(theta, phase) = exp[-i theta/2 (e^{-i phase}|0><j| + e^{i phase}|j><0|)].
struct RotationGate {
  enum class Subspace { R01, R02 };
  Subspace subspace = Subspace::R01;
  double theta = 0.0;  // rotation angle (rad)
  double phase = 0.0;  // axis phase (rad)
};

Matrix3 rotation_matrix(const RotationGate& gate);

// Parameters of the commuted phase gates. An arbitrary preparation factors
// as U = V R01(gamma, phi) R02(gamma_p, phi_prime) with V the diagonal
// P01(alpha) P02(alpha_p) Z01(beta+delta) Z02(beta_p+delta_p); only the two
// rotations are executed, V is deferred. phi_l1/phi_l2 are the phase shifts
// every later pulse or drive on the respective transition picks up from
// working in the V-rotated frame.
struct PhaseLedger {
  double alpha = 0.0, beta = 0.0, gamma = 0.0, delta = 0.0;
  double alpha_p = 0.0, beta_p = 0.0, gamma_p = 0.0, delta_p = 0.0;
  double phi = 0.0;        // = alpha_p - (beta_p + delta_p) + pi/2 - 2 delta
  double phi_prime = 0.0;  // = pi/2 - 2 delta_p
  double phi_l1 = 0.0;     // = alpha_p - 2 (beta + delta) - (beta_p + delta_p)
  double phi_l2 = 0.0;     // = alpha - 2 (beta_p + delta_p) - (beta + delta)
  double clamp_epsilon = 0.0;  // largest |value|-1 clamped inside acos
};

// The deferred diagonal phase gate V.
Matrix3 deferred_phase_gate(const PhaseLedger& ledger);

struct GateSequence {
  // Matrix product order U' = gates[0] * gates[1]; gates[1] acts on |0> first.
  std::array<RotationGate, 2> gates;
  PhaseLedger ledger;
  PureState target;
};

// Two-level factors A (on 0-1) and B (on 0-2) with A B |0> = target.
// Degenerate branches: |a|^2+|b|^2 = 0 sets A = I; c = 0 sets B = I.
std::pair<Matrix3, Matrix3> ab_factorize(const PureState& target);

// Extracts the commuted phase-gate parameters so that
//   A = P01(alpha) Z01(beta+delta) R01(gamma, pi/2 - 2 delta)
//   B = P02(alpha_p) Z02(beta_p+delta_p) R02(gamma_p, pi/2 - 2 delta_p)
// reproduce the factors exactly. The rotation angles come from the moduli of
// the corner entries (gamma = 2 acos |A_00|), arg() uses the principal value.
PhaseLedger rotation_params(const Matrix3& a, const Matrix3& b);

// Exactly two physical rotations preparing the target from |0> up to the
// deferred phase gate V.
GateSequence compile_state_prep(const PureState& target);

// compose(seq) = V * R01 * R02; equals A * B.
Matrix3 compose(const GateSequence& seq);

// Drive phases a frame-mapped generator must carry so that evolving the
// physically prepared state (the two rotations alone) and undoing V at the
// end reproduces the evolution of U|0> under the original generator.
ModelParams frame_map(const ModelParams& p, const PhaseLedger& ledger);

// The nine measurement bases used for state reconstruction, in order:
// |0>, |1>, |2>, (|0>+|1>)/sqrt2, (|0>+i|1>)/sqrt2, (|0>+|2>)/sqrt2,
// (|0>+i|2>)/sqrt2, (|1>+|2>)/sqrt2, (|1>+i|2>)/sqrt2.
const std::array<PureState, 9>& tomography_bases();
const std::array<std::string, 9>& tomography_basis_labels();

// Pulses mapping the given basis state onto |0> before detection. With a
// ledger the pulse phases carry the phi_l1/phi_l2 frame shifts.
std::vector<RotationGate> tomography_rotation(int basis_index,
                                              const PhaseLedger* ledger);

// Text record of a gate sequence (12 significant digits, fixed field order);
// from_text() round-trips what to_text() wrote.
std::string gate_sequence_to_text(const GateSequence& seq);
GateSequence gate_sequence_from_text(const std::string& text);

}  // namespace qme
