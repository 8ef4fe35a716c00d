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

#include "qme.h"

#include <cstring>
#include <memory>
#include <string>

#include "qme/compiler.hpp"
#include "qme/dynamics.hpp"
#include "qme/model.hpp"
#include "qme/mpemba.hpp"
#include "qme/spectral.hpp"
#include "qme/tomography.hpp"
#include "qme/types.hpp"

struct qme_spectral {
  qme::SpectralDecomposition dec;
};

namespace {

using qme::Complex;
using qme::Matrix3;
using qme::Matrix9;
using qme::Vector3;

int map_error(const qme::Error& e) { return static_cast<int>(e.code()); }

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    fn();
    return QME_OK;
  } catch (const qme::Error& e) {
    return map_error(e);
  } catch (const std::exception&) {
    return QME_ERR_INTERNAL;
  }
}

qme::ModelParams to_cpp(const qme_params& p) {
  qme::ModelParams out;
  out.omega1 = p.omega1;
  out.omega2_ratio = p.omega2_ratio;
  out.kappa1_ratio = p.kappa1_ratio;
  out.kappa2_ratio = p.kappa2_ratio;
  out.phi = p.phi;
  out.phi_prime = p.phi_prime;
  out.convention = p.convention == QME_CONVENTION_FACTOR2
                       ? qme::DissipatorConvention::SuppFactor2
                       : qme::DissipatorConvention::MainText;
  return out;
}

qme_params to_c(const qme::ModelParams& p) {
  qme_params out;
  out.omega1 = p.omega1;
  out.omega2_ratio = p.omega2_ratio;
  out.kappa1_ratio = p.kappa1_ratio;
  out.kappa2_ratio = p.kappa2_ratio;
  out.phi = p.phi;
  out.phi_prime = p.phi_prime;
  out.convention = p.convention == qme::DissipatorConvention::SuppFactor2
                       ? QME_CONVENTION_FACTOR2
                       : QME_CONVENTION_MAIN;
  return out;
}

void pack3(const Matrix3& m, double* out) {
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      out[(c * 3 + r) * 2] = m(r, c).real();
      out[(c * 3 + r) * 2 + 1] = m(r, c).imag();
    }
  }
}

Matrix3 unpack3(const double* in) {
  Matrix3 m;
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      m(r, c) = Complex(in[(c * 3 + r) * 2], in[(c * 3 + r) * 2 + 1]);
    }
  }
  return m;
}

void pack_vec3(const Vector3& v, double* out) {
  for (int i = 0; i < 3; ++i) {
    out[2 * i] = v(i).real();
    out[2 * i + 1] = v(i).imag();
  }
}

Vector3 unpack_vec3(const double* in) {
  Vector3 v;
  for (int i = 0; i < 3; ++i) v(i) = Complex(in[2 * i], in[2 * i + 1]);
  return v;
}

void require(bool ok, const char* what) {
  if (!ok) throw qme::Error(qme::ErrorCode::InvalidArgument, what);
}

qme::RotationGate to_cpp(const qme_gate& g) {
  qme::RotationGate out;
  out.subspace = g.subspace == 1 ? qme::RotationGate::Subspace::R02
                                 : qme::RotationGate::Subspace::R01;
  out.theta = g.theta;
  out.phase = g.phase;
  return out;
}

qme_gate to_c(const qme::RotationGate& g) {
  qme_gate out;
  out.subspace = g.subspace == qme::RotationGate::Subspace::R02 ? 1 : 0;
  out.theta = g.theta;
  out.phase = g.phase;
  return out;
}

qme::PhaseLedger to_cpp(const qme_phase_ledger& l) {
  qme::PhaseLedger out;
  out.alpha = l.alpha;
  out.beta = l.beta;
  out.gamma = l.gamma;
  out.delta = l.delta;
  out.alpha_p = l.alpha_p;
  out.beta_p = l.beta_p;
  out.gamma_p = l.gamma_p;
  out.delta_p = l.delta_p;
  out.phi = l.phi;
  out.phi_prime = l.phi_prime;
  out.phi_l1 = l.phi_l1;
  out.phi_l2 = l.phi_l2;
  return out;
}

qme_phase_ledger to_c(const qme::PhaseLedger& l) {
  qme_phase_ledger out;
  out.alpha = l.alpha;
  out.beta = l.beta;
  out.gamma = l.gamma;
  out.delta = l.delta;
  out.alpha_p = l.alpha_p;
  out.beta_p = l.beta_p;
  out.gamma_p = l.gamma_p;
  out.delta_p = l.delta_p;
  out.phi = l.phi;
  out.phi_prime = l.phi_prime;
  out.phi_l1 = l.phi_l1;
  out.phi_l2 = l.phi_l2;
  return out;
}

qme::DetectionModel to_model(int model) {
  require(model == QME_DETECTION_IDEAL3 || model == QME_DETECTION_SD2,
          "unknown detection model");
  return model == QME_DETECTION_SD2 ? qme::DetectionModel::SD2
                                     : qme::DetectionModel::Ideal3;
}

qme::TomographyRecord make_record(long long shots, int model,
                                  const long long* counts) {
  require(counts != nullptr, "counts is null");
  qme::TomographyRecord rec;
  rec.shots_per_basis = shots;
  rec.model = to_model(model);
  for (int b = 0; b < 9; ++b) {
    for (int o = 0; o < 3; ++o) rec.counts[b][o] = counts[b * 3 + o];
  }
  return rec;
}

void copy_string(const std::string& s, char* buf, size_t size) {
  require(buf != nullptr, "buffer is null");
  require(s.size() + 1 <= size, "buffer too small");
  std::memcpy(buf, s.c_str(), s.size() + 1);
}

}  // namespace

extern "C" {

const char* qme_version(void) { return "qme 1.0.0"; }

const char* qme_strerror(int status) {
  switch (status) {
    case QME_OK:
      return "ok";
    case QME_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case QME_ERR_DEFECTIVE:
      return "decomposition flagged defective (near an exceptional point)";
    case QME_ERR_DEGENERATE_STEADY_STATE:
      return "stationary state not unique";
    case QME_ERR_NOT_CONVERGED:
      return "iteration did not converge";
    case QME_ERR_DOMAIN:
      return "input outside the operation's validity regime";
    default:
      return "internal error";
  }
}

int qme_params_validate(const qme_params* p) {
  return guarded([&] {
    require(p != nullptr, "params is null");
    qme::validate_params(to_cpp(*p));
  });
}

int qme_hamiltonian(const qme_params* p, double h18[]) {
  return guarded([&] {
    require(p != nullptr && h18 != nullptr, "null argument");
    pack3(qme::build_hamiltonian(to_cpp(*p)), h18);
  });
}

int qme_jump_operators(const qme_params* p, double j1_18[], double j2_18[]) {
  return guarded([&] {
    require(p != nullptr && j1_18 != nullptr && j2_18 != nullptr,
            "null argument");
    const auto jumps = qme::build_jump_operators(to_cpp(*p));
    pack3(jumps[0], j1_18);
    pack3(jumps[1], j2_18);
  });
}

int qme_liouvillian_matrix(const qme_params* p, double sup162[]) {
  return guarded([&] {
    require(p != nullptr && sup162 != nullptr, "null argument");
    const Matrix9 m = qme::build_liouvillian(to_cpp(*p)).matrix;
    for (int c = 0; c < 9; ++c) {
      for (int r = 0; r < 9; ++r) {
        sup162[(c * 9 + r) * 2] = m(r, c).real();
        sup162[(c * 9 + r) * 2 + 1] = m(r, c).imag();
      }
    }
  });
}

int qme_liouvillian_apply(const qme_params* p, const double rho18[],
                          double out18[]) {
  return guarded([&] {
    require(p != nullptr && rho18 != nullptr && out18 != nullptr,
            "null argument");
    pack3(qme::apply_liouvillian_direct(to_cpp(*p), unpack3(rho18)), out18);
  });
}

int qme_spectral_new(const qme_params* p, qme_spectral** out) {
  return guarded([&] {
    require(p != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<qme_spectral>();
    handle->dec = qme::eigendecompose(qme::build_liouvillian(to_cpp(*p)));
    *out = handle.release();
  });
}

void qme_spectral_free(qme_spectral* dec) { delete dec; }

int qme_spectral_eigenvalues(const qme_spectral* dec, double re9[],
                             double im9[]) {
  return guarded([&] {
    require(dec != nullptr && re9 != nullptr && im9 != nullptr,
            "null argument");
    for (int i = 0; i < 9; ++i) {
      re9[i] = dec->dec.eigenvalues[i].real();
      im9[i] = dec->dec.eigenvalues[i].imag();
    }
  });
}

int qme_spectral_info(const qme_spectral* dec, double* gap, double* tau1,
                      double* tau2, double* condition, int* defective) {
  return guarded([&] {
    require(dec != nullptr, "null argument");
    if (gap != nullptr) *gap = dec->dec.gap;
    if (tau1 != nullptr) *tau1 = dec->dec.tau1;
    if (tau2 != nullptr) *tau2 = dec->dec.tau2;
    if (condition != nullptr) *condition = dec->dec.condition;
    if (defective != nullptr) *defective = dec->dec.defective ? 1 : 0;
  });
}

int qme_spectral_mode(const qme_spectral* dec, int index, double right18[],
                      double left18[]) {
  return guarded([&] {
    require(dec != nullptr, "null argument");
    require(index >= 0 && index < 9, "mode index out of range");
    if (right18 != nullptr) pack3(dec->dec.right[index], right18);
    if (left18 != nullptr) pack3(dec->dec.left[index], left18);
  });
}

int qme_spectral_stationary(const qme_spectral* dec, double rho18[]) {
  return guarded([&] {
    require(dec != nullptr && rho18 != nullptr, "null argument");
    pack3(qme::stationary_state(dec->dec), rho18);
  });
}

int qme_spectral_overlaps(const qme_spectral* dec, const double rho18[],
                          double c_re9[], double c_im9[]) {
  return guarded([&] {
    require(dec != nullptr && rho18 != nullptr && c_re9 != nullptr &&
                c_im9 != nullptr,
            "null argument");
    const auto c = qme::overlaps(dec->dec, unpack3(rho18));
    for (int i = 0; i < 9; ++i) {
      c_re9[i] = c[i].real();
      c_im9[i] = c[i].imag();
    }
  });
}

int qme_spectral_normalized_overlap(const qme_spectral* dec, int index,
                                    const double rho18[], double* re,
                                    double* im) {
  return guarded([&] {
    require(dec != nullptr && rho18 != nullptr && re != nullptr &&
                im != nullptr,
            "null argument");
    const Complex c =
        qme::normalized_overlap(dec->dec, index, unpack3(rho18));
    *re = c.real();
    *im = c.imag();
  });
}

int qme_spectral_recombine(const qme_spectral* dec, qme_spectral** out,
                           int* pairs) {
  return guarded([&] {
    require(dec != nullptr && out != nullptr, "null argument");
    auto handle = std::make_unique<qme_spectral>();
    handle->dec = qme::hermitian_recombination(dec->dec);
    if (pairs != nullptr) {
      *pairs = static_cast<int>(handle->dec.recombined_pairs.size());
    }
    *out = handle.release();
  });
}

int qme_lep_locate(const qme_params* p, double lo, double hi, double* ratio) {
  return guarded([&] {
    require(p != nullptr && ratio != nullptr, "null argument");
    *ratio = qme::locate_lep(to_cpp(*p), lo, hi);
  });
}

int qme_lep_scan(const qme_params* p, const double* ratios, int n,
                 const double rho_in18[], qme_lep_row* rows) {
  return guarded([&] {
    require(p != nullptr && ratios != nullptr && rho_in18 != nullptr &&
                rows != nullptr && n > 0,
            "null/empty argument");
    const auto table = qme::lep_scan(
        to_cpp(*p), std::vector<double>(ratios, ratios + n), unpack3(rho_in18));
    for (int i = 0; i < n; ++i) {
      rows[i].ratio = table[i].ratio;
      rows[i].lambda1_re = table[i].lambda1.real();
      rows[i].lambda1_im = table[i].lambda1.imag();
      rows[i].lambda2_re = table[i].lambda2.real();
      rows[i].lambda2_im = table[i].lambda2.imag();
      rows[i].c1_re = table[i].c1.real();
      rows[i].c1_im = table[i].c1.imag();
      rows[i].c2_re = table[i].c2.real();
      rows[i].c2_im = table[i].c2.imag();
      rows[i].condition = table[i].condition;
      rows[i].flagged = table[i].flagged ? 1 : 0;
    }
  });
}

int qme_classify_regime(const qme_params* p, int* regime,
                        double* speedup_factor) {
  return guarded([&] {
    require(p != nullptr && regime != nullptr, "null argument");
    const auto report = qme::classify_regime(to_cpp(*p));
    switch (report.regime) {
      case qme::Regime::Strong:
        *regime = QME_REGIME_STRONG;
        break;
      case qme::Regime::SuperStrong:
        *regime = QME_REGIME_SUPER_STRONG;
        break;
      case qme::Regime::WeakOrNone:
        *regime = QME_REGIME_WEAK_OR_NONE;
        break;
    }
    if (speedup_factor != nullptr) *speedup_factor = report.speedup_factor;
  });
}

int qme_sme_construct(const qme_spectral* dec, double state6[],
                      double unitary18[], double* s_angle, double* alpha1,
                      double* alpha2, double phi1_6[], double phi2_6[]) {
  return guarded([&] {
    require(dec != nullptr && state6 != nullptr, "null argument");
    const auto sme = qme::sme_state(dec->dec);
    pack_vec3(sme.state, state6);
    if (unitary18 != nullptr) pack3(sme.unitary, unitary18);
    if (s_angle != nullptr) *s_angle = sme.s;
    if (alpha1 != nullptr) *alpha1 = sme.alpha1;
    if (alpha2 != nullptr) *alpha2 = sme.alpha2;
    if (phi1_6 != nullptr) pack_vec3(sme.phi1, phi1_6);
    if (phi2_6 != nullptr) pack_vec3(sme.phi2, phi2_6);
  });
}

int qme_distance(int kind, const double a18[], const double b18[],
                 double* out) {
  return guarded([&] {
    require(a18 != nullptr && b18 != nullptr && out != nullptr,
            "null argument");
    const Matrix3 a = unpack3(a18), b = unpack3(b18);
    switch (kind) {
      case QME_DISTANCE_TRACE_NORM:
        *out = qme::distance_eq4(a, b);
        break;
      case QME_DISTANCE_FROBENIUS:
        *out = qme::distance_frobenius(a, b);
        break;
      case QME_DISTANCE_BURES:
        *out = qme::distance_bures(a, b);
        break;
      case QME_DISTANCE_TRACE:
        *out = qme::distance_trace(a, b);
        break;
      default:
        require(false, "unknown distance kind");
    }
  });
}

int qme_evolve(const qme_params* p, const qme_spectral* dec, int method,
               const double rho0_18[], const double* times, int n_times,
               double* states) {
  return guarded([&] {
    require(rho0_18 != nullptr && times != nullptr && states != nullptr &&
                n_times > 0,
            "null/empty argument");
    const std::vector<double> grid(times, times + n_times);
    qme::Trajectory traj;
    if (method == QME_EVOLVE_SPECTRAL) {
      require(dec != nullptr, "spectral evolution needs a decomposition");
      traj = qme::evolve_spectral(dec->dec, unpack3(rho0_18), grid);
    } else if (method == QME_EVOLVE_ODE) {
      require(p != nullptr, "ode evolution needs model params");
      traj = qme::evolve_ode(to_cpp(*p), unpack3(rho0_18), grid);
    } else {
      require(false, "unknown evolution method");
    }
    for (int k = 0; k < n_times; ++k) {
      pack3(traj.states[k], states + 18 * k);
    }
  });
}

int qme_fit_decay_rate(const double* times, const double* values, int n,
                       double window_lo, double window_hi, double* rate,
                       double* amplitude, double* rms) {
  return guarded([&] {
    require(times != nullptr && values != nullptr && rate != nullptr && n > 0,
            "null/empty argument");
    const auto fit = qme::fit_decay_rate(
        std::vector<double>(times, times + n),
        std::vector<double>(values, values + n), window_lo, window_hi);
    *rate = fit.rate;
    if (amplitude != nullptr) *amplitude = fit.amplitude;
    if (rms != nullptr) *rms = fit.rms;
  });
}

int qme_rate_evolve(const qme_params* p, const double pops0[3],
                    const double* times, int n_times, double* pops) {
  return guarded([&] {
    require(p != nullptr && pops0 != nullptr && times != nullptr &&
                pops != nullptr && n_times > 0,
            "null/empty argument");
    const auto out = qme::rate_equation_evolve(
        to_cpp(*p), Eigen::Vector3d(pops0[0], pops0[1], pops0[2]),
        std::vector<double>(times, times + n_times));
    for (int k = 0; k < n_times; ++k) {
      for (int i = 0; i < 3; ++i) pops[3 * k + i] = out[k](i);
    }
  });
}

int qme_effective_matrix(double omega_p, double gamma, double out9[]) {
  return guarded([&] {
    require(out9 != nullptr, "null argument");
    const Eigen::Matrix3d a =
        qme::effective_model_matrix({omega_p, gamma});
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) out9[3 * r + c] = a(r, c);
    }
  });
}

int qme_effective_eigenvalues(double omega_p, double gamma, double re3[],
                              double im3[]) {
  return guarded([&] {
    require(re3 != nullptr && im3 != nullptr, "null argument");
    const auto vals = qme::effective_model_eigenvalues({omega_p, gamma});
    for (int i = 0; i < 3; ++i) {
      re3[i] = vals[i].real();
      im3[i] = vals[i].imag();
    }
  });
}

int qme_effective_decay_rate(double omega_p, double gamma, double* exact,
                             double* approximate, double* relative_gap) {
  return guarded([&] {
    require(exact != nullptr, "null argument");
    const auto r = qme::effective_decay_rate({omega_p, gamma});
    *exact = r.exact;
    if (approximate != nullptr) *approximate = r.approximate;
    if (relative_gap != nullptr) *relative_gap = r.relative_gap;
  });
}

int qme_compile(const double target6[], qme_gate gates[2],
                qme_phase_ledger* ledger) {
  return guarded([&] {
    require(target6 != nullptr && gates != nullptr && ledger != nullptr,
            "null argument");
    const auto seq = qme::compile_state_prep(unpack_vec3(target6));
    gates[0] = to_c(seq.gates[0]);
    gates[1] = to_c(seq.gates[1]);
    *ledger = to_c(seq.ledger);
  });
}

int qme_compose(const qme_gate gates[2], const qme_phase_ledger* ledger,
                double u18[]) {
  return guarded([&] {
    require(gates != nullptr && ledger != nullptr && u18 != nullptr,
            "null argument");
    qme::GateSequence seq;
    seq.gates[0] = to_cpp(gates[0]);
    seq.gates[1] = to_cpp(gates[1]);
    seq.ledger = to_cpp(*ledger);
    pack3(qme::compose(seq), u18);
  });
}

int qme_deferred_phase_gate(const qme_phase_ledger* ledger, double v18[]) {
  return guarded([&] {
    require(ledger != nullptr && v18 != nullptr, "null argument");
    pack3(qme::deferred_phase_gate(to_cpp(*ledger)), v18);
  });
}

int qme_frame_map(const qme_params* p, const qme_phase_ledger* ledger,
                  qme_params* out) {
  return guarded([&] {
    require(p != nullptr && ledger != nullptr && out != nullptr,
            "null argument");
    *out = to_c(qme::frame_map(to_cpp(*p), to_cpp(*ledger)));
  });
}

int qme_tomo_pulses(int basis, const qme_phase_ledger* ledger,
                    qme_gate pulses[2], int* count) {
  return guarded([&] {
    require(pulses != nullptr && count != nullptr, "null argument");
    qme::PhaseLedger cpp_ledger;
    const qme::PhaseLedger* lp = nullptr;
    if (ledger != nullptr) {
      cpp_ledger = to_cpp(*ledger);
      lp = &cpp_ledger;
    }
    const auto out = qme::tomography_rotation(basis, lp);
    *count = static_cast<int>(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) pulses[i] = to_c(out[i]);
  });
}

int qme_gates_to_text(const qme_gate gates[2], const qme_phase_ledger* ledger,
                      const double target6[], char* buf, size_t size) {
  return guarded([&] {
    require(gates != nullptr && ledger != nullptr && target6 != nullptr,
            "null argument");
    qme::GateSequence seq;
    seq.gates[0] = to_cpp(gates[0]);
    seq.gates[1] = to_cpp(gates[1]);
    seq.ledger = to_cpp(*ledger);
    seq.target = unpack_vec3(target6);
    copy_string(qme::gate_sequence_to_text(seq), buf, size);
  });
}

int qme_gates_from_text(const char* text, qme_gate gates[2],
                        qme_phase_ledger* ledger, double target6[]) {
  return guarded([&] {
    require(text != nullptr && gates != nullptr && ledger != nullptr &&
                target6 != nullptr,
            "null argument");
    const auto seq = qme::gate_sequence_from_text(text);
    gates[0] = to_c(seq.gates[0]);
    gates[1] = to_c(seq.gates[1]);
    *ledger = to_c(seq.ledger);
    pack_vec3(seq.target, target6);
  });
}

const char* qme_tomo_basis_label(int basis) {
  if (basis < 0 || basis > 8) return nullptr;
  return qme::tomography_basis_labels()[basis].c_str();
}

int qme_tomo_simulate(const double rho18[], long long shots,
                      unsigned long long seed, int model,
                      long long counts27[]) {
  return guarded([&] {
    require(rho18 != nullptr && counts27 != nullptr, "null argument");
    const auto rec =
        qme::simulate_measurements(unpack3(rho18), shots, seed,
                                   to_model(model));
    for (int b = 0; b < 9; ++b) {
      for (int o = 0; o < 3; ++o) counts27[b * 3 + o] = rec.counts[b][o];
    }
  });
}

int qme_tomo_mle(long long shots, int model, const long long counts27[],
                 double rho18[], int* converged, int* iterations) {
  return guarded([&] {
    require(rho18 != nullptr, "null argument");
    const auto res = qme::mle_reconstruct(make_record(shots, model, counts27));
    pack3(res.rho, rho18);
    if (converged != nullptr) *converged = res.converged ? 1 : 0;
    if (iterations != nullptr) *iterations = res.iterations;
  });
}

int qme_tomo_mle_probabilities(const double probs27[], int model,
                               double rho18[], int* converged,
                               int* iterations) {
  return guarded([&] {
    require(probs27 != nullptr && rho18 != nullptr, "null argument");
    std::array<std::array<double, 3>, 9> probs{};
    for (int b = 0; b < 9; ++b) {
      for (int o = 0; o < 3; ++o) probs[b][o] = probs27[b * 3 + o];
    }
    const auto res =
        qme::mle_reconstruct_probabilities(probs, to_model(model));
    pack3(res.rho, rho18);
    if (converged != nullptr) *converged = res.converged ? 1 : 0;
    if (iterations != nullptr) *iterations = res.iterations;
  });
}

int qme_tomo_bootstrap(long long shots, int model, const long long counts27[],
                       int resamples, unsigned long long seed, int statistic,
                       int index, const qme_spectral* dec,
                       const double ref18[], double* mean, double* std_dev) {
  return guarded([&] {
    require(mean != nullptr && std_dev != nullptr, "null argument");
    const auto rec = make_record(shots, model, counts27);

    std::function<double(const qme::DensityMatrix&)> stat;
    Matrix3 ref = Matrix3::Zero();
    if (statistic == QME_STAT_OVERLAP_ABS) {
      require(dec != nullptr, "overlap statistic needs a decomposition");
      require(index >= 0 && index < 9, "mode index out of range");
      const qme::SpectralDecomposition& d = dec->dec;
      stat = [&d, index](const qme::DensityMatrix& rho) {
        return std::abs((d.left[index] * rho).trace());
      };
    } else if (statistic == QME_STAT_DISTANCE_TO_REF ||
               statistic == QME_STAT_FIDELITY_TO_REF) {
      require(ref18 != nullptr, "statistic needs a reference state");
      ref = unpack3(ref18);
      stat = statistic == QME_STAT_DISTANCE_TO_REF
                 ? std::function<double(const qme::DensityMatrix&)>(
                       [ref](const qme::DensityMatrix& rho) {
                         return qme::distance_eq4(rho, ref);
                       })
                 : [ref](const qme::DensityMatrix& rho) {
                     return qme::fidelity(rho, ref);
                   };
    } else if (statistic == QME_STAT_POPULATION) {
      require(index >= 0 && index < 3, "level index out of range");
      stat = [index](const qme::DensityMatrix& rho) {
        return rho(index, index).real();
      };
    } else {
      require(false, "unknown statistic");
    }

    const auto out = qme::monte_carlo_errors(rec, resamples, stat, seed);
    *mean = out.mean;
    *std_dev = out.std_dev;
  });
}

int qme_tomo_record_text(long long shots, unsigned long long seed, int model,
                         const long long counts27[], char* buf, size_t size) {
  return guarded([&] {
    auto rec = make_record(shots, model, counts27);
    rec.seed = seed;
    copy_string(qme::record_to_text(rec), buf, size);
  });
}

int qme_tomo_record_parse(const char* text, long long* shots,
                          unsigned long long* seed, int* model,
                          long long counts27[]) {
  return guarded([&] {
    require(text != nullptr && shots != nullptr && seed != nullptr &&
                model != nullptr && counts27 != nullptr,
            "null argument");
    const auto rec = qme::record_from_text(text);
    *shots = rec.shots_per_basis;
    *seed = rec.seed;
    *model = rec.model == qme::DetectionModel::SD2 ? QME_DETECTION_SD2
                                                   : QME_DETECTION_IDEAL3;
    for (int b = 0; b < 9; ++b) {
      for (int o = 0; o < 3; ++o) counts27[b * 3 + o] = rec.counts[b][o];
    }
  });
}

}  // extern "C"
