/* Copyright 2026 The qme authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the qme shared library: a simulator for the relaxation of a
 * driven-dissipative three-level system, its generator spectrum, engineered
 * zero-overlap initial states, two-pulse state-preparation compilation and
 * simulated state tomography.
 *
 * Complex 3x3 matrices travel as double[18]: column-major, each entry as a
 * (re, im) pair, i.e. element (row, col) lives at index (col*3 + row)*2.
 * The 9x9 generator uses the same layout as double[162]. Pure states are
 * double[6]: three (re, im) amplitude pairs. All functions returning int
 * yield QME_OK on success and leave outputs untouched on failure.
 */

#ifndef QME_H_
#define QME_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QME_API __attribute__((visibility("default")))

enum qme_status {
  QME_OK = 0,
  QME_ERR_INVALID_ARGUMENT = 1,
  QME_ERR_DEFECTIVE = 2,            /* eigenbasis flagged near an EP */
  QME_ERR_DEGENERATE_STEADY_STATE = 3,
  QME_ERR_NOT_CONVERGED = 4,
  QME_ERR_DOMAIN = 5,               /* outside an operation's regime */
  QME_ERR_INTERNAL = 6
};

enum qme_convention { QME_CONVENTION_MAIN = 0, QME_CONVENTION_FACTOR2 = 1 };
enum qme_regime { QME_REGIME_STRONG = 0, QME_REGIME_SUPER_STRONG = 1,
                  QME_REGIME_WEAK_OR_NONE = 2 };
enum qme_distance_kind { QME_DISTANCE_TRACE_NORM = 0, QME_DISTANCE_FROBENIUS = 1,
                         QME_DISTANCE_BURES = 2, QME_DISTANCE_TRACE = 3 };
enum qme_evolve_method { QME_EVOLVE_SPECTRAL = 0, QME_EVOLVE_ODE = 1 };
enum qme_detection_model { QME_DETECTION_IDEAL3 = 0, QME_DETECTION_SD2 = 1 };
enum qme_statistic { QME_STAT_OVERLAP_ABS = 0,   /* |c_index|, needs dec */
                     QME_STAT_DISTANCE_TO_REF = 1,
                     QME_STAT_FIDELITY_TO_REF = 2,
                     QME_STAT_POPULATION = 3 };

/* Couplings in units of the 0<->1 Rabi frequency; phi/phi_prime are the
 * drive phases on the raising amplitudes |1><0| and |2><0|. */
typedef struct qme_params {
  double omega1;
  double omega2_ratio;
  double kappa1_ratio;
  double kappa2_ratio;
  double phi;
  double phi_prime;
  int convention;
} qme_params;

/* Opaque biorthonormal eigenmode decomposition of the generator. */
typedef struct qme_spectral qme_spectral;

typedef struct qme_gate {
  int subspace; /* 0: pulse on 0<->1, 1: pulse on 0<->2 */
  double theta;
  double phase;
} qme_gate;

typedef struct qme_phase_ledger {
  double alpha, beta, gamma, delta;
  double alpha_p, beta_p, gamma_p, delta_p;
  double phi, phi_prime;  /* axis phases of the two executed rotations */
  double phi_l1, phi_l2;  /* frame shifts for every later pulse or drive */
} qme_phase_ledger;

typedef struct qme_lep_row {
  double ratio;
  double lambda1_re, lambda1_im;
  double lambda2_re, lambda2_im;
  double c1_re, c1_im; /* normalized-functional overlaps of rho_in */
  double c2_re, c2_im;
  double condition;
  int flagged;
} qme_lep_row;

QME_API const char* qme_version(void);
QME_API const char* qme_strerror(int status);

/* ---- model ---- */
QME_API int qme_params_validate(const qme_params* p);
QME_API int qme_hamiltonian(const qme_params* p, double h18[]);
QME_API int qme_jump_operators(const qme_params* p, double j1_18[],
                               double j2_18[]);
QME_API int qme_liouvillian_matrix(const qme_params* p, double sup162[]);
QME_API int qme_liouvillian_apply(const qme_params* p, const double rho18[],
                                  double out18[]);

/* ---- spectral ---- */
QME_API int qme_spectral_new(const qme_params* p, qme_spectral** out);
QME_API void qme_spectral_free(qme_spectral* dec);
QME_API int qme_spectral_eigenvalues(const qme_spectral* dec, double re9[],
                                     double im9[]);
QME_API int qme_spectral_info(const qme_spectral* dec, double* gap,
                              double* tau1, double* tau2, double* condition,
                              int* defective);
/* right18/left18 may be NULL when not wanted. */
QME_API int qme_spectral_mode(const qme_spectral* dec, int index,
                              double right18[], double left18[]);
QME_API int qme_spectral_stationary(const qme_spectral* dec, double rho18[]);
QME_API int qme_spectral_overlaps(const qme_spectral* dec,
                                  const double rho18[], double c_re9[],
                                  double c_im9[]);
QME_API int qme_spectral_normalized_overlap(const qme_spectral* dec, int index,
                                            const double rho18[], double* re,
                                            double* im);
/* Hermitian pair recombination; *pairs (optional) reports how many pairs
 * were replaced (0 means the transform was the identity). */
QME_API int qme_spectral_recombine(const qme_spectral* dec, qme_spectral** out,
                                   int* pairs);
QME_API int qme_lep_locate(const qme_params* p, double lo, double hi,
                           double* ratio);
QME_API int qme_lep_scan(const qme_params* p, const double* ratios, int n,
                         const double rho_in18[], qme_lep_row* rows);
QME_API int qme_classify_regime(const qme_params* p, int* regime,
                                double* speedup_factor);

/* ---- engineered initial state ---- */
/* unitary18, phi1_6, phi2_6, alpha1, alpha2 may be NULL. */
QME_API int qme_sme_construct(const qme_spectral* dec, double state6[],
                              double unitary18[], double* s_angle,
                              double* alpha1, double* alpha2, double phi1_6[],
                              double phi2_6[]);
QME_API int qme_distance(int kind, const double a18[], const double b18[],
                         double* out);

/* ---- dynamics ---- */
/* states must hold n_times * 18 doubles. method SPECTRAL requires dec;
 * method ODE requires p. rho0 is the state at t = 0. */
QME_API int qme_evolve(const qme_params* p, const qme_spectral* dec,
                       int method, const double rho0_18[],
                       const double* times, int n_times, double* states);
QME_API int qme_fit_decay_rate(const double* times, const double* values,
                               int n, double window_lo, double window_hi,
                               double* rate, double* amplitude, double* rms);
QME_API int qme_rate_evolve(const qme_params* p, const double pops0[3],
                            const double* times, int n_times, double* pops);
/* out9 is the real 3x3 generator, row-major. */
QME_API int qme_effective_matrix(double omega_p, double gamma, double out9[]);
QME_API int qme_effective_eigenvalues(double omega_p, double gamma,
                                      double re3[], double im3[]);
QME_API int qme_effective_decay_rate(double omega_p, double gamma,
                                     double* exact, double* approximate,
                                     double* relative_gap);

/* ---- compiler ---- */
QME_API int qme_compile(const double target6[], qme_gate gates[2],
                        qme_phase_ledger* ledger);
QME_API int qme_compose(const qme_gate gates[2],
                        const qme_phase_ledger* ledger, double u18[]);
QME_API int qme_deferred_phase_gate(const qme_phase_ledger* ledger,
                                    double v18[]);
QME_API int qme_frame_map(const qme_params* p, const qme_phase_ledger* ledger,
                          qme_params* out);
/* ledger may be NULL (unrotated frame). *count is 0, 1 or 2. */
QME_API int qme_tomo_pulses(int basis, const qme_phase_ledger* ledger,
                            qme_gate pulses[2], int* count);
QME_API int qme_gates_to_text(const qme_gate gates[2],
                              const qme_phase_ledger* ledger,
                              const double target6[], char* buf, size_t size);
QME_API int qme_gates_from_text(const char* text, qme_gate gates[2],
                                qme_phase_ledger* ledger, double target6[]);

/* ---- tomography ---- */
QME_API const char* qme_tomo_basis_label(int basis);
/* counts27: 9 bases x 3 outcome slots (SD2 fills the first two). */
QME_API int qme_tomo_simulate(const double rho18[], long long shots,
                              unsigned long long seed, int model,
                              long long counts27[]);
QME_API int qme_tomo_mle(long long shots, int model,
                         const long long counts27[], double rho18[],
                         int* converged, int* iterations);
QME_API int qme_tomo_mle_probabilities(const double probs27[], int model,
                                       double rho18[], int* converged,
                                       int* iterations);
/* dec is required for QME_STAT_OVERLAP_ABS (mode = index), ref18 for the
 * distance/fidelity statistics; index selects the level for POPULATION. */
QME_API int qme_tomo_bootstrap(long long shots, int model,
                               const long long counts27[], int resamples,
                               unsigned long long seed, int statistic,
                               int index, const qme_spectral* dec,
                               const double ref18[], double* mean,
                               double* std_dev);
QME_API int qme_tomo_record_text(long long shots, unsigned long long seed,
                                 int model, const long long counts27[],
                                 char* buf, size_t size);
QME_API int qme_tomo_record_parse(const char* text, long long* shots,
                                  unsigned long long* seed, int* model,
                                  long long counts27[]);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* QME_H_ */
