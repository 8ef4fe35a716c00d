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

#include "qme/dynamics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qme {

namespace {

const Complex kI(0.0, 1.0);

void check_grid(const std::vector<double>& times) {
  if (times.empty()) {
    throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!std::isfinite(times[k]) || times[k] < 0.0 ||
        (k > 0 && times[k] <= times[k - 1])) {
      throw Error(ErrorCode::InvalidArgument,
                  "time grid must be nonnegative and strictly increasing");
    }
  }
}

void repair_hermiticity(Matrix3& rho, int& repairs) {
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    rho = 0.5 * (rho + rho.adjoint()).eval();
    ++repairs;
  }
}

void fill_diagnostics(Trajectory& traj, const SpectralDecomposition& dec) {
  const DensityMatrix rho_ss = stationary_state(dec);
  traj.overlaps.reserve(traj.states.size());
  for (const Matrix3& rho : traj.states) {
    OverlapVector c;
    for (int i = 0; i < 9; ++i) c[i] = (dec.left[i] * rho).trace();
    traj.overlaps.push_back(c);
    traj.distances.eq4.push_back(distance_eq4(rho, rho_ss));
    traj.distances.frobenius.push_back(distance_frobenius(rho, rho_ss));
    traj.distances.bures.push_back(distance_bures(rho, rho_ss));
    traj.distances.trace.push_back(distance_trace(rho, rho_ss));
  }
}

}  // namespace

std::vector<double> make_time_grid(double t_min, double t_max, int points,
                                   bool log_spacing) {
  if (!(t_max > t_min) || points < 2 || (log_spacing && !(t_min > 0.0))) {
    throw Error(ErrorCode::InvalidArgument, "invalid time grid spec");
  }
  std::vector<double> grid;
  if (log_spacing) {
    grid.push_back(0.0);
    const double l0 = std::log(t_min), l1 = std::log(t_max);
    for (int k = 0; k < points; ++k) {
      grid.push_back(std::exp(l0 + (l1 - l0) * k / (points - 1)));
    }
  } else {
    for (int k = 0; k < points; ++k) {
      grid.push_back(t_min + (t_max - t_min) * k / (points - 1));
    }
  }
  return grid;
}

Trajectory evolve_spectral(const SpectralDecomposition& dec,
                           const DensityMatrix& rho_in,
                           const std::vector<double>& times) {
  check_grid(times);
  check_density_matrix(rho_in);
  const OverlapVector c = overlaps(dec, rho_in);  // refuses defective input

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());
  for (double t : times) {
    Matrix3 rho = Matrix3::Zero();
    for (int i = 0; i < 9; ++i) {
      if (dec.is_recombined(i)) continue;
      rho += c[i] * std::exp(dec.eigenvalues[i] * t) * dec.right[i];
    }
    for (const auto& [i, j] : dec.recombined_pairs) {
      const double a = dec.eigenvalues[i].real();
      const double w = std::abs(dec.eigenvalues[i].imag());
      const double decay = std::exp(a * t);
      const double cs = std::cos(w * t), sn = std::sin(w * t);
      rho += decay * ((cs * c[i] - sn * c[j]) * dec.right[i] +
                      (sn * c[i] + cs * c[j]) * dec.right[j]);
    }
    repair_hermiticity(rho, traj.hermiticity_repairs);
    traj.states.push_back(rho);
  }
  fill_diagnostics(traj, dec);
  return traj;
}

namespace {

// Dormand-Prince 5(4) pair with PI-free standard step control.
struct Dopri5 {
  const Matrix3& h;
  const std::vector<Matrix3>& jumps;
  DissipatorConvention convention;
  const OdeOptions& opts;
  long steps = 0;

  Matrix3 rhs(const Matrix3& rho) const {
    return apply_liouvillian_direct(h, jumps, convention, rho);
  }

  // Advances rho from t to t_end.
  void integrate(Matrix3& rho, double t, double t_end) {
    if (t_end <= t) return;
    double step = std::min(t_end - t, 0.1);
    Matrix3 k1 = rhs(rho);
    while (t < t_end) {
      step = std::min(step, t_end - t);
      if (step < opts.min_step) {
        std::ostringstream msg;
        msg << "step size underflow at t = " << t << " (h = " << step << ")";
        throw Error(ErrorCode::NotConverged, msg.str());
      }
      if (++steps > opts.max_steps) {
        std::ostringstream msg;
        msg << "step budget exhausted at t = " << t << " of " << t_end;
        throw Error(ErrorCode::NotConverged, msg.str());
      }

      const Matrix3 k2 = rhs(rho + step * (0.2 * k1));
      const Matrix3 k3 = rhs(rho + step * (3.0 / 40 * k1 + 9.0 / 40 * k2));
      const Matrix3 k4 = rhs(rho + step * (44.0 / 45 * k1 - 56.0 / 15 * k2 +
                                           32.0 / 9 * k3));
      const Matrix3 k5 =
          rhs(rho + step * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                            64448.0 / 6561 * k3 - 212.0 / 729 * k4));
      const Matrix3 k6 =
          rhs(rho + step * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                            46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                            5103.0 / 18656 * k5));
      const Matrix3 next =
          rho + step * (35.0 / 384 * k1 + 500.0 / 1113 * k3 +
                        125.0 / 192 * k4 - 2187.0 / 6784 * k5 + 11.0 / 84 * k6);
      const Matrix3 k7 = rhs(next);
      const Matrix3 err =
          step * ((35.0 / 384 - 5179.0 / 57600) * k1 +
                  (500.0 / 1113 - 7571.0 / 16695) * k3 +
                  (125.0 / 192 - 393.0 / 640) * k4 +
                  (-2187.0 / 6784 + 92097.0 / 339200) * k5 +
                  (11.0 / 84 - 187.0 / 2100) * k6 - 1.0 / 40 * k7);

      const double scale =
          opts.atol + opts.rtol * std::max(rho.cwiseAbs().maxCoeff(),
                                           next.cwiseAbs().maxCoeff());
      const double err_ratio = err.cwiseAbs().maxCoeff() / scale;
      if (err_ratio <= 1.0) {
        t += step;
        rho = next;
        k1 = k7;  // first-same-as-last
      }
      const double grow =
          err_ratio > 0.0 ? 0.9 * std::pow(err_ratio, -0.2) : 5.0;
      step *= std::clamp(grow, 0.2, 5.0);
    }
  }
};

}  // namespace

Trajectory evolve_ode(const Matrix3& h, const std::vector<Matrix3>& jumps,
                      DissipatorConvention convention,
                      const DensityMatrix& rho_in,
                      const std::vector<double>& times,
                      const OdeOptions& opts,
                      const SpectralDecomposition* dec) {
  check_grid(times);
  check_density_matrix(rho_in);

  Trajectory traj;
  traj.times = times;
  traj.states.reserve(times.size());

  Dopri5 stepper{h, jumps, convention, opts};
  Matrix3 rho = rho_in;
  double t = 0.0;
  for (double t_next : times) {
    stepper.integrate(rho, t, t_next);
    t = t_next;
    Matrix3 out = rho;
    repair_hermiticity(out, traj.hermiticity_repairs);
    traj.states.push_back(out);
  }
  if (dec != nullptr) fill_diagnostics(traj, *dec);
  return traj;
}

Trajectory evolve_ode(const ModelParams& p, const DensityMatrix& rho_in,
                      const std::vector<double>& times, const OdeOptions& opts,
                      const SpectralDecomposition* dec) {
  const auto jumps = build_jump_operators(p);
  return evolve_ode(build_hamiltonian(p), {jumps[0], jumps[1]}, p.convention,
                    rho_in, times, opts, dec);
}

DecayFit fit_decay_rate(const std::vector<double>& times,
                        const std::vector<double>& values, double window_lo,
                        double window_hi) {
  if (times.size() != values.size()) {
    throw Error(ErrorCode::InvalidArgument, "times/values size mismatch");
  }
  double st = 0, sy = 0, stt = 0, sty = 0;
  std::vector<std::pair<double, double>> pts;
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] < window_lo || times[k] > window_hi) continue;
    if (!(values[k] > 0.0)) {
      throw Error(ErrorCode::InvalidArgument,
                  "nonpositive value inside the fit window");
    }
    const double y = std::log(values[k]);
    pts.emplace_back(times[k], y);
    st += times[k];
    sy += y;
    stt += times[k] * times[k];
    sty += times[k] * y;
  }
  const double n = static_cast<double>(pts.size());
  if (pts.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "fewer than two points in window");
  }
  const double denom = n * stt - st * st;
  if (denom == 0.0) {
    throw Error(ErrorCode::InvalidArgument, "degenerate fit window");
  }

  DecayFit fit;
  fit.rate = (n * sty - st * sy) / denom;
  const double intercept = (sy - fit.rate * st) / n;
  fit.amplitude = std::exp(intercept);
  double ss = 0;
  for (auto [t, y] : pts) {
    const double r = y - (intercept + fit.rate * t);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

Eigen::Matrix3d rate_equation_generator(const ModelParams& p) {
  validate_params(p);
  const double omegas[2] = {p.omega1, p.omega2()};
  const double kappas[2] = {p.kappa1(), p.kappa2()};
  double gamma[2];
  for (int j = 0; j < 2; ++j) {
    if (omegas[j] > 0.0 && kappas[j] <= 0.0) {
      throw Error(ErrorCode::DomainError,
                  "rate-equation reduction needs kappa_j > 0 on driven "
                  "transitions");
    }
    gamma[j] = omegas[j] > 0.0 ? omegas[j] * omegas[j] / kappas[j] : 0.0;
  }

  Eigen::Matrix3d g = Eigen::Matrix3d::Zero();
  for (int j = 0; j < 2; ++j) {
    const int lvl = j + 1;
    g(0, 0) -= gamma[j];
    g(lvl, 0) += gamma[j];
    g(0, lvl) += gamma[j] + kappas[j];
    g(lvl, lvl) -= gamma[j] + kappas[j];
  }
  return g;
}

std::vector<Eigen::Vector3d> rate_equation_evolve(
    const ModelParams& p, const Eigen::Vector3d& populations_in,
    const std::vector<double>& times) {
  check_grid(times);
  if (populations_in.minCoeff() < -1e-12 ||
      std::abs(populations_in.sum() - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidArgument,
                "populations must be nonnegative and sum to one");
  }
  const Eigen::Matrix3d g = rate_equation_generator(p);
  std::vector<Eigen::Vector3d> out;
  out.reserve(times.size());
  for (double t : times) {
    out.push_back((g * t).exp() * populations_in);
  }
  return out;
}

Eigen::Matrix3d effective_model_matrix(const EffectiveDecayParams& e) {
  if (!(e.omega_p >= 0.0) || !(e.gamma >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "effective-model parameters must be nonnegative");
  }
  Eigen::Matrix3d a;
  a << 0.0, 0.0, -0.5 * e.omega_p,       //
      0.0, -e.gamma, 0.5 * e.omega_p,    //
      e.omega_p, -e.omega_p, -0.5 * e.gamma;
  return a;
}

std::array<Complex, 3> effective_model_eigenvalues(
    const EffectiveDecayParams& e) {
  const Complex disc =
      std::sqrt(Complex(e.gamma * e.gamma - 4.0 * e.omega_p * e.omega_p, 0.0));
  return {-(e.gamma - disc) / 2.0, -(e.gamma + disc) / 2.0,
          Complex(-e.gamma / 2.0, 0.0)};
}

EffectiveDecayRate effective_decay_rate(const EffectiveDecayParams& e) {
  if (!(e.gamma > 2.0 * e.omega_p)) {
    throw Error(ErrorCode::DomainError,
                "underdamped regime: needs gamma > 2 omega_p for a purely "
                "exponential channel");
  }
  EffectiveDecayRate r;
  r.exact = -effective_model_eigenvalues(e)[0].real();
  r.approximate = e.omega_p * e.omega_p / e.gamma;
  r.relative_gap = (r.exact - r.approximate) / r.exact;
  return r;
}

}  // namespace qme
