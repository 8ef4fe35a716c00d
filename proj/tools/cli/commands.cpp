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

#include "commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdio>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <vector>

#include "qme.h"
#include "table.hpp"

namespace qme_cli {

namespace {

using json = nlohmann::ordered_json;
using State = std::array<double, 18>;
using Amps = std::array<double, 6>;

constexpr double kPi = 3.14159265358979323846;

// Library status -> CLI exception (exit 2 for bad input, 3 for numerical
// conditions).
void check(int rc, const std::string& what) {
  if (rc == QME_OK) return;
  const std::string msg = what + ": " + qme_strerror(rc);
  if (rc == QME_ERR_INVALID_ARGUMENT) throw ConfigError(msg);
  throw NumericalError(msg);
}

struct Spectral {
  qme_spectral* handle = nullptr;
  explicit Spectral(const qme_params& p) {
    check(qme_spectral_new(&p, &handle), "spectral decomposition");
  }
  Spectral(const Spectral&) = delete;
  Spectral& operator=(const Spectral&) = delete;
  ~Spectral() { qme_spectral_free(handle); }
};

State basis_density(int level) {
  State s{};
  s[(level * 3 + level) * 2] = 1.0;
  return s;
}

State amps_to_density(const Amps& a) {
  State s{};
  for (int c = 0; c < 3; ++c) {
    const std::complex<double> vc(a[2 * c], a[2 * c + 1]);
    for (int r = 0; r < 3; ++r) {
      const std::complex<double> vr(a[2 * r], a[2 * r + 1]);
      const std::complex<double> e = vr * std::conj(vc);
      s[(c * 3 + r) * 2] = e.real();
      s[(c * 3 + r) * 2 + 1] = e.imag();
    }
  }
  return s;
}

Amps normalized_amps(const std::vector<double>& raw) {
  if (raw.size() != 6) throw ConfigError("amplitudes needs 6 values");
  double norm = 0.0;
  for (double v : raw) norm += v * v;
  if (norm <= 0.0) throw ConfigError("amplitudes must be nonzero");
  Amps a{};
  for (int i = 0; i < 6; ++i) a[i] = raw[i] / std::sqrt(norm);
  return a;
}

// The engineered zero-overlap state; above the exceptional point the
// Hermitian pair basis is used, matching what the construction cancels there.
Amps sme_amplitudes(const qme_params& params) {
  Spectral dec(params);
  Amps amps{};
  int rc = qme_sme_construct(dec.handle, amps.data(), nullptr, nullptr,
                             nullptr, nullptr, nullptr, nullptr);
  if (rc == QME_ERR_DOMAIN) {
    qme_spectral* rec = nullptr;
    check(qme_spectral_recombine(dec.handle, &rec, nullptr), "recombination");
    rc = qme_sme_construct(rec, amps.data(), nullptr, nullptr, nullptr,
                           nullptr, nullptr, nullptr);
    qme_spectral_free(rec);
  }
  check(rc, "sme construction");
  return amps;
}

State initial_density(const CommandContext& ctx, InitialState which) {
  switch (which) {
    case InitialState::Zero:
      return basis_density(0);
    case InitialState::Two:
      return basis_density(2);
    case InitialState::Sme:
      return amps_to_density(sme_amplitudes(ctx.cfg.params));
    case InitialState::Explicit:
      return amps_to_density(normalized_amps(ctx.cfg.amplitudes));
  }
  throw ConfigError("unreachable initial state");
}

std::vector<double> time_grid(const CommandContext& ctx, double tau1) {
  double t_max = ctx.cfg.t_max;
  if (t_max <= 0.0) {
    if (!std::isfinite(tau1) || tau1 <= 0.0) {
      throw NumericalError(
          "cannot resolve t_max automatically (zero gap); set t_max");
    }
    t_max = 10.0 * tau1;
  }
  const double t_min = ctx.cfg.t_min;
  const int points = ctx.cfg.points;
  if (!(t_max > t_min) || !(t_min > 0.0)) {
    throw ConfigError("need 0 < t_min < t_max");
  }
  std::vector<double> grid;
  grid.reserve(points + 1);
  if (ctx.cfg.log_spacing) {
    grid.push_back(0.0);
    const double l0 = std::log(t_min), l1 = std::log(t_max);
    for (int k = 0; k < points; ++k) {
      grid.push_back(std::exp(l0 + (l1 - l0) * k / (points - 1)));
    }
  } else {
    grid.push_back(0.0);
    for (int k = 0; k < points; ++k) {
      grid.push_back(t_min + (t_max - t_min) * k / (points - 1));
    }
  }
  return grid;
}

std::vector<double> ratio_grid(const CommandContext& ctx, int default_points) {
  if (!ctx.cfg.ratios.empty()) return ctx.cfg.ratios;
  const int n = ctx.cfg.ratio_points > 0 ? ctx.cfg.ratio_points
                                         : default_points;
  if (n < 2 || !(ctx.cfg.ratio_max > ctx.cfg.ratio_min) ||
      !(ctx.cfg.ratio_min > 0.0)) {
    throw ConfigError("need 0 < ratio_min < ratio_max and ratio_points >= 2");
  }
  std::vector<double> grid(n);
  for (int k = 0; k < n; ++k) {
    grid[k] = ctx.cfg.ratio_min +
              (ctx.cfg.ratio_max - ctx.cfg.ratio_min) * k / (n - 1);
  }
  return grid;
}

std::string path_in(const CommandContext& ctx, const std::string& name) {
  return ctx.out_dir + "/" + name;
}

void note_written(const std::string& path) {
  std::cout << "wrote " << path << "\n";
}

struct EvolveData {
  std::vector<double> times;
  std::vector<State> states;      // spectral propagation
  std::vector<State> states_ode;  // only when dual requested
};

EvolveData evolve_both(const qme_params& params, const Spectral& dec,
                       const State& rho0, const std::vector<double>& grid,
                       bool dual) {
  EvolveData out;
  out.times = grid;
  const int n = static_cast<int>(grid.size());
  std::vector<double> buf(18 * n);
  check(qme_evolve(nullptr, dec.handle, QME_EVOLVE_SPECTRAL, rho0.data(),
                   grid.data(), n, buf.data()),
        "spectral evolution");
  out.states.resize(n);
  for (int k = 0; k < n; ++k) {
    std::copy_n(buf.begin() + 18 * k, 18, out.states[k].begin());
  }
  if (dual) {
    check(qme_evolve(&params, nullptr, QME_EVOLVE_ODE, rho0.data(),
                     grid.data(), n, buf.data()),
          "ode evolution");
    out.states_ode.resize(n);
    for (int k = 0; k < n; ++k) {
      std::copy_n(buf.begin() + 18 * k, 18, out.states_ode[k].begin());
    }
  }
  return out;
}

double distance(int kind, const State& a, const State& b) {
  double d = 0.0;
  check(qme_distance(kind, a.data(), b.data(), &d), "distance");
  return d;
}

}  // namespace

void cmd_spectrum(const CommandContext& ctx) {
  Spectral dec(ctx.cfg.params);

  std::array<double, 9> re{}, im{};
  check(qme_spectral_eigenvalues(dec.handle, re.data(), im.data()),
        "eigenvalues");
  double gap = 0, tau1 = 0, tau2 = 0, cond = 0;
  int defective = 0;
  check(qme_spectral_info(dec.handle, &gap, &tau1, &tau2, &cond, &defective),
        "spectral info");

  const bool khz = ctx.cfg.omega1_khz > 0.0;
  std::vector<std::string> cols = {"index", "re_lambda", "im_lambda"};
  if (khz) {
    cols.push_back("re_lambda_khz");
    cols.push_back("im_lambda_khz");
  }
  Table table("spectrum", ctx.cfg.echo(), cols);
  for (int i = 0; i < 9; ++i) {
    std::vector<double> row = {static_cast<double>(i), re[i], im[i]};
    if (khz) {
      row.push_back(re[i] * ctx.cfg.omega1_khz);
      row.push_back(im[i] * ctx.cfg.omega1_khz);
    }
    table.add_row(row);
  }
  write_file_atomic(path_in(ctx, "spectrum.csv"), table.str());
  note_written(path_in(ctx, "spectrum.csv"));

  std::ostringstream txt;
  txt << "# qme spectrum v1\n# config: " << ctx.cfg.echo() << "\n";
  txt << "eigenvalues (units of Omega_1"
      << (khz ? ", kHz echo in units of 2pi kHz" : "") << "):\n";
  for (int i = 0; i < 9; ++i) {
    txt << "  lambda_" << i << " = " << format_g17(re[i]) << " + "
        << format_g17(im[i]) << " i";
    if (khz) {
      txt << "   (" << format_g17(re[i] * ctx.cfg.omega1_khz) << " + "
          << format_g17(im[i] * ctx.cfg.omega1_khz) << " i kHz)";
    }
    txt << "\n";
  }
  txt << "gap = " << format_g17(gap) << "\n";
  txt << "tau1 = " << format_g17(tau1) << "\n";
  txt << "tau2 = " << format_g17(tau2) << "\n";
  txt << "condition = " << format_g17(cond) << "\n";
  txt << "defective = " << defective << "\n";
  if (khz) {
    txt << "omega1 = " << format_g17(ctx.cfg.omega1_khz)
        << " (2pi kHz, as configured)\n";
  }
  write_file_atomic(path_in(ctx, "spectrum.txt"), txt.str());
  note_written(path_in(ctx, "spectrum.txt"));

  if (ctx.cfg.ratio_points > 0 || !ctx.cfg.ratios.empty()) {
    const auto ratios = ratio_grid(ctx, 57);
    const State rho0 = basis_density(0);
    std::vector<qme_lep_row> rows(ratios.size());
    check(qme_lep_scan(&ctx.cfg.params, ratios.data(),
                       static_cast<int>(ratios.size()), rho0.data(),
                       rows.data()),
          "spectrum sweep");
    Table sweep("spectrum_sweep", ctx.cfg.echo(),
                {"ratio", "re_lambda1", "im_lambda1", "re_lambda2",
                 "im_lambda2", "condition", "flagged"});
    for (const auto& r : rows) {
      sweep.add_row({r.ratio, r.lambda1_re, r.lambda1_im, r.lambda2_re,
                     r.lambda2_im, r.condition,
                     static_cast<double>(r.flagged)});
    }
    write_file_atomic(path_in(ctx, "spectrum_sweep.csv"), sweep.str());
    note_written(path_in(ctx, "spectrum_sweep.csv"));
  }
}

void cmd_evolve(const CommandContext& ctx) {
  Spectral dec(ctx.cfg.params);
  double tau1 = 0;
  check(qme_spectral_info(dec.handle, nullptr, &tau1, nullptr, nullptr,
                          nullptr),
        "spectral info");
  const auto grid = time_grid(ctx, tau1);

  State rho_ss{};
  check(qme_spectral_stationary(dec.handle, rho_ss.data()), "steady state");

  std::vector<std::string> cols = {"t"};
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      cols.push_back("rho_re_" + std::to_string(r) + std::to_string(c));
      cols.push_back("rho_im_" + std::to_string(r) + std::to_string(c));
    }
  }
  for (int i = 0; i < 3; ++i) cols.push_back("pop" + std::to_string(i));
  for (int i = 0; i < 9; ++i) cols.push_back("c_abs_" + std::to_string(i));
  for (int i = 0; i < 9; ++i) cols.push_back("c_arg_" + std::to_string(i));
  cols.insert(cols.end(), {"d_eq4", "d_frobenius", "d_bures", "d_trace",
                           "spectral_vs_ode"});

  for (InitialState which : ctx.cfg.initial_states) {
    const State rho0 = initial_density(ctx, which);
    const auto data = evolve_both(ctx.cfg.params, dec, rho0, grid, true);

    Table table("evolve", ctx.cfg.echo(), cols);
    table.comment(std::string("initial_state: ") + initial_state_name(which));
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const State& s = data.states[k];
      std::vector<double> row = {grid[k]};
      for (double v : s) row.push_back(v);
      for (int i = 0; i < 3; ++i) row.push_back(s[(i * 3 + i) * 2]);
      std::array<double, 9> cre{}, cim{};
      check(qme_spectral_overlaps(dec.handle, s.data(), cre.data(),
                                  cim.data()),
            "overlaps");
      for (int i = 0; i < 9; ++i) row.push_back(std::hypot(cre[i], cim[i]));
      for (int i = 0; i < 9; ++i) row.push_back(std::atan2(cim[i], cre[i]));
      row.push_back(distance(QME_DISTANCE_TRACE_NORM, s, rho_ss));
      row.push_back(distance(QME_DISTANCE_FROBENIUS, s, rho_ss));
      row.push_back(distance(QME_DISTANCE_BURES, s, rho_ss));
      row.push_back(distance(QME_DISTANCE_TRACE, s, rho_ss));
      row.push_back(
          distance(QME_DISTANCE_TRACE_NORM, s, data.states_ode[k]));
      table.add_row(row);
    }
    const std::string path =
        path_in(ctx, std::string("evolve_") + initial_state_name(which) +
                         ".csv");
    write_file_atomic(path, table.str());
    note_written(path);
  }
}

void cmd_lep_scan(const CommandContext& ctx) {
  const auto ratios = ratio_grid(ctx, 57);
  const State rho0 = basis_density(0);
  const State rho2 = basis_density(2);
  std::vector<qme_lep_row> rows0(ratios.size()), rows2(ratios.size());
  const int n = static_cast<int>(ratios.size());
  check(qme_lep_scan(&ctx.cfg.params, ratios.data(), n, rho0.data(),
                     rows0.data()),
        "lep scan");
  check(qme_lep_scan(&ctx.cfg.params, ratios.data(), n, rho2.data(),
                     rows2.data()),
        "lep scan");

  Table table("lep_scan", ctx.cfg.echo(),
              {"ratio", "re_lambda1", "im_lambda1", "re_lambda2",
               "im_lambda2", "c1_abs_zero", "c2_abs_zero", "c1_abs_two",
               "c2_abs_two", "condition", "flagged"});
  for (int k = 0; k < n; ++k) {
    table.add_row({rows0[k].ratio, rows0[k].lambda1_re, rows0[k].lambda1_im,
                   rows0[k].lambda2_re, rows0[k].lambda2_im,
                   std::hypot(rows0[k].c1_re, rows0[k].c1_im),
                   std::hypot(rows0[k].c2_re, rows0[k].c2_im),
                   std::hypot(rows2[k].c1_re, rows2[k].c1_im),
                   std::hypot(rows2[k].c2_re, rows2[k].c2_im),
                   rows0[k].condition,
                   static_cast<double>(rows0[k].flagged)});
  }
  write_file_atomic(path_in(ctx, "lep_scan.csv"), table.str());
  note_written(path_in(ctx, "lep_scan.csv"));
}

void cmd_lep_locate(const CommandContext& ctx) {
  double ratio = 0.0;
  check(qme_lep_locate(&ctx.cfg.params, ctx.cfg.bracket_lo,
                       ctx.cfg.bracket_hi, &ratio),
        "lep locate");
  std::ostringstream txt;
  txt << "# qme lep_locate v1\n# config: " << ctx.cfg.echo() << "\n";
  txt << "bracket_lo = " << format_g17(ctx.cfg.bracket_lo) << "\n";
  txt << "bracket_hi = " << format_g17(ctx.cfg.bracket_hi) << "\n";
  txt << "lep_ratio = " << format_g17(ratio) << "\n";
  write_file_atomic(path_in(ctx, "lep_locate.txt"), txt.str());
  note_written(path_in(ctx, "lep_locate.txt"));
  std::cout << "lep_ratio = " << format_g17(ratio) << "\n";
}

void cmd_compile(const CommandContext& ctx, const std::string& state_literal,
                 bool verify) {
  Amps amps{};
  if (state_literal == "sme") {
    amps = sme_amplitudes(ctx.cfg.params);
  } else {
    std::vector<double> raw;
    std::stringstream ss(state_literal);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        raw.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw ConfigError("bad state literal component: '" + item + "'");
      }
    }
    if (raw.size() == 3) {
      raw = {raw[0], 0.0, raw[1], 0.0, raw[2], 0.0};
    }
    amps = normalized_amps(raw);
  }

  qme_gate gates[2];
  qme_phase_ledger ledger;
  check(qme_compile(amps.data(), gates, &ledger), "compile");

  std::array<char, 4096> buf{};
  check(qme_gates_to_text(gates, &ledger, amps.data(), buf.data(),
                          buf.size()),
        "gate serialization");
  std::ostringstream out;
  out << "# qme compile v1\n# config: " << ctx.cfg.echo() << "\n"
      << buf.data();
  write_file_atomic(path_in(ctx, "gates.txt"), out.str());
  note_written(path_in(ctx, "gates.txt"));

  if (verify) {
    State u{};
    check(qme_compose(gates, &ledger, u.data()), "compose");
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double dr = u[(0 * 3 + i) * 2] - amps[2 * i];
      const double di = u[(0 * 3 + i) * 2 + 1] - amps[2 * i + 1];
      worst = std::max(worst, std::hypot(dr, di));
    }
    std::cout << "verify: |compose(gates)|0> - target| = " << format_g17(worst)
              << (worst <= 1e-10 ? " (ok)" : " (FAILED)") << "\n";
    if (worst > 1e-10) {
      throw NumericalError("compiled sequence failed verification");
    }
  }
}

void cmd_tomo_simulate(const CommandContext& ctx) {
  const State rho0 = initial_density(ctx, ctx.cfg.initial_states.front());
  State rho = rho0;
  if (ctx.cfg.tomo_time > 0.0) {
    Spectral dec(ctx.cfg.params);
    const std::vector<double> grid = {0.0, ctx.cfg.tomo_time};
    std::vector<double> buf(36);
    check(qme_evolve(nullptr, dec.handle, QME_EVOLVE_SPECTRAL, rho0.data(),
                     grid.data(), 2, buf.data()),
          "evolution to tomo_time");
    std::copy_n(buf.begin() + 18, 18, rho.begin());
  }

  std::array<long long, 27> counts{};
  check(qme_tomo_simulate(rho.data(), ctx.cfg.shots, ctx.cfg.seed,
                          ctx.cfg.detection_model, counts.data()),
        "tomography simulation");
  std::array<char, 4096> buf{};
  check(qme_tomo_record_text(ctx.cfg.shots, ctx.cfg.seed,
                             ctx.cfg.detection_model, counts.data(),
                             buf.data(), buf.size()),
        "record serialization");
  const std::string content = "# qme tomo_record v1\n# config: " +
                              ctx.cfg.echo() + "\n" + buf.data();
  write_file_atomic(path_in(ctx, "tomo_record.txt"), content);
  note_written(path_in(ctx, "tomo_record.txt"));
}

void cmd_tomo_reconstruct(const CommandContext& ctx,
                          const std::string& record_path) {
  const std::string text = read_file(record_path);
  long long shots = 0;
  unsigned long long seed = 0;
  int model = 0;
  std::array<long long, 27> counts{};
  check(qme_tomo_record_parse(text.c_str(), &shots, &seed, &model,
                              counts.data()),
        "record parse");

  State rho{};
  int converged = 0, iterations = 0;
  check(qme_tomo_mle(shots, model, counts.data(), rho.data(), &converged,
                     &iterations),
        "mle reconstruction");

  Table table("tomo_state", ctx.cfg.echo(), {"row", "col", "re", "im"});
  table.comment("record: " + record_path);
  table.comment("shots: " + std::to_string(shots));
  table.comment("converged: " + std::to_string(converged));
  table.comment("iterations: " + std::to_string(iterations));
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      table.add_row({static_cast<double>(r), static_cast<double>(c),
                     rho[(c * 3 + r) * 2], rho[(c * 3 + r) * 2 + 1]});
    }
  }
  write_file_atomic(path_in(ctx, "tomo_state.csv"), table.str());
  note_written(path_in(ctx, "tomo_state.csv"));
  if (converged == 0) {
    std::cout << "warning: reconstruction hit the iteration cap\n";
  }
}

namespace {

json manifest_base(const CommandContext& ctx, const std::string& figure) {
  json m;
  m["figure"] = figure;
  m["generator"] = qme_version();
  m["config"] = ctx.cfg.echo();
  m["series"] = json::array();
  return m;
}

void add_series(json& manifest, const std::string& file,
                const std::string& description) {
  json s;
  s["file"] = file;
  s["description"] = description;
  manifest["series"].push_back(s);
}

void write_manifest(const CommandContext& ctx, const std::string& figure,
                    const json& manifest) {
  const std::string path = path_in(ctx, figure + "/manifest.json");
  write_file_atomic(path, manifest.dump(2) + "\n");
  note_written(path);
}

// Distance-vs-time table for the three canonical initial states at the
// given drive ratio.
void distance_series(const CommandContext& ctx, const qme_params& params,
                     int kind, const std::vector<double>& grid,
                     Table& table) {
  Spectral dec(params);
  State rho_ss{};
  check(qme_spectral_stationary(dec.handle, rho_ss.data()), "steady state");
  CommandContext local = ctx;
  local.cfg.params = params;

  std::array<State, 3> starts = {basis_density(0), basis_density(2),
                                 amps_to_density(sme_amplitudes(params))};
  std::array<EvolveData, 3> data;
  for (int s = 0; s < 3; ++s) {
    data[s] = evolve_both(params, dec, starts[s], grid, false);
  }
  for (std::size_t k = 0; k < grid.size(); ++k) {
    table.add_row({grid[k], distance(kind, data[0].states[k], rho_ss),
                   distance(kind, data[1].states[k], rho_ss),
                   distance(kind, data[2].states[k], rho_ss)});
  }
}

std::string ratio_tag(double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", ratio);
  std::string tag(buf);
  for (char& c : tag) {
    if (c == '.') c = 'p';
  }
  return tag;
}

void figure_fig1e(const CommandContext& ctx, json& manifest) {
  Spectral dec(ctx.cfg.params);
  Amps state{}, phi1{}, phi2{};
  double s_star = 0, a1 = 0, a2 = 0;
  check(qme_sme_construct(dec.handle, state.data(), nullptr, &s_star, &a1,
                          &a2, phi1.data(), phi2.data()),
        "sme construction");

  Table table("fig1e", ctx.cfg.echo(), {"s", "c1_abs"});
  table.comment("zero crossing at s = " + format_g17(s_star));
  const int n = 181;
  for (int k = 0; k < n; ++k) {
    const double s = 0.5 * kPi * k / (n - 1);
    Amps rotated{};
    for (int i = 0; i < 3; ++i) {
      const std::complex<double> p1(phi1[2 * i], phi1[2 * i + 1]);
      const std::complex<double> p2(phi2[2 * i], phi2[2 * i + 1]);
      const std::complex<double> v =
          std::cos(s) * p1 -
          std::complex<double>(0, 1) * std::sin(s) * p2;
      rotated[2 * i] = v.real();
      rotated[2 * i + 1] = v.imag();
    }
    const State rho = amps_to_density(rotated);
    std::array<double, 9> cre{}, cim{};
    check(qme_spectral_overlaps(dec.handle, rho.data(), cre.data(),
                                cim.data()),
          "overlaps");
    table.add_row({s, std::hypot(cre[1], cim[1])});
  }
  write_file_atomic(path_in(ctx, "fig1e/overlap_vs_angle.csv"), table.str());
  note_written(path_in(ctx, "fig1e/overlap_vs_angle.csv"));
  add_series(manifest, "overlap_vs_angle.csv",
             "|c_1| of the rotated state cos(s)|phi1> - i sin(s)|phi2> "
             "against the rotation angle s; zero crossing at the stored "
             "mixing angle");
  manifest["mixing_angle"] = s_star;
}

void figure_distance_time(const CommandContext& ctx, const std::string& name,
                          bool log_grid, json& manifest) {
  Spectral dec(ctx.cfg.params);
  double tau1 = 0;
  check(qme_spectral_info(dec.handle, nullptr, &tau1, nullptr, nullptr,
                          nullptr),
        "spectral info");
  CommandContext local = ctx;
  local.cfg.log_spacing = log_grid;
  if (!log_grid && ctx.cfg.t_max <= 0.0) {
    local.cfg.t_max = 1.5 * tau1;
  }
  const auto grid = time_grid(local, tau1);
  Table table(name, ctx.cfg.echo(), {"t", "d_zero", "d_two", "d_sme"});
  distance_series(ctx, ctx.cfg.params, QME_DISTANCE_TRACE_NORM, grid, table);
  write_file_atomic(path_in(ctx, name + "/distance.csv"), table.str());
  note_written(path_in(ctx, name + "/distance.csv"));
  add_series(manifest, "distance.csv",
             "trace-norm distance to the steady state for initial states "
             "|0>, |2> and the engineered zero-overlap state");
}

void figure_fig2(const CommandContext& ctx, json& manifest) {
  Spectral dec(ctx.cfg.params);
  double tau1 = 0, tau2 = 0;
  check(qme_spectral_info(dec.handle, nullptr, &tau1, &tau2, nullptr,
                          nullptr),
        "spectral info");
  const auto grid = time_grid(ctx, tau1);

  const std::array<std::pair<std::string, State>, 3> starts = {
      std::pair{std::string("zero"), basis_density(0)},
      std::pair{std::string("two"), basis_density(2)},
      std::pair{std::string("sme"),
                amps_to_density(sme_amplitudes(ctx.cfg.params))}};

  for (const auto& [label, rho0] : starts) {
    const auto data = evolve_both(ctx.cfg.params, dec, rho0, grid, false);
    Table pops("fig2_populations", ctx.cfg.echo(),
               {"t", "pop0", "pop1", "pop2"});
    pops.comment("initial_state: " + label);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const State& s = data.states[k];
      pops.add_row({grid[k], s[0], s[8], s[16]});
    }
    const std::string pfile = "fig2/populations_" + label + ".csv";
    write_file_atomic(path_in(ctx, pfile), pops.str());
    note_written(path_in(ctx, pfile));
    add_series(manifest, "populations_" + label + ".csv",
               "level populations on the configured time grid, initial "
               "state " + label);

    // Overlap bars at the three time stamps, with bootstrap error bars on
    // the two slowest functionals from simulated tomography.
    Table bars("fig2_overlaps", ctx.cfg.echo(),
               {"t", "c_abs_1", "c_abs_2", "c_abs_3", "c_abs_4", "c_abs_5",
                "c_abs_6", "c_abs_7", "c_abs_8", "c1_std", "c2_std"});
    bars.comment("initial_state: " + label);
    bars.comment("stamps: 0, tau2, tau1");
    for (const double t : {0.0, tau2, tau1}) {
      const std::vector<double> stamp = {0.0, std::max(t, 0.0)};
      std::vector<double> buf(36);
      check(qme_evolve(nullptr, dec.handle, QME_EVOLVE_SPECTRAL, rho0.data(),
                       stamp.data(), t > 0.0 ? 2 : 1, buf.data()),
            "evolution to stamp");
      State rho{};
      std::copy_n(buf.begin() + (t > 0.0 ? 18 : 0), 18, rho.begin());

      std::array<double, 9> cre{}, cim{};
      check(qme_spectral_overlaps(dec.handle, rho.data(), cre.data(),
                                  cim.data()),
            "overlaps");
      std::vector<double> row = {t};
      for (int i = 1; i < 9; ++i) row.push_back(std::hypot(cre[i], cim[i]));

      std::array<long long, 27> counts{};
      check(qme_tomo_simulate(rho.data(), ctx.cfg.shots, ctx.cfg.seed,
                              ctx.cfg.detection_model, counts.data()),
            "tomography simulation");
      for (int mode = 1; mode <= 2; ++mode) {
        double mean = 0, sd = 0;
        check(qme_tomo_bootstrap(ctx.cfg.shots, ctx.cfg.detection_model,
                                 counts.data(), ctx.cfg.resamples,
                                 ctx.cfg.seed, QME_STAT_OVERLAP_ABS, mode,
                                 dec.handle, nullptr, &mean, &sd),
              "bootstrap");
        row.push_back(sd);
      }
      bars.add_row(row);
    }
    const std::string bfile = "fig2/overlaps_" + label + ".csv";
    write_file_atomic(path_in(ctx, bfile), bars.str());
    note_written(path_in(ctx, bfile));
    add_series(manifest, "overlaps_" + label + ".csv",
               "|c_i| at t in {0, tau2, tau1} with parametric-bootstrap "
               "standard deviations of |c_1|, |c_2| from simulated "
               "tomography, initial state " + label);
  }
  manifest["tau1"] = tau1;
  manifest["tau2"] = tau2;
}

void figure_fig3(const CommandContext& ctx, json& manifest) {
  // Eigenvalue bifurcation and overlap coalescence across the drive ratio.
  const auto ratios = ratio_grid(ctx, 57);
  const State rho0 = basis_density(0);
  const State rho2 = basis_density(2);
  const int n = static_cast<int>(ratios.size());
  std::vector<qme_lep_row> rows0(n), rows2(n);
  check(qme_lep_scan(&ctx.cfg.params, ratios.data(), n, rho0.data(),
                     rows0.data()),
        "scan");
  check(qme_lep_scan(&ctx.cfg.params, ratios.data(), n, rho2.data(),
                     rows2.data()),
        "scan");

  Table eig("fig3_eigenvalues", ctx.cfg.echo(),
            {"ratio", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2",
             "condition", "flagged"});
  Table ove("fig3_overlaps", ctx.cfg.echo(),
            {"ratio", "c1_abs_zero", "c2_abs_zero", "c1_abs_two",
             "c2_abs_two"});
  for (int k = 0; k < n; ++k) {
    eig.add_row({rows0[k].ratio, rows0[k].lambda1_re, rows0[k].lambda1_im,
                 rows0[k].lambda2_re, rows0[k].lambda2_im, rows0[k].condition,
                 static_cast<double>(rows0[k].flagged)});
    ove.add_row({rows0[k].ratio, std::hypot(rows0[k].c1_re, rows0[k].c1_im),
                 std::hypot(rows0[k].c2_re, rows0[k].c2_im),
                 std::hypot(rows2[k].c1_re, rows2[k].c1_im),
                 std::hypot(rows2[k].c2_re, rows2[k].c2_im)});
  }
  write_file_atomic(path_in(ctx, "fig3/eigenvalues.csv"), eig.str());
  note_written(path_in(ctx, "fig3/eigenvalues.csv"));
  add_series(manifest, "eigenvalues.csv",
             "slowest eigenvalue pair against the drive ratio (bifurcation "
             "at the exceptional point)");
  write_file_atomic(path_in(ctx, "fig3/overlaps.csv"), ove.str());
  note_written(path_in(ctx, "fig3/overlaps.csv"));
  add_series(manifest, "overlaps.csv",
             "normalized |c_1|, |c_2| of |0><0| and |2><2| against the "
             "drive ratio; the curves coalesce at the exceptional point");

  // Distance and overlap time series at representative ratios.
  for (const double ratio : {0.04, 0.16, 0.25}) {
    qme_params params = ctx.cfg.params;
    params.omega2_ratio = ratio;
    Spectral dec(params);
    double tau1 = 0;
    check(qme_spectral_info(dec.handle, nullptr, &tau1, nullptr, nullptr,
                            nullptr),
          "spectral info");
    CommandContext local = ctx;
    local.cfg.params = params;
    const auto grid = time_grid(local, tau1);

    Table dist("fig3_distance", ctx.cfg.echo(),
               {"t", "d_zero", "d_two", "d_sme"});
    dist.comment("omega2_ratio: " + format_g17(ratio));
    distance_series(ctx, params, QME_DISTANCE_TRACE_NORM, grid, dist);
    const std::string dfile = "fig3/distance_r" + ratio_tag(ratio) + ".csv";
    write_file_atomic(path_in(ctx, dfile), dist.str());
    note_written(path_in(ctx, dfile));
    add_series(manifest, "distance_r" + ratio_tag(ratio) + ".csv",
               "distance relaxation at omega2_ratio = " + format_g17(ratio));

    Table cser("fig3_coefficients", ctx.cfg.echo(),
               {"t", "c1_abs_zero", "c1_abs_two", "c2_abs_sme"});
    cser.comment("omega2_ratio: " + format_g17(ratio));
    const std::array<State, 3> starts = {
        basis_density(0), basis_density(2),
        amps_to_density(sme_amplitudes(params))};
    std::array<EvolveData, 3> data;
    for (int s = 0; s < 3; ++s) {
      data[s] = evolve_both(params, dec, starts[s], grid, false);
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      std::vector<double> row = {grid[k]};
      for (int s = 0; s < 3; ++s) {
        std::array<double, 9> cre{}, cim{};
        check(qme_spectral_overlaps(dec.handle, data[s].states[k].data(),
                                    cre.data(), cim.data()),
              "overlaps");
        const int mode = s == 2 ? 2 : 1;
        row.push_back(std::hypot(cre[mode], cim[mode]));
      }
      cser.add_row(row);
    }
    const std::string cfile =
        "fig3/coefficients_r" + ratio_tag(ratio) + ".csv";
    write_file_atomic(path_in(ctx, cfile), cser.str());
    note_written(path_in(ctx, cfile));
    add_series(manifest, "coefficients_r" + ratio_tag(ratio) + ".csv",
               "|c_1(t)| of |0>, |2> and |c_2(t)| of the engineered state "
               "at omega2_ratio = " + format_g17(ratio));
  }
}

void figure_s2(const CommandContext& ctx, json& manifest) {
  Spectral dec(ctx.cfg.params);
  double tau1 = 0;
  check(qme_spectral_info(dec.handle, nullptr, &tau1, nullptr, nullptr,
                          nullptr),
        "spectral info");
  const auto grid = time_grid(ctx, tau1);

  const std::array<std::pair<std::string, State>, 3> starts = {
      std::pair{std::string("zero"), basis_density(0)},
      std::pair{std::string("two"), basis_density(2)},
      std::pair{std::string("sme"),
                amps_to_density(sme_amplitudes(ctx.cfg.params))}};

  for (const auto& [label, rho0] : starts) {
    const auto data = evolve_both(ctx.cfg.params, dec, rho0, grid, false);
    // Rate equations start from the diagonal of the same state.
    std::array<double, 3> pops0 = {rho0[0], rho0[8], rho0[16]};
    const double sum = pops0[0] + pops0[1] + pops0[2];
    for (double& v : pops0) v /= sum;
    std::vector<double> rate(grid.size() * 3);
    check(qme_rate_evolve(&ctx.cfg.params, pops0.data(), grid.data(),
                          static_cast<int>(grid.size()), rate.data()),
          "rate evolution");

    Table table("s2_populations", ctx.cfg.echo(),
                {"t", "lindblad_pop0", "lindblad_pop1", "lindblad_pop2",
                 "rate_pop0", "rate_pop1", "rate_pop2"});
    table.comment("initial_state: " + label);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const State& s = data.states[k];
      table.add_row({grid[k], s[0], s[8], s[16], rate[3 * k], rate[3 * k + 1],
                     rate[3 * k + 2]});
    }
    const std::string file = "s2/populations_" + label + ".csv";
    write_file_atomic(path_in(ctx, file), table.str());
    note_written(path_in(ctx, file));
    add_series(manifest, "populations_" + label + ".csv",
               "level populations from the full master equation and from "
               "the classical rate equations, initial state " + label);
  }
}

void figure_s3(const CommandContext& ctx, json& manifest) {
  for (const double ratio : {0.04, 0.1, 0.16, 0.18, 0.25}) {
    qme_params params = ctx.cfg.params;
    params.omega2_ratio = ratio;
    Spectral dec(params);
    double tau1 = 0;
    check(qme_spectral_info(dec.handle, nullptr, &tau1, nullptr, nullptr,
                            nullptr),
          "spectral info");
    CommandContext local = ctx;
    local.cfg.params = params;
    const auto grid = time_grid(local, tau1);

    Table dist("s3_distance", ctx.cfg.echo(),
               {"t", "d_zero", "d_two", "d_sme"});
    dist.comment("omega2_ratio: " + format_g17(ratio));
    distance_series(ctx, params, QME_DISTANCE_TRACE_NORM, grid, dist);
    const std::string file = "s3/distance_r" + ratio_tag(ratio) + ".csv";
    write_file_atomic(path_in(ctx, file), dist.str());
    note_written(path_in(ctx, file));
    add_series(manifest, "distance_r" + ratio_tag(ratio) + ".csv",
               "distance relaxation at omega2_ratio = " + format_g17(ratio));
  }
}

void figure_s4(const CommandContext& ctx, json& manifest) {
  for (const double ratio : {0.04, 0.16, 0.25}) {
    qme_params params = ctx.cfg.params;
    params.omega2_ratio = ratio;
    Spectral dec(params);
    double tau1 = 0;
    check(qme_spectral_info(dec.handle, nullptr, &tau1, nullptr, nullptr,
                            nullptr),
          "spectral info");
    CommandContext local = ctx;
    local.cfg.params = params;
    const auto grid = time_grid(local, tau1);

    Table dist("s4_bures", ctx.cfg.echo(),
               {"t", "bures_zero", "bures_two", "bures_sme"});
    dist.comment("omega2_ratio: " + format_g17(ratio));
    distance_series(ctx, params, QME_DISTANCE_BURES, grid, dist);
    const std::string file = "s4/bures_r" + ratio_tag(ratio) + ".csv";
    write_file_atomic(path_in(ctx, file), dist.str());
    note_written(path_in(ctx, file));
    add_series(manifest, "bures_r" + ratio_tag(ratio) + ".csv",
               "Bures distance relaxation at omega2_ratio = " +
                   format_g17(ratio));
  }
}

}  // namespace

void cmd_figure(const CommandContext& ctx, const std::string& name) {
  json manifest = manifest_base(ctx, name);
  if (name == "fig1e") {
    figure_fig1e(ctx, manifest);
  } else if (name == "fig1f") {
    figure_distance_time(ctx, "fig1f", false, manifest);
  } else if (name == "fig1g") {
    figure_distance_time(ctx, "fig1g", true, manifest);
  } else if (name == "fig2") {
    figure_fig2(ctx, manifest);
  } else if (name == "fig3") {
    figure_fig3(ctx, manifest);
  } else if (name == "s2") {
    figure_s2(ctx, manifest);
  } else if (name == "s3") {
    figure_s3(ctx, manifest);
  } else if (name == "s4") {
    figure_s4(ctx, manifest);
  } else {
    throw ConfigError("unknown figure '" + name +
                      "' (expected fig1e, fig1f, fig1g, fig2, fig3, s2, s3, "
                      "s4)");
  }
  write_manifest(ctx, name, manifest);
}

}  // namespace qme_cli
