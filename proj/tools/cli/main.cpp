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

// Command line front end. Exit codes: 0 success, 2 configuration error,
// 3 numerical-flag condition (defective decomposition and kin).

#include <CLI11.hpp>
#include <iostream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "qme.h"

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_dir = "qme_out";
  long long seed = -1;  // -1: keep the config value
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "flat key = value run file");
  cmd->add_option("--seed", opts.seed, "override the configured seed");
  cmd->add_option("--out", opts.out_dir, "output directory")
      ->capture_default_str();
}

qme_cli::CommandContext make_context(const CommonOpts& opts) {
  qme_cli::CommandContext ctx;
  ctx.cfg = opts.config_path.empty() ? qme_cli::default_config()
                                     : qme_cli::load_config(opts.config_path);
  if (opts.seed >= 0) ctx.cfg.seed = static_cast<std::uint64_t>(opts.seed);
  ctx.out_dir = opts.out_dir;
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relaxation toolkit for a driven-dissipative three-level "
               "system"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qme_version()));

  CommonOpts spectrum_opts, evolve_opts, lep_opts, compile_opts, tomo_opts,
      figure_opts;

  CLI::App* spectrum =
      app.add_subcommand("spectrum", "eigenvalues, gap, timescales");
  add_common(spectrum, spectrum_opts);

  CLI::App* evolve =
      app.add_subcommand("evolve", "relaxation trajectories per initial state");
  add_common(evolve, evolve_opts);

  CLI::App* lep = app.add_subcommand(
      "lep", "exceptional point of the slowest eigenvalue pair");
  lep->require_subcommand(1);
  CLI::App* lep_scan =
      lep->add_subcommand("scan", "spectral scan over the drive ratio");
  CLI::App* lep_locate =
      lep->add_subcommand("locate", "bisect the exceptional point");
  add_common(lep_scan, lep_opts);
  add_common(lep_locate, lep_opts);

  std::string state_literal = "sme";
  bool verify = false;
  CLI::App* compile = app.add_subcommand(
      "compile", "two-rotation preparation sequence for a pure state");
  compile
      ->add_option("--state", state_literal,
                   "'sme', 'a,b,c' or 're,im,re,im,re,im'")
      ->capture_default_str();
  compile->add_flag("--verify", verify, "recompose and check the sequence");
  add_common(compile, compile_opts);

  CLI::App* tomo = app.add_subcommand("tomo", "simulated state tomography");
  tomo->require_subcommand(1);
  CLI::App* tomo_sim = tomo->add_subcommand(
      "simulate", "sample measurement counts for the configured state");
  std::string record_path;
  CLI::App* tomo_rec = tomo->add_subcommand(
      "reconstruct", "maximum-likelihood state from a count record");
  tomo_rec->add_option("--record", record_path, "count record file")
      ->required();
  add_common(tomo_sim, tomo_opts);
  add_common(tomo_rec, tomo_opts);

  std::string figure_name;
  CLI::App* figure =
      app.add_subcommand("figure", "figure-ready data bundles");
  figure->add_option("name", figure_name,
                     "one of fig1e fig1f fig1g fig2 fig3 s2 s3 s4")
      ->required();
  add_common(figure, figure_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (spectrum->parsed()) {
      qme_cli::cmd_spectrum(make_context(spectrum_opts));
    } else if (evolve->parsed()) {
      qme_cli::cmd_evolve(make_context(evolve_opts));
    } else if (lep->parsed()) {
      if (lep_scan->parsed()) {
        qme_cli::cmd_lep_scan(make_context(lep_opts));
      } else {
        qme_cli::cmd_lep_locate(make_context(lep_opts));
      }
    } else if (compile->parsed()) {
      qme_cli::cmd_compile(make_context(compile_opts), state_literal, verify);
    } else if (tomo->parsed()) {
      if (tomo_sim->parsed()) {
        qme_cli::cmd_tomo_simulate(make_context(tomo_opts));
      } else {
        qme_cli::cmd_tomo_reconstruct(make_context(tomo_opts), record_path);
      }
    } else if (figure->parsed()) {
      qme_cli::cmd_figure(make_context(figure_opts), figure_name);
    }
  } catch (const qme_cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const qme_cli::NumericalError& e) {
    std::cerr << "numerical condition: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
