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

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qme.h"

namespace qme_cli {

// A problem with user input (config file, flags, unreadable paths): exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numerical condition reported by the library (defective decomposition,
// degenerate steady state, out-of-regime request): exit 3.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class InitialState { Zero, Two, Sme, Explicit };

// Flat-key run configuration with resolved defaults.
struct RunConfig {
  double omega1_khz = 0.0;  // 0 = not given; enables kHz echo columns
  qme_params params{1.0, 0.06, 2.0, 0.0015, 0.0, 0.0, QME_CONVENTION_MAIN};

  double t_min = 0.01;
  double t_max = 0.0;  // 0 = auto (10 * tau1)
  int points = 200;
  bool log_spacing = true;

  std::vector<InitialState> initial_states = {InitialState::Zero};
  std::vector<double> amplitudes;  // 6 reals when Explicit is requested

  std::uint64_t seed = 12345;
  long long shots = 10000;
  int resamples = 200;
  int detection_model = QME_DETECTION_IDEAL3;

  double ratio_min = 0.02;
  double ratio_max = 0.30;
  int ratio_points = 0;  // 0 = command-specific default
  std::vector<double> ratios;  // explicit list overrides min/max/points

  double bracket_lo = 0.16;
  double bracket_hi = 0.18;
  double tomo_time = 0.0;

  // One-line echo of every resolved key, embedded in output headers.
  std::string echo() const;
};

// Parses the flat key = value file; unknown keys, bad values and duplicate
// definitions raise ConfigError with a file:line diagnostic.
RunConfig load_config(const std::string& path);

RunConfig default_config();

const char* initial_state_name(InitialState s);

}  // namespace qme_cli
