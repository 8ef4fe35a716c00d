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

#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace qme_cli {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a number: '" + v + "'");
  }
}

long long parse_int(const std::string& v, const std::string& where) {
  try {
    std::size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError(where + ": not an integer: '" + v + "'");
  }
}

std::string format_double(double v) {
  // Shortest representation that parses back to the same double.
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace

const char* initial_state_name(InitialState s) {
  switch (s) {
    case InitialState::Zero:
      return "zero";
    case InitialState::Two:
      return "two";
    case InitialState::Sme:
      return "sme";
    case InitialState::Explicit:
      return "explicit";
  }
  return "?";
}

std::string RunConfig::echo() const {
  std::ostringstream out;
  out << "omega1_khz=" << format_double(omega1_khz)
      << " omega2_ratio=" << format_double(params.omega2_ratio)
      << " kappa1_ratio=" << format_double(params.kappa1_ratio)
      << " kappa2_ratio=" << format_double(params.kappa2_ratio)
      << " phi=" << format_double(params.phi)
      << " phi_prime=" << format_double(params.phi_prime) << " convention="
      << (params.convention == QME_CONVENTION_FACTOR2 ? "supp_factor2"
                                                      : "main_text")
      << " t_min=" << format_double(t_min) << " t_max="
      << (t_max > 0.0 ? format_double(t_max) : std::string("auto"))
      << " points=" << points << " spacing=" << (log_spacing ? "log" : "linear")
      << " initial_states=";
  for (std::size_t i = 0; i < initial_states.size(); ++i) {
    out << (i > 0 ? "," : "") << initial_state_name(initial_states[i]);
  }
  if (!amplitudes.empty()) {
    out << " amplitudes=";
    for (std::size_t i = 0; i < amplitudes.size(); ++i) {
      out << (i > 0 ? "," : "") << format_double(amplitudes[i]);
    }
  }
  out << " seed=" << seed << " shots=" << shots << " resamples=" << resamples
      << " detection_model="
      << (detection_model == QME_DETECTION_SD2 ? "sd2" : "ideal3")
      << " ratio_min=" << format_double(ratio_min)
      << " ratio_max=" << format_double(ratio_max)
      << " ratio_points=" << ratio_points;
  if (!ratios.empty()) {
    out << " ratios=";
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      out << (i > 0 ? "," : "") << format_double(ratios[i]);
    }
  }
  out << " bracket_lo=" << format_double(bracket_lo)
      << " bracket_hi=" << format_double(bracket_hi)
      << " tomo_time=" << format_double(tomo_time);
  return out.str();
}

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file: " + path);
  }

  RunConfig cfg;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ConfigError(where + ": empty key or value");
    }
    if (!seen.insert(key).second) {
      throw ConfigError(where + ": duplicate key '" + key + "'");
    }

    if (key == "omega1_khz") {
      cfg.omega1_khz = parse_double(value, where);
      if (cfg.omega1_khz <= 0.0)
        throw ConfigError(where + ": omega1_khz must be positive");
    } else if (key == "omega2_ratio") {
      cfg.params.omega2_ratio = parse_double(value, where);
    } else if (key == "kappa1_ratio") {
      cfg.params.kappa1_ratio = parse_double(value, where);
    } else if (key == "kappa2_ratio") {
      cfg.params.kappa2_ratio = parse_double(value, where);
    } else if (key == "phi") {
      cfg.params.phi = parse_double(value, where);
    } else if (key == "phi_prime") {
      cfg.params.phi_prime = parse_double(value, where);
    } else if (key == "convention") {
      if (value == "main_text") {
        cfg.params.convention = QME_CONVENTION_MAIN;
      } else if (value == "supp_factor2") {
        cfg.params.convention = QME_CONVENTION_FACTOR2;
      } else {
        throw ConfigError(where + ": convention must be main_text or "
                                  "supp_factor2");
      }
    } else if (key == "t_min") {
      cfg.t_min = parse_double(value, where);
    } else if (key == "t_max") {
      cfg.t_max = value == "auto" ? 0.0 : parse_double(value, where);
    } else if (key == "points") {
      cfg.points = static_cast<int>(parse_int(value, where));
      if (cfg.points < 2) throw ConfigError(where + ": points must be >= 2");
    } else if (key == "spacing") {
      if (value == "log") {
        cfg.log_spacing = true;
      } else if (value == "linear") {
        cfg.log_spacing = false;
      } else {
        throw ConfigError(where + ": spacing must be log or linear");
      }
    } else if (key == "initial_state" || key == "initial_states") {
      cfg.initial_states.clear();
      for (const std::string& item : split_list(value)) {
        if (item == "zero") {
          cfg.initial_states.push_back(InitialState::Zero);
        } else if (item == "two") {
          cfg.initial_states.push_back(InitialState::Two);
        } else if (item == "sme") {
          cfg.initial_states.push_back(InitialState::Sme);
        } else if (item == "explicit") {
          cfg.initial_states.push_back(InitialState::Explicit);
        } else {
          throw ConfigError(where + ": unknown initial state '" + item + "'");
        }
      }
      if (cfg.initial_states.empty()) {
        throw ConfigError(where + ": no initial states given");
      }
    } else if (key == "amplitudes") {
      cfg.amplitudes.clear();
      for (const std::string& item : split_list(value)) {
        cfg.amplitudes.push_back(parse_double(item, where));
      }
      if (cfg.amplitudes.size() != 6) {
        throw ConfigError(where +
                          ": amplitudes needs 6 values (re,im per level)");
      }
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, where));
    } else if (key == "shots") {
      cfg.shots = parse_int(value, where);
      if (cfg.shots < 1) throw ConfigError(where + ": shots must be >= 1");
    } else if (key == "resamples") {
      cfg.resamples = static_cast<int>(parse_int(value, where));
      if (cfg.resamples < 100) {
        throw ConfigError(where + ": resamples must be >= 100");
      }
    } else if (key == "detection_model") {
      if (value == "ideal3") {
        cfg.detection_model = QME_DETECTION_IDEAL3;
      } else if (value == "sd2") {
        cfg.detection_model = QME_DETECTION_SD2;
      } else {
        throw ConfigError(where + ": detection_model must be ideal3 or sd2");
      }
    } else if (key == "ratio_min") {
      cfg.ratio_min = parse_double(value, where);
    } else if (key == "ratio_max") {
      cfg.ratio_max = parse_double(value, where);
    } else if (key == "ratio_points") {
      cfg.ratio_points = static_cast<int>(parse_int(value, where));
    } else if (key == "ratios") {
      cfg.ratios.clear();
      for (const std::string& item : split_list(value)) {
        cfg.ratios.push_back(parse_double(item, where));
      }
    } else if (key == "bracket_lo") {
      cfg.bracket_lo = parse_double(value, where);
    } else if (key == "bracket_hi") {
      cfg.bracket_hi = parse_double(value, where);
    } else if (key == "tomo_time") {
      cfg.tomo_time = parse_double(value, where);
      if (cfg.tomo_time < 0.0) {
        throw ConfigError(where + ": tomo_time must be >= 0");
      }
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }

  if (const int rc = qme_params_validate(&cfg.params); rc != QME_OK) {
    throw ConfigError(path + ": invalid model parameters: " +
                      qme_strerror(rc));
  }
  const bool wants_explicit =
      std::find(cfg.initial_states.begin(), cfg.initial_states.end(),
                InitialState::Explicit) != cfg.initial_states.end();
  if (wants_explicit && cfg.amplitudes.size() != 6) {
    throw ConfigError(path + ": initial_state=explicit requires amplitudes");
  }
  return cfg;
}

}  // namespace qme_cli
