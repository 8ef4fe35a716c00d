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

#include "config.hpp"

namespace qme_cli {

struct CommandContext {
  RunConfig cfg;
  std::string out_dir = "qme_out";
};

void cmd_spectrum(const CommandContext& ctx);
void cmd_evolve(const CommandContext& ctx);
void cmd_lep_scan(const CommandContext& ctx);
void cmd_lep_locate(const CommandContext& ctx);
void cmd_compile(const CommandContext& ctx, const std::string& state_literal,
                 bool verify);
void cmd_tomo_simulate(const CommandContext& ctx);
void cmd_tomo_reconstruct(const CommandContext& ctx,
                          const std::string& record_path);
void cmd_figure(const CommandContext& ctx, const std::string& name);

}  // namespace qme_cli
