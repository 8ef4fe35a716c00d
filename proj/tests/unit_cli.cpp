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

// Drives the installed command line binary end to end.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() /
          ("qme_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const {
    return (dir / name).string();
  }
};

int run(const std::string& args, const Sandbox& box,
        const std::string& log_name = "log.txt") {
  const std::string cmd = std::string(QME_CLI_PATH) + " " + args + " > " +
                          box.path(log_name) + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

}  // namespace

TEST_CASE("spectrum: files, header echo, zero mode, kHz echo") {
  Sandbox box;
  write(box.path("run.cfg"),
        "omega1_khz = 20\n"
        "omega2_ratio = 0.06\n"
        "kappa1_ratio = 2\n"
        "kappa2_ratio = 0.0015\n");
  const int rc = run("spectrum --config " + box.path("run.cfg") + " --out " +
                         box.path("out"),
                     box);
  CHECK(rc == 0);

  const std::string csv = slurp(box.path("out/spectrum.csv"));
  CHECK(csv.find("# qme spectrum v1") == 0);
  CHECK(csv.find("omega2_ratio=0.06") != std::string::npos);
  CHECK(csv.find("re_lambda_khz") != std::string::npos);
  // First data row is the zero mode.
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] == '0' && line[1] == ',') break;
  }
  double idx, re, im;
  char comma;
  std::istringstream row(line);
  row >> idx >> comma >> re >> comma >> im;
  CHECK(std::abs(re) < 1e-10);
  CHECK(std::abs(im) < 1e-10);

  const std::string txt = slurp(box.path("out/spectrum.txt"));
  CHECK(txt.find("omega1 = 20") != std::string::npos);
  CHECK(txt.find("tau1 = ") != std::string::npos);

  // With a ratio list the command also emits the sweep table, whose slow
  // pair is split below the exceptional point and conjugate above.
  write(box.path("sweep.cfg"), "ratios = 0.04,0.16,0.25\n");
  CHECK(run("spectrum --config " + box.path("sweep.cfg") + " --out " +
                box.path("out2"),
            box) == 0);
  const std::string sweep = slurp(box.path("out2/spectrum_sweep.csv"));
  std::istringstream sweep_lines(sweep);
  std::vector<std::vector<double>> rows;
  std::string sline;
  while (std::getline(sweep_lines, sline)) {
    if (sline.empty() || sline[0] == '#' || sline[0] == 'r') continue;
    std::vector<double> vals;
    std::stringstream ss(sline);
    std::string cell;
    while (std::getline(ss, cell, ',')) vals.push_back(std::stod(cell));
    rows.push_back(vals);
  }
  REQUIRE(rows.size() == 3);
  CHECK(std::abs(rows[0][2]) < 1e-10);             // Im lambda1 at 0.04
  CHECK(rows[0][1] != doctest::Approx(rows[0][3]));  // Re parts split
  CHECK(std::abs(rows[2][2]) > 1e-10);             // complex above
  CHECK(rows[2][1] == doctest::Approx(rows[2][3]));  // equal Re parts
}

TEST_CASE("config errors exit with code 2 and a diagnostic") {
  Sandbox box;
  write(box.path("bad.cfg"), "omega2_ratio = 0.06\nbogus_key = 3\n");
  const int rc = run("spectrum --config " + box.path("bad.cfg"), box);
  CHECK(rc == 2);
  CHECK(slurp(box.path("log.txt")).find("unknown key 'bogus_key'") !=
        std::string::npos);

  write(box.path("bad2.cfg"), "kappa1_ratio = -2\n");
  CHECK(run("spectrum --config " + box.path("bad2.cfg"), box) == 2);

  write(box.path("bad3.cfg"), "spacing = cubic\n");
  const int rc3 = run("evolve --config " + box.path("bad3.cfg"), box);
  CHECK(rc3 == 2);
  CHECK(slurp(box.path("log.txt")).find("bad3.cfg:1") != std::string::npos);
}

TEST_CASE("numerical-flag conditions exit with code 3") {
  Sandbox box;
  // A dark level makes the steady state degenerate.
  write(box.path("dark.cfg"), "omega2_ratio = 0\nkappa2_ratio = 0\n");
  const int rc = run("evolve --config " + box.path("dark.cfg") + " --out " +
                         box.path("out"),
                     box);
  CHECK(rc == 3);
  CHECK(slurp(box.path("log.txt")).find("numerical condition") !=
        std::string::npos);
}

TEST_CASE("evolve: per-state files with a t = 0 row equal to the start") {
  Sandbox box;
  write(box.path("run.cfg"),
        "initial_states = zero,sme\npoints = 24\nt_max = 100\n");
  const int rc = run("evolve --config " + box.path("run.cfg") + " --out " +
                         box.path("out"),
                     box);
  CHECK(rc == 0);
  CHECK(fs::exists(box.path("out/evolve_zero.csv")));
  CHECK(fs::exists(box.path("out/evolve_sme.csv")));

  // t = 0 row of the zero start: rho_00 = 1 and c_0 magnitude 1.
  std::istringstream lines(slurp(box.path("out/evolve_zero.csv")));
  std::string line, first_data;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 't') continue;
    first_data = line;
    break;
  }
  std::vector<double> values;
  std::stringstream row(first_data);
  std::string cell;
  while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
  REQUIRE(values.size() >= 45);
  CHECK(values[0] == 0.0);                   // t
  CHECK(values[1] == doctest::Approx(1.0));  // rho_re_00
  CHECK(values[19] == doctest::Approx(1.0)); // pop0
  CHECK(values[22] == doctest::Approx(1.0)); // |c_0|
  // Dual-propagation column stays within the contract.
  CHECK(values.back() < 1e-7);
}

TEST_CASE("lep locate and scan") {
  Sandbox box;
  const int rc = run("lep locate --out " + box.path("out"), box);
  CHECK(rc == 0);
  const std::string txt = slurp(box.path("out/lep_locate.txt"));
  const auto pos = txt.find("lep_ratio = ");
  REQUIRE(pos != std::string::npos);
  const double ratio = std::stod(txt.substr(pos + 12));
  CHECK(ratio > 0.16);
  CHECK(ratio < 0.18);

  write(box.path("scan.cfg"), "ratios = 0.04,0.16,0.25\n");
  CHECK(run("lep scan --config " + box.path("scan.cfg") + " --out " +
                box.path("out"),
            box) == 0);
  const std::string csv = slurp(box.path("out/lep_scan.csv"));
  CHECK(csv.find("c1_abs_zero") != std::string::npos);
  int data_rows = 0;
  std::istringstream lines(csv);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#' && line[0] != 'r') ++data_rows;
  }
  CHECK(data_rows == 3);
}

TEST_CASE("compile: identity sequence for |0> and verified sme sequence") {
  Sandbox box;
  CHECK(run("compile --state 1,0,0 --verify --out " + box.path("out"), box) ==
        0);
  const std::string gates = slurp(box.path("out/gates.txt"));
  CHECK(gates.find("qme-gates v1") != std::string::npos);
  CHECK(gates.find("gate R01 theta 0 phase") != std::string::npos);
  CHECK(gates.find("gate R02 theta 0 phase") != std::string::npos);

  CHECK(run("compile --state sme --verify --out " + box.path("out2"), box) ==
        0);
  CHECK(slurp(box.path("log.txt")).find("(ok)") != std::string::npos);

  CHECK(run("compile --state 1,junk,0 --out " + box.path("out3"), box) == 2);
}

TEST_CASE("tomo simulate and reconstruct round trip") {
  Sandbox box;
  write(box.path("run.cfg"), "shots = 800\ninitial_state = zero\n");
  CHECK(run("tomo simulate --config " + box.path("run.cfg") + " --out " +
                box.path("out"),
            box) == 0);
  const std::string record = slurp(box.path("out/tomo_record.txt"));
  CHECK(record.find("# config:") != std::string::npos);
  CHECK(record.find("qme-tomo v1") != std::string::npos);
  CHECK(record.find("shots 800") != std::string::npos);
  CHECK(record.find("0+i2 ") != std::string::npos);

  CHECK(run("tomo reconstruct --record " + box.path("out/tomo_record.txt") +
                " --out " + box.path("out"),
            box) == 0);
  const std::string state = slurp(box.path("out/tomo_state.csv"));
  CHECK(state.find("row,col,re,im") != std::string::npos);

  // Reconstructed rho_00 should dominate for a |0> record.
  std::istringstream lines(state);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind("0,0,", 0) == 0) break;
  }
  const double rho00 = std::stod(line.substr(4));
  CHECK(rho00 > 0.9);
}

TEST_CASE("figure bundles carry manifest plus data") {
  Sandbox box;
  write(box.path("run.cfg"), "points = 30\n");
  CHECK(run("figure fig1e --config " + box.path("run.cfg") + " --out " +
                box.path("out"),
            box) == 0);
  CHECK(fs::exists(box.path("out/fig1e/overlap_vs_angle.csv")));
  const std::string manifest = slurp(box.path("out/fig1e/manifest.json"));
  CHECK(manifest.find("\"figure\": \"fig1e\"") != std::string::npos);
  CHECK(manifest.find("overlap_vs_angle.csv") != std::string::npos);
  CHECK(manifest.find("mixing_angle") != std::string::npos);

  // The overlap curve crosses zero: its minimum is tiny, edges are not.
  std::istringstream lines(slurp(box.path("out/fig1e/overlap_vs_angle.csv")));
  std::string line;
  double min_c1 = 1e9, max_c1 = 0;
  while (std::getline(lines, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 's') continue;
    const auto comma = line.find(',');
    const double c1 = std::stod(line.substr(comma + 1));
    min_c1 = std::min(min_c1, c1);
    max_c1 = std::max(max_c1, c1);
  }
  // The crossing falls between grid points; the sampled minimum is bounded
  // by the local slope times half the step of the 181-point sweep.
  CHECK(min_c1 < 0.01);
  CHECK(max_c1 > 0.1);

  CHECK(run("figure nosuch --out " + box.path("out"), box) == 2);
}

TEST_CASE("unknown subcommand and missing requireds exit nonzero") {
  Sandbox box;
  CHECK(run("frobnicate", box) != 0);
  CHECK(run("tomo reconstruct", box) != 0);  // --record is required
}
