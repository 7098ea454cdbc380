// Copyright 2026 The parrep Authors.
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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "parrep/game_io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kData = PARREP_DATA_DIR;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = parrep::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "parrep_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("value command") {
  auto r = run({"value", kData + "/chsh.json"});
  CHECK(r.code == 0);
  CHECK(r.out.find("value 0.75\n") != std::string::npos);
  auto r2 = run({"value", kData + "/chsh.json", "--repeat", "2"});
  CHECK(r2.code == 0);
  CHECK(r2.out.find("value 0.625\n") != std::string::npos);
  auto missing = run({"value", kData + "/nope.json"});
  CHECK(missing.code == 1);
  CHECK(missing.err.find("nope.json") != std::string::npos);
}

TEST_CASE("value command writes a csv with the run header") {
  auto path = scratch("value.csv");
  auto r = run({"value", kData + "/chsh.json", "--restrict", "const:1=0", "--out",
                path.string(), "--seed", "9"});
  CHECK(r.code == 0);
  auto csv = slurp(path);
  CHECK(csv.rfind("# parrep value\n# seed=9 tol=1e-09 log_base=2", 0) == 0);
  CHECK(csv.find("chsh.json,1,const:1=0,0.75,1,16,4,0.75,1\n") != std::string::npos);
}

TEST_CASE("caps map to exit code 2") {
  auto r = run({"value", kData + "/chsh.json", "--repeat", "2", "--max-strategy-profiles", "10"});
  CHECK(r.code == 2);
  auto t = run({"value", kData + "/chsh.json", "--repeat", "3", "--max-joint-tuples", "63"});
  CHECK(t.code == 2);
}

TEST_CASE("bad input maps to exit code 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"value", kData + "/chsh.json", "--restrict", "bogus"}).code == 1);
  CHECK(run({"value", kData + "/uniform4.json"}).code == 1);  // no answers field
  CHECK(run({"--tol", "0", "entropy", kData + "/uniform4.json"}).code == 1);
}

TEST_CASE("anchor command") {
  auto path = scratch("anchored.json");
  auto r = run({"anchor", kData + "/chsh.json", "--alpha", "0.5", "--out", path.string()});
  CHECK(r.code == 0);
  auto g = parrep::load_game(path);
  CHECK(parrep::validate_game(g).empty());
  auto v = run({"value", path.string()});
  CHECK(v.out.find("value 0.9375\n") != std::string::npos);
  CHECK(run({"anchor", kData + "/chsh.json", "--alpha", "1.0", "--out", path.string()}).code == 1);
  CHECK(run({"anchor", kData + "/chsh.json", "--alpha", "0", "--out", path.string()}).code == 1);
}

TEST_CASE("check command") {
  auto bad = run({"check", "--bound", "nope"});
  CHECK(bad.code == 1);
  CHECK(bad.err.find("system1") != std::string::npos);
  CHECK(bad.err.find("main_t1") != std::string::npos);

  auto empty = run({"check", "--bound", "lm_t2", "--trials", "0"});
  CHECK(empty.code == 0);
  std::istringstream lines(empty.out);
  std::string line, last;
  int data_lines = 0;
  while (std::getline(lines, line)) {
    if (!line.empty() && line[0] != '#') {
      ++data_lines;
      last = line;
    }
  }
  CHECK(data_lines == 1);
  CHECK(last.rfind("name,lhs,rhs,satisfied,slack,premise_ok,extended_domain_flag,seed,trial", 0) == 0);

  auto rows = run({"check", "--bound", "lm_t2", "--trials", "300", "--seed", "1"});
  CHECK(rows.code == 0);
  CHECK(rows.out.find("violations=0") != std::string::npos);
  std::size_t n = 0;
  for (char c : rows.out) n += c == '\n';
  CHECK(n > 300);

  auto single = run({"check", "--bound", "system1", "--mu", kData + "/mu_diag.json",
                     "--params", kData + "/params_system1.json"});
  CHECK(single.code == 0);
  CHECK(single.out.find("\nsystem1,0.5625,") != std::string::npos);
  CHECK(run({"check", "--bound", "main_t1", "--params", kData + "/params_system1.json",
             "--mu", kData + "/mu_diag.json"}).code == 1);
}

TEST_CASE("decay-curve command") {
  auto none = run({"decay-curve", kData + "/chsh.json", "--alpha", "0.5", "--n-max", "0"});
  CHECK(none.code == 0);
  CHECK(none.out.find("\nn,omega_exact,exact,bound_multiplayer,bound_kplayer,main_t1_rhs\n") !=
        std::string::npos);
  CHECK(none.out.find("\n1,") == std::string::npos);
  auto two = run({"decay-curve", kData + "/chsh.json", "--alpha", "0.5", "--n-max", "2"});
  CHECK(two.code == 0);
  CHECK(two.out.find("\n1,0.9375,1,") != std::string::npos);
  CHECK(two.out.find("\n2,0.8828125,1,") != std::string::npos);
  auto capped = run({"decay-curve", kData + "/chsh.json", "--alpha", "0.5", "--n-max", "2",
                     "--max-strategy-profiles", "100"});
  CHECK(capped.code == 0);
  CHECK(capped.out.find("\n2,0.8828125,1,") == std::string::npos);
  CHECK(capped.out.find(",0,") != std::string::npos);
}

TEST_CASE("entropy command") {
  auto u = run({"entropy", kData + "/uniform4.json"});
  CHECK(u.out == "shannon_bits=2\npaper_signed=-2\n");
  auto s = run({"entropy", kData + "/skewed2.json"});
  CHECK(s.out.find("shannon_bits=0.8112781") != std::string::npos);
  CHECK(s.out.find("paper_signed=-0.8112781") != std::string::npos);
  auto g = run({"entropy", kData + "/chsh.json"});
  CHECK(g.out == "shannon_bits=2\npaper_signed=-2\n");
  auto point = scratch("point.json");
  std::ofstream(point) << R"({"n_players": 1, "questions": [["a", "b"]],
    "pi": [{"q": ["a"], "p": "1"}]})";
  CHECK(run({"entropy", point.string()}).out == "shannon_bits=0\npaper_signed=0\n");
}

TEST_CASE("config file and output directory") {
  auto cfg = scratch("config.json");
  auto dir = scratch("outdir");
  fs::remove_all(dir);
  std::ofstream(cfg) << R"({"seed": 42, "tol": 1e-8, "output_dir": ")" << dir.string()
                     << R"(", "caps": {"max_strategy_profiles": 1000}})";
  auto r = run({"--config", cfg.string(), "check", "--bound", "b2", "--trials", "3"});
  CHECK(r.code == 0);
  auto csv = slurp(dir / "findings_b2.csv");
  CHECK(csv.find("# seed=42 tol=1e-08 log_base=2 max_joint_tuples=1000000 "
                 "max_strategy_profiles=1000\n") != std::string::npos);
  // Command-line flags win over the file.
  auto r2 = run({"--config", cfg.string(), "--seed", "7", "check", "--bound", "b2",
                 "--trials", "1"});
  CHECK(slurp(dir / "findings_b2.csv").find("# seed=7 ") != std::string::npos);
}

TEST_CASE("outputs are byte-identical across thread counts") {
  std::vector<std::vector<std::string>> cmds{
      {"check", "--bound", "system1", "--trials", "200", "--seed", "4"},
      {"check", "--bound", "main_t1", "--trials", "100", "--seed", "4"},
      {"decay-curve", kData + "/chsh.json", "--alpha", "0.25", "--n-max", "2"},
      {"value", kData + "/chsh.json", "--repeat", "2"},
  };
  for (const auto& c : cmds) {
    setenv("PARREP_THREADS", "1", 1);
    auto a = run(c);
    auto b = run(c);
    setenv("PARREP_THREADS", "6", 1);
    auto d = run(c);
    CHECK(a.out == b.out);
    CHECK(a.out == d.out);
  }
  unsetenv("PARREP_THREADS");
}

TEST_CASE("installed executable reports exit codes") {
  const std::string exe = PARREP_CLI_EXE;
  CHECK(std::system((exe + " value " + kData + "/chsh.json > /dev/null").c_str()) == 0);
  int code = std::system((exe + " value /nonexistent.json 2> /dev/null").c_str());
  CHECK(WEXITSTATUS(code) == 1);
}
