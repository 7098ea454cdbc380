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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "grid.hpp"
#include "naive.hpp"
#include "naive_bounds.hpp"
#include "parrep/bounds.hpp"
#include "parrep/concave.hpp"
#include "parrep/numeric.hpp"
#include "parrep/search.hpp"
#include "parrep/transforms.hpp"
#include "parrep/value.hpp"

using namespace parrep;
namespace fs = std::filesystem;

namespace {

const std::string kData = PARREP_DATA_DIR;

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.fail(std::string("exception: ") + e.what());
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %s (%.1fs)%s%s\n", o.pass ? "PASS" : "FAIL", name.c_str(), secs,
              o.detail.empty() ? "" : ": ", o.detail.c_str());
  std::fflush(stdout);
}

std::string run(const std::vector<std::string>& args, int* code = nullptr) {
  std::ostringstream out, err;
  int c = cli::run_cli(args, out, err);
  if (code) *code = c;
  return out.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, sep)) out.push_back(cell);
  return out;
}

Outcome anchoring_identity() {
  Outcome o;
  SplitMix64 rng(2024);
  double worst = 0.0;
  auto check = [&](const Game& g, double alpha) {
    const double w = optimal_value(g).value;
    const double wa = optimal_value(anchor(g, alpha)).value;
    const double expect =
        1.0 - std::pow(1.0 - alpha, double(g.n_players())) * (1.0 - w);
    worst = std::max(worst, std::fabs(wa - expect));
    if (std::fabs(wa - expect) > 1e-9) o.fail("mismatch " + format_double(wa));
  };
  for (int t = 0; t < 20; ++t) {
    Game g = fixtures::random_game(rng, 2, 2, 2);
    for (double alpha : {0.25, 0.5}) check(g, alpha);
  }
  for (int t = 0; t < 10; ++t) {
    Game g = fixtures::random_game(rng, 3, 2, 2);
    for (double alpha : {0.25, 0.5}) check(g, alpha);
  }
  if (o.pass) o.detail = "30 games, max error " + format_double(worst);
  return o;
}

Outcome repetition_values() {
  Outcome o;
  const Game g = fixtures::chsh();
  const double v1 = optimal_value(g).value;
  const double v2 = repeated_value(g, 2).value;
  if (std::fabs(v1 - 0.75) > 1e-12) o.fail("omega(CHSH) = " + format_double(v1));
  if (std::fabs(v2 - 0.625) > 1e-12) o.fail("omega(CHSH^2) = " + format_double(v2));
  SplitMix64 rng(77);
  for (int t = 0; t < 50; ++t) {
    Game b = fixtures::random_game(rng, 2, 2, 2);
    const double w1 = optimal_value(b).value;
    const double w2 = repeated_value(b, 2).value;
    const double w3 = repeated_value(b, 3).value;
    if (w2 < w1 * w1 - 1e-12) o.fail("(1,1) fails on game " + std::to_string(t));
    if (w3 < w1 * w2 - 1e-12) o.fail("(1,2) fails on game " + std::to_string(t));
  }
  if (o.pass) o.detail = "0.75, 0.625; 50 games for (1,1) and (1,2)";
  return o;
}

Outcome concave_suite() {
  Outcome o;
  std::size_t checks = 0;
  for (unsigned q : {1u, 2u, 3u, 5u}) {
    auto f = ConcaveFn::power(q);
    auto c = grid::concavity(f, 1u << 20, 0, 1);
    auto m = grid::monotonicity(f);
    checks += c.checks + m.checks;
    if (c.failures || m.failures) o.fail(f.name());
  }
  SplitMix64 rng(5);
  for (std::size_t N : {2, 3, 4}) {
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> qv(N);
      for (auto& v : qv) v = 3.0 * (1.0 - rng.uniform());
      auto f = ConcaveFn::mult(qv);
      auto c = grid::concavity(f, 1000, 200000, rng.next());
      auto m = grid::monotonicity(f);
      auto p = grid::pullback_round_trip(f);
      checks += c.checks + m.checks + p.checks;
      if (c.failures || m.failures || p.failures) o.fail(f.name());
    }
  }
  if (o.pass) o.detail = std::to_string(checks) + " checks, zero failures";
  return o;
}

Outcome oracle_equivalence() {
  Outcome o;
  std::size_t compared = 0;
  for (const auto& name : bound_kind_names()) {
    const BoundKind kind = parse_bound_kind(name);
    SamplerConfig cfg = SamplerConfig::defaults_for(kind);
    cfg.max_players = std::min<std::size_t>(cfg.max_players, 3);
    cfg.max_alphabet = std::min<std::size_t>(cfg.max_alphabet, 3);
    for (std::uint64_t t = 0; t < 1000; ++t) {
      Instance in = sample_instance(kind, cfg, 31337, t);
      BoundReport r = run_checker(in, cfg.tol);
      naive::Sides s = naive::recompute(in, cfg.tol);
      ++compared;
      if (!naive::close(r.lhs, s.lhs, 1e-12) || !naive::close(r.rhs, s.rhs, 1e-12) ||
          r.premise_ok != s.premise) {
        o.fail(name + " trial " + std::to_string(t));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(compared) + " instances, zero mismatches";
  return o;
}

Outcome lm_t2() {
  Outcome o;
  SamplerConfig cfg = SamplerConfig::defaults_for(BoundKind::kLmT2);
  cfg.require_premise = true;
  auto t = search_counterexamples(BoundKind::kLmT2, cfg, 1, 10000);
  if (t.premise_count != 10000) {
    o.fail("only " + std::to_string(t.premise_count) + " premise-satisfying instances");
  }
  if (t.violation_count != 0) {
    o.fail(std::to_string(t.violation_count) + " violations");
  }
  if (o.pass) o.detail = "10000 premise-satisfying instances, 0 violations";
  return o;
}

Outcome amp_constant_check() {
  Outcome o;
  if (amp_constant(2, 1) != 6) o.fail("C(2,1)");
  if (amp_constant(3, 2) != 21) o.fail("C(3,2)");
  for (unsigned N = 1; N <= 20; ++N) {
    if (amp_constant(N, 0) != N) o.fail("C(N,0) for N=" + std::to_string(N));
    for (unsigned n = 1; n <= 20; ++n) {
      if (amp_constant(N, n) - amp_constant(N, n - 1) !=
          static_cast<AmpInt>(N) * binomial(N, n)) {
        o.fail("recurrence at " + std::to_string(N) + "," + std::to_string(n));
      }
    }
  }
  if (o.pass) o.detail = "N, n <= 20 exact";
  return o;
}

Outcome decay_calculators() {
  Outcome o;
  auto base = decay_bound_multiplayer(0.25, 2, 0, 1.0, 0.01, 1.0);
  if (base.value != 40.0) o.fail("n=0 gives " + format_double(base.value));
  double pm = 1e300, pk = 1e300;
  for (std::size_t n = 0; n < 20; ++n) {
    auto m = decay_bound_multiplayer(0.25, 2, n * 1000000ULL, 1.0, 0.01, 1.0);
    auto k = decay_bound_kplayer(0.9, 0.5, 0.8, 2, n, 1.0);
    if (!(m.value < pm)) o.fail("multiplayer not decreasing at n=" + std::to_string(n));
    if (!(k.value < pk)) o.fail("kplayer not decreasing at n=" + std::to_string(n));
    if (m.vacuous != (m.value > 1.0) || k.vacuous != (k.value > 1.0)) {
      o.fail("vacuous flag at n=" + std::to_string(n));
    }
    pm = m.value;
    pk = k.value;
  }
  if (!base.vacuous) o.fail("40 not flagged vacuous");
  if (o.pass) o.detail = "n=0 gives 40; 20-point grids strictly decreasing";
  return o;
}

Outcome findings_run() {
  Outcome o;
  for (const std::string name : {"main_t1", "system1"}) {
    const std::vector<std::string> args{"check", "--bound", name, "--trials", "5000",
                                        "--seed", "11"};
    int code = 0;
    const std::string a = run(args, &code);
    const std::string b = run(args);
    if (code != 0) o.fail(name + " exit code " + std::to_string(code));
    if (a != b) o.fail(name + " not deterministic");

    const BoundKind kind = parse_bound_kind(name);
    const SamplerConfig cfg = SamplerConfig::defaults_for(kind);
    std::istringstream lines(a);
    std::string line;
    std::size_t rows = 0, violations = 0;
    bool header = false;
    while (std::getline(lines, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header) {
        header = true;
        continue;
      }
      auto cells = split(line, ',');
      const std::uint64_t trial = std::stoull(cells[8]);
      Instance in = sample_instance(kind, cfg, 11, trial);
      naive::Sides s = naive::recompute(in, cfg.tol);
      if (!naive::close(parse_double(cells[1]), s.lhs, 1e-12) ||
          !naive::close(parse_double(cells[2]), s.rhs, 1e-12) ||
          (cells[5] == "1") != s.premise) {
        o.fail(name + " trial " + std::to_string(trial) + " disagrees with naive");
      }
      violations += cells[9] == "1";
      ++rows;
    }
    if (rows != 5000) o.fail(name + " has " + std::to_string(rows) + " rows");
    o.detail += (o.detail.empty() ? "" : "; ") + name + " " + std::to_string(violations) +
                " violations";
  }
  return o;
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "parrep_acceptance";
  fs::create_directories(dir);
  const std::string chsh = kData + "/chsh.json";
  const std::vector<std::vector<std::string>> cmds{
      {"value", chsh, "--repeat", "2", "--out", (dir / "value.csv").string()},
      {"anchor", chsh, "--alpha", "0.5", "--out", (dir / "anchored.json").string()},
      {"check", "--bound", "lm_c4", "--trials", "500", "--seed", "3", "--out",
       (dir / "check.csv").string()},
      {"check", "--bound", "b3", "--trials", "500", "--seed", "3", "--out",
       (dir / "check.csv").string()},
      {"decay-curve", chsh, "--alpha", "0.5", "--n-max", "2", "--out",
       (dir / "decay.csv").string()},
      {"entropy", kData + "/skewed2.json"},
  };
  for (const auto& c : cmds) {
    const fs::path target = c.size() >= 2 && c[c.size() - 2] == "--out" ? fs::path(c.back())
                                                                      : fs::path();
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "4", "1"}) {
      setenv("PARREP_THREADS", threads, 1);
      std::string text = run(c);
      if (!target.empty()) text = slurp(target);
      outputs.push_back(text);
    }
    if (outputs[0] != outputs[1] || outputs[0] != outputs[2] || outputs[0].empty()) {
      o.fail(c[0] + " output differs");
    }
  }
  unsetenv("PARREP_THREADS");
  if (o.pass) o.detail = std::to_string(cmds.size()) + " commands byte-identical at 1 and 4 threads";
  return o;
}

}  // namespace

int main() {
  criterion("anchoring identity", anchoring_identity);
  criterion("repetition values", repetition_values);
  criterion("concave family suite", concave_suite);
  criterion("oracle equivalence", oracle_equivalence);
  criterion("two-player T2 search", lm_t2);
  criterion("amp_constant", amp_constant_check);
  criterion("decay calculators", decay_calculators);
  criterion("findings run", findings_run);
  criterion("determinism", determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
