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

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "parrep/bounds.hpp"
#include "parrep/game_io.hpp"
#include "parrep/numeric.hpp"
#include "parrep/oracle.hpp"
#include "parrep/search.hpp"
#include "parrep/transforms.hpp"
#include "parrep/value.hpp"

namespace parrep::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

struct RunConfig {
  std::uint64_t seed = 0;
  Caps caps;
  double tol = kDefaultBoundTol;
  std::string output_dir;
};

std::string config_header(const std::string& command, const RunConfig& cfg) {
  std::string s = "# parrep " + command + "\n";
  s += "# seed=" + std::to_string(cfg.seed) + " tol=" + format_double(cfg.tol) +
       " log_base=2 max_joint_tuples=" +
       std::to_string(cfg.caps.max_joint_tuples) +
       " max_strategy_profiles=" +
       std::to_string(cfg.caps.max_strategy_profiles) + "\n";
  return s;
}

std::string flag(bool b) { return b ? "1" : "0"; }

// Values that cannot be computed (domain errors) are written as nan.
template <class Fn>
std::string guarded(Fn&& fn) {
  try {
    return format_double(fn());
  } catch (const std::domain_error&) {
    return "nan";
  } catch (const std::invalid_argument&) {
    return "nan";
  }
}

json load_json(const std::string& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::vector<double> json_list(const json& j, const char* key,
                              std::vector<double> fallback = {}) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_array()) throw ParseError(std::string("field '") + key + "': expected array");
  std::vector<double> out;
  for (const auto& x : v) {
    if (x.is_number()) {
      out.push_back(x.get<double>());
    } else if (x.is_string()) {
      out.push_back(parse_double(x.get<std::string>()));
    } else {
      throw ParseError(std::string("field '") + key + "': expected numbers");
    }
  }
  return out;
}

double json_number(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_double(v.get<std::string>());
  throw ParseError(std::string("field '") + key + "': expected number");
}

// Output goes to --out, else <out-dir>/<default_name>, else stdout.
void emit(const std::string& text, const std::string& out_path,
          const RunConfig& cfg, const std::string& default_name,
          std::ostream& out) {
  fs::path target;
  if (!out_path.empty()) {
    target = out_path;
  } else if (!cfg.output_dir.empty()) {
    target = fs::path(cfg.output_dir) / default_name;
  }
  if (target.empty()) {
    out << text;
    return;
  }
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  std::ofstream f(target, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + target.string());
  f << text;
  out << "wrote " << target.string() << "\n";
}

// --- value -----------------------------------------------------------------

int cmd_value(const RunConfig& cfg, const std::string& game_path,
              const std::vector<std::string>& restrict_specs,
              std::size_t repeat_n, const std::string& out_path,
              std::ostream& out) {
  Game base = load_game(game_path);
  ValueOptions opts;
  opts.caps = cfg.caps;
  Game g = repeat_n > 1 ? repeat(base, repeat_n, cfg.caps) : base;

  std::vector<RestrictionFilter> filters;
  for (const auto& spec : restrict_specs) {
    filters.push_back(parse_restriction(spec, g));
  }
  ValueReport r = filters.empty() ? optimal_value(g, opts)
                                  : restricted_value(g, filters, opts);
  // Restricted runs also report the unrestricted optimum and the ratio.
  const double full = filters.empty() ? r.value : optimal_value(g, opts).value;
  const double ratio = full > 0.0 ? r.value / full
                                  : std::numeric_limits<double>::quiet_NaN();

  std::string restrict_text;
  for (const auto& s : restrict_specs) {
    restrict_text += (restrict_text.empty() ? "" : ";") + s;
  }
  out << "game " << fs::path(game_path).filename().string() << "\n"
      << "repeat " << repeat_n << "\n"
      << "value " << format_double(r.value) << "\n"
      << "exact " << (r.exact ? "true" : "false") << "\n"
      << "strategies_searched " << r.strategies_searched << "\n"
      << "admitted " << r.admitted << "\n";
  if (!filters.empty()) {
    out << "unrestricted_value " << format_double(full) << "\n"
        << "ratio " << format_double(ratio) << "\n";
  }
  if (!r.argmax) out << "no admitted strategy\n";

  if (!out_path.empty() || !cfg.output_dir.empty()) {
    std::string csv = config_header("value", cfg);
    csv += "game,repeat,restrict,value,exact,strategies_searched,admitted,"
           "unrestricted_value,ratio\n";
    csv += fs::path(game_path).filename().string() + "," +
           std::to_string(repeat_n) + "," + restrict_text + "," +
           format_double(r.value) + "," + flag(r.exact) + "," +
           std::to_string(r.strategies_searched) + "," +
           std::to_string(r.admitted) + "," + format_double(full) + "," +
           format_double(ratio) + "\n";
    emit(csv, out_path, cfg, "value.csv", out);
  }
  return kExitOk;
}

// --- anchor ----------------------------------------------------------------

int cmd_anchor(const RunConfig& cfg, const std::string& game_path,
               double alpha, const std::string& out_path, std::ostream& out) {
  Game g = load_game(game_path);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("--alpha must lie in (0, 1)");
  }
  Game anchored = anchor(g, alpha);
  emit(game_to_json(anchored), out_path, cfg, "anchored.json", out);
  return kExitOk;
}

// --- check -----------------------------------------------------------------

Instance instance_from_files(BoundKind kind, const std::string& mu_path,
                             const std::string& game_path,
                             const std::string& params_path) {
  Instance in;
  in.kind = kind;
  json p = params_path.empty() ? json::object() : load_json(params_path);
  std::size_t N = 0;
  if (kind == BoundKind::kMainT1) {
    if (game_path.empty()) throw std::invalid_argument("main_t1 needs --game");
    in.game = load_game(game_path);
    N = in.game->n_players();
  } else {
    if (mu_path.empty()) throw std::invalid_argument("--mu is required");
    MuFile m = load_mu(mu_path);
    in.mu = std::move(m.mu);
    in.dist = std::move(m.dist);
    N = in.mu.n_players();
  }
  auto& ap = in.params;
  ap.N = N;
  ap.n = static_cast<std::size_t>(json_number(p, "n", 1.0));
  ap.eps = json_list(p, "eps");
  ap.delta = json_list(p, "delta");
  ap.q = json_list(p, "q");
  ap.hint_h = json_list(p, "hint_h");
  for (double q : json_list(p, "psi_q", std::vector<double>(N, 2.0))) {
    if (!(q >= 1.0) || q != static_cast<unsigned>(q)) {
      throw ParseError("field 'psi_q': expected positive integers");
    }
    in.fam.push_back(ConcaveFn::power(static_cast<unsigned>(q)));
  }
  if (kind == BoundKind::kB3) {
    in.mult = ConcaveFn::mult(json_list(p, "mult_q", std::vector<double>(N, 1.0)));
  }
  std::vector<double> subset = json_list(p, "subset");
  if (subset.empty()) {
    for (std::size_t i = 0; i < N; ++i) in.subset.push_back(i);
  } else {
    for (double s : subset) in.subset.push_back(static_cast<std::size_t>(s));
  }
  in.constant = json_number(p, "C", 1.0);
  in.player = static_cast<std::size_t>(json_number(p, "player", 0.0));
  return in;
}

int cmd_check(const RunConfig& cfg, const std::string& bound,
              const std::string& mu_path, const std::string& game_path,
              const std::string& params_path, std::size_t trials,
              bool require_premise, const std::string& out_path,
              std::ostream& out) {
  BoundKind kind = parse_bound_kind(bound);
  FindingsTable table;
  table.kind = kind;
  std::vector<std::string> comments;
  if (!mu_path.empty() || !game_path.empty()) {
    Instance inst = instance_from_files(kind, mu_path, game_path, params_path);
    ValueOptions opts;
    opts.caps = cfg.caps;
    FindingRow row;
    row.report = run_checker(inst, cfg.tol, opts);
    row.seed = cfg.seed;
    row.trial = 0;
    table.premise_count = row.report.premise_ok ? 1 : 0;
    table.satisfied_count = row.report.satisfied ? 1 : 0;
    table.violation_count = is_violation(row.report) ? 1 : 0;
    if (row.report.premise_ok) table.min_slack_rows.push_back(0);
    table.rows.push_back(std::move(row));
    comments.push_back("mode=single");
  } else {
    SamplerConfig sc = SamplerConfig::defaults_for(kind);
    sc.tol = cfg.tol;
    sc.caps = cfg.caps;
    if (require_premise) sc.require_premise = true;
    table = search_counterexamples(kind, sc, cfg.seed, trials);
    comments.push_back("mode=sampled require_premise=" +
                       std::string(sc.require_premise ? "1" : "0"));
  }
  std::string header = config_header("check", cfg);
  comments.push_back("bound=" + bound + " trials=" +
                     std::to_string(table.rows.size()) +
                     " premise_ok=" + std::to_string(table.premise_count) +
                     " satisfied=" + std::to_string(table.satisfied_count) +
                     " violations=" + std::to_string(table.violation_count));
  std::string witnesses;
  for (std::size_t t : table.min_slack_rows) {
    witnesses += (witnesses.empty() ? "" : " ") + std::to_string(t);
  }
  comments.push_back("min_slack_trials=" + witnesses);
  if (kind == BoundKind::kSystem1) {
    comments.push_back("delta_index_pattern=[n]\\excluded");
  }
  emit(header + findings_to_csv(table, comments), out_path, cfg,
       "findings_" + bound + ".csv", out);
  return kExitOk;
}

// --- decay-curve -----------------------------------------------------------

int cmd_decay_curve(const RunConfig& cfg, const std::string& game_path,
                    double alpha, std::size_t n_max,
                    const std::string& params_path, const std::string& out_path,
                    std::ostream& out) {
  Game g = load_game(game_path);
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("--alpha must lie in (0, 1)");
  }
  Game ga = anchor(g, alpha);
  const std::size_t N = g.n_players();
  ValueOptions opts;
  opts.caps = cfg.caps;
  json bp = params_path.empty() ? json::object() : load_json(params_path);

  std::string csv = config_header("decay-curve", cfg);
  csv += "# alpha=" + format_double(alpha) + "\n";
  csv += "n,omega_exact,exact,bound_multiplayer,bound_kplayer,main_t1_rhs\n";
  if (n_max == 0) {
    emit(csv, out_path, cfg, "decay.csv", out);
    return kExitOk;
  }

  double eps = json_number(bp, "eps", std::nan(""));
  if (std::isnan(eps)) eps = 1.0 - optimal_value(g, opts).value;
  const double c = json_number(bp, "c", multiplayer_c_cap(N) / 2.0);
  const double gamma = json_number(bp, "gamma", eps);
  const double c_k = json_number(bp, "c_kplayer", 1.0);
  const auto k = static_cast<std::size_t>(json_number(bp, "k", double(N)));
  std::vector<std::size_t> sizes;
  for (const auto& q : ga.questions()) sizes.push_back(q.size());
  const double s = question_size_factor(sizes);

  json mt = bp.contains("main_t1") ? bp.at("main_t1") : json::object();
  AmpParams mp;
  mp.N = N;
  mp.eps = json_list(mt, "eps", std::vector<double>(N, 0.5));
  mp.delta = json_list(mt, "delta", std::vector<double>(N, 0.5));
  mp.q = json_list(mt, "q", std::vector<double>(N, 1.0));
  mp.hint_h = json_list(mt, "hint_h", std::vector<double>(N, 1.0));
  const auto player = static_cast<std::size_t>(json_number(mt, "player", 0.0));
  const std::string rhs = guarded([&] { return main_theorem1_rhs(mp, player); });

  bool capped = false;
  for (std::size_t n = 1; n <= n_max; ++n) {
    std::string omega = "nan";
    bool exact = false;
    if (!capped) {
      try {
        omega = format_double(repeated_value(ga, n, opts).value);
        exact = true;
      } catch (const CapExceeded&) {
        capped = true;
      }
    }
    if (!exact) {
      try {
        Game rep = repeat(ga, n, cfg.caps);
        omega = format_double(local_search_value(rep, cfg.seed, 200).value);
      } catch (const CapExceeded&) {
        omega = "nan";
      }
    }
    csv += std::to_string(n) + "," + omega + "," + flag(exact) + "," +
           guarded([&] {
             return decay_bound_multiplayer(eps, N, n, alpha, c, s).value;
           }) +
           "," +
           guarded([&] {
             return decay_bound_kplayer(gamma, c_k, alpha, k, n, s).value;
           }) +
           "," + rhs + "\n";
  }
  emit(csv, out_path, cfg, "decay.csv", out);
  return kExitOk;
}

// --- entropy ---------------------------------------------------------------

int cmd_entropy(const std::string& path, std::ostream& out) {
  Distribution d = load_distribution(path);
  auto e = oracle::entropy(d);
  out << "shannon_bits=" << format_double(e.shannon_bits) << "\n"
      << "paper_signed=" << format_double(e.paper_signed) << "\n";
  return kExitOk;
}

void apply_config_file(const std::string& path, RunConfig& cfg,
                       const CLI::App& app) {
  json j = load_json(path);
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  if (j.contains("seed") && app.count("--seed") == 0) {
    cfg.seed = j.at("seed").get<std::uint64_t>();
  }
  if (j.contains("tol") && app.count("--tol") == 0) {
    cfg.tol = j.at("tol").get<double>();
  }
  if (j.contains("output_dir") && app.count("--out-dir") == 0) {
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("caps")) {
    const json& c = j.at("caps");
    if (c.contains("max_joint_tuples") && app.count("--max-joint-tuples") == 0) {
      cfg.caps.max_joint_tuples = c.at("max_joint_tuples").get<std::uint64_t>();
    }
    if (c.contains("max_strategy_profiles") &&
        app.count("--max-strategy-profiles") == 0) {
      cfg.caps.max_strategy_profiles =
          c.at("max_strategy_profiles").get<std::uint64_t>();
    }
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Nonlocal game values, transforms and inequality checks",
               "parrep"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  std::string config_path;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--tol", cfg.tol, "comparison tolerance");
  app.add_option("--out-dir", cfg.output_dir, "directory for report files");
  app.add_option("--max-joint-tuples", cfg.caps.max_joint_tuples);
  app.add_option("--max-strategy-profiles", cfg.caps.max_strategy_profiles);

  std::string game_path, out_path, mu_path, params_path, bound;
  std::vector<std::string> restrict_specs;
  std::size_t repeat_n = 1, trials = 100, n_max = 2;
  double alpha = 0.5;
  bool require_premise = false;

  auto* value = app.add_subcommand("value", "exact optimal value");
  value->add_option("game", game_path)->required();
  value->add_option("--restrict", restrict_specs,
                    "none | entropy>=D@R | const:P=SYMBOL (repeatable)");
  value->add_option("--repeat", repeat_n, "parallel repetition count");
  value->add_option("--out", out_path, "CSV report path");

  auto* anchor_cmd = app.add_subcommand("anchor", "write the anchored game");
  anchor_cmd->add_option("game", game_path)->required();
  anchor_cmd->add_option("--alpha", alpha)->required();
  anchor_cmd->add_option("--out", out_path);

  auto* check = app.add_subcommand("check", "run a bound checker");
  check->add_option("--bound", bound)->required();
  check->add_option("--mu", mu_path, "fixed mu file (single instance)");
  check->add_option("--game", game_path, "fixed game file for main_t1");
  check->add_option("--params", params_path, "parameter JSON");
  check->add_option("--trials", trials);
  check->add_flag("--require-premise", require_premise);
  check->add_option("--out", out_path);

  auto* decay = app.add_subcommand("decay-curve", "values and decay bounds");
  decay->add_option("game", game_path)->required();
  decay->add_option("--alpha", alpha)->required();
  decay->add_option("--n-max", n_max);
  decay->add_option("--bound-params", params_path);
  decay->add_option("--out", out_path);

  auto* entropy_cmd = app.add_subcommand("entropy", "entropy of pi");
  entropy_cmd->add_option("file", game_path)->required();

  std::vector<std::string> storage{"parrep"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (!config_path.empty()) apply_config_file(config_path, cfg, app);
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (cfg.caps.max_joint_tuples == 0 || cfg.caps.max_strategy_profiles == 0) {
      throw std::invalid_argument("caps must be positive");
    }
    if (*value) {
      return cmd_value(cfg, game_path, restrict_specs, repeat_n, out_path, out);
    }
    if (*anchor_cmd) return cmd_anchor(cfg, game_path, alpha, out_path, out);
    if (*check) {
      return cmd_check(cfg, bound, mu_path, game_path, params_path, trials,
                       require_premise, out_path, out);
    }
    if (*decay) {
      return cmd_decay_curve(cfg, game_path, alpha, n_max, params_path,
                             out_path, out);
    }
    if (*entropy_cmd) return cmd_entropy(game_path, out);
  } catch (const CapExceeded& e) {
    err << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace parrep::cli
