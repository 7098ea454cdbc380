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

#include "parrep/search.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "parrep/numeric.hpp"
#include "parrep/oracle.hpp"
#include "parrep/rng.hpp"

namespace parrep {

namespace {

struct KindName {
  BoundKind kind;
  const char* name;
};

constexpr KindName kKindNames[] = {
    {BoundKind::kSystem1, "system1"}, {BoundKind::kB2, "b2"},
    {BoundKind::kB3, "b3"},           {BoundKind::kB4, "b4"},
    {BoundKind::kB5_6, "b5_6"},       {BoundKind::kLmT1, "lm_t1"},
    {BoundKind::kLmT2, "lm_t2"},      {BoundKind::kLmT3, "lm_t3"},
    {BoundKind::kLmC4, "lm_c4"},      {BoundKind::kLmP1, "lm_p1"},
    {BoundKind::kLmC2, "lm_c2"},      {BoundKind::kMainT1, "main_t1"},
};

std::size_t pick(SplitMix64& rng, std::size_t lo, std::size_t hi) {
  if (hi < lo) hi = lo;
  return lo + static_cast<std::size_t>(rng.below(hi - lo + 1));
}

// Uniform in (0, 1].
double open_unit(SplitMix64& rng) { return 1.0 - rng.uniform(); }

std::vector<Alphabet> numbered_alphabets(const std::vector<std::size_t>& sizes) {
  std::vector<Alphabet> out;
  for (std::size_t s : sizes) {
    Alphabet a;
    for (std::size_t k = 0; k < s; ++k) a.push_back(std::to_string(k));
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<double> random_marginal(SplitMix64& rng, std::size_t size) {
  std::vector<double> w(size);
  for (auto& v : w) v = open_unit(rng);
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& v : w) v /= total;
  return w;
}

Distribution random_product(SplitMix64& rng,
                            const std::vector<std::size_t>& sizes) {
  if (rng.below(4) == 0) return uniform_dist(sizes);
  std::vector<std::vector<double>> m;
  for (std::size_t s : sizes) m.push_back(random_marginal(rng, s));
  return product_dist(m);
}

MuTable random_mu(SplitMix64& rng, const std::vector<std::size_t>& sizes) {
  auto alphabets = numbered_alphabets(sizes);
  std::size_t total = 1;
  for (std::size_t s : sizes) total *= s;
  std::vector<double> values(total);
  switch (rng.below(3)) {
    case 0:
      for (auto& v : values) v = rng.uniform();
      break;
    case 1: {
      double p = rng.uniform();
      for (auto& v : values) v = rng.bernoulli(p) ? 1.0 : 0.0;
      break;
    }
    default:
      for (auto& v : values) v = rng.below(4) == 0 ? rng.uniform() : 0.0;
      break;
  }
  return MuTable(std::move(alphabets), std::move(values));
}

std::vector<ConcaveFn> random_family(SplitMix64& rng, std::size_t count,
                                     unsigned max_power) {
  std::vector<ConcaveFn> fam;
  for (std::size_t k = 0; k < count; ++k) {
    fam.push_back(ConcaveFn::power(static_cast<unsigned>(
        pick(rng, 1, std::max(1u, max_power)))));
  }
  return fam;
}

std::vector<double> random_unit_list(SplitMix64& rng, std::size_t count) {
  std::vector<double> v(count);
  for (auto& x : v) x = open_unit(rng);
  return v;
}

// Smallest eps meeting `lhs <= eps * bound`, inflated by a random factor in
// [1, 1.25) and capped at 1. Returns a random eps when none exists so the
// instance simply fails its premise.
double derived_eps(SplitMix64& rng, double lhs, double bound) {
  const double inflate = 1.0 + 0.25 * rng.uniform();
  if (lhs <= 0.0) return open_unit(rng);
  if (!(bound > 0.0) || lhs > bound) return open_unit(rng);
  return std::min(1.0, lhs / bound * inflate);
}

oracle::ScalarFn as_fn(const ConcaveFn& f) {
  return [&f](double x) { return f(x); };
}

double delta_product(const std::vector<double>& delta, std::size_t n,
                     std::size_t skip) {
  double prod = 1.0;
  for (std::size_t l = 0; l <= n; ++l) {
    if (l != skip) prod *= delta[l];
  }
  return prod;
}

void sample_system1(Instance& in, const SamplerConfig& cfg, SplitMix64& rng,
                    bool derive) {
  const std::size_t N = pick(rng, cfg.min_players, cfg.max_players);
  std::vector<std::size_t> sizes(N);
  for (auto& s : sizes) s = pick(rng, 1, cfg.max_alphabet);
  in.mu = random_mu(rng, sizes);
  in.dist = random_product(rng, sizes);
  in.fam = random_family(rng, N, cfg.max_power);
  in.params.N = N;
  in.params.n = pick(rng, 1, cfg.max_n);
  in.params.delta = random_unit_list(rng, in.params.n + 1);
  in.params.eps = random_unit_list(rng, N);
  std::vector<std::size_t> order(N);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t k = N; k > 1; --k) {
    std::swap(order[k - 1], order[rng.below(k)]);
  }
  order.resize(pick(rng, 1, N));
  in.subset = order;
  if (derive) {
    for (std::size_t s : in.subset) {
      double lhs = oracle::nested_expect(in.mu, in.dist, {s}, as_fn(in.fam[s]));
      double bound = in.fam[s](delta_product(in.params.delta, in.params.n, s));
      in.params.eps[s] = derived_eps(rng, lhs, bound);
    }
  }
}

void sample_flat(Instance& in, const SamplerConfig& cfg, SplitMix64& rng,
                 std::size_t N, std::size_t max_alphabet) {
  std::vector<std::size_t> sizes(N);
  for (auto& s : sizes) s = pick(rng, 1, max_alphabet);
  in.mu = random_mu(rng, sizes);
  in.dist = random_product(rng, sizes);
  in.fam = random_family(rng, N, cfg.max_power);
  in.params.N = N;
}

void sample_two_player(Instance& in, const SamplerConfig& cfg,
                       SplitMix64& rng, bool derive) {
  sample_flat(in, cfg, rng, 2, cfg.max_alphabet);
  auto& p = in.params;
  p.n = 1;
  p.eps = random_unit_list(rng, 2);
  p.delta = random_unit_list(rng, 2);
  if (!derive || in.kind == BoundKind::kLmC2) return;
  const ConcaveFn& psi = in.fam[0];
  const ConcaveFn& psi1 = in.fam[1];
  const double a = oracle::nested_expect(in.mu, in.dist, 1, as_fn(psi));
  const double b = oracle::nested_expect(in.mu, in.dist, 0, as_fn(psi1));
  switch (in.kind) {
    case BoundKind::kLmT1:
      p.eps[0] = derived_eps(rng, a, psi(p.delta[0]));
      p.eps[1] = derived_eps(rng, b, psi1(p.delta[0]));
      break;
    case BoundKind::kLmT3:
      p.eps[0] = derived_eps(rng, a, psi(p.delta[0]));
      p.eps[1] = derived_eps(rng, b, psi1(p.delta[1]));
      break;
    default: {
      // a <= e0 psi(e1), b <= e1 psi'(e0) with e1 = rho * e0: both right
      // sides increase in e0, so bisect for the smallest feasible e0.
      const double rho = 0.5 + 1.5 * rng.uniform();
      auto feasible = [&](double t) {
        double e1 = std::min(1.0, rho * t);
        return a <= t * psi(e1) && b <= e1 * psi1(t);
      };
      if (!feasible(1.0)) return;
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        (feasible(mid) ? hi : lo) = mid;
      }
      const double inflate = 1.0 + 0.25 * rng.uniform();
      p.eps[0] = std::min(1.0, hi * inflate);
      p.eps[1] = std::min(1.0, rho * p.eps[0]);
      break;
    }
  }
}

void sample_lm_t2(Instance& in, const SamplerConfig& cfg, SplitMix64& rng,
                  bool derive) {
  const std::size_t n = pick(rng, 1, cfg.max_n);
  const std::size_t x = pick(rng, 1, cfg.max_alphabet);
  // i.i.d. coordinates over a common alphabet X.
  std::vector<std::size_t> sizes(n, x);
  in.mu = random_mu(rng, sizes);
  if (rng.below(4) == 0) {
    in.dist = uniform_dist(sizes);
  } else {
    auto m = random_marginal(rng, x);
    in.dist = product_dist(std::vector<std::vector<double>>(n, m));
  }
  in.fam = random_family(rng, n, cfg.max_power);
  auto& p = in.params;
  p.N = n;
  p.n = n;
  p.eps = random_unit_list(rng, n);
  p.delta = random_unit_list(rng, n);
  if (!derive) return;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> others;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) others.push_back(j);
    }
    double lhs = oracle::nested_expect(in.mu, in.dist, others, as_fn(in.fam[i]));
    p.eps[i] = derived_eps(rng, lhs, in.fam[i](p.delta[i]));
  }
}

Game random_game(SplitMix64& rng, std::size_t N, std::size_t max_q,
                 std::size_t max_a) {
  std::vector<std::size_t> qs(N), as(N);
  for (auto& s : qs) s = pick(rng, 1, max_q);
  for (auto& s : as) s = pick(rng, 1, max_a);
  auto questions = numbered_alphabets(qs);
  auto answers = numbered_alphabets(as);
  ProductSpace qspace(qs);
  std::vector<double> w(qspace.size());
  for (auto& v : w) v = open_unit(rng);
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<std::pair<IndexTuple, double>> entries;
  for (std::size_t k = 0; k < w.size(); ++k) {
    entries.emplace_back(qspace.decode(k), w[k] / total);
  }
  Distribution pi(qs, std::move(entries));
  ProductSpace aspace(as);
  std::vector<std::uint8_t> table(qspace.size() * aspace.size());
  const double p_win = 0.3 + 0.5 * rng.uniform();
  for (auto& t : table) t = rng.bernoulli(p_win) ? 1 : 0;
  auto pred = std::make_shared<const DensePredicate>(qspace, aspace,
                                                     std::move(table));
  return Game(std::move(questions), std::move(answers), std::move(pi), pred);
}

void sample_main_t1(Instance& in, const SamplerConfig& cfg, SplitMix64& rng,
                    bool derive) {
  const std::size_t N = pick(rng, cfg.min_players, cfg.max_players);
  const std::size_t max_q = std::min<std::size_t>(cfg.max_alphabet, 2);
  const std::size_t max_a = std::min<std::size_t>(cfg.max_answers, 2);
  in.game = random_game(rng, N, max_q, max_a);
  auto& p = in.params;
  p.N = N;
  // A second round is only affordable for two players.
  p.n = (N == 2 && cfg.max_n >= 2) ? pick(rng, 1, 2) : 1;
  const std::size_t len = std::max(N, p.n + 1);
  p.eps = random_unit_list(rng, len);
  p.delta = random_unit_list(rng, len);
  p.q.resize(N);
  p.hint_h.resize(N);
  for (auto& v : p.q) v = 3.0 * open_unit(rng);
  for (auto& v : p.hint_h) v = 2.0 * rng.uniform();
  in.player = rng.below(N);
  if (derive) {
    p.q[in.player] = main_theorem1_q_limit(p, in.player) * rng.uniform();
  }
}

Instance sample_once(BoundKind kind, const SamplerConfig& cfg,
                     SplitMix64& rng, bool derive) {
  Instance in;
  in.kind = kind;
  switch (kind) {
    case BoundKind::kSystem1:
      sample_system1(in, cfg, rng, derive);
      break;
    case BoundKind::kB2: {
      sample_flat(in, cfg, rng, pick(rng, cfg.min_players, cfg.max_players),
                  cfg.max_alphabet);
      const std::size_t N = in.params.N;
      in.params.eps = random_unit_list(rng, N);
      in.params.delta = random_unit_list(rng, N);
      in.constant = 1.0;
      break;
    }
    case BoundKind::kB3: {
      sample_flat(in, cfg, rng, pick(rng, cfg.min_players, cfg.max_players),
                  cfg.max_alphabet);
      const std::size_t N = in.params.N;
      std::vector<double> q(N);
      for (auto& v : q) v = 3.0 * open_unit(rng);
      in.mult = ConcaveFn::mult(q);
      in.params.n = pick(rng, 1, cfg.max_n);
      break;
    }
    case BoundKind::kB4:
    case BoundKind::kB5_6: {
      sample_flat(in, cfg, rng, pick(rng, cfg.min_players, cfg.max_players),
                  cfg.max_alphabet);
      const std::size_t N = in.params.N;
      in.params.n = pick(rng, N - 1, std::max(N - 1, cfg.max_n));
      in.params.eps = random_unit_list(rng, in.params.n + 1);
      in.params.delta = random_unit_list(rng, in.params.n + 1);
      break;
    }
    case BoundKind::kLmT1:
    case BoundKind::kLmT3:
    case BoundKind::kLmC4:
    case BoundKind::kLmP1:
    case BoundKind::kLmC2:
      sample_two_player(in, cfg, rng, derive);
      break;
    case BoundKind::kLmT2:
      sample_lm_t2(in, cfg, rng, derive);
      break;
    case BoundKind::kMainT1:
      sample_main_t1(in, cfg, rng, derive);
      break;
  }
  return in;
}

}  // namespace

std::string to_string(BoundKind kind) {
  for (const auto& k : kKindNames) {
    if (k.kind == kind) return k.name;
  }
  return "?";
}

BoundKind parse_bound_kind(const std::string& name) {
  for (const auto& k : kKindNames) {
    if (name == k.name) return k.kind;
  }
  std::string valid;
  for (const auto& n : bound_kind_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown bound '" + name + "'; valid: " + valid);
}

std::vector<std::string> bound_kind_names() {
  std::vector<std::string> out;
  for (const auto& k : kKindNames) out.emplace_back(k.name);
  return out;
}

SamplerConfig SamplerConfig::defaults_for(BoundKind kind) {
  SamplerConfig c;
  switch (kind) {
    case BoundKind::kLmT1:
    case BoundKind::kLmT3:
    case BoundKind::kLmC4:
    case BoundKind::kLmP1:
    case BoundKind::kLmC2:
      c.min_players = c.max_players = 2;
      break;
    case BoundKind::kLmT2:
      c.max_alphabet = 4;
      c.max_n = 3;
      c.require_premise = true;
      break;
    case BoundKind::kMainT1:
      c.max_alphabet = 2;
      c.max_answers = 2;
      c.max_n = 2;
      break;
    default:
      break;
  }
  return c;
}

Instance sample_instance(BoundKind kind, const SamplerConfig& config,
                         std::uint64_t seed, std::uint64_t trial,
                         std::uint64_t attempt) {
  SplitMix64 rng = substream(seed, trial, attempt);
  // Half of the unconstrained draws derive eps from the premise so that
  // premise-satisfying rows are common; require_premise always derives.
  bool derive = config.require_premise || rng.bernoulli(0.5);
  return sample_once(kind, config, rng, derive);
}

BoundReport run_checker(const Instance& inst, double tol,
                        const ValueOptions& opts) {
  switch (inst.kind) {
    case BoundKind::kSystem1:
      return check_system1(inst.mu, inst.dist, inst.fam, inst.params,
                           inst.subset, tol);
    case BoundKind::kB2:
      return check_bound2(inst.mu, inst.dist, inst.params, inst.constant, tol);
    case BoundKind::kB3:
      if (!inst.mult) throw std::invalid_argument("b3 needs a mult function");
      return check_bound3(inst.mu, inst.dist, inst.fam, *inst.mult,
                          inst.params, tol);
    case BoundKind::kB4:
      return check_bound4_5_6(inst.mu, inst.dist, inst.params, tol).first;
    case BoundKind::kB5_6:
      return check_bound4_5_6(inst.mu, inst.dist, inst.params, tol).second;
    case BoundKind::kLmT1:
      return check_lm_theorem(inst.mu, inst.dist, inst.fam, inst.params,
                              LmResult::kT1, tol);
    case BoundKind::kLmT2:
      return check_lm_theorem(inst.mu, inst.dist, inst.fam, inst.params,
                              LmResult::kT2, tol);
    case BoundKind::kLmT3:
      return check_lm_theorem(inst.mu, inst.dist, inst.fam, inst.params,
                              LmResult::kT3, tol);
    case BoundKind::kLmC4:
      return check_lm_theorem(inst.mu, inst.dist, inst.fam, inst.params,
                              LmResult::kC4, tol);
    case BoundKind::kLmP1:
      return check_lm_theorem(inst.mu, inst.dist, inst.fam, inst.params,
                              LmResult::kP1, tol);
    case BoundKind::kLmC2:
      return check_lm_theorem(inst.mu, inst.dist, inst.fam, inst.params,
                              LmResult::kC2, tol);
    case BoundKind::kMainT1:
      if (!inst.game) throw std::invalid_argument("main_t1 needs a game");
      return check_main_theorem1(*inst.game, inst.params, inst.player, opts,
                                 tol);
  }
  throw std::logic_error("unhandled bound kind");
}

bool is_violation(const BoundReport& r) { return r.premise_ok && !r.satisfied; }

FindingsTable search_counterexamples(BoundKind kind,
                                     const SamplerConfig& config,
                                     std::uint64_t seed, std::size_t trials) {
  FindingsTable table;
  table.kind = kind;
  table.rows.resize(trials);
  ValueOptions opts;
  opts.caps = config.caps;
  opts.threads = 1;  // parallelism is across trials

  auto run_trial = [&](std::size_t t) {
    FindingRow row;
    row.seed = seed;
    row.trial = t;
    const std::size_t attempts =
        config.require_premise ? std::max<std::size_t>(1, config.max_attempts)
                               : 1;
    for (std::size_t a = 0; a < attempts; ++a) {
      Instance inst = sample_instance(kind, config, seed, t, a);
      row.report = run_checker(inst, config.tol, opts);
      if (row.report.premise_ok) break;
    }
    table.rows[t] = std::move(row);
  };

  unsigned threads = config.threads ? config.threads : default_thread_count();
  threads = static_cast<unsigned>(
      std::max<std::size_t>(1, std::min<std::size_t>(threads, trials)));
  if (threads <= 1) {
    for (std::size_t t = 0; t < trials; ++t) run_trial(t);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(threads);
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t t = w; t < trials; t += threads) run_trial(t);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  std::vector<std::size_t> candidates;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& r = table.rows[t].report;
    if (r.premise_ok) {
      ++table.premise_count;
      candidates.push_back(t);
    }
    if (r.satisfied) ++table.satisfied_count;
    if (is_violation(r)) ++table.violation_count;
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](std::size_t x, std::size_t y) {
                     return table.rows[x].report.slack <
                            table.rows[y].report.slack;
                   });
  candidates.resize(std::min<std::size_t>(candidates.size(), 5));
  table.min_slack_rows = candidates;
  return table;
}

std::string findings_csv_header() {
  return "name,lhs,rhs,satisfied,slack,premise_ok,extended_domain_flag,seed,"
         "trial,violation";
}

std::string findings_csv_row(const FindingRow& row) {
  const auto& r = row.report;
  auto flag = [](bool b) { return b ? "1" : "0"; };
  std::string s = r.name;
  s += ',' + format_double(r.lhs);
  s += ',' + format_double(r.rhs);
  s += std::string(",") + flag(r.satisfied);
  s += ',' + format_double(r.slack);
  s += std::string(",") + flag(r.premise_ok);
  s += std::string(",") + flag(r.extended_domain);
  s += ',' + std::to_string(row.seed);
  s += ',' + std::to_string(row.trial);
  s += std::string(",") + flag(is_violation(r));
  return s;
}

std::string findings_to_csv(const FindingsTable& table,
                            const std::vector<std::string>& comments) {
  std::string out;
  for (const auto& c : comments) out += "# " + c + "\n";
  out += findings_csv_header() + "\n";
  for (const auto& row : table.rows) out += findings_csv_row(row) + "\n";
  return out;
}

}  // namespace parrep
