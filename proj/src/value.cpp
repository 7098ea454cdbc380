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

#include "parrep/value.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <thread>

#include "parrep/numeric.hpp"
#include "parrep/rng.hpp"

namespace parrep {

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();
// Largest materialized win table (cells), about 64 MiB.
constexpr std::uint64_t kMaxWinTableCells = std::uint64_t{1} << 26;

std::uint64_t mul_sat(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a > kSaturated / b) return kSaturated;
  return a * b;
}

std::uint64_t pow_sat(std::uint64_t base, std::size_t exp) {
  std::uint64_t r = 1;
  for (std::size_t k = 0; k < exp; ++k) r = mul_sat(r, base);
  return r;
}

// Materialized win table plus the support of pi, shared by every search.
class Evaluator {
 public:
  explicit Evaluator(const Game& g) : game_(g) {
    auto issues = validate_game(g);
    if (!issues.empty()) {
      throw std::invalid_argument("invalid game: " + issues.front());
    }
    ProductSpace qs = g.question_space(), as = g.answer_space();
    answer_count_ = as.size();
    if (mul_sat(qs.size(), as.size()) > kMaxWinTableCells) {
      throw CapExceeded("win table exceeds " +
                        std::to_string(kMaxWinTableCells) + " cells");
    }
    n_ = g.n_players();
    strides_.assign(n_, 1);
    for (std::size_t i = n_; i-- > 1;) {
      strides_[i - 1] = strides_[i] * g.answers()[i].size();
    }
    // Only rows reached by pi are needed.
    const auto& pi = g.pi();
    IndexTuple a(n_);
    for (std::size_t k = 0; k < pi.size(); ++k) {
      if (pi.probs()[k] == 0.0) continue;
      const auto& q = pi.support()[k];
      Row row;
      row.p = pi.probs()[k];
      row.q = q;
      row.offset = wins_.size();
      wins_.resize(wins_.size() + answer_count_);
      for (std::size_t ai = 0; ai < answer_count_; ++ai) {
        as.decode(ai, a);
        wins_[row.offset + ai] = g.wins(q, a) ? 1 : 0;
      }
      rows_.push_back(std::move(row));
    }
  }

  std::size_t players() const { return n_; }
  const Game& game() const { return game_; }

  double value(const Strategy& s) const {
    double total = 0.0;
    for (const auto& row : rows_) {
      std::size_t ai = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        ai += s.answer_maps[i][row.q[i]] * strides_[i];
      }
      if (wins_[row.offset + ai]) total += row.p;
    }
    return total;
  }

  // Best response of the last player against fixed maps for players
  // 0..N-2. Fills `last` with the first maximizing answer per question.
  double best_response(const std::vector<std::vector<std::uint32_t>>& maps,
                       std::vector<std::uint32_t>& last,
                       std::vector<double>& scores) const {
    const std::size_t L = n_ - 1;
    const std::size_t qn = game_.questions()[L].size();
    const std::size_t an = game_.answers()[L].size();
    scores.assign(qn * an, 0.0);
    for (const auto& row : rows_) {
      std::size_t partial = 0;
      for (std::size_t i = 0; i < L; ++i) {
        partial += maps[i][row.q[i]] * strides_[i];
      }
      const std::uint8_t* w = &wins_[row.offset + partial];
      double* sc = &scores[row.q[L] * an];
      for (std::size_t a = 0; a < an; ++a) {
        if (w[a]) sc[a] += row.p;
      }
    }
    last.assign(qn, 0);
    double total = 0.0;
    for (std::size_t q = 0; q < qn; ++q) {
      const double* sc = &scores[q * an];
      std::size_t best = 0;
      for (std::size_t a = 1; a < an; ++a) {
        if (sc[a] > sc[best]) best = a;
      }
      last[q] = static_cast<std::uint32_t>(best);
      total += sc[best];
    }
    return total;
  }

 private:
  struct Row {
    double p = 0.0;
    IndexTuple q;
    std::size_t offset = 0;
  };

  const Game& game_;
  std::size_t n_ = 0;
  std::size_t answer_count_ = 0;
  std::vector<std::size_t> strides_;
  std::vector<Row> rows_;
  std::vector<std::uint8_t> wins_;
};

// Mixed-radix decoding of a profile index over a list of players. Player
// order is significance order; within a map, question 0 is most significant.
void decode_maps(std::uint64_t index, const Game& g,
                 const std::vector<std::size_t>& players,
                 std::vector<std::vector<std::uint32_t>>& maps) {
  for (std::size_t k = players.size(); k-- > 0;) {
    const std::size_t i = players[k];
    const std::size_t base = g.answers()[i].size();
    auto& m = maps[i];
    m.resize(g.questions()[i].size());
    for (std::size_t q = m.size(); q-- > 0;) {
      m[q] = static_cast<std::uint32_t>(index % base);
      index /= base;
    }
  }
}

struct ChunkBest {
  double value = -1.0;
  std::uint64_t index = kSaturated;
  std::uint64_t admitted = 0;
};

// Runs fn(begin, end) -> ChunkBest over contiguous chunks and reduces with
// max value, ties to the smallest index.
template <class Fn>
ChunkBest parallel_best(std::uint64_t count, unsigned threads, Fn&& fn) {
  if (threads == 0) threads = default_thread_count();
  std::uint64_t workers = std::max<std::uint64_t>(
      1, std::min<std::uint64_t>(threads, count / 1024 + 1));
  std::vector<ChunkBest> results(workers);
  if (workers == 1) {
    results[0] = fn(std::uint64_t{0}, count);
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t w = 0; w < workers; ++w) {
      std::uint64_t begin = count * w / workers;
      std::uint64_t end = count * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] { results[w] = fn(begin, end); });
    }
    for (auto& t : pool) t.join();
  }
  ChunkBest best;
  for (const auto& r : results) {
    best.admitted += r.admitted;
    if (r.index == kSaturated) continue;
    if (best.index == kSaturated || r.value > best.value ||
        (r.value == best.value && r.index < best.index)) {
      best.value = r.value;
      best.index = r.index;
    }
  }
  return best;
}

// Two-player search. Player 1's score table is a sum over player 0's
// questions of per-(question, answer) contribution tables; partial sums are
// kept per question so an odometer step only redoes the changed suffix. The
// additions happen in question order from 0.0, the same order best_response
// uses, so both paths produce identical bits.
class TwoPlayerTables {
 public:
  static std::optional<TwoPlayerTables> build(const Game& g) {
    TwoPlayerTables t;
    t.q0_ = g.questions()[0].size();
    t.a0_ = g.answers()[0].size();
    t.q1_ = g.questions()[1].size();
    t.a1_ = g.answers()[1].size();
    t.cells_ = t.q1_ * t.a1_;
    if (mul_sat(mul_sat(t.q0_, t.a0_), t.cells_) > (std::uint64_t{1} << 24)) {
      return std::nullopt;
    }
    t.contrib_.assign(t.q0_ * t.a0_ * t.cells_, 0.0);
    const auto& pi = g.pi();
    IndexTuple a(2);
    for (std::size_t k = 0; k < pi.size(); ++k) {
      const double p = pi.probs()[k];
      if (p == 0.0) continue;
      const auto& q = pi.support()[k];
      for (std::uint32_t x = 0; x < t.a0_; ++x) {
        for (std::uint32_t y = 0; y < t.a1_; ++y) {
          a[0] = x;
          a[1] = y;
          if (g.wins(q, a)) {
            t.contrib_[(q[0] * t.a0_ + x) * t.cells_ + q[1] * t.a1_ + y] = p;
          }
        }
      }
    }
    return t;
  }

  ChunkBest search(std::uint64_t begin, std::uint64_t end) const {
    ChunkBest local;
    if (begin >= end) return local;
    std::vector<std::uint32_t> digits(q0_);
    std::uint64_t idx = begin;
    for (std::size_t q = q0_; q-- > 0;) {
      digits[q] = static_cast<std::uint32_t>(idx % a0_);
      idx /= a0_;
    }
    // partial[k] holds the sum over questions 0..k-1.
    std::vector<double> partial((q0_ + 1) * cells_, 0.0);
    std::size_t dirty = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      for (std::size_t k = dirty; k < q0_; ++k) {
        const double* prev = &partial[k * cells_];
        const double* c = &contrib_[(k * a0_ + digits[k]) * cells_];
        double* out = &partial[(k + 1) * cells_];
        for (std::size_t j = 0; j < cells_; ++j) out[j] = prev[j] + c[j];
      }
      const double* sc = &partial[q0_ * cells_];
      double total = 0.0;
      for (std::size_t q = 0; q < q1_; ++q) {
        double best = sc[q * a1_];
        for (std::size_t y = 1; y < a1_; ++y) best = std::max(best, sc[q * a1_ + y]);
        total += best;
      }
      if (local.index == kSaturated || total > local.value) {
        local.value = total;
        local.index = i;
      }
      // Odometer step; the last question is least significant.
      std::size_t k = q0_;
      while (k > 0) {
        --k;
        if (++digits[k] < a0_) break;
        digits[k] = 0;
      }
      dirty = k;
    }
    return local;
  }

 private:
  TwoPlayerTables() = default;

  std::size_t q0_ = 0, a0_ = 0, q1_ = 0, a1_ = 0, cells_ = 0;
  std::vector<double> contrib_;
};

Strategy zero_strategy(const Game& g) {
  Strategy s;
  for (const auto& q : g.questions()) s.answer_maps.emplace_back(q.size(), 0);
  return s;
}

}  // namespace

std::uint64_t profile_count(const Game& g) {
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < g.n_players(); ++i) {
    total = mul_sat(total, pow_sat(g.answers()[i].size(),
                                   g.questions()[i].size()));
  }
  return total;
}

ValueReport optimal_value(const Game& g, const ValueOptions& opts) {
  Evaluator eval(g);
  const std::size_t n = g.n_players();
  std::vector<std::size_t> outer;
  std::uint64_t outer_count = 1;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    outer.push_back(i);
    outer_count = mul_sat(
        outer_count, pow_sat(g.answers()[i].size(), g.questions()[i].size()));
  }
  if (outer_count > opts.caps.max_strategy_profiles) {
    throw CapExceeded("strategy enumeration exceeds " +
                      std::to_string(opts.caps.max_strategy_profiles) +
                      " profiles");
  }

  std::optional<TwoPlayerTables> fast;
  if (n == 2) fast = TwoPlayerTables::build(g);

  auto best = parallel_best(
      outer_count, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        if (fast) return fast->search(begin, end);
        ChunkBest local;
        std::vector<std::vector<std::uint32_t>> maps(n);
        std::vector<std::uint32_t> last;
        std::vector<double> scores;
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          decode_maps(idx, g, outer, maps);
          double v = eval.best_response(maps, last, scores);
          if (local.index == kSaturated || v > local.value) {
            local.value = v;
            local.index = idx;
          }
        }
        return local;
      });

  ValueReport report;
  Strategy s;
  s.answer_maps.resize(n);
  decode_maps(best.index, g, outer, s.answer_maps);
  std::vector<double> scores;
  report.value = eval.best_response(s.answer_maps, s.answer_maps[n - 1], scores);
  report.argmax = std::move(s);
  report.strategies_searched = profile_count(g);
  report.admitted = report.strategies_searched;
  report.exact = true;
  return report;
}

ValueReport restricted_value(const Game& g,
                             std::span<const RestrictionFilter> filters,
                             const ValueOptions& opts) {
  if (strategy_independent(filters)) {
    if (admits_any(filters, zero_strategy(g), g)) {
      return optimal_value(g, opts);
    }
    ValueReport empty;
    empty.strategies_searched = profile_count(g);
    empty.exact = true;
    return empty;
  }

  Evaluator eval(g);
  const std::uint64_t total = profile_count(g);
  if (total > opts.caps.max_strategy_profiles) {
    throw CapExceeded("strategy enumeration exceeds " +
                      std::to_string(opts.caps.max_strategy_profiles) +
                      " profiles");
  }
  const std::size_t n = g.n_players();
  std::vector<std::size_t> all(n);
  for (std::size_t i = 0; i < n; ++i) all[i] = i;

  auto best = parallel_best(
      total, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
        ChunkBest local;
        Strategy s;
        s.answer_maps.resize(n);
        for (std::uint64_t idx = begin; idx < end; ++idx) {
          decode_maps(idx, g, all, s.answer_maps);
          if (!admits_any(filters, s, g)) continue;
          ++local.admitted;
          double v = eval.value(s);
          if (local.index == kSaturated || v > local.value) {
            local.value = v;
            local.index = idx;
          }
        }
        return local;
      });

  ValueReport report;
  report.strategies_searched = total;
  report.admitted = best.admitted;
  report.exact = true;
  if (best.index != kSaturated) {
    Strategy s;
    s.answer_maps.resize(n);
    decode_maps(best.index, g, all, s.answer_maps);
    report.value = eval.value(s);
    report.argmax = std::move(s);
  }
  return report;
}

ValueReport repeated_value(const Game& g, std::size_t n,
                           const ValueOptions& opts) {
  return optimal_value(repeat(g, n, opts.caps), opts);
}

ValueReport local_search_value(const Game& g, std::uint64_t seed,
                               std::size_t iterations) {
  Evaluator eval(g);
  const std::size_t n = g.n_players();
  SplitMix64 rng(seed);
  auto random_strategy = [&] {
    Strategy s;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::uint32_t> m(g.questions()[i].size());
      for (auto& a : m) {
        a = static_cast<std::uint32_t>(rng.below(g.answers()[i].size()));
      }
      s.answer_maps.push_back(std::move(m));
    }
    return s;
  };

  ValueReport report;
  Strategy current = random_strategy();
  double current_value = eval.value(current);
  report.strategies_searched = 1;
  report.value = current_value;
  report.argmax = current;

  for (std::size_t it = 0; it < iterations; ++it) {
    bool improved = false;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t q = 0; q < current.answer_maps[i].size(); ++q) {
        const std::uint32_t original = current.answer_maps[i][q];
        std::uint32_t best_answer = original;
        for (std::uint32_t a = 0; a < g.answers()[i].size(); ++a) {
          if (a == original) continue;
          current.answer_maps[i][q] = a;
          double v = eval.value(current);
          ++report.strategies_searched;
          if (v > current_value) {
            current_value = v;
            best_answer = a;
            improved = true;
          }
        }
        current.answer_maps[i][q] = best_answer;
      }
    }
    if (current_value > report.value) {
      report.value = current_value;
      report.argmax = current;
    }
    if (!improved) {
      if (report.value >= 1.0) break;
      current = random_strategy();
      current_value = eval.value(current);
      ++report.strategies_searched;
      if (current_value > report.value) {
        report.value = current_value;
        report.argmax = current;
      }
    }
  }
  report.admitted = report.strategies_searched;
  report.exact = false;
  return report;
}

}  // namespace parrep
