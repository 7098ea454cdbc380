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

#include "parrep/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "parrep/numeric.hpp"
#include "parrep/oracle.hpp"

namespace parrep {

namespace {

class AnchoredPredicate final : public Predicate {
 public:
  AnchoredPredicate(std::shared_ptr<const Predicate> base,
                    std::vector<std::size_t> base_sizes)
      : base_(std::move(base)), base_sizes_(std::move(base_sizes)) {}

  bool wins(std::span<const std::uint32_t> q,
            std::span<const std::uint32_t> a) const override {
    for (std::size_t i = 0; i < q.size(); ++i) {
      if (q[i] == base_sizes_[i]) return true;
    }
    return base_->wins(q, a);
  }

 private:
  std::shared_ptr<const Predicate> base_;
  std::vector<std::size_t> base_sizes_;
};

// Splits per-player n-tuple indices into base indices, round 0 first.
class RoundDecoder {
 public:
  RoundDecoder(std::vector<std::size_t> base_q, std::vector<std::size_t> base_a,
               std::size_t rounds)
      : base_q_(std::move(base_q)), base_a_(std::move(base_a)), rounds_(rounds) {}

  std::size_t rounds() const { return rounds_; }
  std::size_t players() const { return base_q_.size(); }

  // out[r * N + i] = player i's base index in round r.
  void split(std::span<const std::uint32_t> idx,
             const std::vector<std::size_t>& radix,
             std::vector<std::uint32_t>& out) const {
    const std::size_t n_players = idx.size();
    out.resize(rounds_ * n_players);
    for (std::size_t i = 0; i < n_players; ++i) {
      std::size_t v = idx[i];
      for (std::size_t r = rounds_; r-- > 0;) {
        out[r * n_players + i] = static_cast<std::uint32_t>(v % radix[i]);
        v /= radix[i];
      }
    }
  }

  void split_questions(std::span<const std::uint32_t> q,
                       std::vector<std::uint32_t>& out) const {
    split(q, base_q_, out);
  }
  void split_answers(std::span<const std::uint32_t> a,
                     std::vector<std::uint32_t>& out) const {
    split(a, base_a_, out);
  }

 private:
  std::vector<std::size_t> base_q_;
  std::vector<std::size_t> base_a_;
  std::size_t rounds_;
};

class RepeatedPredicate final : public Predicate {
 public:
  RepeatedPredicate(std::shared_ptr<const Predicate> base, RoundDecoder decoder)
      : base_(std::move(base)), decoder_(std::move(decoder)) {}

  bool wins(std::span<const std::uint32_t> q,
            std::span<const std::uint32_t> a) const override {
    // Reentrant: scratch space lives on the stack of each call.
    std::vector<std::uint32_t> qs, as;
    decoder_.split_questions(q, qs);
    decoder_.split_answers(a, as);
    const std::size_t n = q.size();
    for (std::size_t r = 0; r < decoder_.rounds(); ++r) {
      std::span<const std::uint32_t> qr(qs.data() + r * n, n);
      std::span<const std::uint32_t> ar(as.data() + r * n, n);
      if (!base_->wins(qr, ar)) return false;
    }
    return true;
  }

 private:
  std::shared_ptr<const Predicate> base_;
  RoundDecoder decoder_;
};

std::vector<std::size_t> sizes(const std::vector<Alphabet>& alphabets) {
  std::vector<std::size_t> out;
  for (const auto& a : alphabets) out.push_back(a.size());
  return out;
}

Alphabet tuple_alphabet(const Alphabet& base, std::size_t n) {
  ProductSpace space(std::vector<std::size_t>(n, base.size()));
  Alphabet out;
  out.reserve(space.size());
  IndexTuple t(n);
  std::vector<std::string> parts(n);
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    space.decode(idx, t);
    for (std::size_t r = 0; r < n; ++r) parts[r] = base[t[r]];
    out.push_back(tuple_symbol(parts));
  }
  return out;
}

const Game& base_of(const Game& g) {
  return g.repetition() ? *g.repetition()->base : g;
}

RoundDecoder decoder_for(const Game& g) {
  const Game& base = base_of(g);
  return RoundDecoder(sizes(base.questions()), sizes(base.answers()),
                      round_count(g));
}

}  // namespace

std::string tuple_symbol(std::span<const std::string> parts) {
  std::string s = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += parts[i];
  }
  s += ')';
  return s;
}

Game anchor(const Game& g, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("anchoring requires 0 < alpha < 1");
  }
  const std::size_t n = g.n_players();
  std::vector<Alphabet> questions = g.questions();
  for (auto& a : questions) {
    if (std::find(a.begin(), a.end(), kAnchorSymbol) != a.end()) {
      throw std::invalid_argument(
          "question alphabet already contains the anchor symbol");
    }
    a.push_back(kAnchorSymbol);
  }
  const std::vector<std::size_t> base_sizes = sizes(g.questions());

  // Marginal of pi over each subset of real (non-anchored) players, keyed by
  // bitmask, stored densely over the real coordinates.
  std::map<unsigned, std::vector<double>> real_marginals;
  auto marginal_for = [&](unsigned mask) -> const std::vector<double>& {
    auto it = real_marginals.find(mask);
    if (it != real_marginals.end()) return it->second;
    std::vector<std::size_t> radix;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) radix.push_back(base_sizes[i]);
    }
    ProductSpace space(radix);
    std::vector<double> table(space.size(), 0.0);
    IndexTuple sub;
    for (std::size_t k = 0; k < g.pi().size(); ++k) {
      sub.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) sub.push_back(g.pi().support()[k][i]);
      }
      table[space.index(sub)] += g.pi().probs()[k];
    }
    return real_marginals.emplace(mask, std::move(table)).first->second;
  };

  ProductSpace anchored_space(sizes(questions));
  std::vector<std::pair<IndexTuple, double>> entries;
  IndexTuple t(n), sub;
  for (std::size_t idx = 0; idx < anchored_space.size(); ++idx) {
    anchored_space.decode(idx, t);
    unsigned real_mask = 0;
    std::size_t anchored = 0;
    sub.clear();
    std::vector<std::size_t> radix;
    for (std::size_t i = 0; i < n; ++i) {
      if (t[i] == base_sizes[i]) {
        ++anchored;
      } else {
        real_mask |= 1u << i;
        sub.push_back(t[i]);
        radix.push_back(base_sizes[i]);
      }
    }
    const auto& marg = marginal_for(real_mask);
    double p = std::pow(alpha, static_cast<double>(anchored)) *
               std::pow(1.0 - alpha, static_cast<double>(n - anchored)) *
               marg[ProductSpace(radix).index(sub)];
    if (p > 0.0) entries.emplace_back(t, p);
  }
  Distribution pi(sizes(questions), std::move(entries));
  auto pred =
      std::make_shared<const AnchoredPredicate>(g.predicate_ptr(), base_sizes);
  return Game(std::move(questions), g.answers(), std::move(pi),
              std::move(pred));
}

Game repeat(const Game& g, std::size_t n, const Caps& caps) {
  if (n == 0) throw std::invalid_argument("repetition count must be >= 1");
  // Joint question tuples: prod_i |Q_i|^n.
  std::uint64_t joint = 1;
  for (const auto& a : g.questions()) {
    for (std::size_t r = 0; r < n; ++r) {
      if (a.size() != 0 && joint > caps.max_joint_tuples / a.size()) {
        throw CapExceeded("repeated game exceeds " +
                          std::to_string(caps.max_joint_tuples) +
                          " joint question tuples");
      }
      joint *= a.size();
    }
  }
  if (joint > caps.max_joint_tuples) {
    throw CapExceeded("repeated game exceeds " +
                      std::to_string(caps.max_joint_tuples) +
                      " joint question tuples");
  }

  const std::size_t players = g.n_players();
  std::vector<Alphabet> questions, answers;
  for (const auto& a : g.questions()) questions.push_back(tuple_alphabet(a, n));
  for (const auto& a : g.answers()) answers.push_back(tuple_alphabet(a, n));

  const auto& pi = g.pi();
  const std::vector<std::size_t> base_q = sizes(g.questions());
  ProductSpace combos(std::vector<std::size_t>(n, pi.size()));
  std::vector<std::pair<IndexTuple, double>> entries;
  entries.reserve(combos.size());
  IndexTuple pick(n);
  for (std::size_t c = 0; c < combos.size(); ++c) {
    combos.decode(c, pick);
    IndexTuple q(players, 0);
    double p = 1.0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto& base_q_tuple = pi.support()[pick[r]];
      p *= pi.probs()[pick[r]];
      for (std::size_t i = 0; i < players; ++i) {
        q[i] = static_cast<std::uint32_t>(q[i] * base_q[i] + base_q_tuple[i]);
      }
    }
    entries.emplace_back(std::move(q), p);
  }
  Distribution rep_pi(sizes(questions), std::move(entries));

  RoundDecoder decoder(base_q, sizes(g.answers()), n);
  auto pred = std::make_shared<const RepeatedPredicate>(g.predicate_ptr(),
                                                        std::move(decoder));
  RepetitionInfo info{std::make_shared<const Game>(g), n};
  return Game(std::move(questions), std::move(answers), std::move(rep_pi),
              std::move(pred), std::move(info));
}

std::size_t round_count(const Game& g) {
  return g.repetition() ? g.repetition()->rounds : 1;
}

Distribution round_distribution(const Game& g, std::size_t round) {
  if (round >= round_count(g)) {
    throw std::out_of_range("round index " + std::to_string(round) +
                            " out of range");
  }
  return base_of(g).pi();
}

namespace {

// Per-round win bits of strategy s on each support tuple of g's pi.
template <class Fn>
void for_each_round_outcome(const Game& g, const Strategy& s, Fn&& fn) {
  auto issues = validate_strategy(g, s);
  if (!issues.empty()) throw std::invalid_argument(issues.front());
  const Game& base = base_of(g);
  RoundDecoder decoder = decoder_for(g);
  const std::size_t players = g.n_players();
  const std::size_t rounds = decoder.rounds();
  std::vector<std::uint32_t> qs, as;
  IndexTuple a(players);
  std::vector<bool> won(rounds);
  for (std::size_t k = 0; k < g.pi().size(); ++k) {
    const auto& q = g.pi().support()[k];
    for (std::size_t i = 0; i < players; ++i) a[i] = s.answer_maps[i][q[i]];
    if (g.repetition()) {
      decoder.split_questions(q, qs);
      decoder.split_answers(a, as);
      for (std::size_t r = 0; r < rounds; ++r) {
        won[r] = base.wins(std::span(qs.data() + r * players, players),
                           std::span(as.data() + r * players, players));
      }
    } else {
      won[0] = g.wins(q, a);
    }
    fn(g.pi().probs()[k], won);
  }
}

}  // namespace

double conditional_win_prob(const Game& g_rep, const Strategy& s,
                            const CoordinateSet& coords) {
  const std::size_t rounds = round_count(g_rep);
  std::vector<std::size_t> c = coords.indices;
  std::sort(c.begin(), c.end());
  if (std::adjacent_find(c.begin(), c.end()) != c.end()) {
    throw std::invalid_argument("coordinate set has duplicates");
  }
  if (!c.empty() && c.back() >= rounds) {
    throw std::invalid_argument("coordinate index out of range");
  }
  std::vector<double> joint_terms, cond_terms;
  for_each_round_outcome(g_rep, s, [&](double p, const std::vector<bool>& won) {
    bool all = std::all_of(won.begin(), won.end(), [](bool b) { return b; });
    bool in_c = std::all_of(c.begin(), c.end(),
                            [&](std::size_t r) { return won[r]; });
    joint_terms.push_back(all ? p : 0.0);
    cond_terms.push_back(in_c ? p : 0.0);
  });
  double cond = pairwise_sum(cond_terms);
  if (!(cond > 0.0)) {
    throw std::domain_error("conditioning event has probability zero");
  }
  return pairwise_sum(joint_terms) / cond;
}

std::vector<double> coordinate_win_probs(const Game& g_rep,
                                         const Strategy& s) {
  const std::size_t rounds = round_count(g_rep);
  std::vector<std::vector<double>> terms(rounds + 1);
  for_each_round_outcome(g_rep, s, [&](double p, const std::vector<bool>& won) {
    bool all = true;
    for (std::size_t r = 0; r < rounds; ++r) {
      terms[r].push_back(won[r] ? p : 0.0);
      all = all && won[r];
    }
    terms[rounds].push_back(all ? p : 0.0);
  });
  std::vector<double> out;
  for (const auto& t : terms) out.push_back(pairwise_sum(t));
  return out;
}

RestrictionFilter constant_answer(std::size_t player, std::uint32_t answer) {
  return StrategyPredicate{
      "const:" + std::to_string(player) + "=" + std::to_string(answer),
      [player, answer](const Strategy& s, const Game&) {
        if (player >= s.answer_maps.size()) return false;
        const auto& m = s.answer_maps[player];
        return std::all_of(m.begin(), m.end(),
                           [answer](std::uint32_t a) { return a == answer; });
      }};
}

RestrictionFilter parse_restriction(const std::string& text, const Game& g) {
  if (text == "none") return NoRestriction{};
  const std::string entropy_prefix = "entropy>=";
  if (text.rfind(entropy_prefix, 0) == 0) {
    auto at = text.find('@');
    if (at == std::string::npos) {
      throw std::invalid_argument("expected entropy>=DELTA@ROUND, got '" +
                                  text + "'");
    }
    EntropyFloor f;
    f.delta = parse_double(text.substr(entropy_prefix.size(),
                                       at - entropy_prefix.size()));
    std::string round = text.substr(at + 1);
    if (round.empty() ||
        round.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad round index in '" + text + "'");
    }
    f.round = std::stoul(round);
    return f;
  }
  const std::string const_prefix = "const:";
  if (text.rfind(const_prefix, 0) == 0) {
    auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("expected const:PLAYER=ANSWER, got '" +
                                  text + "'");
    }
    std::string player_text =
        text.substr(const_prefix.size(), eq - const_prefix.size());
    if (player_text.empty() ||
        player_text.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad player index in '" + text + "'");
    }
    std::size_t player = std::stoul(player_text);
    if (player >= g.n_players()) {
      throw std::invalid_argument("player index out of range in '" + text +
                                  "'");
    }
    std::string symbol = text.substr(eq + 1);
    const auto& alphabet = g.answers()[player];
    auto it = std::find(alphabet.begin(), alphabet.end(), symbol);
    if (it == alphabet.end()) {
      throw std::invalid_argument("unknown answer symbol '" + symbol + "'");
    }
    auto f = constant_answer(
        player, static_cast<std::uint32_t>(it - alphabet.begin()));
    std::get<StrategyPredicate>(f).label = text;
    return f;
  }
  throw std::invalid_argument("unknown restriction '" + text + "'");
}

bool admits(const RestrictionFilter& filter, const Strategy& s,
            const Game& g) {
  if (std::holds_alternative<NoRestriction>(filter)) return true;
  if (const auto* floor = std::get_if<EntropyFloor>(&filter)) {
    if (!(floor->delta >= 0.0) || !std::isfinite(floor->delta)) {
      throw std::invalid_argument("entropy floor must be finite and >= 0");
    }
    auto h = oracle::entropy(round_distribution(g, floor->round));
    return h.shannon_bits >= floor->delta;
  }
  const auto& pred = std::get<StrategyPredicate>(filter);
  return pred.accept(s, g);
}

bool admits_any(std::span<const RestrictionFilter> filters, const Strategy& s,
                const Game& g) {
  if (filters.empty()) return true;
  bool any = false;
  // Every filter is evaluated so malformed filters are always reported.
  for (const auto& f : filters) any = admits(f, s, g) || any;
  return any;
}

bool strategy_independent(std::span<const RestrictionFilter> filters) {
  return std::none_of(filters.begin(), filters.end(), [](const auto& f) {
    return std::holds_alternative<StrategyPredicate>(f);
  });
}

}  // namespace parrep
