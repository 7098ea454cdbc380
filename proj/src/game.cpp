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

#include "parrep/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "parrep/numeric.hpp"

namespace parrep {

ProductSpace::ProductSpace(std::vector<std::size_t> radix)
    : radix_(std::move(radix)) {
  size_ = 1;
  for (std::size_t r : radix_) size_ *= r;
}

std::size_t ProductSpace::index(std::span<const std::uint32_t> tuple) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < radix_.size(); ++i) {
    idx = idx * radix_[i] + tuple[i];
  }
  return idx;
}

void ProductSpace::decode(std::size_t index,
                          std::span<std::uint32_t> out) const {
  for (std::size_t i = radix_.size(); i-- > 0;) {
    out[i] = static_cast<std::uint32_t>(index % radix_[i]);
    index /= radix_[i];
  }
}

IndexTuple ProductSpace::decode(std::size_t index) const {
  IndexTuple t(radix_.size());
  decode(index, t);
  return t;
}

// --- Distribution ----------------------------------------------------------

Distribution::Distribution(std::vector<std::size_t> shape,
                           std::vector<std::pair<IndexTuple, double>> entries)
    : space_(std::move(shape)) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& [tuple, p] = entries[k];
    if (tuple.size() != space_.rank()) {
      throw std::invalid_argument("distribution tuple has wrong length");
    }
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (tuple[i] >= space_.radix(i)) {
        throw std::invalid_argument("distribution tuple out of range");
      }
    }
    if (k > 0 && entries[k - 1].first == tuple) {
      throw std::invalid_argument("duplicate distribution support entry");
    }
    support_.push_back(tuple);
    probs_.push_back(p);
  }
}

std::vector<double> Distribution::dense() const {
  std::vector<double> out(space_.size(), 0.0);
  for (std::size_t k = 0; k < support_.size(); ++k) {
    out[space_.index(support_[k])] += probs_[k];
  }
  return out;
}

double Distribution::total() const { return pairwise_sum(probs_); }

std::vector<double> Distribution::marginal(std::size_t coordinate) const {
  std::vector<double> out(space_.radix(coordinate), 0.0);
  for (std::size_t k = 0; k < support_.size(); ++k) {
    out[support_[k][coordinate]] += probs_[k];
  }
  return out;
}

std::vector<std::vector<double>> Distribution::marginals() const {
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < space_.rank(); ++i) out.push_back(marginal(i));
  return out;
}

bool Distribution::is_product(double tol) const {
  auto m = marginals();
  IndexTuple t(space_.rank());
  std::vector<double> d = dense();
  for (std::size_t idx = 0; idx < d.size(); ++idx) {
    space_.decode(idx, t);
    double p = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) p *= m[i][t[i]];
    if (std::abs(p - d[idx]) > tol) return false;
  }
  return true;
}

std::vector<std::string> Distribution::validate() const {
  std::vector<std::string> issues;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      issues.emplace_back("negative probability");
      break;
    }
  }
  if (std::abs(total() - 1.0) > kProbTol) {
    issues.emplace_back("distribution not normalized");
  }
  return issues;
}

Distribution uniform_dist(std::vector<std::size_t> shape) {
  ProductSpace space(shape);
  if (std::find(shape.begin(), shape.end(), 0) != shape.end()) {
    throw std::invalid_argument("empty alphabet");
  }
  std::vector<std::pair<IndexTuple, double>> entries;
  entries.reserve(space.size());
  double p = 1.0 / static_cast<double>(space.size());
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    entries.emplace_back(space.decode(idx), p);
  }
  return Distribution(std::move(shape), std::move(entries));
}

Distribution uniform_dist(std::span<const Alphabet> alphabets) {
  std::vector<std::size_t> shape;
  for (const auto& a : alphabets) shape.push_back(a.size());
  return uniform_dist(std::move(shape));
}

Distribution product_dist(const std::vector<std::vector<double>>& marginals) {
  std::vector<std::size_t> shape;
  for (const auto& m : marginals) shape.push_back(m.size());
  ProductSpace space(shape);
  std::vector<std::pair<IndexTuple, double>> entries;
  IndexTuple t(shape.size());
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    space.decode(idx, t);
    double p = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) p *= marginals[i][t[i]];
    if (p > 0.0) entries.emplace_back(t, p);
  }
  return Distribution(std::move(shape), std::move(entries));
}

// --- Predicates and games --------------------------------------------------

DensePredicate::DensePredicate(ProductSpace questions, ProductSpace answers,
                               std::vector<std::uint8_t> table)
    : questions_(std::move(questions)),
      answers_(std::move(answers)),
      table_(std::move(table)) {
  if (table_.size() != questions_.size() * answers_.size()) {
    throw std::invalid_argument("predicate table is not total");
  }
}

bool DensePredicate::wins(std::span<const std::uint32_t> questions,
                          std::span<const std::uint32_t> answers) const {
  return table_[questions_.index(questions) * answers_.size() +
                answers_.index(answers)] != 0;
}

Game::Game(std::vector<Alphabet> questions, std::vector<Alphabet> answers,
           Distribution pi, std::shared_ptr<const Predicate> predicate,
           std::optional<RepetitionInfo> repetition)
    : questions_(std::move(questions)),
      answers_(std::move(answers)),
      pi_(std::move(pi)),
      predicate_(std::move(predicate)),
      repetition_(std::move(repetition)) {
  if (questions_.size() != answers_.size()) {
    throw std::invalid_argument(
        "question and answer alphabet counts differ");
  }
  if (!predicate_) throw std::invalid_argument("missing predicate");
  if (pi_.shape().size() != questions_.size()) {
    throw std::invalid_argument("distribution arity does not match players");
  }
  for (std::size_t i = 0; i < questions_.size(); ++i) {
    if (pi_.shape()[i] != questions_[i].size()) {
      throw std::invalid_argument(
          "distribution shape does not match question alphabets");
    }
  }
}

ProductSpace Game::question_space() const {
  std::vector<std::size_t> r;
  for (const auto& a : questions_) r.push_back(a.size());
  return ProductSpace(std::move(r));
}

ProductSpace Game::answer_space() const {
  std::vector<std::size_t> r;
  for (const auto& a : answers_) r.push_back(a.size());
  return ProductSpace(std::move(r));
}

bool Game::structurally_equal(const Game& other) const {
  if (questions_ != other.questions_ || answers_ != other.answers_ ||
      !(pi_ == other.pi_)) {
    return false;
  }
  ProductSpace qs = question_space(), as = answer_space();
  IndexTuple q(qs.rank()), a(as.rank());
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    qs.decode(qi, q);
    for (std::size_t ai = 0; ai < as.size(); ++ai) {
      as.decode(ai, a);
      if (wins(q, a) != other.wins(q, a)) return false;
    }
  }
  return true;
}

namespace {

bool has_duplicates(const Alphabet& a) {
  std::set<std::string> seen(a.begin(), a.end());
  return seen.size() != a.size();
}

}  // namespace

std::vector<std::string> validate_game(const Game& g) {
  std::vector<std::string> issues;
  if (g.n_players() == 0) issues.emplace_back("no players");
  for (std::size_t i = 0; i < g.n_players(); ++i) {
    const std::string who = " (player " + std::to_string(i) + ")";
    if (g.questions()[i].empty()) {
      issues.push_back("empty alphabet: questions" + who);
    }
    if (g.answers()[i].empty()) {
      issues.push_back("empty alphabet: answers" + who);
    }
    if (has_duplicates(g.questions()[i])) {
      issues.push_back("duplicate question symbol" + who);
    }
    if (has_duplicates(g.answers()[i])) {
      issues.push_back("duplicate answer symbol" + who);
    }
  }
  for (auto& s : g.pi().validate()) issues.push_back(std::move(s));
  return issues;
}

std::vector<std::string> validate_strategy(const Game& g, const Strategy& s) {
  std::vector<std::string> issues;
  if (s.answer_maps.size() != g.n_players()) {
    issues.emplace_back("strategy has wrong number of players");
    return issues;
  }
  for (std::size_t i = 0; i < g.n_players(); ++i) {
    if (s.answer_maps[i].size() != g.questions()[i].size()) {
      issues.push_back("answer map of player " + std::to_string(i) +
                       " is not total");
      continue;
    }
    for (auto a : s.answer_maps[i]) {
      if (a >= g.answers()[i].size()) {
        issues.push_back("answer of player " + std::to_string(i) +
                         " outside its alphabet");
        break;
      }
    }
  }
  return issues;
}

double win_probability(const Game& g, const Strategy& s) {
  auto issues = validate_strategy(g, s);
  if (!issues.empty()) throw std::invalid_argument(issues.front());
  const auto& pi = g.pi();
  std::vector<double> terms;
  terms.reserve(pi.size());
  IndexTuple a(g.n_players());
  for (std::size_t k = 0; k < pi.size(); ++k) {
    const auto& q = pi.support()[k];
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = s.answer_maps[i][q[i]];
    terms.push_back(g.wins(q, a) ? pi.probs()[k] : 0.0);
  }
  return pairwise_sum(terms);
}

// --- MuTable ---------------------------------------------------------------

MuTable::MuTable(std::vector<Alphabet> alphabets, std::vector<double> values)
    : alphabets_(std::move(alphabets)), values_(std::move(values)) {
  std::vector<std::size_t> r;
  for (const auto& a : alphabets_) r.push_back(a.size());
  space_ = ProductSpace(std::move(r));
  if (values_.size() != space_.size()) {
    throw std::invalid_argument("mu table is not total");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("mu entry outside [0, 1]");
    }
  }
}

MuTable MuTable::constant(std::vector<Alphabet> alphabets, double c) {
  std::size_t n = 1;
  for (const auto& a : alphabets) n *= a.size();
  return MuTable(std::move(alphabets), std::vector<double>(n, c));
}

std::vector<Alphabet> binary_alphabets(std::size_t n) {
  return std::vector<Alphabet>(n, Alphabet{"0", "1"});
}

}  // namespace parrep
