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

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace parrep {

using Alphabet = std::vector<std::string>;
using IndexTuple = std::vector<std::uint32_t>;

/// Reserved question symbol delivered by the anchoring transform.
inline constexpr const char* kAnchorSymbol = "⊥";

/// Normalization tolerance for probability tables.
inline constexpr double kProbTol = 1e-12;

/// Desk-scale limits. Exceeding one raises CapExceeded.
struct Caps {
  std::uint64_t max_joint_tuples = 1'000'000;
  std::uint64_t max_strategy_profiles = 100'000'000;
};

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mixed-radix index over a finite product space. Coordinate 0 is the most
/// significant digit, so index order is lexicographic order.
class ProductSpace {
 public:
  ProductSpace() = default;
  explicit ProductSpace(std::vector<std::size_t> radix);

  std::size_t rank() const { return radix_.size(); }
  std::size_t size() const { return size_; }
  const std::vector<std::size_t>& radix() const { return radix_; }
  std::size_t radix(std::size_t i) const { return radix_[i]; }

  std::size_t index(std::span<const std::uint32_t> tuple) const;
  void decode(std::size_t index, std::span<std::uint32_t> out) const;
  IndexTuple decode(std::size_t index) const;

  bool operator==(const ProductSpace&) const = default;

 private:
  std::vector<std::size_t> radix_;
  std::size_t size_ = 1;
};

/// Probability table over a finite product space, stored sparsely with the
/// support in lexicographic order.
class Distribution {
 public:
  Distribution() = default;
  // Sorts entries; throws std::invalid_argument on duplicate or out-of-range
  // tuples. Normalization is not enforced here (see validate()).
  Distribution(std::vector<std::size_t> shape,
               std::vector<std::pair<IndexTuple, double>> entries);

  const std::vector<std::size_t>& shape() const { return space_.radix(); }
  const ProductSpace& space() const { return space_; }
  const std::vector<IndexTuple>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  std::size_t size() const { return probs_.size(); }

  std::vector<double> dense() const;
  double total() const;

  /// Marginal of one coordinate, as a dense vector over that alphabet.
  std::vector<double> marginal(std::size_t coordinate) const;
  std::vector<std::vector<double>> marginals() const;

  /// True when the table equals the product of its marginals within tol.
  bool is_product(double tol = kProbTol) const;

  std::vector<std::string> validate() const;

  bool operator==(const Distribution&) const = default;

 private:
  ProductSpace space_;
  std::vector<IndexTuple> support_;
  std::vector<double> probs_;
};

Distribution uniform_dist(std::span<const Alphabet> alphabets);
Distribution uniform_dist(std::vector<std::size_t> shape);
Distribution product_dist(const std::vector<std::vector<double>>& marginals);

/// Win predicate V(a | q) over index tuples.
class Predicate {
 public:
  virtual ~Predicate() = default;
  virtual bool wins(std::span<const std::uint32_t> questions,
                    std::span<const std::uint32_t> answers) const = 0;
};

class DensePredicate final : public Predicate {
 public:
  DensePredicate(ProductSpace questions, ProductSpace answers,
                 std::vector<std::uint8_t> table);

  bool wins(std::span<const std::uint32_t> questions,
            std::span<const std::uint32_t> answers) const override;

 private:
  ProductSpace questions_;
  ProductSpace answers_;
  std::vector<std::uint8_t> table_;
};

class Game;

/// Set when a game was produced by parallel repetition.
struct RepetitionInfo {
  std::shared_ptr<const Game> base;
  std::size_t rounds = 1;
};

/// N-player nonlocal game. Immutable once built; copies share the predicate.
class Game {
 public:
  // Throws std::invalid_argument when the pieces have inconsistent shapes.
  // Semantic problems (normalization, empty alphabets) are left to
  // validate_game so they can be reported rather than thrown.
  Game(std::vector<Alphabet> questions, std::vector<Alphabet> answers,
       Distribution pi, std::shared_ptr<const Predicate> predicate,
       std::optional<RepetitionInfo> repetition = std::nullopt);

  std::size_t n_players() const { return questions_.size(); }
  const std::vector<Alphabet>& questions() const { return questions_; }
  const std::vector<Alphabet>& answers() const { return answers_; }
  const Distribution& pi() const { return pi_; }
  const Predicate& predicate() const { return *predicate_; }
  const std::shared_ptr<const Predicate>& predicate_ptr() const {
    return predicate_;
  }
  const std::optional<RepetitionInfo>& repetition() const {
    return repetition_;
  }

  ProductSpace question_space() const;
  ProductSpace answer_space() const;

  bool wins(std::span<const std::uint32_t> q,
            std::span<const std::uint32_t> a) const {
    return predicate_->wins(q, a);
  }

  /// Structural equality: alphabets, referee distribution, and the predicate
  /// evaluated on every (question, answer) pair.
  bool structurally_equal(const Game& other) const;

 private:
  std::vector<Alphabet> questions_;
  std::vector<Alphabet> answers_;
  Distribution pi_;
  std::shared_ptr<const Predicate> predicate_;
  std::optional<RepetitionInfo> repetition_;
};

/// Builds a game with a dense predicate from a callback over index tuples.
template <class WinFn>
Game make_game(std::vector<Alphabet> questions, std::vector<Alphabet> answers,
               Distribution pi, WinFn&& win);

/// Returns the list of violated invariants; empty means valid.
std::vector<std::string> validate_game(const Game& g);

/// One deterministic answer map per player, as indices into the alphabets.
struct Strategy {
  std::vector<std::vector<std::uint32_t>> answer_maps;

  bool operator==(const Strategy&) const = default;
};

std::vector<std::string> validate_strategy(const Game& g, const Strategy& s);

/// Exact probability that `s` wins `g`.
double win_probability(const Game& g, const Strategy& s);

/// Dense table mu: Q_1 x ... x Q_N -> [0, 1].
class MuTable {
 public:
  MuTable() = default;
  // Throws std::invalid_argument if the table is not total or an entry lies
  // outside [0, 1].
  MuTable(std::vector<Alphabet> alphabets, std::vector<double> values);

  static MuTable constant(std::vector<Alphabet> alphabets, double c);

  std::size_t n_players() const { return alphabets_.size(); }
  const std::vector<Alphabet>& alphabets() const { return alphabets_; }
  const std::vector<double>& values() const { return values_; }
  const ProductSpace& space() const { return space_; }
  std::vector<std::size_t> shape() const { return space_.radix(); }

  double at(std::span<const std::uint32_t> tuple) const {
    return values_[space_.index(tuple)];
  }
  double at_index(std::size_t index) const { return values_[index]; }

  bool operator==(const MuTable&) const = default;

 private:
  std::vector<Alphabet> alphabets_;
  ProductSpace space_;
  std::vector<double> values_;
};

/// Binary alphabets {"0", "1"} for each of n players.
std::vector<Alphabet> binary_alphabets(std::size_t n);

// ---------------------------------------------------------------------------

template <class WinFn>
Game make_game(std::vector<Alphabet> questions, std::vector<Alphabet> answers,
               Distribution pi, WinFn&& win) {
  std::vector<std::size_t> qr, ar;
  for (const auto& a : questions) qr.push_back(a.size());
  for (const auto& a : answers) ar.push_back(a.size());
  ProductSpace qs(qr), as(ar);
  std::vector<std::uint8_t> table(qs.size() * as.size(), 0);
  IndexTuple q(qs.rank()), a(as.rank());
  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    qs.decode(qi, q);
    for (std::size_t ai = 0; ai < as.size(); ++ai) {
      as.decode(ai, a);
      table[qi * as.size() + ai] = win(std::span<const std::uint32_t>(q),
                                       std::span<const std::uint32_t>(a))
                                       ? 1
                                       : 0;
    }
  }
  auto pred = std::make_shared<const DensePredicate>(qs, as, std::move(table));
  return Game(std::move(questions), std::move(answers), std::move(pi),
              std::move(pred));
}

}  // namespace parrep
