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
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "parrep/game.hpp"

namespace parrep {

/// alpha-anchoring. Each player's alphabet gains kAnchorSymbol, which the
/// referee delivers to each player independently with probability alpha;
/// any anchored player makes the round an automatic win.
///
/// Throws std::invalid_argument unless 0 < alpha < 1, or if a question
/// alphabet already contains the anchor symbol.
Game anchor(const Game& g, double alpha);

/// n-fold parallel repetition: per-player questions and answers become
/// n-tuples (symbol "(x,y,...)"), pi becomes pi^n and the predicate is the
/// AND of the base predicate over the coordinates. The repeated predicate is
/// evaluated lazily. Throws CapExceeded when the joint question count
/// exceeds caps.max_joint_tuples.
Game repeat(const Game& g, std::size_t n, const Caps& caps = {});

/// Symbol used for the n-tuple (s_0, ..., s_{n-1}).
std::string tuple_symbol(std::span<const std::string> parts);

struct CoordinateSet {
  std::vector<std::size_t> indices;
};

/// P[win every coordinate | win every coordinate in C] for a repeated game
/// (a game without repetition info counts as one round). Throws
/// std::domain_error when the conditioning event has probability zero, and
/// std::invalid_argument for out-of-range or duplicate coordinates.
double conditional_win_prob(const Game& g_rep, const Strategy& s,
                            const CoordinateSet& coords);

/// Per-coordinate win probabilities and the joint win probability for a
/// repeated game; handy for reporting.
std::vector<double> coordinate_win_probs(const Game& g_rep, const Strategy& s);

struct NoRestriction {};

/// Shannon entropy (bits) of round `round`'s joint question distribution
/// must be at least `delta`.
struct EntropyFloor {
  std::size_t round = 0;
  double delta = 0.0;
};

struct StrategyPredicate {
  std::string label;
  std::function<bool(const Strategy&, const Game&)> accept;
};

using RestrictionFilter =
    std::variant<NoRestriction, EntropyFloor, StrategyPredicate>;

/// Strategy filter: player answers `answer` (an answer index) on every
/// question.
RestrictionFilter constant_answer(std::size_t player, std::uint32_t answer);

/// Parses the command-line mini-language: "none", "entropy>=DELTA@ROUND" or
/// "const:PLAYER=ANSWER" (ANSWER is an answer symbol of the game).
RestrictionFilter parse_restriction(const std::string& text, const Game& g);

/// Number of rounds the filters may refer to (repetition count, or 1).
std::size_t round_count(const Game& g);

/// Joint question distribution of one round.
Distribution round_distribution(const Game& g, std::size_t round);

/// Throws std::out_of_range for an entropy round index >= round_count(g),
/// std::invalid_argument for a negative or non-finite delta.
bool admits(const RestrictionFilter& filter, const Strategy& s, const Game& g);

/// Disjunctive reading: admitted if any filter admits; an empty list admits
/// everything.
bool admits_any(std::span<const RestrictionFilter> filters, const Strategy& s,
                const Game& g);

/// True when every filter's verdict is independent of the strategy.
bool strategy_independent(std::span<const RestrictionFilter> filters);

}  // namespace parrep
