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

#include <cmath>

#include "fixtures.hpp"
#include "naive.hpp"
#include "parrep/game_io.hpp"
#include "parrep/transforms.hpp"
#include "parrep/value.hpp"

using namespace parrep;

namespace {

ValueOptions serial() {
  ValueOptions o;
  o.threads = 1;
  return o;
}

}  // namespace

TEST_CASE("anchor preconditions") {
  Game g = fixtures::chsh();
  CHECK_THROWS_AS(anchor(g, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(anchor(g, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(anchor(anchor(g, 0.5), 0.5), std::invalid_argument);
}

TEST_CASE("anchored distribution weights") {
  Game a = anchor(fixtures::chsh(), 0.5);
  CHECK(a.questions()[0].back() == kAnchorSymbol);
  CHECK(a.questions()[0].size() == 3);
  for (std::size_t k = 0; k < a.pi().size(); ++k) {
    const auto& q = a.pi().support()[k];
    int anchored = (q[0] == 2) + (q[1] == 2);
    double expected = std::pow(0.5, anchored) * std::pow(0.5, 2 - anchored) *
                      (anchored == 2 ? 1.0 : anchored == 1 ? 0.5 : 0.25);
    CHECK(a.pi().probs()[k] == doctest::Approx(expected).epsilon(1e-15));
    if (anchored == 0) CHECK(a.pi().probs()[k] == 0.0625);
  }
  CHECK(std::fabs(a.pi().total() - 1.0) <= 1e-12);
  CHECK(validate_game(a).empty());
}

TEST_CASE("anchoring keeps an always-win game at value one") {
  Game a = anchor(fixtures::constant_game(true, {2, 3}, {2, 2}), 0.25);
  CHECK(optimal_value(a, serial()).value == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("anchored game survives the file format") {
  Game a = anchor(fixtures::chsh(), 0.25);
  Game back = parse_game(game_to_json(a));
  CHECK(back.structurally_equal(a));
  CHECK(validate_game(back).empty());
}

TEST_CASE("anchoring value identity on random games") {
  SplitMix64 rng(21);
  for (int t = 0; t < 40; ++t) {
    const std::size_t N = 2 + (t % 2);
    Game g = fixtures::random_game(rng, N, N == 2 ? 3 : 2, 2);
    const double w = optimal_value(g, serial()).value;
    for (double alpha : {0.25, 0.5}) {
      const double wa = optimal_value(anchor(g, alpha), serial()).value;
      CHECK(std::fabs(wa - (1.0 - std::pow(1.0 - alpha, double(N)) * (1.0 - w))) <= 1e-9);
    }
  }
}

TEST_CASE("repeat structure") {
  Game g = fixtures::chsh();
  Game r1 = repeat(g, 1);
  CHECK(r1.question_space().size() == 4);
  CHECK(optimal_value(r1, serial()).value == 0.75);
  Game r2 = repeat(g, 2);
  CHECK(r2.question_space().size() == 16);
  CHECK(r2.questions()[0][1] == "(0,1)");
  CHECK(round_count(r2) == 2);
  CHECK_THROWS_AS(repeat(g, 0), std::invalid_argument);
  Caps tiny;
  tiny.max_joint_tuples = 10;
  CHECK_THROWS_AS(repeat(g, 2, tiny), CapExceeded);
}

TEST_CASE("repeat of an always-win game always wins") {
  Game r = repeat(fixtures::constant_game(true, {2, 2}, {2, 2}), 3);
  CHECK(optimal_value(r, serial()).value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(validate_game(r).empty());
}

TEST_CASE("anchored repetition has (|Q|+1)^n questions per player") {
  SplitMix64 rng(22);
  for (int t = 0; t < 10; ++t) {
    Game g = fixtures::random_game(rng, 2, 3, 2);
    for (std::size_t n = 1; n <= 2; ++n) {
      Game r = repeat(anchor(g, 0.5), n);
      for (std::size_t i = 0; i < 2; ++i) {
        CHECK(r.questions()[i].size() ==
              std::size_t(std::pow(g.questions()[i].size() + 1, n)));
      }
    }
  }
}

TEST_CASE("conditional win probabilities") {
  Game r2 = repeat(fixtures::chsh(), 2);
  // Optimal product strategy: both players answer 0 in each round.
  Strategy s{{std::vector<std::uint32_t>(4, 0), std::vector<std::uint32_t>(4, 0)}};
  CHECK(conditional_win_prob(r2, s, {{0, 1}}) == 1.0);
  const double all = win_probability(r2, s);
  CHECK(all == 0.5625);
  CHECK(conditional_win_prob(r2, s, {{}}) == doctest::Approx(all).epsilon(1e-15));
  // Exact enumeration: P[win both] / P[win first] = 0.5625 / 0.75.
  CHECK(conditional_win_prob(r2, s, {{0}}) == doctest::Approx(0.75).epsilon(1e-15));
  auto probs = coordinate_win_probs(r2, s);
  REQUIRE(probs.size() == 3);
  CHECK(probs[0] == 0.75);
  CHECK(probs[2] == 0.5625);
  CHECK_THROWS(conditional_win_prob(r2, s, {{2}}));
}

TEST_CASE("conditioning on an impossible event is an error") {
  Game r = repeat(fixtures::constant_game(false, {1, 1}, {1, 1}), 2);
  Strategy s{{{0}, {0}}};
  CHECK_THROWS_AS(conditional_win_prob(r, s, {{0}}), std::domain_error);
}

TEST_CASE("conditioning on the full set returns exactly one") {
  SplitMix64 rng(23);
  for (int t = 0; t < 30; ++t) {
    Game g = fixtures::random_game(rng, 2, 2, 2, 0.8);
    Game r = repeat(g, 2);
    Strategy s;
    for (std::size_t i = 0; i < 2; ++i) {
      std::vector<std::uint32_t> m(r.questions()[i].size());
      for (auto& a : m) a = static_cast<std::uint32_t>(rng.below(r.answers()[i].size()));
      s.answer_maps.push_back(m);
    }
    if (win_probability(r, s) > 0.0) {
      CHECK(conditional_win_prob(r, s, {{0, 1}}) == 1.0);
    }
  }
}

TEST_CASE("restriction filters") {
  Game g = fixtures::chsh();
  Strategy s{{{0, 1}, {1, 1}}};
  CHECK(admits(NoRestriction{}, s, g));
  CHECK(admits(EntropyFloor{0, 0.0}, s, g));
  Game r2 = repeat(g, 2);
  // Round 0 of the repeated game is the uniform 4-outcome CHSH round.
  CHECK_FALSE(admits(EntropyFloor{0, 3.0}, s, g));
  CHECK(admits(EntropyFloor{1, 2.0}, Strategy{{std::vector<std::uint32_t>(4, 0),
                                               std::vector<std::uint32_t>(4, 0)}},
               r2));
  CHECK_THROWS_AS(round_distribution(g, 1), std::out_of_range);
  CHECK_THROWS(admits(EntropyFloor{0, -1.0}, s, g));

  auto c = constant_answer(1, 1);
  CHECK(admits(c, s, g));
  CHECK_FALSE(admits(c, Strategy{{{0, 1}, {0, 1}}}, g));

  std::vector<RestrictionFilter> none;
  CHECK(admits_any(none, s, g));
  std::vector<RestrictionFilter> two{constant_answer(0, 0), constant_answer(1, 1)};
  CHECK(admits_any(two, s, g));  // disjunctive
}

TEST_CASE("restriction parsing") {
  Game g = fixtures::chsh();
  Strategy s{{{0, 0}, {0, 0}}};
  CHECK(std::holds_alternative<NoRestriction>(parse_restriction("none", g)));
  auto e = parse_restriction("entropy>=1.5@0", g);
  REQUIRE(std::holds_alternative<EntropyFloor>(e));
  CHECK(std::get<EntropyFloor>(e).delta == 1.5);
  CHECK(admits(parse_restriction("const:0=0", g), s, g));
  CHECK_FALSE(admits(parse_restriction("const:0=1", g), s, g));
  CHECK_THROWS(parse_restriction("const:5=0", g));
  CHECK_THROWS(parse_restriction("const:0=zz", g));
  CHECK_THROWS(parse_restriction("entropy>=x@0", g));
  CHECK_THROWS(parse_restriction("bogus", g));
}
