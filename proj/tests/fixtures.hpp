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

#include <memory>
#include <numeric>

#include "parrep/game.hpp"
#include "parrep/rng.hpp"

namespace fixtures {

using namespace parrep;

inline std::vector<Alphabet> labels(std::vector<std::size_t> sizes) {
  std::vector<Alphabet> out;
  for (auto s : sizes) {
    Alphabet a;
    for (std::size_t k = 0; k < s; ++k) a.push_back(std::to_string(k));
    out.push_back(a);
  }
  return out;
}

inline Game chsh() {
  auto q = binary_alphabets(2);
  return make_game(q, q, uniform_dist(q), [](auto x, auto a) {
    return (a[0] ^ a[1]) == (x[0] & x[1]);
  });
}

inline Game constant_game(bool win, std::vector<std::size_t> qs,
                          std::vector<std::size_t> as) {
  auto q = labels(qs);
  return make_game(q, labels(as), uniform_dist(q),
                   [win](auto, auto) { return win; });
}

// Random game with a random (not necessarily product) referee distribution.
inline Game random_game(SplitMix64& rng, std::size_t N, std::size_t max_q,
                        std::size_t max_a, double p_win = 0.5) {
  std::vector<std::size_t> qs(N), as(N);
  for (auto& s : qs) s = 1 + rng.below(max_q);
  for (auto& s : as) s = 1 + rng.below(max_a);
  ProductSpace space(qs);
  std::vector<double> w(space.size());
  for (auto& v : w) v = 1.0 - rng.uniform();
  double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<std::pair<IndexTuple, double>> entries;
  for (std::size_t k = 0; k < w.size(); ++k) {
    entries.emplace_back(space.decode(k), w[k] / total);
  }
  ProductSpace aspace(as);
  std::vector<std::uint8_t> table(space.size() * aspace.size());
  for (auto& t : table) t = rng.bernoulli(p_win) ? 1 : 0;
  return Game(labels(qs), labels(as), Distribution(qs, std::move(entries)),
              std::make_shared<const DensePredicate>(space, aspace, table));
}

// mu = indicator(q_0 == q_1) over two binary players.
inline MuTable diag_mu() {
  return MuTable(binary_alphabets(2), {1.0, 0.0, 0.0, 1.0});
}

}  // namespace fixtures
