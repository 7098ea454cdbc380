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

// Exact expectations, nested expectations, entropies and threshold sets
// over finite product question spaces. Everything is computed by direct
// enumeration; these are the reference values the bound checkers use.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "parrep/game.hpp"

namespace parrep::oracle {

using ScalarFn = std::function<double(double)>;

/// Raised when an operation needs pi = prod_i P[Q_i] and gets a correlated
/// distribution.
class NotProductForm : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// E[mu] under dist.
double expect(const MuTable& mu, const Distribution& dist);

/// Expectation of mu over the marginals of `inner_players`, with every other
/// coordinate pinned by `fixed` (a full-length tuple; entries of inner
/// players are ignored).
double expect_inner(const MuTable& mu, const Distribution& dist,
                    const std::vector<std::size_t>& inner_players,
                    std::span<const std::uint32_t> fixed);

/// E_outer[ psi( E_inner[mu] ) ], the outer expectation running over every
/// coordinate not in `inner_players`.
double nested_expect(const MuTable& mu, const Distribution& dist,
                     const std::vector<std::size_t>& inner_players,
                     const ScalarFn& psi);

inline double nested_expect(const MuTable& mu, const Distribution& dist,
                            std::size_t inner_player, const ScalarFn& psi) {
  return nested_expect(mu, dist, std::vector<std::size_t>{inner_player}, psi);
}

/// Conditional mean E[mu | Q_i = q] for each q in player i's alphabet.
std::vector<double> conditional_means(const MuTable& mu,
                                      const Distribution& dist,
                                      std::size_t player);

struct EntropyReport {
  double shannon_bits = 0.0;  // -sum p log2 p
  double paper_signed = 0.0;  // sum p log2 p, sign as printed
};

EntropyReport entropy(const Distribution& dist);
EntropyReport entropy(std::span<const double> probs);

struct ThresholdSet {
  std::size_t player_index = 0;
  double threshold = 0.0;
  std::vector<std::uint32_t> members;  // ascending
};

/// { q in Q_i : E[mu | Q_i = q] >= delta }. Ties are members.
ThresholdSet threshold_set(const MuTable& mu, const Distribution& dist,
                           std::size_t player, double delta);

/// Throws NotProductForm unless dist is product-form; returns its marginals.
std::vector<std::vector<double>> require_product(const Distribution& dist);

/// Throws std::invalid_argument when dist and mu live on different spaces.
void require_same_shape(const MuTable& mu, const Distribution& dist);

}  // namespace parrep::oracle
