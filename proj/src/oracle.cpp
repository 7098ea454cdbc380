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

#include "parrep/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "parrep/numeric.hpp"

namespace parrep::oracle {

void require_same_shape(const MuTable& mu, const Distribution& dist) {
  if (mu.shape() != dist.shape()) {
    throw std::invalid_argument(
        "distribution and mu table live on different spaces");
  }
}

std::vector<std::vector<double>> require_product(const Distribution& dist) {
  if (!dist.is_product()) {
    throw NotProductForm("question distribution is not product-form");
  }
  return dist.marginals();
}

double expect(const MuTable& mu, const Distribution& dist) {
  require_same_shape(mu, dist);
  std::vector<double> terms(dist.size());
  for (std::size_t k = 0; k < dist.size(); ++k) {
    terms[k] = dist.probs()[k] * mu.at(dist.support()[k]);
  }
  return pairwise_sum(terms);
}

namespace {

// Shared core of expect_inner / nested_expect: marginals precomputed.
double inner_mean(const MuTable& mu,
                  const std::vector<std::vector<double>>& marginals,
                  const std::vector<std::size_t>& inner, IndexTuple& tuple) {
  std::vector<std::size_t> radix;
  for (std::size_t i : inner) radix.push_back(marginals[i].size());
  ProductSpace space(radix);
  std::vector<double> terms(space.size());
  IndexTuple sub(inner.size());
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    space.decode(idx, sub);
    double w = 1.0;
    for (std::size_t k = 0; k < inner.size(); ++k) {
      tuple[inner[k]] = sub[k];
      w *= marginals[inner[k]][sub[k]];
    }
    terms[idx] = w * mu.at(tuple);
  }
  return pairwise_sum(terms);
}

std::vector<std::size_t> checked_inner(const std::vector<std::size_t>& inner,
                                       std::size_t n) {
  std::vector<std::size_t> sorted = inner;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("inner player set has duplicates");
  }
  if (!sorted.empty() && sorted.back() >= n) {
    throw std::invalid_argument("inner player index out of range");
  }
  return sorted;
}

std::vector<std::size_t> complement(const std::vector<std::size_t>& sorted,
                                    std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::binary_search(sorted.begin(), sorted.end(), i)) out.push_back(i);
  }
  return out;
}

}  // namespace

double expect_inner(const MuTable& mu, const Distribution& dist,
                    const std::vector<std::size_t>& inner_players,
                    std::span<const std::uint32_t> fixed) {
  require_same_shape(mu, dist);
  const std::size_t n = mu.n_players();
  auto inner = checked_inner(inner_players, n);
  if (fixed.size() != n) {
    throw std::invalid_argument("fixed question tuple is incomplete");
  }
  for (std::size_t i : complement(inner, n)) {
    if (fixed[i] >= dist.shape()[i]) {
      throw std::invalid_argument("fixed question out of range");
    }
  }
  auto marginals = require_product(dist);
  IndexTuple tuple(fixed.begin(), fixed.end());
  return inner_mean(mu, marginals, inner, tuple);
}

double nested_expect(const MuTable& mu, const Distribution& dist,
                     const std::vector<std::size_t>& inner_players,
                     const ScalarFn& psi) {
  require_same_shape(mu, dist);
  const std::size_t n = mu.n_players();
  auto inner = checked_inner(inner_players, n);
  auto outer = complement(inner, n);
  auto marginals = require_product(dist);

  std::vector<std::size_t> radix;
  for (std::size_t i : outer) radix.push_back(marginals[i].size());
  ProductSpace space(radix);
  std::vector<double> terms(space.size());
  IndexTuple sub(outer.size()), tuple(n, 0);
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    space.decode(idx, sub);
    double w = 1.0;
    for (std::size_t k = 0; k < outer.size(); ++k) {
      tuple[outer[k]] = sub[k];
      w *= marginals[outer[k]][sub[k]];
    }
    terms[idx] = w == 0.0 ? 0.0 : w * psi(inner_mean(mu, marginals, inner, tuple));
  }
  return pairwise_sum(terms);
}

std::vector<double> conditional_means(const MuTable& mu,
                                      const Distribution& dist,
                                      std::size_t player) {
  require_same_shape(mu, dist);
  const std::size_t n = mu.n_players();
  if (player >= n) throw std::invalid_argument("player index out of range");
  auto marginals = require_product(dist);
  std::vector<std::size_t> others;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != player) others.push_back(i);
  }
  std::vector<double> out(dist.shape()[player]);
  IndexTuple tuple(n, 0);
  for (std::size_t q = 0; q < out.size(); ++q) {
    tuple[player] = static_cast<std::uint32_t>(q);
    out[q] = inner_mean(mu, marginals, others, tuple);
  }
  return out;
}

EntropyReport entropy(std::span<const double> probs) {
  std::vector<double> terms;
  terms.reserve(probs.size());
  for (double p : probs) {
    if (p < 0.0) throw std::invalid_argument("negative probability");
    terms.push_back(p > 0.0 ? p * std::log2(p) : 0.0);
  }
  double s = pairwise_sum(terms);
  if (s == 0.0) return {0.0, 0.0};
  return {-s, s};
}

EntropyReport entropy(const Distribution& dist) {
  auto issues = dist.validate();
  if (!issues.empty()) throw std::invalid_argument(issues.front());
  return entropy(dist.probs());
}

ThresholdSet threshold_set(const MuTable& mu, const Distribution& dist,
                           std::size_t player, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("threshold must lie in [0, 1]");
  }
  auto means = conditional_means(mu, dist, player);
  ThresholdSet out{player, delta, {}};
  for (std::size_t q = 0; q < means.size(); ++q) {
    if (means[q] >= delta) out.members.push_back(static_cast<std::uint32_t>(q));
  }
  return out;
}

}  // namespace parrep::oracle
