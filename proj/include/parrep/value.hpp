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
#include <optional>
#include <span>

#include "parrep/game.hpp"
#include "parrep/transforms.hpp"

namespace parrep {

/// Result of a value computation. All values are classical: the maximum over
/// deterministic strategy profiles.
struct ValueReport {
  double value = 0.0;
  std::optional<Strategy> argmax;  // empty when no strategy was admitted
  // Profiles covered by the search; saturates at UINT64_MAX.
  std::uint64_t strategies_searched = 0;
  std::uint64_t admitted = 0;
  bool exact = false;
};

struct ValueOptions {
  Caps caps;
  unsigned threads = 0;  // 0: default_thread_count()
};

/// prod_i |A_i|^|Q_i|, saturating at UINT64_MAX.
std::uint64_t profile_count(const Game& g);

/// Exact optimum. Players 0..N-2 are enumerated as a mixed-radix counter and
/// the last player plays a per-question best response, which covers every
/// profile. Ties go to the lexicographically first profile. Throws
/// CapExceeded when the enumerated part exceeds caps.max_strategy_profiles.
ValueReport optimal_value(const Game& g, const ValueOptions& opts = {});

/// Exact optimum over the admitted strategies (see admits_any). When a filter
/// inspects strategies the full profile space is enumerated and the cap
/// applies to profile_count(g).
ValueReport restricted_value(const Game& g,
                             std::span<const RestrictionFilter> filters,
                             const ValueOptions& opts = {});

/// optimal_value(repeat(g, n)).
ValueReport repeated_value(const Game& g, std::size_t n,
                           const ValueOptions& opts = {});

/// Hill climbing with single-entry flips, strict-improvement acceptance and
/// random restarts. One iteration is one sweep over every (player, question,
/// answer) flip. Deterministic for a given seed; exact is always false.
ValueReport local_search_value(const Game& g, std::uint64_t seed,
                               std::size_t iterations);

}  // namespace parrep
