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
#include <string>
#include <vector>

#include "parrep/bounds.hpp"
#include "parrep/game.hpp"

namespace parrep {

enum class BoundKind {
  kSystem1,
  kB2,
  kB3,
  kB4,
  kB5_6,
  kLmT1,
  kLmT2,
  kLmT3,
  kLmC4,
  kLmP1,
  kLmC2,
  kMainT1,
};

std::string to_string(BoundKind kind);
/// Throws std::invalid_argument for unknown names.
BoundKind parse_bound_kind(const std::string& name);
std::vector<std::string> bound_kind_names();

struct SamplerConfig {
  std::size_t min_players = 2;
  std::size_t max_players = 3;
  std::size_t max_alphabet = 3;
  std::size_t max_answers = 2;  // main_t1 games
  std::size_t max_n = 3;
  unsigned max_power = 3;
  // Resample (up to max_attempts) until the checker's premise holds.
  bool require_premise = false;
  std::size_t max_attempts = 64;
  double tol = kDefaultBoundTol;
  Caps caps;
  unsigned threads = 0;

  /// Defaults tuned per bound (player counts, alphabet sizes).
  static SamplerConfig defaults_for(BoundKind kind);
};

/// Everything a checker consumes. Fields a given bound does not use stay
/// empty.
struct Instance {
  BoundKind kind = BoundKind::kB2;
  MuTable mu;
  Distribution dist;
  std::vector<ConcaveFn> fam;
  std::optional<ConcaveFn> mult;
  AmpParams params;
  std::vector<std::size_t> subset;
  double constant = 1.0;
  std::optional<Game> game;
  std::size_t player = 0;
};

/// Deterministic in (kind, config, seed, trial, attempt).
Instance sample_instance(BoundKind kind, const SamplerConfig& config,
                         std::uint64_t seed, std::uint64_t trial,
                         std::uint64_t attempt = 0);

/// Runs the checker for inst.kind (b4 and b5_6 pick the respective half of
/// check_bound4_5_6).
BoundReport run_checker(const Instance& inst, double tol,
                        const ValueOptions& opts = {});

struct FindingRow {
  BoundReport report;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
};

struct FindingsTable {
  BoundKind kind = BoundKind::kB2;
  std::vector<FindingRow> rows;
  std::size_t premise_count = 0;
  std::size_t satisfied_count = 0;
  std::size_t violation_count = 0;  // premise holds, claim fails
  std::vector<std::size_t> min_slack_rows;  // up to 5, ascending slack
};

bool is_violation(const BoundReport& r);

/// Samples `trials` instances and checks each. Trials run on independent
/// substreams, so the table does not depend on the worker count.
FindingsTable search_counterexamples(BoundKind kind,
                                     const SamplerConfig& config,
                                     std::uint64_t seed, std::size_t trials);

/// Column order: name, lhs, rhs, satisfied, slack, premise_ok,
/// extended_domain_flag, seed, trial, violation. Comment lines start with
/// '#'.
std::string findings_csv_header();
std::string findings_csv_row(const FindingRow& row);
std::string findings_to_csv(const FindingsTable& table,
                            const std::vector<std::string>& comments);

}  // namespace parrep
