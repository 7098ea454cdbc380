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

// Checkers for the concave-function amplification inequalities. Each one
// evaluates both sides exactly through the oracle module and reports the
// comparison; a failed comparison is a finding, not an error.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parrep/concave.hpp"
#include "parrep/game.hpp"
#include "parrep/value.hpp"

namespace parrep {

inline constexpr double kDefaultBoundTol = 1e-9;

/// Per-index parameters. Player-indexed bounds read eps/delta/q/hint_h at
/// player indices; bounds over [n] = {0, ..., n} read indices 0..n.
struct AmpParams {
  std::vector<double> eps;
  std::vector<double> delta;
  std::vector<double> q;
  std::vector<double> hint_h;
  std::size_t n = 1;
  std::size_t N = 2;
};

enum class Direction {
  kUpper,  // claim: lhs <= rhs
  kLower,  // claim: lhs >= rhs
};

struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  Direction direction = Direction::kUpper;
  bool satisfied = false;  // within tol
  // Signed margin, positive when the claim holds: rhs - lhs for upper
  // bounds, lhs - rhs for lower bounds.
  double slack = 0.0;
  bool premise_ok = true;
  double tol = kDefaultBoundTol;
  bool extended_domain = false;
  // Strict claims (<, >) additionally record the exact strict comparison.
  bool strict = false;
  bool strict_ok = false;
  // b2 only: smallest constant C for which the bound holds.
  std::optional<double> min_constant;
  std::vector<std::string> notes;
};

BoundReport make_report(std::string name, double lhs, double rhs,
                        Direction direction, bool premise_ok, double tol,
                        bool strict = false);

/// Amplification system over an ordered subset (i, j, k, ...) of m players:
///   lhs = E_Q[ prod_{s in subset} psi_s( E_{Q_s}[mu](Q_{-s}) ) ]
///   rhs = (1/sqrt m) sum_t eps_{s_t} psi_{s_t}( prod_{l in [n] \ {s_0..s_t}}
///         delta_l )
/// premise_ok: E_{Q_{-s}}[psi_s(E_{Q_s}[mu])] <= eps_s psi_s(prod_{l in [n],
/// l != s} delta_l) for every s in the subset. `fam` holds psi per player.
BoundReport check_system1(const MuTable& mu, const Distribution& dist,
                          const std::vector<ConcaveFn>& fam,
                          const AmpParams& p,
                          const std::vector<std::size_t>& subset,
                          double tol = kDefaultBoundTol);

/// E[mu] <= C sup{ eps_0 eps_1, ..., prod_{k<N} eps_k,
///                 eps_0 delta_0, ..., sum_{k<N} eps_k delta_k }.
BoundReport check_bound2(const MuTable& mu, const Distribution& dist,
                         const AmpParams& p, double C,
                         double tol = kDefaultBoundTol);

/// Candidate list for b2 in display order.
std::vector<double> bound2_candidates(const AmpParams& p, std::size_t N);

/// E[mu] <= C(N, n) * Psi^{-1}[ 2^{-N} sup S ]^{2^N}, where S holds
/// E[ psi_o( E_I[mu] ) ] for every player o and nonempty inner set I not
/// containing o (fam[o] supplies psi_o), and Psi^{-1} is psi_inverse_diag of
/// the mult function.
BoundReport check_bound3(const MuTable& mu, const Distribution& dist,
                         const std::vector<ConcaveFn>& fam,
                         const ConcaveFn& mult, const AmpParams& p,
                         double tol = kDefaultBoundTol);

/// Nested expectations entering b3, in (outer player, inner subset
/// bitmask) order.
std::vector<double> bound3_candidates(const MuTable& mu,
                                      const Distribution& dist,
                                      const std::vector<ConcaveFn>& fam);

/// Strict claims E[mu] < B4 and E[mu] < B5 over unordered N-subsets T of
/// [n] = {0..n}:
///   B4 = prod_T (sum_{k in T} eps_k) + sum_T (sum_{k in T} delta_k)
///   B5 = max_T ( prod_{(k, k') in T x T} delta_k eps_k' )^N
/// Throws std::invalid_argument when n + 1 < N.
std::pair<BoundReport, BoundReport> check_bound4_5_6(
    const MuTable& mu, const Distribution& dist, const AmpParams& p,
    double tol = kDefaultBoundTol);

/// Lexicographic list of N-subsets of {0..m-1}.
std::vector<std::vector<std::size_t>> distinct_index_sets(std::size_t m,
                                                          std::size_t N);

enum class LmResult { kT1, kT2, kT3, kC4, kP1, kC2 };

std::string to_string(LmResult which);

/// Two-player results (T1, T3, C4, P1, C2; X = player 0, Y = player 1,
/// psi = fam[0], psi' = fam[1]) and the n-coordinate product bound T2
/// (fam[i] per coordinate). Throws std::invalid_argument on arity mismatch.
BoundReport check_lm_theorem(const MuTable& mu, const Distribution& dist,
                             const std::vector<ConcaveFn>& fam,
                             const AmpParams& p, LmResult which,
                             double tol = kDefaultBoundTol);

/// (1 - eps_i) delta_i / (exp(-N q_i) + N H_i).
double main_theorem1_rhs(const AmpParams& p, std::size_t i);

/// Right side of the q_i premise: n! ln(1/eps_i) prod_{t=1}^{N-1}
/// prod_{l in [n] \ E_t} delta_l, with E_t = {i} plus the first t-1 other
/// indices of [n].
double main_theorem1_q_limit(const AmpParams& p, std::size_t i);

/// q_i < main_theorem1_q_limit, and every eps, delta strictly positive and
/// pairwise distinct.
bool main_theorem1_premise(const AmpParams& p, std::size_t i);

/// lhs = omega(repeat(g, n)) (exhaustive), rhs = main_theorem1_rhs; the claim
/// is lhs >= rhs.
BoundReport check_main_theorem1(const Game& g, const AmpParams& p,
                                std::size_t i, const ValueOptions& opts = {},
                                double tol = kDefaultBoundTol);

struct DecayValue {
  double value = 0.0;
  bool vacuous = false;  // value > 1
};

/// Largest admissible universal constant: 1 / (N^{2N} log2 e).
double multiplayer_c_cap(std::size_t N);

/// s = max{ prod_i log2 |Q_i|, 1 }.
double question_size_factor(const std::vector<std::size_t>& alphabet_sizes);

/// (10/eps) exp(-c alpha^{20N+1} eps^{6N} n / s). Throws std::domain_error
/// unless eps > 0, 0 < alpha <= 1, s >= 1 and 0 < c < multiplayer_c_cap(N).
DecayValue decay_bound_multiplayer(double eps, std::size_t N, std::size_t n,
                                   double alpha, double c, double s);

/// (1 - gamma^9/2)^{c alpha^{8k} n / s}. Throws std::domain_error unless
/// 0 < gamma <= 1 and c, alpha, s > 0.
DecayValue decay_bound_kplayer(double gamma, double c, double alpha,
                               std::size_t k, std::size_t n, double s);

/// Two-player anchored estimate (4/eps) exp(-c alpha^48 eps^17 n / s).
DecayValue decay_bound_anchored(double eps, double alpha, double c,
                                std::size_t n, double s);

}  // namespace parrep
