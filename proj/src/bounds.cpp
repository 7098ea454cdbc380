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

#include "parrep/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parrep/numeric.hpp"
#include "parrep/oracle.hpp"
#include "parrep/transforms.hpp"

namespace parrep {

namespace {

void require_size(const std::vector<double>& v, std::size_t n,
                  const char* what) {
  if (v.size() < n) {
    throw std::invalid_argument(std::string(what) + " needs at least " +
                                std::to_string(n) + " entries");
  }
}

void require_scalar_family(const std::vector<ConcaveFn>& fam, std::size_t n) {
  if (fam.size() < n) {
    throw std::invalid_argument("concave family needs " + std::to_string(n) +
                                " functions");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!fam[i].scalar()) {
      throw std::invalid_argument("concave family entries must be scalar");
    }
  }
}

oracle::ScalarFn as_scalar(const ConcaveFn& f) {
  return [&f](double x) { return f(x); };
}

// prod_{l in [n], l not in excluded} delta_l.
double delta_product_excluding(const std::vector<double>& delta,
                               std::size_t n,
                               const std::vector<std::size_t>& excluded) {
  double prod = 1.0;
  for (std::size_t l = 0; l <= n; ++l) {
    if (std::find(excluded.begin(), excluded.end(), l) == excluded.end()) {
      prod *= delta[l];
    }
  }
  return prod;
}

}  // namespace

BoundReport make_report(std::string name, double lhs, double rhs,
                        Direction direction, bool premise_ok, double tol,
                        bool strict) {
  BoundReport r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.direction = direction;
  r.premise_ok = premise_ok;
  r.tol = tol;
  r.strict = strict;
  if (direction == Direction::kUpper) {
    r.slack = rhs - lhs;
    r.strict_ok = lhs < rhs;
  } else {
    r.slack = lhs - rhs;
    r.strict_ok = lhs > rhs;
  }
  r.satisfied = r.slack >= -tol;
  return r;
}

// --- system1 ---------------------------------------------------------------

BoundReport check_system1(const MuTable& mu, const Distribution& dist,
                          const std::vector<ConcaveFn>& fam,
                          const AmpParams& p,
                          const std::vector<std::size_t>& subset,
                          double tol) {
  oracle::require_same_shape(mu, dist);
  const std::size_t N = mu.n_players();
  require_scalar_family(fam, N);
  require_size(p.eps, N, "eps");
  require_size(p.delta, p.n + 1, "delta");
  if (subset.empty()) throw std::invalid_argument("subset must be non-empty");
  for (std::size_t k = 0; k < subset.size(); ++k) {
    if (subset[k] >= N) throw std::invalid_argument("subset index out of range");
    for (std::size_t j = 0; j < k; ++j) {
      if (subset[j] == subset[k]) {
        throw std::invalid_argument("subset has duplicates");
      }
    }
  }
  const auto marginals = oracle::require_product(dist);
  const std::size_t m = subset.size();

  // Conditional means c_s(q_{-s}), tabulated over the full space.
  const ProductSpace& space = mu.space();
  std::vector<std::vector<double>> cond(m, std::vector<double>(space.size()));
  IndexTuple q(N);
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    space.decode(idx, q);
    for (std::size_t k = 0; k < m; ++k) {
      cond[k][idx] = oracle::expect_inner(mu, dist, {subset[k]}, q);
    }
  }
  std::vector<double> terms(space.size());
  for (std::size_t idx = 0; idx < space.size(); ++idx) {
    space.decode(idx, q);
    double w = 1.0;
    for (std::size_t i = 0; i < N; ++i) w *= marginals[i][q[i]];
    double prod = 1.0;
    for (std::size_t k = 0; k < m; ++k) prod *= fam[subset[k]](cond[k][idx]);
    terms[idx] = w * prod;
  }
  const double lhs = pairwise_sum(terms);

  std::vector<std::size_t> excluded;
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t s = subset[k];
    excluded.push_back(s);
    sum += p.eps[s] *
           fam[s](delta_product_excluding(p.delta, p.n, excluded));
  }
  const double rhs = sum / std::sqrt(static_cast<double>(m));

  bool premise = true;
  for (std::size_t s : subset) {
    double left = oracle::nested_expect(mu, dist, {s}, as_scalar(fam[s]));
    double right = p.eps[s] * fam[s](delta_product_excluding(p.delta, p.n, {s}));
    premise = premise && left <= right + tol;
  }
  BoundReport r = make_report("system1", lhs, rhs, Direction::kUpper, premise, tol);
  r.notes.push_back("delta products over [n]\\{excluded}, [n] = {0..n}");
  return r;
}

// --- b2 --------------------------------------------------------------------

std::vector<double> bound2_candidates(const AmpParams& p, std::size_t N) {
  require_size(p.eps, N, "eps");
  require_size(p.delta, N, "delta");
  std::vector<double> out;
  double prod = N > 0 ? p.eps[0] : 1.0;
  for (std::size_t k = 1; k < N; ++k) {
    prod *= p.eps[k];
    out.push_back(prod);
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    sum += p.eps[k] * p.delta[k];
    out.push_back(sum);
  }
  return out;
}

BoundReport check_bound2(const MuTable& mu, const Distribution& dist,
                         const AmpParams& p, double C, double tol) {
  if (!(C > 0.0)) throw std::invalid_argument("b2 needs C > 0");
  oracle::require_product(dist);
  const double lhs = oracle::expect(mu, dist);
  auto cands = bound2_candidates(p, mu.n_players());
  const double sup = *std::max_element(cands.begin(), cands.end());
  BoundReport r = make_report("b2", lhs, C * sup, Direction::kUpper, true, tol);
  if (sup > 0.0) {
    r.min_constant = lhs / sup;
  } else {
    r.min_constant = lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return r;
}

// --- b3 --------------------------------------------------------------------

std::vector<double> bound3_candidates(const MuTable& mu,
                                      const Distribution& dist,
                                      const std::vector<ConcaveFn>& fam) {
  const std::size_t N = mu.n_players();
  if (N < 2) throw std::invalid_argument("b3 needs N >= 2");
  require_scalar_family(fam, N);
  std::vector<double> out;
  for (std::size_t o = 0; o < N; ++o) {
    for (unsigned mask = 1; mask < (1u << N); ++mask) {
      if (mask & (1u << o)) continue;
      std::vector<std::size_t> inner;
      for (std::size_t i = 0; i < N; ++i) {
        if (mask & (1u << i)) inner.push_back(i);
      }
      out.push_back(oracle::nested_expect(mu, dist, inner, as_scalar(fam[o])));
    }
  }
  return out;
}

BoundReport check_bound3(const MuTable& mu, const Distribution& dist,
                         const std::vector<ConcaveFn>& fam,
                         const ConcaveFn& mult, const AmpParams& p,
                         double tol) {
  const std::size_t N = mu.n_players();
  if (mult.kind() != ConcaveFn::Kind::kMult || mult.arity() != N) {
    throw std::invalid_argument("b3 needs a mult function of arity N");
  }
  const double lhs = oracle::expect(mu, dist);
  auto cands = bound3_candidates(mu, dist, fam);
  const double sup = *std::max_element(cands.begin(), cands.end());
  const double y = std::ldexp(sup, -static_cast<int>(N));
  Pullback pb = psi_inverse_diag(mult, y);
  const double power = std::ldexp(1.0, static_cast<int>(N));
  const double rhs = to_double(amp_constant(static_cast<unsigned>(N),
                                            static_cast<unsigned>(p.n))) *
                     std::pow(pb.value, power);
  BoundReport r = make_report("b3", lhs, rhs, Direction::kUpper, true, tol);
  r.extended_domain = pb.extended_domain;
  return r;
}

// --- b4, b5_6 --------------------------------------------------------------

std::vector<std::vector<std::size_t>> distinct_index_sets(std::size_t m,
                                                          std::size_t N) {
  std::vector<std::vector<std::size_t>> out;
  if (N > m) return out;
  std::vector<std::size_t> cur(N);
  for (std::size_t k = 0; k < N; ++k) cur[k] = k;
  while (true) {
    out.push_back(cur);
    std::size_t k = N;
    while (k > 0 && cur[k - 1] == m - N + (k - 1)) --k;
    if (k == 0) break;
    ++cur[k - 1];
    for (std::size_t j = k; j < N; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

std::pair<BoundReport, BoundReport> check_bound4_5_6(const MuTable& mu,
                                                     const Distribution& dist,
                                                     const AmpParams& p,
                                                     double tol) {
  const std::size_t N = mu.n_players();
  const std::size_t m = p.n + 1;
  if (m < N) {
    throw std::invalid_argument("b4/b5_6 need n + 1 >= N indices");
  }
  require_size(p.eps, m, "eps");
  require_size(p.delta, m, "delta");
  oracle::require_product(dist);
  const double lhs = oracle::expect(mu, dist);

  auto sets = distinct_index_sets(m, N);
  double prod_eps = 1.0, sum_delta = 0.0, sup5 = 0.0;
  for (const auto& T : sets) {
    double se = 0.0, sd = 0.0, pair_prod = 1.0;
    for (std::size_t k : T) {
      se += p.eps[k];
      sd += p.delta[k];
      for (std::size_t k2 : T) pair_prod *= p.delta[k] * p.eps[k2];
    }
    prod_eps *= se;
    sum_delta += sd;
    double term = 1.0;
    for (std::size_t r = 0; r < N; ++r) term *= pair_prod;
    sup5 = std::max(sup5, term);
  }
  BoundReport b4 = make_report("b4", lhs, prod_eps + sum_delta,
                               Direction::kUpper, true, tol, true);
  BoundReport b5 = make_report("b5_6", lhs, sup5, Direction::kUpper, true,
                               tol, true);
  return {b4, b5};
}

// --- two-player results and the product bound ------------------------------

std::string to_string(LmResult which) {
  switch (which) {
    case LmResult::kT1: return "lm_t1";
    case LmResult::kT2: return "lm_t2";
    case LmResult::kT3: return "lm_t3";
    case LmResult::kC4: return "lm_c4";
    case LmResult::kP1: return "lm_p1";
    case LmResult::kC2: return "lm_c2";
  }
  return "?";
}

BoundReport check_lm_theorem(const MuTable& mu, const Distribution& dist,
                             const std::vector<ConcaveFn>& fam,
                             const AmpParams& p, LmResult which, double tol) {
  oracle::require_same_shape(mu, dist);
  const std::string name = to_string(which);
  const double E = oracle::expect(mu, dist);

  if (which == LmResult::kT2) {
    const std::size_t n = mu.n_players();
    require_scalar_family(fam, n);
    require_size(p.eps, n, "eps");
    require_size(p.delta, n, "delta");
    bool premise = true;
    double prod = 1.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::size_t> others;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) others.push_back(j);
      }
      double left = oracle::nested_expect(mu, dist, others, as_scalar(fam[i]));
      premise = premise && left <= p.eps[i] * fam[i](p.delta[i]) + tol;
      prod *= p.eps[i];
      sum += p.delta[i];
    }
    return make_report(name, E, prod + sum, Direction::kUpper, premise, tol);
  }

  if (mu.n_players() != 2) {
    throw std::invalid_argument(name + " is a two-player result");
  }
  require_scalar_family(fam, which == LmResult::kC2 ? 1 : 2);
  require_size(p.eps, 2, "eps");
  require_size(p.delta, 2, "delta");
  const double e0 = p.eps[0], e1 = p.eps[1];
  const double d0 = p.delta[0], d1 = p.delta[1];
  const ConcaveFn& psi = fam[0];

  if (which == LmResult::kC2) {
    double a = oracle::nested_expect(mu, dist, 1, as_scalar(psi));
    double b = oracle::nested_expect(mu, dist, 0, as_scalar(psi));
    double x = xi_inverse(psi, 0.5 * std::max(a, b), 0.0);
    return make_report(name, E, 4.0 * x * x, Direction::kUpper, true, tol);
  }

  const ConcaveFn& psi1 = fam[1];
  // a = E_X[psi(E_Y mu)], b = E_Y[psi'(E_X mu)].
  const double a = oracle::nested_expect(mu, dist, 1, as_scalar(psi));
  const double b = oracle::nested_expect(mu, dist, 0, as_scalar(psi1));
  switch (which) {
    case LmResult::kT1: {
      bool premise = a <= e0 * psi(d0) + tol && b <= e1 * psi1(d0) + tol;
      return make_report(name, E, e0 * e1 + d0 + d1, Direction::kUpper,
                         premise, tol);
    }
    case LmResult::kT3: {
      bool premise = a <= e0 * psi(d0) + tol && b <= e1 * psi1(d1) + tol;
      return make_report(name, E, std::max(e0 * e1, e0 * d0 + e1 * d1),
                         Direction::kUpper, premise, tol);
    }
    case LmResult::kC4:
    case LmResult::kP1: {
      bool premise = a <= e0 * psi(e1) + tol && b <= e1 * psi1(e0) + tol;
      if (which == LmResult::kC4) {
        return make_report(name, E, 2.0 * e0 * e1, Direction::kUpper, premise,
                           tol);
      }
      return make_report(name, E, e0 * e1, Direction::kLower, premise, tol,
                         true);
    }
    default:
      break;
  }
  throw std::logic_error("unhandled result");
}

// --- main result on repeated values ----------------------------------------

double main_theorem1_rhs(const AmpParams& p, std::size_t i) {
  require_size(p.eps, i + 1, "eps");
  require_size(p.delta, i + 1, "delta");
  require_size(p.q, i + 1, "q");
  require_size(p.hint_h, i + 1, "hint_h");
  const double N = static_cast<double>(p.N);
  return (1.0 - p.eps[i]) * p.delta[i] /
         (std::exp(-N * p.q[i]) + N * p.hint_h[i]);
}

double main_theorem1_q_limit(const AmpParams& p, std::size_t i) {
  require_size(p.eps, i + 1, "eps");
  require_size(p.delta, p.n + 1, "delta");
  double factorial = 1.0;
  for (std::size_t k = 2; k <= p.n; ++k) factorial *= static_cast<double>(k);
  double prod = 1.0;
  std::vector<std::size_t> excluded{i};
  std::size_t next = 0;
  for (std::size_t t = 1; t + 1 <= p.N; ++t) {
    prod *= delta_product_excluding(p.delta, p.n, excluded);
    while (next <= p.n && (next == i)) ++next;
    excluded.push_back(next++);
  }
  return factorial * std::log(1.0 / p.eps[i]) * prod;
}

bool main_theorem1_premise(const AmpParams& p, std::size_t i) {
  require_size(p.q, i + 1, "q");
  std::vector<double> all;
  for (std::size_t k = 0; k < std::max(p.N, i + 1) && k < p.eps.size(); ++k) {
    all.push_back(p.eps[k]);
  }
  for (std::size_t k = 0; k <= p.n && k < p.delta.size(); ++k) {
    all.push_back(p.delta[k]);
  }
  for (double v : all) {
    if (!(v > 0.0)) return false;
  }
  std::vector<double> sorted = all;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    return false;
  }
  return p.q[i] < main_theorem1_q_limit(p, i);
}

BoundReport check_main_theorem1(const Game& g, const AmpParams& p,
                                std::size_t i, const ValueOptions& opts,
                                double tol) {
  if (p.N != g.n_players()) {
    throw std::invalid_argument("params N does not match the game");
  }
  if (i >= p.N) throw std::invalid_argument("player index out of range");
  if (p.n == 0) throw std::invalid_argument("repetition count must be >= 1");
  const double rhs = main_theorem1_rhs(p, i);
  const bool premise = main_theorem1_premise(p, i);
  const double lhs = repeated_value(g, p.n, opts).value;
  BoundReport r = make_report("main_t1", lhs, rhs, Direction::kLower, premise, tol);
  r.notes.push_back("classical value; premise excludes the system1 clause");
  return r;
}

// --- decay estimates -------------------------------------------------------

double multiplayer_c_cap(std::size_t N) {
  const double n = static_cast<double>(N);
  return 1.0 / (std::pow(n, 2.0 * n) * std::log2(std::exp(1.0)));
}

double question_size_factor(const std::vector<std::size_t>& alphabet_sizes) {
  double prod = 1.0;
  for (std::size_t s : alphabet_sizes) {
    prod *= std::log2(static_cast<double>(s));
  }
  return std::max(prod, 1.0);
}

DecayValue decay_bound_multiplayer(double eps, std::size_t N, std::size_t n,
                                   double alpha, double c, double s) {
  if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("alpha must lie in (0, 1]");
  }
  if (!(s >= 1.0)) throw std::domain_error("s must be >= 1");
  if (!(c > 0.0 && c < multiplayer_c_cap(N))) {
    throw std::domain_error("c outside (0, 1/(N^{2N} log2 e))");
  }
  const double Nd = static_cast<double>(N);
  const double rate = c * std::pow(alpha, 20.0 * Nd + 1.0) *
                      std::pow(eps, 6.0 * Nd) / s;
  DecayValue v;
  v.value = (10.0 / eps) * std::exp(-rate * static_cast<double>(n));
  v.vacuous = v.value > 1.0;
  return v;
}

DecayValue decay_bound_kplayer(double gamma, double c, double alpha,
                               std::size_t k, std::size_t n, double s) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::domain_error("gamma must lie in (0, 1]");
  }
  if (!(c > 0.0) || !(alpha > 0.0) || !(s > 0.0)) {
    throw std::domain_error("c, alpha and s must be positive");
  }
  const double base = 1.0 - std::pow(gamma, 9.0) / 2.0;
  const double exponent = c * std::pow(alpha, 8.0 * static_cast<double>(k)) *
                          static_cast<double>(n) / s;
  DecayValue v;
  v.value = std::pow(base, exponent);
  v.vacuous = v.value > 1.0;
  return v;
}

DecayValue decay_bound_anchored(double eps, double alpha, double c,
                                std::size_t n, double s) {
  if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::domain_error("alpha must lie in (0, 1]");
  }
  if (!(c > 0.0)) throw std::domain_error("c must be positive");
  if (!(s >= 1.0)) throw std::domain_error("s must be >= 1");
  DecayValue v;
  v.value = (4.0 / eps) * std::exp(-c * std::pow(alpha, 48.0) *
                                   std::pow(eps, 17.0) *
                                   static_cast<double>(n) / s);
  v.vacuous = v.value > 1.0;
  return v;
}

}  // namespace parrep
