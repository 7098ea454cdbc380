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

// Naive lhs / rhs / premise for every checker, from the raw instance data.

#include <cmath>
#include <stdexcept>

#include "naive.hpp"
#include "parrep/search.hpp"

namespace naive {

struct Sides {
  double lhs = 0.0;
  double rhs = 0.0;
  bool premise = true;
};

inline std::vector<std::size_t> all_but(std::size_t n, std::size_t skip) {
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != skip) v.push_back(i);
  }
  return v;
}

inline Sides system1(const parrep::Instance& in, double tol) {
  const auto& mu = in.mu;
  const auto m = marginals(in.dist);
  const auto shape = mu.shape();
  const auto& p = in.params;
  Sides out;
  for (std::size_t idx = 0; idx < space_size(shape); ++idx) {
    auto t = unrank(idx, shape);
    double w = 1.0;
    for (std::size_t i = 0; i < shape.size(); ++i) w *= m[i][t[i]];
    double prod = 1.0;
    for (std::size_t s : in.subset) {
      prod *= power_psi(in.fam[s].power_q(), inner_mean(mu, m, {s}, t));
    }
    out.lhs += w * prod;
  }
  std::vector<bool> removed(p.n + 1, false);
  double sum = 0.0;
  for (std::size_t s : in.subset) {
    removed[s] = true;
    double d = 1.0;
    for (std::size_t l = 0; l <= p.n; ++l) {
      if (!removed[l]) d *= p.delta[l];
    }
    sum += p.eps[s] * power_psi(in.fam[s].power_q(), d);
  }
  out.rhs = sum / std::sqrt(double(in.subset.size()));
  for (std::size_t s : in.subset) {
    double d = 1.0;
    for (std::size_t l = 0; l <= p.n; ++l) {
      if (l != s) d *= p.delta[l];
    }
    double left = nested(mu, in.dist, {s}, psi_of(in.fam[s]));
    out.premise = out.premise &&
                  left <= p.eps[s] * power_psi(in.fam[s].power_q(), d) + tol;
  }
  return out;
}

inline Sides bound2(const parrep::Instance& in) {
  const std::size_t N = in.mu.n_players();
  const auto& p = in.params;
  double sup = 0.0;
  for (std::size_t k = 2; k <= N; ++k) {
    double prod = 1.0;
    for (std::size_t j = 0; j < k; ++j) prod *= p.eps[j];
    sup = std::max(sup, prod);
  }
  for (std::size_t k = 1; k <= N; ++k) {
    double s = 0.0;
    for (std::size_t j = 0; j < k; ++j) s += p.eps[j] * p.delta[j];
    sup = std::max(sup, s);
  }
  return {expect(in.mu, in.dist), in.constant * sup, true};
}

inline Sides bound3(const parrep::Instance& in) {
  const std::size_t N = in.mu.n_players();
  double sup = 0.0;
  for (std::size_t o = 0; o < N; ++o) {
    for (unsigned mask = 1; mask < (1u << N); ++mask) {
      if (mask >> o & 1u) continue;
      std::vector<std::size_t> inner;
      for (std::size_t i = 0; i < N; ++i) {
        if (mask >> i & 1u) inner.push_back(i);
      }
      sup = std::max(sup, nested(in.mu, in.dist, inner, psi_of(in.fam[o])));
    }
  }
  double Q = 0.0;
  for (double q : in.mult->mult_q()) Q += q;
  const double y = sup / std::pow(2.0, double(N));
  double x = -std::log(double(N) - y) / Q;
  double pw = x;
  for (std::size_t k = 0; k < N; ++k) pw = pw * pw;  // x^(2^N)
  double C = static_cast<double>(amp_constant(unsigned(N), unsigned(in.params.n)));
  return {expect(in.mu, in.dist), C * pw, true};
}

inline Sides bound45(const parrep::Instance& in, bool second) {
  const std::size_t N = in.mu.n_players();
  const std::size_t m = in.params.n + 1;
  const auto& p = in.params;
  double prod = 1.0, sum = 0.0, sup = 0.0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    if (std::size_t(__builtin_popcount(mask)) != N) continue;
    double se = 0.0, sd = 0.0, pd = 1.0, pe = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (!(mask >> k & 1u)) continue;
      se += p.eps[k];
      sd += p.delta[k];
      pd *= p.delta[k];
      pe *= p.eps[k];
    }
    prod *= se;
    sum += sd;
    // prod over T x T of delta_k eps_k' = (pd pe)^|T|, then ^N.
    sup = std::max(sup, std::pow(pd * pe, double(N * N)));
  }
  return {expect(in.mu, in.dist), second ? sup : prod + sum, true};
}

inline Sides lm(const parrep::Instance& in, double tol) {
  const auto& p = in.params;
  const double E = expect(in.mu, in.dist);
  if (in.kind == parrep::BoundKind::kLmT2) {
    const std::size_t n = in.mu.n_players();
    Sides out{E, 0.0, true};
    double prod = 1.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double left = nested(in.mu, in.dist, all_but(n, i), psi_of(in.fam[i]));
      out.premise = out.premise &&
                    left <= p.eps[i] * power_psi(in.fam[i].power_q(), p.delta[i]) + tol;
      prod *= p.eps[i];
      sum += p.delta[i];
    }
    out.rhs = prod + sum;
    return out;
  }
  const unsigned q0 = in.fam[0].power_q();
  const double a = nested(in.mu, in.dist, {1}, psi_of(in.fam[0]));
  if (in.kind == parrep::BoundKind::kLmC2) {
    const double a2 = nested(in.mu, in.dist, {0}, psi_of(in.fam[0]));
    const double x = xi_inverse_power(q0, 0.5 * std::max(a, a2));
    return {E, 4.0 * x * x, true};
  }
  const unsigned q1 = in.fam[1].power_q();
  const double b = nested(in.mu, in.dist, {0}, psi_of(in.fam[1]));
  const double e = p.eps[0], e1 = p.eps[1], d = p.delta[0], d1 = p.delta[1];
  switch (in.kind) {
    case parrep::BoundKind::kLmT1:
      return {E, e * e1 + d + d1,
              a <= e * power_psi(q0, d) + tol && b <= e1 * power_psi(q1, d) + tol};
    case parrep::BoundKind::kLmT3:
      return {E, std::max(e * e1, e * d + e1 * d1),
              a <= e * power_psi(q0, d) + tol && b <= e1 * power_psi(q1, d1) + tol};
    case parrep::BoundKind::kLmC4:
    case parrep::BoundKind::kLmP1: {
      bool prem = a <= e * power_psi(q0, e1) + tol && b <= e1 * power_psi(q1, e) + tol;
      double rhs = in.kind == parrep::BoundKind::kLmC4 ? 2.0 * e * e1 : e * e1;
      return {E, rhs, prem};
    }
    default:
      throw std::logic_error("not a two-player kind");
  }
}

inline double q_limit(const parrep::AmpParams& p, std::size_t i) {
  double fact = 1.0;
  for (std::size_t k = 1; k <= p.n; ++k) fact *= double(k);
  // Other indices of [n] in ascending order.
  std::vector<std::size_t> others;
  for (std::size_t l = 0; l <= p.n; ++l) {
    if (l != i) others.push_back(l);
  }
  double prod = 1.0;
  for (std::size_t t = 1; t < p.N; ++t) {
    // E_t = {i} and others[0..t-2].
    for (std::size_t l = 0; l <= p.n; ++l) {
      bool excluded = l == i;
      for (std::size_t k = 0; k + 1 < t && k < others.size(); ++k) {
        excluded = excluded || others[k] == l;
      }
      if (!excluded) prod *= p.delta[l];
    }
  }
  return fact * -std::log(p.eps[i]) * prod;
}

inline Sides main_t1(const parrep::Instance& in) {
  const auto& p = in.params;
  const std::size_t i = in.player;
  const double N = double(p.N);
  Sides out;
  out.lhs = repeated_value_full(*in.game, p.n);
  out.rhs = (1.0 - p.eps[i]) * p.delta[i] /
            (std::exp(-N * p.q[i]) + N * p.hint_h[i]);
  std::vector<double> vals;
  for (std::size_t k = 0; k < std::max(p.N, i + 1) && k < p.eps.size(); ++k) {
    vals.push_back(p.eps[k]);
  }
  for (std::size_t k = 0; k <= p.n && k < p.delta.size(); ++k) {
    vals.push_back(p.delta[k]);
  }
  bool ok = true;
  for (std::size_t x = 0; x < vals.size(); ++x) {
    ok = ok && vals[x] > 0.0;
    for (std::size_t y = 0; y < x; ++y) ok = ok && vals[x] != vals[y];
  }
  out.premise = ok && p.q[i] < q_limit(p, i);
  return out;
}

inline Sides recompute(const parrep::Instance& in, double tol) {
  using parrep::BoundKind;
  switch (in.kind) {
    case BoundKind::kSystem1: return system1(in, tol);
    case BoundKind::kB2: return bound2(in);
    case BoundKind::kB3: return bound3(in);
    case BoundKind::kB4: return bound45(in, false);
    case BoundKind::kB5_6: return bound45(in, true);
    case BoundKind::kMainT1: return main_t1(in);
    default: return lm(in, tol);
  }
}

// Absolute below 1, relative above (b3 right sides can be huge).
inline bool close(double a, double b, double tol) {
  if (std::isnan(a) || std::isnan(b)) return false;
  if (a == b) return true;
  return std::fabs(a - b) <= tol * std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace naive
