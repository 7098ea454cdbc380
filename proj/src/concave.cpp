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

#include "parrep/concave.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace parrep {

namespace {

// Accepts rounding overshoot from computed means and clamps it away.
double require_unit(double x) {
  constexpr double kSlack = 1e-12;
  if (!(x >= -kSlack && x <= 1.0 + kSlack)) {
    throw std::domain_error("argument outside [0, 1]");
  }
  return std::clamp(x, 0.0, 1.0);
}

}  // namespace

ConcaveFn ConcaveFn::power(unsigned q) {
  if (q == 0) throw std::invalid_argument("power exponent must be positive");
  ConcaveFn f;
  f.kind_ = Kind::kPower;
  f.power_q_ = q;
  return f;
}

ConcaveFn ConcaveFn::mult(std::vector<double> q) {
  if (q.empty()) throw std::invalid_argument("mult needs at least one weight");
  for (double v : q) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("mult weights must be positive");
    }
  }
  ConcaveFn f;
  f.kind_ = Kind::kMult;
  f.mult_q_ = std::move(q);
  return f;
}

ConcaveFn ConcaveFn::custom(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) {
    throw std::invalid_argument("custom function needs >= 2 matching knots");
  }
  if (xs.front() != 0.0 || xs.back() != 1.0) {
    throw std::invalid_argument("custom knots must span [0, 1]");
  }
  for (std::size_t k = 1; k < xs.size(); ++k) {
    if (!(xs[k] > xs[k - 1])) {
      throw std::invalid_argument("custom knots must be increasing");
    }
    if (ys[k] < ys[k - 1]) {
      throw std::invalid_argument("custom function must be nondecreasing");
    }
  }
  // Concave iff successive slopes do not increase.
  for (std::size_t k = 2; k < xs.size(); ++k) {
    double s0 = (ys[k - 1] - ys[k - 2]) / (xs[k - 1] - xs[k - 2]);
    double s1 = (ys[k] - ys[k - 1]) / (xs[k] - xs[k - 1]);
    if (s1 > s0 + 1e-12) {
      throw std::invalid_argument("custom function must be concave");
    }
  }
  ConcaveFn f;
  f.kind_ = Kind::kCustom;
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

std::size_t ConcaveFn::arity() const {
  return kind_ == Kind::kMult ? mult_q_.size() : 1;
}

double ConcaveFn::mult_total() const {
  double s = 0.0;
  for (double v : mult_q_) s += v;
  return s;
}

double ConcaveFn::operator()(double x) const {
  switch (kind_) {
    case Kind::kPower: {
      x = require_unit(x);
      double r = 1.0;
      for (unsigned k = 0; k < power_q_; ++k) r *= 1.0 - x;
      return 1.0 - r;
    }
    case Kind::kCustom: {
      x = require_unit(x);
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return ys_.back();
      std::size_t k = static_cast<std::size_t>(it - xs_.begin());
      double t = (x - xs_[k - 1]) / (xs_[k] - xs_[k - 1]);
      return ys_[k - 1] + t * (ys_[k] - ys_[k - 1]);
    }
    case Kind::kMult:
      if (mult_q_.size() == 1) return (*this)(std::span<const double>(&x, 1));
      throw std::logic_error("mult function needs a vector argument");
  }
  return 0.0;
}

double ConcaveFn::operator()(std::span<const double> x) const {
  if (kind_ != Kind::kMult) {
    if (x.size() != 1) throw std::invalid_argument("scalar function arity 1");
    return (*this)(x[0]);
  }
  if (x.size() != mult_q_.size()) {
    throw std::invalid_argument("mult argument has wrong length");
  }
  double exponent = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    exponent += mult_q_[i] * require_unit(x[i]);
  }
  return static_cast<double>(x.size()) - std::exp(-exponent);
}

std::string ConcaveFn::name() const {
  switch (kind_) {
    case Kind::kPower:
      return "power(" + std::to_string(power_q_) + ")";
    case Kind::kMult: {
      std::string s = "mult(";
      for (std::size_t i = 0; i < mult_q_.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(mult_q_[i]);
      }
      return s + ")";
    }
    case Kind::kCustom:
      return "custom(" + std::to_string(xs_.size()) + " knots)";
  }
  return "?";
}

double psi_eval(const ConcaveFn& f, double x) { return f(x); }

double psi_eval(const ConcaveFn& f, std::span<const double> x) { return f(x); }

Pullback psi_inverse_diag(const ConcaveFn& f, double y) {
  if (f.kind() != ConcaveFn::Kind::kMult) {
    throw std::domain_error("diagonal pullback needs a mult function");
  }
  const double N = static_cast<double>(f.arity());
  if (!(y < N)) {
    throw std::domain_error("pullback argument must be below N");
  }
  const double Q = f.mult_total();
  Pullback out;
  out.value = -std::log(N - y) / Q;
  out.extended_domain = !(out.value >= 0.0 && out.value <= 1.0);
  return out;
}

double xi_inverse(const ConcaveFn& psi, double y, double tol) {
  if (!psi.scalar()) throw std::domain_error("xi needs a scalar function");
  auto xi = [&](double x) { return x * psi(x); };
  double lo = 0.0, hi = 1.0;
  const double f_lo = xi(lo), f_hi = xi(hi);
  if (!(y >= f_lo && y <= f_hi)) {
    throw std::domain_error("xi inverse: value outside [xi(0), xi(1)]");
  }
  if (y == f_lo) return lo;
  if (y == f_hi) return hi;
  // xi is nondecreasing on [0, 1] since x and psi(x) are.
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (xi(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

AmpInt amp_constant(unsigned N, unsigned n) {
  if (N < 1) throw std::invalid_argument("C(N, n) needs N >= 1");
  if (N > 60 || n > 60) throw std::overflow_error("C(N, n) limited to 60");
  // Row N of Pascal's triangle in 128-bit arithmetic.
  std::vector<AmpInt> row(N + 1, 0);
  row[0] = 1;
  for (unsigned r = 1; r <= N; ++r) {
    for (unsigned k = r; k >= 1; --k) row[k] += row[k - 1];
  }
  AmpInt sum = 0;
  for (unsigned i = 0; i <= std::min(n, N); ++i) sum += row[i];
  return static_cast<AmpInt>(N) * sum;
}

std::string to_string(AmpInt value) {
  if (value == 0) return "0";
  std::string s;
  while (value > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  return std::string(s.rbegin(), s.rend());
}

double to_double(AmpInt value) { return static_cast<double>(value); }

}  // namespace parrep
