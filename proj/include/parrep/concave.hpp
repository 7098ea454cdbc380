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
#include <span>
#include <string>
#include <vector>

namespace parrep {

/// Monotone concave amplification functions.
///
///   power(q):  psi(x) = 1 - (1 - x)^q on [0, 1], q a positive integer.
///   mult(q):   Psi(x) = N - prod_i exp(-q_i x_i) on [0, 1]^N, q_i > 0.
///   custom:    piecewise-linear interpolation through (x_k, y_k) knots on
///              [0, 1]; the knots must describe a nondecreasing concave
///              function.
class ConcaveFn {
 public:
  enum class Kind { kPower, kMult, kCustom };

  static ConcaveFn power(unsigned q);
  static ConcaveFn mult(std::vector<double> q);
  static ConcaveFn custom(std::vector<double> xs, std::vector<double> ys);

  Kind kind() const { return kind_; }
  /// Number of arguments: N for mult, 1 otherwise.
  std::size_t arity() const;
  bool scalar() const { return kind_ != Kind::kMult; }

  /// Scalar evaluation; throws std::domain_error outside [0, 1] and
  /// std::logic_error for a mult function.
  double operator()(double x) const;
  /// Vector evaluation; throws std::domain_error outside [0, 1]^arity.
  double operator()(std::span<const double> x) const;

  unsigned power_q() const { return power_q_; }
  const std::vector<double>& mult_q() const { return mult_q_; }
  /// sum_i q_i for mult.
  double mult_total() const;

  std::string name() const;

 private:
  ConcaveFn() = default;

  Kind kind_ = Kind::kPower;
  unsigned power_q_ = 1;
  std::vector<double> mult_q_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

double psi_eval(const ConcaveFn& f, double x);
double psi_eval(const ConcaveFn& f, std::span<const double> x);

struct Pullback {
  double value = 0.0;
  // Set when value falls outside [0, 1], i.e. y lies outside the image of
  // [0, 1] under the diagonal restriction.
  bool extended_domain = false;
};

/// Inverse of the diagonal restriction Psi_diag(x) = N - exp(-Q x),
/// Q = sum_i q_i, analytically extended to every y < N:
///   x = -ln(N - y) / Q.
/// Throws std::domain_error for y >= N or a non-mult function.
Pullback psi_inverse_diag(const ConcaveFn& f, double y);

/// Inverse of xi(x) = x psi(x) on [0, 1] by bisection to `tol`. Throws
/// std::domain_error when y is outside [xi(0), xi(1)].
double xi_inverse(const ConcaveFn& psi, double y, double tol = 1e-12);

using AmpInt = unsigned __int128;

/// C(N, n) = N * sum_{i=0}^{n} binom(N, i), exact for N, n <= 60.
AmpInt amp_constant(unsigned N, unsigned n);
std::string to_string(AmpInt value);
double to_double(AmpInt value);

}  // namespace parrep
