// Copyright 2026 The renewal_ldp Authors
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

#ifndef RENEWAL_LDP_NUMERICS_HPP
#define RENEWAL_LDP_NUMERICS_HPP

#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace renewal_ldp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

using ScalarFunction = std::function<double(double)>;

struct QuadratureOptions {
  /// Requested relative accuracy of every block.
  double rel_tol = 1e-13;
  /// Blocks whose error estimate exceeds fail_tol * L1 raise QuadratureError.
  double fail_tol = 1e-10;
  /// When false, a half-line integral whose dyadic blocks stop decaying is
  /// reported as +inf instead of being pushed to convergence.
  bool assume_finite = true;
  /// Dyadic blocks after the first one.
  int max_blocks = 1100;
};

/// Integral of f over [a, b], split at any breakpoints inside (a, b).
/// Uses tanh-sinh when `singular_left` (integrable endpoint singularities),
/// adaptive Gauss-Kronrod otherwise.
double integrate_interval(const ScalarFunction& f, double a, double b,
                          std::span<const double> breakpoints = {},
                          const QuadratureOptions& opts = {},
                          bool singular_left = false);

/// Integral of f over [lo, +inf).
///
/// The half line is cut into [lo, lo + scale] followed by dyadic blocks
/// [lo + scale 2^(k-1), lo + scale 2^k]; summation stops once the geometric
/// tail estimate of the remaining blocks is below rel_tol of the total.
double integrate_halfline(const ScalarFunction& f, double lo, double scale,
                          std::span<const double> breakpoints = {},
                          const QuadratureOptions& opts = {});

struct MaxResult {
  double argmax = 0.0;
  double value = -kInf;
  bool unbounded = false;
  bool at_upper_cap = false;
};

struct ConcaveMaxOptions {
  double start = 0.0;
  double step = 1.0;
  double lower_cap = -kInf;
  double upper_cap = kInf;
  double x_rel_tol = 1e-12;
  /// Objective values beyond this are taken as a divergent supremum.
  double unbounded_threshold = 1e12;
  /// An objective still increasing when the bracket search passes this
  /// |x| is taken as divergent (guards logarithmic growth).
  double max_abs_argument = kInf;
  int max_doublings = 2000;
};

/// Maximizes a concave function of one variable: bracket by step doubling
/// from `start`, then golden section. g may return -inf outside its domain.
/// Throws OptimizerError if no bracket can be formed.
MaxResult maximize_concave(const ScalarFunction& g,
                           const ConcaveMaxOptions& opts = {});

/// Golden-section maximization of a unimodal g on [a, b].
MaxResult golden_section_max(const ScalarFunction& g, double a, double b,
                             double x_abs_tol, int max_iter = 300);

/// Root of a nondecreasing h on [lo, hi] given h(lo) <= 0 <= h(hi).
/// Illinois steps with bisection safeguard; stops when |h| <= f_tol or the
/// bracket is narrower than x_tol.
double find_root(const ScalarFunction& h, double lo, double hi, double f_tol,
                 double x_tol, int max_iter = 400);

/// log(sum exp(v_i)), +inf/-inf aware.
double log_sum_exp(std::span<const double> v);

/// Nondecreasing grid lo, lo + (hi - lo)/(n - 1), ..., hi (n = 1 gives {lo}).
std::vector<double> linspace(double lo, double hi, int n);

/// n log-spaced points from lo to hi.
std::vector<double> logspace(double lo, double hi, int n);

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_NUMERICS_HPP
