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

#include "renewal_ldp/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <queue>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "renewal_ldp/errors.hpp"

namespace renewal_ldp {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kGkMaxIntervals = 4000;
constexpr double kInvPhi = 0.6180339887498949;

struct GkPiece {
  double a, b, value, err, l1;
  bool operator<(const GkPiece& o) const { return err < o.err; }
};

GkPiece gk_piece(const ScalarFunction& g, double a, double b) {
  double err = 0.0;
  double l1 = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
      g, a, b, 0, 0.0, &err, &l1);
  // The kernel reports its error on the reference interval [-1, 1].
  return {a, b, v, err * 0.5 * (b - a), l1};
}

// Globally adaptive Gauss-Kronrod: always bisect the worst piece. Boost's own
// recursive driver compares unscaled errors and stalls on narrow blocks.
double gk_block(const ScalarFunction& f, double a, double b,
                const QuadratureOptions& opts) {
  // Denormal noise would otherwise keep the bisection busy forever.
  auto g = [&f](double x) {
    const double v = f(x);
    return std::abs(v) < 1e-280 ? 0.0 : v;
  };
  std::priority_queue<GkPiece> heap;
  heap.push(gk_piece(g, a, b));
  double value = heap.top().value;
  double err = heap.top().err;
  double l1 = heap.top().l1;
  auto done = [&] {
    return !std::isfinite(value) ||
           err <= std::max(opts.rel_tol, 4.0 * kEps) * l1 || l1 < 1e-300;
  };
  while (!done() && static_cast<int>(heap.size()) < kGkMaxIntervals) {
    const GkPiece w = heap.top();
    const double mid = 0.5 * (w.a + w.b);
    if (!(mid > w.a && mid < w.b)) break;
    heap.pop();
    const GkPiece left = gk_piece(g, w.a, mid);
    const GkPiece right = gk_piece(g, mid, w.b);
    value += left.value + right.value - w.value;
    err += left.err + right.err - w.err;
    l1 += left.l1 + right.l1 - w.l1;
    heap.push(left);
    heap.push(right);
  }
  if (std::isfinite(value) && err > opts.fail_tol * l1 && l1 > 1e-200) {
    // Re-sum to shed accumulated cancellation before giving up.
    double v2 = 0.0, e2 = 0.0, m2 = 0.0;
    for (; !heap.empty(); heap.pop()) {
      v2 += heap.top().value;
      e2 += heap.top().err;
      m2 += heap.top().l1;
    }
    if (e2 > opts.fail_tol * m2) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "quadrature on [%.6g, %.6g] reached relative error %.3g",
                    a, b, e2 / m2);
      throw QuadratureError(buf);
    }
    return v2;
  }
  return value;
}

double ts_block(const ScalarFunction& f, double a, double b,
                const QuadratureOptions& opts) {
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator;
  double err = 0.0;
  double l1 = 0.0;
  try {
    // The two-argument form skips boost's endpoint assertion on short blocks.
    auto g = [&f](double x, double) {
      const double v = f(x);
      return std::abs(v) < 1e-280 ? 0.0 : v;
    };
    const double v = integrator.integrate(g, a, b, opts.rel_tol, &err, &l1);
    if (std::isfinite(v) && err <= opts.fail_tol * l1) return v;
  } catch (const std::exception&) {
    // tanh-sinh refuses non-finite samples near the ends; fall through.
  }
  return gk_block(f, a, b, opts);
}

}  // namespace

double integrate_interval(const ScalarFunction& f, double a, double b,
                          std::span<const double> breakpoints,
                          const QuadratureOptions& opts, bool singular_left) {
  if (!(b > a)) return 0.0;
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (!(cuts[i + 1] > cuts[i])) continue;
    const bool ts = singular_left && i == 0;
    total += ts ? ts_block(f, cuts[i], cuts[i + 1], opts)
                : gk_block(f, cuts[i], cuts[i + 1], opts);
  }
  return total;
}

double integrate_halfline(const ScalarFunction& f, double lo, double scale,
                          std::span<const double> breakpoints,
                          const QuadratureOptions& opts) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw RangeError("integrate_halfline: scale must be positive and finite");
  }
  double last_break = lo;
  for (double p : breakpoints) last_break = std::max(last_break, p);

  auto diverged = [&](double v) {
    if (!opts.assume_finite && v > 0.0) return kInf;
    throw QuadratureError("integrand overflow on a half-line integral "
                          "expected to be finite");
  };

  double total = integrate_interval(f, lo, lo + scale, breakpoints, opts,
                                    /*singular_left=*/true);
  if (!std::isfinite(total)) return diverged(total);
  double prev_abs = std::abs(total);
  int nondecay = 0;
  for (int k = 1; k <= opts.max_blocks; ++k) {
    const double a = lo + scale * std::ldexp(1.0, k - 1);
    const double b = lo + scale * std::ldexp(1.0, k);
    if (!std::isfinite(b)) break;
    const double v = integrate_interval(f, a, b, breakpoints, opts);
    if (!std::isfinite(v)) return diverged(v);
    total += v;
    const double av = std::abs(v);
    if (!opts.assume_finite) {
      nondecay = (av > 0.0 && av >= prev_abs) ? nondecay + 1 : 0;
      if (nondecay >= 8) return total > 0.0 ? kInf : -kInf;
    }
    if (a > last_break && k >= 3) {
      if (av == 0.0 && prev_abs == 0.0) return total;
      if (prev_abs > 0.0) {
        const double r = av / prev_abs;
        if (r < 0.9 && av * r / (1.0 - r) <= opts.rel_tol * std::abs(total)) {
          return total;
        }
      }
    }
    prev_abs = av;
  }
  if (!opts.assume_finite) return total > 0.0 ? kInf : -kInf;
  throw QuadratureError("half-line quadrature did not converge");
}

MaxResult golden_section_max(const ScalarFunction& g, double a, double b,
                             double x_abs_tol, int max_iter) {
  if (a > b) std::swap(a, b);
  auto eval = [&](double x) {
    const double v = g(x);
    return std::isnan(v) ? -kInf : v;
  };
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = eval(x1);
  double f2 = eval(x2);
  for (int it = 0; it < max_iter && (b - a) > x_abs_tol; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = eval(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = eval(x1);
    }
  }
  MaxResult r;
  if (f1 >= f2) {
    r.argmax = x1;
    r.value = f1;
  } else {
    r.argmax = x2;
    r.value = f2;
  }
  return r;
}

MaxResult maximize_concave(const ScalarFunction& g,
                           const ConcaveMaxOptions& opts) {
  auto eval = [&](double x) {
    const double v = g(x);
    return std::isnan(v) ? -kInf : v;
  };
  auto unbounded = [](double x) {
    MaxResult r;
    r.argmax = x;
    r.value = kInf;
    r.unbounded = true;
    return r;
  };
  auto refine = [&](double lo, double hi, double best_x, double best_f) {
    const double tol = opts.x_rel_tol * std::max(1.0, std::abs(best_x));
    MaxResult r = golden_section_max(eval, lo, hi, tol);
    if (best_f > r.value) {
      r.value = best_f;
      r.argmax = best_x;
    }
    return r;
  };

  const double x0 = std::clamp(opts.start, opts.lower_cap, opts.upper_cap);
  const double f0 = eval(x0);
  if (f0 >= opts.unbounded_threshold) return unbounded(x0);
  if (f0 == -kInf) {
    throw OptimizerError("maximize_concave: start point outside the domain");
  }

  double h = opts.step;
  const double xr = std::min(x0 + h, opts.upper_cap);
  const double fr = xr > x0 ? eval(xr) : -kInf;
  if (fr >= opts.unbounded_threshold) return unbounded(xr);

  double dir = 0.0;
  double b = x0;
  double fb = f0;
  double a = x0;
  if (xr > x0 && fr > f0) {
    dir = 1.0;
    b = xr;
    fb = fr;
  } else {
    const double xl = std::max(x0 - h, opts.lower_cap);
    const double fl = xl < x0 ? eval(xl) : -kInf;
    if (fl >= opts.unbounded_threshold) return unbounded(xl);
    if (xl < x0 && fl > f0) {
      dir = -1.0;
      b = xl;
      fb = fl;
    } else {
      MaxResult r = refine(xl, xr, x0, f0);
      // Started on the cap and nothing to the left beats it.
      r.at_upper_cap = x0 == opts.upper_cap && r.argmax == x0;
      return r;
    }
  }

  for (int i = 0; i < opts.max_doublings; ++i) {
    h *= 2.0;
    double c = b + dir * h;
    c = std::clamp(c, opts.lower_cap, opts.upper_cap);
    if (!std::isfinite(c)) break;
    if (c == b) {
      MaxResult r;
      r.argmax = b;
      r.value = fb;
      r.at_upper_cap = dir > 0.0;
      return r;
    }
    const double fc = eval(c);
    if (fc >= opts.unbounded_threshold) return unbounded(c);
    if (fc <= fb) return refine(a, c, b, fb);
    if (std::abs(c) > opts.max_abs_argument) return unbounded(c);
    a = b;
    b = c;
    fb = fc;
  }
  throw OptimizerError("maximize_concave: no bracket found (objective keeps "
                       "increasing below the divergence threshold)");
}

double find_root(const ScalarFunction& h, double lo, double hi, double f_tol,
                 double x_tol, int max_iter) {
  double flo = h(lo);
  double fhi = h(hi);
  if (flo > 0.0 || fhi < 0.0) {
    throw OptimizerError("find_root: interval does not bracket a root");
  }
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  int side = 0;
  for (int it = 0; it < max_iter; ++it) {
    double x;
    if (std::isfinite(flo) && std::isfinite(fhi) && it % 4 != 3) {
      x = (lo * fhi - hi * flo) / (fhi - flo);
      if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    } else {
      x = 0.5 * (lo + hi);
    }
    const double fx = h(x);
    if (std::abs(fx) <= f_tol) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    } else {
      hi = x;
      fhi = fx;
      if (side == 1) flo *= 0.5;
      side = 1;
    }
    if (hi - lo <= x_tol) return 0.5 * (lo + hi);
  }
  throw OptimizerError("find_root: iteration limit reached");
}

double log_sum_exp(std::span<const double> v) {
  double mx = -kInf;
  for (double x : v) mx = std::max(mx, x);
  if (mx == kInf) return kInf;
  if (mx == -kInf) return -kInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - mx);
  return mx + std::log(s);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> out;
  if (n <= 0) return out;
  if (n == 1) return {lo};
  out.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    out.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
  }
  return out;
}

std::vector<double> logspace(double lo, double hi, int n) {
  std::vector<double> out = linspace(std::log(lo), std::log(hi), n);
  for (double& x : out) x = std::exp(x);
  if (!out.empty()) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

}  // namespace renewal_ldp
