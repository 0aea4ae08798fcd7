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

#include "renewal_ldp/ratefn.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "parse_util.hpp"
#include "renewal_ldp/errors.hpp"

namespace renewal_ldp {

namespace {

bool has_closed_tilt(const WaitingLaw& law) {
  return std::holds_alternative<family::Exponential>(law.family()) ||
         std::holds_alternative<family::Gamma>(law.family());
}

double inverse_scale(const WaitingLaw& law) { return 1.0 / law.length_scale(); }

bool near(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Base measure and log-weight for integrals against e^{x tau + y F} psi:
// integral = exp(shift) * E_base[exp(weight(tau))].
struct TiltFrame {
  WaitingLaw base;
  double shift;
  double x_part;  // coefficient of (tau - lo) left in the weight
  double lo;
  double fref;
};

TiltFrame make_frame(const WaitingLaw& law, const BoundedFunction& F, double x,
                     double y) {
  const double fref = y > 0.0 ? F.upper() : F.lower();
  if (has_closed_tilt(law) && x < xi(law)) {
    return {tilt(law, x), log_mgf(law, x) + y * fref, 0.0, 0.0, fref};
  }
  const double lo = law.ess_inf();
  return {law, x * lo + y * fref, x, lo, fref};
}

ExpectationOptions frame_options(const BoundedFunction& F, const TiltFrame& fr) {
  ExpectationOptions o;
  o.breakpoints = F.breakpoints();
  if (fr.x_part < 0.0) o.scale = -1.0 / fr.x_part;
  return o;
}

}  // namespace

// ------------------------------------------------------------------ Lambda*

Legendre1d legendre_1d_detail(const WaitingLaw& law, double a) {
  if (!(a > 0.0) || !std::isfinite(a)) {
    throw RangeError("legendre_1d: a must be positive and finite");
  }
  // At or beyond the support ends the supremum is -log psi({a}) (or +inf).
  if (a <= law.ess_inf() || a >= law.ess_sup()) {
    Legendre1d edge;
    const double p = (a == law.ess_inf() || a == law.ess_sup()) ? mass_at(law, a) : 0.0;
    edge.value = p > 0.0 ? std::max(0.0, -std::log(p)) : kInf;
    edge.argmax = a <= law.ess_inf() ? -kInf : kInf;
    if (law.ess_inf() != law.ess_sup() || a != law.ess_inf()) return edge;
    edge.value = 0.0;
    return edge;
  }
  const double x_max = xi(law);
  const double cap = std::isfinite(x_max) ? critical_tilt(law, 40) : kInf;
  auto g = [&](double x) {
    const double lm = log_mgf(law, x);
    if (lm == kInf) return -kInf;
    return a * x - lm;
  };
  ConcaveMaxOptions opts;
  opts.start = std::min(0.0, cap);
  opts.step = inverse_scale(law);
  opts.upper_cap = cap;
  const MaxResult r = maximize_concave(g, opts);
  Legendre1d out;
  out.argmax = r.argmax;
  if (r.unbounded) {
    out.value = kInf;
    return out;
  }
  out.value = std::max(0.0, r.value);
  if (r.at_upper_cap && std::isfinite(x_max) && mgf_finite_at_xi(law)) {
    const double vb = a * x_max - log_mgf(law, x_max);
    if (vb >= out.value) {
      out.value = std::max(0.0, vb);
      out.argmax = x_max;
      out.at_boundary = true;
    }
  }
  return out;
}

double legendre_1d(const WaitingLaw& law, double a) {
  return legendre_1d_detail(law, a).value;
}

// ------------------------------------------------------------------ Lambda

double log_partition(const WaitingLaw& law, const BoundedFunction& F, double x,
                     double y) {
  const double x_max = xi(law);
  if (x > x_max) return kInf;
  if (x == x_max && !mgf_finite_at_xi(law)) return kInf;
  if (F.is_constant()) {
    return log_mgf(law, x) + y * F.lower();
  }
  if (law.is_discrete()) {
    std::vector<double> v;
    for (const auto& at : law.atoms_view()) {
      v.push_back(std::log(at.prob) + x * at.value + y * F(at.value));
    }
    return log_sum_exp(v);
  }
  if (y == 0.0) return log_mgf(law, x);
  const TiltFrame fr = make_frame(law, F, x, y);
  const double v = expectation(
      fr.base,
      [&](double t) {
        return std::exp(fr.x_part * (t - fr.lo) + y * (F(t) - fr.fref));
      },
      frame_options(F, fr));
  if (!(v > 0.0)) return -kInf;
  return std::isfinite(v) ? fr.shift + std::log(v) : kInf;
}

TiltMoments tilt_moments(const WaitingLaw& law, const BoundedFunction& F,
                         double x, double y) {
  TiltMoments m;
  if (law.is_discrete()) {
    const auto atoms = law.atoms_view();
    std::vector<double> lw;
    for (const auto& at : atoms) {
      lw.push_back(std::log(at.prob) + x * at.value + y * F(at.value));
    }
    m.log_z = log_sum_exp(lw);
    double s_t = 0, s_f = 0, s_tt = 0, s_tf = 0, s_ff = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const double q = std::exp(lw[i] - m.log_z);
      const double t = atoms[i].value;
      const double f = F(t);
      s_t += q * t;
      s_f += q * f;
      s_tt += q * t * t;
      s_tf += q * t * f;
      s_ff += q * f * f;
    }
    m.mean_tau = s_t;
    m.mean_f = s_f;
    m.var_tau = std::max(0.0, s_tt - s_t * s_t);
    m.cov = s_tf - s_t * s_f;
    m.var_f = std::max(0.0, s_ff - s_f * s_f);
    return m;
  }
  if (!std::isfinite(log_partition(law, F, x, y))) {
    throw DomainError("tilt_moments: (x, y) outside the domain of Lambda");
  }
  const TiltFrame fr = make_frame(law, F, x, y);
  const auto opts = frame_options(F, fr);
  auto w = [&](double t) {
    return std::exp(fr.x_part * (t - fr.lo) + y * (F(t) - fr.fref));
  };
  const double z = expectation(fr.base, w, opts);
  auto mom = [&](auto&& g) {
    return expectation(fr.base, [&](double t) { return g(t) * w(t); }, opts) / z;
  };
  m.log_z = fr.shift + std::log(z);
  m.mean_tau = mom([](double t) { return t; });
  m.mean_f = mom([&](double t) { return F(t); });
  // Central moments directly, to avoid cancellation.
  const double mt = m.mean_tau;
  const double mf = m.mean_f;
  m.var_tau = mom([&](double t) { return (t - mt) * (t - mt); });
  m.cov = mom([&](double t) { return (t - mt) * (F(t) - mf); });
  m.var_f = mom([&](double t) { return (F(t) - mf) * (F(t) - mf); });
  return m;
}

double legendre_2d(const WaitingLaw& law, const BoundedFunction& F, double a,
                   double b) {
  if (!(a > 0.0) || !(b >= 0.0)) {
    throw RangeError("legendre_2d: needs a > 0 and b >= 0");
  }
  // Means of tau and F under any zeta stay inside their ranges.
  if (b < F.lower() || b > F.upper() || a < law.ess_inf() || a > law.ess_sup()) return kInf;
  if (F.is_constant()) {
    // Lambda(x, y) = y F0 + log mgf(x): finite only on the line b = F0.
    if (b != F.lower()) return kInf;
    return legendre_1d(law, a);
  }
  const double x_max = xi(law);
  const double cap = std::isfinite(x_max) ? critical_tilt(law, 40) : kInf;
  const bool edge = std::isfinite(x_max) && mgf_finite_at_xi(law);
  auto inner = [&](double y) {
    auto g = [&](double x) {
      const double l = log_partition(law, F, x, y);
      return std::isfinite(l) ? a * x - l : (l < 0 ? kInf : -kInf);
    };
    ConcaveMaxOptions o;
    o.start = std::min(0.0, cap);
    o.step = inverse_scale(law);
    o.upper_cap = cap;
    const MaxResult r = maximize_concave(g, o);
    if (r.unbounded) return kInf;
    double v = r.value;
    if (r.at_upper_cap && edge) v = std::max(v, a * x_max - log_partition(law, F, x_max, y));
    return v;
  };
  ConcaveMaxOptions outer;
  outer.start = 0.0;
  outer.step = 1.0 / std::max(F.upper(), 1e-300);
  outer.max_abs_argument = 1e8;
  const MaxResult r = maximize_concave([&](double y) { return b * y + inner(y); }, outer);
  if (r.unbounded) return kInf;
  return std::max(0.0, r.value);
}

// --------------------------------------------------------------------- J_F

RateJF rate_JF_detail(const WaitingLaw& law, const BoundedFunction& F, double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw RangeError("rate_JF: m must be finite and nonnegative");
  }
  // At most t / ess_inf renewals fit in [0, t].
  const double m_max = law.ess_inf() > 0.0 ? F.upper() / law.ess_inf() : kInf;
  if (m > m_max) return RateJF{kInf, 0.0, 0.0, false};
  if (m == m_max && F.is_constant()) {
    const double beta = m / F.lower();
    return RateJF{beta * legendre_1d(law, 1.0 / beta), 0.0, 0.0, false};
  }
  const double x_max = xi(law);
  const bool edge = std::isfinite(x_max) && mgf_finite_at_xi(law);
  const double step = inverse_scale(law);

  struct XStar {
    double x;
    bool capped;
  };
  auto x_star = [&](double y) -> XStar {
    auto lam = [&](double x) { return log_partition(law, F, x, y); };
    double hi;
    if (edge) {
      if (lam(x_max) <= 0.0) return {x_max, true};
      hi = x_max;
    } else if (std::isfinite(x_max)) {
      int k = 0;
      hi = critical_tilt(law, 0);
      while (!(lam(hi) > 0.0)) {
        if (++k > 60) return {hi, false};
        hi = critical_tilt(law, k);
      }
    } else {
      hi = step;
      int k = 0;
      while (!(lam(hi) > 0.0)) {
        hi = 2.0 * hi + step;
        if (++k > 2000) throw OptimizerError("rate_JF: Lambda never turns positive");
      }
    }
    double lo = std::min(0.0, hi) - step;
    double w = step;
    int k = 0;
    while (!(lam(lo) <= 0.0)) {
      w *= 2.0;
      lo = std::min(0.0, hi) - w;
      if (++k > 2000) throw OptimizerError("rate_JF: Lambda never turns negative");
    }
    const double tol = 1e-14 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return {find_root(lam, lo, hi, 0.0, tol), false};
  };

  ConcaveMaxOptions o;
  o.start = 0.0;
  o.step = 1.0 / std::max(F.upper(), 1e-300);
  o.max_abs_argument = 1e8;
  o.x_rel_tol = 1e-10;
  const MaxResult r =
      maximize_concave([&](double y) { return m * y + x_star(y).x; }, o);
  RateJF out;
  out.y = r.argmax;
  if (r.unbounded) {
    out.value = kInf;
    return out;
  }
  const XStar xs = x_star(r.argmax);
  out.x = xs.x;
  out.capped = xs.capped;
  out.value = std::max(0.0, r.value);
  return out;
}

double rate_JF(const WaitingLaw& law, const BoundedFunction& F, double m) {
  return rate_JF_detail(law, F, m).value;
}

double rate_JF_perspective(const WaitingLaw& law, const BoundedFunction& F,
                           double m) {
  if (!(m >= 0.0)) throw RangeError("rate_JF_perspective: m must be nonnegative");
  if (F.is_constant()) {
    // beta Lambda*(1/beta, m/beta) is finite only at beta = m / F0.
    if (m == 0.0) return xi(law);
    const double beta = m / F.lower();
    return beta * legendre_1d(law, 1.0 / beta);
  }
  auto g = [&](double log_beta) {
    const double beta = std::exp(log_beta);
    const double v = legendre_2d(law, F, 1.0 / beta, m / beta);
    return std::isfinite(v) ? beta * v : kInf;
  };
  const auto grid = linspace(std::log(1e-4), std::log(1e4), 200);
  std::size_t best = 0;
  double best_v = kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = g(grid[i]);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  if (!std::isfinite(best_v)) return kInf;
  const double lo = grid[best == 0 ? 0 : best - 1];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  const MaxResult r = golden_section_max([&](double lb) { return -g(lb); }, lo, hi, 1e-10);
  return std::max(0.0, std::min(best_v, -r.value));
}

double rate_J1_closed(const WaitingLaw& law, double m) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw RangeError("rate_J1_closed: m must be finite and nonnegative");
  }
  const double T = T_limit(law);
  const double x_max = xi(law);
  if (std::isfinite(T) && m * T < 1.0) {
    if (!std::isfinite(x_max)) return kInf;
    const double head = m > 0.0 ? m * legendre_1d(law, T) : 0.0;
    return head + (1.0 - m * T) * x_max;
  }
  if (m == 0.0) return x_max;
  return m * legendre_1d(law, 1.0 / m);
}

// ---------------------------------------------------------- tilts by mean

namespace {

double solve_tilt_impl(const WaitingLaw& law, double target, double T) {
  if (!(target > 0.0) || !std::isfinite(target)) {
    throw RangeError("solve_tilt_for_mean: target must be positive and finite");
  }
  if (target <= law.ess_inf() || target >= T) {
    throw InfeasibleError("no tilt with mean " + detail::format_number(target) +
                          ": attainable tilted means are (" +
                          detail::format_number(law.ess_inf()) + ", " +
                          detail::format_number(T) + ")");
  }
  const double m0 = mean(law);
  if (target == m0) return 0.0;
  auto h = [&](double c) { return tilted_mean(law, c) - target; };
  const double step = inverse_scale(law);
  double lo;
  double hi;
  if (target > m0) {
    lo = 0.0;
    if (std::isfinite(xi(law))) {
      int k = 0;
      hi = critical_tilt(law, 0);
      while (h(hi) < 0.0) {
        if (hi > lo) lo = hi;
        if (++k > 40) throw InfeasibleError("solve_tilt_for_mean: target not reached");
        hi = critical_tilt(law, k);
      }
      lo = std::min(lo, hi);
    } else {
      hi = step;
      while (h(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) throw OptimizerError("solve_tilt_for_mean: no bracket");
      }
    }
  } else {
    hi = 0.0;
    lo = -step;
    while (h(lo) > 0.0) {
      hi = lo;
      lo *= 2.0;
      if (!std::isfinite(lo)) throw OptimizerError("solve_tilt_for_mean: no bracket");
    }
  }
  const double x_tol = 1e-15 * std::max({1.0, std::abs(lo), std::abs(hi)});
  return find_root(h, lo, hi, 1e-11 * target, x_tol);
}

}  // namespace

double solve_tilt_for_mean(const WaitingLaw& law, double target) {
  return solve_tilt_impl(law, target, T_limit(law));
}

namespace {

// T and xi are passed in because computing T costs a few dozen quadratures.
double entropy_at_mean_impl(const WaitingLaw& law, double target, double T,
                            double x_max) {
  const double lo = law.ess_inf();
  const double hi = law.ess_sup();
  if (target < lo || target > hi) return kInf;
  if (law.is_discrete()) {
    const auto atoms = law.atoms_view();
    if (target == lo) return -std::log(atoms.front().prob);
    if (target == hi) return -std::log(atoms.back().prob);
  }
  if (target <= lo) return kInf;
  if (std::isfinite(T) && std::isfinite(x_max) && near(target, T, 1e-12)) {
    return entropy_of_tilt(law, critical_tilt(law, 40));
  }
  if (target >= T) return kInf;
  if (target == mean(law)) return 0.0;
  return entropy_of_tilt(law, solve_tilt_impl(law, target, T));
}

}  // namespace

double entropy_at_mean(const WaitingLaw& law, double target) {
  if (law.is_discrete() || target > law.ess_inf()) {
    return entropy_at_mean_impl(law, target, T_limit(law), xi(law));
  }
  return entropy_at_mean_impl(law, target, kInf, kInf);
}

// ---------------------------------------------------------------- I and I0

double rate_I(const WaitingLaw& law, const DeltaMeasure& mu) {
  const double alpha = mu.alpha();
  const double x_max = xi(law);
  if (alpha == 0.0) return x_max;
  const double tail = alpha < 1.0 ? (1.0 - alpha) * x_max : 0.0;
  if (const auto* tp = std::get_if<TiltedPi>(&mu.pi())) {
    if (!(tp->base == law)) {
      throw MismatchError("rate_I: measure is built on " + tp->base.describe() +
                          ", not " + law.describe());
    }
    const double inner = entropy_of_tilt(law, tp->c) / tilted_mean(law, tp->c);
    return alpha * inner + tail;
  }
  if (!law.is_discrete()) return kInf;
  const auto& pi = std::get<std::vector<Atom>>(mu.pi());
  std::map<double, double> psi;
  for (const auto& a : law.atoms_view()) psi[a.value] = a.prob;
  double inv = 0.0;
  for (const auto& a : pi) inv += a.prob / a.value;
  double h = 0.0;
  for (const auto& a : pi) {
    const auto it = psi.find(a.value);
    if (it == psi.end()) return kInf;
    const double q = a.prob / a.value / inv;
    h += q * std::log(q / it->second);
  }
  return alpha * inv * std::max(0.0, h) + tail;
}

double rate_I0(const WaitingLaw& law, const DeltaMeasure& mu) {
  if (mu.alpha() != 1.0) return kInf;
  return rate_I(law, mu);
}

// ------------------------------------------------------- entropy projection

EntropyProjection entropy_projection(const WaitingLaw& law, double mean_target,
                                     const BoundedFunction& F, double f_target) {
  if (!(mean_target > 0.0) || !(f_target >= 0.0)) {
    throw RangeError("entropy_projection: needs mean_target > 0, f_target >= 0");
  }
  if (F.is_constant()) {
    if (!near(f_target, F.lower(), 1e-12)) {
      throw InfeasibleError("entropy_projection: F is constant; f_target must equal it");
    }
    const double c = solve_tilt_for_mean(law, mean_target);
    return {c, 0.0, entropy_of_tilt(law, c)};
  }
  const double a = mean_target;
  const double b = f_target;
  auto dual = [&](double x, double y) { return log_partition(law, F, x, y) - a * x - b * y; };
  const double f_scale = std::max(F.upper(), 1e-300);
  double x = 0.0;
  double y = 0.0;
  double lm = 1e-3;
  double d_old = dual(x, y);
  TiltMoments mo = tilt_moments(law, F, x, y);
  bool converged = false;
  for (int it = 0; it < 500; ++it) {
    const double gx = mo.mean_tau - a;
    const double gy = mo.mean_f - b;
    if (std::abs(gx) <= 1e-13 * a && std::abs(gy) <= 1e-13 * f_scale) {
      converged = true;
      break;
    }
    bool accepted = false;
    for (int inner = 0; inner < 60 && !accepted; ++inner) {
      const double h11 = mo.var_tau * (1.0 + lm) + 1e-300;
      const double h22 = mo.var_f * (1.0 + lm) + 1e-300;
      const double h12 = mo.cov;
      const double det = h11 * h22 - h12 * h12;
      if (!(det > 0.0)) {
        lm *= 4.0;
        continue;
      }
      const double dx = -(h22 * gx - h12 * gy) / det;
      const double dy = -(-h12 * gx + h11 * gy) / det;
      const double d_new = dual(x + dx, y + dy);
      if (std::isfinite(d_new) && d_new <= d_old + 1e-15 * (1.0 + std::abs(d_old))) {
        x += dx;
        y += dy;
        d_old = d_new;
        lm = std::max(lm / 3.0, 1e-12);
        accepted = true;
      } else {
        lm *= 4.0;
      }
    }
    if (!accepted || std::abs(x) > 1e7 || std::abs(y) > 1e7) break;
    mo = tilt_moments(law, F, x, y);
  }
  if (!converged) {
    throw InfeasibleError("entropy_projection: targets (" + detail::format_number(a) +
                          ", " + detail::format_number(b) +
                          ") are not attained by an exponential tilt");
  }
  EntropyProjection out{x, y, 0.0};
  if (law.is_discrete()) {
    double h = 0.0;
    for (const auto& at : law.atoms_view()) {
      const double lq = std::log(at.prob) + x * at.value + y * F(at.value) - mo.log_z;
      const double q = std::exp(lq);
      if (q > 0.0) h += q * (lq - std::log(at.prob));
    }
    out.entropy = std::max(0.0, h);
  } else {
    out.entropy = std::max(0.0, x * mo.mean_tau + y * mo.mean_f - mo.log_z);
  }
  return out;
}

// ------------------------------------------------------- variational check

VariationalJ1 variational_crosscheck_J1_detail(const WaitingLaw& law, double m) {
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw RangeError("variational_crosscheck_J1: m must be positive");
  }
  const double x_max = xi(law);
  if (!std::isfinite(x_max)) return {m * entropy_at_mean(law, 1.0 / m), 1.0};
  const double T = T_limit(law);
  auto entropy = [&](double target) {
    return entropy_at_mean_impl(law, target, T, x_max);
  };
  const double hi = std::min(1.0, m * T);
  const double lo = m * law.ess_inf();
  if (!(hi > lo) && !(law.is_discrete() && hi == lo)) return {kInf, hi};
  auto h = [&](double alpha) {
    // At alpha = m T the target is T itself, reached by the critical tilt.
    const double target = alpha == hi && hi == m * T ? T : alpha / m;
    return m * entropy(target) + (1.0 - alpha) * x_max;
  };
  const double tol = 1e-9 * std::max(1.0, hi);
  const MaxResult r = golden_section_max([&](double al) { return -h(al); }, lo, hi, tol);
  VariationalJ1 out{-r.value, r.argmax};
  const double at_hi = h(hi);
  // An argmax within the search tolerance of hi is the boundary itself; the
  // residual difference in h there is rounding noise.
  const bool at_edge = hi - out.alpha <= 2.0 * tol && at_hi <= out.value + 1e-12;
  if (at_hi <= out.value || at_edge) out = {at_hi, hi};
  return out;
}

double variational_crosscheck_J1(const WaitingLaw& law, double m) {
  return variational_crosscheck_J1_detail(law, m).value;
}

// ------------------------------------------------------------------- curves

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::kStrictConvex:
      return "STRICT_CONVEX";
    case Regime::kAffine:
      return "AFFINE";
    case Regime::kZero:
      return "ZERO";
    case Regime::kInfeasible:
      return "INFEASIBLE";
  }
  return "?";
}

std::vector<Regime> label_regimes(const std::vector<double>& m,
                                  const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<Regime> out(n, Regime::kStrictConvex);
  double vmin = kInf;
  double vmax = -kInf;
  for (double v : values) {
    if (std::isfinite(v)) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  const double tol = 1e-6 * (vmax > vmin ? vmax - vmin : 0.0);
  // flat[j]: the triple centred at j is finite and has a vanishing second
  // difference (deviation from the chord through its neighbours).
  std::vector<int> triple(n, 0);  // 0 none, 1 flat, 2 curved
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (!std::isfinite(values[j - 1]) || !std::isfinite(values[j]) ||
        !std::isfinite(values[j + 1])) {
      continue;
    }
    const double w = (m[j] - m[j - 1]) / (m[j + 1] - m[j - 1]);
    const double chord = values[j - 1] * (1.0 - w) + values[j + 1] * w;
    triple[j] = 2.0 * std::abs(values[j] - chord) < tol ? 1 : 2;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(values[i])) {
      out[i] = Regime::kInfeasible;
      continue;
    }
    bool any = false;
    bool flat = false;
    for (std::size_t j = (i == 0 ? 0 : i - 1); j <= i + 1 && j < n; ++j) {
      if (triple[j] != 0) any = true;
      if (triple[j] == 1) flat = true;
    }
    const bool zero = values[i] < 1e-9;
    if (flat || (!any && zero)) {
      out[i] = zero ? Regime::kZero : Regime::kAffine;
    } else {
      out[i] = Regime::kStrictConvex;
    }
  }
  return out;
}

RateCurve rate_curve(const WaitingLaw& law, const BoundedFunction& F,
                     const std::vector<double>& m_grid) {
  RateCurve curve;
  curve.xi = xi(law);
  curve.T = T_limit(law);
  std::vector<double> values;
  values.reserve(m_grid.size());
  for (double m : m_grid) values.push_back(rate_JF(law, F, m));
  const auto labels = label_regimes(m_grid, values);
  for (std::size_t i = 0; i < m_grid.size(); ++i) {
    curve.points.push_back({m_grid[i], values[i], labels[i]});
  }
  if (F.is_constant() && std::isfinite(curve.T)) curve.kink = F.lower() / curve.T;
  return curve;
}

RateCurve affine_scan(const WaitingLaw& law, const std::vector<double>& m_grid) {
  return rate_curve(law, BoundedFunction::one(), m_grid);
}

}  // namespace renewal_ldp
