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

#include "renewal_ldp/renewal.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "parse_util.hpp"

namespace renewal_ldp {

double segment_integral(const BivariateTestFunction& f, double r, double tau) {
  if (r <= 0.0) return 0.0;
  if (f.fbar) return f.fbar(r, tau);
  QuadratureOptions q;
  q.rel_tol = 1e-10;
  q.fail_tol = 1e-8;
  const auto& g = f.f;
  return integrate_interval([&](double u) { return g(u * tau, (1.0 - u) * tau); },
                            0.0, r, {}, q);
}

// ------------------------------------------------------------- DeltaMeasure

DeltaMeasure DeltaMeasure::from_atoms(double alpha, std::vector<Atom> atoms) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw RangeError("alpha must lie in [0, 1]");
  if (atoms.empty()) {
    if (alpha != 0.0) throw RangeError("empty pi requires alpha = 0");
    return DeltaMeasure(alpha, std::vector<Atom>{});
  }
  std::map<double, double> merged;
  // Neumaier summation: path projections carry ~1e6 atoms.
  double total = 0.0;
  double comp = 0.0;
  for (const auto& a : atoms) {
    if (!(a.value > 0.0) || !std::isfinite(a.value) || !(a.prob > 0.0)) {
      throw RangeError("pi atoms need positive finite values and weights");
    }
    merged[a.value] += a.prob;
    const double t = total + a.prob;
    comp += std::abs(total) >= std::abs(a.prob) ? (total - t) + a.prob
                                                : (a.prob - t) + total;
    total = t;
  }
  total += comp;
  if (std::abs(total - 1.0) > 1e-12) {
    throw RangeError("pi weights sum to " + detail::format_number(total));
  }
  std::vector<Atom> out;
  for (const auto& [v, p] : merged) out.push_back({v, p});
  return DeltaMeasure(alpha, std::move(out));
}

DeltaMeasure DeltaMeasure::from_tilt(double alpha, WaitingLaw base, double c) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw RangeError("alpha must lie in [0, 1]");
  if (!std::isfinite(log_mgf(base, c))) {
    throw DomainError("tilted pi: mgf(c) = +inf");
  }
  if (!std::isfinite(tilted_mean(base, c))) {
    throw DomainError("tilted pi: tilted mean is infinite");
  }
  return DeltaMeasure(alpha, TiltedPi{std::move(base), c});
}

double DeltaMeasure::pi_inverse_moment() const {
  if (const auto* atoms = std::get_if<std::vector<Atom>>(&pi_)) {
    double s = 0.0;
    for (const auto& a : *atoms) s += a.prob / a.value;
    return s;
  }
  const auto& tp = std::get<TiltedPi>(pi_);
  return 1.0 / tilted_mean(tp.base, tp.c);
}

double DeltaMeasure::evaluate(const BivariateTestFunction& f) const {
  double inner = 0.0;
  if (const auto* atoms = std::get_if<std::vector<Atom>>(&pi_)) {
    for (const auto& a : *atoms) inner += a.prob * segment_integral(f, 1.0, a.value);
  } else if (alpha_ > 0.0) {
    // pi(d tau) = tau ptilde(d tau) / ptilde(tau) with ptilde = tilt(base, c).
    const auto& tp = std::get<TiltedPi>(pi_);
    const WaitingLaw pt = tilt(tp.base, tp.c);
    inner = expectation(pt, [&](double tau) {
              return tau * segment_integral(f, 1.0, tau);
            }) /
            mean(pt);
  }
  return alpha_ * inner + (1.0 - alpha_) * f.at_infinity;
}

// -------------------------------------------------------------- RenewalPath

RenewalPath::RenewalPath(std::vector<double> arrivals, double horizon)
    : arrivals_(std::move(arrivals)), horizon_(horizon) {
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw RangeError("path horizon must be positive and finite");
  }
  if (arrivals_.empty()) throw RangeError("path has no arrivals");
  double prev = 0.0;
  for (double s : arrivals_) {
    if (!(s > prev)) throw RangeError("arrivals must be strictly increasing and positive");
    prev = s;
  }
  if (!(arrivals_.back() > horizon_)) {
    throw RangeError("last arrival must exceed the horizon");
  }
  if (arrivals_.size() >= 2 && arrivals_[arrivals_.size() - 2] > horizon_) {
    throw RangeError("only the last arrival may exceed the horizon");
  }
}

double RenewalPath::interarrival(std::size_t i) const {
  if (i == 0 || i > arrivals_.size()) throw RangeError("interarrival index");
  return i == 1 ? arrivals_[0] : arrivals_[i - 1] - arrivals_[i - 2];
}

RenewalPath simulate(const WaitingLaw& law, double t, RandomStream& rng) {
  if (!(t > 0.0) || !std::isfinite(t)) throw RangeError("simulate: t must be positive");
  std::vector<double> arrivals;
  double sum = 0.0;
  const PathSummary s = fold_renewal(
      t, [&] { return sample(law, rng); },
      [&](double tau) {
        sum += tau;
        arrivals.push_back(sum);
      });
  arrivals.push_back(s.last_completed + s.straddle);
  return RenewalPath(std::move(arrivals), t);
}

std::size_t counting(const RenewalPath& path) {
  const auto& a = path.arrivals();
  return static_cast<std::size_t>(
             std::upper_bound(a.begin(), a.end(), path.horizon()) - a.begin()) +
         1;
}

RecurrencePair recurrence(const RenewalPath& path, double s) {
  if (!(s >= 0.0 && s < path.horizon())) {
    throw RangeError("recurrence: s = " + detail::format_number(s) +
                     " outside [0, horizon)");
  }
  const auto& a = path.arrivals();
  const auto it = std::upper_bound(a.begin(), a.end(), s);
  const double prev = it == a.begin() ? 0.0 : *(it - 1);
  return {s - prev, *it - s};
}

double empirical_integral(const RenewalPath& path, const BivariateTestFunction& f) {
  const auto& a = path.arrivals();
  const double t = path.horizon();
  const std::size_t n = counting(path);
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double tau = a[i] - prev;
    total += tau * segment_integral(f, 1.0, tau);
    prev = a[i];
  }
  const double tau_n = a[n - 1] - prev;
  total += tau_n * segment_integral(f, (t - prev) / tau_n, tau_n);
  return total / t;
}

DeltaMeasure delta_projection(const RenewalPath& path) {
  const auto& a = path.arrivals();
  const std::size_t n = counting(path);
  if (n == 1) return DeltaMeasure::from_atoms(0.0, {});
  const double s_last = a[n - 2];
  std::vector<Atom> atoms;
  atoms.reserve(n - 1);
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    atoms.push_back({a[i] - prev, (a[i] - prev) / s_last});
    prev = a[i];
  }
  return DeltaMeasure::from_atoms(s_last / path.horizon(), std::move(atoms));
}

double cumulative(const RenewalPath& path, const std::function<double(double)>& F) {
  const auto& a = path.arrivals();
  const std::size_t n = counting(path);
  double total = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    total += F(a[i] - prev);
    prev = a[i];
  }
  return total;
}

}  // namespace renewal_ldp
