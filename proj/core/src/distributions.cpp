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

#include "renewal_ldp/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <boost/random/gamma_distribution.hpp>

#include "parse_util.hpp"
#include "renewal_ldp/errors.hpp"

namespace renewal_ldp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw RangeError(std::string(what) + " must be positive and finite");
  }
}

// Continuous families integrate against a density on [lo, inf).
struct Continuous {
  ScalarFunction density;
  double lo;
  double scale;
};

bool continuous_info(const WaitingLaw::Family& f, Continuous* out) {
  return std::visit(
      Overloaded{
          [&](const family::Exponential& e) {
            const double r = e.rate;
            *out = {[r](double t) { return t < 0.0 ? 0.0 : r * std::exp(-r * t); },
                    0.0, 1.0 / r};
            return true;
          },
          [&](const family::Gamma& g) {
            const double k = g.shape;
            const double th = g.scale;
            const double norm = std::lgamma(k) + k * std::log(th);
            *out = {[k, th, norm](double t) {
                      if (t <= 0.0) return 0.0;
                      return std::exp((k - 1.0) * std::log(t) - t / th - norm);
                    },
                    0.0, k * th};
            return true;
          },
          [&](const family::Pareto& p) {
            const double a = p.alpha;
            const double xm = p.xmin;
            *out = {[a, xm](double t) {
                      if (t < xm) return 0.0;
                      return a / xm * std::pow(xm / t, a + 1.0);
                    },
                    xm, xm};
            return true;
          },
          [&](const family::Weibull& w) {
            const double k = w.shape;
            const double lam = w.scale;
            *out = {[k, lam](double t) {
                      if (t <= 0.0) return 0.0;
                      const double z = t / lam;
                      return k / lam * std::pow(z, k - 1.0) * std::exp(-std::pow(z, k));
                    },
                    0.0, lam};
            return true;
          },
          [](const auto&) { return false; }},
      f);
}

double discrete_mean(const std::vector<Atom>& atoms) {
  double m = 0.0;
  for (const auto& a : atoms) m += a.value * a.prob;
  return m;
}

// Normalized tilt weights exp(log p + c v - L) of a discrete law.
std::vector<Atom> reweight(const std::vector<Atom>& atoms, double c) {
  std::vector<double> logs;
  logs.reserve(atoms.size());
  for (const auto& a : atoms) logs.push_back(std::log(a.prob) + c * a.value);
  const double lse = log_sum_exp(logs);
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const double q = std::exp(logs[i] - lse);
    if (q > 0.0) out.push_back({atoms[i].value, q});
  }
  return out;
}

double quad_log_mgf(const WaitingLaw& law, double c, bool assume_finite) {
  const double lo = law.ess_inf();
  ExpectationOptions opts;
  opts.assume_finite = assume_finite;
  if (c < 0.0) opts.scale = -1.0 / c;
  // Near c = 0 the log is dominated by cancellation; integrate expm1 instead.
  if (std::abs(c) * law.length_scale() < 0.5) {
    const double d =
        expectation(law, [c](double t) { return std::expm1(c * t); }, opts);
    if (!std::isfinite(d)) return kInf;
    if (d > -0.5) return std::log1p(d);
  }
  const double v =
      expectation(law, [c, lo](double t) { return std::exp(c * (t - lo)); }, opts);
  if (!std::isfinite(v)) return kInf;
  return c * lo + std::log(v);
}

double quad_tilted_mean(const WaitingLaw& law, double c) {
  const double lo = law.ess_inf();
  ExpectationOptions opts;
  if (c < 0.0) opts.scale = -1.0 / c;
  const double num =
      expectation(law, [c, lo](double t) { return t * std::exp(c * (t - lo)); }, opts);
  const double den =
      expectation(law, [c, lo](double t) { return std::exp(c * (t - lo)); }, opts);
  return num / den;
}

constexpr long kMaxRejections = 100000000;

double sample_tilted(const family::Tilted& tl, RandomStream& rng) {
  const WaitingLaw& base = *tl.base;
  if (tl.c <= 0.0) {
    const double lo = base.ess_inf();
    for (long i = 0; i < kMaxRejections; ++i) {
      const double t = sample(base, rng);
      if (rng.uniform() < std::exp(tl.c * (t - lo))) return t;
    }
    throw DomainError("tilt sampler: rejection budget exhausted");
  }
  // Numeric inversion of the tilted survival function.
  const double u = rng.uniform();
  const WaitingLaw law = tilt(base, tl.c);
  double lo = base.ess_inf();
  double hi = lo + base.length_scale();
  while (survival(law, hi) > u) {
    lo = hi;
    hi = lo + 2.0 * (hi - base.ess_inf());
    if (!std::isfinite(hi)) throw DomainError("tilt sampler: inversion failed");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-12 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (survival(law, mid) > u ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double pick_discrete(const std::vector<Atom>& atoms, double total,
                     double u) {
  double acc = 0.0;
  const double target = u * total;
  for (const auto& a : atoms) {
    acc += a.prob;
    if (target < acc) return a.value;
  }
  return atoms.back().value;
}

std::string describe_family(const WaitingLaw::Family& f);

}  // namespace

// ---------------------------------------------------------------- factories

WaitingLaw WaitingLaw::exponential(double rate) {
  require_positive(rate, "exponential rate");
  return WaitingLaw(family::Exponential{rate});
}

WaitingLaw WaitingLaw::gamma(double shape, double scale) {
  require_positive(shape, "gamma shape");
  require_positive(scale, "gamma scale");
  if (shape == 1.0) return exponential(1.0 / scale);
  return WaitingLaw(family::Gamma{shape, scale});
}

WaitingLaw WaitingLaw::pareto(double alpha, double xmin) {
  require_positive(alpha, "pareto alpha");
  require_positive(xmin, "pareto xmin");
  return WaitingLaw(family::Pareto{alpha, xmin});
}

WaitingLaw WaitingLaw::weibull(double shape, double scale) {
  require_positive(shape, "weibull shape");
  require_positive(scale, "weibull scale");
  if (shape == 1.0) return exponential(1.0 / scale);
  return WaitingLaw(family::Weibull{shape, scale});
}

WaitingLaw WaitingLaw::deterministic(double tau) {
  require_positive(tau, "deterministic tau");
  return WaitingLaw(family::Deterministic{tau});
}

WaitingLaw WaitingLaw::atoms(std::vector<Atom> atoms) {
  if (atoms.empty()) throw RangeError("atoms: empty atom list");
  std::map<double, double> merged;
  double total = 0.0;
  for (const auto& a : atoms) {
    require_positive(a.value, "atom value");
    require_positive(a.prob, "atom probability");
    merged[a.value] += a.prob;
    total += a.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw RangeError("atoms: probabilities sum to " +
                     detail::format_number(total) + ", not 1");
  }
  family::DiscreteAtoms d;
  double acc = 0.0;
  for (const auto& [v, p] : merged) {
    d.atoms.push_back({v, p});
    acc += p;
    d.cdf.push_back(acc);
  }
  d.cdf.back() = 1.0;
  if (d.atoms.size() == 1) return deterministic(d.atoms.front().value);
  return WaitingLaw(std::move(d));
}

WaitingLaw WaitingLaw::empirical(std::vector<double> samples) {
  if (samples.empty()) throw RangeError("empirical: no samples");
  for (double s : samples) require_positive(s, "empirical sample");
  std::sort(samples.begin(), samples.end());
  return WaitingLaw(family::Empirical{std::move(samples)});
}

WaitingLaw WaitingLaw::mixture(std::vector<double> weights,
                               std::vector<WaitingLaw> components) {
  if (weights.size() != components.size() || weights.empty()) {
    throw RangeError("mixture: weights and components differ in length");
  }
  double total = 0.0;
  for (double w : weights) {
    require_positive(w, "mixture weight");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw RangeError("mixture: weights sum to " + detail::format_number(total));
  }
  family::Mixture m;
  m.weights = std::move(weights);
  for (auto& c : components) {
    m.components.push_back(std::make_shared<const WaitingLaw>(std::move(c)));
  }
  return WaitingLaw(std::move(m));
}

// ------------------------------------------------------------------ parsing

WaitingLaw WaitingLaw::parse(std::string_view spec) {
  const detail::Call call = detail::parse_call(spec);
  const std::string where = "law spec '" + detail::trim(spec) + "'";
  if (!call.has_parens) throw ParseError(where + ": expected name(args)");
  auto nums = [&](std::size_t n) {
    if (call.args.size() != n) {
      throw ParseError(where + ": '" + call.name + "' takes " +
                       std::to_string(n) + " argument(s), got " +
                       std::to_string(call.args.size()));
    }
    std::vector<double> v;
    for (const auto& a : call.args) v.push_back(detail::parse_number(a));
    return v;
  };
  try {
    if (call.name == "exp") return exponential(nums(1)[0]);
    if (call.name == "gamma") {
      const auto v = nums(2);
      return gamma(v[0], v[1]);
    }
    if (call.name == "pareto") {
      const auto v = nums(2);
      return pareto(v[0], v[1]);
    }
    if (call.name == "weibull") {
      const auto v = nums(2);
      return weibull(v[0], v[1]);
    }
    if (call.name == "det") return deterministic(nums(1)[0]);
    if (call.name == "atoms") {
      std::vector<Atom> list;
      for (const auto& item : call.args) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
          throw ParseError(where + ": atom '" + item + "' is not value:prob");
        }
        list.push_back({detail::parse_number(item.substr(0, colon)),
                         detail::parse_number(item.substr(colon + 1))});
      }
      return atoms(std::move(list));
    }
    if (call.name == "empirical") {
      if (call.args.size() != 1 || call.args[0].empty()) {
        throw ParseError(where + ": empirical(path) needs one path");
      }
      std::ifstream in(call.args[0]);
      if (!in) throw ParseError(where + ": cannot open '" + call.args[0] + "'");
      std::vector<double> samples;
      std::string line;
      int lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t.front() == '#') continue;
        try {
          samples.push_back(detail::parse_number(t));
        } catch (const ParseError& e) {
          throw ParseError(call.args[0] + ":" + std::to_string(lineno) + ": " +
                           e.what());
        }
      }
      return empirical(std::move(samples));
    }
    if (call.name == "mix") {
      std::vector<double> w;
      std::vector<WaitingLaw> comps;
      for (const auto& item : call.args) {
        const auto star = item.find('*');
        if (star == std::string::npos) {
          throw ParseError(where + ": mixture item '" + item +
                           "' is not weight*law");
        }
        w.push_back(detail::parse_number(item.substr(0, star)));
        comps.push_back(parse(item.substr(star + 1)));
      }
      return mixture(std::move(w), std::move(comps));
    }
    if (call.name == "tilt") {
      if (call.args.size() != 2) throw ParseError(where + ": tilt(law,c)");
      return tilt(parse(call.args[0]), detail::parse_number(call.args[1]));
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(where + ": " + e.what());
  }
  throw ParseError(where + ": unknown family '" + call.name + "'");
}

namespace {

std::string describe_family(const WaitingLaw::Family& f) {
  using detail::format_number;
  return std::visit(
      Overloaded{
          [](const family::Exponential& e) {
            return "exp(" + format_number(e.rate) + ")";
          },
          [](const family::Gamma& g) {
            return "gamma(" + format_number(g.shape) + "," +
                   format_number(g.scale) + ")";
          },
          [](const family::Pareto& p) {
            return "pareto(" + format_number(p.alpha) + "," +
                   format_number(p.xmin) + ")";
          },
          [](const family::Weibull& w) {
            return "weibull(" + format_number(w.shape) + "," +
                   format_number(w.scale) + ")";
          },
          [](const family::Deterministic& d) {
            return "det(" + format_number(d.tau) + ")";
          },
          [](const family::DiscreteAtoms& d) {
            std::string s = "atoms(";
            for (std::size_t i = 0; i < d.atoms.size(); ++i) {
              if (i) s += ",";
              s += format_number(d.atoms[i].value) + ":" +
                   format_number(d.atoms[i].prob);
            }
            return s + ")";
          },
          [](const family::Empirical& e) {
            std::string s = "empirical[n=" + std::to_string(e.samples.size());
            std::uint64_t h = 1469598103934665603ULL;
            for (double x : e.samples) {
              h ^= std::hash<double>{}(x);
              h *= 1099511628211ULL;
            }
            return s + ",h=" + std::to_string(h) + "]";
          },
          [](const family::Mixture& m) {
            std::string s = "mix(";
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              if (i) s += ",";
              s += format_number(m.weights[i]) + "*" + m.components[i]->describe();
            }
            return s + ")";
          },
          [](const family::Tilted& t) {
            return "tilt(" + t.base->describe() + "," + format_number(t.c) + ")";
          }},
      f);
}

}  // namespace

std::string WaitingLaw::describe() const { return describe_family(family_); }

bool operator==(const WaitingLaw& a, const WaitingLaw& b) {
  return a.describe() == b.describe();
}

// --------------------------------------------------------------- properties

double WaitingLaw::ess_inf() const {
  return std::visit(
      Overloaded{[](const family::Pareto& p) { return p.xmin; },
                 [](const family::Deterministic& d) { return d.tau; },
                 [](const family::DiscreteAtoms& d) { return d.atoms.front().value; },
                 [](const family::Empirical& e) { return e.samples.front(); },
                 [](const family::Mixture& m) {
                   double v = kInf;
                   for (const auto& c : m.components) v = std::min(v, c->ess_inf());
                   return v;
                 },
                 [](const family::Tilted& t) { return t.base->ess_inf(); },
                 [](const auto&) { return 0.0; }},
      family_);
}

double WaitingLaw::ess_sup() const {
  return std::visit(
      Overloaded{[](const family::Deterministic& d) { return d.tau; },
                 [](const family::DiscreteAtoms& d) { return d.atoms.back().value; },
                 [](const family::Empirical& e) { return e.samples.back(); },
                 [](const family::Mixture& m) {
                   double v = 0.0;
                   for (const auto& c : m.components) v = std::max(v, c->ess_sup());
                   return v;
                 },
                 [](const family::Tilted& t) { return t.base->ess_sup(); },
                 [](const auto&) { return kInf; }},
      family_);
}

double WaitingLaw::length_scale() const {
  return std::visit(
      Overloaded{[](const family::Exponential& e) { return 1.0 / e.rate; },
                 [](const family::Gamma& g) { return g.shape * g.scale; },
                 [](const family::Pareto& p) { return p.xmin; },
                 [](const family::Weibull& w) { return w.scale; },
                 [](const family::Deterministic& d) { return d.tau; },
                 [](const family::DiscreteAtoms& d) { return discrete_mean(d.atoms); },
                 [](const family::Empirical& e) {
                   return std::accumulate(e.samples.begin(), e.samples.end(), 0.0) /
                          static_cast<double>(e.samples.size());
                 },
                 [](const family::Mixture& m) {
                   double v = 0.0;
                   for (const auto& c : m.components) v = std::max(v, c->length_scale());
                   return v;
                 },
                 [](const family::Tilted& t) { return t.base->length_scale(); }},
      family_);
}

bool WaitingLaw::is_discrete() const {
  return std::holds_alternative<family::Deterministic>(family_) ||
         std::holds_alternative<family::DiscreteAtoms>(family_) ||
         std::holds_alternative<family::Empirical>(family_);
}

std::vector<Atom> WaitingLaw::atoms_view() const {
  return std::visit(
      Overloaded{[](const family::Deterministic& d) {
                   return std::vector<Atom>{{d.tau, 1.0}};
                 },
                 [](const family::DiscreteAtoms& d) { return d.atoms; },
                 [](const family::Empirical& e) {
                   std::vector<Atom> out;
                   const double p = 1.0 / static_cast<double>(e.samples.size());
                   for (double s : e.samples) {
                     if (!out.empty() && out.back().value == s) {
                       out.back().prob += p;
                     } else {
                       out.push_back({s, p});
                     }
                   }
                   return out;
                 },
                 [](const auto&) { return std::vector<Atom>{}; }},
      family_);
}

// ------------------------------------------------------------- expectations

double expectation(const WaitingLaw& law, const ScalarFunction& h,
                   const ExpectationOptions& opts) {
  Continuous cont;
  if (continuous_info(law.family(), &cont)) {
    const double lo = std::max(cont.lo, opts.lower);
    QuadratureOptions q;
    q.assume_finite = opts.assume_finite;
    const auto& dens = cont.density;
    auto integrand = [&](double t) {
      const double d = dens(t);
      return d == 0.0 ? 0.0 : h(t) * d;
    };
    const double scale = opts.scale > 0.0 ? std::min(opts.scale, cont.scale) : cont.scale;
    return integrate_halfline(integrand, lo, scale, opts.breakpoints, q);
  }
  if (law.is_discrete()) {
    double s = 0.0;
    for (const auto& a : law.atoms_view()) {
      if (a.value > opts.lower) s += a.prob * h(a.value);
    }
    return s;
  }
  if (const auto* m = std::get_if<family::Mixture>(&law.family())) {
    double s = 0.0;
    for (std::size_t i = 0; i < m->weights.size(); ++i) {
      s += m->weights[i] * expectation(*m->components[i], h, opts);
    }
    return s;
  }
  const auto& tl = std::get<family::Tilted>(law.family());
  const double c = tl.c;
  const double lm = tl.log_mgf_c;
  ExpectationOptions inner = opts;
  if (c < 0.0) {
    const double k = 1.0 / -c;
    inner.scale = inner.scale > 0.0 ? std::min(inner.scale, k) : k;
  }
  return expectation(
      *tl.base, [&](double t) { return h(t) * std::exp(c * t - lm); }, inner);
}

// ---------------------------------------------------------------- sampling

double sample(const WaitingLaw& law, RandomStream& rng) {
  return std::visit(
      Overloaded{
          [&](const family::Exponential& e) { return -std::log(rng.uniform()) / e.rate; },
          [&](const family::Gamma& g) {
            boost::random::gamma_distribution<double> dist(g.shape, g.scale);
            double v = dist(rng);
            while (!(v > 0.0)) v = dist(rng);
            return v;
          },
          [&](const family::Pareto& p) {
            return p.xmin * std::pow(rng.uniform(), -1.0 / p.alpha);
          },
          [&](const family::Weibull& w) {
            return w.scale * std::pow(-std::log(rng.uniform()), 1.0 / w.shape);
          },
          [&](const family::Deterministic& d) { return d.tau; },
          [&](const family::DiscreteAtoms& d) {
            const double u = rng.uniform();
            const auto it = std::upper_bound(d.cdf.begin(), d.cdf.end(), u);
            const auto idx = std::min<std::size_t>(
                static_cast<std::size_t>(it - d.cdf.begin()), d.atoms.size() - 1);
            return d.atoms[idx].value;
          },
          [&](const family::Empirical& e) {
            const auto n = e.samples.size();
            const auto idx = std::min<std::size_t>(
                static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)), n - 1);
            return e.samples[idx];
          },
          [&](const family::Mixture& m) {
            const double u = rng.uniform();
            double acc = 0.0;
            std::size_t i = 0;
            for (; i + 1 < m.weights.size(); ++i) {
              acc += m.weights[i];
              if (u < acc) break;
            }
            return sample(*m.components[i], rng);
          },
          [&](const family::Tilted& t) { return sample_tilted(t, rng); }},
      law.family());
}

double mass_at(const WaitingLaw& law, double v) {
  if (law.is_discrete()) {
    for (const auto& a : law.atoms_view()) {
      if (a.value == v) return a.prob;
    }
    return 0.0;
  }
  if (const auto* m = std::get_if<family::Mixture>(&law.family())) {
    double p = 0.0;
    for (std::size_t i = 0; i < m->weights.size(); ++i) {
      p += m->weights[i] * mass_at(*m->components[i], v);
    }
    return p;
  }
  if (const auto* t = std::get_if<family::Tilted>(&law.family())) {
    const double p = mass_at(*t->base, v);
    return p > 0.0 ? p * std::exp(t->c * v - t->log_mgf_c) : 0.0;
  }
  return 0.0;
}

double survival(const WaitingLaw& law, double s) {
  if (s < law.ess_inf()) return 1.0;
  return std::visit(
      Overloaded{
          [&](const family::Exponential& e) { return std::exp(-e.rate * s); },
          [&](const family::Gamma& g) { return boost::math::gamma_q(g.shape, s / g.scale); },
          [&](const family::Pareto& p) { return std::pow(p.xmin / s, p.alpha); },
          [&](const family::Weibull& w) { return std::exp(-std::pow(s / w.scale, w.shape)); },
          [&](const family::Mixture& m) {
            double v = 0.0;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              v += m.weights[i] * survival(*m.components[i], s);
            }
            return v;
          },
          [&](const family::Tilted&) {
            ExpectationOptions opts;
            opts.lower = s;
            return std::min(1.0, expectation(law, [](double) { return 1.0; }, opts));
          },
          [&](const auto&) {
            double v = 0.0;
            for (const auto& a : law.atoms_view()) {
              if (a.value > s) v += a.prob;
            }
            return v;
          }},
      law.family());
}

double sample_tail(const WaitingLaw& law, double s, RandomStream& rng) {
  if (s < law.ess_inf()) return sample(law, rng);
  return std::visit(
      Overloaded{
          [&](const family::Exponential& e) {
            return s - std::log(rng.uniform()) / e.rate;
          },
          [&](const family::Gamma& g) {
            const double q = rng.uniform() * boost::math::gamma_q(g.shape, s / g.scale);
            if (!(q > 0.0)) throw TailSamplingError("gamma tail underflow");
            return std::max(s, g.scale * boost::math::gamma_q_inv(g.shape, q));
          },
          [&](const family::Pareto& p) {
            return s * std::pow(rng.uniform(), -1.0 / p.alpha);
          },
          [&](const family::Weibull& w) {
            const double z = std::pow(s / w.scale, w.shape) - std::log(rng.uniform());
            return w.scale * std::pow(z, 1.0 / w.shape);
          },
          [&](const family::Mixture& m) {
            std::vector<double> p;
            double total = 0.0;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              p.push_back(m.weights[i] * survival(*m.components[i], s));
              total += p.back();
            }
            if (!(total > 0.0)) {
              throw TailSamplingError("mixture has no mass above the threshold");
            }
            const double u = rng.uniform() * total;
            double acc = 0.0;
            std::size_t i = 0;
            for (; i + 1 < p.size(); ++i) {
              acc += p[i];
              if (u < acc && p[i] > 0.0) break;
            }
            while (p[i] == 0.0 && i > 0) --i;
            return sample_tail(*m.components[i], s, rng);
          },
          [&](const family::Tilted& t) {
            if (t.c > 0.0) {
              throw TailSamplingError("tail sampling of a positively tilted "
                                      "density-wrapped law is not supported");
            }
            for (long i = 0; i < kMaxRejections; ++i) {
              const double v = sample_tail(*t.base, s, rng);
              if (rng.uniform() < std::exp(t.c * (v - s))) return v;
            }
            throw TailSamplingError("tilted tail: rejection budget exhausted");
          },
          [&](const auto&) {
            std::vector<Atom> tail;
            double total = 0.0;
            for (const auto& a : law.atoms_view()) {
              if (a.value > s) {
                tail.push_back(a);
                total += a.prob;
              }
            }
            if (tail.empty()) {
              throw TailSamplingError("no support point above the threshold " +
                                      detail::format_number(s));
            }
            return pick_discrete(tail, total, rng.uniform());
          }},
      law.family());
}

// ------------------------------------------------------------ mgf and tilts

double log_mgf(const WaitingLaw& law, double c) {
  if (c == 0.0) return 0.0;
  return std::visit(
      Overloaded{
          [&](const family::Exponential& e) {
            return c < e.rate ? -std::log1p(-c / e.rate) : kInf;
          },
          [&](const family::Gamma& g) {
            return c < 1.0 / g.scale ? -g.shape * std::log1p(-g.scale * c) : kInf;
          },
          [&](const family::Pareto&) {
            return c > 0.0 ? kInf : quad_log_mgf(law, c, true);
          },
          [&](const family::Weibull& w) {
            return (w.shape < 1.0 && c > 0.0) ? kInf : quad_log_mgf(law, c, true);
          },
          [&](const family::Deterministic& d) { return c * d.tau; },
          [&](const family::Mixture& m) {
            std::vector<double> v;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              v.push_back(std::log(m.weights[i]) + log_mgf(*m.components[i], c));
            }
            return log_sum_exp(v);
          },
          [&](const family::Tilted& t) {
            const double v = log_mgf(*t.base, t.c + c);
            return std::isfinite(v) ? v - t.log_mgf_c : v;
          },
          [&](const auto&) {
            std::vector<double> v;
            for (const auto& a : law.atoms_view()) {
              v.push_back(std::log(a.prob) + c * a.value);
            }
            return log_sum_exp(v);
          }},
      law.family());
}

double mgf(const WaitingLaw& law, double c) { return std::exp(log_mgf(law, c)); }

double xi(const WaitingLaw& law) {
  return std::visit(
      Overloaded{[](const family::Exponential& e) { return e.rate; },
                 [](const family::Gamma& g) { return 1.0 / g.scale; },
                 [](const family::Pareto&) { return 0.0; },
                 [](const family::Weibull& w) { return w.shape > 1.0 ? kInf : 0.0; },
                 [](const family::Mixture& m) {
                   double v = kInf;
                   for (const auto& c : m.components) v = std::min(v, xi(*c));
                   return v;
                 },
                 [](const family::Tilted& t) { return xi(*t.base) - t.c; },
                 [](const auto&) { return kInf; }},
      law.family());
}

bool mgf_finite_at_xi(const WaitingLaw& law) {
  return std::visit(
      Overloaded{[](const family::Pareto&) { return true; },
                 [](const family::Weibull& w) { return w.shape < 1.0; },
                 [&](const family::Mixture& m) {
                   const double x = xi(law);
                   for (const auto& c : m.components) {
                     if (xi(*c) == x && !mgf_finite_at_xi(*c)) return false;
                   }
                   return std::isfinite(x);
                 },
                 [](const family::Tilted& t) { return mgf_finite_at_xi(*t.base); },
                 [](const auto&) { return false; }},
      law.family());
}

double tilted_mean(const WaitingLaw& law, double c) {
  const double lm = log_mgf(law, c);
  if (!std::isfinite(lm)) {
    throw DomainError("tilted_mean: mgf(" + detail::format_number(c) +
                      ") = +inf for " + law.describe());
  }
  return std::visit(
      Overloaded{
          [&](const family::Exponential& e) { return 1.0 / (e.rate - c); },
          [&](const family::Gamma& g) { return g.shape * g.scale / (1.0 - g.scale * c); },
          [&](const family::Pareto& p) {
            if (c == 0.0) {
              return p.alpha > 1.0 ? p.alpha * p.xmin / (p.alpha - 1.0) : kInf;
            }
            return quad_tilted_mean(law, c);
          },
          [&](const family::Weibull& w) {
            if (c == 0.0) return w.scale * std::tgamma(1.0 + 1.0 / w.shape);
            return quad_tilted_mean(law, c);
          },
          [&](const family::Deterministic& d) { return d.tau; },
          [&](const family::Mixture& m) {
            double s = 0.0;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              const double li = log_mgf(*m.components[i], c);
              const double w = std::exp(std::log(m.weights[i]) + li - lm);
              if (w > 0.0) s += w * tilted_mean(*m.components[i], c);
            }
            return s;
          },
          [&](const family::Tilted& t) { return tilted_mean(*t.base, t.c + c); },
          [&](const auto&) { return discrete_mean(reweight(law.atoms_view(), c)); }},
      law.family());
}

double mean(const WaitingLaw& law) { return tilted_mean(law, 0.0); }

double critical_tilt(const WaitingLaw& law, int k) {
  const double x = xi(law);
  if (!std::isfinite(x)) return kInf;
  return x - std::ldexp(1.0, -k) * std::max(1.0, x);
}

double T_limit(const WaitingLaw& law) {
  const double x = xi(law);
  if (!std::isfinite(x)) return law.ess_sup();
  double prev = 0.0;
  double cur = 0.0;
  for (int k = 0; k <= 40; ++k) {
    prev = cur;
    cur = tilted_mean(law, critical_tilt(law, k));
    if (!std::isfinite(cur)) return kInf;
  }
  if (!(std::abs(cur - prev) <= 1e-8 * std::max(1.0, std::abs(cur)))) return kInf;
  // The sequence is monotone, so when the tilted mean at xi itself is finite
  // it is the limit; prefer it over the truncated sequence.
  try {
    const double at_xi = tilted_mean(law, x);
    if (std::isfinite(at_xi) && std::abs(at_xi - cur) <= 1e-8 * std::max(1.0, std::abs(cur))) {
      return at_xi;
    }
  } catch (const Error&) {
  }
  return cur;
}

WaitingLaw tilt(const WaitingLaw& law, double c) {
  if (c == 0.0) return law;
  const double lm = log_mgf(law, c);
  if (!std::isfinite(lm)) {
    throw DomainError("tilt: c = " + detail::format_number(c) +
                      " is not admissible for " + law.describe());
  }
  return std::visit(
      Overloaded{
          [&](const family::Exponential& e) { return WaitingLaw::exponential(e.rate - c); },
          [&](const family::Gamma& g) {
            return WaitingLaw::gamma(g.shape, g.scale / (1.0 - g.scale * c));
          },
          [&](const family::Deterministic&) { return law; },
          [&](const family::DiscreteAtoms& d) {
            auto q = reweight(d.atoms, c);
            double total = 0.0;
            for (const auto& a : q) total += a.prob;
            for (auto& a : q) a.prob /= total;
            return WaitingLaw::atoms(std::move(q));
          },
          [&](const family::Empirical&) {
            auto q = reweight(law.atoms_view(), c);
            double total = 0.0;
            for (const auto& a : q) total += a.prob;
            for (auto& a : q) a.prob /= total;
            return WaitingLaw::atoms(std::move(q));
          },
          [&](const family::Mixture& m) {
            std::vector<double> w;
            std::vector<WaitingLaw> comps;
            double total = 0.0;
            for (std::size_t i = 0; i < m.weights.size(); ++i) {
              const double wi =
                  std::exp(std::log(m.weights[i]) + log_mgf(*m.components[i], c) - lm);
              if (wi > 0.0) {
                w.push_back(wi);
                comps.push_back(tilt(*m.components[i], c));
                total += wi;
              }
            }
            for (double& wi : w) wi /= total;
            if (w.size() == 1) return comps.front();
            return WaitingLaw::mixture(std::move(w), std::move(comps));
          },
          [&](const family::Tilted& t) {
            const double c2 = t.c + c;
            if (c2 == 0.0) return *t.base;
            return WaitingLaw(family::Tilted{t.base, c2, log_mgf(*t.base, c2)});
          },
          [&](const auto&) {
            return WaitingLaw(
                family::Tilted{std::make_shared<const WaitingLaw>(law), c, lm});
          }},
      law.family());
}

double entropy_of_tilt(const WaitingLaw& law, double c) {
  if (c == 0.0) return 0.0;
  const double lm = log_mgf(law, c);
  if (!std::isfinite(lm)) {
    throw DomainError("entropy_of_tilt: c = " + detail::format_number(c) +
                      " is not admissible");
  }
  if (law.is_discrete()) {
    const auto p = law.atoms_view();
    const auto q = reweight(p, c);
    double h = 0.0;
    std::size_t j = 0;
    for (const auto& qa : q) {
      while (p[j].value != qa.value) ++j;
      h += qa.prob * (std::log(qa.prob) - std::log(p[j].prob));
    }
    return std::max(0.0, h);
  }
  const double m = tilted_mean(law, c);
  if (!std::isfinite(m)) throw DomainError("entropy_of_tilt: infinite tilted mean");
  return std::max(0.0, c * m - lm);
}

}  // namespace renewal_ldp
