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


#include "renewal_ldp/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "parse_util.hpp"
#include "renewal_ldp/delta_measure.hpp"
#include "renewal_ldp/errors.hpp"
#include "renewal_ldp/numerics.hpp"
#include "renewal_ldp/ratefn.hpp"
#include "renewal_ldp/renewal.hpp"

namespace renewal_ldp {

// ------------------------------------------------------------------ events

Event Event::parse(std::string_view spec) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : detail::trim(spec)) {
    if (ch == ':') {
      parts.push_back(detail::trim(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(detail::trim(cur));
  const std::string& kind = parts[0];
  auto num = [&](std::size_t i) {
    return detail::parse_number(parts[i]);
  };
  Event e;
  if (kind == "count" || kind == "cumul") {
    if (parts.size() != 3) {
      throw ParseError("event '" + std::string(spec) + "': expected " + kind + ":m:delta");
    }
    e.kind = kind == "count" ? EventKind::kCountBand : EventKind::kCumulBand;
    e.m = num(1);
    e.delta = num(2);
  } else if (kind == "upper") {
    if (parts.size() != 2) {
      throw ParseError("event '" + std::string(spec) + "': expected upper:m");
    }
    e.kind = EventKind::kCountUpper;
    e.m = num(1);
  } else {
    throw ParseError("event '" + std::string(spec) +
                     "': kind must be count, upper or cumul");
  }
  if (!(e.delta >= 0.0)) throw ParseError("event: delta must be nonnegative");
  return e;
}

std::string Event::describe() const {
  switch (kind) {
    case EventKind::kCountBand:
      return "count:" + detail::format_number(m) + ":" + detail::format_number(delta);
    case EventKind::kCountUpper:
      return "upper:" + detail::format_number(m);
    case EventKind::kCumulBand:
      return "cumul:" + detail::format_number(m) + ":" + detail::format_number(delta);
  }
  return "?";
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::kCountBand:
      return "COUNT_BAND";
    case EventKind::kCountUpper:
      return "COUNT_UPPER";
    case EventKind::kCumulBand:
      return "CUMUL_BAND";
  }
  return "?";
}

std::string_view to_string(SamplerKind s) {
  switch (s) {
    case SamplerKind::kNaive:
      return "NAIVE";
    case SamplerKind::kTilt:
      return "TILT";
    case SamplerKind::kTiltBigJump:
      return "TILT_BIG_JUMP";
  }
  return "?";
}

SamplerKind parse_sampler(std::string_view s) {
  const std::string v = detail::trim(s);
  if (v == "naive") return SamplerKind::kNaive;
  if (v == "tilt") return SamplerKind::kTilt;
  if (v == "bigjump") return SamplerKind::kTiltBigJump;
  throw ParseError("sampler '" + v + "': expected naive, tilt or bigjump");
}

namespace {

constexpr double kCfMargin = 1e-10;

// ---------------------------------------------------------------- plumbing

// Weights are accumulated relative to the running maximum log-weight so
// that probabilities far below the double range still give a finite rate.
struct Accumulator {
  double max_lw = -kInf;
  double s1 = 0.0;  // sum e^{lw - max_lw}
  double s2 = 0.0;  // sum e^{2 (lw - max_lw)}
  std::uint64_t hits = 0;

  void rebase(double lw) {
    if (lw <= max_lw) return;
    if (std::isfinite(max_lw)) {
      const double r = std::exp(max_lw - lw);
      s1 *= r;
      s2 *= r * r;
    }
    max_lw = lw;
  }
  void add(double lw) {
    ++hits;
    if (lw == -kInf) return;
    rebase(lw);
    const double e = std::exp(lw - max_lw);
    s1 += e;
    s2 += e * e;
  }
  void merge(const Accumulator& o) {
    hits += o.hits;
    if (o.s1 == 0.0) return;
    rebase(o.max_lw);
    const double r = std::exp(o.max_lw - max_lw);
    s1 += o.s1 * r;
    s2 += o.s2 * r * r;
  }
};

// Runs body(shard_rng, shard_index, count, acc) for every shard and reduces
// the accumulators in shard order.
template <class Body>
Accumulator run_shards(std::uint64_t n, RandomStream& rng, unsigned threads,
                       Body&& body) {
  const RandomStream base = rng;
  rng();  // later calls on the same stream get fresh randomness
  std::vector<Accumulator> acc(kShards);
  std::vector<std::exception_ptr> errors(kShards);
  std::atomic<unsigned> next{0};
  auto worker = [&] {
    for (unsigned s = next++; s < kShards; s = next++) {
      const std::uint64_t count = n / kShards + (s < n % kShards ? 1 : 0);
      try {
        RandomStream r = base.split(s);
        body(r, s, count, acc[s]);
      } catch (...) {
        errors[s] = std::current_exception();
      }
    }
  };
  const unsigned k = std::clamp(threads, 1u, kShards);
  if (k == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < k; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Accumulator total;
  for (const auto& a : acc) total.merge(a);
  return total;
}

LdpEstimate finish(const Accumulator& acc, std::uint64_t n, double t, const Event& ev,
                   SamplerKind sampler) {
  LdpEstimate out;
  out.t = t;
  out.event = ev;
  out.n_samples = n;
  out.hits = acc.hits;
  out.sampler = sampler;
  const double dn = static_cast<double>(n);
  if (acc.s1 == 0.0) {
    out.censored = true;
    out.rate_hat = std::log(dn) / t;
    return out;
  }
  const double log_p = acc.max_lw + std::log(acc.s1) - std::log(dn);
  out.p_hat = std::min(1.0, std::exp(log_p));
  out.rate_hat = std::max(0.0, -log_p / t);
  if (sampler == SamplerKind::kNaive) {
    out.std_err = std::sqrt(out.p_hat * (1.0 - out.p_hat) / dn);
  } else {
    // Var(w) / p^2 = n s2 / s1^2 - 1, free of the common scale.
    const double rel = dn * acc.s2 / (acc.s1 * acc.s1) - 1.0;
    out.std_err = std::exp(log_p) * std::sqrt(std::max(0.0, rel) / std::max(1.0, dn - 1.0));
  }
  return out;
}

void check_common(double t, std::uint64_t n) {
  if (!(t > 0.0) || !std::isfinite(t)) throw RangeError("horizon t must be positive");
  if (n < 1000) throw RangeError("Monte Carlo needs n >= 1000 samples");
}

std::int64_t ceil_tol(double x) {
  return static_cast<std::int64_t>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}
std::int64_t floor_tol(double x) {
  return static_cast<std::int64_t>(std::floor(x + 1e-9 * std::max(1.0, std::abs(x))));
}

// Inclusive range of K_t values making up a counting band.
struct Band {
  std::int64_t lo;
  std::int64_t hi;
};

Band count_band(const Event& ev, double t) {
  const double top = (ev.m + ev.delta) * t;
  if (top > 1e15) throw RangeError("counting band is too large to simulate");
  return {std::max<std::int64_t>(0, ceil_tol((ev.m - ev.delta) * t)), floor_tol(top)};
}

std::int64_t upper_count(const Event& ev, double t) {
  if (ev.m * t > 1e15) throw RangeError("counting level is too large to simulate");
  return std::max<std::int64_t>(0, ceil_tol(ev.m * t));
}

struct Tracer {
  Tracer(const McOptions& o, unsigned s) : opts(o), shard(s) {}

  const McOptions& opts;
  unsigned shard;
  std::uint64_t index = 0;
  SampleRecord rec;

  [[nodiscard]] bool on() const {
    return opts.trace != nullptr && shard == 0 && index < opts.trace_count;
  }
  void begin() {
    if (!on()) return;
    rec = SampleRecord{};
  }
  void draw(double tau) {
    if (on()) rec.draws.push_back(tau);
  }
  void end(bool hit, double lw) {
    if (on()) {
      rec.hit = hit;
      rec.weight = std::exp(lw);
      opts.trace->push_back(std::move(rec));
    }
    ++index;
  }
};

// One path for a counting band. head(i) returns a draw and its log weight
// contribution for the i-th inter-arrival (1-based).
template <class Draw>
bool count_path(double t, const Band& band, Draw&& draw, double& lw, Tracer& tr) {
  double sum = 0.0;
  std::int64_t k = 0;
  for (std::uint64_t i = 1;; ++i) {
    if (i > kMaxArrivals) throw BudgetError("renewal path needs more than 1e9 arrivals");
    const double tau = draw(i, lw);
    tr.draw(tau);
    if (sum + tau > t) break;
    sum += tau;
    if (++k > band.hi) return false;
  }
  return k >= band.lo;
}

// S_k <= t with k draws.
template <class Draw>
bool upper_path(double t, std::int64_t k, Draw&& draw, double& lw, Tracer& tr) {
  double sum = 0.0;
  for (std::int64_t i = 1; i <= k; ++i) {
    const double tau = draw(static_cast<std::uint64_t>(i), lw);
    tr.draw(tau);
    sum += tau;
    if (sum > t) return false;
  }
  return true;
}

LdpEstimate count_estimate(const WaitingLaw& law, const Event& ev, double t,
                           std::uint64_t n, RandomStream& rng, const McOptions& opts,
                           SamplerKind sampler, const WaitingLaw& head, double c,
                           double lm, std::uint64_t head_count) {
  const bool tilted = sampler != SamplerKind::kNaive;
  Accumulator acc;
  if (ev.kind == EventKind::kCountUpper) {
    const std::int64_t k = upper_count(ev, t);
    acc = run_shards(n, rng, opts.threads, [&](RandomStream& r, unsigned s,
                                               std::uint64_t count, Accumulator& a) {
      Tracer tr{opts, s};
      auto draw = [&](std::uint64_t, double& lw) {
        if (!tilted) return sample(law, r);
        const double tau = sample(head, r);
        lw += lm - c * tau;
        return tau;
      };
      for (std::uint64_t j = 0; j < count; ++j) {
        double lw = 0.0;
        tr.begin();
        const bool hit = upper_path(t, k, draw, lw, tr);
        tr.end(hit, lw);
        if (hit) a.add(lw);
      }
    });
  } else {
    const Band band = count_band(ev, t);
    acc = run_shards(n, rng, opts.threads, [&](RandomStream& r, unsigned s,
                                               std::uint64_t count, Accumulator& a) {
      Tracer tr{opts, s};
      auto draw = [&](std::uint64_t i, double& lw) {
        if (!tilted || i > head_count) return sample(law, r);
        const double tau = sample(head, r);
        lw += lm - c * tau;
        return tau;
      };
      for (std::uint64_t j = 0; j < count; ++j) {
        double lw = 0.0;
        tr.begin();
        const bool hit = count_path(t, band, draw, lw, tr);
        tr.end(hit, lw);
        if (hit) a.add(lw);
      }
    });
  }
  return finish(acc, n, t, ev, sampler);
}

void require_count(const Event& ev, const char* who) {
  if (ev.kind == EventKind::kCumulBand) {
    throw DomainError(std::string(who) + ": cumulative events go through cumulative_ldp");
  }
}

}  // namespace

// --------------------------------------------------------------- estimators

LdpEstimate naive_ldp(const WaitingLaw& law, const Event& event, double t,
                      std::uint64_t n, RandomStream& rng, const McOptions& opts) {
  if (event.kind == EventKind::kCumulBand) {
    return cumulative_ldp(law, opts.F, event, t, n, rng, SamplerKind::kNaive, opts);
  }
  check_common(t, n);
  return count_estimate(law, event, t, n, rng, opts, SamplerKind::kNaive, law, 0.0, 0.0, 0);
}

LdpEstimate is_ldp_light(const WaitingLaw& law, const Event& event, double t,
                         std::uint64_t n, RandomStream& rng, const McOptions& opts) {
  require_count(event, "is_ldp_light");
  check_common(t, n);
  if (!(event.m > 0.0)) throw InfeasibleError("is_ldp_light: m must be positive");
  const double c = solve_tilt_for_mean(law, 1.0 / event.m);
  const double lm = log_mgf(law, c);
  const WaitingLaw head = tilt(law, c);
  const auto head_count =
      static_cast<std::uint64_t>(ceil_tol(event.m * (1.0 + opts.head_pad) * t));
  return count_estimate(law, event, t, n, rng, opts, SamplerKind::kTilt, head, c, lm,
                        head_count);
}

LdpEstimate is_ldp_heavy(const WaitingLaw& law, const Event& event, double t,
                         std::uint64_t n, RandomStream& rng, const McOptions& opts) {
  if (event.kind != EventKind::kCountBand) {
    throw DomainError("is_ldp_heavy: only counting bands have a big-jump proposal");
  }
  check_common(t, n);
  if (!std::isfinite(xi(law))) {
    throw DomainError("is_ldp_heavy: " + law.describe() +
                      " has all exponential moments; use the tilt sampler");
  }
  const double T = T_limit(law);
  if (!std::isfinite(T) || !(event.m * T < 1.0)) {
    throw InfeasibleError("is_ldp_heavy: needs m < 1/T = " +
                          detail::format_number(1.0 / T));
  }
  const double rho = opts.defensive_mix;
  if (!(rho > 0.0 && rho <= 1.0)) throw RangeError("defensive_mix must lie in (0, 1]");

  const double c = critical_tilt(law, 40);
  const double lm = log_mgf(law, c);
  const WaitingLaw head = tilt(law, c);
  const auto head_count = static_cast<std::uint64_t>(std::max<std::int64_t>(
      1, ceil_tol(event.m * t)));
  const Band band = count_band(event, t);
  if (band.lo > band.hi) {
    Accumulator none;
    return finish(none, n, t, event, SamplerKind::kTiltBigJump);
  }
  // Two big-jump proposals share the mass rho, the rest is psi itself.
  // Terminal: a slot j = K + 1 with K in the band; tau_j is drawn from psi
  //   conditioned on overshooting the horizon, tau_j > t - S_{j-1}, so a path
  //   reaching slot j ends with exactly K arrivals.
  // Early: a slot j uniform on 1..hi+1; tau_j is drawn from psi conditioned
  //   on tau > s0 = (1 - T (m + delta)) t, the room left by a band-sized head
  //   running at the critical mean.
  const auto first_slot = static_cast<std::uint64_t>(band.lo + 1);
  const auto last_slot = static_cast<std::uint64_t>(band.hi + 1);
  const std::uint64_t slots = last_slot - first_slot + 1;
  const double s0 = std::max((1.0 - T * (event.m + event.delta)) * t, law.ess_inf());
  const double log_surv0 = std::log(survival(law, s0));
  if (!std::isfinite(log_surv0)) {
    throw TailSamplingError("is_ldp_heavy: no mass beyond " + detail::format_number(s0));
  }
  const double log_half = std::log(0.5 * rho);
  const double log_rest = rho < 1.0 ? std::log1p(-rho) : -kInf;

  // log dQ/dpsi of each jump proposal on the consumed draws d of a path in
  // the band. A terminal slot j < N cannot have overshot and slot N did by
  // construction; slots past N were never reached, so only the head counts.
  auto log_ratios = [&](const std::vector<double>& d) {
    const std::uint64_t N = d.size();
    const std::uint64_t hN = std::min<std::uint64_t>(head_count, N);
    double log_g = 0.0;
    for (std::uint64_t i = 0; i < hN; ++i) log_g += c * d[i] - lm;
    auto head_part = [&](std::uint64_t j) { return j <= hN ? c * d[j - 1] - lm : 0.0; };

    std::vector<double> terms;
    if (N >= first_slot && N <= last_slot) {
      double before = 0.0;
      for (std::uint64_t i = 0; i + 1 < N; ++i) before += d[i];
      terms.push_back(log_g - head_part(N) - std::log(survival(law, t - before)));
    }
    const std::uint64_t later = last_slot > N ? last_slot - std::max(N, first_slot - 1) : 0;
    if (later > 0) terms.push_back(log_g + std::log(static_cast<double>(later)));
    const double terminal =
        terms.empty() ? -kInf : log_sum_exp(terms) - std::log(static_cast<double>(slots));

    terms.clear();
    for (std::uint64_t j = 1; j <= std::min(N, last_slot); ++j) {
      if (d[j - 1] > s0) terms.push_back(log_g - head_part(j) - log_surv0);
    }
    if (last_slot > N) terms.push_back(log_g + std::log(static_cast<double>(last_slot - N)));
    const double early = terms.empty()
                             ? -kInf
                             : log_sum_exp(terms) - std::log(static_cast<double>(last_slot));
    return std::pair{terminal, early};
  };

  const Accumulator acc = run_shards(
      n, rng, opts.threads,
      [&](RandomStream& r, unsigned s, std::uint64_t count, Accumulator& a) {
        Tracer tr{opts, s};
        std::vector<double> d;
        for (std::uint64_t it = 0; it < count; ++it) {
          // 0: psi, 1: terminal jump, 2: early jump
          int comp = 0;
          if (rho >= 1.0 || r.uniform() < rho) comp = r.uniform() < 0.5 ? 1 : 2;
          std::uint64_t slot = 0;
          if (comp == 1) {
            slot = first_slot + std::min<std::uint64_t>(
                                    slots - 1, static_cast<std::uint64_t>(
                                                   r.uniform() * static_cast<double>(slots)));
          } else if (comp == 2) {
            slot = 1 + std::min<std::uint64_t>(
                           last_slot - 1, static_cast<std::uint64_t>(
                                              r.uniform() * static_cast<double>(last_slot)));
          }
          tr.begin();
          if (tr.on()) {
            tr.rec.jump_slot = slot;
            tr.rec.from_proposal = comp != 0;
          }
          d.clear();
          double sum = 0.0;
          double unused = 0.0;
          auto draw = [&](std::uint64_t i, double&) {
            double tau;
            if (comp == 0) {
              tau = sample(law, r);
            } else if (i == slot) {
              tau = sample_tail(law, comp == 1 ? t - sum : s0, r);
            } else if (i <= head_count) {
              tau = sample(head, r);
            } else {
              tau = sample(law, r);
            }
            d.push_back(tau);
            sum += tau;
            return tau;
          };
          const bool hit = count_path(t, band, draw, unused, tr);
          double lw = 0.0;
          if (hit) {
            const auto [terminal, early] = log_ratios(d);
            lw = -log_sum_exp(
                std::vector<double>{log_half + terminal, log_half + early, log_rest});
            a.add(lw);
          }
          tr.end(hit, lw);
        }
      });
  return finish(acc, n, t, event, SamplerKind::kTiltBigJump);
}

LdpEstimate cumulative_ldp(const WaitingLaw& law, const BoundedFunction& F,
                           const Event& event, double t, std::uint64_t n,
                           RandomStream& rng, SamplerKind sampler,
                           const McOptions& opts) {
  if (event.kind != EventKind::kCumulBand) {
    throw DomainError("cumulative_ldp: event must be a cumulative band");
  }
  check_common(t, n);
  if (F.is_constant()) {
    // C_t = F0 K_t: a counting band in disguise.
    const double f0 = F.lower();
    if (f0 == 0.0) {
      Accumulator acc;
      if (std::abs(event.m) <= event.delta) {
        acc.max_lw = 0.0;
        acc.s1 = acc.s2 = static_cast<double>(n);
        acc.hits = n;
      }
      return finish(acc, n, t, event, sampler);
    }
    Event ev{EventKind::kCountBand, event.m / f0, event.delta / std::abs(f0)};
    LdpEstimate out;
    switch (sampler) {
      case SamplerKind::kNaive:
        out = naive_ldp(law, ev, t, n, rng, opts);
        break;
      case SamplerKind::kTilt:
        out = is_ldp_light(law, ev, t, n, rng, opts);
        break;
      case SamplerKind::kTiltBigJump:
        out = is_ldp_heavy(law, ev, t, n, rng, opts);
        break;
    }
    out.event = event;
    return out;
  }
  if (sampler == SamplerKind::kTiltBigJump) {
    throw DomainError("cumulative_ldp: the big-jump proposal needs a constant F");
  }

  const double lo = (event.m - event.delta) * t - 1e-9 * std::max(1.0, std::abs(event.m * t));
  const double hi = (event.m + event.delta) * t + 1e-9 * std::max(1.0, std::abs(event.m * t));
  const bool monotone = F.lower() >= 0.0;

  double x = 0.0;
  double y = 0.0;
  double log_z = 0.0;
  std::uint64_t head_count = 0;
  WaitingLaw base = law;
  double f_cap = 0.0;
  const bool tilted = sampler == SamplerKind::kTilt;
  if (tilted) {
    const RateJF r = rate_JF_detail(law, F, event.m);
    if (!std::isfinite(r.value) || r.capped) {
      throw InfeasibleError("cumulative_ldp: no tilt reaches m = " +
                            detail::format_number(event.m) + " (affine regime)");
    }
    x = r.x;
    y = r.y;
    const TiltMoments tm = tilt_moments(law, F, x, y);
    log_z = tm.log_z;
    head_count = static_cast<std::uint64_t>(
        std::max<std::int64_t>(1, ceil_tol((1.0 + opts.head_pad) * t / tm.mean_tau)));
    if (x != 0.0) base = tilt(law, x);
    f_cap = y > 0.0 ? F.upper() : F.lower();
  }

  const Accumulator acc = run_shards(
      n, rng, opts.threads,
      [&](RandomStream& r, unsigned s, std::uint64_t count, Accumulator& a) {
        Tracer tr{opts, s};
        auto draw = [&](std::uint64_t i, double& lw) {
          if (!tilted || i > head_count) return sample(law, r);
          // e^{y F} reweighting of tilt(law, x) by rejection; F is bounded.
          for (long k = 0; k < 100000000L; ++k) {
            const double tau = sample(base, r);
            if (r.uniform() < std::exp(y * (F(tau) - f_cap))) {
              lw += log_z - x * tau - y * F(tau);
              return tau;
            }
          }
          throw DomainError("cumulative_ldp: head rejection budget exhausted");
        };
        for (std::uint64_t it = 0; it < count; ++it) {
          double lw = 0.0;
          tr.begin();
          double sum = 0.0;
          double c_t = 0.0;
          bool alive = true;
          for (std::uint64_t i = 1;; ++i) {
            if (i > kMaxArrivals) throw BudgetError("renewal path needs more than 1e9 arrivals");
            const double tau = draw(i, lw);
            tr.draw(tau);
            if (sum + tau > t) break;
            sum += tau;
            c_t += F(tau);
            if (monotone && c_t > hi) {
              alive = false;
              break;
            }
          }
          const bool hit = alive && c_t >= lo && c_t <= hi;
          tr.end(hit, lw);
          if (hit) a.add(lw);
        }
      });
  return finish(acc, n, t, event, sampler);
}

LdpEstimate estimate(const WaitingLaw& law, const Event& event, double t,
                     std::uint64_t n, RandomStream& rng, SamplerKind sampler,
                     const McOptions& opts) {
  if (event.kind == EventKind::kCumulBand) {
    return cumulative_ldp(law, opts.F, event, t, n, rng, sampler, opts);
  }
  switch (sampler) {
    case SamplerKind::kNaive:
      return naive_ldp(law, event, t, n, rng, opts);
    case SamplerKind::kTilt:
      return is_ldp_light(law, event, t, n, rng, opts);
    case SamplerKind::kTiltBigJump:
      return is_ldp_heavy(law, event, t, n, rng, opts);
  }
  throw DomainError("unknown sampler");
}

// ------------------------------------------------------------------ checks

PiecewiseLinear::PiecewiseLinear(std::vector<std::pair<double, double>> knots)
    : knots_(std::move(knots)) {
  for (std::size_t i = 0; i < knots_.size(); ++i) {
    if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second)) {
      throw RangeError("piecewise-linear knots must be finite");
    }
    if (i > 0 && !(knots_[i].first > knots_[i - 1].first)) {
      throw RangeError("piecewise-linear knots must be strictly increasing");
    }
  }
  if (!knots_.empty()) {
    if (!(knots_.front().first > 0.0)) {
      throw RangeError("piecewise-linear support must stay away from 0");
    }
    if (knots_.front().second != 0.0 || knots_.back().second != 0.0) {
      throw RangeError("piecewise-linear function must vanish at its end knots");
    }
  }
}

PiecewiseLinear PiecewiseLinear::plateau(double level, double a, double b, double w) {
  if (!(w > 0.0) || !(b > a) || !(a - w > 0.0)) {
    throw RangeError("plateau: need 0 < a - w, a < b and w > 0");
  }
  return PiecewiseLinear({{a - w, 0.0}, {a, level}, {b, level}, {b + w, 0.0}});
}

PiecewiseLinear PiecewiseLinear::parse(std::string_view spec) {
  const std::string s = detail::trim(spec);
  if (s == "0" || s.empty()) return PiecewiseLinear{};
  const detail::Call call = detail::parse_call(s);
  if (call.has_parens) {
    if (call.name != "plateau" || call.args.size() != 4) {
      throw ParseError("phi '" + s + "': expected plateau(level,a,b,w)");
    }
    double v[4];
    for (int i = 0; i < 4; ++i) v[i] = detail::parse_number(call.args[i]);
    return plateau(v[0], v[1], v[2], v[3]);
  }
  std::vector<std::pair<double, double>> knots;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t comma = std::min(s.find(',', pos), s.size());
    const std::string item = detail::trim(std::string_view(s).substr(pos, comma - pos));
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) throw ParseError("phi knot '" + item + "': expected x:y");
    knots.emplace_back(detail::parse_number(item.substr(0, colon)),
                       detail::parse_number(item.substr(colon + 1)));
    pos = comma + 1;
  }
  return PiecewiseLinear(std::move(knots));
}

double PiecewiseLinear::operator()(double x) const {
  if (knots_.empty() || x <= knots_.front().first || x >= knots_.back().first) return 0.0;
  const auto it = std::upper_bound(
      knots_.begin(), knots_.end(), x,
      [](double v, const std::pair<double, double>& k) { return v < k.first; });
  const auto& [x1, y1] = *it;
  const auto& [x0, y0] = *(it - 1);
  return y0 + (y1 - y0) * (x - x0) / (x1 - x0);
}

std::vector<double> PiecewiseLinear::breakpoints() const {
  std::vector<double> out;
  for (const auto& k : knots_) out.push_back(k.first);
  return out;
}

BivariateTestFunction free_energy_function(const PiecewiseLinear& phi, double c,
                                           double M) {
  double bound = std::abs(c);
  if (!phi.knots().empty()) {
    double peak = 0.0;
    for (const auto& k : phi.knots()) peak = std::max(peak, std::abs(k.second));
    bound += peak / phi.knots().front().first;
  }
  BivariateTestFunction f;
  f.f = [phi, c, M](double a, double b) {
    const double s = a + b;
    if (!std::isfinite(s)) return c;
    return phi(s) / s + (s > M ? c : 0.0);
  };
  f.bound = bound;
  f.at_infinity = c;
  // f depends on a + b only, so the segment integral is linear in r.
  f.fbar = [phi, c, M](double r, double tau) {
    return r * (phi(tau) / tau + (tau > M ? c : 0.0));
  };
  return f;
}

double free_energy_cf(const WaitingLaw& law, const PiecewiseLinear& phi, double c,
                      double M) {
  ExpectationOptions o;
  o.breakpoints = phi.breakpoints();
  o.breakpoints.push_back(M);
  o.assume_finite = false;
  return expectation(
      law, [&](double tau) { return std::exp(phi(tau) + (tau > M ? c * tau : 0.0)); }, o);
}

FreeEnergyReport free_energy_check(const WaitingLaw& law, double c,
                                   const PiecewiseLinear& phi, double M,
                                   const std::vector<double>& t_list, std::uint64_t n,
                                   RandomStream& rng, const McOptions& opts) {
  const double x_max = xi(law);
  if (!(c < x_max || (c == 0.0 && x_max == 0.0))) {
    throw DomainError("free_energy_check: c = " + detail::format_number(c) +
                      " must stay below xi = " + detail::format_number(x_max));
  }
  if (!(M > 0.0) || !std::isfinite(M)) throw RangeError("free_energy_check: M must be positive");
  if (n < 2) throw RangeError("free_energy_check: need n >= 2");
  FreeEnergyReport rep;
  rep.c_f = free_energy_cf(law, phi, c, M);
  // Quadrature puts C_f = 1 on either side of 1; keep a margin.
  if (!(rep.c_f < 1.0 - kCfMargin)) {
    throw NotInGammaError("C_f = " + detail::format_number(rep.c_f) +
                          " is not below 1; f is outside the admissible class");
  }
  ExpectationOptions o;
  o.breakpoints = phi.breakpoints();
  o.breakpoints.push_back(M);
  o.assume_finite = false;
  auto d_of = [&](double s) {
    ExpectationOptions os = o;
    os.lower = s;
    return expectation(
        law,
        [&](double tau) { return std::exp(s * (phi(tau) / tau + (tau > M ? c : 0.0))); },
        os);
  };
  double reach = M;
  for (const auto& k : phi.knots()) reach = std::max(reach, k.first);
  const double s_max = 2.0 * reach + 20.0 * law.length_scale();
  const auto grid = linspace(0.0, s_max, 241);
  std::size_t best = 0;
  double best_v = -kInf;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = d_of(grid[i]);
    if (v > best_v) {
      best_v = v;
      best = i;
    }
  }
  rep.d_f = best_v;
  rep.s_star = grid[best];
  const double a = grid[best == 0 ? 0 : best - 1];
  const double b = grid[std::min(best + 1, grid.size() - 1)];
  if (b > a) {
    const MaxResult r = golden_section_max(d_of, a, b, 1e-10 * std::max(1.0, b));
    if (r.value > rep.d_f) {
      rep.d_f = r.value;
      rep.s_star = r.argmax;
    }
  }
  rep.bound = rep.d_f / (1.0 - rep.c_f);

  const BivariateTestFunction f = free_energy_function(phi, c, M);
  rep.pass = true;
  for (double t : t_list) {
    if (!(t > 0.0)) throw RangeError("free_energy_check: t must be positive");
    // Sums of e^{t mu_t(f)} and their squares, via the accumulator slots.
    std::vector<double> s1(kShards, 0.0);
    std::vector<double> s2(kShards, 0.0);
    run_shards(n, rng, opts.threads,
               [&](RandomStream& r, unsigned s, std::uint64_t count, Accumulator&) {
                 for (std::uint64_t i = 0; i < count; ++i) {
                   const RenewalPath p = simulate(law, t, r);
                   const double v = std::exp(t * empirical_integral(p, f));
                   s1[s] += v;
                   s2[s] += v * v;
                 }
               });
    double m1 = 0.0;
    double m2 = 0.0;
    for (unsigned s = 0; s < kShards; ++s) {
      m1 += s1[s];
      m2 += s2[s];
    }
    const double dn = static_cast<double>(n);
    FreeEnergyRow row;
    row.t = t;
    row.estimate = m1 / dn;
    const double var = std::max(0.0, (m2 - dn * row.estimate * row.estimate) / (dn - 1.0));
    row.std_err = std::sqrt(var / dn);
    row.pass = row.estimate <= rep.bound + 3.0 * row.std_err;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

TightnessReport tightness_check(const WaitingLaw& law, const std::vector<double>& M_list,
                                const std::vector<double>& t_list, std::uint64_t n,
                                RandomStream& rng, const McOptions& opts) {
  if (n < 1) throw RangeError("tightness_check: need n >= 1");
  const double log_c0 = log_mgf(law, -1.0);
  TightnessReport rep;
  rep.pass = true;
  for (double M : M_list) {
    for (double t : t_list) {
      if (!(t > 0.0) || !(M > 0.0)) throw RangeError("tightness_check: M and t must be positive");
      const double level = M * t;
      std::vector<std::uint64_t> hits(kShards, 0);
      run_shards(n, rng, opts.threads,
                 [&](RandomStream& r, unsigned s, std::uint64_t count, Accumulator&) {
                   for (std::uint64_t i = 0; i < count; ++i) {
                     // t mu_t(1/(a+b)) = (N_t - 1) + (t - S_{N_t - 1}) / tau_{N_t}
                     std::uint64_t k = 0;
                     const PathSummary ps = fold_renewal(
                         t, [&] { return sample(law, r); }, [&](double) { ++k; });
                     const double v =
                         static_cast<double>(k) + (t - ps.last_completed) / ps.straddle;
                     if (v > level) ++hits[s];
                   }
                 });
      std::uint64_t total = 0;
      for (auto h : hits) total += h;
      TightnessRow row;
      row.M = M;
      row.t = t;
      row.frequency = static_cast<double>(total) / static_cast<double>(n);
      row.std_err = std::sqrt(row.frequency * (1.0 - row.frequency) / static_cast<double>(n));
      row.bound = std::exp(t + std::floor(level) * log_c0);
      row.pass = row.frequency <= row.bound + 3.0 * row.std_err;
      rep.pass = rep.pass && row.pass;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

LlnReport lln_check(const WaitingLaw& law, double c,
                    const std::vector<std::pair<std::string, BivariateTestFunction>>& fs,
                    double t, std::uint64_t n, RandomStream& rng, const McOptions& opts) {
  if (!(t > 0.0)) throw RangeError("lln_check: t must be positive");
  if (n < 2) throw RangeError("lln_check: need n >= 2");
  const WaitingLaw sim = tilt(law, c);
  const DeltaMeasure limit = DeltaMeasure::from_tilt(1.0, law, c);
  const std::size_t k = fs.size();
  std::vector<double> s1(kShards * k, 0.0);
  std::vector<double> s2(kShards * k, 0.0);
  run_shards(n, rng, opts.threads,
             [&](RandomStream& r, unsigned s, std::uint64_t count, Accumulator&) {
               for (std::uint64_t i = 0; i < count; ++i) {
                 const RenewalPath p = simulate(sim, t, r);
                 for (std::size_t j = 0; j < k; ++j) {
                   const double v = empirical_integral(p, fs[j].second);
                   s1[s * k + j] += v;
                   s2[s * k + j] += v * v;
                 }
               }
             });
  LlnReport rep;
  rep.c = c;
  rep.t = t;
  rep.pass = true;
  const double dn = static_cast<double>(n);
  for (std::size_t j = 0; j < k; ++j) {
    double m1 = 0.0;
    double m2 = 0.0;
    for (unsigned s = 0; s < kShards; ++s) {
      m1 += s1[s * k + j];
      m2 += s2[s * k + j];
    }
    LlnRow row;
    row.name = fs[j].first;
    row.limit = limit.evaluate(fs[j].second);
    row.estimate = m1 / dn;
    const double var = std::max(0.0, (m2 - dn * row.estimate * row.estimate) / (dn - 1.0));
    row.std_err = std::sqrt(var / dn);
    row.pass = std::abs(row.estimate - row.limit) <= 3.0 * row.std_err;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

std::vector<std::pair<std::string, BivariateTestFunction>> standard_test_functions() {
  std::vector<std::pair<std::string, BivariateTestFunction>> out;
  BivariateTestFunction f1;
  f1.f = [](double a, double b) { return std::exp(-(a + b)); };
  f1.fbar = [](double r, double tau) { return r * std::exp(-tau); };
  out.emplace_back("exp_sum", f1);

  BivariateTestFunction f2;
  f2.f = [](double a, double b) { return std::exp(-a) * -std::expm1(-b); };
  f2.fbar = [](double r, double tau) {
    return -std::expm1(-r * tau) / tau - r * std::exp(-tau);
  };
  out.emplace_back("exp_split", f2);

  BivariateTestFunction f3;
  f3.f = [](double a, double) { return 1.0 / ((1.0 + a) * (1.0 + a)); };
  f3.fbar = [](double r, double tau) { return r / (1.0 + r * tau); };
  out.emplace_back("inverse_square", f3);
  return out;
}

}  // namespace renewal_ldp
