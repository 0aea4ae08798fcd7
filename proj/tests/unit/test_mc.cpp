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


#include <cmath>
#include <vector>

#include <boost/math/distributions/poisson.hpp>
#include <gtest/gtest.h>

#include "renewal_ldp/errors.hpp"
#include "renewal_ldp/mc.hpp"
#include "renewal_ldp/ratefn.hpp"

namespace rl = renewal_ldp;

namespace {

const rl::WaitingLaw kExp = rl::WaitingLaw::exponential(1.0);
const rl::WaitingLaw kPareto2 = rl::WaitingLaw::pareto(2.0, 1.0);

// For Exp(1) the completed count K_t is Poisson(t).
double poisson_band(double t, long lo, long hi) {
  const boost::math::poisson_distribution<double> P(t);
  return boost::math::cdf(P, static_cast<double>(hi)) -
         (lo > 0 ? boost::math::cdf(P, static_cast<double>(lo - 1)) : 0.0);
}

constexpr std::uint64_t kSeedPairs = 20;

double joint_se(const rl::LdpEstimate& a, const rl::LdpEstimate& b) {
  return std::hypot(a.std_err, b.std_err);
}

}  // namespace

TEST(Naive, DeterministicLawIsExact) {
  rl::RandomStream rng(1);
  const rl::WaitingLaw det = rl::WaitingLaw::deterministic(1.0);
  const rl::LdpEstimate e = rl::naive_ldp(det, rl::Event::parse("count:1:0.1"), 37.3, 1000, rng);
  EXPECT_EQ(e.p_hat, 1.0);
  EXPECT_EQ(e.std_err, 0.0);
  EXPECT_EQ(e.rate_hat, 0.0);
  EXPECT_FALSE(e.censored);
}

TEST(Naive, ImpossibleBandIsCensored) {
  rl::RandomStream rng(1);
  const rl::WaitingLaw det = rl::WaitingLaw::deterministic(1.0);
  const rl::LdpEstimate e = rl::naive_ldp(det, rl::Event::parse("count:2:0.1"), 10.0, 1000, rng);
  EXPECT_EQ(e.p_hat, 0.0);
  EXPECT_EQ(e.hits, 0u);
  EXPECT_TRUE(e.censored);
  EXPECT_NEAR(e.rate_hat, std::log(1000.0) / 10.0, 1e-15);
}

TEST(Naive, PoissonBand) {
  rl::RandomStream rng(2);
  const rl::LdpEstimate e = rl::naive_ldp(kExp, rl::Event::parse("count:1:0.2"), 10.0, 20000, rng);
  const double p = poisson_band(10.0, 8, 12);
  EXPECT_NEAR(e.p_hat, p, 3.0 * e.std_err);
  EXPECT_DOUBLE_EQ(e.std_err, std::sqrt(e.p_hat * (1.0 - e.p_hat) / 20000.0));
  EXPECT_EQ(e.sampler, rl::SamplerKind::kNaive);
}

TEST(Naive, UpperEvent) {
  rl::RandomStream rng(3);
  const rl::LdpEstimate e = rl::naive_ldp(kExp, rl::Event::parse("upper:1.5"), 10.0, 20000, rng);
  const double p = 1.0 - boost::math::cdf(boost::math::poisson_distribution<double>(10.0), 14.0);
  EXPECT_NEAR(e.p_hat, p, 3.0 * e.std_err);
}

TEST(Naive, RejectsSmallSamples) {
  rl::RandomStream rng(1);
  EXPECT_THROW(rl::naive_ldp(kExp, rl::Event::parse("count:1:0.1"), 10.0, 999, rng),
               rl::RangeError);
}

TEST(LightIs, MatchesPoissonPmf) {
  // Band [19.5, 20.5] at t = 10 holds K = 20 only.
  rl::RandomStream rng(4);
  const rl::LdpEstimate e = rl::is_ldp_light(kExp, rl::Event::parse("count:2:0.05"), 10.0, 20000, rng);
  const double p = poisson_band(10.0, 20, 20);
  EXPECT_NEAR(e.p_hat, p, 3.0 * e.std_err);
  EXPECT_LT(e.std_err, 0.05 * p);
  EXPECT_EQ(e.sampler, rl::SamplerKind::kTilt);
}

TEST(LightIs, UpperEventMatchesPoissonTail) {
  rl::RandomStream rng(5);
  const rl::LdpEstimate e = rl::is_ldp_light(kExp, rl::Event::parse("upper:2.5"), 10.0, 20000, rng);
  const double p = 1.0 - boost::math::cdf(boost::math::poisson_distribution<double>(10.0), 24.0);
  EXPECT_NEAR(e.p_hat, p, 3.0 * e.std_err);
}

TEST(LightIs, AgreesWithNaiveAtSmallT) {
  const rl::WaitingLaw law = rl::WaitingLaw::gamma(2.0, 0.5);
  const rl::Event ev = rl::Event::parse("count:1.6:0.1");
  for (std::uint64_t k = 0; k < kSeedPairs; ++k) {
    rl::RandomStream a(2 * k + 1);
    rl::RandomStream b(2 * k + 2);
    const rl::LdpEstimate is = rl::is_ldp_light(law, ev, 5.0, 10000, a);
    const rl::LdpEstimate nv = rl::naive_ldp(law, ev, 5.0, 10000, b);
    EXPECT_GT(nv.hits, 50u);
    EXPECT_LT(std::abs(is.p_hat - nv.p_hat), 3.0 * joint_se(is, nv)) << "seed pair " << k;
  }
  // Over many replicates the IS mean sits on the exact value: K_5 = 8 means
  // 16 or 17 Poisson(10) stage completions.
  const boost::math::poisson_distribution<double> P(10.0);
  const double exact = boost::math::pdf(P, 16.0) + boost::math::pdf(P, 17.0);
  double s1 = 0.0;
  double s2 = 0.0;
  const int reps = 200;
  for (int k = 0; k < reps; ++k) {
    rl::RandomStream r(500 + k);
    const double v = rl::is_ldp_light(law, ev, 5.0, 2000, r).p_hat;
    s1 += v;
    s2 += v * v;
  }
  const double mean = s1 / reps;
  EXPECT_NEAR(mean, exact, 3.0 * std::sqrt((s2 / reps - mean * mean) / (reps - 1)));
  // Zero tilt at the LLN center reproduces naive sampling.
  rl::RandomStream c(8);
  rl::RandomStream d(8);
  const rl::Event center = rl::Event::parse("count:1:0.1");
  const rl::LdpEstimate z = rl::is_ldp_light(kExp, center, 20.0, 5000, c);
  const rl::LdpEstimate y = rl::naive_ldp(kExp, center, 20.0, 5000, d);
  EXPECT_NEAR(z.p_hat, y.p_hat, 1e-12);
}

TEST(LightIs, WeightsAreLikelihoodRatios) {
  // Head draws come from Exp(2); each carries psi/zeta = e^{tau} / 2.
  std::vector<rl::SampleRecord> trace;
  rl::McOptions o;
  o.trace = &trace;
  o.trace_count = 50;
  rl::RandomStream rng(9);
  // Only shard 0 is traced; it holds n / 64 samples.
  rl::is_ldp_light(kExp, rl::Event::parse("count:2:0.05"), 10.0, 6400, rng, o);
  ASSERT_EQ(trace.size(), 50u);
  const std::size_t head = static_cast<std::size_t>(std::ceil(2.0 * 1.05 * 10.0));
  for (const auto& r : trace) {
    double w = 1.0;
    for (std::size_t i = 0; i < std::min(head, r.draws.size()); ++i) {
      w *= 0.5 * std::exp(r.draws[i]);
    }
    EXPECT_NEAR(r.weight, w, 1e-12 * w);
  }
}

TEST(LightIs, InfeasibleInAffineRegime) {
  rl::RandomStream rng(1);
  EXPECT_THROW(rl::is_ldp_light(kPareto2, rl::Event::parse("count:0.25:0.05"), 10.0, 1000, rng),
               rl::InfeasibleError);
}

TEST(LightIs, ReducesVariance) {
  // At t = 50 naive sampling sees no hits, so its standard error at equal n
  // is taken from the exact probability: sqrt(p (1 - p) / n).
  const std::uint64_t n = 20000;
  rl::RandomStream a(10);
  const rl::LdpEstimate is = rl::is_ldp_light(kExp, rl::Event::parse("count:2:0.05"), 50.0, n, a);
  const double p = poisson_band(50.0, 98, 102);
  EXPECT_NEAR(is.p_hat, p, 3.0 * is.std_err);
  EXPECT_LT(is.std_err / std::sqrt(p * (1.0 - p) / static_cast<double>(n)), 0.5);
}

TEST(LightIs, RateDecreasesTowardBandLimit) {
  // -(1/t) log P(|K/t - 2| <= 0.05) decreases toward J1(1.95) as t grows.
  const double limit = rl::rate_J1_closed(kExp, 1.95);
  const rl::Event ev = rl::Event::parse("count:2:0.05");
  rl::RandomStream rng(11);
  std::vector<rl::LdpEstimate> e;
  for (double t : {50.0, 100.0, 200.0}) e.push_back(rl::is_ldp_light(kExp, ev, t, 10000, rng));
  auto rate_se = [](const rl::LdpEstimate& x) { return x.std_err / (x.p_hat * x.t); };
  for (std::size_t i = 0; i + 1 < e.size(); ++i) {
    EXPECT_GT(e[i].rate_hat - e[i + 1].rate_hat, -3.0 * std::hypot(rate_se(e[i]), rate_se(e[i + 1])));
    EXPECT_LT(std::abs(e[i + 1].rate_hat - limit), std::abs(e[i].rate_hat - limit));
  }
  EXPECT_GT(e.back().rate_hat, limit - 3.0 * rate_se(e.back()));
}

TEST(Determinism, ThreadCountDoesNotMatter) {
  const rl::Event ev = rl::Event::parse("count:2:0.05");
  rl::McOptions one;
  rl::McOptions four;
  four.threads = 4;
  rl::RandomStream a(12);
  rl::RandomStream b(12);
  const rl::LdpEstimate x = rl::is_ldp_light(kExp, ev, 10.0, 5000, a, one);
  const rl::LdpEstimate y = rl::is_ldp_light(kExp, ev, 10.0, 5000, b, four);
  EXPECT_EQ(x.p_hat, y.p_hat);
  EXPECT_EQ(x.std_err, y.std_err);
  // The parent stream advances, so repeated calls differ.
  const rl::LdpEstimate z = rl::is_ldp_light(kExp, ev, 10.0, 5000, a, one);
  EXPECT_NE(x.p_hat, z.p_hat);
}

TEST(HeavyIs, AgreesWithNaiveAtSmallT) {
  const rl::Event ev = rl::Event::parse("count:0.25:0.05");
  for (std::uint64_t k = 0; k < kSeedPairs; ++k) {
    rl::RandomStream a(2 * k + 1);
    rl::RandomStream b(2 * k + 2);
    const rl::LdpEstimate is = rl::is_ldp_heavy(kPareto2, ev, 10.0, 10000, a);
    const rl::LdpEstimate nv = rl::naive_ldp(kPareto2, ev, 10.0, 10000, b);
    EXPECT_GT(nv.hits, 50u);
    EXPECT_LT(std::abs(is.p_hat - nv.p_hat), 3.0 * joint_se(is, nv)) << "seed pair " << k;
    EXPECT_EQ(is.sampler, rl::SamplerKind::kTiltBigJump);
  }
}

TEST(HeavyIs, WeightsInvertTheMixtureDensity) {
  // Direct evaluation of dQ/dpsi for the 0.4 / 0.4 / 0.2 mixture on each
  // logged path that lands in the band: K in [2, 3] at t = 10.
  const double t = 10.0;
  std::vector<rl::SampleRecord> trace;
  rl::McOptions o;
  o.trace = &trace;
  o.trace_count = 400;
  rl::RandomStream rng(23);
  rl::is_ldp_heavy(kPareto2, rl::Event::parse("count:0.25:0.05"), t, 64000, rng, o);
  const double c = rl::critical_tilt(kPareto2, 40);
  const double lm = rl::log_mgf(kPareto2, c);
  const double s0 = std::max((1.0 - rl::T_limit(kPareto2) * 0.3) * t, 1.0);
  const std::size_t head = 3;  // ceil(m t)
  const std::size_t first = 3;
  const std::size_t last = 4;
  auto g = [&](double tau) { return std::exp(c * tau - lm); };
  int checked = 0;
  for (const auto& r : trace) {
    if (!r.hit) continue;
    const auto& d = r.draws;
    const std::size_t N = d.size();
    auto head_product = [&](std::size_t skip) {
      double p = 1.0;
      for (std::size_t i = 1; i <= std::min(head, N); ++i) {
        if (i != skip) p *= g(d[i - 1]);
      }
      return p;
    };
    double before_n = 0.0;
    for (std::size_t i = 0; i + 1 < N; ++i) before_n += d[i];
    double q_term = 0.0;
    for (std::size_t j = first; j <= last; ++j) {
      if (j > N) {
        q_term += head_product(0);
      } else if (j == N) {
        q_term += head_product(j) / rl::survival(kPareto2, t - before_n);
      }
    }
    q_term /= static_cast<double>(last - first + 1);
    double q_early = 0.0;
    for (std::size_t j = 1; j <= last; ++j) {
      if (j > N) {
        q_early += head_product(0);
      } else if (d[j - 1] > s0) {
        q_early += head_product(j) / rl::survival(kPareto2, s0);
      }
    }
    q_early /= static_cast<double>(last);
    const double w = 1.0 / (0.4 * q_term + 0.4 * q_early + 0.2);
    EXPECT_NEAR(r.weight, w, 1e-12 * w);
    ++checked;
  }
  EXPECT_GT(checked, 10);
}

TEST(HeavyIs, MixtureWithParetoTail) {
  const rl::WaitingLaw law = rl::WaitingLaw::parse("mix(0.9*atoms(1:0.5,2:0.5),0.1*pareto(2,1))");
  const rl::Event ev = rl::Event::parse("count:0.2:0.05");
  rl::RandomStream a(15);
  rl::RandomStream b(16);
  const rl::LdpEstimate is = rl::is_ldp_heavy(law, ev, 20.0, 50000, a);
  const rl::LdpEstimate nv = rl::naive_ldp(law, ev, 20.0, 50000, b);
  EXPECT_GT(nv.hits, 50u);
  EXPECT_LT(std::abs(is.p_hat - nv.p_hat), 3.0 * joint_se(is, nv));
  EXPECT_LE(rl::rate_J1_closed(law, 0.2), 1e-9);
}

TEST(HeavyIs, Preconditions) {
  rl::RandomStream rng(1);
  // All exponential moments: no heavy tail to jump with.
  EXPECT_THROW(rl::is_ldp_heavy(rl::WaitingLaw::weibull(2.0, 1.0),
                                rl::Event::parse("count:0.25:0.05"), 10.0, 1000, rng),
               rl::DomainError);
  // Finite xi but T = inf: no affine stretch.
  EXPECT_THROW(rl::is_ldp_heavy(kExp, rl::Event::parse("count:0.25:0.05"), 10.0, 1000, rng),
               rl::InfeasibleError);
  EXPECT_THROW(rl::is_ldp_heavy(kPareto2, rl::Event::parse("count:0.75:0.05"), 10.0, 1000, rng),
               rl::InfeasibleError);
}

TEST(Cumulative, ConstantFIsCounting) {
  const rl::BoundedFunction one = rl::BoundedFunction::one();
  rl::RandomStream a(17);
  rl::RandomStream b(17);
  const rl::LdpEstimate c = rl::cumulative_ldp(kExp, one, rl::Event::parse("cumul:2:0.05"), 20.0,
                                               5000, a, rl::SamplerKind::kTilt);
  const rl::LdpEstimate k = rl::is_ldp_light(kExp, rl::Event::parse("count:2:0.05"), 20.0, 5000, b);
  EXPECT_EQ(c.rate_hat, k.rate_hat);
  EXPECT_EQ(c.event.kind, rl::EventKind::kCumulBand);
}

TEST(Cumulative, DeterministicLaw) {
  rl::RandomStream rng(18);
  const rl::LdpEstimate e =
      rl::cumulative_ldp(rl::WaitingLaw::deterministic(1.0), rl::BoundedFunction::min1(),
                         rl::Event::parse("cumul:1:0.05"), 30.0, 1000, rng, rl::SamplerKind::kNaive);
  EXPECT_EQ(e.p_hat, 1.0);
}

TEST(Cumulative, LlnCenterIsTypical) {
  rl::RandomStream rng(19);
  const double center = 1.0 - std::exp(-1.0);
  rl::Event ev{rl::EventKind::kCumulBand, center, 0.1};
  const rl::LdpEstimate e = rl::cumulative_ldp(kExp, rl::BoundedFunction::min1(), ev, 50.0, 5000,
                                               rng, rl::SamplerKind::kNaive);
  EXPECT_GT(e.p_hat, 0.5);
  EXPECT_LT(e.rate_hat, 0.01);
}

TEST(Cumulative, TiltAgreesWithNaive) {
  const rl::BoundedFunction F = rl::BoundedFunction::min1();
  const rl::Event ev = rl::Event::parse("cumul:0.85:0.05");
  double se_is = 0.0;
  double se_nv = 0.0;
  for (std::uint64_t k = 0; k < kSeedPairs; ++k) {
    rl::RandomStream a(2 * k + 1);
    rl::RandomStream b(2 * k + 2);
    const rl::LdpEstimate is = rl::cumulative_ldp(kExp, F, ev, 10.0, 10000, a, rl::SamplerKind::kTilt);
    const rl::LdpEstimate nv = rl::cumulative_ldp(kExp, F, ev, 10.0, 10000, b, rl::SamplerKind::kNaive);
    EXPECT_GT(nv.hits, 50u);
    EXPECT_LT(std::abs(is.p_hat - nv.p_hat), 3.0 * joint_se(is, nv)) << "seed pair " << k;
    se_is += is.std_err;
    se_nv += nv.std_err;
  }
  EXPECT_LT(se_is, se_nv);
}

TEST(Dispatch, EstimateRoutesBySampler) {
  rl::RandomStream a(22);
  rl::RandomStream b(22);
  const rl::Event ev = rl::Event::parse("count:2:0.05");
  EXPECT_EQ(rl::estimate(kExp, ev, 10.0, 2000, a, rl::SamplerKind::kTilt).p_hat,
            rl::is_ldp_light(kExp, ev, 10.0, 2000, b).p_hat);
}
