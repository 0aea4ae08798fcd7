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

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/expint.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "renewal_ldp/distributions.hpp"
#include "renewal_ldp/errors.hpp"
#include "renewal_ldp/random.hpp"

namespace rl = renewal_ldp;

namespace {

const rl::WaitingLaw kExp = rl::WaitingLaw::exponential(1.0);
const rl::WaitingLaw kGamma = rl::WaitingLaw::gamma(2.0, 1.0);
const rl::WaitingLaw kPareto2 = rl::WaitingLaw::pareto(2.0, 1.0);
const rl::WaitingLaw kPareto3 = rl::WaitingLaw::pareto(3.0, 1.0);
const rl::WaitingLaw kTwoAtoms = rl::WaitingLaw::atoms({{1.0, 0.5}, {2.0, 0.5}});

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Sample mean and its standard error.
std::pair<double, double> sample_mean(const rl::WaitingLaw& law, int n, std::uint64_t seed) {
  rl::RandomStream rng(seed);
  double s = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rl::sample(law, rng);
    s += x;
    s2 += x * x;
  }
  const double m = s / n;
  return {m, std::sqrt((s2 / n - m * m) / n)};
}

}  // namespace

TEST(Mgf, ClosedForms) {
  for (double c : {-3.0, -0.5, -1e-6, 0.0, 0.3, 0.9}) {
    EXPECT_LT(rel(rl::mgf(kExp, c), 1.0 / (1.0 - c)), 1e-10) << c;
    EXPECT_LT(rel(rl::mgf(kGamma, c), std::pow(1.0 - c, -2.0)), 1e-10) << c;
    EXPECT_LT(rel(rl::mgf(kTwoAtoms, c), 0.5 * std::exp(c) + 0.5 * std::exp(2.0 * c)), 1e-14);
  }
  EXPECT_TRUE(std::isinf(rl::mgf(kExp, 1.0)));
  EXPECT_TRUE(std::isinf(rl::mgf(kGamma, 1.5)));
  EXPECT_DOUBLE_EQ(rl::mgf(rl::WaitingLaw::deterministic(2.0), 0.5), std::exp(1.0));
}

TEST(Mgf, ParetoMatchesExponentialIntegral) {
  // E e^{c tau} = alpha int_1^inf t^{-alpha-1} e^{c t} dt = alpha E_{alpha+1}(-c).
  for (double c : {-5.0, -1.0, -0.1, -1e-3}) {
    EXPECT_LT(rel(rl::mgf(kPareto2, c), 2.0 * boost::math::expint(3, -c)), 1e-9) << c;
    EXPECT_LT(rel(rl::mgf(kPareto3, c), 3.0 * boost::math::expint(4, -c)), 1e-9) << c;
  }
  EXPECT_TRUE(std::isinf(rl::mgf(kPareto2, 1e-9)));
  EXPECT_DOUBLE_EQ(rl::mgf(kPareto2, 0.0), 1.0);
}

TEST(Mgf, WeibullMatchesDirectQuadrature) {
  const double k = 0.5;
  const rl::WaitingLaw law = rl::WaitingLaw::weibull(k, 1.0);
  boost::math::quadrature::exp_sinh<double> q;
  for (double c : {-2.0, -0.3}) {
    const double oracle = q.integrate([&](double x) {
      return k * std::pow(x, k - 1.0) * std::exp(-std::pow(x, k) + c * x);
    });
    EXPECT_LT(rel(rl::mgf(law, c), oracle), 1e-7) << c;
  }
}

TEST(Mgf, LogMgfIsAccurateNearZero) {
  // log(1/(1-c)) = -log1p(-c) ~ c for tiny c.
  EXPECT_LT(rel(rl::log_mgf(kExp, -1e-12), -std::log1p(1e-12)), 1e-6);
  EXPECT_LT(rel(rl::log_mgf(kPareto2, -1e-12), std::log(2.0 * boost::math::expint(3, 1e-12))),
            1e-3);
}

TEST(Abscissa, Xi) {
  EXPECT_DOUBLE_EQ(rl::xi(rl::WaitingLaw::exponential(2.5)), 2.5);
  EXPECT_DOUBLE_EQ(rl::xi(rl::WaitingLaw::gamma(2.0, 0.5)), 2.0);
  EXPECT_DOUBLE_EQ(rl::xi(kPareto2), 0.0);
  EXPECT_DOUBLE_EQ(rl::xi(rl::WaitingLaw::weibull(0.5, 1.0)), 0.0);
  EXPECT_TRUE(std::isinf(rl::xi(rl::WaitingLaw::weibull(2.0, 1.0))));
  EXPECT_TRUE(std::isinf(rl::xi(kTwoAtoms)));
  EXPECT_TRUE(rl::mgf_finite_at_xi(kPareto2));
  EXPECT_FALSE(rl::mgf_finite_at_xi(kExp));
}

TEST(Abscissa, CriticalMean) {
  EXPECT_NEAR(rl::T_limit(kPareto2), 2.0, 1e-6);
  EXPECT_NEAR(rl::T_limit(kPareto3), 1.5, 1e-6);
  EXPECT_TRUE(std::isinf(rl::T_limit(kExp)));
  EXPECT_TRUE(std::isinf(rl::T_limit(kGamma)));
  // Bounded support: tilted means approach the right end.
  EXPECT_DOUBLE_EQ(rl::T_limit(kTwoAtoms), 2.0);
}

TEST(Tilt, Means) {
  for (double c : {-2.0, -0.5, 0.5}) {
    EXPECT_LT(rel(rl::tilted_mean(kExp, c), 1.0 / (1.0 - c)), 1e-9);
    EXPECT_LT(rel(rl::tilted_mean(kGamma, c), 2.0 / (1.0 - c)), 1e-9);
    const double w1 = std::exp(c);
    const double w2 = std::exp(2.0 * c);
    EXPECT_LT(rel(rl::tilted_mean(kTwoAtoms, c), (w1 + 2.0 * w2) / (w1 + w2)), 1e-13);
  }
  EXPECT_NEAR(rl::mean(kPareto2), 2.0, 1e-9);
  EXPECT_NEAR(rl::mean(rl::WaitingLaw::weibull(0.5, 1.0)), std::tgamma(3.0), 1e-8);
  EXPECT_TRUE(std::isinf(rl::mean(rl::WaitingLaw::pareto(1.0, 1.0))));
}

TEST(Tilt, ClosedFamilies) {
  EXPECT_EQ(rl::tilt(kExp, -1.0), rl::WaitingLaw::exponential(2.0));
  EXPECT_EQ(rl::tilt(kGamma, 0.5), rl::WaitingLaw::gamma(2.0, 2.0));
  EXPECT_THROW(rl::tilt(kExp, 1.0), rl::DomainError);
  const rl::WaitingLaw tp = rl::tilt(kPareto2, -0.5);
  EXPECT_NEAR(rl::mean(tp), rl::tilted_mean(kPareto2, -0.5), 1e-9);
  EXPECT_NEAR(rl::mgf(tp, -0.5), rl::mgf(kPareto2, -1.0) / rl::mgf(kPareto2, -0.5), 1e-9);
}

TEST(Tilt, Entropy) {
  // H(Exp(1 - c) | Exp(1)) = log(1 - c) - 1 + 1/(1 - c).
  for (double c : {-2.0, -0.5, 0.3, 0.8}) {
    const double lp = 1.0 - c;
    EXPECT_NEAR(rl::entropy_of_tilt(kExp, c), std::log(lp) - 1.0 + 1.0 / lp, 1e-9) << c;
  }
  const double c = 0.7;
  const double q1 = std::exp(c) / (std::exp(c) + std::exp(2.0 * c));
  const double q2 = 1.0 - q1;
  EXPECT_NEAR(rl::entropy_of_tilt(kTwoAtoms, c),
              q1 * std::log(2.0 * q1) + q2 * std::log(2.0 * q2), 1e-13);
  EXPECT_EQ(rl::entropy_of_tilt(kPareto2, 0.0), 0.0);
}

TEST(Sampling, Moments) {
  const int n = 200000;
  struct Case {
    rl::WaitingLaw law;
    double mean;
  };
  const std::vector<Case> cases{
      {kExp, 1.0},
      {kGamma, 2.0},
      {kPareto3, 1.5},
      {rl::WaitingLaw::weibull(2.0, 1.0), std::sqrt(M_PI) / 2.0},
      {kTwoAtoms, 1.5},
      {rl::WaitingLaw::mixture({0.3, 0.7}, {kExp, rl::WaitingLaw::deterministic(2.0)}), 1.7},
      {rl::tilt(kGamma, -1.0), 1.0},
  };
  std::uint64_t seed = 11;
  for (const auto& cs : cases) {
    const auto [m, se] = sample_mean(cs.law, n, seed++);
    EXPECT_LT(std::abs(m - cs.mean), 5.0 * se) << cs.law.describe() << " mean " << m;
  }
}

TEST(Sampling, TiltedParetoMatchesTiltedMean) {
  const rl::WaitingLaw tp = rl::tilt(kPareto3, -0.4);
  const auto [m, se] = sample_mean(tp, 200000, 3);
  EXPECT_LT(std::abs(m - rl::tilted_mean(kPareto3, -0.4)), 5.0 * se);
}

TEST(Sampling, Tail) {
  rl::RandomStream rng(9);
  const int n = 100000;
  double s_exp = 0.0;
  double s_par = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = rl::sample_tail(kExp, 3.0, rng);
    const double b = rl::sample_tail(kPareto3, 10.0, rng);
    ASSERT_GT(a, 3.0);
    ASSERT_GT(b, 10.0);
    s_exp += a;
    s_par += b;
  }
  // Memoryless: E[tau | tau > 3] = 4. Pareto(3): E[tau | tau > s] = 1.5 s.
  EXPECT_NEAR(s_exp / n, 4.0, 5.0 / std::sqrt(n));
  EXPECT_NEAR(s_par / n, 15.0, 5.0 * 10.0 * std::sqrt(0.75) / std::sqrt(n));
  EXPECT_NEAR(rl::survival(kPareto2, 4.0), 1.0 / 16.0, 1e-15);
  EXPECT_NEAR(rl::survival(kGamma, 2.0), boost::math::gamma_q(2.0, 2.0), 1e-14);
}

TEST(Sampling, Deterministic) {
  rl::RandomStream a(5);
  rl::RandomStream b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(rl::sample(kPareto2, a), rl::sample(kPareto2, b));
}

TEST(Support, EndsAndAtoms) {
  EXPECT_DOUBLE_EQ(kPareto2.ess_inf(), 1.0);
  EXPECT_TRUE(std::isinf(kPareto2.ess_sup()));
  EXPECT_DOUBLE_EQ(kTwoAtoms.ess_sup(), 2.0);
  EXPECT_DOUBLE_EQ(rl::mass_at(kTwoAtoms, 1.0), 0.5);
  EXPECT_DOUBLE_EQ(rl::mass_at(kExp, 1.0), 0.0);
  const rl::WaitingLaw mix =
      rl::WaitingLaw::mixture({0.25, 0.75}, {kExp, rl::WaitingLaw::deterministic(2.0)});
  EXPECT_DOUBLE_EQ(rl::mass_at(mix, 2.0), 0.75);
  EXPECT_THROW(rl::WaitingLaw::mixture({0.5, 0.6}, {kExp, kExp}), rl::Error);
}

TEST(Expectation, PiecewiseIntegrand) {
  // E min(tau, 1) = 1 - e^{-1} for Exp(1).
  rl::ExpectationOptions o;
  o.breakpoints = {1.0};
  EXPECT_NEAR(rl::expectation(kExp, [](double x) { return std::min(x, 1.0); }, o),
              1.0 - std::exp(-1.0), 1e-12);
  // E[1/tau] = 2/3 for Pareto(2,1).
  EXPECT_NEAR(rl::expectation(kPareto2, [](double x) { return 1.0 / x; }), 2.0 / 3.0, 1e-10);
}
