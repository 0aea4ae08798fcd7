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
#include <string>
#include <vector>

#include <boost/math/special_functions/expint.hpp>
#include <gtest/gtest.h>

#include "renewal_ldp/errors.hpp"
#include "renewal_ldp/mc.hpp"
#include "renewal_ldp/renewal.hpp"

namespace rl = renewal_ldp;

namespace {

const rl::WaitingLaw kExp = rl::WaitingLaw::exponential(1.0);
const rl::PiecewiseLinear kDip = rl::PiecewiseLinear::plateau(-1.0, 0.5, 1.5, 0.1);

// Composite Simpson on [a, b] with n (even) panels.
template <class G>
double simpson(G&& g, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = g(a) + g(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * g(a + i * h);
  return s * h / 3.0;
}

// E_psi[e^{phi(tau) + c tau 1{tau > M}}] for Exp(1); the tail is 1/(1-c) e^{-(1-c)M}.
double cf_oracle(double c, double M) {
  double head = 0.0;
  // Split at the kinks of the dip so Simpson sees smooth pieces.
  std::vector<double> cuts{0.0, 0.4, 0.5, 1.5, 1.6};
  cuts.push_back(std::max(1.6, M));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = std::min(cuts[i], M);
    const double b = std::min(cuts[i + 1], M);
    if (b > a) head += simpson([](double x) { return std::exp(kDip(x) - x); }, a, b, 2000);
  }
  return head + std::exp(-(1.0 - c) * M) / (1.0 - c);
}

}  // namespace

TEST(FreeEnergy, FunctionShape) {
  const rl::BivariateTestFunction f = rl::free_energy_function(kDip, 0.3, 4.0);
  EXPECT_DOUBLE_EQ(f.f(0.5, 0.5), -1.0);
  EXPECT_DOUBLE_EQ(f.f(3.0, 2.0), 0.3);
  EXPECT_DOUBLE_EQ(f.at_infinity, 0.3);
  // The closed-form segment integral matches quadrature of f along the segment.
  rl::BivariateTestFunction g = f;
  g.fbar = nullptr;
  for (double tau : {0.52, 1.0, 6.0}) {
    EXPECT_NEAR(rl::segment_integral(f, 0.7, tau), rl::segment_integral(g, 0.7, tau), 1e-9);
  }
}

TEST(FreeEnergy, CfMatchesSimpson) {
  EXPECT_NEAR(rl::free_energy_cf(kExp, kDip, 0.0, 10.0), cf_oracle(0.0, 10.0), 1e-9);
  EXPECT_NEAR(rl::free_energy_cf(kExp, kDip, 0.5, 6.0), cf_oracle(0.5, 6.0), 1e-9);
}

TEST(FreeEnergy, ZeroPhiIsRejected) {
  rl::RandomStream rng(1);
  EXPECT_THROW(rl::free_energy_check(kExp, 0.0, rl::PiecewiseLinear{}, 10.0, {10.0}, 100, rng),
               rl::NotInGammaError);
  EXPECT_THROW(rl::free_energy_check(kExp, 1.0, kDip, 10.0, {10.0}, 100, rng), rl::DomainError);
}

TEST(FreeEnergy, NegativeDipStaysBelowBound) {
  rl::RandomStream rng(2);
  const rl::FreeEnergyReport rep = rl::free_energy_check(kExp, 0.0, kDip, 10.0, {10.0, 20.0}, 5000, rng);
  EXPECT_LT(rep.c_f, 1.0);
  EXPECT_GE(rep.bound, 1.0);
  EXPECT_NEAR(rep.bound, rep.d_f / (1.0 - rep.c_f), 1e-12 * rep.bound);
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& row : rep.rows) {
    EXPECT_LE(row.estimate, 1.0);
    EXPECT_TRUE(row.pass);
  }
  EXPECT_TRUE(rep.pass);
}

TEST(FreeEnergy, PositiveTailNeedsLargeM) {
  double M = 1.0;
  while (!(rl::free_energy_cf(kExp, kDip, 0.5, M) < 1.0)) M *= 2.0;
  // The oracle agrees on where C_f first drops below 1.
  EXPECT_GE(cf_oracle(0.5, M / 2.0), 1.0);
  EXPECT_LT(cf_oracle(0.5, M), 1.0);
  rl::RandomStream rng(3);
  const rl::FreeEnergyReport rep = rl::free_energy_check(kExp, 0.5, kDip, M, {10.0, 20.0}, 5000, rng);
  EXPECT_TRUE(std::isfinite(rep.bound));
  EXPECT_TRUE(rep.pass);
}

TEST(Tightness, BoundFormula) {
  rl::RandomStream rng(4);
  const rl::TightnessReport rep = rl::tightness_check(kExp, {1.5, 3.0}, {10.0, 20.0}, 20000, rng);
  ASSERT_EQ(rep.rows.size(), 4u);
  for (const auto& row : rep.rows) {
    const double oracle = std::exp(row.t + std::floor(row.M * row.t) * std::log(0.5));
    EXPECT_NEAR(row.bound, oracle, 1e-10 * oracle);
    EXPECT_TRUE(row.pass);
  }
  // M = 3, t = 20: the bound is e^{-21.6}, so no path should hit.
  EXPECT_EQ(rep.rows[3].frequency, 0.0);
  EXPECT_TRUE(rep.pass);
}

TEST(Tightness, FrequencyMatchesEmpiricalIntegral) {
  // Independent estimate of P(mu_t(1/(a+b)) > M) through generic quadrature.
  rl::BivariateTestFunction inv;
  inv.f = [](double a, double b) { return 1.0 / (a + b); };
  const double t = 10.0;
  const double M = 1.3;
  rl::RandomStream rng(5);
  const int n = 5000;
  int hits = 0;
  for (int i = 0; i < n; ++i) {
    if (rl::empirical_integral(rl::simulate(kExp, t, rng), inv) > M) ++hits;
  }
  const double p = static_cast<double>(hits) / n;
  rl::RandomStream rng2(6);
  const rl::TightnessRow row = rl::tightness_check(kExp, {M}, {t}, 20000, rng2).rows.at(0);
  const double se = std::hypot(std::sqrt(p * (1 - p) / n), row.std_err);
  EXPECT_GT(hits, 50);
  EXPECT_LT(std::abs(row.frequency - p), 3.0 * se);
}

TEST(Lln, AnalyticLimits) {
  rl::RandomStream rng(7);
  for (double c : {0.0, -0.5}) {
    const double l = 1.0 - c;
    const std::vector<double> oracle{
        l * l / ((l + 1) * (l + 1)), l / ((l + 1) * (l + 1)),
        l * (1.0 - l * std::exp(l) * boost::math::expint(1, l))};
    const rl::LlnReport rep = rl::lln_check(kExp, c, rl::standard_test_functions(), 1000.0, 100, rng);
    ASSERT_EQ(rep.rows.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_NEAR(rep.rows[j].limit, oracle[j], 1e-9) << rep.rows[j].name;
      EXPECT_TRUE(rep.rows[j].pass) << rep.rows[j].name;
    }
  }
}

TEST(Lln, StandardFunctionsHaveConsistentClosedForms) {
  for (auto [name, f] : rl::standard_test_functions()) {
    rl::BivariateTestFunction g = f;
    g.fbar = nullptr;
    for (double tau : {0.1, 1.0, 8.0}) {
      for (double r : {0.3, 1.0}) {
        EXPECT_NEAR(rl::segment_integral(f, r, tau), rl::segment_integral(g, r, tau), 1e-10)
            << name;
      }
    }
  }
}
