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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "renewal_ldp/errors.hpp"
#include "renewal_ldp/ratefn.hpp"

namespace rl = renewal_ldp;

namespace {

const rl::WaitingLaw kExp = rl::WaitingLaw::exponential(1.0);
const rl::WaitingLaw kGamma = rl::WaitingLaw::gamma(2.0, 1.0);
const rl::WaitingLaw kPareto2 = rl::WaitingLaw::pareto(2.0, 1.0);
const rl::WaitingLaw kTwoAtoms = rl::WaitingLaw::atoms({{1.0, 0.5}, {2.0, 0.5}});

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

double j1_exp(double m) { return 1.0 - m + m * std::log(m); }

// Two atoms at 1 and 2: the tilt with mean 1/m puts q2 = 1/m - 1 on 2.
double j1_two_atoms(double m) {
  const double q2 = 1.0 / m - 1.0;
  const double q1 = 1.0 - q2;
  auto term = [](double q) { return q > 0.0 ? q * std::log(2.0 * q) : 0.0; };
  return m * (term(q1) + term(q2));
}

// Lambda(x, y) for Exp(1) and F = min(tau, 1), in closed form.
double lambda_exp_min1(double x, double y) {
  const double k = x + y - 1.0;
  const double head = std::abs(k) < 1e-12 ? 1.0 : std::expm1(k) / k;
  return std::log(head + std::exp(y + x - 1.0) / (1.0 - x));
}

// sup_{x<1, y} (a x + b y - Lambda) by damped Newton with finite differences.
double brute_legendre_2d_exp_min1(double a, double b) {
  auto g = [&](double x, double y) {
    if (x >= 1.0) return -HUGE_VAL;
    return a * x + b * y - lambda_exp_min1(x, y);
  };
  double x = 0.0;
  double y = 0.0;
  const double h = 1e-4;
  for (int it = 0; it < 200; ++it) {
    const double gx = (g(x + h, y) - g(x - h, y)) / (2 * h);
    const double gy = (g(x, y + h) - g(x, y - h)) / (2 * h);
    const double hxx = (g(x + h, y) - 2 * g(x, y) + g(x - h, y)) / (h * h);
    const double hyy = (g(x, y + h) - 2 * g(x, y) + g(x, y - h)) / (h * h);
    const double hxy =
        (g(x + h, y + h) - g(x + h, y - h) - g(x - h, y + h) + g(x - h, y - h)) / (4 * h * h);
    const double det = hxx * hyy - hxy * hxy;
    double dx = -(hyy * gx - hxy * gy) / det;
    double dy = -(-hxy * gx + hxx * gy) / det;
    double step = 1.0;
    while (step > 1e-10 && !(g(x + step * dx, y + step * dy) >= g(x, y))) step *= 0.5;
    x += step * dx;
    y += step * dy;
    if (std::abs(step * dx) + std::abs(step * dy) < 1e-13) break;
  }
  return g(x, y);
}

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> out;
  for (int i = 0; i < n; ++i) out.push_back(lo + (hi - lo) * i / (n - 1));
  return out;
}

}  // namespace

TEST(Legendre1d, ExponentialClosedForm) {
  for (double a : grid(0.1, 10.0, 37)) {
    EXPECT_LT(rel(rl::legendre_1d(kExp, a), a - 1.0 - std::log(a)), 1e-8) << a;
  }
  EXPECT_EQ(rl::legendre_1d(kExp, 1.0), 0.0);
}

TEST(Legendre1d, GammaClosedForm) {
  // Gamma(k, 1): a - k - k log(a / k).
  for (double a : {0.3, 1.0, 2.5, 6.0}) {
    EXPECT_LT(rel(rl::legendre_1d(kGamma, a), a - 2.0 - 2.0 * std::log(a / 2.0)), 1e-8) << a;
  }
}

TEST(Legendre1d, SupportEnds) {
  EXPECT_NEAR(rl::legendre_1d(kTwoAtoms, 1.0), std::log(2.0), 1e-12);
  EXPECT_NEAR(rl::legendre_1d(kTwoAtoms, 2.0), std::log(2.0), 1e-12);
  EXPECT_TRUE(std::isinf(rl::legendre_1d(kTwoAtoms, 2.5)));
  EXPECT_TRUE(std::isinf(rl::legendre_1d(kPareto2, 1.0)));
  EXPECT_TRUE(std::isinf(rl::legendre_1d(kPareto2, 0.5)));
  // Above the mean the sup sits at xi = 0 for Pareto: Lambda* = 0 there.
  const rl::Legendre1d d = rl::legendre_1d_detail(kPareto2, 5.0);
  EXPECT_NEAR(d.value, 0.0, 1e-12);
  EXPECT_TRUE(d.at_boundary);
}

TEST(LogPartition, MatchesClosedForm) {
  const rl::BoundedFunction F = rl::BoundedFunction::min1();
  for (double x : {-1.5, 0.0, 0.6}) {
    for (double y : {-2.0, 0.0, 1.3}) {
      EXPECT_NEAR(rl::log_partition(kExp, F, x, y), lambda_exp_min1(x, y), 1e-10);
    }
  }
  EXPECT_TRUE(std::isinf(rl::log_partition(kExp, F, 1.0, 0.0)));
  const rl::TiltMoments mo = rl::tilt_moments(kExp, F, 0.0, 0.0);
  EXPECT_NEAR(mo.mean_tau, 1.0, 1e-10);
  EXPECT_NEAR(mo.mean_f, 1.0 - std::exp(-1.0), 1e-10);
  EXPECT_NEAR(mo.var_tau, 1.0, 1e-9);
}

TEST(Legendre2d, ConstantFReducesTo1d) {
  const rl::BoundedFunction one = rl::BoundedFunction::one();
  EXPECT_NEAR(rl::legendre_2d(kExp, one, 2.0, 1.0), rl::legendre_1d(kExp, 2.0), 1e-12);
  EXPECT_TRUE(std::isinf(rl::legendre_2d(kExp, one, 2.0, 0.5)));
}

TEST(Legendre2d, MatchesIndependentMaximization) {
  const rl::BoundedFunction F = rl::BoundedFunction::min1();
  for (const auto& [a, b] : std::vector<std::pair<double, double>>{
           {1.0, 0.6}, {0.5, 0.4}, {2.0, 0.8}, {1.5, 0.5}}) {
    EXPECT_LT(rel(rl::legendre_2d(kExp, F, a, b), brute_legendre_2d_exp_min1(a, b)), 1e-6)
        << a << " " << b;
  }
  // Infeasible: min(tau, 1) <= tau forces b <= a.
  EXPECT_TRUE(std::isinf(rl::legendre_2d(kExp, F, 0.5, 0.7)));
}

TEST(RateJF, ExponentialClosedForm) {
  const rl::BoundedFunction one = rl::BoundedFunction::one();
  for (double m : {0.2, 0.5, 1.0, 2.0, 3.5}) {
    EXPECT_LT(std::abs(rl::rate_JF(kExp, one, m) - j1_exp(m)), 1e-8 * std::max(1.0, j1_exp(m)))
        << m;
  }
  // Gamma(2,1): m Lambda*(1/m) = 1 - 2m + 2m log(2m).
  for (double m : {0.1, 0.5, 1.0, 2.0}) {
    const double oracle = 1.0 - 2.0 * m + 2.0 * m * std::log(2.0 * m);
    EXPECT_LT(std::abs(rl::rate_JF(kGamma, one, m) - oracle), 1e-8 * std::max(1.0, oracle)) << m;
  }
}

TEST(RateJF, TwoAtomsClosedForm) {
  const rl::BoundedFunction one = rl::BoundedFunction::one();
  for (double m : {0.5, 0.6, 2.0 / 3.0, 0.8, 0.95, 1.0}) {
    EXPECT_NEAR(rl::rate_JF(kTwoAtoms, one, m), j1_two_atoms(m), 1e-9) << m;
  }
  EXPECT_TRUE(std::isinf(rl::rate_JF(kTwoAtoms, one, 1.01)));
  // Gaps never exceed 2, so fewer than t/2 renewals is impossible too.
  EXPECT_TRUE(std::isinf(rl::rate_JF(kTwoAtoms, one, 0.3)));
}

TEST(RateJF, ParetoAffineStretch) {
  const rl::BoundedFunction one = rl::BoundedFunction::one();
  for (double m : {0.05, 0.25, 0.5}) EXPECT_LE(rl::rate_JF(kPareto2, one, m), 1e-9) << m;
  EXPECT_GT(rl::rate_JF(kPareto2, one, 0.6), 0.0);
  EXPECT_TRUE(std::isinf(rl::rate_JF(kPareto2, one, 1.5)));
}

TEST(RateJF, ClosedFormAgreesAcrossLaws) {
  const rl::BoundedFunction one = rl::BoundedFunction::one();
  for (const rl::WaitingLaw& law : {kExp, kGamma, kPareto2, kTwoAtoms}) {
    for (double m : {0.1, 0.45, 0.7, 0.9, 1.6}) {
      const double a = rl::rate_JF(law, one, m);
      const double b = rl::rate_J1_closed(law, m);
      if (std::isinf(b)) {
        EXPECT_TRUE(std::isinf(a)) << law.describe() << " " << m;
      } else {
        EXPECT_LE(std::abs(a - b), 1e-6 * std::max(std::abs(b), 1e-3)) << law.describe() << " " << m;
      }
    }
  }
}

TEST(RateJF, PerspectiveMatchesDual) {
  const rl::BoundedFunction F = rl::BoundedFunction::min1();
  for (double m : {0.3, 0.632, 0.9}) {
    const double dual = rl::rate_JF(kExp, F, m);
    const double persp = rl::rate_JF_perspective(kExp, F, m);
    EXPECT_NEAR(dual, persp, 1e-6 * std::max(1.0, dual)) << m;
  }
  // The LLN center E F / E tau costs nothing.
  EXPECT_NEAR(rl::rate_JF(kExp, F, 1.0 - std::exp(-1.0)), 0.0, 1e-9);
}

TEST(RateJF, DualPairSatisfiesConstraint) {
  const rl::BoundedFunction F = rl::BoundedFunction::min1();
  const rl::RateJF r = rl::rate_JF_detail(kExp, F, 0.9);
  EXPECT_FALSE(r.capped);
  EXPECT_NEAR(rl::log_partition(kExp, F, r.x, r.y), 0.0, 1e-9);
  EXPECT_NEAR(r.value, 0.9 * r.y + r.x, 1e-9);
}

TEST(RateJF, RejectsBadArguments) {
  EXPECT_THROW(rl::rate_JF(kExp, rl::BoundedFunction::one(), -1.0), rl::RangeError);
  EXPECT_THROW(rl::legendre_2d(kExp, rl::BoundedFunction::min1(), 0.0, 0.5), rl::RangeError);
}

TEST(EntropyProjection, MatchesLegendre2d) {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> ux(-2.0, 0.7);
  std::uniform_real_distribution<double> uy(-2.0, 2.0);
  const rl::BoundedFunction F = rl::BoundedFunction::min1();
  for (int i = 0; i < 8; ++i) {
    const rl::TiltMoments mo = rl::tilt_moments(kExp, F, ux(gen), uy(gen));
    const rl::EntropyProjection p = rl::entropy_projection(kExp, mo.mean_tau, F, mo.mean_f);
    EXPECT_LT(rel(p.entropy, rl::legendre_2d(kExp, F, mo.mean_tau, mo.mean_f)), 1e-8);
  }
}

TEST(EntropyProjection, ConstantF) {
  const rl::EntropyProjection p =
      rl::entropy_projection(kExp, 0.5, rl::BoundedFunction::one(), 1.0);
  EXPECT_NEAR(p.x, -1.0, 1e-9);
  EXPECT_NEAR(p.entropy, std::log(2.0) - 0.5, 1e-9);
  EXPECT_THROW(rl::entropy_projection(kExp, 0.5, rl::BoundedFunction::one(), 0.5),
               rl::InfeasibleError);
}

TEST(TiltSolve, MeanTargets) {
  EXPECT_NEAR(rl::solve_tilt_for_mean(kExp, 0.5), -1.0, 1e-10);
  EXPECT_NEAR(rl::solve_tilt_for_mean(kGamma, 4.0), 0.5, 1e-10);
  EXPECT_THROW(rl::solve_tilt_for_mean(kPareto2, 3.0), rl::InfeasibleError);
  EXPECT_NEAR(rl::entropy_at_mean(kExp, 0.5), std::log(2.0) - 0.5, 1e-10);
  EXPECT_NEAR(rl::entropy_at_mean(kTwoAtoms, 2.0), std::log(2.0), 1e-12);
}

TEST(RateI, BoundaryMass) {
  // I(alpha mu_bar + (1 - alpha) delta_inf) = (1 - alpha) xi.
  for (const rl::WaitingLaw& law : {kExp, kGamma, kPareto2}) {
    for (double alpha : {0.0, 0.25, 0.5, 1.0}) {
      const rl::DeltaMeasure mu = rl::DeltaMeasure::from_tilt(alpha, law, 0.0);
      EXPECT_EQ(rl::rate_I(law, mu), (1.0 - alpha) * rl::xi(law)) << law.describe() << alpha;
    }
  }
  const rl::DeltaMeasure mu = rl::DeltaMeasure::from_tilt(1.0, kExp, -1.0);
  EXPECT_NEAR(rl::rate_I(kExp, mu), j1_exp(2.0), 1e-10);
  EXPECT_TRUE(std::isinf(rl::rate_I0(kExp, rl::DeltaMeasure::from_tilt(0.5, kExp, 0.0))));
  EXPECT_THROW(rl::rate_I(kGamma, mu), rl::MismatchError);
}

TEST(RateI, AtomicMeasures) {
  // Two atoms with length-biased weights of the law itself: H = 0.
  const rl::DeltaMeasure mu = rl::DeltaMeasure::from_atoms(1.0, {{1.0, 1.0 / 3.0}, {2.0, 2.0 / 3.0}});
  EXPECT_NEAR(rl::rate_I(kTwoAtoms, mu), 0.0, 1e-12);
  const rl::DeltaMeasure off = rl::DeltaMeasure::from_atoms(1.0, {{1.5, 1.0}});
  EXPECT_TRUE(std::isinf(rl::rate_I(kTwoAtoms, off)));
}

TEST(Variational, MinimizerOnAffineStretch) {
  for (double m : {0.1, 0.25, 0.4}) {
    const rl::VariationalJ1 v = rl::variational_crosscheck_J1_detail(kPareto2, m);
    EXPECT_NEAR(v.alpha, 2.0 * m, 0.01) << m;
    EXPECT_LE(v.value, 1e-9);
  }
  for (double m : {0.6, 0.8}) {
    const rl::VariationalJ1 v = rl::variational_crosscheck_J1_detail(kPareto2, m);
    EXPECT_DOUBLE_EQ(v.alpha, 1.0);
    EXPECT_LT(rel(v.value, rl::rate_J1_closed(kPareto2, m)), 1e-6);
  }
  EXPECT_LT(rel(rl::variational_crosscheck_J1(kExp, 2.0), j1_exp(2.0)), 1e-8);
}

TEST(Regimes, LabelRules) {
  const std::vector<double> m{0, 1, 2, 3, 4, 5, 6, 7};
  const std::vector<double> v{0.0, 0.0, 0.0, 1.0, 2.0, 3.0, 4.5, HUGE_VAL};
  const auto r = rl::label_regimes(m, v);
  EXPECT_EQ(r[0], rl::Regime::kZero);
  EXPECT_EQ(r[1], rl::Regime::kZero);
  EXPECT_EQ(r[4], rl::Regime::kAffine);
  EXPECT_EQ(r[6], rl::Regime::kStrictConvex);
  EXPECT_EQ(r[7], rl::Regime::kInfeasible);
  EXPECT_EQ(rl::to_string(rl::Regime::kStrictConvex), "STRICT_CONVEX");
}

TEST(Regimes, ParetoScan) {
  const rl::RateCurve c = rl::affine_scan(kPareto2, grid(0.04, 2.0, 50));
  ASSERT_TRUE(c.kink.has_value());
  EXPECT_NEAR(*c.kink, 0.5, 1e-6);
  for (const auto& p : c.points) {
    if (p.m <= 0.5) {
      EXPECT_EQ(p.regime, rl::Regime::kZero) << p.m;
    } else if (p.m < 1.0) {
      EXPECT_EQ(p.regime, rl::Regime::kStrictConvex) << p.m;
    } else {
      EXPECT_EQ(p.regime, rl::Regime::kInfeasible) << p.m;
    }
  }
  const rl::RateCurve e = rl::affine_scan(kExp, grid(0.1, 3.0, 20));
  EXPECT_FALSE(e.kink.has_value());
  for (const auto& p : e.points) EXPECT_EQ(p.regime, rl::Regime::kStrictConvex) << p.m;
}
