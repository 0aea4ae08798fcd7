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

#ifndef RENEWAL_LDP_RATEFN_HPP
#define RENEWAL_LDP_RATEFN_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "renewal_ldp/bounded_function.hpp"
#include "renewal_ldp/delta_measure.hpp"
#include "renewal_ldp/distributions.hpp"

namespace renewal_ldp {

struct Legendre1d {
  double value = 0.0;
  double argmax = 0.0;
  /// The supremum sits at the abscissa xi.
  bool at_boundary = false;
};

/// Lambda*(a) = sup_x (a x - log psi(e^{x tau})).
double legendre_1d(const WaitingLaw& law, double a);
Legendre1d legendre_1d_detail(const WaitingLaw& law, double a);

/// Lambda(x, y) = log psi(e^{x tau + y F(tau)}), +inf outside the domain.
double log_partition(const WaitingLaw& law, const BoundedFunction& F, double x,
                     double y);

/// Moments of the two-parameter family zeta ~ e^{x tau + y F} psi.
struct TiltMoments {
  double log_z = 0.0;
  double mean_tau = 0.0;
  double mean_f = 0.0;
  double var_tau = 0.0;
  double cov = 0.0;
  double var_f = 0.0;
};
TiltMoments tilt_moments(const WaitingLaw& law, const BoundedFunction& F,
                         double x, double y);

/// Lambda*(a, b) = sup_{x, y} (a x + b y - Lambda(x, y)).
double legendre_2d(const WaitingLaw& law, const BoundedFunction& F, double a,
                   double b);

struct RateJF {
  double value = 0.0;
  /// Optimal dual pair; Lambda(x, y) = 0 unless `capped`.
  double x = 0.0;
  double y = 0.0;
  /// x sits at xi with Lambda(xi, y) < 0 (affine regime).
  bool capped = false;
};

/// J_F(m) = inf_beta beta Lambda*(1/beta, m/beta), evaluated through its dual
/// sup_y (m y + x*(y)), x*(y) = sup{x <= xi : Lambda(x, y) <= 0}.
double rate_JF(const WaitingLaw& law, const BoundedFunction& F, double m);
RateJF rate_JF_detail(const WaitingLaw& law, const BoundedFunction& F, double m);

/// J_F(m) by direct minimization of the perspective beta Lambda*(1/beta, m/beta)
/// over a log-spaced beta grid plus golden refinement. Slow; a cross-check.
double rate_JF_perspective(const WaitingLaw& law, const BoundedFunction& F,
                           double m);

/// Two-regime closed form of J_1.
double rate_J1_closed(const WaitingLaw& law, double m);

/// The c < xi with tilted_mean(law, c) = target.
double solve_tilt_for_mean(const WaitingLaw& law, double target);

/// inf{H(zeta | psi) : zeta(tau) = target}, including the boundary cases
/// (support end points of discrete laws, the critical mean T).
double entropy_at_mean(const WaitingLaw& law, double target);

/// I(mu) = alpha pi(1/tau) H(pi~ | psi) + (1 - alpha) xi.
double rate_I(const WaitingLaw& law, const DeltaMeasure& mu);
/// I_0(mu): +inf unless alpha = 1.
double rate_I0(const WaitingLaw& law, const DeltaMeasure& mu);

struct EntropyProjection {
  double x = 0.0;
  double y = 0.0;
  double entropy = 0.0;
};

/// I-projection of psi onto {zeta(tau) = mean_target, zeta(F) = f_target}.
EntropyProjection entropy_projection(const WaitingLaw& law, double mean_target,
                                     const BoundedFunction& F, double f_target);

struct VariationalJ1 {
  double value = 0.0;
  double alpha = 1.0;
};

/// min over alpha of m H(zeta | psi) + (1 - alpha) xi with zeta(tau) = alpha/m.
double variational_crosscheck_J1(const WaitingLaw& law, double m);
VariationalJ1 variational_crosscheck_J1_detail(const WaitingLaw& law, double m);

enum class Regime { kStrictConvex, kAffine, kZero, kInfeasible };

std::string_view to_string(Regime r);

struct RatePoint {
  double m = 0.0;
  double value = 0.0;
  Regime regime = Regime::kStrictConvex;
};

struct RateCurve {
  std::vector<RatePoint> points;
  std::optional<double> kink;
  double xi = 0.0;
  double T = 0.0;
};

/// Labels already computed values by second differences.
std::vector<Regime> label_regimes(const std::vector<double>& m,
                                  const std::vector<double>& values);

/// J_F on a grid, labelled; kink = 1/T when F is constant and T < inf.
RateCurve rate_curve(const WaitingLaw& law, const BoundedFunction& F,
                     const std::vector<double>& m_grid);

/// rate_curve with F = 1.
RateCurve affine_scan(const WaitingLaw& law, const std::vector<double>& m_grid);

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_RATEFN_HPP
