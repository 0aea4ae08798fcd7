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

#ifndef RENEWAL_LDP_DISTRIBUTIONS_HPP
#define RENEWAL_LDP_DISTRIBUTIONS_HPP

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "renewal_ldp/numerics.hpp"
#include "renewal_ldp/random.hpp"

namespace renewal_ldp {

struct Atom {
  double value;
  double prob;
};

class WaitingLaw;

namespace family {

struct Exponential {
  double rate;
};
struct Gamma {
  double shape;
  double scale;
};
struct Pareto {
  double alpha;
  double xmin;
};
/// Shape 1 is normalized to Exponential at construction.
struct Weibull {
  double shape;
  double scale;
};
struct Deterministic {
  double tau;
};
struct DiscreteAtoms {
  std::vector<Atom> atoms;  // sorted by value, merged duplicates
  std::vector<double> cdf;  // running sums, last entry 1
};
struct Empirical {
  std::vector<double> samples;  // sorted
};
struct Mixture {
  std::vector<double> weights;
  std::vector<std::shared_ptr<const WaitingLaw>> components;
};
/// e^{c tau} psi(d tau) / psi(e^{c tau}) for a base law with no closed tilt.
struct Tilted {
  std::shared_ptr<const WaitingLaw> base;
  double c;
  double log_mgf_c;
};

}  // namespace family

/// A waiting-time law psi on (0, inf). Immutable; cheap to copy.
class WaitingLaw {
 public:
  using Family =
      std::variant<family::Exponential, family::Gamma, family::Pareto,
                   family::Weibull, family::Deterministic,
                   family::DiscreteAtoms, family::Empirical, family::Mixture,
                   family::Tilted>;

  static WaitingLaw exponential(double rate);
  static WaitingLaw gamma(double shape, double scale);
  static WaitingLaw pareto(double alpha, double xmin);
  static WaitingLaw weibull(double shape, double scale);
  static WaitingLaw deterministic(double tau);
  static WaitingLaw atoms(std::vector<Atom> atoms);
  static WaitingLaw empirical(std::vector<double> samples);
  static WaitingLaw mixture(std::vector<double> weights,
                            std::vector<WaitingLaw> components);

  /// Grammar: exp(rate) | gamma(shape,scale) | pareto(alpha,xmin) |
  /// weibull(shape,scale) | det(tau) | atoms(v1:p1,v2:p2,...) |
  /// empirical(path) | mix(w1*LAW,w2*LAW,...) | tilt(LAW,c)
  static WaitingLaw parse(std::string_view spec);

  [[nodiscard]] const Family& family() const { return family_; }

  /// Canonical spec string; parse(describe()) reproduces the law.
  [[nodiscard]] std::string describe() const;

  /// Smallest / largest point of the support.
  [[nodiscard]] double ess_inf() const;
  [[nodiscard]] double ess_sup() const;
  /// Characteristic length used to lay out quadrature blocks.
  [[nodiscard]] double length_scale() const;
  /// True for laws that are finite sums of atoms.
  [[nodiscard]] bool is_discrete() const;

  /// Atom list for discrete laws (empty otherwise).
  [[nodiscard]] std::vector<Atom> atoms_view() const;

  friend bool operator==(const WaitingLaw& a, const WaitingLaw& b);

 private:
  explicit WaitingLaw(Family f) : family_(std::move(f)) {}
  friend WaitingLaw tilt(const WaitingLaw& law, double c);

  Family family_;
};

/// Options for expectation().
struct ExpectationOptions {
  /// Extra points where the integrand has kinks.
  std::vector<double> breakpoints;
  /// Restrict to tau > lower (continuous parts integrate from lower).
  double lower = -kInf;
  bool assume_finite = true;
  /// Length of the first quadrature block; 0 uses the law's length scale.
  /// Integrands decaying like e^{-k tau} want about 1/k.
  double scale = 0.0;
};

/// psi(h) = integral of h against the law.
double expectation(const WaitingLaw& law, const ScalarFunction& h,
                   const ExpectationOptions& opts = {});

/// One draw from the law.
double sample(const WaitingLaw& law, RandomStream& rng);

/// psi(e^{c tau}) in (0, +inf].
double mgf(const WaitingLaw& law, double c);
/// log psi(e^{c tau}), +inf when divergent.
double log_mgf(const WaitingLaw& law, double c);

/// Exponential-moment abscissa sup{c : psi(e^{c tau}) < inf}.
double xi(const WaitingLaw& law);
/// Whether psi(e^{xi tau}) < inf (only meaningful for finite xi).
bool mgf_finite_at_xi(const WaitingLaw& law);

/// psi(tau e^{c tau}) / psi(e^{c tau}); DomainError if mgf(c) = inf.
double tilted_mean(const WaitingLaw& law, double c);
/// psi(tau), possibly +inf.
double mean(const WaitingLaw& law);

/// c_k = xi - 2^-k max(1, xi), the tilts used to approach xi from below.
double critical_tilt(const WaitingLaw& law, int k = 40);

/// T = sup_{c < xi} tilted_mean(c).
double T_limit(const WaitingLaw& law);

/// Exponentially tilted law; closed form within the family where possible.
WaitingLaw tilt(const WaitingLaw& law, double c);

/// H(tilt(law, c) | law).
double entropy_of_tilt(const WaitingLaw& law, double c);

/// P(tau = v); zero for absolutely continuous parts.
double mass_at(const WaitingLaw& law, double v);

/// P(tau > s).
double survival(const WaitingLaw& law, double s);

/// One draw from the law conditioned on tau > s.
double sample_tail(const WaitingLaw& law, double s, RandomStream& rng);

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_DISTRIBUTIONS_HPP
