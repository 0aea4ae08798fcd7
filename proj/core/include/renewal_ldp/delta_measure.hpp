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

#ifndef RENEWAL_LDP_DELTA_MEASURE_HPP
#define RENEWAL_LDP_DELTA_MEASURE_HPP

#include <variant>
#include <vector>

#include "renewal_ldp/distributions.hpp"
#include "renewal_ldp/test_function.hpp"

namespace renewal_ldp {

/// pi given as the length-biased version of tilt(base, c).
struct TiltedPi {
  WaitingLaw base;
  double c = 0.0;
};

/// mu = alpha mu_0 + (1 - alpha) delta_(inf, inf), where mu_0 is
/// int delta_(u tau, (1-u) tau) du pi(d tau).
class DeltaMeasure {
 public:
  /// Atoms are merged and must carry normalized weights (1e-12); they may be
  /// empty only when alpha = 0.
  static DeltaMeasure from_atoms(double alpha, std::vector<Atom> atoms);
  static DeltaMeasure from_tilt(double alpha, WaitingLaw base, double c);

  [[nodiscard]] double alpha() const { return alpha_; }
  [[nodiscard]] const std::variant<std::vector<Atom>, TiltedPi>& pi() const {
    return pi_;
  }
  [[nodiscard]] bool is_atomic() const {
    return std::holds_alternative<std::vector<Atom>>(pi_);
  }

  /// pi(1 / tau).
  [[nodiscard]] double pi_inverse_moment() const;

  /// mu(f) = alpha pi(fbar(1, .)) + (1 - alpha) f(inf, inf).
  [[nodiscard]] double evaluate(const BivariateTestFunction& f) const;

 private:
  DeltaMeasure(double alpha, std::variant<std::vector<Atom>, TiltedPi> pi)
      : alpha_(alpha), pi_(std::move(pi)) {}

  double alpha_;
  std::variant<std::vector<Atom>, TiltedPi> pi_;
};

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_DELTA_MEASURE_HPP
