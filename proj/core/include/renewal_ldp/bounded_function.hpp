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

#ifndef RENEWAL_LDP_BOUNDED_FUNCTION_HPP
#define RENEWAL_LDP_BOUNDED_FUNCTION_HPP

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace renewal_ldp {

/// A bounded, nonnegative reward F on (0, inf).
///
/// Carries its range [lower, upper] and the points where it fails to be
/// smooth, so quadrature can split there.
class BoundedFunction {
 public:
  BoundedFunction(std::string name, std::function<double(double)> eval,
                  double lower, double upper,
                  std::vector<double> breakpoints = {});

  /// F = 1.
  static BoundedFunction one();
  /// F = min(tau, 1).
  static BoundedFunction min1();
  /// F = min(tau, k).
  static BoundedFunction sat(double k);
  /// F = tau / (1 + tau).
  static BoundedFunction sig();
  /// Indicator of [a, b] with linear ramps of width w centred on a and b.
  static BoundedFunction indicator(double a, double b, double w);

  /// Registry names: one, min1, sat(K), sig, ind(a,b,w).
  static BoundedFunction parse(std::string_view spec);

  double operator()(double tau) const { return eval_(tau); }

  [[nodiscard]] const std::string& name() const { return name_; }
  [[nodiscard]] double lower() const { return lower_; }
  [[nodiscard]] double upper() const { return upper_; }
  [[nodiscard]] bool is_constant() const { return lower_ == upper_; }
  [[nodiscard]] const std::vector<double>& breakpoints() const {
    return breakpoints_;
  }

 private:
  std::string name_;
  std::function<double(double)> eval_;
  double lower_;
  double upper_;
  std::vector<double> breakpoints_;
};

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_BOUNDED_FUNCTION_HPP
