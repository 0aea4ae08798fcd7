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

#include "renewal_ldp/bounded_function.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

#include "renewal_ldp/errors.hpp"
#include "parse_util.hpp"

namespace renewal_ldp {

BoundedFunction::BoundedFunction(std::string name,
                                 std::function<double(double)> eval,
                                 double lower, double upper,
                                 std::vector<double> breakpoints)
    : name_(std::move(name)),
      eval_(std::move(eval)),
      lower_(lower),
      upper_(upper),
      breakpoints_(std::move(breakpoints)) {
  if (!(lower_ >= 0.0) || !(upper_ >= lower_) || !std::isfinite(upper_)) {
    throw RangeError("bounded function '" + name_ +
                     "' needs 0 <= lower <= upper < inf");
  }
  std::sort(breakpoints_.begin(), breakpoints_.end());
}

BoundedFunction BoundedFunction::one() {
  return {"one", [](double) { return 1.0; }, 1.0, 1.0};
}

BoundedFunction BoundedFunction::min1() {
  return {"min1", [](double t) { return std::min(t, 1.0); }, 0.0, 1.0, {1.0}};
}

BoundedFunction BoundedFunction::sat(double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ParseError("sat(K) needs K > 0");
  return {"sat(" + detail::format_number(k) + ")",
          [k](double t) { return std::min(t, k); }, 0.0, k, {k}};
}

BoundedFunction BoundedFunction::sig() {
  return {"sig", [](double t) { return t / (1.0 + t); }, 0.0, 1.0};
}

BoundedFunction BoundedFunction::indicator(double a, double b, double w) {
  if (!(w > 0.0) || !(b >= a) || !std::isfinite(b)) {
    throw ParseError("ind(a,b,w) needs a <= b and w > 0");
  }
  const double h = 0.5 * w;
  auto f = [a, b, h, w](double t) {
    const double up = std::clamp((t - (a - h)) / w, 0.0, 1.0);
    const double down = std::clamp(((b + h) - t) / w, 0.0, 1.0);
    return std::min(up, down);
  };
  return {"ind(" + detail::format_number(a) + "," + detail::format_number(b) +
              "," + detail::format_number(w) + ")",
          f, 0.0, 1.0, {a - h, a + h, b - h, b + h}};
}

BoundedFunction BoundedFunction::parse(std::string_view spec) {
  const detail::Call call = detail::parse_call(spec);
  auto nums = [&](std::size_t n) {
    if (call.args.size() != n) {
      throw ParseError("function '" + call.name + "' takes " +
                       std::to_string(n) + " argument(s)");
    }
    std::vector<double> v;
    for (const auto& s : call.args) v.push_back(detail::parse_number(s));
    return v;
  };
  if (call.name == "one" && !call.has_parens) return one();
  if (call.name == "min1" && !call.has_parens) return min1();
  if (call.name == "sig" && !call.has_parens) return sig();
  if (call.name == "sat") return sat(nums(1)[0]);
  if (call.name == "ind") {
    const auto v = nums(3);
    return indicator(v[0], v[1], v[2]);
  }
  throw ParseError("unknown function spec '" + std::string(spec) +
                   "' (expected one, min1, sat(K), sig, ind(a,b,w))");
}

}  // namespace renewal_ldp
