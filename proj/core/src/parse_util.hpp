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

#ifndef RENEWAL_LDP_SRC_PARSE_UTIL_HPP
#define RENEWAL_LDP_SRC_PARSE_UTIL_HPP

#include <string>
#include <string_view>
#include <vector>

namespace renewal_ldp::detail {

/// `name(arg, arg, ...)` split at top-level commas.
struct Call {
  std::string name;
  std::vector<std::string> args;
  bool has_parens = false;
};

std::string trim(std::string_view s);
Call parse_call(std::string_view spec);
double parse_number(std::string_view s);
/// Shortest decimal that round-trips.
std::string format_number(double v);

}  // namespace renewal_ldp::detail

#endif  // RENEWAL_LDP_SRC_PARSE_UTIL_HPP
