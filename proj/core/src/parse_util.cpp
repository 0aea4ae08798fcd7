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

#include "parse_util.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

#include "renewal_ldp/errors.hpp"

namespace renewal_ldp::detail {

std::string trim(std::string_view s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

Call parse_call(std::string_view spec) {
  const std::string s = trim(spec);
  Call call;
  const auto open = s.find('(');
  if (open == std::string::npos) {
    call.name = s;
    return call;
  }
  if (s.back() != ')') {
    throw ParseError("unbalanced parentheses in '" + s + "'");
  }
  call.name = trim(std::string_view(s).substr(0, open));
  call.has_parens = true;
  const std::string_view body =
      std::string_view(s).substr(open + 1, s.size() - open - 2);
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= body.size(); ++i) {
    if (i == body.size() || (body[i] == ',' && depth == 0)) {
      std::string piece = trim(body.substr(start, i - start));
      if (!piece.empty() || i != body.size() || !call.args.empty()) {
        call.args.push_back(std::move(piece));
      }
      start = i + 1;
      continue;
    }
    if (body[i] == '(') ++depth;
    if (body[i] == ')' && --depth < 0) {
      throw ParseError("unbalanced parentheses in '" + s + "'");
    }
  }
  if (depth != 0) throw ParseError("unbalanced parentheses in '" + s + "'");
  return call;
}

double parse_number(std::string_view s) {
  const std::string t = trim(s);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  if (!t.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ParseError("not a finite number: '" + t + "'");
  }
  return v;
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

}  // namespace renewal_ldp::detail
