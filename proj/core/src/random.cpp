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

#include "renewal_ldp/random.hpp"

namespace renewal_ldp {

namespace {
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSeedSalt = 0x6a09e667f3bcc909ULL;
constexpr std::uint64_t kSplitSalt = 0xbb67ae8584caa73bULL;
}  // namespace

std::uint64_t mix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) noexcept
    : key_(mix64(seed ^ kSeedSalt)) {}

RandomStream RandomStream::split(std::uint64_t index) const noexcept {
  // The parent's position enters the child key, so a stream advanced between
  // two splits hands out fresh children.
  return RandomStream(mix64(key_ ^ mix64(index + kSplitSalt) ^ mix64(counter_ * kGolden)) | 1ULL,
                      0);
}

RandomStream::result_type RandomStream::operator()() noexcept {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double RandomStream::uniform() noexcept {
  // 53 random bits, centred in their cell so that 0 and 1 are never produced.
  return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace renewal_ldp
