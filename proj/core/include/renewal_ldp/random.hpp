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

#ifndef RENEWAL_LDP_RANDOM_HPP
#define RENEWAL_LDP_RANDOM_HPP

#include <cstdint>
#include <limits>

namespace renewal_ldp {

/// Counter-based random stream.
///
/// The n-th output is a SplitMix64 finalizer applied to key + n * golden, so a
/// stream is fully described by (key, counter). split() derives independent
/// child streams deterministically, which is how shards and replicates get
/// their randomness. Satisfies UniformRandomBitGenerator.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) noexcept;

  /// Child stream number `index` at the current position; does not advance
  /// this stream.
  [[nodiscard]] RandomStream split(std::uint64_t index) const noexcept;

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1).
  double uniform() noexcept;

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t counter() const noexcept { return counter_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  RandomStream(std::uint64_t key, int) noexcept : key_(key) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_RANDOM_HPP
