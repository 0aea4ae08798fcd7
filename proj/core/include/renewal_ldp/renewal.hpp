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

#ifndef RENEWAL_LDP_RENEWAL_HPP
#define RENEWAL_LDP_RENEWAL_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "renewal_ldp/bounded_function.hpp"
#include "renewal_ldp/delta_measure.hpp"
#include "renewal_ldp/distributions.hpp"
#include "renewal_ldp/errors.hpp"
#include "renewal_ldp/random.hpp"
#include "renewal_ldp/test_function.hpp"

namespace renewal_ldp {

inline constexpr std::uint64_t kMaxArrivals = 1000000000ULL;

/// Arrival times S_1 < ... < S_n with S_{n-1} <= horizon < S_n.
class RenewalPath {
 public:
  RenewalPath(std::vector<double> arrivals, double horizon);

  [[nodiscard]] const std::vector<double>& arrivals() const { return arrivals_; }
  [[nodiscard]] double horizon() const { return horizon_; }
  /// tau_i = S_i - S_{i-1}, 1-based.
  [[nodiscard]] double interarrival(std::size_t i) const;

 private:
  std::vector<double> arrivals_;
  double horizon_;
};

struct RecurrencePair {
  double backward;  // A
  double forward;   // B
};

/// Draws until the first arrival strictly beyond t.
RenewalPath simulate(const WaitingLaw& law, double t, RandomStream& rng);

/// N_t = inf{n : S_n > t}.
std::size_t counting(const RenewalPath& path);

/// (A_s, B_s) for s in [0, horizon).
RecurrencePair recurrence(const RenewalPath& path, double s);

/// mu_t(f) by the segment decomposition.
double empirical_integral(const RenewalPath& path, const BivariateTestFunction& f);

/// nu_t: alpha = S_{N-1}/t, pi = length-biased atoms of the completed
/// inter-arrivals.
DeltaMeasure delta_projection(const RenewalPath& path);

/// C_t = sum_{i < N_t} F(tau_i).
double cumulative(const RenewalPath& path, const std::function<double(double)>& F);

/// Streaming summary of one trajectory, used by Monte Carlo loops that never
/// store the path.
struct PathSummary {
  std::uint64_t n_t = 1;       // N_t
  double last_completed = 0.0;  // S_{N_t - 1}
  double straddle = 0.0;        // tau_{N_t}
};

/// Runs draw() until the partial sum exceeds t; visit(tau) is called on every
/// completed inter-arrival (those with S_i <= t), in order.
template <class Draw, class Visit>
PathSummary fold_renewal(double t, Draw&& draw, Visit&& visit) {
  PathSummary s;
  double sum = 0.0;
  for (std::uint64_t n = 1;; ++n) {
    if (n > kMaxArrivals) {
      throw BudgetError("renewal path needs more than 1e9 arrivals");
    }
    const double tau = draw();
    const double next = sum + tau;
    if (next > t) {
      s.n_t = n;
      s.last_completed = sum;
      s.straddle = tau;
      return s;
    }
    visit(tau);
    sum = next;
  }
}

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_RENEWAL_HPP
