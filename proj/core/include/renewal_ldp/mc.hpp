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


#ifndef RENEWAL_LDP_MC_HPP
#define RENEWAL_LDP_MC_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "renewal_ldp/bounded_function.hpp"
#include "renewal_ldp/distributions.hpp"
#include "renewal_ldp/random.hpp"
#include "renewal_ldp/test_function.hpp"

namespace renewal_ldp {

// Events are stated for K_t = #{n >= 1 : S_n <= t}, the number of completed
// inter-arrivals by time t, and for C_t = sum of F over those inter-arrivals.
enum class EventKind {
  kCountBand,   // |K_t / t - m| <= delta
  kCountUpper,  // K_t >= ceil(m t), i.e. S_{ceil(m t)} <= t
  kCumulBand,   // |C_t / t - m| <= delta
};

struct Event {
  EventKind kind = EventKind::kCountBand;
  double m = 1.0;
  double delta = 0.0;

  /// count:m:delta | upper:m | cumul:m:delta
  static Event parse(std::string_view spec);
  [[nodiscard]] std::string describe() const;
};

std::string_view to_string(EventKind k);

enum class SamplerKind { kNaive, kTilt, kTiltBigJump };

std::string_view to_string(SamplerKind s);
/// naive | tilt | bigjump
SamplerKind parse_sampler(std::string_view s);

struct LdpEstimate {
  double t = 0.0;
  Event event;
  double p_hat = 0.0;
  double std_err = 0.0;
  /// -log(p_hat) / t, or -log(1/n) / t when nothing was hit.
  double rate_hat = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t hits = 0;
  SamplerKind sampler = SamplerKind::kNaive;
  /// No hits: rate_hat is only a lower bound.
  bool censored = false;
};

/// One logged sample: every inter-arrival the estimator looked at, the
/// weight it carried and whether the event occurred.
struct SampleRecord {
  std::vector<double> draws;
  double weight = 1.0;
  bool hit = false;
  /// Index of the big-jump slot for proposal draws, 0 otherwise.
  std::uint64_t jump_slot = 0;
  bool from_proposal = false;
};

struct McOptions {
  /// Worker threads; the result does not depend on it.
  unsigned threads = 1;
  /// Cumulative events use this F.
  BoundedFunction F = BoundedFunction::one();
  /// Head padding: the tilted head holds ceil(m (1 + pad) t) draws.
  double head_pad = 0.05;
  /// Probability of using the big-jump proposal; the rest is the law itself.
  double defensive_mix = 0.8;
  /// When set, the first `trace_count` samples of shard 0 are logged here.
  std::vector<SampleRecord>* trace = nullptr;
  std::size_t trace_count = 0;
};

/// Samples are spread over this many shards, each with its own child stream.
inline constexpr unsigned kShards = 64;

LdpEstimate naive_ldp(const WaitingLaw& law, const Event& event, double t,
                      std::uint64_t n, RandomStream& rng, const McOptions& opts = {});

/// Head inter-arrivals from tilt(law, c(m)), where c(m) gives tilted mean 1/m.
/// Throws InfeasibleError in the affine regime.
LdpEstimate is_ldp_light(const WaitingLaw& law, const Event& event, double t,
                         std::uint64_t n, RandomStream& rng, const McOptions& opts = {});

/// Near-critical tilted head plus one conditioned big jump, mixed with the
/// law itself for a bounded weight. Needs xi < inf, T < inf and m < 1/T.
LdpEstimate is_ldp_heavy(const WaitingLaw& law, const Event& event, double t,
                         std::uint64_t n, RandomStream& rng, const McOptions& opts = {});

/// CUMUL_BAND estimator for C_t / t. The tilt sampler draws the head from
/// the optimal two-parameter family e^{x tau + y F(tau)} psi.
LdpEstimate cumulative_ldp(const WaitingLaw& law, const BoundedFunction& F,
                           const Event& event, double t, std::uint64_t n,
                           RandomStream& rng, SamplerKind sampler,
                           const McOptions& opts = {});

/// Dispatch on sampler and event kind.
LdpEstimate estimate(const WaitingLaw& law, const Event& event, double t,
                     std::uint64_t n, RandomStream& rng, SamplerKind sampler,
                     const McOptions& opts = {});

// ------------------------------------------------------------------ checks

/// Piecewise-linear function through the knots, zero outside them.
class PiecewiseLinear {
 public:
  explicit PiecewiseLinear(std::vector<std::pair<double, double>> knots = {});
  /// level on [a, b], linear ramps of width w outside, zero beyond.
  static PiecewiseLinear plateau(double level, double a, double b, double w);
  /// "0" or "x1:y1,x2:y2,..." or "plateau(level,a,b,w)".
  static PiecewiseLinear parse(std::string_view spec);

  double operator()(double x) const;
  [[nodiscard]] const std::vector<std::pair<double, double>>& knots() const {
    return knots_;
  }
  [[nodiscard]] std::vector<double> breakpoints() const;

 private:
  std::vector<std::pair<double, double>> knots_;
};

/// f(a, b) = phi(a + b) / (a + b) + c 1{a + b > M}.
BivariateTestFunction free_energy_function(const PiecewiseLinear& phi, double c,
                                           double M);

struct FreeEnergyRow {
  double t = 0.0;
  double estimate = 0.0;  // mean of e^{t mu_t(f)}
  double std_err = 0.0;
  bool pass = false;
};

struct FreeEnergyReport {
  double c_f = 0.0;
  double d_f = 0.0;
  double s_star = 0.0;  // where the sup defining D_f is attained
  double bound = 0.0;   // D_f / (1 - C_f)
  std::vector<FreeEnergyRow> rows;
  bool pass = false;
};

/// C_f = psi(e^{phi(tau) + c tau 1{tau > M}}).
double free_energy_cf(const WaitingLaw& law, const PiecewiseLinear& phi, double c,
                      double M);

/// Throws NotInGammaError when C_f >= 1.
FreeEnergyReport free_energy_check(const WaitingLaw& law, double c,
                                   const PiecewiseLinear& phi, double M,
                                   const std::vector<double>& t_list, std::uint64_t n,
                                   RandomStream& rng, const McOptions& opts = {});

struct TightnessRow {
  double M = 0.0;
  double t = 0.0;
  double frequency = 0.0;
  double std_err = 0.0;
  double bound = 0.0;  // e^{t + floor(M t) log psi(e^{-tau})}
  bool pass = false;
};

struct TightnessReport {
  std::vector<TightnessRow> rows;
  bool pass = false;
};

/// Frequency of {mu_t(1/(a+b)) > M} against the exponential tightness bound.
TightnessReport tightness_check(const WaitingLaw& law, const std::vector<double>& M_list,
                                const std::vector<double>& t_list, std::uint64_t n,
                                RandomStream& rng, const McOptions& opts = {});

struct LlnRow {
  std::string name;
  double limit = 0.0;
  double estimate = 0.0;
  double std_err = 0.0;
  bool pass = false;
};

struct LlnReport {
  double c = 0.0;
  double t = 0.0;
  std::vector<LlnRow> rows;
  bool pass = false;
};

/// mu_t(f) under tilt(law, c) against int int f(u tau, (1-u) tau) du pi(d tau),
/// pi the length-biased tilted law. Pass when within 3 standard errors.
LlnReport lln_check(const WaitingLaw& law, double c,
                    const std::vector<std::pair<std::string, BivariateTestFunction>>& fs,
                    double t, std::uint64_t n, RandomStream& rng,
                    const McOptions& opts = {});

/// e^{-(a+b)}, e^{-a}(1 - e^{-b}) and (1+a)^{-2}, with closed-form fbar.
std::vector<std::pair<std::string, BivariateTestFunction>> standard_test_functions();

}  // namespace renewal_ldp

#endif  // RENEWAL_LDP_MC_HPP
