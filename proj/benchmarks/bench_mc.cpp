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


#include <benchmark/benchmark.h>

#include "renewal_ldp/distributions.hpp"
#include "renewal_ldp/mc.hpp"
#include "renewal_ldp/random.hpp"
#include "renewal_ldp/renewal.hpp"

namespace {

using renewal_ldp::Event;
using renewal_ldp::RandomStream;
using renewal_ldp::WaitingLaw;

void BM_Sample(benchmark::State& state) {
  static const WaitingLaw laws[] = {WaitingLaw::exponential(1.0), WaitingLaw::gamma(2.0, 1.0),
                                    WaitingLaw::pareto(2.0, 1.0)};
  const WaitingLaw& law = laws[state.range(0)];
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(renewal_ldp::sample(law, rng));
  state.SetLabel(law.describe());
}
BENCHMARK(BM_Sample)->DenseRange(0, 2);

void BM_Simulate(benchmark::State& state) {
  const WaitingLaw law = WaitingLaw::exponential(1.0);
  RandomStream rng(2);
  const auto t = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(renewal_ldp::simulate(law, t, rng));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Simulate)->Arg(100)->Arg(10000);

void BM_LightIs(benchmark::State& state) {
  const WaitingLaw law = WaitingLaw::exponential(1.0);
  const Event ev = Event::parse("count:2:0.05");
  for (auto _ : state) {
    RandomStream rng(5);
    benchmark::DoNotOptimize(renewal_ldp::is_ldp_light(law, ev, 100.0, 10000, rng));
  }
}
BENCHMARK(BM_LightIs)->Unit(benchmark::kMillisecond);

void BM_HeavyIs(benchmark::State& state) {
  const WaitingLaw law = WaitingLaw::pareto(2.0, 1.0);
  const Event ev = Event::parse("count:0.25:0.05");
  for (auto _ : state) {
    RandomStream rng(5);
    benchmark::DoNotOptimize(renewal_ldp::is_ldp_heavy(law, ev, 200.0, 10000, rng));
  }
}
BENCHMARK(BM_HeavyIs)->Unit(benchmark::kMillisecond);

}  // namespace
