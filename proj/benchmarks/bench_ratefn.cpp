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
#include "renewal_ldp/numerics.hpp"
#include "renewal_ldp/ratefn.hpp"

namespace {

using renewal_ldp::BoundedFunction;
using renewal_ldp::WaitingLaw;

const WaitingLaw& law_for(int i) {
  static const WaitingLaw laws[] = {
      WaitingLaw::exponential(1.0), WaitingLaw::gamma(2.0, 1.0),
      WaitingLaw::pareto(2.0, 1.0), WaitingLaw::parse("atoms(1:0.5,2:0.5)")};
  return laws[i];
}

void BM_LogMgf(benchmark::State& state) {
  const WaitingLaw& law = law_for(static_cast<int>(state.range(0)));
  double c = -0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(renewal_ldp::log_mgf(law, c));
    c = c == -0.3 ? -0.31 : -0.3;  // defeat any caching
  }
  state.SetLabel(law.describe());
}
BENCHMARK(BM_LogMgf)->DenseRange(0, 3);

void BM_TLimit(benchmark::State& state) {
  const WaitingLaw law = WaitingLaw::pareto(2.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(renewal_ldp::T_limit(law));
}
BENCHMARK(BM_TLimit)->Unit(benchmark::kMillisecond);

void BM_Legendre1d(benchmark::State& state) {
  const WaitingLaw& law = law_for(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(renewal_ldp::legendre_1d(law, 1.5));
  state.SetLabel(law.describe());
}
BENCHMARK(BM_Legendre1d)->DenseRange(0, 3)->Unit(benchmark::kMicrosecond);

void BM_RateJF(benchmark::State& state) {
  const WaitingLaw& law = law_for(static_cast<int>(state.range(0)));
  const BoundedFunction one = BoundedFunction::one();
  for (auto _ : state) benchmark::DoNotOptimize(renewal_ldp::rate_JF(law, one, 0.7));
  state.SetLabel(law.describe());
}
BENCHMARK(BM_RateJF)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_RateJFMin1(benchmark::State& state) {
  const WaitingLaw law = WaitingLaw::exponential(1.0);
  const BoundedFunction F = BoundedFunction::min1();
  for (auto _ : state) benchmark::DoNotOptimize(renewal_ldp::rate_JF(law, F, 0.4));
}
BENCHMARK(BM_RateJFMin1)->Unit(benchmark::kMillisecond);

void BM_Variational(benchmark::State& state) {
  const WaitingLaw& law = law_for(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(renewal_ldp::variational_crosscheck_J1(law, 0.7));
  }
  state.SetLabel(law.describe());
}
BENCHMARK(BM_Variational)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_AffineScan(benchmark::State& state) {
  const WaitingLaw law = WaitingLaw::pareto(2.0, 1.0);
  const auto grid = renewal_ldp::linspace(0.05, 2.0, 40);
  for (auto _ : state) benchmark::DoNotOptimize(renewal_ldp::affine_scan(law, grid));
}
BENCHMARK(BM_AffineScan)->Unit(benchmark::kMillisecond);

}  // namespace
