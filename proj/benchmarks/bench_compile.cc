// Copyright 2026 The demc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "demc/adaptive.hpp"
#include "demc/codes.hpp"
#include "demc/compile.hpp"

namespace {

using namespace demc;

void BM_CompileSurface(benchmark::State &state) {
    uint32_t d = (uint32_t)state.range(0);
    auto level = (CorrelationLevel)state.range(1);
    Circuit c = gen_surface(d, 1, NoiseModel{0.001});
    size_t hyperedges = 0;
    for (auto _ : state) {
        Dem dem = compile_circuit(c, level);
        hyperedges = dem.hyperedges.size();
        benchmark::DoNotOptimize(dem);
    }
    state.counters["hyperedges"] = (double)hyperedges;
    state.counters["edges_per_s"] =
        benchmark::Counter((double)hyperedges, benchmark::Counter::kIsIterationInvariantRate);
}
BENCHMARK(BM_CompileSurface)
    ->ArgsProduct({{3, 5, 7, 9, 11}, {0, 1, 2}})
    ->Unit(benchmark::kMillisecond);

void BM_CompileSurfaceThreads(benchmark::State &state) {
    uint32_t threads = (uint32_t)state.range(0);
    Circuit c = gen_surface(9, 3, NoiseModel{0.001});
    for (auto _ : state) {
        Dem dem = compile_circuit(c, CorrelationLevel::L2, threads);
        benchmark::DoNotOptimize(dem);
    }
}
BENCHMARK(BM_CompileSurfaceThreads)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_CompileRepetition(benchmark::State &state) {
    uint32_t d = (uint32_t)state.range(0);
    Circuit c = gen_repetition(d, d, NoiseModel{0.001});
    for (auto _ : state) {
        Dem dem = compile_circuit(c, CorrelationLevel::L0);
        benchmark::DoNotOptimize(dem);
    }
}
BENCHMARK(BM_CompileRepetition)->Arg(9)->Arg(17)->Arg(25)->Unit(benchmark::kMillisecond);

void BM_AdaptiveShot(benchmark::State &state) {
    AdaptiveConfig cfg;
    cfg.d = (uint32_t)state.range(0);
    cfg.p = 0.001;
    cfg.seed = 1;
    uint64_t shot = 0;
    for (auto _ : state) {
        ShotRecord rec = run_adaptive_shot(cfg, shot++);
        benchmark::DoNotOptimize(rec);
    }
}
BENCHMARK(BM_AdaptiveShot)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
