// Copyright 2026 The radperc Authors
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

#include "radperc/clifford.hpp"
#include "radperc/dp.hpp"
#include "radperc/rng.hpp"
#include "radperc/stabilizer.hpp"

namespace {

using namespace radperc;

void bench_gf2_rank(benchmark::State &state) {
    auto n = static_cast<size_t>(state.range(0));
    RandomStream rng(1, 0);
    std::vector<BitVector> rows(n, BitVector(n));
    for (auto &r : rows) {
        for (auto &w : r.words()) {
            w = rng();
        }
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(gf2::rank(rows));
    }
}
BENCHMARK(bench_gf2_rank)->Arg(64)->Arg(256)->Arg(1024);

void bench_clifford_layer(benchmark::State &state) {
    auto n = static_cast<size_t>(state.range(0));
    RandomStream rng(2, 0);
    PauliString s(n);
    for (size_t i = 0; i < n; i++) {
        s.set_raw(i, static_cast<uint8_t>(rng.below(4)));
    }
    size_t layer = 0;
    for (auto _ : state) {
        apply_layer_in_place(s, parity_of_layer(layer++), rng);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n / 2));
}
BENCHMARK(bench_clifford_layer)->Arg(512)->Arg(4096);

void bench_dp_step(benchmark::State &state) {
    auto n = static_cast<size_t>(state.range(0));
    RandomStream rng(3, 0);
    BranchingParams params = branching_probs(LocalDim::of(2), 0.1);
    LatticeState lattice{BitVector(n), 0, Parity::even};
    for (size_t i = 0; i < n; i++) {
        lattice.occ.set(i);
    }
    for (auto _ : state) {
        step_in_place(lattice, params, rng);
        if (lattice.occ.none()) {
            for (size_t i = 0; i < n; i++) {
                lattice.occ.set(i);
            }
        }
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * n));
}
BENCHMARK(bench_dp_step)->Arg(1024)->Arg(16384);

void bench_stabilizer_step(benchmark::State &state) {
    auto n = static_cast<size_t>(state.range(0));
    RandomStream rng(4, 0);
    GeneratorSet g = GeneratorSet::init(InitCase::PureAll, n, n);
    size_t layer = 0;
    for (auto _ : state) {
        g.apply_layer(parity_of_layer(layer++), rng);
        g.apply_swaps(0.1, rng);
        if (g.n_env() > 8 * n) {
            state.PauseTiming();
            g = GeneratorSet::init(InitCase::PureAll, n, n);
            state.ResumeTiming();
        }
    }
}
BENCHMARK(bench_stabilizer_step)->Arg(64)->Arg(256);

void bench_stabilizer_entropy(benchmark::State &state) {
    auto n = static_cast<size_t>(state.range(0));
    RandomStream rng(5, 0);
    GeneratorSet g = GeneratorSet::init(InitCase::MixedS2MixedE, n, n);
    for (size_t t = 0; t < 32; t++) {
        g.apply_layer(parity_of_layer(t), rng);
        g.apply_swaps(0.1, rng);
    }
    for (auto _ : state) {
        benchmark::DoNotOptimize(coherent_info(g));
    }
}
BENCHMARK(bench_stabilizer_entropy)->Arg(64)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
