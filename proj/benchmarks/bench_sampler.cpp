#include <benchmark/benchmark.h>

#include "modcert/graph.hpp"

namespace {

void BM_SampleConfiguration(benchmark::State& state) {
    const auto n = state.range(0);
    modcert::DegreeSequence seq;
    seq.counts[3] = n;
    std::uint64_t seed = 1;
    for (auto _ : state) {
        auto g = modcert::sample_configuration(seq, seed++);
        benchmark::DoNotOptimize(g.edges.data());
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_SampleConfiguration)->Arg(10000)->Arg(100000);

void BM_TwoCore(benchmark::State& state) {
    const auto n = state.range(0);
    modcert::DegreeSequence seq;
    seq.counts[1] = n / 2;
    seq.counts[3] = n / 2;
    const auto g = modcert::sample_configuration(seq, 7);
    for (auto _ : state) {
        auto core = modcert::two_core(g);
        benchmark::DoNotOptimize(core.in_core.data());
    }
}
BENCHMARK(BM_TwoCore)->Arg(10000)->Arg(100000);

}  // namespace
