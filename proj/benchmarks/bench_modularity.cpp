#include <benchmark/benchmark.h>

#include <numeric>

#include "modcert/graph.hpp"
#include "modcert/modularity.hpp"
#include "modcert/phase_sim.hpp"

namespace {

void BM_ModularityEval(benchmark::State& state) {
    const auto n = state.range(0);
    modcert::DegreeSequence seq;
    seq.counts[3] = n;
    const auto g = modcert::sample_configuration(seq, 3);
    const auto parts = modcert::partition_remainder(g, {}, g.n);
    modcert::VertexPartition p;
    p.blocks = parts.blocks;
    for (auto _ : state) {
        benchmark::DoNotOptimize(modcert::modularity(g, p));
    }
}
BENCHMARK(BM_ModularityEval)->Arg(100000);

void BM_PartitionRemainder(benchmark::State& state) {
    const auto n = state.range(0);
    modcert::DegreeSequence seq;
    seq.counts[3] = n;
    const auto g = modcert::sample_configuration(seq, 3);
    for (auto _ : state) {
        auto parts = modcert::partition_remainder(g, {}, g.n);
        benchmark::DoNotOptimize(parts.blocks.data());
    }
}
BENCHMARK(BM_PartitionRemainder)->Arg(100000);

void BM_BruteForceQstar(benchmark::State& state) {
    modcert::DegreeSequence seq;
    seq.counts[1] = 2;
    seq.counts[2] = 3;
    seq.counts[3] = 2;
    const auto g = modcert::sample_configuration(seq, 5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(modcert::brute_force_qstar(g).qstar);
    }
}
BENCHMARK(BM_BruteForceQstar);

}  // namespace
