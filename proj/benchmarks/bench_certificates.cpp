#include <benchmark/benchmark.h>

#include "modcert/ode_lower.hpp"
#include "modcert/phase_sim.hpp"
#include "modcert/upper_bound.hpp"

namespace {

void BM_ScheduleOf(benchmark::State& state) {
    double eps = 0.037562;
    for (auto _ : state) {
        benchmark::DoNotOptimize(modcert::schedule_of(eps).qr);
    }
}
BENCHMARK(BM_ScheduleOf);

void BM_LowerCertificate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(modcert::lower_certificate().bound);
    }
}
BENCHMARK(BM_LowerCertificate);

void BM_UpperCertificate(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(modcert::certify_upper().max_g);
    }
}
BENCHMARK(BM_UpperCertificate);

void BM_PhaseSimulation(benchmark::State& state) {
    modcert::PhaseSimOptions opts;
    opts.n = state.range(0);
    opts.seed = 17;
    for (auto _ : state) {
        benchmark::DoNotOptimize(modcert::run_phase_simulation(opts).q);
    }
    state.SetItemsProcessed(state.iterations() * opts.n);
}
BENCHMARK(BM_PhaseSimulation)->Arg(50000)->Arg(200000);

}  // namespace
