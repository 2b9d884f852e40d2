// Serial reference vs OpenMP paths of the three parallel kernels.
// Arg 0 selects Exec::serial, 1 Exec::parallel.

#include "hkc/generators.hpp"
#include "hkc/hkpr.hpp"
#include "hkc/phkpr_dist.hpp"

#include <benchmark/benchmark.h>

namespace {

hkc::Exec exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? hkc::Exec::serial : hkc::Exec::parallel;
}

const hkc::Graph& graph() {
    static const auto g = hkc::gen::random_connected(20000, 80000, 1);
    return g;
}

void BM_ExactPhkpr(benchmark::State& state) {
    const auto exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hkc::exact_phkpr(graph(), 0, 10.0, 1e-9, exec));
    }
}

void BM_SerialEstimate(benchmark::State& state) {
    const auto exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hkc::serial_estimate_phkpr(graph(), 0, 5.0, 0.3, 7, 1.0, exec));
    }
}

void BM_DistributedEstimate(benchmark::State& state) {
    hkc::SimConfig config;
    config.seed = 7;
    config.exec = exec_of(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(hkc::estimate_phkpr_distributed(graph(), 0, 5.0, 0.05, 1.0, config));
    }
}

} // namespace

BENCHMARK(BM_ExactPhkpr)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_SerialEstimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DistributedEstimate)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
