#include "rarefan/experiments.hpp"
#include "rarefan/replicas.hpp"

#include <benchmark/benchmark.h>

namespace {

rarefan::ExperimentPlan bench_plan()
{
    rarefan::ExperimentPlan plan;
    plan.t = 100.0;
    plan.master_seed = 7;
    return plan;
}

void BM_InfiniteStepSerial(benchmark::State& state)
{
    const auto plan = bench_plan();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto out = rarefan::run_replicas_serial<rarefan::InfiniteStepSample>(
            n, [&](std::size_t r) { return rarefan::infinite_step_replica(plan, r); });
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_InfiniteStepParallel(benchmark::State& state)
{
    const auto plan = bench_plan();
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto out = rarefan::run_replicas_parallel<rarefan::InfiniteStepSample>(
            n, [&](std::size_t r) { return rarefan::infinite_step_replica(plan, r); });
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}

BENCHMARK(BM_InfiniteStepSerial)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_InfiniteStepParallel)->Arg(64)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
