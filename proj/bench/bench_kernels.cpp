#include "rdval/kernels.hpp"
#include "rdval/pipeline.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace rdval;

namespace {

void mixture(benchmark::State& state, Execution exec) {
    const auto n = static_cast<std::size_t>(state.range(0));
    std::vector<double> points(n);
    std::vector<double> locs(n);
    std::vector<double> amps(n);
    for (std::size_t i = 0; i < n; ++i) {
        points[i] = -8.0 + 16.0 * static_cast<double>(i) / static_cast<double>(n - 1);
        locs[i] = 0.5 * points[i];
        amps[i] = 1.0 / static_cast<double>(n);
    }
    std::vector<double> out(n);
    for (auto _ : state) {
        kernels::gaussian_mixture(exec, points, locs, amps, 0.8, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * n));
}

void pipeline(benchmark::State& state, Execution exec) {
    const std::vector<StageSpec> stages{
        StageSpec{0.50, Gaussian1D(0.00, 0.90), 1.05, FrequentistAlpha{0.77}, 0.10},
        StageSpec{0.60, Gaussian1D(0.10, 0.55), 0.30, FrequentistAlpha{0.45}, 0.00},
        StageSpec{0.65, Gaussian1D(0.30, 1.50), 0.60, FrequentistAlpha{0.05}, 0.00},
        StageSpec{0.80, Gaussian1D(0.80, 1.35), 0.25, FrequentistAlpha{0.05}, 0.00}};
    const PipelineSpec spec{Gaussian1D(0.0, 0.9), 1.49, stages, 100.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_pipeline(spec, exec).terminal_p_g_exceeds);
    }
}

}  // namespace

BENCHMARK_CAPTURE(mixture, serial, Execution::Serial)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(mixture, parallel, Execution::Parallel)->Arg(501)->Arg(2001)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(pipeline, serial, Execution::Serial)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(pipeline, parallel, Execution::Parallel)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
