#include <benchmark/benchmark.h>

#include "qgseg/scenarios.hpp"
#include "qgseg/segment.hpp"

namespace {

using namespace qgseg;

void BM_Profile(benchmark::State &state) {
    auto n = static_cast<std::size_t>(state.range(0));
    auto s = build_scenario("q1_xyz_pure");
    auto program = ObservableProgram::cyclic(s.program.catalog, n);
    auto schedule = StateSchedule::single_change(s.schedule.segments[0].state, s.schedule.segments[1].state, n, n / 2);
    auto catalog = program.alphabets();
    auto seq = generate_quantum_sequence(program, schedule, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(estimate_changepoint(seq, catalog));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * state.range(0));
}
BENCHMARK(BM_Profile)->Arg(2000)->Arg(100000)->Unit(benchmark::kMicrosecond);

void BM_ProfileWorkers(benchmark::State &state) {
    auto s = build_scenario("q2_xxyyzz");
    auto program = ObservableProgram::cyclic(s.program.catalog, 100000);
    auto schedule = StateSchedule::single_change(s.schedule.segments[0].state, s.schedule.segments[1].state, 100000,
                                                 50000);
    auto catalog = program.alphabets();
    auto seq = generate_quantum_sequence(program, schedule, 1);
    ProfileOptions options{static_cast<unsigned>(state.range(0))};
    for (auto _ : state) {
        benchmark::DoNotOptimize(jsd_profile(seq, catalog, options));
    }
}
BENCHMARK(BM_ProfileWorkers)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_Generate(benchmark::State &state) {
    auto s = build_scenario(state.range(0) == 0 ? "q1_xyz_pure" : "q2_xxyyzz");
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_quantum_sequence(s.program, s.schedule, 7));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * s.program.size()));
}
BENCHMARK(BM_Generate)->Arg(0)->Arg(1)->Unit(benchmark::kMicrosecond);

void BM_SpectralDecomposition(benchmark::State &state) {
    auto obs = parse_observable(state.range(0) == 2 ? "Y" : "X*Y");
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_decomposition(obs.matrix()));
    }
}
BENCHMARK(BM_SpectralDecomposition)->Arg(2)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
