#include <benchmark/benchmark.h>

#include "scd/pipeline.hpp"
#include "scd/sim.hpp"

namespace {

void BM_RunChunkOracle(benchmark::State& state) {
    const int frames = static_cast<int>(state.range(0));
    const scd::SyntheticWorld world = scd::make_random_world(5, frames);
    const scd::SequenceData data = scd::generate(world, frames);
    const scd::CcSegmenter segmenter;
    scd::SequenceConfig config;
    config.min_area = 1;

    for (auto _ : state) {
        auto maps = scd::run_chunk(std::span(data.ref), std::span(data.query), segmenter,
                                   [&] { return scd::make_oracle_tracker(world, frames, 0.0); },
                                   config);
        benchmark::DoNotOptimize(maps);
    }
    state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_RunChunkOracle)->Arg(1)->Arg(5)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_RunChunkGreedy(benchmark::State& state) {
    const int frames = static_cast<int>(state.range(0));
    const scd::SyntheticWorld world = scd::make_random_world(6, frames);
    const scd::SequenceData data = scd::generate(world, frames);
    const scd::CcSegmenter segmenter;
    scd::SequenceConfig config;
    config.min_area = 1;

    for (auto _ : state) {
        auto maps = scd::run_chunk(std::span(data.ref), std::span(data.query), segmenter,
                                   [] { return scd::make_greedy_overlap_tracker(); }, config);
        benchmark::DoNotOptimize(maps);
    }
    state.SetItemsProcessed(state.iterations() * frames);
}
BENCHMARK(BM_RunChunkGreedy)->Arg(1)->Arg(5)->Arg(30)->Unit(benchmark::kMillisecond);

} // namespace
