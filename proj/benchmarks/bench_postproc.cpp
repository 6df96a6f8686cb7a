#include <benchmark/benchmark.h>

#include <random>

#include "scd/postproc.hpp"

namespace {

scd::ProposalSet random_soup(std::uint64_t seed, int side, int count) {
    std::mt19937_64 rng(seed);
    std::vector<scd::Mask> props;
    for (int i = 0; i < count; ++i) {
        const int w = 4 + static_cast<int>(rng() % (side / 2));
        const int h = 4 + static_cast<int>(rng() % (side / 2));
        const int x = static_cast<int>(rng() % static_cast<std::uint64_t>(side - w));
        const int y = static_cast<int>(rng() % static_cast<std::uint64_t>(side - h));
        scd::Bitmap b(side, side);
        for (int yy = y; yy < y + h; ++yy)
            for (int xx = x; xx < x + w; ++xx) b.set(xx, yy);
        props.emplace_back(static_cast<scd::MaskId>(i + 1), std::move(b));
    }
    return scd::ProposalSet(side, side, std::move(props));
}

void BM_Postprocess(benchmark::State& state) {
    const scd::ProposalSet soup =
        random_soup(7, static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(scd::postprocess(soup, 0.5, 16));
}
BENCHMARK(BM_Postprocess)->Args({128, 16})->Args({256, 32})->Args({512, 64});

} // namespace
