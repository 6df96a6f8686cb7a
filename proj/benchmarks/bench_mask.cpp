#include <benchmark/benchmark.h>

#include <random>

#include "scd/mask.hpp"

namespace {

scd::Bitmap random_bitmap(std::mt19937_64& rng, int w, int h, double density) {
    scd::Bitmap b(w, h);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            if (u(rng) < density) b.set(x, y);
    return b;
}

void BM_IntersectCount(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const int side = static_cast<int>(state.range(0));
    const scd::Bitmap a = random_bitmap(rng, side, side, 0.3);
    const scd::Bitmap b = random_bitmap(rng, side, side, 0.3);
    for (auto _ : state) benchmark::DoNotOptimize(intersect_count(a, b));
    state.SetItemsProcessed(state.iterations() * side * side);
}
BENCHMARK(BM_IntersectCount)->Arg(64)->Arg(256)->Arg(1024);

void BM_LabelRasterDecode(benchmark::State& state) {
    std::mt19937_64 rng(2);
    const int side = static_cast<int>(state.range(0));
    scd::LabelRaster r(side, side);
    for (auto& v : r.labels) v = static_cast<std::uint32_t>(rng() % 12);
    for (auto _ : state) benchmark::DoNotOptimize(scd::from_label_raster(r));
}
BENCHMARK(BM_LabelRasterDecode)->Arg(64)->Arg(256)->Arg(512);

void BM_MaskSetValidation(benchmark::State& state) {
    std::mt19937_64 rng(3);
    const int side = 256;
    scd::LabelRaster r(side, side);
    for (auto& v : r.labels) v = static_cast<std::uint32_t>(rng() % 12);
    const scd::MaskSet set = scd::from_label_raster(r);
    std::vector<scd::Mask> masks = set.masks();
    for (auto _ : state) {
        scd::MaskSet rebuilt(side, side, masks);
        benchmark::DoNotOptimize(rebuilt);
    }
}
BENCHMARK(BM_MaskSetValidation);

} // namespace
