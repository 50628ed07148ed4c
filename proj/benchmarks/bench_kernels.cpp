// Microbenchmarks for the per-pair evaluation kernels at the working
// resolution (224x224).

#include <benchmark/benchmark.h>

#include <random>

#include "segeval/boundary.hpp"
#include "segeval/config.hpp"
#include "segeval/imgproc.hpp"
#include "segeval/overlap.hpp"
#include "segeval/pipeline.hpp"
#include "segeval/structural.hpp"

using namespace segeval;

namespace {

BinaryMask blob_mask(std::uint64_t seed, int size = 224) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    BinaryMask mask(size, size);
    for (int i = 0; i < 4; ++i) {
        const double cx = 30 + unit(rng) * (size - 60);
        const double cy = 30 + unit(rng) * (size - 60);
        const double rx = 10 + unit(rng) * size / 5.0;
        const double ry = 10 + unit(rng) * size / 5.0;
        for (int y = 0; y < size; ++y)
            for (int x = 0; x < size; ++x) {
                const double dx = (x - cx) / rx, dy = (y - cy) / ry;
                if (dx * dx + dy * dy <= 1.0) mask.at(y, x) = 1;
            }
    }
    return mask;
}

void bm_distance_transform(benchmark::State& state) {
    const BinaryMask mask = blob_mask(1);
    const ContourSet contour = morph_boundary(mask);
    for (auto _ : state)
        benchmark::DoNotOptimize(distance_transform(contour, mask.width, mask.height));
}
BENCHMARK(bm_distance_transform);

void bm_canny_contour(benchmark::State& state) {
    const BinaryMask mask = blob_mask(2);
    for (auto _ : state) benchmark::DoNotOptimize(canny_contour(mask));
}
BENCHMARK(bm_canny_contour);

void bm_msssim(benchmark::State& state) {
    const GrayImage a = to_gray(blob_mask(3));
    const GrayImage b = to_gray(blob_mask(4));
    for (auto _ : state) benchmark::DoNotOptimize(msssim(a, b).msssim);
}
BENCHMARK(bm_msssim);

void bm_hashes(benchmark::State& state) {
    const BinaryMask a = blob_mask(5), b = blob_mask(6);
    for (auto _ : state) benchmark::DoNotOptimize(ahs(a, b).ahs);
}
BENCHMARK(bm_hashes);

void bm_boundary_metrics(benchmark::State& state) {
    const BinaryMask a = blob_mask(7), b = blob_mask(8);
    for (auto _ : state) {
        const BoundaryPair bp = boundary_pair(a, b);
        benchmark::DoNotOptimize(mlcd(bp) + hd95(bp) + assd(bp));
    }
}
BENCHMARK(bm_boundary_metrics);

void bm_evaluate_pair(benchmark::State& state) {
    const BinaryMask a = blob_mask(9), b = blob_mask(10);
    const EvalConfig cfg;
    for (auto _ : state) benchmark::DoNotOptimize(evaluate_pair(a, b, cfg));
}
BENCHMARK(bm_evaluate_pair);

} // namespace

BENCHMARK_MAIN();
