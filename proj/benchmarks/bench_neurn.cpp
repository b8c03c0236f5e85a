#include <benchmark/benchmark.h>

#include "neurnkit/neurn.hpp"
#include "neurnkit/rng.hpp"

using namespace neurnkit;

namespace {

Image random_image(std::size_t side, std::size_t channels, std::uint64_t seed) {
    Rng rng(seed);
    Image img(side, side, channels);
    for (double& v : img.pixels()) v = rng.uniform();
    return img;
}

void BM_transform(benchmark::State& state) {
    const auto side = static_cast<std::size_t>(state.range(0));
    NeurnConfig cfg;
    cfg.k = static_cast<int>(state.range(1));
    const Image img = random_image(side, 1, 42);
    for (auto _ : state) {
        benchmark::DoNotOptimize(transform(img, cfg));
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(img.pixel_count()));
}

void BM_transform_batch_mnist_sized(benchmark::State& state) {
    const auto count = static_cast<std::size_t>(state.range(0));
    std::vector<Image> batch;
    batch.reserve(count);
    for (std::size_t i = 0; i < count; ++i) batch.push_back(random_image(28, 1, i));
    const NeurnConfig cfg;
    for (auto _ : state) {
        benchmark::DoNotOptimize(transform_batch(batch, cfg));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(count));
}

} // namespace

BENCHMARK(BM_transform)
    ->Args({28, 3})
    ->Args({28, 7})
    ->Args({64, 3})
    ->Args({64, 7})
    ->Args({256, 3});
BENCHMARK(BM_transform_batch_mnist_sized)->Arg(100)->Arg(1000);
