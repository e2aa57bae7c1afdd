#include <benchmark/benchmark.h>

#include <cstdint>

#include "quanv/quanvolve.hpp"
#include "quanv/rng.hpp"
#include "quanv/tensor.hpp"

namespace {

using namespace quanv;

Tensor random_image(Shape shape, std::uint64_t seed) {
    Tensor t(std::move(shape));
    Rng rng(seed);
    for (auto& p : t.data) p = static_cast<float>(rng.next_unit());
    return t;
}

QuanvConfig default_config() {
    QuanvConfig cfg;
    cfg.circuit = generate_random_circuit(16, 2, 42);
    return cfg;
}

void patch_encoding(benchmark::State& state) {
    const auto image = random_image({4, 4}, 7);
    for (auto _ : state) {
        auto angles = encode_patch(image.data);
        benchmark::DoNotOptimize(angles.data());
    }
}
BENCHMARK(patch_encoding);

// 28x28x1 -> 7x7x16: 49 filter evaluations per image.
void grayscale_image(benchmark::State& state) {
    const auto cfg = default_config();
    const auto image = random_image({28, 28, 1}, 11);
    const int workers = static_cast<int>(state.range(0));
    std::uint64_t evals = 0;
    for (auto _ : state) {
        auto out = quanvolve_image(image, cfg, workers, &evals);
        benchmark::DoNotOptimize(out.data.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(evals));
}
BENCHMARK(grayscale_image)->Unit(benchmark::kMillisecond)->Arg(1)->Arg(0);

// 32x32x3 -> 8x8x48: 192 filter evaluations per image.
void rgb_image(benchmark::State& state) {
    const auto cfg = default_config();
    const auto image = random_image({32, 32, 3}, 13);
    const int workers = static_cast<int>(state.range(0));
    std::uint64_t evals = 0;
    for (auto _ : state) {
        auto out = quanvolve_image(image, cfg, workers, &evals);
        benchmark::DoNotOptimize(out.data.data());
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(evals));
}
BENCHMARK(rgb_image)->Unit(benchmark::kMillisecond)->Arg(1)->Arg(0);

} // namespace
