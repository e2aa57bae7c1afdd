#include <benchmark/benchmark.h>

#include "quanv/network.hpp"
#include "quanv/neural.hpp"
#include "quanv/rng.hpp"

namespace {

using namespace quanv;

struct Bench {
    Network net;
    DArray input;

    Bench(DatasetKind dataset, Variant variant)
        : net(autoencoder_spec(dataset, variant, 64)),
          input(variant == Variant::classic ? image_shape(dataset) : quanv_map_shape(dataset)) {
        Rng rng(1);
        net.init_weights(rng);
        for (auto& x : input.v) x = rng.next_unit();
    }
};

void forward_eval(benchmark::State& state) {
    Bench b(static_cast<DatasetKind>(state.range(0)), static_cast<Variant>(state.range(1)));
    for (auto _ : state) {
        auto out = b.net.forward(b.input);
        benchmark::DoNotOptimize(out.v.data());
    }
}
BENCHMARK(forward_eval)
    ->Unit(benchmark::kMillisecond)
    ->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"dataset", "variant"});

// One full optimizer step on a single example: traced forward, loss
// gradient, backward, Adam update.
void training_step(benchmark::State& state) {
    Bench b(static_cast<DatasetKind>(state.range(0)), static_cast<Variant>(state.range(1)));
    DArray target = b.net.forward(b.input);
    Rng rng(2);
    AdamOptimizer adam;
    for (auto _ : state) {
        Network::Trace trace;
        auto pred = b.net.forward(b.input, RunMode::train, &trace, &rng);
        auto grad = bce_loss_grad(pred, target);
        auto grads = b.net.make_zero_gradients();
        b.net.backward(trace, grad, grads);
        adam.step(b.net, grads);
        benchmark::DoNotOptimize(b.net.states().data());
    }
}
BENCHMARK(training_step)
    ->Unit(benchmark::kMillisecond)
    ->ArgsProduct({{0, 1}, {0, 1}})
    ->ArgNames({"dataset", "variant"});

} // namespace
