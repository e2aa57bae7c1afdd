#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "quanv/circuit.hpp"
#include "quanv/qsim.hpp"

namespace {

using namespace quanv;

// Rotation on the lowest wire: the worst-cache-stride pair pattern.
void rotation_low_wire(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector sv(n);
    for (auto _ : state) {
        sv.apply_ry(0, 0.37);
        benchmark::DoNotOptimize(sv.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(rotation_low_wire)->DenseRange(8, 16, 4);

// Rotation on the highest wire: pairs are half a vector apart.
void rotation_high_wire(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector sv(n);
    for (auto _ : state) {
        sv.apply_ry(n - 1, 0.37);
        benchmark::DoNotOptimize(sv.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(rotation_high_wire)->DenseRange(8, 16, 4);

void cnot_adjacent(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector sv(n);
    sv.apply_ry(0, 0.37);
    for (auto _ : state) {
        sv.apply_cnot(0, 1);
        benchmark::DoNotOptimize(sv.amplitudes().data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(cnot_adjacent)->DenseRange(8, 16, 4);

void readout_all_wires(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    StateVector sv(n);
    for (int w = 0; w < n; ++w) sv.apply_ry(w, 0.1 * (w + 1));
    for (auto _ : state) {
        auto z = sv.expectation_z_all();
        benchmark::DoNotOptimize(z.data());
    }
    state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(readout_all_wires)->DenseRange(8, 16, 4);

// Encode + full gate list + readout for the default filter: the unit of
// work behind every output pixel of the quantum convolution.
void filter_evaluation(benchmark::State& state) {
    const auto circuit = generate_random_circuit(16, static_cast<int>(state.range(0)), 42);
    std::vector<double> angles(16);
    for (int i = 0; i < 16; ++i) angles[i] = 0.19 * i;
    for (auto _ : state) {
        auto z = run_circuit(circuit, angles);
        benchmark::DoNotOptimize(z.data());
    }
    state.SetLabel(std::to_string(circuit.gates.size()) + " gates");
}
BENCHMARK(filter_evaluation)->Unit(benchmark::kMillisecond)->DenseRange(1, 4, 1);

} // namespace

BENCHMARK_MAIN();
