#pragma once

#include <cstdint>
#include <vector>

#include "quanv/neural.hpp"
#include "quanv/rng.hpp"

namespace quanv {

// Activations and parameters are kept in double precision internally;
// float32 is only the at-rest format (tensor files, checkpoints).
struct DArray {
    Shape shape;
    std::vector<double> v;

    DArray() = default;
    explicit DArray(Shape s) : shape(std::move(s)), v(shape_numel(shape), 0.0) {}
    DArray(Shape s, std::vector<double> d);

    std::size_t numel() const { return v.size(); }
    bool empty() const { return v.empty(); }

    double& at(std::size_t h, std::size_t w, std::size_t c) {
        return v[(h * shape[1] + w) * shape[2] + c];
    }
    const double& at(std::size_t h, std::size_t w, std::size_t c) const {
        return v[(h * shape[1] + w) * shape[2] + c];
    }

    static DArray from_tensor(const Tensor& t);
    Tensor to_tensor() const;
};

enum class RunMode : std::uint8_t { train, eval };

/// Weights + bias for one trainable layer, plus its Adam moments.
/// Non-trainable layers keep everything empty.
struct LayerState {
    DArray weights;
    DArray bias;
    DArray m_weights, v_weights;
    DArray m_bias, v_bias;

    bool trainable() const { return !weights.empty(); }
};

struct Gradients {
    std::vector<DArray> weights;
    std::vector<DArray> bias;
};

// Runtime network: a shape-checked spec plus per-layer state. forward()
// in train mode records everything backward() needs; the caches are kept
// outside the network so concurrent evaluations cannot alias.
class Network {
public:
    struct Trace {
        std::vector<DArray> acts;                      // acts[0] = input, acts[i+1] = layer i output
        std::vector<std::vector<std::uint32_t>> argmax; // indexed by layer, empty unless MaxPool
        std::vector<std::vector<double>> dropout_scale; // indexed by layer, empty unless Dropout
    };

    explicit Network(NetworkSpec spec);

    const NetworkSpec& spec() const { return spec_; }
    const std::vector<Shape>& layer_shapes() const { return shapes_; }
    Shape output_shape() const { return shapes_.empty() ? spec_.input_shape : shapes_.back(); }

    /// Seeded uniform fan-in init: W ~ U(-sqrt(6/fan_in), +sqrt(6/fan_in)), b = 0.
    void init_weights(Rng& rng);

    /// Eval-mode forward (dropout off).
    DArray forward(const DArray& input) const;

    /// Forward with explicit mode. Train mode needs `rng` when the
    /// network contains dropout, and `trace` to enable backward().
    DArray forward(const DArray& input, RunMode mode, Trace* trace, Rng* rng) const;

    /// Accumulates parameter gradients into `grads` (shaped like the
    /// parameters) given the loss gradient at the output.
    void backward(const Trace& trace, const DArray& output_grad, Gradients& grads) const;

    Gradients make_zero_gradients() const;

    std::vector<LayerState>& states() { return states_; }
    const std::vector<LayerState>& states() const { return states_; }

private:
    NetworkSpec spec_;
    std::vector<Shape> shapes_;
    std::vector<LayerState> states_;
};

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

// Bias-corrected Adam over all trainable layers of a network; one step
// counter shared across layers. Throws numeric_error on non-finite
// gradients.
class AdamOptimizer {
public:
    explicit AdamOptimizer(AdamConfig cfg = {}) : cfg_(cfg) {}

    void step(Network& net, const Gradients& grads);
    std::int64_t step_count() const { return t_; }
    const AdamConfig& config() const { return cfg_; }

private:
    AdamConfig cfg_;
    std::int64_t t_ = 0;
};

/// Mean binary cross-entropy, predictions clamped to [eps, 1-eps] with
/// eps = 1e-7. Shapes must match exactly.
double bce_loss(const DArray& pred, const DArray& target);

/// d(bce_loss)/d(pred); zero where the clamp is active.
DArray bce_loss_grad(const DArray& pred, const DArray& target);

inline constexpr double bce_epsilon = 1e-7;

} // namespace quanv
