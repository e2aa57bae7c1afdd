#include "quanv/neural.hpp"

namespace quanv {

const char* layer_kind_name(LayerKind kind) {
    switch (kind) {
    case LayerKind::Conv2D: return "Conv2D";
    case LayerKind::ReLU: return "ReLU";
    case LayerKind::MaxPool: return "MaxPool";
    case LayerKind::UpSample: return "UpSample";
    case LayerKind::Flatten: return "Flatten";
    case LayerKind::Reshape: return "Reshape";
    case LayerKind::Dense: return "Dense";
    case LayerKind::Tanh: return "Tanh";
    case LayerKind::Sigmoid: return "Sigmoid";
    case LayerKind::Dropout: return "Dropout";
    }
    return "?";
}

LayerKind layer_kind_from_name(const std::string& name) {
    for (int k = 0; k <= static_cast<int>(LayerKind::Dropout); ++k) {
        const auto kind = static_cast<LayerKind>(k);
        if (name == layer_kind_name(kind)) return kind;
    }
    throw data_error("unknown layer kind '" + name + "'");
}

LayerSpec LayerSpec::conv2d(int filters, int kernel, int stride, Padding padding) {
    LayerSpec s;
    s.kind = LayerKind::Conv2D;
    s.filters = filters;
    s.kernel_h = s.kernel_w = kernel;
    s.stride = stride;
    s.padding = padding;
    return s;
}

LayerSpec LayerSpec::relu() { return {LayerKind::ReLU}; }

LayerSpec LayerSpec::max_pool(int kernel, int stride, Padding padding) {
    LayerSpec s;
    s.kind = LayerKind::MaxPool;
    s.kernel_h = s.kernel_w = kernel;
    s.stride = stride;
    s.padding = padding;
    return s;
}

LayerSpec LayerSpec::up_sample(int scale) {
    LayerSpec s;
    s.kind = LayerKind::UpSample;
    s.scale = scale;
    return s;
}

LayerSpec LayerSpec::flatten() { return {LayerKind::Flatten}; }

LayerSpec LayerSpec::reshape(Shape target) {
    LayerSpec s;
    s.kind = LayerKind::Reshape;
    s.target = std::move(target);
    return s;
}

LayerSpec LayerSpec::dense(int units) {
    LayerSpec s;
    s.kind = LayerKind::Dense;
    s.units = units;
    return s;
}

LayerSpec LayerSpec::tanh() { return {LayerKind::Tanh}; }
LayerSpec LayerSpec::sigmoid() { return {LayerKind::Sigmoid}; }

LayerSpec LayerSpec::dropout(double rate) {
    LayerSpec s;
    s.kind = LayerKind::Dropout;
    s.rate = rate;
    return s;
}

namespace {

[[noreturn]] void layer_fail(std::size_t index, LayerKind kind, const std::string& why) {
    throw shape_error("layer " + std::to_string(index) + " (" + layer_kind_name(kind) + "): " + why);
}

std::uint32_t conv_extent(std::uint32_t in, int kernel, int stride, Padding padding,
                          std::size_t index, LayerKind kind) {
    if (kernel < 1 || stride < 1) layer_fail(index, kind, "kernel and stride must be >= 1");
    const auto k = static_cast<std::uint32_t>(kernel);
    const auto s = static_cast<std::uint32_t>(stride);
    if (padding == Padding::Same) {
        return (in + s - 1) / s; // ceil(in / stride)
    }
    if (in < k) {
        layer_fail(index, kind,
                   "kernel " + std::to_string(kernel) + " exceeds input extent " + std::to_string(in) +
                       " with padding none");
    }
    return (in - k) / s + 1;
}

} // namespace

std::vector<Shape> infer_shapes(const NetworkSpec& spec) {
    if (spec.input_shape.empty() || spec.input_shape.size() > 3) {
        throw shape_error("network input must have rank 1..3, got " +
                          shape_to_string(spec.input_shape));
    }
    for (std::uint32_t e : spec.input_shape) {
        if (e == 0) throw shape_error("network input has a zero extent");
    }

    std::vector<Shape> out;
    out.reserve(spec.layers.size());
    Shape cur = spec.input_shape;
    for (std::size_t i = 0; i < spec.layers.size(); ++i) {
        const LayerSpec& layer = spec.layers[i];
        switch (layer.kind) {
        case LayerKind::Conv2D: {
            if (cur.size() != 3) layer_fail(i, layer.kind, "needs H x W x C input, got " + shape_to_string(cur));
            if (layer.filters < 1) layer_fail(i, layer.kind, "needs filters >= 1");
            const std::uint32_t oh = conv_extent(cur[0], layer.kernel_h, layer.stride, layer.padding, i, layer.kind);
            const std::uint32_t ow = conv_extent(cur[1], layer.kernel_w, layer.stride, layer.padding, i, layer.kind);
            cur = {oh, ow, static_cast<std::uint32_t>(layer.filters)};
            break;
        }
        case LayerKind::MaxPool: {
            if (cur.size() != 3) layer_fail(i, layer.kind, "needs H x W x C input, got " + shape_to_string(cur));
            const std::uint32_t oh = conv_extent(cur[0], layer.kernel_h, layer.stride, layer.padding, i, layer.kind);
            const std::uint32_t ow = conv_extent(cur[1], layer.kernel_w, layer.stride, layer.padding, i, layer.kind);
            cur = {oh, ow, cur[2]};
            break;
        }
        case LayerKind::UpSample: {
            if (cur.size() != 3) layer_fail(i, layer.kind, "needs H x W x C input, got " + shape_to_string(cur));
            if (layer.scale < 1) layer_fail(i, layer.kind, "scale must be >= 1");
            const auto f = static_cast<std::uint32_t>(layer.scale);
            cur = {cur[0] * f, cur[1] * f, cur[2]};
            break;
        }
        case LayerKind::Flatten: {
            cur = {static_cast<std::uint32_t>(shape_numel(cur))};
            break;
        }
        case LayerKind::Reshape: {
            if (layer.target.empty() || layer.target.size() > 3) {
                layer_fail(i, layer.kind, "target rank must be 1..3");
            }
            if (shape_numel(layer.target) != shape_numel(cur)) {
                layer_fail(i, layer.kind,
                           "cannot reshape " + shape_to_string(cur) + " (" +
                               std::to_string(shape_numel(cur)) + " values) to " +
                               shape_to_string(layer.target) + " (" +
                               std::to_string(shape_numel(layer.target)) + " values)");
            }
            cur = layer.target;
            break;
        }
        case LayerKind::Dense: {
            if (cur.size() != 1) layer_fail(i, layer.kind, "needs a flat input, got " + shape_to_string(cur));
            if (layer.units < 1) layer_fail(i, layer.kind, "needs units >= 1");
            cur = {static_cast<std::uint32_t>(layer.units)};
            break;
        }
        case LayerKind::Dropout: {
            if (!(layer.rate >= 0.0 && layer.rate < 1.0)) {
                layer_fail(i, layer.kind, "rate must be in [0, 1)");
            }
            break; // shape unchanged
        }
        case LayerKind::ReLU:
        case LayerKind::Tanh:
        case LayerKind::Sigmoid:
            break; // shape unchanged
        }
        out.push_back(cur);
    }
    return out;
}

int bottleneck_layer_index(const NetworkSpec& spec) {
    for (int i = static_cast<int>(spec.layers.size()) - 1; i >= 0; --i) {
        if (spec.layers[static_cast<std::size_t>(i)].kind == LayerKind::Tanh) return i;
    }
    return -1;
}

const char* dataset_name(DatasetKind kind) {
    return kind == DatasetKind::mnist ? "mnist" : "cifar10";
}

DatasetKind dataset_from_name(const std::string& name) {
    if (name == "mnist") return DatasetKind::mnist;
    if (name == "cifar10") return DatasetKind::cifar10;
    throw config_error("unknown dataset '" + name + "' (expected mnist or cifar10)");
}

const char* variant_name(Variant variant) {
    return variant == Variant::classic ? "classic" : "quanv";
}

Variant variant_from_name(const std::string& name) {
    if (name == "classic") return Variant::classic;
    if (name == "quanv") return Variant::quanv;
    throw config_error("unknown variant '" + name + "' (expected classic or quanv)");
}

Shape image_shape(DatasetKind dataset) {
    return dataset == DatasetKind::mnist ? Shape{28, 28, 1} : Shape{32, 32, 3};
}

Shape quanv_map_shape(DatasetKind dataset) {
    return dataset == DatasetKind::mnist ? Shape{7, 7, 16} : Shape{8, 8, 48};
}

int quanv_prefix_layers(DatasetKind /*dataset*/) {
    return 3; // Conv2D + ReLU + MaxPool
}

namespace {

// CIFAR-10 autoencoder, one layer per architecture-table row. The first
// three layers are the block the quantum filter replaces; their output
// (8 x 8 x 48) matches the quanvolved map exactly.
std::vector<LayerSpec> cifar_layers(int bottleneck) {
    return {
        LayerSpec::conv2d(48, 4),          // 32 x 32 x 48
        LayerSpec::relu(),                 //
        LayerSpec::max_pool(4, 4),         // 8 x 8 x 48
        LayerSpec::conv2d(24, 3),          // 8 x 8 x 24
        LayerSpec::relu(),                 //
        LayerSpec::conv2d(12, 2),          // 8 x 8 x 12
        LayerSpec::relu(),                 //
        LayerSpec::max_pool(2, 2),         // 4 x 4 x 12
        LayerSpec::flatten(),              // 192
        LayerSpec::dropout(0.2),           //
        LayerSpec::dense(192),             // 192
        LayerSpec::dense(bottleneck),      // latent
        LayerSpec::tanh(),                 //
        LayerSpec::dense(192),             // 192
        LayerSpec::reshape({4, 4, 12}),    // 4 x 4 x 12
        LayerSpec::conv2d(12, 2),          // 4 x 4 x 12
        LayerSpec::relu(),                 //
        LayerSpec::up_sample(2),           // 8 x 8 x 12
        LayerSpec::conv2d(24, 3),          // 8 x 8 x 24
        LayerSpec::relu(),                 //
        LayerSpec::conv2d(48, 1),          // 8 x 8 x 48
        LayerSpec::relu(),                 //
        LayerSpec::up_sample(4),           // 32 x 32 x 48
        LayerSpec::conv2d(3, 4),           // 32 x 32 x 3
        LayerSpec::sigmoid(),              //
    };
}

// Same pattern scaled to 28 x 28 grayscale. The replaceable block pools
// 4 x 4 so its output (7 x 7 x 16) matches the quanvolved map; 7 does
// not halve cleanly, so the funnel keeps 7 x 7 and the decoder jumps
// back with a single 4x upsample.
std::vector<LayerSpec> mnist_layers(int bottleneck) {
    return {
        LayerSpec::conv2d(16, 4),          // 28 x 28 x 16
        LayerSpec::relu(),                 //
        LayerSpec::max_pool(4, 4),         // 7 x 7 x 16
        LayerSpec::conv2d(12, 3),          // 7 x 7 x 12
        LayerSpec::relu(),                 //
        LayerSpec::conv2d(8, 2),           // 7 x 7 x 8
        LayerSpec::relu(),                 //
        LayerSpec::flatten(),              // 392
        LayerSpec::dropout(0.2),           //
        LayerSpec::dense(392),             // 392
        LayerSpec::dense(bottleneck),      // latent
        LayerSpec::tanh(),                 //
        LayerSpec::dense(392),             // 392
        LayerSpec::reshape({7, 7, 8}),     // 7 x 7 x 8
        LayerSpec::conv2d(8, 2),           // 7 x 7 x 8
        LayerSpec::relu(),                 //
        LayerSpec::conv2d(12, 3),          // 7 x 7 x 12
        LayerSpec::relu(),                 //
        LayerSpec::conv2d(16, 1),          // 7 x 7 x 16
        LayerSpec::relu(),                 //
        LayerSpec::up_sample(4),           // 28 x 28 x 16
        LayerSpec::conv2d(1, 4),           // 28 x 28 x 1
        LayerSpec::sigmoid(),              //
    };
}

} // namespace

NetworkSpec autoencoder_spec(DatasetKind dataset, Variant variant, int bottleneck) {
    if (bottleneck < 1) throw config_error("bottleneck width must be >= 1");

    NetworkSpec spec;
    spec.bottleneck_width = bottleneck;
    spec.layers = dataset == DatasetKind::mnist ? mnist_layers(bottleneck) : cifar_layers(bottleneck);
    if (variant == Variant::classic) {
        spec.input_shape = image_shape(dataset);
    } else {
        spec.input_shape = quanv_map_shape(dataset);
        const auto drop = static_cast<std::size_t>(quanv_prefix_layers(dataset));
        spec.layers.erase(spec.layers.begin(), spec.layers.begin() + static_cast<std::ptrdiff_t>(drop));
    }
    infer_shapes(spec); // fail fast on an inconsistent architecture
    return spec;
}

} // namespace quanv
