#pragma once

#include <string>
#include <vector>

#include "quanv/tensor.hpp"

namespace quanv {

enum class LayerKind : std::uint8_t {
    Conv2D,
    ReLU,
    MaxPool,
    UpSample,
    Flatten,
    Reshape,
    Dense,
    Tanh,
    Sigmoid,
    Dropout,
};

enum class Padding : std::uint8_t { Same, None };

const char* layer_kind_name(LayerKind kind);
LayerKind layer_kind_from_name(const std::string& name);

// Declarative layer description. Only the fields relevant to `kind` are
// meaningful; factory functions keep the rest at defaults so specs
// compare and serialize cleanly.
struct LayerSpec {
    LayerKind kind = LayerKind::ReLU;
    int filters = 0;           // Conv2D
    int kernel_h = 0;          // Conv2D, MaxPool
    int kernel_w = 0;
    int stride = 1;            // Conv2D, MaxPool
    Padding padding = Padding::Same;
    int scale = 2;             // UpSample (nearest-neighbor factor)
    int units = 0;             // Dense
    double rate = 0.0;         // Dropout, in [0, 1)
    Shape target;              // Reshape

    static LayerSpec conv2d(int filters, int kernel, int stride = 1,
                            Padding padding = Padding::Same);
    static LayerSpec relu();
    static LayerSpec max_pool(int kernel, int stride, Padding padding = Padding::Same);
    static LayerSpec up_sample(int scale);
    static LayerSpec flatten();
    static LayerSpec reshape(Shape target);
    static LayerSpec dense(int units);
    static LayerSpec tanh();
    static LayerSpec sigmoid();
    static LayerSpec dropout(double rate);

    bool operator==(const LayerSpec&) const = default;
};

struct NetworkSpec {
    Shape input_shape;
    std::vector<LayerSpec> layers;
    int bottleneck_width = 0; // width of the tanh bottleneck, 0 if none

    bool operator==(const NetworkSpec&) const = default;
};

/// Static shape check. Returns the output shape of every layer
/// (result[i] is layer i's output; result.size() == layers.size()).
/// Throws shape_error naming the offending layer index if any two
/// consecutive layers do not compose.
std::vector<Shape> infer_shapes(const NetworkSpec& spec);

/// Index of the latent layer (the last Tanh); -1 when the network has none.
int bottleneck_layer_index(const NetworkSpec& spec);

enum class DatasetKind : std::uint8_t { mnist, cifar10 };
enum class Variant : std::uint8_t { classic, quanv };

const char* dataset_name(DatasetKind kind);
DatasetKind dataset_from_name(const std::string& name);
const char* variant_name(Variant variant);
Variant variant_from_name(const std::string& name);

/// Spatial shape of a dataset image: 28x28x1 or 32x32x3.
Shape image_shape(DatasetKind dataset);

/// Shape of the fixed quantum layer's output for the default 4x4/stride-4
/// filter: 7x7x16 for MNIST, 8x8x48 for CIFAR-10.
Shape quanv_map_shape(DatasetKind dataset);

/// The two autoencoder architectures. The classic variant starts from the
/// raw image; the quanv variant consumes the pre-computed quantum-filter
/// map and is exactly the classic network minus its leading
/// conv/relu/pool block. Both reconstruct the raw image.
NetworkSpec autoencoder_spec(DatasetKind dataset, Variant variant, int bottleneck);

/// Number of leading layers the quanv variant drops from the classic one.
int quanv_prefix_layers(DatasetKind dataset);

} // namespace quanv
