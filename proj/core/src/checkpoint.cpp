#include "quanv/checkpoint.hpp"

#include <cstdio>
#include <stdexcept>

#include "quanv/hash.hpp"
#include "quanv/manifest.hpp"
#include "quanv/tensor_io.hpp"

namespace quanv {

namespace {

constexpr const char* checkpoint_format = "quanv-checkpoint-v1";

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string weights_file(std::size_t layer) {
    return "layer_" + std::to_string(layer) + ".weights.qtn";
}

std::string bias_file(std::size_t layer) {
    return "layer_" + std::to_string(layer) + ".bias.qtn";
}

std::uint64_t parse_u64(const Manifest& m, const std::string& key) {
    try {
        return std::stoull(m.get(key));
    } catch (const std::logic_error&) {
        throw data_error("manifest key '" + key + "' is not an integer");
    }
}

double parse_f64(const Manifest& m, const std::string& key) {
    try {
        return std::stod(m.get(key));
    } catch (const std::logic_error&) {
        throw data_error("manifest key '" + key + "' is not a number");
    }
}

} // namespace

void save_checkpoint(const std::filesystem::path& dir, const Network& net,
                     const CheckpointMeta& meta) {
    std::filesystem::create_directories(dir);

    Manifest m;
    m.set("format", checkpoint_format);
    m.set("dataset", dataset_name(meta.dataset));
    m.set("variant", variant_name(meta.variant));
    m.set("bottleneck", std::to_string(meta.bottleneck));
    m.set("weight_seed", std::to_string(meta.weight_seed));
    m.set("epochs", std::to_string(meta.train.epochs));
    m.set("batch_size", std::to_string(meta.train.batch_size));
    m.set("adam_lr", format_double(meta.train.adam.lr));
    m.set("adam_beta1", format_double(meta.train.adam.beta1));
    m.set("adam_beta2", format_double(meta.train.adam.beta2));
    m.set("adam_epsilon", format_double(meta.train.adam.epsilon));
    m.set("config_hash", meta.config_hash);

    if (meta.variant == Variant::quanv) {
        m.set("quanv_patch", std::to_string(meta.quanv.patch_size));
        m.set("quanv_stride", std::to_string(meta.quanv.stride));
        m.set("circuit_file", "circuit.txt");
        m.set("circuit_seed", std::to_string(meta.quanv.circuit.seed));
        m.set("circuit_depth", std::to_string(meta.quanv.circuit.depth));
        m.set("circuit_qubits", std::to_string(meta.quanv.circuit.num_qubits));
        save_circuit(meta.quanv.circuit, dir / "circuit.txt");
    }

    const auto& layers = net.spec().layers;
    const auto& shapes = net.layer_shapes();
    m.set("layer_count", std::to_string(layers.size()));
    for (std::size_t i = 0; i < layers.size(); ++i) {
        m.set("layer_" + std::to_string(i),
              std::string(layer_kind_name(layers[i].kind)) + " -> " + shape_to_string(shapes[i]));
    }

    for (std::size_t i = 0; i < net.states().size(); ++i) {
        const LayerState& st = net.states()[i];
        if (!st.trainable()) continue;
        write_tensor(st.weights.to_tensor(), dir / weights_file(i));
        write_tensor(st.bias.to_tensor(), dir / bias_file(i));
    }

    m.save(dir / "manifest.txt");
}

Checkpoint load_checkpoint(const std::filesystem::path& dir) {
    const Manifest m = Manifest::load(dir / "manifest.txt");
    if (m.get("format") != checkpoint_format) {
        throw data_error(dir.string() + ": unknown checkpoint format '" + m.get("format") + "'");
    }

    CheckpointMeta meta;
    meta.dataset = dataset_from_name(m.get("dataset"));
    meta.variant = variant_from_name(m.get("variant"));
    meta.bottleneck = static_cast<int>(parse_u64(m, "bottleneck"));
    meta.weight_seed = parse_u64(m, "weight_seed");
    meta.train.epochs = static_cast<int>(parse_u64(m, "epochs"));
    meta.train.batch_size = static_cast<int>(parse_u64(m, "batch_size"));
    meta.train.seed = meta.weight_seed;
    meta.train.adam.lr = parse_f64(m, "adam_lr");
    meta.train.adam.beta1 = parse_f64(m, "adam_beta1");
    meta.train.adam.beta2 = parse_f64(m, "adam_beta2");
    meta.train.adam.epsilon = parse_f64(m, "adam_epsilon");
    meta.config_hash = m.get_or("config_hash", "");

    if (meta.variant == Variant::quanv) {
        meta.quanv.patch_size = static_cast<int>(parse_u64(m, "quanv_patch"));
        meta.quanv.stride = static_cast<int>(parse_u64(m, "quanv_stride"));
        meta.quanv.circuit = load_circuit(dir / m.get("circuit_file"));
        meta.quanv.validate();
    }

    Checkpoint ckpt{meta, Network(autoencoder_spec(meta.dataset, meta.variant, meta.bottleneck))};

    auto& states = ckpt.net.states();
    for (std::size_t i = 0; i < states.size(); ++i) {
        LayerState& st = states[i];
        if (!st.trainable()) continue;
        const Tensor w = read_tensor(dir / weights_file(i));
        const Tensor b = read_tensor(dir / bias_file(i));
        if (w.shape != st.weights.shape || b.shape != st.bias.shape) {
            throw state_error("checkpoint layer " + std::to_string(i) + " parameters " +
                              shape_to_string(w.shape) + " do not fit the architecture (wanted " +
                              shape_to_string(st.weights.shape) + ")");
        }
        st.weights = DArray::from_tensor(w);
        st.bias = DArray::from_tensor(b);
    }
    return ckpt;
}

std::string config_hash_hex(const std::string& canonical) {
    return to_hex(fnv1a(canonical));
}

} // namespace quanv
