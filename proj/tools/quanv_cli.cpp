// Subcommand CLI wiring the pipeline: quanvolve precomputes the quantum
// feature maps into a cache, train fits autoencoders from raw images or
// cached maps, reconstruct and latent export figures' raw material from
// a checkpoint. Every artifact gets a manifest naming the seeds and the
// config hash that produced it.

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "quanv/checkpoint.hpp"
#include "quanv/data.hpp"
#include "quanv/hash.hpp"
#include "quanv/image_io.hpp"
#include "quanv/manifest.hpp"
#include "quanv/quanvolve.hpp"
#include "quanv/tensor_io.hpp"
#include "quanv/train.hpp"

namespace {

using namespace quanv;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

DatasetHandle load_dataset(DatasetKind kind, const std::filesystem::path& data_dir,
                           const std::string& split) {
    return kind == DatasetKind::mnist ? load_mnist(data_dir, split)
                                      : load_cifar10(data_dir, split);
}

/// --limit keeps the first n images (0 keeps all), so separate commands
/// given the same flags see the same bytes and agree on cache keys.
DatasetHandle limit_first(DatasetHandle h, std::size_t n) {
    const std::size_t size = h.images.shape[0];
    if (n == 0 || n == size) return h;
    if (n > size) {
        throw config_error("--limit " + std::to_string(n) + " exceeds the " +
                           std::to_string(size) + " available images");
    }
    const std::size_t item =
        shape_numel({h.images.shape[1], h.images.shape[2], h.images.shape[3]});
    std::vector<float> pixels(h.images.data.begin(),
                              h.images.data.begin() + static_cast<std::ptrdiff_t>(n * item));
    h.images = Tensor({static_cast<std::uint32_t>(n), h.images.shape[1], h.images.shape[2],
                       h.images.shape[3]},
                      std::move(pixels));
    h.labels.resize(n);
    return h;
}

struct CircuitFlags {
    int patch = 4;
    int stride = 4;
    int depth = 2;
    std::uint64_t seed = 42;
    std::string circuit_file; // overrides generation when set
};

void add_circuit_flags(CLI::App& cmd, CircuitFlags& f) {
    cmd.add_option("--patch", f.patch, "Window side length")->capture_default_str();
    cmd.add_option("--stride", f.stride, "Window stride")->capture_default_str();
    cmd.add_option("--depth", f.depth, "Random circuit depth")->capture_default_str();
    cmd.add_option("--seed", f.seed, "Random circuit seed")->capture_default_str();
    cmd.add_option("--circuit", f.circuit_file, "Load the filter circuit from a file instead");
}

QuanvConfig make_quanv_config(const CircuitFlags& f) {
    QuanvConfig cfg;
    cfg.patch_size = f.patch;
    cfg.stride = f.stride;
    cfg.circuit = f.circuit_file.empty()
                      ? generate_random_circuit(f.patch * f.patch, f.depth, f.seed)
                      : load_circuit(f.circuit_file);
    cfg.validate();
    return cfg;
}

// ---------------------------------------------------------------- quanvolve

struct QuanvolveArgs {
    std::string dataset;
    std::string data_dir;
    std::string split = "train";
    std::string cache_dir = "cache";
    std::uint64_t limit = 0;
    int workers = 1;
    CircuitFlags circuit;
};

int run_quanvolve(const QuanvolveArgs& a) {
    const DatasetKind kind = dataset_from_name(a.dataset);
    const QuanvConfig cfg = make_quanv_config(a.circuit);

    DatasetHandle data = limit_first(load_dataset(kind, a.data_dir, a.split), a.limit);
    const std::string dataset_id = a.dataset + "-" + a.split;

    const QuanvolveResult result =
        quanvolve_dataset(data.images, cfg, dataset_id, a.cache_dir, a.workers);

    save_circuit(cfg.circuit, std::filesystem::path(a.cache_dir) / (result.key_hex + ".circuit.txt"));

    const std::string canonical = "quanvolve dataset=" + dataset_id +
                                  " limit=" + std::to_string(a.limit) + "\n" + cfg.serialize();
    Manifest m;
    m.set("command", "quanvolve");
    m.set("dataset", a.dataset);
    m.set("split", a.split);
    m.set("limit", std::to_string(a.limit));
    m.set("images", shape_to_string(data.images.shape));
    m.set("output", shape_to_string(result.tensor.shape));
    m.set("patch", std::to_string(cfg.patch_size));
    m.set("stride", std::to_string(cfg.stride));
    m.set("circuit_seed", std::to_string(cfg.circuit.seed));
    m.set("circuit_depth", std::to_string(cfg.circuit.depth));
    m.set("circuit_qubits", std::to_string(cfg.circuit.num_qubits));
    m.set("circuit_file", result.key_hex + ".circuit.txt");
    m.set("prng", Rng::algorithm);
    m.set("cache_key", result.key_hex);
    m.set("config_hash", config_hash_hex(canonical));
    m.save(std::filesystem::path(a.cache_dir) / (result.key_hex + ".manifest.txt"));

    std::cout << "cache key   " << result.key_hex << "\n"
              << "cache file  " << result.cache_file.string() << "\n"
              << "cache " << (result.cache_hit ? "hit" : "miss")
              << (result.recovered_from_corruption ? " (corrupt file recomputed)" : "") << "\n"
              << "circuit evals " << result.circuit_evals << "\n"
              << "output shape  " << shape_to_string(result.tensor.shape) << "\n";
    return 0;
}

// -------------------------------------------------------------------- train

struct TrainArgs {
    std::string variant;
    std::string dataset;
    std::string data_dir;
    std::string split = "train";
    std::string cache_dir = "cache";
    std::string out_dir = "out";
    int bottleneck = 2;
    int epochs = 10;
    int batch = 32;
    int seeds = 3;
    std::uint64_t limit = 0;
    int workers = 1;
    CircuitFlags circuit;
};

int run_train(const TrainArgs& a) {
    const DatasetKind kind = dataset_from_name(a.dataset);
    const Variant variant = variant_from_name(a.variant);
    if (a.bottleneck != 2 && a.bottleneck != 64 && a.bottleneck != 128) {
        throw config_error("--bottleneck must be 2, 64 or 128, got " + std::to_string(a.bottleneck));
    }
    if (a.seeds < 1) throw config_error("--seeds must be >= 1");

    DatasetHandle data = limit_first(load_dataset(kind, a.data_dir, a.split), a.limit);
    const std::vector<DArray> targets = unbatch(data.images);

    std::vector<DArray> inputs;
    QuanvConfig qcfg;
    std::string cache_key;
    if (variant == Variant::quanv) {
        qcfg = make_quanv_config(a.circuit);
        const std::string dataset_id = a.dataset + "-" + a.split;
        cache_key = quanvolve_cache_key(data.images, qcfg, dataset_id);
        const auto cache_file = std::filesystem::path(a.cache_dir) / (cache_key + ".qtn");
        if (!std::filesystem::exists(cache_file)) {
            throw data_error("no cached quanvolved tensors at " + cache_file.string() +
                             "; run `quanv quanvolve --dataset " + a.dataset + " --split " +
                             a.split + " --limit " + std::to_string(a.limit) +
                             " ...` with the same circuit flags first");
        }
        inputs = unbatch(read_tensor(cache_file));
    } else {
        inputs = targets;
    }

    ExperimentConfig ecfg;
    ecfg.dataset = kind;
    ecfg.variant = variant;
    ecfg.bottleneck = a.bottleneck;
    ecfg.train.epochs = a.epochs;
    ecfg.train.batch_size = a.batch;
    for (int s = 0; s < a.seeds; ++s) ecfg.seeds.push_back(static_cast<std::uint64_t>(s));

    const ExperimentResult result = run_experiment(ecfg, inputs, targets);

    std::filesystem::create_directories(a.out_dir);
    const std::filesystem::path out_dir(a.out_dir);
    write_loss_csv(out_dir / "runrecord.csv", result.runs);

    std::string canonical = "train dataset=" + a.dataset + " split=" + a.split +
                            " variant=" + a.variant + " bottleneck=" + std::to_string(a.bottleneck) +
                            " epochs=" + std::to_string(a.epochs) + " batch=" + std::to_string(a.batch) +
                            " seeds=" + std::to_string(a.seeds) + " limit=" + std::to_string(a.limit);
    if (variant == Variant::quanv) canonical += "\n" + qcfg.serialize();
    const std::string config_hash = config_hash_hex(canonical);

    for (std::size_t i = 0; i < result.runs.size(); ++i) {
        CheckpointMeta meta;
        meta.dataset = kind;
        meta.variant = variant;
        meta.bottleneck = a.bottleneck;
        meta.weight_seed = result.runs[i].seed;
        meta.train = ecfg.train;
        meta.train.seed = result.runs[i].seed;
        if (variant == Variant::quanv) meta.quanv = qcfg;
        meta.config_hash = config_hash;
        save_checkpoint(out_dir / ("seed_" + std::to_string(result.runs[i].seed)),
                        result.nets[i], meta);
    }

    Manifest m;
    m.set("command", "train");
    m.set("dataset", a.dataset);
    m.set("split", a.split);
    m.set("variant", a.variant);
    m.set("bottleneck", std::to_string(a.bottleneck));
    m.set("epochs", std::to_string(a.epochs));
    m.set("batch_size", std::to_string(a.batch));
    m.set("limit", std::to_string(a.limit));
    std::string seed_list;
    for (const RunRecord& r : result.runs) {
        if (!seed_list.empty()) seed_list += ",";
        seed_list += std::to_string(r.seed);
    }
    m.set("weight_seeds", seed_list);
    m.set("prng", Rng::algorithm);
    if (variant == Variant::quanv) {
        m.set("circuit_seed", std::to_string(qcfg.circuit.seed));
        m.set("cache_key", cache_key);
    }
    m.set("config_hash", config_hash);
    double total_ms = 0.0;
    for (const RunRecord& r : result.runs)
        for (double ms : r.epoch_wall_ms) total_ms += ms;
    m.set("wall_ms_total", format_double(total_ms));
    m.save(out_dir / "manifest.txt");

    std::vector<double> mean, stddev;
    epoch_stats(result.runs, mean, stddev);
    for (std::size_t e = 0; e < mean.size(); ++e) {
        std::cout << "epoch " << e << "  mean_loss " << format_double(mean[e]) << "  std "
                  << format_double(stddev[e]) << "\n";
    }
    std::cout << "runrecord " << (out_dir / "runrecord.csv").string() << "\n";
    return 0;
}

// -------------------------------------------------------------- reconstruct

struct ReconstructArgs {
    std::string checkpoint;
    std::string data_dir;
    std::string split = "test";
    std::string out_dir = "recon";
    std::uint64_t n = 10;
    int workers = 1;
};

int run_reconstruct(const ReconstructArgs& a) {
    const Checkpoint ckpt = load_checkpoint(a.checkpoint);
    DatasetHandle data = limit_first(load_dataset(ckpt.meta.dataset, a.data_dir, a.split), a.n);

    std::filesystem::create_directories(a.out_dir);
    const std::filesystem::path out_dir(a.out_dir);
    const char* ext = nullptr;

    for (std::uint32_t i = 0; i < data.images.shape[0]; ++i) {
        const Tensor original = data.images.slice(i);
        const Tensor input = ckpt.meta.variant == Variant::quanv
                                 ? quanvolve_image(original, ckpt.meta.quanv, a.workers)
                                 : original;
        const Tensor recon = ckpt.net.forward(DArray::from_tensor(input)).to_tensor();
        if (!ext) ext = image_extension(original);
        write_image(original, out_dir / ("orig_" + std::to_string(i) + ext));
        write_image(recon, out_dir / ("recon_" + std::to_string(i) + ext));
    }

    Manifest m;
    m.set("command", "reconstruct");
    m.set("checkpoint", a.checkpoint);
    m.set("split", a.split);
    m.set("count", std::to_string(data.images.shape[0]));
    m.set("weight_seed", std::to_string(ckpt.meta.weight_seed));
    if (ckpt.meta.variant == Variant::quanv) {
        m.set("circuit_seed", std::to_string(ckpt.meta.quanv.circuit.seed));
    }
    m.set("config_hash", ckpt.meta.config_hash);
    m.save(out_dir / "manifest.txt");

    std::cout << "wrote " << 2 * data.images.shape[0] << " images to " << out_dir.string() << "\n";
    return 0;
}

// ------------------------------------------------------------------- latent

struct LatentArgs {
    std::string checkpoint;
    std::string data_dir;
    std::string split = "test";
    std::string out_csv = "latent.csv";
    std::uint64_t limit = 0;
    int workers = 1;
};

int run_latent(const LatentArgs& a) {
    const Checkpoint ckpt = load_checkpoint(a.checkpoint);
    const int bidx = bottleneck_layer_index(ckpt.net.spec());
    if (bidx < 0) throw state_error("checkpoint network has no tanh bottleneck");

    DatasetHandle data = limit_first(load_dataset(ckpt.meta.dataset, a.data_dir, a.split), a.limit);

    std::string out = "label";
    const int width = ckpt.net.spec().bottleneck_width;
    for (int d = 1; d <= width; ++d) out += ",z_" + std::to_string(d);
    out += "\n";

    Network::Trace trace;
    for (std::uint32_t i = 0; i < data.images.shape[0]; ++i) {
        const Tensor original = data.images.slice(i);
        const Tensor input = ckpt.meta.variant == Variant::quanv
                                 ? quanvolve_image(original, ckpt.meta.quanv, a.workers)
                                 : original;
        ckpt.net.forward(DArray::from_tensor(input), RunMode::eval, &trace, nullptr);
        const DArray& z = trace.acts[static_cast<std::size_t>(bidx) + 1];
        out += std::to_string(data.labels[i]);
        for (double v : z.v) out += "," + format_double(v);
        out += "\n";
    }

    std::FILE* f = std::fopen(a.out_csv.c_str(), "wb");
    if (!f) throw data_error("cannot write " + a.out_csv);
    const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
    if (written != out.size()) throw data_error("short write to " + a.out_csv);

    const auto manifest_path = std::filesystem::path(a.out_csv).string() + ".manifest.txt";
    Manifest m;
    m.set("command", "latent");
    m.set("checkpoint", a.checkpoint);
    m.set("split", a.split);
    m.set("rows", std::to_string(data.images.shape[0]));
    m.set("bottleneck", std::to_string(width));
    m.set("weight_seed", std::to_string(ckpt.meta.weight_seed));
    if (ckpt.meta.variant == Variant::quanv) {
        m.set("circuit_seed", std::to_string(ckpt.meta.quanv.circuit.seed));
    }
    m.set("config_hash", ckpt.meta.config_hash);
    m.save(manifest_path);

    std::cout << "wrote " << data.images.shape[0] << " rows to " << a.out_csv << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quanvolutional autoencoder pipeline"};
    app.require_subcommand(1);

    QuanvolveArgs qa;
    CLI::App* quanvolve = app.add_subcommand("quanvolve", "Precompute quantum feature maps");
    quanvolve->add_option("--dataset", qa.dataset, "mnist or cifar10")->required();
    quanvolve->add_option("--data-dir", qa.data_dir, "Directory with the raw dataset")->required();
    quanvolve->add_option("--split", qa.split, "train or test")->capture_default_str();
    quanvolve->add_option("--cache-dir", qa.cache_dir, "Cache directory")->capture_default_str();
    quanvolve->add_option("--limit", qa.limit, "Use only the first N images (0 = all)");
    quanvolve->add_option("--workers", qa.workers, "Threads (0 = all cores)")->capture_default_str();
    add_circuit_flags(*quanvolve, qa.circuit);

    TrainArgs ta;
    CLI::App* train = app.add_subcommand("train", "Train autoencoders across seeds");
    train->add_option("--variant", ta.variant, "classic or quanv")->required();
    train->add_option("--dataset", ta.dataset, "mnist or cifar10")->required();
    train->add_option("--data-dir", ta.data_dir, "Directory with the raw dataset")->required();
    train->add_option("--split", ta.split, "train or test")->capture_default_str();
    train->add_option("--cache-dir", ta.cache_dir, "Cache directory")->capture_default_str();
    train->add_option("--out", ta.out_dir, "Output directory")->capture_default_str();
    train->add_option("--bottleneck", ta.bottleneck, "Bottleneck width (2, 64 or 128)")
        ->capture_default_str();
    train->add_option("--epochs", ta.epochs, "Training epochs")->capture_default_str();
    train->add_option("--batch", ta.batch, "Batch size")->capture_default_str();
    train->add_option("--seeds", ta.seeds, "Number of seeded runs")->capture_default_str();
    train->add_option("--limit", ta.limit, "Use only the first N images (0 = all)");
    add_circuit_flags(*train, ta.circuit);

    ReconstructArgs ra;
    CLI::App* reconstruct =
        app.add_subcommand("reconstruct", "Write originals and reconstructions as PGM/PPM");
    reconstruct->add_option("--checkpoint", ra.checkpoint, "Checkpoint directory")->required();
    reconstruct->add_option("--data-dir", ra.data_dir, "Directory with the raw dataset")->required();
    reconstruct->add_option("--split", ra.split, "train or test")->capture_default_str();
    reconstruct->add_option("--out", ra.out_dir, "Output directory")->capture_default_str();
    reconstruct->add_option("--n", ra.n, "Number of images")->capture_default_str();
    reconstruct->add_option("--workers", ra.workers, "Threads (0 = all cores)")->capture_default_str();

    LatentArgs la;
    CLI::App* latent = app.add_subcommand("latent", "Export bottleneck activations as CSV");
    latent->add_option("--checkpoint", la.checkpoint, "Checkpoint directory")->required();
    latent->add_option("--data-dir", la.data_dir, "Directory with the raw dataset")->required();
    latent->add_option("--split", la.split, "train or test")->capture_default_str();
    latent->add_option("--out", la.out_csv, "Output CSV path")->capture_default_str();
    latent->add_option("--limit", la.limit, "Use only the first N images (0 = all)");
    latent->add_option("--workers", la.workers, "Threads (0 = all cores)")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : quanv::exit_code::config;
    }

    try {
        if (quanvolve->parsed()) return run_quanvolve(qa);
        if (train->parsed()) return run_train(ta);
        if (reconstruct->parsed()) return run_reconstruct(ra);
        return run_latent(la);
    } catch (const quanv::error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
