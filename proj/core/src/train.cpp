#include "quanv/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

namespace quanv {

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
    for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(idx.size() - i));
        std::swap(idx[i], idx[j]);
    }
}

} // namespace

RunRecord train_autoencoder(Network& net, const std::vector<DArray>& inputs,
                            const std::vector<DArray>& targets, const TrainConfig& cfg) {
    if (inputs.empty()) throw config_error("training needs at least one sample");
    if (inputs.size() != targets.size()) {
        throw shape_error("training inputs (" + std::to_string(inputs.size()) + ") and targets (" +
                          std::to_string(targets.size()) + ") differ in count");
    }
    if (cfg.epochs < 1) throw config_error("epochs must be >= 1");
    if (cfg.batch_size < 1) throw config_error("batch size must be >= 1");

    Rng rng(cfg.seed);
    net.init_weights(rng);
    AdamOptimizer opt(cfg.adam);

    RunRecord rec;
    rec.seed = cfg.seed;
    rec.epoch_loss.reserve(static_cast<std::size_t>(cfg.epochs));
    rec.epoch_wall_ms.reserve(static_cast<std::size_t>(cfg.epochs));

    const std::size_t n = inputs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);

    Network::Trace trace;
    Gradients grads = net.make_zero_gradients();

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        shuffle_indices(order, rng);

        double epoch_total = 0.0;
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin < n; begin += static_cast<std::size_t>(cfg.batch_size), ++batch_index) {
            const std::size_t end = std::min(begin + static_cast<std::size_t>(cfg.batch_size), n);
            const double inv_batch = 1.0 / static_cast<double>(end - begin);

            for (auto& g : grads.weights)
                std::fill(g.v.begin(), g.v.end(), 0.0);
            for (auto& g : grads.bias)
                std::fill(g.v.begin(), g.v.end(), 0.0);

            double batch_total = 0.0;
            for (std::size_t s = begin; s < end; ++s) {
                const DArray& x = inputs[order[s]];
                const DArray& t = targets[order[s]];
                const DArray y = net.forward(x, RunMode::train, &trace, &rng);
                batch_total += bce_loss(y, t);
                DArray dy = bce_loss_grad(y, t);
                for (double& g : dy.v) g *= inv_batch;
                net.backward(trace, dy, grads);
            }
            if (!std::isfinite(batch_total)) {
                throw numeric_error("non-finite loss at epoch " + std::to_string(epoch) +
                                    ", batch " + std::to_string(batch_index));
            }
            epoch_total += batch_total;
            opt.step(net, grads);
        }

        const auto t1 = std::chrono::steady_clock::now();
        rec.epoch_loss.push_back(epoch_total / static_cast<double>(n));
        rec.epoch_wall_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return rec;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::vector<DArray>& inputs,
                                const std::vector<DArray>& targets) {
    if (cfg.seeds.empty()) throw config_error("experiment needs at least one seed");

    const NetworkSpec spec = autoencoder_spec(cfg.dataset, cfg.variant, cfg.bottleneck);
    ExperimentResult result;
    result.runs.reserve(cfg.seeds.size());
    result.nets.reserve(cfg.seeds.size());

    for (const std::uint64_t seed : cfg.seeds) {
        Network net(spec);
        TrainConfig tc = cfg.train;
        tc.seed = seed;
        RunRecord rec = train_autoencoder(net, inputs, targets, tc);
        rec.variant = cfg.variant;
        rec.dataset = cfg.dataset;
        rec.bottleneck = cfg.bottleneck;
        result.runs.push_back(std::move(rec));
        result.nets.push_back(std::move(net));
    }
    return result;
}

void epoch_stats(const std::vector<RunRecord>& runs, std::vector<double>& mean,
                 std::vector<double>& stddev) {
    if (runs.empty()) throw config_error("no runs to aggregate");
    const std::size_t epochs = runs[0].epoch_loss.size();
    for (const RunRecord& r : runs) {
        if (r.epoch_loss.size() != epochs) {
            throw shape_error("runs disagree on epoch count");
        }
    }
    mean.assign(epochs, 0.0);
    stddev.assign(epochs, 0.0);
    const double n = static_cast<double>(runs.size());
    for (std::size_t e = 0; e < epochs; ++e) {
        double total = 0.0;
        for (const RunRecord& r : runs) total += r.epoch_loss[e];
        mean[e] = total / n;
        if (runs.size() > 1) {
            double sq = 0.0;
            for (const RunRecord& r : runs) {
                const double d = r.epoch_loss[e] - mean[e];
                sq += d * d;
            }
            stddev[e] = std::sqrt(sq / (n - 1.0));
        }
    }
}

void write_loss_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs) {
    std::vector<double> mean, stddev;
    epoch_stats(runs, mean, stddev);

    std::string out = "epoch,mean_loss,std_loss\n";
    char buf[64];
    for (std::size_t e = 0; e < mean.size(); ++e) {
        out += std::to_string(e);
        std::snprintf(buf, sizeof buf, ",%.17g,%.17g\n", mean[e], stddev[e]);
        out += buf;
    }

    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw data_error("cannot write " + path.string());
    const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
    if (written != out.size()) throw data_error("short write to " + path.string());
}

std::vector<DArray> unbatch(const Tensor& batch) {
    if (batch.shape.size() != 4) {
        throw shape_error("unbatch expects a rank-4 tensor, got " + shape_to_string(batch.shape));
    }
    std::vector<DArray> out;
    out.reserve(batch.shape[0]);
    for (std::uint32_t i = 0; i < batch.shape[0]; ++i) {
        out.push_back(DArray::from_tensor(batch.slice(i)));
    }
    return out;
}

} // namespace quanv
