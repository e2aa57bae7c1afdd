#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "quanv/network.hpp"

namespace quanv {

struct TrainConfig {
    int epochs = 10;
    int batch_size = 32;
    std::uint64_t seed = 0;
    AdamConfig adam;
};

/// One training run. Losses are the per-epoch mean training BCE; wall
/// times are informational and excluded from determinism comparisons
/// and CSV output.
struct RunRecord {
    Variant variant = Variant::classic;
    DatasetKind dataset = DatasetKind::mnist;
    int bottleneck = 0;
    std::uint64_t seed = 0;
    std::vector<double> epoch_loss;
    std::vector<double> epoch_wall_ms;
};

/// Trains `net` in place (weights re-initialized from cfg.seed). One RNG
/// stream drives init, per-epoch shuffling, and dropout, so a seed fixes
/// the whole run. Gradients are averaged per batch; the final partial
/// batch is kept. Throws numeric_error naming epoch and batch if the
/// loss goes non-finite.
RunRecord train_autoencoder(Network& net, const std::vector<DArray>& inputs,
                            const std::vector<DArray>& targets, const TrainConfig& cfg);

struct ExperimentConfig {
    DatasetKind dataset = DatasetKind::mnist;
    Variant variant = Variant::classic;
    int bottleneck = 2;
    TrainConfig train;                // train.seed is ignored; seeds below
    std::vector<std::uint64_t> seeds; // one run per entry
};

struct ExperimentResult {
    std::vector<RunRecord> runs; // one per seed
    std::vector<Network> nets;   // trained network per seed
};

/// Runs one training per seed on (inputs, targets). Input shapes must
/// match the variant (raw images for classic, quanvolved maps for quanv);
/// targets are always the original images.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const std::vector<DArray>& inputs,
                                const std::vector<DArray>& targets);

/// Per-epoch mean and sample standard deviation of loss across runs.
/// All runs must have the same epoch count. std is 0 for a single run.
void epoch_stats(const std::vector<RunRecord>& runs, std::vector<double>& mean,
                 std::vector<double>& stddev);

/// CSV "epoch,mean_loss,std_loss", one row per epoch (0-based), doubles
/// printed with %.17g so reruns are byte-identical.
void write_loss_csv(const std::filesystem::path& path, const std::vector<RunRecord>& runs);

/// Splits a batched N,H,W,C tensor into N rank-3 arrays.
std::vector<DArray> unbatch(const Tensor& batch);

} // namespace quanv
