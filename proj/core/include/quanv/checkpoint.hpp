#pragma once

#include <filesystem>
#include <string>

#include "quanv/quanvolve.hpp"
#include "quanv/train.hpp"

namespace quanv {

/// Provenance stored alongside the parameters. `quanv` is meaningful
/// only for the quanv variant (circuit.num_qubits > 0).
struct CheckpointMeta {
    DatasetKind dataset = DatasetKind::mnist;
    Variant variant = Variant::classic;
    int bottleneck = 0;
    std::uint64_t weight_seed = 0;
    TrainConfig train;
    QuanvConfig quanv;
    std::string config_hash;
};

struct Checkpoint {
    CheckpointMeta meta;
    Network net;
};

/// Writes manifest.txt (kinds, shapes, seeds, config hash), one tensor
/// file per trainable parameter, and circuit.txt for the quanv variant.
/// Creates `dir` if needed.
void save_checkpoint(const std::filesystem::path& dir, const Network& net,
                     const CheckpointMeta& meta);

/// Rebuilds the architecture from the manifest and loads parameters.
/// Parameter/architecture mismatch is a state error.
Checkpoint load_checkpoint(const std::filesystem::path& dir);

/// FNV-1a of a canonical config description, as 16 hex digits.
std::string config_hash_hex(const std::string& canonical);

} // namespace quanv
