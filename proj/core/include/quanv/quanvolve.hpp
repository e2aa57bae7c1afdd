#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "quanv/circuit.hpp"
#include "quanv/tensor.hpp"

namespace quanv {

// The quantum convolution: a k x k window slides over the image with the
// given stride (no padding), each patch is encoded as rotation angles
// (pixel * pi) and run through the fixed circuit, and the per-wire <Z>
// readouts become k^2 output channels per input channel.
struct QuanvConfig {
    int patch_size = 4;
    int stride = 4;
    bool per_channel = true; // apply the filter to each input channel independently
    CircuitSpec circuit;

    /// Throws config_error unless patch_size^2 == circuit.num_qubits and stride >= 1.
    void validate() const;

    /// Canonical text form; part of the cache key.
    std::string serialize() const;
};

/// Angles pi * pixel, row-major. Pixels outside [0, 1] are refused
/// (data_error), never clamped.
std::vector<double> encode_patch(std::span<const float> patch);

/// Output spatial extents for one axis: floor((extent - patch) / stride) + 1.
std::uint32_t quanv_out_extent(std::uint32_t extent, int patch, int stride);

/// H x W x C -> H' x W' x (C * k^2); output channel c*k^2 + q at (i, j)
/// is wire q's readout for input channel c's window at (i, j).
/// `workers` <= 0 means one thread per available core. `evals`, when
/// given, is incremented once per circuit evaluation.
Tensor quanvolve_image(const Tensor& image, const QuanvConfig& cfg, int workers = 1,
                       std::uint64_t* evals = nullptr);

struct QuanvolveResult {
    Tensor tensor;
    std::string key_hex;
    std::filesystem::path cache_file;
    bool cache_hit = false;
    bool recovered_from_corruption = false;
    std::uint64_t circuit_evals = 0;
};

/// Cache key: FNV-1a over the dataset id, the image shape and payload,
/// and the serialized config, rendered as 16 hex digits.
std::string quanvolve_cache_key(const Tensor& images, const QuanvConfig& cfg,
                                const std::string& dataset_id);

/// N x H x W x C -> N x H' x W' x (C * k^2), persisted under
/// `cache_dir/<key>.qtn`. A later call with the same key loads the file
/// instead of recomputing; loaded and recomputed tensors are
/// bit-identical. A corrupt cache file is recomputed and overwritten.
QuanvolveResult quanvolve_dataset(const Tensor& images, const QuanvConfig& cfg,
                                  const std::string& dataset_id,
                                  const std::filesystem::path& cache_dir, int workers = 1);

} // namespace quanv
