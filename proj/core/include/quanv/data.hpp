#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "quanv/neural.hpp"
#include "quanv/tensor.hpp"

namespace quanv {

/// Loaded split: images are N,H,W,C with every value in [0,1] (byte/255
/// exactly). Labels are carried for latent-space exports only; training
/// never reads them.
struct DatasetHandle {
    DatasetKind kind = DatasetKind::mnist;
    std::string split;
    Tensor images;
    std::vector<int> labels;
};

/// IDX image file (big-endian magic 2051, dims count/rows/cols, raw
/// bytes), gzip or raw. Returns N,rows,cols,1.
Tensor load_idx_images(const std::filesystem::path& path);

/// IDX label file (big-endian magic 2049, dim count, raw bytes).
std::vector<int> load_idx_labels(const std::filesystem::path& path);

/// One CIFAR-10 binary batch: records of 1 label byte + 3072 planar RGB
/// bytes. Accepts any whole number of records; a partial trailing record
/// is a format error naming the byte offset. Appends to the outputs.
void load_cifar_batch(const std::filesystem::path& path, std::vector<float>& pixels,
                      std::vector<int>& labels);

/// split is "train" or "test". Probes the standard file names
/// (train-images-idx3-ubyte / t10k-images-idx3-ubyte etc., with
/// optional .gz) under dir.
DatasetHandle load_mnist(const std::filesystem::path& dir, const std::string& split);

/// split "train" reads data_batch_1..5.bin, "test" reads test_batch.bin;
/// each file must hold exactly 10000 records.
DatasetHandle load_cifar10(const std::filesystem::path& dir, const std::string& split);

/// Seeded sample of n images without replacement, order randomized.
DatasetHandle subset(const DatasetHandle& handle, std::size_t n, std::uint64_t seed);

} // namespace quanv
