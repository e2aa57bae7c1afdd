#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "quanv/rng.hpp"

namespace fixtures {

/// Unique directory under the system temp dir, removed on destruction.
class TmpDir {
public:
    explicit TmpDir(const std::string& tag = "quanv-test");
    ~TmpDir();
    TmpDir(const TmpDir&) = delete;
    TmpDir& operator=(const TmpDir&) = delete;

    const std::filesystem::path& path() const { return dir_; }
    std::filesystem::path operator/(const std::string& name) const { return dir_ / name; }

private:
    std::filesystem::path dir_;
};

void write_bytes(const std::filesystem::path& path, const std::string& bytes);
std::string read_bytes(const std::filesystem::path& path);
void write_gzip(const std::filesystem::path& path, const std::string& bytes);

void put_be32(std::string& out, std::uint32_t v);

/// IDX image payload: magic 2051, dims, then pixels (count*rows*cols bytes).
std::string idx_image_bytes(const std::vector<unsigned char>& pixels, std::uint32_t count,
                            std::uint32_t rows, std::uint32_t cols);
/// IDX label payload: magic 2049, count, then labels.
std::string idx_label_bytes(const std::vector<unsigned char>& labels);

/// One CIFAR-10 record: label byte + 3072 planar RGB bytes.
std::string cifar_record(unsigned char label, const std::vector<unsigned char>& planar_rgb);

/// Deterministic MNIST-shaped images: one or two gaussian blobs per
/// image, byte-quantized. Returns count*28*28 bytes, labels = blob count.
void synthetic_digits(quanv::Rng& rng, std::size_t count, std::vector<unsigned char>& pixels,
                      std::vector<unsigned char>& labels);

/// Writes a full MNIST-format directory (train + t10k IDX files, raw).
void write_synthetic_mnist(const std::filesystem::path& dir, std::size_t n_train,
                           std::size_t n_test, std::uint64_t seed);

} // namespace fixtures
