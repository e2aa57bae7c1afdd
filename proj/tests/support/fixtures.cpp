#include "support/fixtures.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <unistd.h>
#include <zlib.h>

namespace fixtures {

TmpDir::TmpDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    const unsigned id = counter.fetch_add(1);
    dir_ = std::filesystem::temp_directory_path() /
           (tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(id));
    std::filesystem::create_directories(dir_);
}

TmpDir::~TmpDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
}

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw std::runtime_error("fixture: cannot write " + path.string());
    const std::size_t written = std::fwrite(bytes.data(), 1, bytes.size(), f);
    std::fclose(f);
    if (written != bytes.size()) throw std::runtime_error("fixture: short write");
}

std::string read_bytes(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw std::runtime_error("fixture: cannot read " + path.string());
    std::string bytes;
    char buf[1 << 16];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) bytes.append(buf, got);
    std::fclose(f);
    return bytes;
}

void write_gzip(const std::filesystem::path& path, const std::string& bytes) {
    z_stream zs{};
    if (deflateInit2(&zs, Z_DEFAULT_COMPRESSION, Z_DEFLATED, 15 + 16, 8, Z_DEFAULT_STRATEGY) !=
        Z_OK) {
        throw std::runtime_error("fixture: deflateInit2 failed");
    }
    std::string out;
    unsigned char buf[1 << 16];
    zs.next_in = reinterpret_cast<unsigned char*>(const_cast<char*>(bytes.data()));
    zs.avail_in = static_cast<uInt>(bytes.size());
    int rc = Z_OK;
    do {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        rc = deflate(&zs, Z_FINISH);
        out.append(reinterpret_cast<char*>(buf), sizeof buf - zs.avail_out);
    } while (rc != Z_STREAM_END);
    deflateEnd(&zs);
    write_bytes(path, out);
}

void put_be32(std::string& out, std::uint32_t v) {
    out += static_cast<char>((v >> 24) & 0xff);
    out += static_cast<char>((v >> 16) & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
    out += static_cast<char>(v & 0xff);
}

std::string idx_image_bytes(const std::vector<unsigned char>& pixels, std::uint32_t count,
                            std::uint32_t rows, std::uint32_t cols) {
    std::string out;
    put_be32(out, 2051);
    put_be32(out, count);
    put_be32(out, rows);
    put_be32(out, cols);
    out.append(reinterpret_cast<const char*>(pixels.data()), pixels.size());
    return out;
}

std::string idx_label_bytes(const std::vector<unsigned char>& labels) {
    std::string out;
    put_be32(out, 2049);
    put_be32(out, static_cast<std::uint32_t>(labels.size()));
    out.append(reinterpret_cast<const char*>(labels.data()), labels.size());
    return out;
}

std::string cifar_record(unsigned char label, const std::vector<unsigned char>& planar_rgb) {
    std::string out(1, static_cast<char>(label));
    out.append(reinterpret_cast<const char*>(planar_rgb.data()), planar_rgb.size());
    return out;
}

void synthetic_digits(quanv::Rng& rng, std::size_t count, std::vector<unsigned char>& pixels,
                      std::vector<unsigned char>& labels) {
    constexpr int side = 28;
    pixels.reserve(pixels.size() + count * side * side);
    for (std::size_t i = 0; i < count; ++i) {
        const int blobs = 1 + static_cast<int>(rng.next_below(2));
        labels.push_back(static_cast<unsigned char>(blobs));
        std::vector<double> img(side * side, 0.0);
        for (int b = 0; b < blobs; ++b) {
            const double cy = rng.uniform(6.0, 22.0);
            const double cx = rng.uniform(6.0, 22.0);
            const double sigma = rng.uniform(2.0, 5.0);
            const double amp = rng.uniform(0.6, 1.0);
            for (int y = 0; y < side; ++y) {
                for (int x = 0; x < side; ++x) {
                    const double d2 = (y - cy) * (y - cy) + (x - cx) * (x - cx);
                    img[y * side + x] += amp * std::exp(-d2 / (2.0 * sigma * sigma));
                }
            }
        }
        for (double v : img) {
            const double scaled = std::round(std::clamp(v, 0.0, 1.0) * 255.0);
            pixels.push_back(static_cast<unsigned char>(scaled));
        }
    }
}

void write_synthetic_mnist(const std::filesystem::path& dir, std::size_t n_train,
                           std::size_t n_test, std::uint64_t seed) {
    std::filesystem::create_directories(dir);
    quanv::Rng rng(seed);

    std::vector<unsigned char> pixels, labels;
    synthetic_digits(rng, n_train, pixels, labels);
    write_bytes(dir / "train-images-idx3-ubyte",
                idx_image_bytes(pixels, static_cast<std::uint32_t>(n_train), 28, 28));
    write_bytes(dir / "train-labels-idx1-ubyte", idx_label_bytes(labels));

    pixels.clear();
    labels.clear();
    synthetic_digits(rng, n_test, pixels, labels);
    write_bytes(dir / "t10k-images-idx3-ubyte",
                idx_image_bytes(pixels, static_cast<std::uint32_t>(n_test), 28, 28));
    write_bytes(dir / "t10k-labels-idx1-ubyte", idx_label_bytes(labels));
}

} // namespace fixtures
