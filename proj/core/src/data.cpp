#include "quanv/data.hpp"

#include <cstdio>
#include <cstring>

#include <zlib.h>

#include "quanv/errors.hpp"
#include "quanv/rng.hpp"

namespace quanv {

namespace {

std::vector<unsigned char> read_file_bytes(const std::filesystem::path& path) {
    std::FILE* f = std::fopen(path.string().c_str(), "rb");
    if (!f) throw data_error("cannot read " + path.string());
    std::vector<unsigned char> bytes;
    unsigned char buf[1 << 16];
    std::size_t got;
    while ((got = std::fread(buf, 1, sizeof buf, f)) > 0) bytes.insert(bytes.end(), buf, buf + got);
    const bool failed = std::ferror(f) != 0;
    std::fclose(f);
    if (failed) throw data_error("read error on " + path.string());
    return bytes;
}

bool is_gzip(const std::vector<unsigned char>& bytes) {
    return bytes.size() >= 2 && bytes[0] == 0x1f && bytes[1] == 0x8b;
}

std::vector<unsigned char> gunzip(const std::vector<unsigned char>& in, const std::string& name) {
    z_stream zs{};
    if (inflateInit2(&zs, 15 + 16) != Z_OK) throw data_error(name + ": zlib init failed");

    std::vector<unsigned char> out;
    out.reserve(in.size() * 4);
    unsigned char buf[1 << 16];
    zs.next_in = const_cast<unsigned char*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    int rc = Z_OK;
    do {
        zs.next_out = buf;
        zs.avail_out = sizeof buf;
        rc = inflate(&zs, Z_NO_FLUSH);
        if (rc != Z_OK && rc != Z_STREAM_END) {
            inflateEnd(&zs);
            throw data_error(name + ": corrupt gzip stream");
        }
        out.insert(out.end(), buf, buf + (sizeof buf - zs.avail_out));
    } while (rc != Z_STREAM_END);
    inflateEnd(&zs);
    return out;
}

std::vector<unsigned char> read_maybe_gz(const std::filesystem::path& path) {
    std::vector<unsigned char> bytes = read_file_bytes(path);
    if (is_gzip(bytes)) return gunzip(bytes, path.string());
    return bytes;
}

std::uint32_t be32(const unsigned char* p) {
    return (std::uint32_t{p[0]} << 24) | (std::uint32_t{p[1]} << 16) | (std::uint32_t{p[2]} << 8) |
           std::uint32_t{p[3]};
}

constexpr std::uint32_t idx_image_magic = 2051;
constexpr std::uint32_t idx_label_magic = 2049;

constexpr std::size_t cifar_side = 32;
constexpr std::size_t cifar_plane = cifar_side * cifar_side;
constexpr std::size_t cifar_record = 1 + 3 * cifar_plane;

std::filesystem::path probe(const std::filesystem::path& dir,
                            const std::vector<std::string>& names) {
    for (const std::string& name : names) {
        const auto p = dir / name;
        if (std::filesystem::exists(p)) return p;
    }
    std::string tried;
    for (const std::string& name : names) {
        if (!tried.empty()) tried += ", ";
        tried += name;
    }
    throw data_error("no dataset file under " + dir.string() + " (tried " + tried + ")");
}

const std::string& check_split(const std::string& split) {
    if (split != "train" && split != "test") {
        throw config_error("split must be train or test, got '" + split + "'");
    }
    return split;
}

} // namespace

Tensor load_idx_images(const std::filesystem::path& path) {
    const auto bytes = read_maybe_gz(path);
    if (bytes.size() < 16) throw data_error(path.string() + ": truncated IDX header");
    const std::uint32_t magic = be32(bytes.data());
    if (magic != idx_image_magic) {
        throw data_error(path.string() + ": bad IDX magic " + std::to_string(magic) +
                         " (expected " + std::to_string(idx_image_magic) + ")");
    }
    const std::uint32_t count = be32(bytes.data() + 4);
    const std::uint32_t rows = be32(bytes.data() + 8);
    const std::uint32_t cols = be32(bytes.data() + 12);
    const std::size_t want = 16 + static_cast<std::size_t>(count) * rows * cols;
    if (bytes.size() != want) {
        throw data_error(path.string() + ": expected " + std::to_string(want) + " bytes, got " +
                         std::to_string(bytes.size()));
    }
    std::vector<float> pixels(static_cast<std::size_t>(count) * rows * cols);
    for (std::size_t i = 0; i < pixels.size(); ++i) {
        pixels[i] = static_cast<float>(bytes[16 + i]) / 255.0f;
    }
    return Tensor({count, rows, cols, 1}, std::move(pixels));
}

std::vector<int> load_idx_labels(const std::filesystem::path& path) {
    const auto bytes = read_maybe_gz(path);
    if (bytes.size() < 8) throw data_error(path.string() + ": truncated IDX header");
    const std::uint32_t magic = be32(bytes.data());
    if (magic != idx_label_magic) {
        throw data_error(path.string() + ": bad IDX magic " + std::to_string(magic) +
                         " (expected " + std::to_string(idx_label_magic) + ")");
    }
    const std::uint32_t count = be32(bytes.data() + 4);
    if (bytes.size() != 8 + static_cast<std::size_t>(count)) {
        throw data_error(path.string() + ": expected " + std::to_string(8 + count) +
                         " bytes, got " + std::to_string(bytes.size()));
    }
    std::vector<int> labels(count);
    for (std::uint32_t i = 0; i < count; ++i) labels[i] = bytes[8 + i];
    return labels;
}

void load_cifar_batch(const std::filesystem::path& path, std::vector<float>& pixels,
                      std::vector<int>& labels) {
    const auto bytes = read_file_bytes(path);
    const std::size_t records = bytes.size() / cifar_record;
    if (records * cifar_record != bytes.size()) {
        throw data_error(path.string() + ": truncated record at byte offset " +
                         std::to_string(records * cifar_record));
    }
    pixels.reserve(pixels.size() + records * 3 * cifar_plane);
    for (std::size_t r = 0; r < records; ++r) {
        const unsigned char* rec = bytes.data() + r * cifar_record;
        labels.push_back(rec[0]);
        const unsigned char* planes = rec + 1;
        for (std::size_t hw = 0; hw < cifar_plane; ++hw) {
            // planar R,G,B to channel-last
            pixels.push_back(static_cast<float>(planes[hw]) / 255.0f);
            pixels.push_back(static_cast<float>(planes[cifar_plane + hw]) / 255.0f);
            pixels.push_back(static_cast<float>(planes[2 * cifar_plane + hw]) / 255.0f);
        }
    }
}

DatasetHandle load_mnist(const std::filesystem::path& dir, const std::string& split) {
    check_split(split);
    const std::string prefix = split == "train" ? "train" : "t10k";

    const auto images_path = probe(dir, {prefix + "-images-idx3-ubyte", //
                                         prefix + "-images-idx3-ubyte.gz",
                                         prefix + "-images.idx3-ubyte",
                                         prefix + "-images.idx3-ubyte.gz"});
    const auto labels_path = probe(dir, {prefix + "-labels-idx1-ubyte", //
                                         prefix + "-labels-idx1-ubyte.gz",
                                         prefix + "-labels.idx1-ubyte",
                                         prefix + "-labels.idx1-ubyte.gz"});

    DatasetHandle h;
    h.kind = DatasetKind::mnist;
    h.split = split;
    h.images = load_idx_images(images_path);
    h.labels = load_idx_labels(labels_path);
    if (h.labels.size() != h.images.shape[0]) {
        throw data_error(dir.string() + ": " + std::to_string(h.images.shape[0]) + " images but " +
                         std::to_string(h.labels.size()) + " labels");
    }
    return h;
}

DatasetHandle load_cifar10(const std::filesystem::path& dir, const std::string& split) {
    check_split(split);
    std::vector<std::string> files;
    if (split == "train") {
        for (int i = 1; i <= 5; ++i) files.push_back("data_batch_" + std::to_string(i) + ".bin");
    } else {
        files.push_back("test_batch.bin");
    }

    DatasetHandle h;
    h.kind = DatasetKind::cifar10;
    h.split = split;
    std::vector<float> pixels;
    for (const std::string& name : files) {
        const std::size_t before = h.labels.size();
        load_cifar_batch(dir / name, pixels, h.labels);
        const std::size_t got = h.labels.size() - before;
        if (got != 10000) {
            throw data_error((dir / name).string() + ": expected 10000 records, got " +
                             std::to_string(got));
        }
    }
    const auto count = static_cast<std::uint32_t>(h.labels.size());
    h.images = Tensor({count, cifar_side, cifar_side, 3}, std::move(pixels));
    return h;
}

DatasetHandle subset(const DatasetHandle& handle, std::size_t n, std::uint64_t seed) {
    const std::size_t size = handle.images.shape[0];
    if (n > size) {
        throw config_error("subset of " + std::to_string(n) + " from " + std::to_string(size) +
                           " images");
    }

    std::vector<std::size_t> idx(size);
    for (std::size_t i = 0; i < size; ++i) idx[i] = i;
    Rng rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_below(size - i));
        std::swap(idx[i], idx[j]);
    }

    const std::size_t item = shape_numel(
        {handle.images.shape[1], handle.images.shape[2], handle.images.shape[3]});
    DatasetHandle out;
    out.kind = handle.kind;
    out.split = handle.split;
    std::vector<float> pixels(n * item);
    out.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::memcpy(pixels.data() + i * item, handle.images.data.data() + idx[i] * item,
                    item * sizeof(float));
        out.labels[i] = handle.labels[idx[i]];
    }
    out.images = Tensor({static_cast<std::uint32_t>(n), handle.images.shape[1],
                         handle.images.shape[2], handle.images.shape[3]},
                        std::move(pixels));
    return out;
}

} // namespace quanv
