#include "quanv/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "quanv/hash.hpp"

namespace quanv {

std::string shape_to_string(const Shape& shape) {
    std::string s = "[";
    for (std::size_t i = 0; i < shape.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(shape[i]);
    }
    return s + "]";
}

Tensor Tensor::slice(std::size_t index) const {
    if (rank() != 4) throw shape_error("slice requires a rank-4 tensor");
    if (index >= shape[0]) throw shape_error("slice index out of range");
    const std::size_t item = shape_numel({shape[1], shape[2], shape[3]});
    std::vector<float> d(data.begin() + static_cast<std::ptrdiff_t>(index * item),
                         data.begin() + static_cast<std::ptrdiff_t>((index + 1) * item));
    return Tensor({shape[1], shape[2], shape[3]}, std::move(d));
}

namespace {

constexpr char magic[4] = {'Q', 'T', 'N', '1'};

void put_u32(std::string& out, std::uint32_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
    out.push_back(static_cast<char>((v >> 16) & 0xff));
    out.push_back(static_cast<char>((v >> 24) & 0xff));
}

void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
    return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
           std::uint32_t(p[3]) << 24;
}

std::uint64_t get_u64(const unsigned char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    return v;
}

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big,
              "mixed-endian platforms are not supported");

void payload_to_bytes(const std::vector<float>& data, std::string& out) {
    if constexpr (std::endian::native == std::endian::little) {
        const std::size_t n = data.size() * sizeof(float);
        const std::size_t at = out.size();
        out.resize(at + n);
        std::memcpy(out.data() + at, data.data(), n);
    } else {
        for (float f : data) put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
}

} // namespace

std::string tensor_to_bytes(const Tensor& tensor) {
    std::string out;
    out.reserve(4 + 1 + tensor.rank() * 4 + tensor.numel() * 4 + 8);
    out.append(magic, 4);
    out.push_back(static_cast<char>(tensor.rank()));
    for (std::uint32_t e : tensor.shape) put_u32(out, e);

    std::string payload;
    payload_to_bytes(tensor.data, payload);
    out += payload;
    put_u64(out, fnv1a(payload.data(), payload.size()));
    return out;
}

Tensor tensor_from_bytes(const std::string& bytes) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data());
    const std::size_t n = bytes.size();
    if (n < 5 || std::memcmp(p, magic, 4) != 0) {
        throw data_error("tensor file: bad magic (expected QTN1)");
    }
    const std::size_t rank = p[4];
    if (rank < 1 || rank > 4) {
        throw data_error("tensor file: rank " + std::to_string(rank) + " outside 1..4");
    }
    std::size_t off = 5;
    if (n < off + rank * 4) throw data_error("tensor file: truncated header");
    Shape shape(rank);
    for (std::size_t i = 0; i < rank; ++i) {
        shape[i] = get_u32(p + off);
        off += 4;
    }
    const std::size_t count = shape_numel(shape);
    const std::size_t payload_len = count * sizeof(float);
    if (n != off + payload_len + 8) {
        throw data_error("tensor file: size mismatch for shape " + shape_to_string(shape));
    }

    const std::uint64_t stored = get_u64(p + off + payload_len);
    const std::uint64_t actual = fnv1a(p + off, payload_len);
    if (stored != actual) {
        throw data_error("tensor file: payload hash mismatch (stored " + to_hex(stored) +
                         ", computed " + to_hex(actual) + ")");
    }

    std::vector<float> data(count);
    if constexpr (std::endian::native == std::endian::little) {
        std::memcpy(data.data(), p + off, payload_len);
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = std::bit_cast<float>(get_u32(p + off + i * 4));
        }
    }
    return Tensor(std::move(shape), std::move(data));
}

void write_tensor(const Tensor& tensor, const std::filesystem::path& path) {
    const std::string bytes = tensor_to_bytes(tensor);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw data_error("cannot open tensor file for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw data_error("failed writing tensor file: " + path.string());
}

Tensor read_tensor(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open tensor file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return tensor_from_bytes(buf.str());
    } catch (const data_error& e) {
        throw data_error(path.string() + ": " + e.what());
    }
}

std::string to_hex(std::uint64_t value) {
    static const char digits[] = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return s;
}

} // namespace quanv
