#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace quanv {

// 64-bit FNV-1a. Used for the tensor file trailer, cache keys and config
// hashes, so the constants must never change.
inline constexpr std::uint64_t fnv1a_offset = 14695981039346656037ull;
inline constexpr std::uint64_t fnv1a_prime = 1099511628211ull;

inline std::uint64_t fnv1a_update(std::uint64_t h, const void* bytes, std::size_t len) {
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= fnv1a_prime;
    }
    return h;
}

inline std::uint64_t fnv1a(const void* bytes, std::size_t len) {
    return fnv1a_update(fnv1a_offset, bytes, len);
}

inline std::uint64_t fnv1a(std::string_view s) { return fnv1a(s.data(), s.size()); }

std::string to_hex(std::uint64_t value);

} // namespace quanv
