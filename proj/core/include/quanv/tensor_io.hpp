#pragma once

#include <filesystem>

#include "quanv/tensor.hpp"

namespace quanv {

// Binary tensor container (.qtn), bit-exact by construction:
//   magic "QTN1"
//   uint8 rank
//   rank x uint32 little-endian extents
//   float32 little-endian payload, row-major
//   uint64 little-endian FNV-1a hash of the payload bytes
//
// Readers verify magic, extent sanity, payload length and the trailing
// hash; any mismatch raises data_error.

void write_tensor(const Tensor& tensor, const std::filesystem::path& path);
Tensor read_tensor(const std::filesystem::path& path);

/// Serialize to an in-memory byte string (same layout as the file).
std::string tensor_to_bytes(const Tensor& tensor);
Tensor tensor_from_bytes(const std::string& bytes);

} // namespace quanv
