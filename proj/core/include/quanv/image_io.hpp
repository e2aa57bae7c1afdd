#pragma once

#include <filesystem>

#include "quanv/tensor.hpp"

namespace quanv {

/// 8-bit binary PGM (P5) from an H,W,1 tensor; byte = round(p*255),
/// clamped to [0,255].
void write_pgm(const Tensor& image, const std::filesystem::path& path);

/// 8-bit binary PPM (P6) from an H,W,3 tensor.
void write_ppm(const Tensor& image, const std::filesystem::path& path);

/// Dispatches on channel count (1 -> PGM, 3 -> PPM).
void write_image(const Tensor& image, const std::filesystem::path& path);

/// Extension for write_image's choice: ".pgm" or ".ppm".
const char* image_extension(const Tensor& image);

} // namespace quanv
