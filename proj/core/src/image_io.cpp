#include "quanv/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace quanv {

namespace {

unsigned char to_byte(float p) {
    const float scaled = std::round(p * 255.0f);
    return static_cast<unsigned char>(std::clamp(scaled, 0.0f, 255.0f));
}

void write_netpbm(const Tensor& image, const std::filesystem::path& path, const char* magic,
                  std::size_t channels) {
    if (image.rank() != 3 || image.shape[2] != channels) {
        throw shape_error(std::string(magic) + " needs H,W," + std::to_string(channels) +
                          ", got " + shape_to_string(image.shape));
    }
    std::string out = std::string(magic) + "\n" + std::to_string(image.shape[1]) + " " +
                      std::to_string(image.shape[0]) + "\n255\n";
    out.reserve(out.size() + image.numel());
    for (float p : image.data) out += static_cast<char>(to_byte(p));

    std::FILE* f = std::fopen(path.string().c_str(), "wb");
    if (!f) throw data_error("cannot write " + path.string());
    const std::size_t written = std::fwrite(out.data(), 1, out.size(), f);
    std::fclose(f);
    if (written != out.size()) throw data_error("short write to " + path.string());
}

} // namespace

void write_pgm(const Tensor& image, const std::filesystem::path& path) {
    write_netpbm(image, path, "P5", 1);
}

void write_ppm(const Tensor& image, const std::filesystem::path& path) {
    write_netpbm(image, path, "P6", 3);
}

void write_image(const Tensor& image, const std::filesystem::path& path) {
    if (image.rank() == 3 && image.shape[2] == 3) {
        write_ppm(image, path);
    } else {
        write_pgm(image, path);
    }
}

const char* image_extension(const Tensor& image) {
    return image.rank() == 3 && image.shape[2] == 3 ? ".ppm" : ".pgm";
}

} // namespace quanv
