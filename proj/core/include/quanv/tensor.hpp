#pragma once

#include <cstdint>
#include <initializer_list>
#include <numeric>
#include <string>
#include <vector>

#include "quanv/errors.hpp"

namespace quanv {

/// Rank 1..4 extents, row-major, channel-last (batch, height, width, channel).
using Shape = std::vector<std::uint32_t>;

std::string shape_to_string(const Shape& shape);

inline std::size_t shape_numel(const Shape& shape) {
    std::size_t n = 1;
    for (std::uint32_t e : shape) n *= e;
    return n;
}

// Dense real tensor backing images, quanvolved maps and checkpoints.
// Values are 32-bit floats; this is also the on-disk element type.
struct Tensor {
    Shape shape;
    std::vector<float> data;

    Tensor() = default;
    explicit Tensor(Shape s) : shape(std::move(s)), data(shape_numel(shape), 0.0f) { validate(); }
    Tensor(Shape s, std::vector<float> d) : shape(std::move(s)), data(std::move(d)) { validate(); }

    std::size_t numel() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }

    // Unchecked row-major accessors for the common ranks.
    float& at(std::size_t h, std::size_t w, std::size_t c) {
        return data[(h * shape[1] + w) * shape[2] + c];
    }
    float at(std::size_t h, std::size_t w, std::size_t c) const {
        return data[(h * shape[1] + w) * shape[2] + c];
    }
    float& at(std::size_t b, std::size_t h, std::size_t w, std::size_t c) {
        return data[((b * shape[1] + h) * shape[2] + w) * shape[3] + c];
    }
    float at(std::size_t b, std::size_t h, std::size_t w, std::size_t c) const {
        return data[((b * shape[1] + h) * shape[2] + w) * shape[3] + c];
    }

    /// Rank-3 view of one item of a rank-4 batch (copies the slice).
    Tensor slice(std::size_t index) const;

    bool operator==(const Tensor&) const = default;

private:
    void validate() const {
        if (shape.empty() || shape.size() > 4) {
            throw shape_error("tensor rank must be 1..4, got " + std::to_string(shape.size()));
        }
        if (shape_numel(shape) != data.size()) {
            throw shape_error("tensor data length " + std::to_string(data.size()) +
                              " does not match shape " + shape_to_string(shape));
        }
    }
};

} // namespace quanv
