#pragma once

#include <stdexcept>
#include <string>

namespace quanv {

// Error taxonomy shared by the library and the CLI. Each class maps to a
// fixed process exit code so scripts can distinguish failure modes.
namespace exit_code {
inline constexpr int config = 2;
inline constexpr int data = 3;
inline constexpr int shape = 4;
inline constexpr int numeric = 5;
} // namespace exit_code

class error : public std::runtime_error {
public:
    error(std::string msg, int code) : std::runtime_error(std::move(msg)), code_(code) {}
    int exit_code() const noexcept { return code_; }

private:
    int code_;
};

/// Invalid configuration: bad qubit counts, wire indices, flag combinations.
class config_error : public error {
public:
    explicit config_error(std::string msg) : error(std::move(msg), exit_code::config) {}
};

/// Malformed or out-of-contract input data: bad file magic, truncation,
/// out-of-range pixel values, unparseable circuit files.
class data_error : public error {
public:
    explicit data_error(std::string msg) : error(std::move(msg), exit_code::data) {}
};

/// Tensor or layer shape mismatch.
class shape_error : public error {
public:
    explicit shape_error(std::string msg) : error(std::move(msg), exit_code::shape) {}
};

/// Non-finite values where finite ones are required: NaN loss, norm drift.
class numeric_error : public error {
public:
    explicit numeric_error(std::string msg) : error(std::move(msg), exit_code::numeric) {}
};

/// Operation invoked against missing prerequisite state (absent cache,
/// checkpoint/spec mismatch). Reported as a configuration problem.
class state_error : public error {
public:
    explicit state_error(std::string msg) : error(std::move(msg), exit_code::config) {}
};

} // namespace quanv
