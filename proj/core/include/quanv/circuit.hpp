#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "quanv/qsim.hpp"

namespace quanv {

// Immutable gate-list IR for the fixed filter unitary. Regenerating from
// (num_qubits, depth, seed) reproduces the same gate list byte-for-byte
// after serialization, so the tuple is enough to reproduce any run.
struct CircuitSpec {
    int num_qubits = 0;
    int depth = 0;
    std::uint64_t seed = 0;
    std::vector<Gate> gates;

    bool operator==(const CircuitSpec&) const = default;
};

/// Seeded random circuit: per layer, one rotation (kind uniform over
/// {RX, RY, RZ}, angle uniform over [0, 2pi)) on each wire, then a CNOT
/// on (i, (i+1) mod n) for each wire i kept by a fair coin.
CircuitSpec generate_random_circuit(int num_qubits, int depth, std::uint64_t seed);

/// Encode inputs as RY(angle_i) on wire i from the ground state, apply
/// every gate of the circuit, and return <Z> per wire. Output components
/// lie in [-1, 1].
std::vector<double> run_circuit(const CircuitSpec& circuit, std::span<const double> input_angles);

// Text format: `#`-prefixed header lines carrying qubits/depth/seed and
// the generator algorithm, then one gate per line as
// `KIND target [control] [angle]`. Angles use 17 significant digits so
// the round trip is exact.
std::string serialize_circuit(const CircuitSpec& circuit);
CircuitSpec deserialize_circuit(const std::string& text);

void save_circuit(const CircuitSpec& circuit, const std::filesystem::path& path);
CircuitSpec load_circuit(const std::filesystem::path& path);

} // namespace quanv
