#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "quanv/errors.hpp"

namespace quanv {

using amp_t = std::complex<double>;

enum class GateKind : std::uint8_t { RX, RY, RZ, CNOT };

const char* gate_name(GateKind kind);

/// One gate of a circuit. `control` is only meaningful for CNOT and
/// `angle` only for the rotations; the unused field is left at its
/// default so serialization stays canonical.
struct Gate {
    GateKind kind = GateKind::RY;
    int target = 0;
    int control = -1;   // CNOT only
    double angle = 0.0; // rotations only, radians

    static Gate rx(int target, double angle) { return {GateKind::RX, target, -1, angle}; }
    static Gate ry(int target, double angle) { return {GateKind::RY, target, -1, angle}; }
    static Gate rz(int target, double angle) { return {GateKind::RZ, target, -1, angle}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, 0.0}; }

    bool operator==(const Gate&) const = default;
};

// Dense state vector of an n-qubit register, n <= 16. Amplitude index
// bit q holds the value of wire q, so the ground state is index 0.
//
// Gates are applied in place with stride-indexed kernels that touch each
// amplitude pair exactly once; no gate matrix is ever materialized over
// the full register. Norm drift is asserted by callers via norm_sq(),
// never silently corrected.
class StateVector {
public:
    static constexpr int max_qubits = 16;

    /// Ground state |0...0>.
    explicit StateVector(int num_qubits);

    int num_qubits() const noexcept { return num_qubits_; }
    std::size_t size() const noexcept { return amps_.size(); }

    std::span<const amp_t> amplitudes() const noexcept { return amps_; }
    std::span<amp_t> amplitudes() noexcept { return amps_; }

    void apply(const Gate& gate);

    void apply_rx(int target, double angle);
    void apply_ry(int target, double angle);
    void apply_rz(int target, double angle);
    void apply_cnot(int control, int target);

    /// <Z> on one wire: P(bit = 0) - P(bit = 1), in [-1, 1].
    double expectation_z(int wire) const;

    /// <Z> for every wire in a single pass over the amplitudes.
    std::vector<double> expectation_z_all() const;

    double norm_sq() const;

    /// Throws numeric_error if |norm^2 - 1| exceeds tol.
    void check_norm(double tol = 1e-9) const;

private:
    void check_wire(int wire, const char* what) const;

    int num_qubits_;
    std::vector<amp_t> amps_;
};

} // namespace quanv
