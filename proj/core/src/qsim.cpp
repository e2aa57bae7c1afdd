#include "quanv/qsim.hpp"

#include <bit>
#include <cmath>

namespace quanv {

const char* gate_name(GateKind kind) {
    switch (kind) {
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::CNOT: return "CNOT";
    }
    return "?";
}

StateVector::StateVector(int num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits < 1 || num_qubits > max_qubits) {
        throw config_error("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                           std::to_string(max_qubits) + "]");
    }
    amps_.assign(std::size_t{1} << num_qubits, amp_t{0.0, 0.0});
    amps_[0] = amp_t{1.0, 0.0};
}

void StateVector::check_wire(int wire, const char* what) const {
    if (wire < 0 || wire >= num_qubits_) {
        throw config_error(std::string(what) + " wire " + std::to_string(wire) +
                           " invalid for " + std::to_string(num_qubits_) + " qubits");
    }
}

namespace {

// Visits every (bit=0, bit=1) pair of amplitudes for one wire. The outer
// loop walks blocks of 2*mask amplitudes; the inner run of length mask is
// contiguous, which keeps the hot 16-qubit case vectorizable.
template <typename PairOp>
inline void for_each_pair(amp_t* a, std::size_t dim, std::uint64_t mask, PairOp&& op) {
    for (std::uint64_t base = 0; base < dim; base += mask << 1) {
        for (std::uint64_t i0 = base; i0 < base + mask; ++i0) {
            op(a[i0], a[i0 | mask]);
        }
    }
}

} // namespace

void StateVector::apply_rx(int target, double angle) {
    check_wire(target, "RX target");
    const double c = std::cos(angle * 0.5);
    const double s = std::sin(angle * 0.5);
    // [[c, -i s], [-i s, c]]
    for_each_pair(amps_.data(), amps_.size(), std::uint64_t{1} << target,
                  [c, s](amp_t& a0, amp_t& a1) {
                      const amp_t t0 = a0, t1 = a1;
                      a0 = amp_t{c * t0.real() + s * t1.imag(), c * t0.imag() - s * t1.real()};
                      a1 = amp_t{s * t0.imag() + c * t1.real(), -s * t0.real() + c * t1.imag()};
                  });
}

void StateVector::apply_ry(int target, double angle) {
    check_wire(target, "RY target");
    const double c = std::cos(angle * 0.5);
    const double s = std::sin(angle * 0.5);
    // [[c, -s], [s, c]], all real
    for_each_pair(amps_.data(), amps_.size(), std::uint64_t{1} << target,
                  [c, s](amp_t& a0, amp_t& a1) {
                      const amp_t t0 = a0, t1 = a1;
                      a0 = c * t0 - s * t1;
                      a1 = s * t0 + c * t1;
                  });
}

void StateVector::apply_rz(int target, double angle) {
    check_wire(target, "RZ target");
    const amp_t p0{std::cos(angle * 0.5), -std::sin(angle * 0.5)};
    const amp_t p1 = std::conj(p0);
    for_each_pair(amps_.data(), amps_.size(), std::uint64_t{1} << target,
                  [p0, p1](amp_t& a0, amp_t& a1) {
                      a0 *= p0;
                      a1 *= p1;
                  });
}

void StateVector::apply_cnot(int control, int target) {
    check_wire(control, "CNOT control");
    check_wire(target, "CNOT target");
    if (control == target) {
        throw config_error("CNOT control equals target (" + std::to_string(target) + ")");
    }
    const std::uint64_t cmask = std::uint64_t{1} << control;
    const std::uint64_t tmask = std::uint64_t{1} << target;
    const std::uint64_t lo = (cmask < tmask ? cmask : tmask) - 1;
    const std::uint64_t mid = (cmask > tmask ? cmask : tmask) - 1;
    amp_t* a = amps_.data();
    // Enumerate the 2^(n-2) indices over the remaining wires, then pin
    // control=1 / target=0 and swap with the target=1 partner: each
    // swapped pair is touched exactly once.
    const std::uint64_t quarter = amps_.size() >> 2;
    for (std::uint64_t i = 0; i < quarter; ++i) {
        std::uint64_t x = ((i & ~lo) << 1) | (i & lo);
        x = ((x & ~mid) << 1) | (x & mid);
        const std::uint64_t src = x | cmask;
        std::swap(a[src], a[src | tmask]);
    }
}

void StateVector::apply(const Gate& gate) {
    switch (gate.kind) {
    case GateKind::RX: apply_rx(gate.target, gate.angle); return;
    case GateKind::RY: apply_ry(gate.target, gate.angle); return;
    case GateKind::RZ: apply_rz(gate.target, gate.angle); return;
    case GateKind::CNOT: apply_cnot(gate.control, gate.target); return;
    }
    throw config_error("unknown gate kind");
}

double StateVector::expectation_z(int wire) const {
    check_wire(wire, "measurement");
    const std::uint64_t mask = std::uint64_t{1} << wire;
    double z = 0.0;
    const amp_t* a = amps_.data();
    const std::size_t dim = amps_.size();
    for (std::uint64_t base = 0; base < dim; base += mask << 1) {
        for (std::uint64_t i0 = base; i0 < base + mask; ++i0) {
            z += std::norm(a[i0]) - std::norm(a[i0 | mask]);
        }
    }
    return z;
}

std::vector<double> StateVector::expectation_z_all() const {
    std::vector<double> p1(static_cast<std::size_t>(num_qubits_), 0.0);
    const amp_t* a = amps_.data();
    const std::size_t dim = amps_.size();
    double total = 0.0;
    for (std::uint64_t i = 0; i < dim; ++i) {
        const double p = std::norm(a[i]);
        total += p;
        std::uint64_t bits = i;
        while (bits != 0) {
            p1[static_cast<std::size_t>(std::countr_zero(bits))] += p;
            bits &= bits - 1;
        }
    }
    std::vector<double> z(p1.size());
    for (std::size_t w = 0; w < p1.size(); ++w) {
        z[w] = total - 2.0 * p1[w]; // P(0) - P(1) with P(0) = total - P(1)
    }
    return z;
}

double StateVector::norm_sq() const {
    double n = 0.0;
    for (const amp_t& a : amps_) n += std::norm(a);
    return n;
}

void StateVector::check_norm(double tol) const {
    const double drift = std::abs(norm_sq() - 1.0);
    if (!(drift < tol)) {
        throw numeric_error("state norm drifted by " + std::to_string(drift));
    }
}

} // namespace quanv
