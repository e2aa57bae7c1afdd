#include "quanv/circuit.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "quanv/rng.hpp"

namespace quanv {

CircuitSpec generate_random_circuit(int num_qubits, int depth, std::uint64_t seed) {
    if (num_qubits < 2 || num_qubits > StateVector::max_qubits) {
        throw config_error("random circuit needs 2.." + std::to_string(StateVector::max_qubits) +
                           " qubits, got " + std::to_string(num_qubits));
    }
    if (depth < 1) {
        throw config_error("random circuit depth must be >= 1, got " + std::to_string(depth));
    }

    CircuitSpec spec;
    spec.num_qubits = num_qubits;
    spec.depth = depth;
    spec.seed = seed;

    Rng rng(seed);
    constexpr std::array<GateKind, 3> rotations{GateKind::RX, GateKind::RY, GateKind::RZ};
    for (int layer = 0; layer < depth; ++layer) {
        for (int wire = 0; wire < num_qubits; ++wire) {
            const GateKind kind = rotations[rng.next_below(3)];
            const double angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
            spec.gates.push_back({kind, wire, -1, angle});
        }
        for (int wire = 0; wire < num_qubits; ++wire) {
            if (rng.coin()) {
                spec.gates.push_back(Gate::cnot(wire, (wire + 1) % num_qubits));
            }
        }
    }
    return spec;
}

std::vector<double> run_circuit(const CircuitSpec& circuit, std::span<const double> input_angles) {
    if (static_cast<int>(input_angles.size()) != circuit.num_qubits) {
        throw shape_error("circuit expects " + std::to_string(circuit.num_qubits) +
                          " input angles, got " + std::to_string(input_angles.size()));
    }
    for (double a : input_angles) {
        if (!std::isfinite(a)) throw numeric_error("non-finite input angle");
    }

    StateVector state(circuit.num_qubits);
    for (int wire = 0; wire < circuit.num_qubits; ++wire) {
        state.apply_ry(wire, input_angles[static_cast<std::size_t>(wire)]);
    }
    for (const Gate& gate : circuit.gates) {
        state.apply(gate);
    }
    state.check_norm(1e-9);
    return state.expectation_z_all();
}

namespace {

std::string format_angle(double angle) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", angle);
    return buf;
}

[[noreturn]] void parse_fail(int line_no, const std::string& why) {
    throw data_error("circuit parse error at line " + std::to_string(line_no) + ": " + why);
}

} // namespace

std::string serialize_circuit(const CircuitSpec& circuit) {
    std::string out;
    out += "# qubits=" + std::to_string(circuit.num_qubits) + " depth=" +
           std::to_string(circuit.depth) + " seed=" + std::to_string(circuit.seed) + "\n";
    out += std::string("# prng=") + Rng::algorithm + "\n";
    for (const Gate& g : circuit.gates) {
        out += gate_name(g.kind);
        out += ' ';
        out += std::to_string(g.target);
        if (g.kind == GateKind::CNOT) {
            out += ' ';
            out += std::to_string(g.control);
        } else {
            out += ' ';
            out += format_angle(g.angle);
        }
        out += '\n';
    }
    return out;
}

CircuitSpec deserialize_circuit(const std::string& text) {
    CircuitSpec spec;
    bool header_seen = false;

    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        if (line[0] == '#') {
            // header: scan for key=value tokens we know
            std::istringstream hs(line.substr(1));
            std::string token;
            while (hs >> token) {
                const auto eq = token.find('=');
                if (eq == std::string::npos) continue;
                const std::string key = token.substr(0, eq);
                const std::string value = token.substr(eq + 1);
                try {
                    if (key == "qubits") {
                        spec.num_qubits = std::stoi(value);
                        header_seen = true;
                    } else if (key == "depth") {
                        spec.depth = std::stoi(value);
                    } else if (key == "seed") {
                        spec.seed = std::stoull(value);
                    }
                    // unknown header keys (e.g. prng) are informational
                } catch (const std::exception&) {
                    parse_fail(line_no, "bad header value '" + token + "'");
                }
            }
            continue;
        }

        std::istringstream gs(line);
        std::string kind;
        gs >> kind;
        Gate g;
        if (kind == "RX" || kind == "RY" || kind == "RZ") {
            g.kind = kind == "RX" ? GateKind::RX : kind == "RY" ? GateKind::RY : GateKind::RZ;
            double angle = 0.0;
            if (!(gs >> g.target >> angle)) parse_fail(line_no, "expected '" + kind + " wire angle'");
            g.angle = angle;
        } else if (kind == "CNOT") {
            g.kind = GateKind::CNOT;
            if (!(gs >> g.target >> g.control)) parse_fail(line_no, "expected 'CNOT target control'");
        } else {
            parse_fail(line_no, "unknown gate '" + kind + "'");
        }
        std::string trailing;
        if (gs >> trailing) parse_fail(line_no, "trailing token '" + trailing + "'");
        spec.gates.push_back(g);
    }

    if (!header_seen || spec.num_qubits < 1) {
        throw data_error("circuit parse error: missing or invalid '# qubits=...' header");
    }
    for (std::size_t i = 0; i < spec.gates.size(); ++i) {
        const Gate& g = spec.gates[i];
        const bool target_ok = g.target >= 0 && g.target < spec.num_qubits;
        const bool control_ok = g.kind != GateKind::CNOT ||
                                (g.control >= 0 && g.control < spec.num_qubits && g.control != g.target);
        if (!target_ok || !control_ok) {
            throw data_error("circuit parse error: gate " + std::to_string(i) +
                             " has wires outside 0.." + std::to_string(spec.num_qubits - 1));
        }
    }
    return spec;
}

void save_circuit(const CircuitSpec& circuit, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot open circuit file for writing: " + path.string());
    out << serialize_circuit(circuit);
    if (!out) throw data_error("failed writing circuit file: " + path.string());
}

CircuitSpec load_circuit(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open circuit file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return deserialize_circuit(buf.str());
}

} // namespace quanv
