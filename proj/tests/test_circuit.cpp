#include <cmath>
#include <numbers>

#include <doctest.h>

#include "quanv/circuit.hpp"
#include "quanv/rng.hpp"
#include "support/fixtures.hpp"

using namespace quanv;
using std::numbers::pi;

TEST_CASE("generation is deterministic") {
    const CircuitSpec a = generate_random_circuit(16, 2, 42);
    const CircuitSpec b = generate_random_circuit(16, 2, 42);
    CHECK(a == b);
    CHECK(serialize_circuit(a) == serialize_circuit(b));
}

TEST_CASE("generation arguments are validated") {
    CHECK_THROWS_AS(generate_random_circuit(1, 1, 0), config_error);
    CHECK_THROWS_AS(generate_random_circuit(4, 0, 0), config_error);
    CHECK_THROWS_AS(generate_random_circuit(17, 1, 0), config_error);
}

TEST_CASE("layer structure: rotations then CNOTs") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const CircuitSpec c = generate_random_circuit(2, 1, seed);
        REQUIRE(c.gates.size() >= 2);
        REQUIRE(c.gates.size() <= 4);
        CHECK(c.gates[0].kind != GateKind::CNOT);
        CHECK(c.gates[0].target == 0);
        CHECK(c.gates[1].kind != GateKind::CNOT);
        CHECK(c.gates[1].target == 1);
        for (std::size_t i = 2; i < c.gates.size(); ++i) CHECK(c.gates[i].kind == GateKind::CNOT);
    }
}

TEST_CASE("depth multiplies the layer pattern") {
    const CircuitSpec c = generate_random_circuit(3, 4, 123);
    // each layer: exactly 3 rotations, then 0..3 CNOTs
    std::size_t i = 0;
    for (int layer = 0; layer < 4; ++layer) {
        for (int w = 0; w < 3; ++w, ++i) {
            REQUIRE(i < c.gates.size());
            CHECK(c.gates[i].kind != GateKind::CNOT);
            CHECK(c.gates[i].target == w);
        }
        while (i < c.gates.size() && c.gates[i].kind == GateKind::CNOT) ++i;
    }
    CHECK(i == c.gates.size());
}

TEST_CASE("different seeds change the readout") {
    const std::vector<double> angles = {0.3, 1.1, 2.0, 2.9};
    int distinct = 0;
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto a = run_circuit(generate_random_circuit(4, 2, 2 * s), angles);
        const auto b = run_circuit(generate_random_circuit(4, 2, 2 * s + 1), angles);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
        if (worst > 1e-6) ++distinct;
    }
    CHECK(distinct == 10);
}

TEST_CASE("run_circuit with identity U is the product-state law") {
    CircuitSpec id;
    id.num_qubits = 2;
    id.depth = 0;

    const auto out = run_circuit(id, std::vector<double>{0.0, pi});
    REQUIRE(out.size() == 2);
    CHECK(out[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out[1] == doctest::Approx(-1.0).epsilon(1e-12));

    CircuitSpec id4;
    id4.num_qubits = 4;
    const auto mid = run_circuit(id4, std::vector<double>(4, pi / 2.0));
    for (double v : mid) CHECK(std::abs(v) < 1e-10);
}

TEST_CASE("run_circuit validates input") {
    const CircuitSpec c = generate_random_circuit(4, 1, 0);
    CHECK_THROWS_AS(run_circuit(c, std::vector<double>{0.0, 0.0}), shape_error);
    CHECK_THROWS_AS(run_circuit(c, std::vector<double>{0.0, 0.0, 0.0, NAN}), numeric_error);
}

TEST_CASE("outputs stay in [-1, 1]") {
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        const CircuitSpec c = generate_random_circuit(4, 2, rng.next_u64());
        std::vector<double> angles(4);
        for (double& a : angles) a = rng.uniform(0.0, pi);
        for (double v : run_circuit(c, angles)) {
            CHECK(v >= -1.0);
            CHECK(v <= 1.0);
        }
    }
}

// Frozen readout of the (4 qubits, depth 2, seed 42) circuit on zero
// angles, first produced by the dense-matrix reference simulator in
// tests/support/oracle.* and pinned here as a regression value.
TEST_CASE("golden readout of the seed-42 depth-2 4-qubit circuit") {
    const CircuitSpec c = generate_random_circuit(4, 2, 42);
    const auto out = run_circuit(c, std::vector<double>{0.0, 0.0, 0.0, 0.0});
    REQUIRE(out.size() == 4);
    CHECK(std::abs(out[0] - -0.12932547835879757) < 1e-12);
    CHECK(std::abs(out[1] - -0.10184619819930121) < 1e-12);
    CHECK(std::abs(out[2] - -0.6218266741066707) < 1e-12);
    CHECK(std::abs(out[3] - 0.78413448515553363) < 1e-12);
}

TEST_CASE("permuting input angles changes the default circuit's output") {
    const CircuitSpec c = generate_random_circuit(16, 2, 42);
    std::vector<double> angles(16);
    for (std::size_t i = 0; i < 16; ++i) angles[i] = pi * static_cast<double>(i) / 16.0;
    const auto base = run_circuit(c, angles);

    std::vector<double> swapped = angles;
    std::swap(swapped[0], swapped[15]);
    const auto permuted = run_circuit(c, swapped);

    double worst = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
        worst = std::max(worst, std::abs(base[i] - permuted[i]));
    }
    CHECK(worst > 1e-6);
}

TEST_CASE("serialize round trip on 100 random specs") {
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_below(15));
        const int depth = 1 + static_cast<int>(rng.next_below(3));
        const CircuitSpec c = generate_random_circuit(n, depth, rng.next_u64());
        const CircuitSpec back = deserialize_circuit(serialize_circuit(c));
        CHECK(back == c);
    }
}

TEST_CASE("header fields parse back") {
    const std::string text = "# qubits=16 depth=2 seed=42\nRY 0 1.5\n";
    const CircuitSpec c = deserialize_circuit(text);
    CHECK(c.num_qubits == 16);
    CHECK(c.depth == 2);
    CHECK(c.seed == 42);
    REQUIRE(c.gates.size() == 1);
    CHECK(c.gates[0] == Gate::ry(0, 1.5));
}

TEST_CASE("parse errors name the line") {
    const std::string bad = "# qubits=4 depth=1 seed=0\nRY 0 1.0\nRW 3 1.0\n";
    try {
        deserialize_circuit(bad);
        FAIL("expected data_error");
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    CHECK_THROWS_AS(deserialize_circuit("RY 0 1.0\n"), data_error);        // missing header
    CHECK_THROWS_AS(deserialize_circuit("# qubits=2 depth=1 seed=0\nRY 5 1.0\n"),
                    data_error);                                            // wire out of range
    CHECK_THROWS_AS(deserialize_circuit("# qubits=2 depth=1 seed=0\nRY 0 1.0 extra\n"),
                    data_error);                                            // trailing tokens
}

TEST_CASE("file round trip") {
    fixtures::TmpDir tmp;
    const CircuitSpec c = generate_random_circuit(16, 2, 42);
    const auto path = tmp / "circuit.txt";
    save_circuit(c, path);
    CHECK(load_circuit(path) == c);
    CHECK_THROWS_AS(load_circuit(tmp / "missing.txt"), data_error);
}
