#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "helpers.hpp"
#include "uniprep/circuit.hpp"
#include "uniprep/coloring.hpp"
#include "uniprep/prep.hpp"
#include "uniprep/qasm.hpp"
#include "uniprep/simulate.hpp"

using namespace uniprep;
using test_helpers::parse_qasm_subset;

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    std::size_t at = haystack.find(needle);
    while (at != std::string::npos) {
        ++count;
        at = haystack.find(needle, at + needle.size());
    }
    return count;
}

void require_equivalent_from(const Circuit& original, const Circuit& reparsed,
                             const StateVector& start, double tolerance) {
    REQUIRE(reparsed.wire_count == original.wire_count);
    const StateVector a = simulate(original, start);
    const StateVector b = simulate(reparsed, start);
    for (std::size_t k = 0; k < a.amplitudes.size(); ++k) {
        CAPTURE(k);
        REQUIRE(std::abs(a.amplitudes[k] - b.amplitudes[k]) < tolerance);
    }
}

}  // namespace

TEST_CASE("the two-state circuit exports to the minimal program") {
    REQUIRE(export_qasm(generate(2)) ==
            "OPENQASM 2.0;\n"
            "include \"qelib1.inc\";\n"
            "qreg q[1];\n"
            "ry(pi/2) q[0];\n");
}

TEST_CASE("exported text uses LF line endings and dyadic angles render symbolically") {
    const std::string text = export_qasm(generate(22));
    REQUIRE(text.find('\r') == std::string::npos);
    REQUIRE(text.back() == '\n');
    // The three downward-arc pi/2 rotations expand to ry(pi/4)/ry(-pi/4).
    REQUIRE(text.find("ry(pi/4)") != std::string::npos);
    REQUIRE(text.find("ry(-pi/4)") != std::string::npos);

    Circuit quarter;
    quarter.wire_count = 2;
    quarter = append(std::move(quarter), CryGate{std::numbers::pi / 4.0, 1, Polarity::Positive, 0});
    const std::string quarter_text = export_qasm(quarter);
    REQUIRE(quarter_text.find("ry(pi/8) q[0];") != std::string::npos);
    REQUIRE(quarter_text.find("ry(-pi/8) q[0];") != std::string::npos);
}

TEST_CASE("an anti-controlled rotation is wrapped in exactly two x gates") {
    Circuit circuit;
    circuit.wire_count = 2;
    circuit = append(std::move(circuit), CryGate{0.7, 1, Polarity::Negative, 0});
    const std::string text = export_qasm(circuit);
    REQUIRE(count_occurrences(text, "x q[1];") == 2);
    REQUIRE(count_occurrences(text, "cx q[1],q[0];") == 2);
}

TEST_CASE("decimal angle literals round-trip bit-exactly") {
    const Circuit reparsed = parse_qasm_subset(export_qasm(generate(7)));
    const auto& first = std::get<RyGate>(reparsed.gates.front());
    REQUIRE(first.theta == 2.0 * std::asin(std::sqrt(3.0 / 7.0)));
}

TEST_CASE("exported synthesis circuits re-simulate to the same state") {
    for (const std::uint64_t n : {7, 22, 27, 37, 64}) {
        CAPTURE(n);
        const Circuit original = generate(n);
        const Circuit reparsed = parse_qasm_subset(export_qasm(original));
        require_equivalent_from(original, reparsed, zero_state(original.wire_count), 1e-9);
    }
}

TEST_CASE("the four-gate controlled-ry identity is exact for both polarities") {
    for (const Polarity polarity : {Polarity::Positive, Polarity::Negative}) {
        Circuit circuit;
        circuit.wire_count = 2;
        const CryGate gate{1.234567, 1, polarity, 0};
        circuit = append(std::move(circuit), gate);
        const Circuit reparsed = parse_qasm_subset(export_qasm(circuit));

        const StateVector start = test_helpers::random_state(2, 2024);
        const StateVector via_qasm = simulate(reparsed, start);
        const std::vector<std::complex<double>> direct =
            test_helpers::matrix_apply(test_helpers::gate_matrix(gate, 2), start.amplitudes);
        for (std::size_t k = 0; k < direct.size(); ++k) {
            CAPTURE(static_cast<int>(polarity), k);
            REQUIRE(std::abs(via_qasm.amplitudes[k] - direct[k]) < 1e-12);
        }
    }
}

TEST_CASE("multi-controlled x decomposes correctly when a spare wire exists") {
    SECTION("two mixed-polarity controls on four wires") {
        Circuit circuit;
        circuit.wire_count = 4;
        circuit = append(std::move(circuit),
                         McxGate{{{0, Polarity::Positive}, {2, Polarity::Negative}}, 1});
        const Circuit reparsed = parse_qasm_subset(export_qasm(circuit));
        require_equivalent_from(circuit, reparsed, test_helpers::random_state(4, 31), 1e-9);
    }
    SECTION("three mixed-polarity controls on five wires") {
        Circuit circuit;
        circuit.wire_count = 5;
        circuit = append(
            std::move(circuit),
            McxGate{{{4, Polarity::Negative}, {1, Polarity::Positive}, {0, Polarity::Negative}},
                    2});
        const Circuit reparsed = parse_qasm_subset(export_qasm(circuit));
        require_equivalent_from(circuit, reparsed, test_helpers::random_state(5, 47), 1e-9);
    }
    SECTION("a single positive control is a plain cx") {
        Circuit circuit;
        circuit.wire_count = 2;
        circuit = append(std::move(circuit), McxGate{{{0, Polarity::Positive}}, 1});
        const std::string text = export_qasm(circuit);
        REQUIRE(text.find("cx q[0],q[1];") != std::string::npos);
        REQUIRE(text.find('h') == std::string::npos);
    }
}

TEST_CASE("an mcx covering every wire cannot be exported") {
    Circuit circuit;
    circuit.wire_count = 4;
    circuit = append(
        std::move(circuit),
        McxGate{{{0, Polarity::Positive}, {1, Polarity::Positive}, {2, Polarity::Positive}}, 3});
    REQUIRE_THROWS_AS(export_qasm(circuit), std::runtime_error);
}

TEST_CASE("a full oracle circuit survives the export round-trip") {
    const ColoringProblem problem = line_graph(2, 3);
    const WireLayout lay = layout(problem);
    const Circuit orc = oracle(problem, lay);
    const Circuit reparsed = parse_qasm_subset(export_qasm(orc));

    StateVector probe = zero_state(lay.total_wires);
    apply_gate(probe, XGate{lay.phase_wire});
    apply_gate(probe, HGate{lay.phase_wire});
    for (std::size_t w = 0; w < 4; ++w) {
        apply_gate(probe, HGate{w});
    }
    require_equivalent_from(orc, reparsed, probe, 1e-9);
}

TEST_CASE("parse_problem accepts the documented shapes") {
    const ColoringProblem minimal =
        parse_problem(R"({"vertices":[{"colors":3},{"colors":3}],"edges":[[0,1]]})");
    REQUIRE(minimal.vertex_colors == std::vector<std::uint64_t>{3, 3});
    REQUIRE(minimal.edges ==
            std::vector<std::pair<std::size_t, std::size_t>>{{0, 1}});

    const ColoringProblem lone = parse_problem(R"({"vertices":[{"colors":5}]})");
    REQUIRE(lone.vertex_colors == std::vector<std::uint64_t>{5});
    REQUIRE(lone.edges.empty());
}

TEST_CASE("parse_problem rejects malformed input with a pointed message") {
    const auto require_rejects = [](const std::string& text, const std::string& fragment) {
        CAPTURE(text, fragment);
        try {
            parse_problem(text);
            FAIL("expected std::invalid_argument");
        } catch (const std::invalid_argument& error) {
            REQUIRE(std::string(error.what()).find(fragment) != std::string::npos);
        }
    };
    require_rejects("{nope", "JSON");
    require_rejects(R"({"edges":[]})", "vertices");
    require_rejects(R"({"vertices":[{"hue":3}]})", "colors");
    require_rejects(R"({"vertices":[{"colors":1}]})", "at least 2");
    require_rejects(R"({"vertices":[{"colors":3},{"colors":3}],"edges":[[0,7]]})",
                    "out of range");
    require_rejects(R"({"vertices":[{"colors":3}],"edges":[[0,0]]})", "self-loop");
    require_rejects(R"({"vertices":[{"colors":3},{"colors":3}],"edges":[[0,1],[1,0]]})",
                    "duplicates");
    require_rejects(R"({"vertices":[{"colors":3},{"colors":3}],"edges":[[0]]})", "pair");
}
