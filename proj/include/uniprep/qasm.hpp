#pragma once

// OpenQASM 2.0 export and problem-file parsing: the interchange boundary
// with external toolchains.
//
// Export emits only `ry`, `cx`, `x`, and `h` statements so the output runs
// on any QASM 2.0 stack without assuming a controlled-ry in its gate
// library.  Controlled rotations expand to the standard four-gate identity
// (half rotation, CNOT, negated half rotation, CNOT); anti-controls wrap
// their control wire in a pair of `x` gates.
//
// A multi-controlled X expands as H on the target, then a multi-controlled
// phase flip over controls-plus-target, then H again.  The phase flip is
// realized as a multi-controlled ry(2*pi) — a full turn, i.e. -identity —
// aimed at a borrowed wire outside the gate, whose own state is untouched
// up to that global sign.  The borrow is unavoidable rather than a
// convenience: every gate listed above acts with determinant +1 on three
// or more wires, while a Toffoli-style flip has determinant -1, so no
// expansion of this gate set on exactly the gate's own wires can exist.
// Export therefore requires one spare wire; every circuit this library
// builds has one wherever an MCX appears.
//
// Import is deliberately one-way: the library consumes only problem JSON,
// not QASM.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "uniprep/circuit.hpp"
#include "uniprep/coloring.hpp"

namespace uniprep {

namespace detail {

/// Shortest %.17g rendering: round-trips any double exactly.
inline std::string format_double(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

/// Angle text for QASM: exact multiples pi/2^k (and 2*pi) render
/// symbolically so the output stays readable and bit-faithful; every other
/// value renders as a 17-significant-digit literal.
inline std::string format_qasm_angle(double theta) {
    const double magnitude = theta < 0 ? -theta : theta;
    const std::string sign = theta < 0 ? "-" : "";
    if (magnitude == 2.0 * std::numbers::pi) {
        return sign + "2*pi";
    }
    double candidate = std::numbers::pi;
    for (std::uint64_t divisor = 1; divisor <= (std::uint64_t{1} << 40); divisor <<= 1) {
        if (magnitude == candidate) {
            return divisor == 1 ? sign + "pi" : sign + "pi/" + std::to_string(divisor);
        }
        candidate /= 2.0;
    }
    return format_double(theta);
}

struct QasmWriter {
    std::string body;
    std::size_t wire_count = 0;

    void line(const std::string& text) {
        body += text;
        body += '\n';
    }
    void ry(double theta, std::size_t target) {
        line("ry(" + format_qasm_angle(theta) + ") q[" + std::to_string(target) + "];");
    }
    void cx(std::size_t control, std::size_t target) {
        line("cx q[" + std::to_string(control) + "],q[" + std::to_string(target) + "];");
    }
    void x(std::size_t target) { line("x q[" + std::to_string(target) + "];"); }
    void h(std::size_t target) { line("h q[" + std::to_string(target) + "];"); }

    /// ry(theta) on target applied only when the control reads 1.
    void controlled_ry(double theta, std::size_t control, std::size_t target) {
        ry(theta / 2.0, target);
        cx(control, target);
        ry(-theta / 2.0, target);
        cx(control, target);
    }

    /// ry(theta) on target gated on all of `controls' reading 1, by the
    /// recursive halving identity; exact for any control count.
    void multi_controlled_ry(const std::vector<std::size_t>& controls, double theta,
                             std::size_t target) {
        if (controls.empty()) {
            ry(theta, target);
            return;
        }
        if (controls.size() == 1) {
            controlled_ry(theta, controls.front(), target);
            return;
        }
        std::vector<std::size_t> rest(controls.begin(), controls.end() - 1);
        const std::size_t last = controls.back();
        multi_controlled_ry(rest, theta / 2.0, target);
        cx(last, target);
        multi_controlled_ry(rest, -theta / 2.0, target);
        cx(last, target);
    }

    void mcx(const McxGate& gate) {
        for (const auto& [wire, polarity] : gate.controls) {
            if (polarity == Polarity::Negative) {
                x(wire);
            }
        }
        if (gate.controls.size() == 1) {
            cx(gate.controls.front().first, gate.target);
        } else {
            // Phase-flip set: all controls plus the target.
            std::vector<std::size_t> flip_set;
            for (const auto& [wire, polarity] : gate.controls) {
                (void)polarity;
                flip_set.push_back(wire);
            }
            flip_set.push_back(gate.target);

            std::size_t borrowed = 0;
            while (borrowed < wire_count &&
                   std::find(flip_set.begin(), flip_set.end(), borrowed) != flip_set.end()) {
                ++borrowed;
            }
            if (borrowed == wire_count) {
                throw std::runtime_error(
                    "mcx export needs one wire outside the gate as workspace; none is free");
            }
            h(gate.target);
            multi_controlled_ry(flip_set, 2.0 * std::numbers::pi, borrowed);
            h(gate.target);
        }
        for (const auto& [wire, polarity] : gate.controls) {
            if (polarity == Polarity::Negative) {
                x(wire);
            }
        }
    }
};

}  // namespace detail

/// Serializes a circuit to OpenQASM 2.0 text (UTF-8, LF line endings).
inline std::string export_qasm(const Circuit& circuit) {
    bool has_cry = false;
    bool has_wide_mcx = false;
    for (const Gate& gate : circuit.gates) {
        if (std::holds_alternative<CryGate>(gate)) {
            has_cry = true;
        }
        if (const auto* mcx = std::get_if<McxGate>(&gate); mcx && mcx->controls.size() >= 2) {
            has_wide_mcx = true;
        }
    }

    std::string text;
    text += "OPENQASM 2.0;\n";
    text += "include \"qelib1.inc\";\n";
    if (has_cry) {
        text += "// controlled-ry expands to ry(t/2), cx, ry(-t/2), cx;"
                " anti-controls are wrapped in x gates\n";
    }
    if (has_wide_mcx) {
        text += "// multi-controlled x expands to h, multi-controlled ry(2*pi)"
                " phase kick on a borrowed wire, h\n";
    }
    text += "qreg q[" + std::to_string(circuit.wire_count) + "];\n";

    detail::QasmWriter writer;
    writer.wire_count = circuit.wire_count;
    for (const Gate& gate : circuit.gates) {
        if (const auto* ry = std::get_if<RyGate>(&gate)) {
            writer.ry(ry->theta, ry->target);
        } else if (const auto* cry = std::get_if<CryGate>(&gate)) {
            if (cry->polarity == Polarity::Negative) {
                writer.x(cry->control);
            }
            writer.controlled_ry(cry->theta, cry->control, cry->target);
            if (cry->polarity == Polarity::Negative) {
                writer.x(cry->control);
            }
        } else if (const auto* x = std::get_if<XGate>(&gate)) {
            writer.x(x->target);
        } else if (const auto* h = std::get_if<HGate>(&gate)) {
            writer.h(h->target);
        } else if (const auto* mcx = std::get_if<McxGate>(&gate)) {
            writer.mcx(*mcx);
        }
    }
    return text + writer.body;
}

/// Parses and validates a coloring problem from JSON text of the form
/// {"vertices": [{"colors": 3}, ...], "edges": [[0, 1], ...]}.
inline ColoringProblem parse_problem(const std::string& text) {
    nlohmann::json document;
    try {
        document = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& error) {
        throw std::invalid_argument(std::string("problem file is not valid JSON: ") +
                                    error.what());
    }
    if (!document.is_object() || !document.contains("vertices") ||
        !document["vertices"].is_array()) {
        throw std::invalid_argument("problem file needs a top-level \"vertices\" array");
    }

    ColoringProblem problem;
    std::size_t index = 0;
    for (const auto& vertex : document["vertices"]) {
        if (!vertex.is_object() || !vertex.contains("colors") ||
            !vertex["colors"].is_number_unsigned()) {
            throw std::invalid_argument("vertex " + std::to_string(index) +
                                        ": expected an object with an unsigned \"colors\" field");
        }
        problem.vertex_colors.push_back(vertex["colors"].get<std::uint64_t>());
        ++index;
    }
    if (document.contains("edges")) {
        if (!document["edges"].is_array()) {
            throw std::invalid_argument("\"edges\" must be an array of [u, v] pairs");
        }
        index = 0;
        for (const auto& edge : document["edges"]) {
            if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_unsigned() ||
                !edge[1].is_number_unsigned()) {
                throw std::invalid_argument("edge " + std::to_string(index) +
                                            ": expected a [u, v] pair of vertex indices");
            }
            problem.edges.push_back({edge[0].get<std::size_t>(), edge[1].get<std::size_t>()});
            ++index;
        }
    }
    validate_problem(problem);
    return problem;
}

}  // namespace uniprep
