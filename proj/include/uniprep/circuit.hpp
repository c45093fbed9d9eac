#pragma once

// Gate-level circuit representation shared by every other component.
//
// A Circuit is an ordered list of primitive gates over a fixed number of
// wires.  Wire x carries bit x of the basis-state integer (little-endian),
// so wire 0 is the least-significant bit.  Circuits are plain value types:
// once built they are safe to copy, share, and simulate concurrently.

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace uniprep {

/// Control polarity: Positive fires when the control wire reads 1,
/// Negative (an anti-control) fires when it reads 0.
enum class Polarity { Positive, Negative };

/// Single-wire Y-axis rotation by theta radians.
struct RyGate {
    double theta = 0.0;
    std::size_t target = 0;
};

/// Controlled RY: applies the rotation when the control wire matches the
/// polarity.
struct CryGate {
    double theta = 0.0;
    std::size_t control = 0;
    Polarity polarity = Polarity::Positive;
    std::size_t target = 0;
};

/// Pauli-X (bit flip).
struct XGate {
    std::size_t target = 0;
};

/// Hadamard.
struct HGate {
    std::size_t target = 0;
};

/// Multi-controlled X: flips the target when every control wire matches its
/// polarity.  A single positive control is an ordinary CNOT.
struct McxGate {
    std::vector<std::pair<std::size_t, Polarity>> controls;
    std::size_t target = 0;
};

using Gate = std::variant<RyGate, CryGate, XGate, HGate, McxGate>;

/// Ordered gate list over a fixed wire count.
struct Circuit {
    std::size_t wire_count = 0;
    std::vector<Gate> gates;
};

namespace detail {

/// Collects every wire a gate names, in declaration order.
inline std::vector<std::size_t> gate_wires(const Gate& gate) {
    struct Visitor {
        std::vector<std::size_t> operator()(const RyGate& g) const { return {g.target}; }
        std::vector<std::size_t> operator()(const CryGate& g) const { return {g.control, g.target}; }
        std::vector<std::size_t> operator()(const XGate& g) const { return {g.target}; }
        std::vector<std::size_t> operator()(const HGate& g) const { return {g.target}; }
        std::vector<std::size_t> operator()(const McxGate& g) const {
            std::vector<std::size_t> wires;
            wires.reserve(g.controls.size() + 1);
            for (const auto& [wire, polarity] : g.controls) {
                (void)polarity;
                wires.push_back(wire);
            }
            wires.push_back(g.target);
            return wires;
        }
    };
    return std::visit(Visitor{}, gate);
}

inline void validate_gate(const Gate& gate, std::size_t wire_count) {
    if (const auto* ry = std::get_if<RyGate>(&gate); ry && !std::isfinite(ry->theta)) {
        throw std::invalid_argument("gate angle must be finite");
    }
    if (const auto* cry = std::get_if<CryGate>(&gate); cry && !std::isfinite(cry->theta)) {
        throw std::invalid_argument("gate angle must be finite");
    }
    if (const auto* mcx = std::get_if<McxGate>(&gate); mcx && mcx->controls.empty()) {
        throw std::invalid_argument("mcx gate requires at least one control");
    }
    const std::vector<std::size_t> wires = gate_wires(gate);
    for (std::size_t a = 0; a < wires.size(); ++a) {
        if (wires[a] >= wire_count) {
            throw std::invalid_argument("gate wire " + std::to_string(wires[a]) +
                                        " out of range for circuit with " +
                                        std::to_string(wire_count) + " wire(s)");
        }
        for (std::size_t b = a + 1; b < wires.size(); ++b) {
            if (wires[a] == wires[b]) {
                throw std::invalid_argument("gate names wire " + std::to_string(wires[a]) +
                                            " more than once");
            }
        }
    }
}

}  // namespace detail

/// Returns the circuit with one gate appended; validates wire ranges,
/// duplicate wires, and angle finiteness before accepting the gate.
inline Circuit append(Circuit circuit, Gate gate) {
    detail::validate_gate(gate, circuit.wire_count);
    circuit.gates.push_back(std::move(gate));
    return circuit;
}

/// Number of gates touching two or more wires (CRY and MCX; RY/X/H do not).
inline std::size_t two_wire_gate_count(const Circuit& circuit) {
    std::size_t count = 0;
    for (const Gate& gate : circuit.gates) {
        if (std::holds_alternative<CryGate>(gate) || std::holds_alternative<McxGate>(gate)) {
            ++count;
        }
    }
    return count;
}

/// Exact inverse: gates reversed, rotation angles negated.  X, H, and MCX
/// are self-inverse and pass through unchanged.
inline Circuit inverse(const Circuit& circuit) {
    Circuit result;
    result.wire_count = circuit.wire_count;
    result.gates.reserve(circuit.gates.size());
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        Gate gate = *it;
        if (auto* ry = std::get_if<RyGate>(&gate)) {
            ry->theta = -ry->theta;
        } else if (auto* cry = std::get_if<CryGate>(&gate)) {
            cry->theta = -cry->theta;
        }
        result.gates.push_back(std::move(gate));
    }
    return result;
}

/// Appends every gate of `part`, with all wire indices shifted by `offset`,
/// onto `circuit`.  Used to relocate a sub-circuit onto a register window.
inline Circuit embed(Circuit circuit, const Circuit& part, std::size_t offset) {
    for (Gate gate : part.gates) {
        if (auto* ry = std::get_if<RyGate>(&gate)) {
            ry->target += offset;
        } else if (auto* cry = std::get_if<CryGate>(&gate)) {
            cry->control += offset;
            cry->target += offset;
        } else if (auto* x = std::get_if<XGate>(&gate)) {
            x->target += offset;
        } else if (auto* h = std::get_if<HGate>(&gate)) {
            h->target += offset;
        } else if (auto* mcx = std::get_if<McxGate>(&gate)) {
            for (auto& [wire, polarity] : mcx->controls) {
                (void)polarity;
                wire += offset;
            }
            mcx->target += offset;
        }
        circuit = append(std::move(circuit), std::move(gate));
    }
    return circuit;
}

/// Concatenation: `rest` runs after `first`; wire counts must match.
inline Circuit compose(Circuit first, const Circuit& rest) {
    if (first.wire_count != rest.wire_count) {
        throw std::invalid_argument("cannot compose circuits with different wire counts");
    }
    return embed(std::move(first), rest, 0);
}

}  // namespace uniprep
