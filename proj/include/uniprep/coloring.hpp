#pragma once

// Grover graph-coloring search, contrasting two initializers:
//   - Restricted: each vertex register is prepared in a uniform
//     superposition of exactly its N_v colors (the synthesis of prep.hpp),
//     so the search space is the product of the N_v;
//   - Hadamard: plain H on every register wire, which also populates the
//     out-of-range color codes and inflates the space to a power of two.
//
// Wire layout: vertex registers first (vertex order, low wires), then one
// ancilla per edge, then a single phase wire on top.  The oracle compares
// each edge's two registers into its ancilla (1 = colors equal, i.e. a
// conflict), flips the phase wire when no ancilla is set, and uncomputes.
// With the phase wire prepared in |->, that marks exactly the assignments
// whose edge constraints are all satisfied.  Out-of-range colors are left
// to the classical verifier; letting Hadamard mode waste amplitude on them
// is precisely the inefficiency the comparison measures.
//
// The repetition count for each trial follows the standard randomized
// schedule for an unknown solution count: draw r uniformly below a ceiling
// m, measure once after r repetitions, and grow m geometrically (capped at
// the square root of the mode's search-space size) after each failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "uniprep/circuit.hpp"
#include "uniprep/prep.hpp"
#include "uniprep/simulate.hpp"

namespace uniprep {

/// Graph to color: per-vertex color counts and undirected edges.
struct ColoringProblem {
    std::vector<std::uint64_t> vertex_colors;  ///< N_v for each vertex, each >= 2
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Validates vertex count, color ranges, edge indices, self-loops, and
/// duplicate edges; throws std::invalid_argument naming the offender.
inline void validate_problem(const ColoringProblem& problem) {
    if (problem.vertex_colors.empty()) {
        throw std::invalid_argument("problem needs at least one vertex");
    }
    for (std::size_t v = 0; v < problem.vertex_colors.size(); ++v) {
        if (problem.vertex_colors[v] < 2) {
            throw std::invalid_argument("vertex " + std::to_string(v) +
                                        ": colors must be at least 2");
        }
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t e = 0; e < problem.edges.size(); ++e) {
        const auto [u, v] = problem.edges[e];
        if (u >= problem.vertex_colors.size() || v >= problem.vertex_colors.size()) {
            throw std::invalid_argument("edge " + std::to_string(e) +
                                        " references a vertex out of range");
        }
        if (u == v) {
            throw std::invalid_argument("edge " + std::to_string(e) + " is a self-loop on vertex " +
                                        std::to_string(u));
        }
        const auto key = std::minmax(u, v);
        if (!seen.insert(key).second) {
            throw std::invalid_argument("edge " + std::to_string(e) + " duplicates (" +
                                        std::to_string(key.first) + "," +
                                        std::to_string(key.second) + ")");
        }
    }
}

/// One vertex's wire window.
struct VertexRegister {
    std::size_t offset = 0;
    std::size_t width = 0;  ///< ceil(log2 N_v)
};

/// Wire assignment: registers, edge ancillas, phase wire, total.
struct WireLayout {
    std::vector<VertexRegister> registers;
    std::vector<std::size_t> edge_ancillas;
    std::size_t phase_wire = 0;
    std::size_t total_wires = 0;
};

inline WireLayout layout(const ColoringProblem& problem) {
    validate_problem(problem);
    WireLayout result;
    std::size_t next = 0;
    for (const std::uint64_t colors : problem.vertex_colors) {
        const std::size_t width = prep_spec(colors).j;
        result.registers.push_back({next, width});
        next += width;
    }
    for (std::size_t e = 0; e < problem.edges.size(); ++e) {
        result.edge_ancillas.push_back(next++);
    }
    result.phase_wire = next++;
    result.total_wires = next;
    return result;
}

/// Search-space sizes of the two modes: Hadamard explores the full power
/// of two of every register, Restricted only the product of the N_v.
struct SearchSpaces {
    std::uint64_t hadamard = 1;
    std::uint64_t restricted = 1;
};

inline SearchSpaces search_space_sizes(const ColoringProblem& problem) {
    validate_problem(problem);
    SearchSpaces spaces;
    for (const std::uint64_t colors : problem.vertex_colors) {
        const std::uint64_t rounded = std::uint64_t{1} << prep_spec(colors).j;
        if (spaces.hadamard > UINT64_MAX / rounded || spaces.restricted > UINT64_MAX / colors) {
            throw std::overflow_error("search-space size overflows 64 bits");
        }
        spaces.hadamard *= rounded;
        spaces.restricted *= colors;
    }
    return spaces;
}

enum class InitMode { Restricted, Hadamard };

inline const char* mode_name(InitMode mode) {
    return mode == InitMode::Restricted ? "restricted" : "hadamard";
}

/// State-preparation circuit on the full layout.  Restricted mode embeds
/// the uniform-superposition synthesis into each register; Hadamard mode
/// (and any power-of-two register, where the two coincide gate-for-gate)
/// uses plain H wires.  Ancillas and phase wire are untouched.
inline Circuit initializer(const ColoringProblem& problem, const WireLayout& lay, InitMode mode) {
    Circuit circuit;
    circuit.wire_count = lay.total_wires;
    for (std::size_t v = 0; v < problem.vertex_colors.size(); ++v) {
        const std::uint64_t colors = problem.vertex_colors[v];
        const VertexRegister reg = lay.registers[v];
        const bool power_of_two = (colors & (colors - 1)) == 0;
        if (mode == InitMode::Hadamard || power_of_two) {
            for (std::size_t b = 0; b < reg.width; ++b) {
                circuit = append(std::move(circuit), HGate{reg.offset + b});
            }
        } else {
            circuit = embed(std::move(circuit), generate(colors), reg.offset);
        }
    }
    return circuit;
}

namespace detail {

/// Equality comparator for one edge: XOR the narrower register into the
/// wider one, test the wider register for all-zero into the ancilla, and
/// the caller mirrors the block to uncompute.  Missing high bits of the
/// narrower register are treated as constant 0, so they participate only
/// through the wider register's own wires.
inline Circuit edge_compare_block(Circuit circuit, const VertexRegister& a,
                                  const VertexRegister& b, std::size_t ancilla) {
    const VertexRegister& narrow = a.width <= b.width ? a : b;
    const VertexRegister& wide = a.width <= b.width ? b : a;
    for (std::size_t bit = 0; bit < narrow.width; ++bit) {
        circuit = append(std::move(circuit),
                         McxGate{{{narrow.offset + bit, Polarity::Positive}}, wide.offset + bit});
    }
    McxGate test;
    for (std::size_t bit = 0; bit < wide.width; ++bit) {
        test.controls.push_back({wide.offset + bit, Polarity::Negative});
    }
    test.target = ancilla;
    circuit = append(std::move(circuit), std::move(test));
    for (std::size_t bit = narrow.width; bit-- > 0;) {
        circuit = append(std::move(circuit),
                         McxGate{{{narrow.offset + bit, Polarity::Positive}}, wide.offset + bit});
    }
    return circuit;
}

}  // namespace detail

/// Phase oracle: flips the sign of exactly the basis states whose vertex
/// registers differ across every edge.  Requires the phase wire to be in
/// |-> (prepared once per run with X then H); edge ancillas must be |0>
/// and are returned to |0> exactly.
inline Circuit oracle(const ColoringProblem& problem, const WireLayout& lay) {
    Circuit circuit;
    circuit.wire_count = lay.total_wires;

    Circuit compute;
    compute.wire_count = lay.total_wires;
    for (std::size_t e = 0; e < problem.edges.size(); ++e) {
        const auto [u, v] = problem.edges[e];
        compute = detail::edge_compare_block(std::move(compute), lay.registers[u],
                                             lay.registers[v], lay.edge_ancillas[e]);
    }

    circuit = compose(std::move(circuit), compute);
    if (problem.edges.empty()) {
        // No constraints: every assignment is marked.
        circuit = append(std::move(circuit), XGate{lay.phase_wire});
    } else {
        McxGate kick;
        for (const std::size_t ancilla : lay.edge_ancillas) {
            kick.controls.push_back({ancilla, Polarity::Negative});
        }
        kick.target = lay.phase_wire;
        circuit = append(std::move(circuit), std::move(kick));
    }
    // Uncompute: the comparator uses only self-inverse gates, so running
    // the block in reverse order restores every ancilla.
    for (auto it = compute.gates.rbegin(); it != compute.gates.rend(); ++it) {
        circuit = append(std::move(circuit), *it);
    }
    return circuit;
}

/// Diffuser: inverse initializer, reflection about |0...0> on the register
/// wires (X-conjugated multi-controlled phase flip), initializer again.
/// Acts only on register wires, so the restricted mode never repopulates
/// out-of-range colors.
inline Circuit diffuser(const ColoringProblem& problem, const WireLayout& lay, InitMode mode) {
    std::vector<std::size_t> register_wires;
    for (const VertexRegister& reg : lay.registers) {
        for (std::size_t b = 0; b < reg.width; ++b) {
            register_wires.push_back(reg.offset + b);
        }
    }

    const Circuit init = initializer(problem, lay, mode);
    Circuit circuit = inverse(init);
    for (const std::size_t wire : register_wires) {
        circuit = append(std::move(circuit), XGate{wire});
    }
    const std::size_t last = register_wires.back();
    circuit = append(std::move(circuit), HGate{last});
    if (register_wires.size() == 1) {
        circuit = append(std::move(circuit), XGate{last});
    } else {
        McxGate flip;
        for (std::size_t idx = 0; idx + 1 < register_wires.size(); ++idx) {
            flip.controls.push_back({register_wires[idx], Polarity::Positive});
        }
        flip.target = last;
        circuit = append(std::move(circuit), std::move(flip));
    }
    circuit = append(std::move(circuit), HGate{last});
    for (const std::size_t wire : register_wires) {
        circuit = append(std::move(circuit), XGate{wire});
    }
    return compose(std::move(circuit), init);
}

/// Extracts the per-vertex color codes from a measured basis index.
inline std::vector<std::uint64_t> decode_assignment(std::uint64_t basis_index,
                                                    const WireLayout& lay) {
    std::vector<std::uint64_t> colors;
    colors.reserve(lay.registers.size());
    for (const VertexRegister& reg : lay.registers) {
        const std::uint64_t mask = (std::uint64_t{1} << reg.width) - 1;
        colors.push_back((basis_index >> reg.offset) & mask);
    }
    return colors;
}

/// Classical acceptance check: in-range colors and all edges bichromatic.
inline bool is_valid_coloring(const std::vector<std::uint64_t>& assignment,
                              const ColoringProblem& problem) {
    for (std::size_t v = 0; v < assignment.size(); ++v) {
        if (assignment[v] >= problem.vertex_colors[v]) {
            return false;
        }
    }
    for (const auto& [u, v] : problem.edges) {
        if (assignment[u] == assignment[v]) {
            return false;
        }
    }
    return true;
}

/// Randomized repetition schedule: ceiling m starts at `m`, grows by
/// `lambda` after each failed measurement, and saturates at `cap` (the
/// square root of the mode's search-space size when left at 0).  A trial
/// gives up after `max_attempts` measurements; solvable instances at desk
/// scale succeed long before that.
struct GrowthPolicy {
    double lambda = 6.0 / 5.0;
    double m = 1.0;
    double cap = 0.0;
    std::size_t max_attempts = 256;
};

struct TrialResult {
    std::uint64_t repetitions = 0;  ///< Grover repetitions consumed by the trial
    bool success = false;
};

/// Aggregate search outcome.  mean_repetitions averages over successful
/// trials only; it is NaN when no trial succeeded.
struct SearchStats {
    std::vector<TrialResult> trials;
    std::size_t successes = 0;
    double mean_repetitions = 0.0;
};

namespace detail {

/// Deterministic, exactly uniform draw from {0, ..., bound-1}.
inline std::uint64_t uniform_below(std::mt19937_64& engine, std::uint64_t bound) {
    const std::uint64_t limit = (UINT64_MAX / bound) * bound;
    for (;;) {
        const std::uint64_t value = engine();
        if (value < limit) {
            return value % bound;
        }
    }
}

/// One measurement of the full register, drawn from |amp|^2.
inline std::uint64_t measure_once(const StateVector& state, std::mt19937_64& engine) {
    std::vector<double> cumulative(state.amplitudes.size());
    std::uint64_t last_support = 0;
    double running = 0.0;
    for (std::size_t k = 0; k < state.amplitudes.size(); ++k) {
        const double re = state.amplitudes[k].real();
        const double im = state.amplitudes[k].imag();
        const double p = re * re + im * im;
        if (p > 0.0) {
            last_support = k;
        }
        running += p;
        cumulative[k] = running;
    }
    return draw_from_cumulative(cumulative, uniform_unit(engine), last_support);
}

}  // namespace detail

/// Runs `trials` independent searches.  Each trial seeds its own generator
/// from (seed, trial index), so results are reproducible and independent
/// of execution order.
inline SearchStats run_search(const ColoringProblem& problem, InitMode mode,
                              const GrowthPolicy& policy, std::size_t trials,
                              std::uint64_t seed) {
    validate_problem(problem);
    const WireLayout lay = layout(problem);
    if (lay.total_wires > kMaxSimWires) {
        throw CapacityError(lay.total_wires);
    }
    const SearchSpaces spaces = search_space_sizes(problem);
    const double default_cap = std::sqrt(static_cast<double>(
        mode == InitMode::Restricted ? spaces.restricted : spaces.hadamard));
    const double cap = policy.cap > 0.0 ? policy.cap : default_cap;

    const Circuit init = initializer(problem, lay, mode);
    const Circuit orc = oracle(problem, lay);
    const Circuit diff = diffuser(problem, lay, mode);

    SearchStats stats;
    stats.trials.reserve(trials);
    double repetition_sum = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        std::seed_seq sequence{
            static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
            static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(
                                                   static_cast<std::uint64_t>(trial) >> 32)};
        std::mt19937_64 engine(sequence);

        TrialResult result;
        double m = std::max(policy.m, 1.0);
        for (std::size_t attempt = 0; attempt < policy.max_attempts; ++attempt) {
            const auto bound = static_cast<std::uint64_t>(std::ceil(m));
            const std::uint64_t r = detail::uniform_below(engine, bound);

            StateVector state = zero_state(lay.total_wires);
            apply_gate(state, XGate{lay.phase_wire});
            apply_gate(state, HGate{lay.phase_wire});
            state = simulate(init, std::move(state));
            for (std::uint64_t rep = 0; rep < r; ++rep) {
                state = simulate(orc, std::move(state));
                state = simulate(diff, std::move(state));
            }
            result.repetitions += r;

            const std::uint64_t outcome = detail::measure_once(state, engine);
            if (is_valid_coloring(decode_assignment(outcome, lay), problem)) {
                result.success = true;
                break;
            }
            m = std::min(policy.lambda * m, cap);
        }
        if (result.success) {
            ++stats.successes;
            repetition_sum += static_cast<double>(result.repetitions);
        }
        stats.trials.push_back(result);
    }
    stats.mean_repetitions = stats.successes == 0
                                 ? std::numeric_limits<double>::quiet_NaN()
                                 : repetition_sum / static_cast<double>(stats.successes);
    return stats;
}

/// Path graph on `nodes` vertices, every vertex with the same color count.
inline ColoringProblem line_graph(std::size_t nodes, std::uint64_t colors) {
    ColoringProblem problem;
    problem.vertex_colors.assign(nodes, colors);
    for (std::size_t v = 0; v + 1 < nodes; ++v) {
        problem.edges.push_back({v, v + 1});
    }
    return problem;
}

}  // namespace uniprep
