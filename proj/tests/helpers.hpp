#pragma once

// Shared test utilities, kept free of any test-framework dependency so the
// acceptance binary can use them too.
//
// The matrix helpers build each gate's full 2^w x 2^w unitary directly
// from its textbook definition — a second, independent implementation of
// gate semantics against which the stride-based simulator is checked.
//
// The QASM helpers re-parse the exporter's own output subset (ry/cx/x/h
// over one register).  The library deliberately ships no QASM importer;
// this parser exists only so tests can round-trip exported circuits.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "uniprep/circuit.hpp"
#include "uniprep/simulate.hpp"

namespace test_helpers {

using Matrix = std::vector<std::vector<std::complex<double>>>;

/// Full unitary of one gate on `wires` wires, built column by column from
/// the definitions: RY = [[cos t/2, -sin t/2], [sin t/2, cos t/2]] on the
/// target bit, controls gating on their polarity, X/H standard.
inline Matrix gate_matrix(const uniprep::Gate& gate, std::size_t wires) {
    const std::size_t dim = std::size_t{1} << wires;
    Matrix matrix(dim, std::vector<std::complex<double>>(dim, 0.0));

    const auto fill_rotation = [&](std::size_t target, double theta, auto&& fires) {
        const double c = std::cos(theta / 2.0);
        const double s = std::sin(theta / 2.0);
        const std::size_t tm = std::size_t{1} << target;
        for (std::size_t col = 0; col < dim; ++col) {
            if (!fires(col)) {
                matrix[col][col] = 1.0;
            } else if ((col & tm) == 0) {
                matrix[col][col] = c;
                matrix[col | tm][col] = s;
            } else {
                matrix[col ^ tm][col] = -s;
                matrix[col][col] = c;
            }
        }
    };

    if (const auto* ry = std::get_if<uniprep::RyGate>(&gate)) {
        fill_rotation(ry->target, ry->theta, [](std::size_t) { return true; });
    } else if (const auto* cry = std::get_if<uniprep::CryGate>(&gate)) {
        const std::size_t cm = std::size_t{1} << cry->control;
        const bool want = cry->polarity == uniprep::Polarity::Positive;
        fill_rotation(cry->target, cry->theta,
                      [&](std::size_t col) { return ((col & cm) != 0) == want; });
    } else if (const auto* x = std::get_if<uniprep::XGate>(&gate)) {
        const std::size_t tm = std::size_t{1} << x->target;
        for (std::size_t col = 0; col < dim; ++col) {
            matrix[col ^ tm][col] = 1.0;
        }
    } else if (const auto* h = std::get_if<uniprep::HGate>(&gate)) {
        const std::size_t tm = std::size_t{1} << h->target;
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (std::size_t col = 0; col < dim; ++col) {
            if ((col & tm) == 0) {
                matrix[col][col] = inv_sqrt2;
                matrix[col | tm][col] = inv_sqrt2;
            } else {
                matrix[col ^ tm][col] = inv_sqrt2;
                matrix[col][col] = -inv_sqrt2;
            }
        }
    } else if (const auto* mcx = std::get_if<uniprep::McxGate>(&gate)) {
        const std::size_t tm = std::size_t{1} << mcx->target;
        for (std::size_t col = 0; col < dim; ++col) {
            bool fires = true;
            for (const auto& [wire, polarity] : mcx->controls) {
                const bool bit = (col >> wire) & 1u;
                if (bit != (polarity == uniprep::Polarity::Positive)) {
                    fires = false;
                    break;
                }
            }
            matrix[fires ? col ^ tm : col][col] = 1.0;
        }
    }
    return matrix;
}

inline std::vector<std::complex<double>> matrix_apply(
    const Matrix& matrix, const std::vector<std::complex<double>>& vec) {
    std::vector<std::complex<double>> result(vec.size(), 0.0);
    for (std::size_t row = 0; row < vec.size(); ++row) {
        for (std::size_t col = 0; col < vec.size(); ++col) {
            result[row] += matrix[row][col] * vec[col];
        }
    }
    return result;
}

/// Deterministic pseudo-random unit statevector for oracle comparisons.
inline uniprep::StateVector random_state(std::size_t wires, std::uint64_t seed) {
    uniprep::StateVector state = uniprep::zero_state(wires);
    std::mt19937_64 engine(seed);
    double norm_sq = 0.0;
    for (auto& amplitude : state.amplitudes) {
        const double re = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
        const double im = static_cast<double>(engine() >> 11) * 0x1.0p-53 - 0.5;
        amplitude = {re, im};
        norm_sq += re * re + im * im;
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    for (auto& amplitude : state.amplitudes) {
        amplitude *= inv;
    }
    return state;
}

/// Evaluates the angle expressions the exporter emits: [-]pi[/K], [-]2*pi,
/// or a plain decimal literal.
inline double parse_qasm_angle(std::string text) {
    double sign = 1.0;
    if (!text.empty() && text.front() == '-') {
        sign = -1.0;
        text.erase(0, 1);
    }
    if (text == "pi") {
        return sign * std::numbers::pi;
    }
    if (text == "2*pi") {
        return sign * 2.0 * std::numbers::pi;
    }
    if (text.rfind("pi/", 0) == 0) {
        const double divisor = std::stod(text.substr(3));
        return sign * std::numbers::pi / divisor;
    }
    return sign * std::stod(text);
}

/// Parses the exporter's output subset back into a Circuit.
inline uniprep::Circuit parse_qasm_subset(const std::string& text) {
    uniprep::Circuit circuit;
    std::size_t position = 0;
    while (position < text.size()) {
        std::size_t end = text.find('\n', position);
        if (end == std::string::npos) {
            end = text.size();
        }
        std::string line = text.substr(position, end - position);
        position = end + 1;
        if (line.empty() || line.rfind("//", 0) == 0 || line.rfind("OPENQASM", 0) == 0 ||
            line.rfind("include", 0) == 0) {
            continue;
        }
        if (line.rfind("qreg", 0) == 0) {
            const std::size_t open = line.find('[');
            const std::size_t close = line.find(']');
            circuit.wire_count = std::stoull(line.substr(open + 1, close - open - 1));
            continue;
        }
        const auto wire_at = [&](std::size_t from) {
            const std::size_t open = line.find('[', from);
            const std::size_t close = line.find(']', open);
            return std::stoull(line.substr(open + 1, close - open - 1));
        };
        if (line.rfind("ry(", 0) == 0) {
            const std::size_t close_paren = line.find(')');
            const double theta = parse_qasm_angle(line.substr(3, close_paren - 3));
            circuit = uniprep::append(std::move(circuit),
                                      uniprep::RyGate{theta, wire_at(close_paren)});
        } else if (line.rfind("cx ", 0) == 0) {
            const std::size_t control = wire_at(0);
            const std::size_t comma = line.find(',');
            const std::size_t target = wire_at(comma);
            circuit = uniprep::append(
                std::move(circuit),
                uniprep::McxGate{{{control, uniprep::Polarity::Positive}}, target});
        } else if (line.rfind("x ", 0) == 0) {
            circuit = uniprep::append(std::move(circuit), uniprep::XGate{wire_at(0)});
        } else if (line.rfind("h ", 0) == 0) {
            circuit = uniprep::append(std::move(circuit), uniprep::HGate{wire_at(0)});
        } else {
            throw std::runtime_error("unexpected QASM line: " + line);
        }
    }
    return circuit;
}

/// Result of one CLI invocation.
struct CliResult {
    int exit_code = -1;
    std::string output;  ///< stdout only
};

/// Runs the frontend with the given argument string, capturing stdout.
inline CliResult run_cli(const std::string& arguments) {
    const std::string command = std::string(UNIPREP_CLI_PATH) + " " + arguments + " 2>/dev/null";
    CliResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        throw std::runtime_error("failed to launch: " + command);
    }
    std::array<char, 4096> buffer;
    std::size_t read_count = 0;
    while ((read_count = std::fread(buffer.data(), 1, buffer.size(), pipe)) > 0) {
        result.output.append(buffer.data(), read_count);
    }
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

/// Extracts the value after "key: " on a metadata line, or throws.
inline std::string metadata_value(const std::string& output, const std::string& key) {
    const std::string needle = "# " + key + ": ";
    const std::size_t at = output.find(needle);
    if (at == std::string::npos) {
        throw std::runtime_error("metadata key not found: " + key);
    }
    const std::size_t start = at + needle.size();
    const std::size_t end = output.find('\n', start);
    return output.substr(start, end - start);
}

}  // namespace test_helpers
