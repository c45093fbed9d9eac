#pragma once

// Dense statevector simulator and seeded measurement sampling.
//
// Amplitudes are stored as one complex<double> per basis index; index k's
// bit x is the value of wire x.  Gates are applied in place with stride
// iteration over the target bit, so no per-gate matrices are allocated.
// The dense representation caps out around 26 wires (a gigabyte of
// amplitudes); larger circuits are rejected with CapacityError.
//
// Sampling is deterministic and platform-stable: a std::mt19937_64 stream
// (fully specified by the standard) is mapped to doubles in [0,1) with the
// usual 53-bit construction, then inverted through the cumulative
// distribution.  Identical (state, shots, seed) triples therefore produce
// identical histograms everywhere.

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "uniprep/circuit.hpp"

namespace uniprep {

/// Largest wire count the dense simulator accepts.
inline constexpr std::size_t kMaxSimWires = 26;

/// Thrown when a requested simulation exceeds the dense-amplitude ceiling.
/// Carries the offending wire total so frontends can report it.
struct CapacityError : std::runtime_error {
    explicit CapacityError(std::size_t wires)
        : std::runtime_error("circuit needs " + std::to_string(wires) +
                             " wires, above the simulator ceiling of " +
                             std::to_string(kMaxSimWires)),
          wire_count(wires) {}
    std::size_t wire_count;
};

struct StateVector {
    std::size_t wire_count = 0;
    std::vector<std::complex<double>> amplitudes;
};

/// |0...0> on the given number of wires.
inline StateVector zero_state(std::size_t wires) {
    if (wires > kMaxSimWires) {
        throw CapacityError(wires);
    }
    StateVector state;
    state.wire_count = wires;
    state.amplitudes.assign(std::size_t{1} << wires, {0.0, 0.0});
    state.amplitudes[0] = {1.0, 0.0};
    return state;
}

namespace detail {

inline bool controls_satisfied(std::uint64_t index,
                               const std::vector<std::pair<std::size_t, Polarity>>& controls) {
    for (const auto& [wire, polarity] : controls) {
        const bool bit = (index >> wire) & 1u;
        if (bit != (polarity == Polarity::Positive)) {
            return false;
        }
    }
    return true;
}

}  // namespace detail

/// Applies one gate in place.
inline void apply_gate(StateVector& state, const Gate& gate) {
    detail::validate_gate(gate, state.wire_count);
    auto& amp = state.amplitudes;
    const std::uint64_t dim = amp.size();

    // Rotation shared by RY and CRY on amplitude pairs (k, k|target_mask).
    const auto rotate_pair = [&](std::uint64_t k, std::uint64_t target_mask, double c, double s) {
        const std::complex<double> a0 = amp[k];
        const std::complex<double> a1 = amp[k | target_mask];
        amp[k] = c * a0 - s * a1;
        amp[k | target_mask] = s * a0 + c * a1;
    };

    if (const auto* ry = std::get_if<RyGate>(&gate)) {
        const std::uint64_t tm = std::uint64_t{1} << ry->target;
        const double c = std::cos(ry->theta / 2.0);
        const double s = std::sin(ry->theta / 2.0);
        for (std::uint64_t k = 0; k < dim; ++k) {
            if ((k & tm) == 0) {
                rotate_pair(k, tm, c, s);
            }
        }
    } else if (const auto* cry = std::get_if<CryGate>(&gate)) {
        const std::uint64_t tm = std::uint64_t{1} << cry->target;
        const std::uint64_t cm = std::uint64_t{1} << cry->control;
        const std::uint64_t want = cry->polarity == Polarity::Positive ? cm : 0;
        const double c = std::cos(cry->theta / 2.0);
        const double s = std::sin(cry->theta / 2.0);
        for (std::uint64_t k = 0; k < dim; ++k) {
            if ((k & tm) == 0 && (k & cm) == want) {
                rotate_pair(k, tm, c, s);
            }
        }
    } else if (const auto* x = std::get_if<XGate>(&gate)) {
        const std::uint64_t tm = std::uint64_t{1} << x->target;
        for (std::uint64_t k = 0; k < dim; ++k) {
            if ((k & tm) == 0) {
                std::swap(amp[k], amp[k | tm]);
            }
        }
    } else if (const auto* h = std::get_if<HGate>(&gate)) {
        const std::uint64_t tm = std::uint64_t{1} << h->target;
        const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
        for (std::uint64_t k = 0; k < dim; ++k) {
            if ((k & tm) == 0) {
                const std::complex<double> a0 = amp[k];
                const std::complex<double> a1 = amp[k | tm];
                amp[k] = (a0 + a1) * inv_sqrt2;
                amp[k | tm] = (a0 - a1) * inv_sqrt2;
            }
        }
    } else if (const auto* mcx = std::get_if<McxGate>(&gate)) {
        const std::uint64_t tm = std::uint64_t{1} << mcx->target;
        for (std::uint64_t k = 0; k < dim; ++k) {
            if ((k & tm) == 0 && detail::controls_satisfied(k, mcx->controls)) {
                std::swap(amp[k], amp[k | tm]);
            }
        }
    }
}

/// Runs the circuit on an explicit initial state.
inline StateVector simulate(const Circuit& circuit, StateVector initial) {
    if (initial.wire_count != circuit.wire_count) {
        throw std::invalid_argument("initial state has " + std::to_string(initial.wire_count) +
                                    " wires but the circuit has " +
                                    std::to_string(circuit.wire_count));
    }
    for (const Gate& gate : circuit.gates) {
        apply_gate(initial, gate);
    }
    return initial;
}

/// Runs the circuit from |0...0>.
inline StateVector simulate(const Circuit& circuit) {
    return simulate(circuit, zero_state(circuit.wire_count));
}

/// Measurement record: basis index -> occurrence count.
struct Histogram {
    std::uint64_t shots = 0;
    std::map<std::uint64_t, std::uint64_t> counts;
};

namespace detail {

/// Uniform double in [0, 1) with 53 random bits; bit-stable across
/// platforms, unlike std::uniform_real_distribution.
inline double uniform_unit(std::mt19937_64& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

/// Inverse-CDF draw over an inclusive prefix-sum array: the first index
/// whose cumulative probability exceeds u.  `fallback` absorbs the rare
/// case where rounding left the total marginally below u.
inline std::uint64_t draw_from_cumulative(const std::vector<double>& cumulative, double u,
                                          std::uint64_t fallback) {
    std::uint64_t lo = 0;
    std::uint64_t hi = cumulative.size();
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (cumulative[mid] <= u) {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    return lo < cumulative.size() ? lo : fallback;
}

}  // namespace detail

/// Draws `shots` independent basis indices from the |amplitude|^2
/// distribution of `state`, deterministically in (state, shots, seed).
inline Histogram sample(const StateVector& state, std::uint64_t shots, std::uint64_t seed) {
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

    Histogram histogram;
    histogram.shots = shots;
    std::mt19937_64 engine(seed);
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = detail::uniform_unit(engine);
        const std::uint64_t k = detail::draw_from_cumulative(cumulative, u, last_support);
        ++histogram.counts[k];
    }
    return histogram;
}

}  // namespace uniprep
