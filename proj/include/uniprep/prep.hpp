#pragma once

// Uniform-superposition state preparation.
//
// generate(n) synthesizes a circuit on ceil(log2 n) wires — no ancillas —
// that maps |0...0> to the state with amplitude 1/sqrt(n) on basis states
// 0..n-1 and amplitude exactly 0 elsewhere, using only RY and CRY gates.
//
// The construction works in two phases over the wires:
//   - the first i wires (i = trailing zeros of n) get uncontrolled pi/2
//     rotations, since those bits are independently equidistributed;
//   - an "upward arc" walks from the top wire downward, rotating each wire
//     whose bit in (n-1) is set by an angle that reproduces the proportion
//     of target states holding 1 on that bit, each rotation controlled by
//     the previously rotated wire;
//   - a "downward arc" walks back up, splitting the remaining probability
//     with pi/2 rotations anti-controlled by the entangled wire above.
//
// Alongside the generator this header provides the two-wire-gate cost
// predictions: a closed form that matches the generated circuits exactly,
// and a published summation form that disagrees with the closed form for
// some n (both are exposed; `count` output flags disagreements).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "uniprep/circuit.hpp"

namespace uniprep {

/// Derived shape parameters of the prep circuit for a given n.
struct PrepSpec {
    std::uint64_t n = 1;  ///< number of basis states in the superposition
    std::size_t j = 0;    ///< wire count, ceil(log2 n)
    std::size_t i = 0;    ///< trailing zeros of n (independent low wires)
};

inline PrepSpec prep_spec(std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("superposition size must be at least 1");
    }
    PrepSpec spec;
    spec.n = n;
    spec.j = 0;
    while ((std::uint64_t{1} << spec.j) < n) {
        ++spec.j;
    }
    spec.i = 0;
    while (spec.i < spec.j && ((n >> spec.i) & 1u) == 0) {
        ++spec.i;
    }
    return spec;
}

/// Rotation angle for wire x: 2*asin(sqrt((n mod 2^x) / d)) where d is n
/// when the control stack c is empty and n mod 2^{c_last} otherwise.  The
/// ratio is the proportion of remaining target states holding 1 on bit x.
inline double angle(std::uint64_t n, std::size_t x, const std::vector<std::size_t>& c) {
    if (n == 0) {
        throw std::invalid_argument("superposition size must be at least 1");
    }
    const std::uint64_t numerator = n % (std::uint64_t{1} << x);
    const std::uint64_t denominator = c.empty() ? n : n % (std::uint64_t{1} << c.back());
    if (denominator == 0) {
        throw std::domain_error("angle denominator n mod 2^c_last is zero");
    }
    return 2.0 * std::asin(std::sqrt(static_cast<double>(numerator) /
                                     static_cast<double>(denominator)));
}

/// One planned rotation of the prep circuit, carrying the exact ratio
/// behind its angle so callers can render closed-form angle strings.
struct PlannedRotation {
    std::size_t target = 0;
    std::optional<std::size_t> control;            ///< empty for plain RY
    Polarity polarity = Polarity::Positive;
    bool is_half_pi = false;                       ///< theta == pi/2 exactly
    std::uint64_t numerator = 0;                   ///< reduced; unused when is_half_pi
    std::uint64_t denominator = 1;
};

inline double planned_theta(const PlannedRotation& rotation) {
    if (rotation.is_half_pi) {
        return std::numbers::pi / 2.0;
    }
    return 2.0 * std::asin(std::sqrt(static_cast<double>(rotation.numerator) /
                                     static_cast<double>(rotation.denominator)));
}

/// Closed-form angle string: "pi/2" or "2*asin(sqrt(p/q))".
inline std::string planned_angle_text(const PlannedRotation& rotation) {
    if (rotation.is_half_pi) {
        return "pi/2";
    }
    return "2*asin(sqrt(" + std::to_string(rotation.numerator) + "/" +
           std::to_string(rotation.denominator) + "))";
}

/// Gate-by-gate plan of generate(n), in application order.
inline std::vector<PlannedRotation> plan(std::uint64_t n) {
    const PrepSpec spec = prep_spec(n);
    std::vector<PlannedRotation> rotations;
    if (n == 1) {
        return rotations;
    }
    if (n == 2) {
        PlannedRotation rotation;
        rotation.target = 0;
        rotation.is_half_pi = true;
        rotations.push_back(rotation);
        return rotations;
    }

    // Independent low wires: equal probability of 0 and 1 on each.
    for (std::size_t w = 0; w < spec.i; ++w) {
        PlannedRotation rotation;
        rotation.target = w;
        rotation.is_half_pi = true;
        rotations.push_back(rotation);
    }

    // Upward arc: rotate each wire whose bit in (n-1) is set, controlled by
    // the last wire rotated, tracking entangled wires on a stack.
    std::vector<std::size_t> stack;
    const auto up_first = static_cast<std::int64_t>(spec.j) - 1;
    const auto up_last = static_cast<std::int64_t>(spec.i);
    for (std::int64_t x = up_first; x >= up_last; --x) {
        if (((n - 1) >> x & 1u) == 0) {
            continue;
        }
        PlannedRotation rotation;
        rotation.target = static_cast<std::size_t>(x);
        std::uint64_t numerator = n % (std::uint64_t{1} << x);
        std::uint64_t denominator = n;
        if (!stack.empty()) {
            rotation.control = stack.back();
            rotation.polarity = Polarity::Positive;
            denominator = n % (std::uint64_t{1} << stack.back());
        }
        const std::uint64_t divisor = std::gcd(numerator, denominator);
        rotation.numerator = numerator / divisor;
        rotation.denominator = denominator / divisor;
        rotation.is_half_pi = (rotation.denominator == 2 * rotation.numerator);
        rotations.push_back(rotation);
        stack.push_back(static_cast<std::size_t>(x));
    }

    // Downward arc: split the remaining probability on each lower wire with
    // a pi/2 rotation anti-controlled by the nearest entangled wire above.
    for (std::size_t x = spec.i; x + 1 < spec.j; ++x) {
        if (!stack.empty() && x == stack.back()) {
            stack.pop_back();
        }
        PlannedRotation rotation;
        rotation.target = x;
        rotation.control = stack.back();
        rotation.polarity = Polarity::Negative;
        rotation.is_half_pi = true;
        rotations.push_back(rotation);
    }
    return rotations;
}

/// Synthesizes the uniform-superposition circuit for n basis states.
inline Circuit generate(std::uint64_t n) {
    const PrepSpec spec = prep_spec(n);
    Circuit circuit;
    circuit.wire_count = spec.j;
    for (const PlannedRotation& rotation : plan(n)) {
        const double theta = planned_theta(rotation);
        if (rotation.control) {
            circuit = append(std::move(circuit),
                             CryGate{theta, *rotation.control, rotation.polarity,
                                     rotation.target});
        } else {
            circuit = append(std::move(circuit), RyGate{theta, rotation.target});
        }
    }
    return circuit;
}

namespace detail {

/// Population count of x's binary representation.
inline std::size_t count1(std::uint64_t x) {
    std::size_t bits = 0;
    for (; x != 0; x >>= 1) {
        bits += x & 1u;
    }
    return bits;
}

/// Largest i such that n / 2^i is an integer greater than 1: the trailing
/// zero count, except for powers of two where the "greater than 1" clause
/// steps one level down.
inline std::size_t maxp(std::uint64_t n) {
    std::size_t trailing = 0;
    while (((n >> trailing) & 1u) == 0) {
        ++trailing;
    }
    const bool power_of_two = (n & (n - 1)) == 0;
    return (power_of_two && trailing > 0) ? trailing - 1 : trailing;
}

}  // namespace detail

/// Closed-form two-wire gate count of generate(n):
/// count1(n-1) - 2*maxp(n) + ceil(log2 n) - 2, with n = 1, 2 fixed at 0.
inline std::size_t predicted_two_wire_count(std::uint64_t n) {
    const PrepSpec spec = prep_spec(n);
    if (n <= 2) {
        return 0;
    }
    const auto value = static_cast<std::int64_t>(detail::count1(n - 1)) -
                       2 * static_cast<std::int64_t>(detail::maxp(n)) +
                       static_cast<std::int64_t>(spec.j) - 2;
    return static_cast<std::size_t>(value < 0 ? 0 : value);
}

/// The published summation form of the two-wire gate count, evaluated
/// literally with exact integer arithmetic:
///   sum_{i=1}^{j-1} ( floor((n mod 2^i) / 2^{i-1})
///                     - 2*floor(1 - ((n / 2^i) mod 1)) ) + j - 1
/// where j = ceil(log2 n).  The first term is bit i-1 of n; the second is 2
/// exactly when 2^i divides n.  This does not always agree with the closed
/// form (n = 7 is the smallest disagreement); callers report both.
inline std::int64_t eq5_summation(std::uint64_t n) {
    if (n < 2) {
        throw std::invalid_argument("summation form requires n >= 2");
    }
    const PrepSpec spec = prep_spec(n);
    std::int64_t total = 0;
    for (std::size_t i = 1; i < spec.j; ++i) {
        const std::uint64_t bit = (n % (std::uint64_t{1} << i)) >> (i - 1);
        const bool divisible = n % (std::uint64_t{1} << i) == 0;
        total += static_cast<std::int64_t>(bit) - (divisible ? 2 : 0);
    }
    return total + static_cast<std::int64_t>(spec.j) - 1;
}

}  // namespace uniprep
