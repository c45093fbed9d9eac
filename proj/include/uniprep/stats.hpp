#pragma once

// Numerical checks shared by the verifier, the sampler, and the tests:
// uniformity deviation of a statevector against an n-state target, and a
// chi-square goodness-of-fit test of a histogram against that target.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "uniprep/simulate.hpp"

namespace uniprep {

/// How far a state is from the ideal uniform superposition of n states.
struct UniformityReport {
    double max_probability_deviation = 0.0;  ///< max ||amp(k)|^2 - 1/n| over k < n
    double max_stray_amplitude = 0.0;        ///< max |amp(k)| over k >= n
};

inline UniformityReport check_uniformity(const StateVector& state, std::uint64_t n) {
    if (n == 0) {
        throw std::invalid_argument("uniformity target must cover at least one state");
    }
    if (n > state.amplitudes.size()) {
        throw std::invalid_argument("uniformity target of " + std::to_string(n) +
                                    " states exceeds the state's dimension");
    }
    UniformityReport report;
    const double target = 1.0 / static_cast<double>(n);
    for (std::size_t k = 0; k < state.amplitudes.size(); ++k) {
        const double magnitude = std::abs(state.amplitudes[k]);
        if (k < n) {
            report.max_probability_deviation =
                std::max(report.max_probability_deviation,
                         std::abs(magnitude * magnitude - target));
        } else {
            report.max_stray_amplitude = std::max(report.max_stray_amplitude, magnitude);
        }
    }
    return report;
}

/// Chi-square statistic of a histogram against the uniform distribution on
/// states 0..n-1.  Counts on states >= n contribute against an expected
/// value of zero and are flagged via the statistic becoming infinite; the
/// sampler never produces them for a correct circuit.
inline double chi_square_uniform(const Histogram& histogram, std::uint64_t n) {
    if (n == 0 || histogram.shots == 0) {
        throw std::invalid_argument("chi-square needs n >= 1 and at least one shot");
    }
    const double expected = static_cast<double>(histogram.shots) / static_cast<double>(n);
    double statistic = 0.0;
    for (std::uint64_t k = 0; k < n; ++k) {
        const auto it = histogram.counts.find(k);
        const double observed =
            it == histogram.counts.end() ? 0.0 : static_cast<double>(it->second);
        const double delta = observed - expected;
        statistic += delta * delta / expected;
    }
    for (const auto& [state, count] : histogram.counts) {
        if (state >= n && count > 0) {
            return std::numeric_limits<double>::infinity();
        }
    }
    return statistic;
}

/// Upper-tail p-value of a chi-square statistic with the given degrees of
/// freedom: Q(df/2, x/2), the regularized upper incomplete gamma function.
inline double chi_square_pvalue(double statistic, std::uint64_t degrees_of_freedom) {
    if (degrees_of_freedom == 0) {
        throw std::invalid_argument("chi-square requires at least one degree of freedom");
    }
    if (std::isinf(statistic)) {
        return 0.0;
    }
    return boost::math::gamma_q(static_cast<double>(degrees_of_freedom) / 2.0,
                                statistic / 2.0);
}

}  // namespace uniprep
