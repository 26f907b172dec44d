#pragma once

/**
 * @file pinching.hpp
 * @brief Index lower bounds forced by the two curvature pinching regimes.
 */

#include "sik/normal_form.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sik {

struct PinchingRegime {
    enum class Kind { main, weak };

    Kind kind;
    int n;

    static PinchingRegime main_pinch(int n);
    static PinchingRegime weak_pinch(int n);

    std::string name() const;
    friend bool operator==(const PinchingRegime&, const PinchingRegime&) = default;
};

/// Parses "main" or "weak".
PinchingRegime parse_regime(const std::string& text, int n);

/// Lower bound on i(c^m): floor((2n-3)m/(n-1))(n-1) or floor(3m/2)(n-1).
Int min_index(const PinchingRegime& regime, const Int& m);

/// Strict lower bound on the average index: 2n-3 or 3(n-1)/2.
Rational min_avg_index(const PinchingRegime& regime);

struct GateFailure {
    std::optional<Int> m;  // empty for the average-index condition
    std::string lhs;
    std::string rhs;
    std::string message;
};

struct GateResult {
    std::vector<GateFailure> failures;
    /// Largest iterate checked explicitly.
    Int checked_up_to{0};
    bool ok() const { return failures.empty(); }
};

/// Average-index bound plus index(d,m) >= min_index(m) for 1 <= m <= m_max.
GateResult gate(const Decomposition& d, const PinchingRegime& regime, long m_max);

/// Beyond this iterate the per-iterate bound follows from the average-index
/// margin, so checking up to it settles the gate for every m. Empty when the
/// average-index bound fails.
std::optional<Int> gate_horizon(const Decomposition& d, const PinchingRegime& regime);

/// The gate for all m >= 1, via gate_horizon. Fails if the horizon exceeds max_horizon.
GateResult gate_complete(const Decomposition& d, const PinchingRegime& regime,
                         long max_horizon = 10'000'000);

}  // namespace sik
