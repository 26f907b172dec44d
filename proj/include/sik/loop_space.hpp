#pragma once

/**
 * @file loop_space.hpp
 * @brief Betti numbers of the free loop space of S^n relative to constant
 * loops, local critical-module shapes, and Morse inequalities.
 */

#include "sik/normal_form.hpp"

#include <map>
#include <optional>
#include <vector>

namespace sik {

/// Rational Betti number b_q of the loop space pair of S^n, n >= 3.
int betti(int n, const Int& q);

/**
 * Admissible shapes of a local critical module over [i, i + nu].
 * Only the bottom degree, only the top degree, interior degrees with any
 * ranks, or nothing at all.
 */
enum class SupportPattern { bottom, top, interior, empty };

const char* pattern_name(SupportPattern p);

struct CriticalSupport {
    enum class Mode { exact, constrained };

    Int m;
    Int index;    // i(c^m)
    Int nullity;  // nu(c^m)
    Mode mode;
    /// Exact mode only: i(c^m) - i(c) is even, so degree i(c^m) carries rank 1.
    bool exact_supported = false;

    Int low() const { return index; }
    Int high() const { return index + nullity; }

    /// Patterns compatible with the local data; exact mode yields bottom or empty.
    std::vector<SupportPattern> patterns() const;
    /// Whether some admissible pattern puts positive rank in degree q.
    bool can_support(const Int& q) const;
    /// Whether pattern p puts positive rank in degree q.
    bool pattern_supports(SupportPattern p, const Int& q) const;
    /// Largest rank pattern p can put in degree q, or nullopt when unbounded.
    std::optional<Int> pattern_max_rank(SupportPattern p, const Int& q) const;
};

CriticalSupport critical_support(const Decomposition& d, const Int& m, const Int& i_of_d_at_1);

struct MorseRow {
    Int q;
    Int morse;
    int betti;
    Int morse_alternating;
    Int betti_alternating;
    bool pointwise_ok;
    bool alternating_ok;
};

struct MorseViolation {
    Int q;
    bool alternating;  // false: M_q < b_q; true: the alternating-sum inequality failed
    Int lhs;
    Int rhs;
};

struct MorseReport {
    std::vector<MorseRow> rows;
    std::optional<MorseViolation> first_violation;
    bool ok() const { return !first_violation; }
};

/// Checks M_q >= b_q and the alternating-sum inequality (summed from degree 0) for q in [q_lo, q_hi].
MorseReport morse_check(const std::map<Int, Int>& morse, int n, const Int& q_lo, const Int& q_hi);

}  // namespace sik
