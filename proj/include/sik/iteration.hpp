#pragma once

/**
 * @file iteration.hpp
 * @brief Index and nullity of iterates, average index, Bott-type bounds, and
 * an explicit-matrix nullity oracle.
 */

#include "sik/normal_form.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace sik {

/// Morse index of the m-th iterate (m >= 1).
Int index(const Decomposition& d, const Int& m);
/// Nullity of the m-th iterate (m >= 1).
Int nullity(const Decomposition& d, const Int& m);
/// Mean index per iterate, the limit of index(d,m)/m.
ExactScalar average_index(const Decomposition& d);

struct BottViolation {
    Int m;
    bool lower;  // which side of the two-sided bound failed
    Int lhs;
    Int rhs;
};

struct BottResult {
    std::optional<BottViolation> violation;
    bool ok() const { return !violation; }
};

/// Checks nu(m) - e/2 <= i(m+1) - i(m) - i(1) <= nu(1) - nu(m+1) + e/2 for 1 <= m <= m_max.
BottResult bott_check(const Decomposition& d, long m_max);

/// Memoized (index, nullity) sequence of one decomposition. Safe for concurrent queries.
class IterationProfile {
public:
    explicit IterationProfile(Decomposition d);

    IterationProfile(const IterationProfile&) = delete;
    IterationProfile& operator=(const IterationProfile&) = delete;

    const Decomposition& source() const { return d_; }
    const ExactScalar& avg_index() const { return avg_; }

    Int index_at(const Int& m) const;
    Int nullity_at(const Int& m) const;
    /// index_at(m) + nullity_at(m).
    Int top_at(const Int& m) const;

private:
    struct Entry {
        Int index;
        Int nullity;
    };
    Entry lookup(const Int& m) const;

    Decomposition d_;
    ExactScalar avg_;
    mutable std::shared_mutex mutex_;
    mutable std::map<Int, Entry> memo_;
};

/**
 * Realizes d as an explicit block-diagonal matrix over Q or one quadratic field
 * and returns dim ker(M^m - I) by Gaussian elimination.
 *
 * Rational rotations must have denominators in {3,4,5,6,8,10,12}; every
 * irrational angle is realized by one fixed non-periodic rotation. Throws
 * std::domain_error when a turn cannot be realized or fields would mix.
 */
Int realize_and_nullity_oracle(const Decomposition& d, long m);

/// Oracle nullities for m = 1..m_max, sharing the successive powers.
std::vector<Int> realize_and_nullity_sequence(const Decomposition& d, long m_max);

}  // namespace sik
