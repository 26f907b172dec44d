#pragma once

/**
 * @file cijt.hpp
 * @brief Common index jump tuples: exhaustive search and exact verification.
 *
 * A tuple (N, m_1..m_q) makes every geodesic's index jump to the common level
 * 2N at the iterate 2 m_k, with the neighbouring iterates 2 m_k +- m mirroring
 * the first bar_m iterates.
 */

#include "sik/normal_form.hpp"
#include "sik/pinching.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sik {

struct JumpTuple {
    Int N;
    std::vector<Int> m;
    std::vector<int> chi;
    Int bar_M;
    Rational epsilon;
    Int M0{1};

    friend bool operator==(const JumpTuple&, const JumpTuple&) = default;
};

/// Least B with B * 2t integral for every rational angle t of every decomposition.
Int compute_bar_M(const std::vector<Decomposition>& system);

struct SolveOptions {
    long bar_m = 1;
    Int M0{1};
    Rational epsilon{1, 100};
    /// Threshold for the near-resonance count; defaults to epsilon.
    std::optional<Rational> delta;
    Int n_limit{1000};
    /// 0 = hardware concurrency, capped by SIK_THREADS.
    unsigned threads = 0;
    std::optional<PinchingRegime> regime;
};

struct SolveStats {
    Int scanned{0};
    /// N whose fractional parts all lie within epsilon of 0 or 1.
    Int fraction_matches{0};
    /// Fraction matches whose iterates 2 m_k - bar_m fall below 1.
    Int too_small{0};
    /// Fraction matches rejected by verify.
    Int verify_rejections{0};
    Int emitted{0};
};

/// Return false to stop the search.
using TupleSink = std::function<bool(const JumpTuple&)>;

/**
 * Scans N = M0, 2 M0, ... <= n_limit in increasing order and passes every
 * tuple that satisfies the fraction condition and verifies to the sink.
 * Throws std::invalid_argument on an empty system, epsilon outside (0,1/2),
 * or a non-positive average index.
 */
SolveStats solve(const std::vector<Decomposition>& system, const SolveOptions& options, const TupleSink& sink);

std::vector<JumpTuple> solve_all(const std::vector<Decomposition>& system, const SolveOptions& options,
                                 std::size_t max_tuples = std::numeric_limits<std::size_t>::max(),
                                 SolveStats* stats = nullptr);

struct Violation {
    std::string identity;
    std::size_t k = 0;
    std::optional<Int> m;
    std::string lhs;
    std::string rhs;
};

struct VerifyReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

struct VerifyOptions {
    std::optional<Rational> delta;
    std::optional<PinchingRegime> regime;
};

/// Checks the tuple's defining conditions and every jump identity exactly for 1 <= m <= bar_m.
VerifyReport verify(const JumpTuple& tuple, const std::vector<Decomposition>& system, long bar_m,
                    const VerifyOptions& options = {});

/// Number of worker threads: requested (0 = hardware), capped by SIK_THREADS.
unsigned worker_count(unsigned requested);

}  // namespace sik
