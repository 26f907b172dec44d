#pragma once

/**
 * @file audit.hpp
 * @brief Replays the window bookkeeping of the multiplicity argument on a
 * concrete finite family of closed geodesics.
 *
 * Given a verified jump tuple, every window degree 2i+n-1 with
 * N-(2n-3) <= i <= N must be carried by a distinct iterate (j, m) whose local
 * critical module can live in that degree. The audit enumerates all such
 * assignments and compares the resulting Morse counts with the Betti numbers
 * on [2N-3(n-1)+2, 2N+n-1].
 */

#include "sik/cijt.hpp"
#include "sik/iteration.hpp"
#include "sik/loop_space.hpp"
#include "sik/pinching.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sik {

struct GeodesicSystem {
    int n = 0;
    std::vector<Decomposition> geodesics;
    std::optional<PinchingRegime> regime;
    /// Geodesic assumed to carry the top degree 2N+n-1 at its iterate 2 m_j.
    std::optional<std::size_t> axiom_j0;

    friend bool operator==(const GeodesicSystem&, const GeodesicSystem&) = default;
};

class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Validates every decomposition against n and the structural conditions on axiom_j0.
void validate_system(const GeodesicSystem& system);

/// Throws PreconditionError unless every geodesic passes the complete gate of the system's regime.
void require_gated(const GeodesicSystem& system);

struct Lemma42Check {
    std::string name;
    bool ok;
    std::string lhs;
    std::string rhs;
};

struct Lemma42Report {
    Int top_first;   // i + nu at 2 m_j - 1
    Int top_second;  // i + nu at 2 m_j - 2
    Int bound_first;
    Int bound_second;
    /// bound_first - top_first.
    Int slack_first;
    std::vector<Lemma42Check> checks;

    bool ok() const;
};

/// Mirror-iterate bounds for one geodesic at its jump iterate m_j.
Lemma42Report lemma42_check(const Decomposition& d, const Int& N, const Int& m_j, int n);

struct PairRef {
    std::size_t geodesic;
    Int m;

    friend bool operator==(const PairRef&, const PairRef&) = default;
    friend bool operator<(const PairRef& a, const PairRef& b) {
        return a.geodesic != b.geodesic ? a.geodesic < b.geodesic : a.m < b.m;
    }
};

struct CandidatePair {
    PairRef pair;
    CriticalSupport support;
    /// Offset of m from 2 m_j.
    Int offset;
};

struct WindowAssignment {
    Int i;
    Int degree;
    PairRef pair;
    SupportPattern pattern;
};

struct AuditOptions {
    long bar_m = 3;
    std::size_t assignment_cap = 10'000;
};

struct AuditReport {
    enum class Verdict { consistent, contradiction, inconclusive };

    JumpTuple tuple;
    int n = 0;
    Int g1_lo, g1_hi, g2_lo, g2_hi;
    Int degree_lo, degree_hi;
    std::vector<CandidatePair> candidates;

    Verdict verdict = Verdict::inconclusive;
    std::string step;
    std::string explanation;
    std::optional<Int> blocking_degree;

    /// Witness assignment (consistent) or an assignment attaining the maximum at the pivot degree.
    std::vector<WindowAssignment> assignments;
    /// Witness Morse counts on the degree range; interior ranks are the least values that work.
    std::map<Int, Int> witness_morse;
    /// Largest Morse count the pivot degree 2N-(n-1) can reach; empty when unbounded.
    std::optional<Int> pivot_max_morse;
    int pivot_betti = 0;

    std::size_t assignments_enumerated = 0;
    bool enumeration_capped = false;
    bool first_window_center_only = false;
    bool second_window_mirror_only = false;
    bool axiom_consistent = true;
    std::vector<std::string> trace;
};

const char* verdict_name(AuditReport::Verdict v);

/// Runs the window audit. Requires bar_m >= 3, a gated system and a tuple that verifies.
AuditReport window_assign(const GeodesicSystem& system, const JumpTuple& tuple, const AuditOptions& options = {});

/// Independent re-check of a consistent report: sandwich, distinct pairs, Morse >= Betti.
std::vector<std::string> recheck_witness(const GeodesicSystem& system, const AuditReport& report);

struct CensusReport {
    /// Least number of non-hyperbolic geodesics over all admissible assignments.
    std::size_t count = 0;
    /// 2[n/2] - 1.
    std::size_t bound = 0;
    /// Per geodesic, in the reported assignment: forced to be non-hyperbolic.
    std::vector<bool> forced;
    /// Hyperbolic geodesics whose assigned degree differs from 2N.
    std::vector<std::size_t> impossible;
    bool assignment_found = false;
};

CensusReport hyperbolic_census(const GeodesicSystem& system, const JumpTuple& tuple,
                               const AuditOptions& options = {});

/// Census of one given assignment, e.g. a hand-built one; no enumeration.
CensusReport census_for_assignment(const GeodesicSystem& system, const JumpTuple& tuple,
                                   const std::vector<WindowAssignment>& assignments);

struct WeakCountReport {
    Int lower_bound;
    bool consistent = false;
    /// Degree -> geodesic carrying it through its first iterate.
    std::map<Int, std::size_t> assignment;
    std::string blocking;
    std::vector<std::string> trace;
};

/// Counting argument in the weak regime: degrees n-1 and 2i+n-1 (1 <= i <= n-2) need distinct geodesics.
WeakCountReport weak_regime_count(const GeodesicSystem& system);

}  // namespace sik
