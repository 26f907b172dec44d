#include "sik/audit.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace sik {

namespace {

std::string join_ints(const std::vector<Int>& v) {
    std::string s = "(";
    for (std::size_t k = 0; k < v.size(); ++k) s += (k ? "," : "") + v[k].get_str();
    return s + ")";
}

std::string pair_str(const PairRef& p) {
    return "(c" + std::to_string(p.geodesic + 1) + ", m=" + p.m.get_str() + ")";
}

}  // namespace

// ---------------------------------------------------------------------------
// System checks
// ---------------------------------------------------------------------------

void validate_system(const GeodesicSystem& system) {
    if (system.n < 2) throw PreconditionError("sphere dimension must be >= 2");
    if (system.geodesics.empty()) throw PreconditionError("system has no geodesics");
    if (system.regime && system.regime->n != system.n)
        throw PreconditionError("regime dimension " + std::to_string(system.regime->n) +
                                " differs from n = " + std::to_string(system.n));
    for (const auto& d : system.geodesics) {
        auto res = validate(d, system.n);
        if (!res.ok()) throw PreconditionError("geodesic '" + d.name + "': " + res.summary());
    }
    if (system.axiom_j0) {
        if (*system.axiom_j0 >= system.geodesics.size())
            throw PreconditionError("axiom_j0 index out of range");
        const auto& d = system.geodesics[*system.axiom_j0];
        std::vector<std::string> bad;
        if (d.p_minus) bad.push_back("p_minus");
        if (d.q_plus) bad.push_back("q_plus");
        if (!d.n2_nontrivial_rational.empty()) bad.push_back("n2_nontrivial_rational");
        if (!d.n2_nontrivial_irrational.empty()) bad.push_back("n2_nontrivial_irrational");
        if (!d.n2_trivial_irrational.empty()) bad.push_back("n2_trivial_irrational");
        if (d.hyperbolic_count()) bad.push_back("h_plus/h_minus");
        if (d.rot_irrational.empty()) bad.push_back("rot_irrational (needs at least one)");
        if (!bad.empty()) {
            std::string msg = "axiom geodesic '" + d.name + "' violates its structural conditions:";
            for (const auto& b : bad) msg += " " + b;
            throw PreconditionError(msg);
        }
    }
}

void require_gated(const GeodesicSystem& system) {
    if (!system.regime) throw PreconditionError("a pinching regime is required");
    for (const auto& d : system.geodesics) {
        auto g = gate_complete(d, *system.regime);
        if (!g.ok())
            throw PreconditionError("geodesic '" + d.name + "' fails the " + system.regime->name() +
                                    " pinching gate: " + g.failures.front().message);
    }
}

// ---------------------------------------------------------------------------
// Mirror-iterate bounds
// ---------------------------------------------------------------------------

bool Lemma42Report::ok() const {
    return std::all_of(checks.begin(), checks.end(), [](const Lemma42Check& c) { return c.ok; });
}

Lemma42Report lemma42_check(const Decomposition& d, const Int& N, const Int& m_j, int n) {
    if (2 * m_j - 2 < 1) throw std::invalid_argument("need 2 m_j - 2 >= 1");
    Lemma42Report rep;
    const Int a = 2 * m_j - 1, b = 2 * m_j - 2;
    rep.top_first = index(d, a) + nullity(d, a);
    rep.top_second = index(d, b) + nullity(d, b);
    rep.bound_first = 2 * N - (n - 1);
    rep.bound_second = 2 * N - 3 * (n - 1);
    rep.slack_first = rep.bound_first - rep.top_first;

    auto add = [&](std::string name, bool ok, const Int& lhs, const Int& rhs) {
        rep.checks.push_back({std::move(name), ok, lhs.get_str(), rhs.get_str()});
    };
    const int r = d.rotation_count();
    const Int margin = d.i1 + d.p_minus + d.p_zero + r;
    add("average_margin", margin >= 2 * n - 2, margin, Int(2 * n - 2));
    add("first_mirror", rep.top_first <= rep.bound_first, rep.top_first, rep.bound_first);
    const Int coarse = 2 * N - (3 * n - 4);
    add("second_mirror_coarse", rep.top_second <= coarse, rep.top_second, coarse);
    add("second_mirror_not_coarse_equality", rep.top_second != coarse, rep.top_second, coarse);
    const Int lhs_par = index(d, 2) - d.p_plus - d.q_minus;
    const Int rhs_par = r + d.p_minus + d.p_zero + d.q_zero + d.q_plus + d.p_plus + d.q_minus;
    add("second_iterate_parity", mpz_even_p(Int(lhs_par - rhs_par).get_mpz_t()) != 0, lhs_par, rhs_par);
    add("second_mirror", rep.top_second <= rep.bound_second, rep.top_second, rep.bound_second);
    return rep;
}

// ---------------------------------------------------------------------------
// Window search
// ---------------------------------------------------------------------------

const char* verdict_name(AuditReport::Verdict v) {
    switch (v) {
        case AuditReport::Verdict::consistent: return "consistent";
        case AuditReport::Verdict::contradiction: return "contradiction";
        case AuditReport::Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

namespace {

SupportPattern pattern_for(const CriticalSupport& s, const Int& q) {
    if (q == s.low()) return SupportPattern::bottom;
    if (q == s.high()) return SupportPattern::top;
    return SupportPattern::interior;
}

struct Slot {
    Int i;
    Int degree;
    std::vector<std::size_t> options;  // candidate indices
};

struct Contribution {
    std::size_t candidate;
    SupportPattern pattern;
    std::map<Int, Int> ranks;
};

class WindowSearch {
public:
    WindowSearch(const GeodesicSystem& system, const JumpTuple& tuple, const AuditOptions& options)
        : sys_(system), tuple_(tuple), opt_(options), n_(system.n), N_(tuple.N) {
        lo_ = 2 * N_ - 3 * (n_ - 1) + 2;
        hi_ = 2 * N_ + n_ - 1;
        pivot_ = 2 * N_ - (n_ - 1);
        collect_candidates();
        build_slots();
    }

    const std::vector<CandidatePair>& candidates() const { return cands_; }
    const std::vector<Slot>& slots() const { return slots_; }
    const Int& lo() const { return lo_; }
    const Int& hi() const { return hi_; }
    const Int& pivot() const { return pivot_; }
    std::optional<std::size_t> j0_candidate() const { return j0_cand_; }

    // Calls visit(assignment) for every injective assignment, in a fixed order, up to the cap.
    // Returns true when the cap stopped the enumeration.
    bool enumerate(const std::function<bool(const std::vector<std::size_t>&)>& visit, std::size_t& count) const {
        std::vector<std::size_t> order(slots_.size());
        for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return slots_[a].options.size() < slots_[b].options.size();
        });
        std::vector<std::size_t> chosen(slots_.size());
        std::vector<bool> used(cands_.size(), false);
        bool capped = false, stop = false;
        std::function<void(std::size_t)> rec = [&](std::size_t depth) {
            if (stop) return;
            if (depth == order.size()) {
                if (count >= opt_.assignment_cap) {
                    capped = stop = true;
                    return;
                }
                ++count;
                if (!visit(chosen)) stop = true;
                return;
            }
            const auto& slot = slots_[order[depth]];
            for (std::size_t c : slot.options) {
                if (used[c]) continue;
                used[c] = true;
                chosen[order[depth]] = c;
                rec(depth + 1);
                used[c] = false;
                if (stop) return;
            }
        };
        rec(0);
        return capped;
    }

    // Largest count the pivot degree can reach; nullopt when unbounded.
    std::optional<Int> pivot_max(const std::vector<std::size_t>& chosen) const {
        std::vector<int> slot_of(cands_.size(), -1);
        for (std::size_t s = 0; s < chosen.size(); ++s) slot_of[chosen[s]] = static_cast<int>(s);
        Int total = 0;
        for (std::size_t c = 0; c < cands_.size(); ++c) {
            const auto& sup = cands_[c].support;
            const bool inside = pivot_ > sup.low() && pivot_ < sup.high();
            if (slot_of[c] >= 0) {
                const auto& slot = slots_[slot_of[c]];
                auto p = pattern_for(sup, slot.degree);
                if (p == SupportPattern::interior && inside) return std::nullopt;
                if (slot.degree == pivot_) total += 1;
                continue;
            }
            if (sup.mode == CriticalSupport::Mode::constrained && inside) return std::nullopt;
            if (sup.can_support(pivot_)) total += 1;
        }
        return total;
    }

    // Tries to extend an assignment to Morse >= Betti on [lo, hi].
    std::optional<std::vector<Contribution>> witness(const std::vector<std::size_t>& chosen,
                                                     Int& first_deficit) const {
        std::vector<Contribution> used;
        std::vector<bool> taken(cands_.size(), false);
        for (std::size_t s = 0; s < chosen.size(); ++s) {
            const auto c = chosen[s];
            taken[c] = true;
            used.push_back({c, pattern_for(cands_[c].support, slots_[s].degree), {{slots_[s].degree, Int(1)}}});
        }
        std::vector<std::size_t> free_pairs;
        for (std::size_t c = 0; c < cands_.size(); ++c)
            if (!taken[c]) free_pairs.push_back(c);

        std::vector<bool> pair_used(free_pairs.size(), false);
        std::vector<Contribution> extra;
        bool found = false;
        Int deficit_seen = -1;
        std::function<void()> rec = [&]() {
            if (found) return;
            auto all = used;
            all.insert(all.end(), extra.begin(), extra.end());
            auto q = first_uncovered(all);
            if (!q) {
                found = true;
                return;
            }
            if (deficit_seen < 0 || *q > deficit_seen) deficit_seen = *q;
            for (std::size_t k = 0; k < free_pairs.size() && !found; ++k) {
                if (pair_used[k]) continue;
                const auto& sup = cands_[free_pairs[k]].support;
                for (auto p : sup.patterns()) {
                    if (!sup.pattern_supports(p, *q)) continue;
                    pair_used[k] = true;
                    extra.push_back({free_pairs[k], p, {{*q, Int(1)}}});
                    rec();
                    if (found) return;
                    extra.pop_back();
                    pair_used[k] = false;
                }
            }
        };
        rec();
        if (!found) {
            first_deficit = deficit_seen;
            return std::nullopt;
        }
        used.insert(used.end(), extra.begin(), extra.end());
        settle_ranks(used);
        return used;
    }

    std::map<Int, Int> morse_of(const std::vector<Contribution>& contribs) const {
        std::map<Int, Int> m;
        for (const auto& c : contribs)
            for (const auto& [q, r] : c.ranks) m[q] += r;
        return m;
    }

    PairRef pair(std::size_t c) const { return cands_[c].pair; }

private:
    // Degrees of [lo, hi] where even the most generous ranks miss the Betti number.
    std::optional<Int> first_uncovered(const std::vector<Contribution>& contribs) const {
        std::map<Int, Int> fixed;
        std::set<Int> open;
        for (const auto& c : contribs) {
            const auto& sup = cands_[c.candidate].support;
            if (c.pattern == SupportPattern::interior) {
                for (Int q = std::max(Int(sup.low() + 1), lo_); q < sup.high() && q <= hi_; ++q) open.insert(q);
            } else {
                for (const auto& [q, r] : c.ranks) fixed[q] += r;
            }
        }
        for (Int q = lo_; q <= hi_; ++q) {
            if (open.count(q)) continue;
            Int have = fixed.count(q) ? fixed[q] : Int(0);
            if (have < betti(n_, q)) return q;
        }
        return std::nullopt;
    }

    // Gives interior contributions concrete ranks meeting the Betti numbers.
    void settle_ranks(std::vector<Contribution>& contribs) const {
        std::map<Int, Int> fixed;
        for (const auto& c : contribs)
            if (c.pattern != SupportPattern::interior)
                for (const auto& [q, r] : c.ranks) fixed[q] += r;
        for (Int q = lo_; q <= hi_; ++q) {
            Int need = Int(betti(n_, q)) - (fixed.count(q) ? fixed[q] : Int(0));
            if (need <= 0) continue;
            for (auto& c : contribs) {
                if (c.pattern != SupportPattern::interior) continue;
                if (!cands_[c.candidate].support.pattern_supports(SupportPattern::interior, q)) continue;
                Int& r = c.ranks[q];
                if (r < need) r = need;
                break;
            }
        }
    }

    void collect_candidates() {
        for (std::size_t j = 0; j < sys_.geodesics.size(); ++j) {
            const auto& d = sys_.geodesics[j];
            const auto avg = average_index(d);
            const Int slack_low = d.rotation_count() + d.p_minus + d.p_zero + d.q_zero + d.q_plus +
                                  2 * d.nontrivial_n2_count();
            const Int slack_high = d.rotation_count() + 2 * d.dimension();
            Int m_lo = ceil(ExactScalar(Int(lo_ - slack_high)) / avg);
            Int m_hi = floor(ExactScalar(Int(hi_ + slack_low)) / avg);
            if (m_lo < 1) m_lo = 1;
            const Int center = 2 * tuple_.m[j];
            for (Int m = m_lo; m <= m_hi; ++m) {
                auto sup = critical_support(d, m, d.i1);
                if (sup.high() < lo_ || sup.low() > hi_) continue;
                bool touches = false;
                for (Int q = std::max(sup.low(), lo_); q <= std::min(sup.high(), hi_) && !touches; ++q)
                    touches = sup.can_support(q);
                if (!touches) continue;
                if (sys_.axiom_j0 && *sys_.axiom_j0 == j && m == center) j0_cand_ = cands_.size();
                cands_.push_back({{j, m}, sup, m - center});
            }
        }
    }

    void build_slots() {
        for (Int i = N_ - (2 * n_ - 3); i <= N_; ++i) {
            Slot s{i, 2 * i + n_ - 1, {}};
            for (std::size_t c = 0; c < cands_.size(); ++c) {
                const bool is_j0 = j0_cand_ && *j0_cand_ == c;
                if (sys_.axiom_j0 && i == N_) {
                    if (is_j0 && cands_[c].support.can_support(s.degree)) s.options.push_back(c);
                    continue;
                }
                if (is_j0) continue;
                if (cands_[c].support.can_support(s.degree)) s.options.push_back(c);
            }
            slots_.push_back(std::move(s));
        }
    }

    const GeodesicSystem& sys_;
    const JumpTuple& tuple_;
    const AuditOptions& opt_;
    int n_;
    Int N_;
    Int lo_, hi_, pivot_;
    std::vector<CandidatePair> cands_;
    std::vector<Slot> slots_;
    std::optional<std::size_t> j0_cand_;
};

void check_preconditions(const GeodesicSystem& system, const JumpTuple& tuple, const AuditOptions& options) {
    validate_system(system);
    require_gated(system);
    if (options.bar_m < 3) throw PreconditionError("the window audit needs bar_m >= 3");
    if (tuple.m.size() != system.geodesics.size())
        throw PreconditionError("tuple has " + std::to_string(tuple.m.size()) + " iterates for " +
                                std::to_string(system.geodesics.size()) + " geodesics");
    auto rep = verify(tuple, system.geodesics, options.bar_m, VerifyOptions{std::nullopt, system.regime});
    if (!rep.ok()) {
        const auto& v = rep.violations.front();
        throw PreconditionError("tuple does not verify: " + v.identity + " for c" + std::to_string(v.k + 1) +
                                ": " + v.lhs + " vs " + v.rhs);
    }
}

}  // namespace

AuditReport window_assign(const GeodesicSystem& system, const JumpTuple& tuple, const AuditOptions& options) {
    check_preconditions(system, tuple, options);
    const int n = system.n;
    const Int& N = tuple.N;

    AuditReport rep;
    rep.tuple = tuple;
    rep.n = n;
    rep.g1_lo = N - (n - 2);
    rep.g1_hi = N - 1;
    rep.g2_lo = N - (2 * n - 3);
    rep.g2_hi = N - (n - 1);

    WindowSearch search(system, tuple, options);
    rep.degree_lo = search.lo();
    rep.degree_hi = search.hi();
    rep.candidates = search.candidates();
    rep.pivot_betti = betti(n, search.pivot());

    auto& tr = rep.trace;
    tr.push_back("tuple N=" + N.get_str() + " m=" + join_ints(tuple.m) + " verified for bar_m=" +
                 std::to_string(options.bar_m));
    tr.push_back("window G1=[" + rep.g1_lo.get_str() + "," + rep.g1_hi.get_str() + "] -> degrees [" +
                 Int(2 * rep.g1_lo + n - 1).get_str() + "," + Int(2 * rep.g1_hi + n - 1).get_str() + "]");
    tr.push_back("window G2=[" + rep.g2_lo.get_str() + "," + rep.g2_hi.get_str() + "] -> degrees [" +
                 Int(2 * rep.g2_lo + n - 1).get_str() + "," + Int(2 * rep.g2_hi + n - 1).get_str() + "]");
    for (const auto& c : rep.candidates) {
        std::string off = c.offset == 0 ? "2m_j" : "2m_j" + std::string(c.offset > 0 ? "+" : "") + c.offset.get_str();
        tr.push_back("candidate " + pair_str(c.pair) + " = " + off + " support [" + c.support.low().get_str() + "," +
                     c.support.high().get_str() + "]" +
                     (c.support.mode == CriticalSupport::Mode::exact
                          ? (c.support.exact_supported ? " exact" : " exact-empty")
                          : " constrained"));
    }

    for (std::size_t j = 0; j < system.geodesics.size(); ++j) {
        auto l = lemma42_check(system.geodesics[j], N, tuple.m[j], n);
        tr.push_back("c" + std::to_string(j + 1) + " mirror tops " + l.top_first.get_str() + " <= " +
                     l.bound_first.get_str() + ", " + l.top_second.get_str() + " <= " + l.bound_second.get_str() +
                     (l.ok() ? "" : " FAILED"));
    }

    if (system.axiom_j0) {
        const auto j0 = *system.axiom_j0;
        const auto& d = system.geodesics[j0];
        const Int c = 2 * tuple.m[j0];
        const Int top = index(d, c) + nullity(d, c);
        const int dk = delta_of(d, tuple.m[j0], ExactScalar(tuple.epsilon));
        const int r2 = static_cast<int>(d.rot_irrational.size());
        rep.axiom_consistent = top == 2 * N + n - 1 && dk == r2 && r2 >= 1;
        tr.push_back("axiom geodesic c" + std::to_string(j0 + 1) + ": top at 2m_j = " + top.get_str() +
                     " (needs " + Int(2 * N + n - 1).get_str() + "), near-resonant count " + std::to_string(dk) +
                     " (needs " + std::to_string(r2) + ")");
        if (!rep.axiom_consistent) {
            rep.verdict = AuditReport::Verdict::contradiction;
            rep.step = "axiom";
            rep.explanation = "the designated geodesic does not carry degree 2N+n-1 at its iterate 2m_j";
            rep.blocking_degree = 2 * N + n - 1;
            tr.push_back("verdict: contradiction (" + rep.explanation + ")");
            return rep;
        }
    }

    for (const auto& s : search.slots())
        if (s.options.empty()) {
            rep.verdict = AuditReport::Verdict::contradiction;
            rep.step = "window_cover";
            rep.blocking_degree = s.degree;
            rep.explanation = "no iterate can carry window degree " + s.degree.get_str() + " (i=" + s.i.get_str() + ")";
            tr.push_back("verdict: contradiction (" + rep.explanation + ")");
            return rep;
        }

    bool any_bounded = false;
    bool unbounded = false;
    Int best = -1;
    std::vector<std::size_t> best_assignment;
    std::optional<std::vector<Contribution>> witness;
    std::vector<std::size_t> witness_assignment;
    Int first_deficit = -1;
    bool g1_center = true, g2_mirror = true;
    const auto& slots = search.slots();

    rep.enumeration_capped = search.enumerate(
        [&](const std::vector<std::size_t>& chosen) {
            for (std::size_t s = 0; s < chosen.size(); ++s) {
                const auto& off = search.candidates()[chosen[s]].offset;
                if (slots[s].i >= rep.g1_lo && slots[s].i <= rep.g1_hi && off != 0) g1_center = false;
                if (slots[s].i >= rep.g2_lo && slots[s].i <= rep.g2_hi && off != -1) g2_mirror = false;
            }
            auto pm = search.pivot_max(chosen);
            if (!pm) {
                if (!unbounded) best_assignment = chosen;
                unbounded = true;
            } else if (!unbounded && *pm > best) {
                best = *pm;
                best_assignment = chosen;
            }
            if (pm) any_bounded = true;
            if (!witness) {
                Int deficit = -1;
                witness = search.witness(chosen, deficit);
                if (witness) witness_assignment = chosen;
                else if (first_deficit < 0 || deficit < first_deficit) first_deficit = deficit;
            }
            return true;
        },
        rep.assignments_enumerated);
    (void)any_bounded;

    rep.first_window_center_only = g1_center;
    rep.second_window_mirror_only = g2_mirror;
    if (rep.assignments_enumerated > 0) {
        tr.push_back(std::string("G1 degrees carried only by iterates 2m_j: ") + (g1_center ? "yes" : "no"));
        tr.push_back(std::string("G2 degrees carried only by iterates 2m_j-1: ") + (g2_mirror ? "yes" : "no"));
    }
    tr.push_back(std::to_string(rep.assignments_enumerated) + " admissible assignment(s) enumerated" +
                 (rep.enumeration_capped ? " (cap reached)" : ""));

    auto fill_assignment = [&](const std::vector<std::size_t>& chosen) {
        rep.assignments.clear();
        for (std::size_t s = 0; s < chosen.size(); ++s) {
            const auto& c = search.candidates()[chosen[s]];
            rep.assignments.push_back({slots[s].i, slots[s].degree, c.pair, pattern_for(c.support, slots[s].degree)});
        }
    };

    if (rep.assignments_enumerated == 0) {
        rep.verdict = rep.enumeration_capped ? AuditReport::Verdict::inconclusive : AuditReport::Verdict::contradiction;
        rep.step = "window_cover";
        rep.explanation = "window degrees cannot be carried by pairwise distinct iterates";
        tr.push_back("verdict: " + std::string(verdict_name(rep.verdict)) + " (" + rep.explanation + ")");
        return rep;
    }

    if (!unbounded) rep.pivot_max_morse = best;
    const std::string pivot_label = "M_{2N-(n-1)}=" + (unbounded ? std::string("unbounded") : best.get_str());
    tr.push_back("pivot degree 2N-(n-1)=" + search.pivot().get_str() + ": " + pivot_label +
                 ", b=" + std::to_string(rep.pivot_betti));
    for (const auto& c : rep.candidates)
        if (c.support.can_support(search.pivot()) && c.offset != 0 && c.offset != -1)
            tr.push_back("note: " + pair_str(c.pair) + " reaches the pivot degree outside {2m_j-1, 2m_j}");

    if (!unbounded && !rep.enumeration_capped && best < rep.pivot_betti) {
        rep.verdict = AuditReport::Verdict::contradiction;
        rep.step = "pivot_degree";
        rep.blocking_degree = search.pivot();
        rep.explanation = pivot_label + " < b=" + std::to_string(rep.pivot_betti) + " at degree " +
                          search.pivot().get_str();
        fill_assignment(best_assignment);
        tr.push_back("verdict: contradiction (" + rep.explanation + ")");
        return rep;
    }

    if (witness) {
        rep.verdict = AuditReport::Verdict::consistent;
        rep.step = "witness";
        fill_assignment(witness_assignment);
        rep.witness_morse = search.morse_of(*witness);
        rep.explanation = "Morse counts meet the Betti numbers on [" + rep.degree_lo.get_str() + "," +
                          rep.degree_hi.get_str() + "]";
        for (const auto& a : rep.assignments)
            tr.push_back("assign i=" + a.i.get_str() + " degree " + a.degree.get_str() + " -> " + pair_str(a.pair) +
                         " " + pattern_name(a.pattern));
        tr.push_back("verdict: consistent (" + rep.explanation + ")");
        return rep;
    }

    rep.verdict = rep.enumeration_capped ? AuditReport::Verdict::inconclusive : AuditReport::Verdict::contradiction;
    rep.step = "morse_deficit";
    if (first_deficit >= 0) rep.blocking_degree = first_deficit;
    rep.explanation = "no admissible choice reaches the Betti number at degree " +
                      (first_deficit >= 0 ? first_deficit.get_str() : std::string("?"));
    fill_assignment(best_assignment);
    tr.push_back("verdict: " + std::string(verdict_name(rep.verdict)) + " (" + rep.explanation + ")");
    return rep;
}

std::vector<std::string> recheck_witness(const GeodesicSystem& system, const AuditReport& report) {
    std::vector<std::string> problems;
    if (report.verdict != AuditReport::Verdict::consistent) {
        problems.push_back("report is not consistent");
        return problems;
    }
    const int n = system.n;
    const Int& N = report.tuple.N;
    std::set<PairRef> seen;
    std::set<Int> indices;
    for (const auto& a : report.assignments) {
        const auto& d = system.geodesics.at(a.pair.geodesic);
        auto sup = critical_support(d, a.pair.m, d.i1);
        if (a.degree != 2 * a.i + n - 1) problems.push_back("degree mismatch at i=" + a.i.get_str());
        if (sup.low() > a.degree || a.degree > sup.high())
            problems.push_back("sandwich fails at i=" + a.i.get_str());
        if (!sup.pattern_supports(a.pattern, a.degree)) problems.push_back("pattern mismatch at i=" + a.i.get_str());
        auto pats = sup.patterns();
        if (std::find(pats.begin(), pats.end(), a.pattern) == pats.end())
            problems.push_back("inadmissible pattern at i=" + a.i.get_str());
        if (!seen.insert(a.pair).second) problems.push_back("pair reused at i=" + a.i.get_str());
        indices.insert(a.i);
    }
    for (Int i = N - (2 * n - 3); i <= N; ++i)
        if (!indices.count(i)) problems.push_back("window index " + i.get_str() + " unassigned");
    for (Int q = report.degree_lo; q <= report.degree_hi; ++q) {
        auto it = report.witness_morse.find(q);
        Int m = it == report.witness_morse.end() ? Int(0) : it->second;
        if (m < betti(n, q)) problems.push_back("Morse count below Betti number at degree " + q.get_str());
    }
    return problems;
}

// ---------------------------------------------------------------------------
// Hyperbolicity census
// ---------------------------------------------------------------------------

CensusReport hyperbolic_census(const GeodesicSystem& system, const JumpTuple& tuple, const AuditOptions& options) {
    check_preconditions(system, tuple, options);
    CensusReport rep;
    const std::size_t p = system.geodesics.size();
    rep.bound = static_cast<std::size_t>(2 * (system.n / 2) - 1);
    WindowSearch search(system, tuple, options);
    const Int two_N = 2 * tuple.N;

    auto forced_for = [&](const std::vector<std::size_t>& chosen) {
        std::vector<bool> f(p, false);
        if (system.axiom_j0) f[*system.axiom_j0] = true;
        for (std::size_t s = 0; s < chosen.size(); ++s) {
            const auto& c = search.candidates()[chosen[s]];
            if (c.offset == 0 && search.slots()[s].degree != two_N) f[c.pair.geodesic] = true;
        }
        return f;
    };

    std::size_t best = p + 1;
    std::size_t count = 0;
    search.enumerate(
        [&](const std::vector<std::size_t>& chosen) {
            auto f = forced_for(chosen);
            std::size_t c = 0;
            for (std::size_t j = 0; j < p; ++j)
                if (f[j] || elliptic_height(system.geodesics[j]) > 0) ++c;
            if (c < best) {
                best = c;
                rep.forced = f;
            }
            return true;
        },
        count);
    rep.assignment_found = count > 0;
    if (!rep.assignment_found) {
        rep.forced.assign(p, false);
        if (system.axiom_j0) rep.forced[*system.axiom_j0] = true;
        best = 0;
        for (std::size_t j = 0; j < p; ++j)
            if (rep.forced[j] || elliptic_height(system.geodesics[j]) > 0) ++best;
    }
    rep.count = best;
    for (std::size_t j = 0; j < p; ++j)
        if (rep.forced[j] && elliptic_height(system.geodesics[j]) == 0) rep.impossible.push_back(j);
    return rep;
}

CensusReport census_for_assignment(const GeodesicSystem& system, const JumpTuple& tuple,
                                   const std::vector<WindowAssignment>& assignments) {
    const std::size_t p = system.geodesics.size();
    if (tuple.m.size() != p) throw PreconditionError("tuple size differs from the system");
    CensusReport rep;
    rep.bound = static_cast<std::size_t>(2 * (system.n / 2) - 1);
    rep.assignment_found = true;
    rep.forced.assign(p, false);
    if (system.axiom_j0) rep.forced[*system.axiom_j0] = true;
    for (const auto& a : assignments) {
        if (a.pair.geodesic >= p) throw PreconditionError("assignment names an unknown geodesic");
        if (a.pair.m == 2 * tuple.m[a.pair.geodesic] && a.degree != 2 * tuple.N) rep.forced[a.pair.geodesic] = true;
    }
    for (std::size_t j = 0; j < p; ++j) {
        const bool elliptic = elliptic_height(system.geodesics[j]) > 0;
        if (rep.forced[j] || elliptic) ++rep.count;
        if (rep.forced[j] && !elliptic) rep.impossible.push_back(j);
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Weak regime counting
// ---------------------------------------------------------------------------

WeakCountReport weak_regime_count(const GeodesicSystem& system) {
    validate_system(system);
    if (!system.regime || system.regime->kind != PinchingRegime::Kind::weak)
        throw PreconditionError("weak_regime_count needs the weak regime");
    require_gated(system);
    const int n = system.n;
    const std::size_t p = system.geodesics.size();
    WeakCountReport rep;
    rep.lower_bound = n - 1;
    auto& tr = rep.trace;

    const std::string later_iterates = "iterates m >= 2 are excluded: i(c^m) >= [3m/2](n-1) >= 3(n-1) = " +
                                       std::to_string(3 * (n - 1)) + " > " + std::to_string(3 * n - 5);
    const std::string first_iterates = "i(c) >= [3/2](n-1) = n-1 = " + std::to_string(n - 1) +
                                       ", so degree n-1 sits at the bottom of its interval and is exclusive";
    tr.push_back(later_iterates);
    tr.push_back(first_iterates);
    for (std::size_t j = 0; j < p; ++j) {
        Int i2 = index(system.geodesics[j], 2);
        if (i2 < 3 * (n - 1)) tr.push_back("warning: c" + std::to_string(j + 1) + " has i(c^2) = " + i2.get_str());
    }

    std::vector<Int> degrees{Int(n - 1)};
    for (int i = 1; i <= n - 2; ++i) degrees.push_back(2 * i + n - 1);

    std::vector<CriticalSupport> first;
    for (const auto& d : system.geodesics) first.push_back(critical_support(d, 1, d.i1));
    std::vector<std::vector<std::size_t>> adj(degrees.size());
    for (std::size_t k = 0; k < degrees.size(); ++k)
        for (std::size_t j = 0; j < p; ++j)
            if (first[j].can_support(degrees[k])) adj[k].push_back(j);

    std::vector<int> owner(p, -1);
    std::function<bool(std::size_t, std::vector<bool>&)> augment = [&](std::size_t k, std::vector<bool>& seen) {
        for (auto j : adj[k]) {
            if (seen[j]) continue;
            seen[j] = true;
            if (owner[j] < 0 || augment(static_cast<std::size_t>(owner[j]), seen)) {
                owner[j] = static_cast<int>(k);
                return true;
            }
        }
        return false;
    };
    std::optional<std::size_t> unmatched;
    for (std::size_t k = 0; k < degrees.size(); ++k) {
        std::vector<bool> seen(p, false);
        if (!augment(k, seen) && !unmatched) unmatched = k;
    }
    for (std::size_t j = 0; j < p; ++j)
        if (owner[j] >= 0) rep.assignment[degrees[owner[j]]] = j;

    if (!unmatched) {
        rep.consistent = true;
        for (const auto& [q, j] : rep.assignment)
            tr.push_back("degree " + q.get_str() + " -> c" + std::to_string(j + 1) + " (first iterate)");
        tr.push_back("verdict: consistent, " + std::to_string(p) + " geodesics >= " + rep.lower_bound.get_str());
        return rep;
    }
    if (p < degrees.size()) {
        rep.blocking = "pigeonhole: " + std::to_string(degrees.size()) +
                       " degrees need pairwise distinct geodesics but only " + std::to_string(p) + " exist; " +
                       later_iterates + "; " + first_iterates;
    } else {
        rep.blocking = "degree " + degrees[*unmatched].get_str() +
                       " has no free first iterate; " + later_iterates + "; " + first_iterates;
    }
    tr.push_back("verdict: contradiction (" + rep.blocking + ")");
    return rep;
}

}  // namespace sik
