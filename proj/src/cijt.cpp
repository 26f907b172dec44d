#include "sik/cijt.hpp"

#include "sik/iteration.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <thread>

namespace sik {

namespace {

template <class F>
void for_each_rational_angle(const Decomposition& d, F&& f) {
    for (const auto* list : {&d.rot_rational, &d.n2_nontrivial_rational, &d.n2_trivial_rational})
        for (const auto& a : *list) f(a.turn.as_rational());
}

bool even(const Int& m) { return mpz_even_p(m.get_mpz_t()) != 0; }

Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace

Int compute_bar_M(const std::vector<Decomposition>& system) {
    if (system.empty()) throw std::invalid_argument("empty system");
    Int b = 1;
    for (const auto& d : system)
        for_each_rational_angle(d, [&](const Rational& t) { b = lcm(b, Rational(2 * t).get_den()); });
    return b;
}

unsigned worker_count(unsigned requested) {
    unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SIK_THREADS")) {
        long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return std::max(1u, n);
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

namespace {

class Checker {
public:
    explicit Checker(VerifyReport& rep) : rep_(rep) {}

    void at(std::size_t k, std::optional<Int> m) {
        k_ = k;
        m_ = std::move(m);
    }

    void equal(const char* identity, const Int& lhs, const Int& rhs) {
        if (lhs != rhs) fail(identity, lhs.get_str(), rhs.get_str());
    }
    void at_most(const char* identity, const Int& lhs, const Int& rhs) {
        if (lhs > rhs) fail(identity, lhs.get_str(), rhs.get_str());
    }
    void fail(const char* identity, std::string lhs, std::string rhs) {
        rep_.violations.push_back({identity, k_, m_, std::move(lhs), std::move(rhs)});
    }

private:
    VerifyReport& rep_;
    std::size_t k_ = 0;
    std::optional<Int> m_;
};

// i + nu at 2 m_k - m, expressed through the blocks only.
Int mirrored_top(const Decomposition& d, const Int& N, const Int& m, const Int& i_m) {
    const ExactScalar mm(m);
    Int v = 2 * N - i_m - d.p_minus + d.p_plus;
    if (even(m)) v += d.q_minus - d.q_plus;
    v += 2 * static_cast<long>(d.n2_trivial_rational.size());
    for (const auto& a : d.n2_trivial_rational) v -= 2 * varphi(mm * a.turn);
    v -= 2 * static_cast<long>(d.n2_nontrivial_rational.size());
    for (const auto& a : d.n2_nontrivial_rational) v += 2 * varphi(mm * a.turn);
    return v;
}

// S- weights of the eigen-turns of one decomposition, split by resonance with 2 m_k.
class ResonanceTable {
public:
    ResonanceTable(const Decomposition& d, const Int& m_k, const ExactScalar& delta) {
        const ExactScalar two_mk(Int(2 * m_k));
        for (const auto& t : eigen_turns(d)) {
            const int w = splitting(d, UnitPoint{t}).s_minus;
            if (w == 0) continue;
            const auto f = frac(two_mk * t);
            if (f.sign() == 0) resonant_.emplace_back(t, w);
            else if (f < delta) near_ += w;
        }
    }

    int q(const Int& m) const {
        int total = 0;
        const ExactScalar mm(m);
        for (const auto& [t, w] : resonant_)
            if (is_integer(mm * t)) total += w;
        return total;
    }

    int near() const { return near_; }

private:
    std::vector<std::pair<ExactScalar, int>> resonant_;
    int near_ = 0;
};

}  // namespace

VerifyReport verify(const JumpTuple& tuple, const std::vector<Decomposition>& system, long bar_m,
                    const VerifyOptions& options) {
    if (system.empty()) throw std::invalid_argument("empty system");
    if (tuple.m.size() != system.size() || tuple.chi.size() != system.size())
        throw std::invalid_argument("tuple has " + std::to_string(tuple.m.size()) + " iterates for a system of " +
                                    std::to_string(system.size()));
    if (bar_m < 1) throw std::invalid_argument("bar_m must be >= 1");
    if (options.regime) {
        for (const auto& d : system)
            if (d.dimension() != options.regime->n - 1)
                throw std::invalid_argument("decomposition '" + d.name + "' does not match n = " +
                                            std::to_string(options.regime->n));
    }

    VerifyReport rep;
    Checker check(rep);
    const Rational delta = options.delta.value_or(tuple.epsilon);
    const Int& N = tuple.N;

    check.at(0, std::nullopt);
    if (tuple.bar_M < 1 || tuple.M0 < 1 || N < 1) {
        check.fail("tuple.positive", "N=" + N.get_str() + ", bar_M=" + tuple.bar_M.get_str(),
                   "positive integers");
        return rep;
    }
    if (!mpz_divisible_p(N.get_mpz_t(), tuple.M0.get_mpz_t()))
        check.fail("tuple.M0_divides_N", N.get_str(), "multiple of " + tuple.M0.get_str());

    for (std::size_t k = 0; k < system.size(); ++k) {
        const auto& d = system[k];
        const Int& mk = tuple.m[k];
        check.at(k, std::nullopt);

        for_each_rational_angle(d, [&](const Rational& t) {
            Rational v = tuple.bar_M * 2 * t;
            if (v.get_den() != 1) check.fail("tuple.bar_M_resonance", to_string(v), "integer");
        });

        const auto avg = average_index(d);
        if (avg.sign() <= 0) {
            check.fail("tuple.average_index_positive", avg.str(), "> 0");
            continue;
        }
        const auto x = ExactScalar(N) / (ExactScalar(tuple.bar_M) * avg);
        const Int expected = (floor(x) + tuple.chi[k]) * tuple.bar_M;
        if (tuple.chi[k] != 0 && tuple.chi[k] != 1)
            check.fail("tuple.chi_binary", std::to_string(tuple.chi[k]), "0 or 1");
        check.equal("tuple.iterate_formula", mk, expected);
        const auto gap = frac(x) - ExactScalar(tuple.chi[k]);
        const auto dist = gap.sign() < 0 ? -gap : gap;
        if (dist >= ExactScalar(tuple.epsilon))
            check.fail("tuple.fraction_window", dist.str(), "< " + to_string(tuple.epsilon));
        if (2 * mk - bar_m < 1) {
            check.fail("tuple.iterate_range", Int(2 * mk - bar_m).get_str(), ">= 1");
            continue;
        }

        const int s1 = s_plus_one(d);
        const int c = big_c(d);
        const int e = elliptic_height(d);
        const ResonanceTable turns(d, mk, ExactScalar(delta));
        const int dk = turns.near();
        const Int center = 2 * mk;
        const Int i_center = index(d, center);
        const Int top_center = i_center + nullity(d, center);
        check.equal("index.center", i_center, 2 * N - (s1 + c - 2 * dk));
        check.at_most("center.lower", 2 * N - e / 2, i_center);
        check.at_most("center.upper", top_center, 2 * N + e / 2);
        if (options.regime) {
            const int n1 = options.regime->n - 1;
            check.at_most("pinch.center.lower", 2 * N - n1, i_center);
            check.at_most("pinch.center.upper", top_center, 2 * N + n1);
        }

        for (long mv = 1; mv <= bar_m; ++mv) {
            const Int m(mv);
            check.at(k, m);
            const Int i_m = index(d, m);
            const Int nu_m = nullity(d, m);
            const Int lo = center - m, hi = center + m;
            const Int i_lo = index(d, lo), nu_lo = nullity(d, lo);
            const Int i_hi = index(d, hi), nu_hi = nullity(d, hi);
            const int q = turns.q(m);

            check.equal("nullity.minus", nu_lo, nu_m);
            check.equal("nullity.plus", nu_hi, nu_m);
            check.equal("index.plus", i_hi, 2 * N + i_m);
            check.equal("index.minus", i_lo, 2 * N - i_m - 2 * (s1 + q));
            check.equal("top.minus", i_lo + nu_lo, 2 * N - i_m - (2 * s1 + 2 * q - nu_m));
            check.equal("top.minus.blocks", i_lo + nu_lo, mirrored_top(d, N, m, i_m));
            if (options.regime) {
                const Int floor_m = min_index(*options.regime, m);
                const int n1 = options.regime->n - 1;
                check.at_most("pinch.minus", i_lo + nu_lo, 2 * N + n1 - floor_m);
                check.at_most("pinch.plus", 2 * N + floor_m, i_hi);
            }
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Search
// ---------------------------------------------------------------------------

namespace {

using i128 = __int128;

// Fractional part tracker for N / (bar_M * avg) along N = start, start + step, ...
class FractionTrack {
public:
    FractionTrack(const ExactScalar& avg, const Int& bar_M, const Rational& eps) : eps_(eps) {
        inv_ = ExactScalar(1) / (ExactScalar(bar_M) * avg);
        if (inv_.is_rational()) {
            num_ = inv_.as_rational().get_num();
            den_ = inv_.as_rational().get_den();
        }
    }

    bool rational() const { return inv_.is_rational(); }

    // Outcome for a given N: chi in {0,1}, or -1 when outside the window.
    int chi(const Int& N) const {
        auto f = frac(ExactScalar(N) * inv_);
        if (f < ExactScalar(eps_)) return 0;
        if (ExactScalar(1) - f < ExactScalar(eps_)) return 1;
        return -1;
    }

    Int floor_at(const Int& N) const { return floor(ExactScalar(N) * inv_); }

    const Int& num() const { return num_; }
    const Int& den() const { return den_; }
    const Rational& eps() const { return eps_; }

private:
    ExactScalar inv_;
    Rational eps_;
    Int num_, den_;
};

// Residue-based fast path for rational averages: N * num mod den, with 128-bit arithmetic.
class ResidueCursor {
public:
    ResidueCursor(const FractionTrack& t, const Int& start, const Int& step) {
        const Int lim = Int(1) << 60;
        fast_ = t.rational() && t.den() < lim && t.eps().get_num() < lim && t.eps().get_den() < lim;
        if (!fast_) return;
        den_ = static_cast<i128>(t.den().get_si());
        en_ = static_cast<i128>(t.eps().get_num().get_si());
        ed_ = static_cast<i128>(t.eps().get_den().get_si());
        Int r0 = (start * t.num()) % t.den();
        Int dr = (step * t.num()) % t.den();
        r_ = static_cast<i128>(r0.get_si());
        step_ = static_cast<i128>(dr.get_si());
    }

    bool fast() const { return fast_; }

    int chi() const {
        if (r_ * ed_ < en_ * den_) return 0;
        if ((den_ - r_) * ed_ < en_ * den_) return 1;
        return -1;
    }

    void advance() {
        r_ += step_;
        if (r_ >= den_) r_ -= den_;
    }

private:
    bool fast_ = false;
    i128 den_ = 1, en_ = 0, ed_ = 1, r_ = 0, step_ = 0;
};

struct BlockResult {
    std::vector<JumpTuple> tuples;
    SolveStats stats;
};

struct SearchContext {
    const std::vector<Decomposition>& system;
    const SolveOptions& options;
    Int bar_M;
    std::vector<FractionTrack> tracks;
};

BlockResult scan_block(const SearchContext& ctx, const Int& first_multiple, const Int& last_multiple) {
    BlockResult out;
    const auto q = ctx.system.size();
    const Int start = first_multiple * ctx.options.M0;
    std::vector<ResidueCursor> cursors;
    cursors.reserve(q);
    for (const auto& t : ctx.tracks) cursors.emplace_back(t, start, ctx.options.M0);

    VerifyOptions vopt{ctx.options.delta, ctx.options.regime};
    std::vector<int> chi(q);
    Int N = start;
    for (Int j = first_multiple; j <= last_multiple; ++j, N += ctx.options.M0) {
        ++out.stats.scanned;
        bool match = true;
        for (std::size_t k = 0; k < q; ++k) {
            int c = -1;
            if (ctx.tracks[k].rational() && cursors[k].fast()) c = cursors[k].chi();
            else if (match) c = ctx.tracks[k].chi(N);
            if (c < 0) match = false;
            chi[k] = c;
        }
        for (auto& cur : cursors)
            if (cur.fast()) cur.advance();
        if (!match) continue;
        ++out.stats.fraction_matches;

        JumpTuple t{N, {}, chi, ctx.bar_M, ctx.options.epsilon, ctx.options.M0};
        bool small = false;
        for (std::size_t k = 0; k < q; ++k) {
            Int mk = (ctx.tracks[k].floor_at(N) + chi[k]) * ctx.bar_M;
            if (2 * mk - ctx.options.bar_m < 1) small = true;
            t.m.push_back(mk);
        }
        if (small) {
            ++out.stats.too_small;
            continue;
        }
        if (!verify(t, ctx.system, ctx.options.bar_m, vopt).ok()) {
            ++out.stats.verify_rejections;
            continue;
        }
        out.tuples.push_back(std::move(t));
    }
    return out;
}

void merge(SolveStats& into, const SolveStats& s) {
    into.scanned += s.scanned;
    into.fraction_matches += s.fraction_matches;
    into.too_small += s.too_small;
    into.verify_rejections += s.verify_rejections;
}

}  // namespace

SolveStats solve(const std::vector<Decomposition>& system, const SolveOptions& options, const TupleSink& sink) {
    if (system.empty()) throw std::invalid_argument("empty system");
    if (options.epsilon <= 0 || options.epsilon >= Rational(1, 2))
        throw std::invalid_argument("epsilon must lie in (0, 1/2), got " + to_string(options.epsilon));
    if (options.delta && (*options.delta <= 0 || *options.delta >= 1))
        throw std::invalid_argument("delta must lie in (0, 1)");
    if (options.bar_m < 1) throw std::invalid_argument("bar_m must be >= 1");
    if (options.M0 < 1) throw std::invalid_argument("M0 must be >= 1");

    SearchContext ctx{system, options, compute_bar_M(system), {}};
    for (const auto& d : system) {
        auto avg = average_index(d);
        if (avg.sign() <= 0)
            throw std::invalid_argument("decomposition '" + d.name + "' has non-positive average index " + avg.str());
        ctx.tracks.emplace_back(avg, ctx.bar_M, options.epsilon);
    }

    SolveStats stats;
    const Int total = options.n_limit < options.M0 ? Int(0) : Int(options.n_limit / options.M0);
    const unsigned workers = worker_count(options.threads);
    // Small first blocks so an early stop does not verify a whole block of matches.
    Int block = 64;
    const Int max_block = 1 << 14;

    Int next = 1;
    bool stop = false;
    while (!stop && next <= total) {
        std::vector<std::pair<Int, Int>> ranges;
        for (unsigned w = 0; w < workers && next <= total; ++w) {
            Int last = next + block - 1;
            if (last > total) last = total;
            ranges.emplace_back(next, last);
            next = last + 1;
        }
        if (block < max_block) block *= 2;
        std::vector<BlockResult> results(ranges.size());
        if (ranges.size() == 1) {
            results[0] = scan_block(ctx, ranges[0].first, ranges[0].second);
        } else {
            std::vector<std::thread> pool;
            std::vector<std::exception_ptr> errors(ranges.size());
            for (std::size_t w = 0; w < ranges.size(); ++w)
                pool.emplace_back([&, w] {
                    try {
                        results[w] = scan_block(ctx, ranges[w].first, ranges[w].second);
                    } catch (...) {
                        errors[w] = std::current_exception();
                    }
                });
            for (auto& th : pool) th.join();
            for (auto& e : errors)
                if (e) std::rethrow_exception(e);
        }
        for (auto& r : results) {
            if (stop) break;
            merge(stats, r.stats);
            for (auto& t : r.tuples) {
                ++stats.emitted;
                if (!sink(t)) {
                    stop = true;
                    break;
                }
            }
        }
    }
    return stats;
}

std::vector<JumpTuple> solve_all(const std::vector<Decomposition>& system, const SolveOptions& options,
                                 std::size_t max_tuples, SolveStats* stats) {
    std::vector<JumpTuple> out;
    if (max_tuples == 0) return out;
    auto s = solve(system, options, [&](const JumpTuple& t) {
        out.push_back(t);
        return out.size() < max_tuples;
    });
    if (stats) *stats = s;
    return out;
}

}  // namespace sik
