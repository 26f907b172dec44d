#include "sik/loop_space.hpp"

#include "sik/iteration.hpp"

#include <stdexcept>

namespace sik {

namespace {

bool divisible(const Int& a, long b) { return mpz_divisible_ui_p(a.get_mpz_t(), static_cast<unsigned long>(b)) != 0; }

}  // namespace

int betti(int n, const Int& q) {
    if (n < 3) throw std::invalid_argument("betti requires n >= 3");
    if (q < 0) return 0;
    if (n % 2 == 1) {
        const long k = (n - 1) / 2;
        if (q == 2 * k) return 1;
        if (mpz_odd_p(q.get_mpz_t()) || q < 2 * k) return 0;
        if (q >= 4 * k && divisible(Int((q - 4 * k) / 2), k)) return 2;
        Int l = (q - 2 * k) / 2;
        return divisible(l, k) ? 0 : 1;
    }
    const long k = n / 2;
    const long period = 2 * k - 1;
    if (q == period) return 1;
    if (mpz_even_p(q.get_mpz_t()) || q < period) return 0;
    if (q >= 6 * k - 3 && divisible(Int((q - (6 * k - 3)) / 2), period)) return 2;
    Int l = (q - period) / 2;
    return divisible(l, period) ? 0 : 1;
}

const char* pattern_name(SupportPattern p) {
    switch (p) {
        case SupportPattern::bottom: return "bottom";
        case SupportPattern::top: return "top";
        case SupportPattern::interior: return "interior";
        case SupportPattern::empty: return "empty";
    }
    return "?";
}

std::vector<SupportPattern> CriticalSupport::patterns() const {
    if (mode == Mode::exact) {
        if (exact_supported) return {SupportPattern::bottom};
        return {SupportPattern::empty};
    }
    std::vector<SupportPattern> out{SupportPattern::bottom, SupportPattern::top};
    if (nullity >= 2) out.push_back(SupportPattern::interior);
    out.push_back(SupportPattern::empty);
    return out;
}

bool CriticalSupport::pattern_supports(SupportPattern p, const Int& q) const {
    switch (p) {
        case SupportPattern::bottom: return q == low();
        case SupportPattern::top: return q == high();
        case SupportPattern::interior: return q > low() && q < high();
        case SupportPattern::empty: return false;
    }
    return false;
}

std::optional<Int> CriticalSupport::pattern_max_rank(SupportPattern p, const Int& q) const {
    if (!pattern_supports(p, q)) return Int(0);
    if (p == SupportPattern::interior) return std::nullopt;
    return Int(1);
}

bool CriticalSupport::can_support(const Int& q) const {
    for (auto p : patterns())
        if (pattern_supports(p, q)) return true;
    return false;
}

CriticalSupport critical_support(const Decomposition& d, const Int& m, const Int& i_of_d_at_1) {
    CriticalSupport s;
    s.m = m;
    s.index = index(d, m);
    s.nullity = nullity(d, m);
    if (s.nullity == 0) {
        s.mode = CriticalSupport::Mode::exact;
        s.exact_supported = mpz_even_p(Int(s.index - i_of_d_at_1).get_mpz_t()) != 0;
    } else {
        s.mode = CriticalSupport::Mode::constrained;
    }
    return s;
}

MorseReport morse_check(const std::map<Int, Int>& morse, int n, const Int& q_lo, const Int& q_hi) {
    if (q_lo < 0 || q_hi < q_lo) throw std::invalid_argument("invalid degree range");
    for (const auto& [q, count] : morse) {
        if (count < 0) throw std::invalid_argument("negative Morse count at degree " + q.get_str());
        if (q < q_lo || q > q_hi)
            throw std::invalid_argument("Morse count at degree " + q.get_str() + " outside the range");
    }
    auto morse_at = [&](const Int& q) {
        auto it = morse.find(q);
        return it == morse.end() ? Int(0) : it->second;
    };
    MorseReport rep;
    Int alt_m = 0, alt_b = 0;
    for (Int q = 0; q <= q_hi; ++q) {
        Int mq = morse_at(q);
        int bq = betti(n, q);
        alt_m = mq - alt_m;
        alt_b = bq - alt_b;
        if (q < q_lo) continue;
        MorseRow row{q, mq, bq, alt_m, alt_b, mq >= bq, alt_m >= alt_b};
        if (!rep.first_violation) {
            if (!row.pointwise_ok) rep.first_violation = MorseViolation{q, false, mq, Int(bq)};
            else if (!row.alternating_ok) rep.first_violation = MorseViolation{q, true, alt_m, alt_b};
        }
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace sik
