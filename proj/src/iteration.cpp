#include "sik/iteration.hpp"

#include <stdexcept>

namespace sik {

namespace {

void require_positive(const Int& m) {
    if (m < 1) throw std::invalid_argument("iterate must be >= 1, got " + m.get_str());
}

bool even(const Int& m) { return mpz_even_p(m.get_mpz_t()) != 0; }

template <class F>
void for_each_angle(const std::vector<Angle>& a, const std::vector<Angle>& b, F&& f) {
    for (const auto& x : a) f(x);
    for (const auto& x : b) f(x);
}

}  // namespace

Int index(const Decomposition& d, const Int& m) {
    require_positive(m);
    const int r = d.rotation_count();
    const int r_star = d.nontrivial_n2_count();
    const ExactScalar mm(m);
    Int i = m * (d.i1 + d.p_minus + d.p_zero - r) - r - d.p_minus - d.p_zero;
    for_each_angle(d.rot_rational, d.rot_irrational,
                   [&](const Angle& a) { i += 2 * ceil(mm * a.turn); });
    if (even(m)) i -= d.q_zero + d.q_plus;
    int phis = 0;
    for_each_angle(d.n2_nontrivial_rational, d.n2_nontrivial_irrational,
                   [&](const Angle& a) { phis += varphi(mm * a.turn); });
    i += 2 * (phis - r_star);
    return i;
}

Int nullity(const Decomposition& d, const Int& m) {
    require_positive(m);
    const ExactScalar mm(m);
    int nu = d.p_minus + 2 * d.p_zero + d.p_plus;
    if (even(m)) nu += d.q_minus + 2 * d.q_zero + d.q_plus;
    nu += 2 * (d.rotation_count() + d.nontrivial_n2_count() + d.trivial_n2_count());
    int phis = 0;
    auto add = [&](const Angle& a) { phis += varphi(mm * a.turn); };
    for_each_angle(d.rot_rational, d.rot_irrational, add);
    for_each_angle(d.n2_nontrivial_rational, d.n2_nontrivial_irrational, add);
    for_each_angle(d.n2_trivial_rational, d.n2_trivial_irrational, add);
    return Int(nu - 2 * phis);
}

ExactScalar average_index(const Decomposition& d) {
    ExactScalar avg(Int(d.i1 + d.p_minus + d.p_zero - d.rotation_count()));
    for_each_angle(d.rot_rational, d.rot_irrational,
                   [&](const Angle& a) { avg += ExactScalar(2) * a.turn; });
    return avg;
}

BottResult bott_check(const Decomposition& d, long m_max) {
    if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
    const Int half_e = elliptic_height(d) / 2;
    const Int nu1 = nullity(d, 1);
    Int i_prev = index(d, 1);
    const Int i1 = i_prev;
    for (long k = 1; k <= m_max; ++k) {
        Int m(k);
        Int i_next = index(d, Int(m + 1));
        Int mid = i_next - i_prev - i1;
        Int low = nullity(d, m) - half_e;
        Int high = nu1 - nullity(d, Int(m + 1)) + half_e;
        if (low > mid) return {BottViolation{m, true, low, mid}};
        if (mid > high) return {BottViolation{m, false, mid, high}};
        i_prev = i_next;
    }
    return {};
}

IterationProfile::IterationProfile(Decomposition d) : d_(std::move(d)), avg_(average_index(d_)) {}

IterationProfile::Entry IterationProfile::lookup(const Int& m) const {
    {
        std::shared_lock lock(mutex_);
        auto it = memo_.find(m);
        if (it != memo_.end()) return it->second;
    }
    Entry e{index(d_, m), nullity(d_, m)};
    std::unique_lock lock(mutex_);
    memo_.emplace(m, e);
    return e;
}

Int IterationProfile::index_at(const Int& m) const { return lookup(m).index; }
Int IterationProfile::nullity_at(const Int& m) const { return lookup(m).nullity; }

Int IterationProfile::top_at(const Int& m) const {
    auto e = lookup(m);
    return e.index + e.nullity;
}

}  // namespace sik
