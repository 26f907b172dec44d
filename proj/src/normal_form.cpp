#include "sik/normal_form.hpp"

#include <algorithm>
#include <sstream>

namespace sik {

int Decomposition::rotation_count() const {
    return static_cast<int>(rot_rational.size() + rot_irrational.size());
}

int Decomposition::nontrivial_n2_count() const {
    return static_cast<int>(n2_nontrivial_rational.size() + n2_nontrivial_irrational.size());
}

int Decomposition::trivial_n2_count() const {
    return static_cast<int>(n2_trivial_rational.size() + n2_trivial_irrational.size());
}

int Decomposition::dimension() const {
    return p_minus + p_zero + p_plus + q_minus + q_zero + q_plus + rotation_count() +
           2 * (nontrivial_n2_count() + trivial_n2_count()) + h_plus + h_minus;
}

Decomposition direct_sum(const Decomposition& a, const Decomposition& b) {
    Decomposition s = a;
    s.i1 = a.i1 + b.i1;
    s.p_minus += b.p_minus;
    s.p_zero += b.p_zero;
    s.p_plus += b.p_plus;
    s.q_minus += b.q_minus;
    s.q_zero += b.q_zero;
    s.q_plus += b.q_plus;
    auto append = [](std::vector<Angle>& dst, const std::vector<Angle>& src) {
        dst.insert(dst.end(), src.begin(), src.end());
    };
    append(s.rot_rational, b.rot_rational);
    append(s.rot_irrational, b.rot_irrational);
    append(s.n2_nontrivial_rational, b.n2_nontrivial_rational);
    append(s.n2_nontrivial_irrational, b.n2_nontrivial_irrational);
    append(s.n2_trivial_rational, b.n2_trivial_rational);
    append(s.n2_trivial_irrational, b.n2_trivial_irrational);
    s.h_plus += b.h_plus;
    s.h_minus += b.h_minus;
    return s;
}

bool ValidationResult::ok() const {
    return std::none_of(issues.begin(), issues.end(),
                        [](const Issue& i) { return i.severity == Severity::error; });
}

std::string ValidationResult::summary() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& i : issues) {
        if (!first) os << "; ";
        first = false;
        os << (i.severity == Severity::error ? "error" : "warning") << " [" << i.field << "] "
           << i.message;
    }
    return os.str();
}

namespace {

struct AngleList {
    const char* field;
    const std::vector<Angle>* angles;
    bool rational;
};

std::vector<AngleList> angle_lists(const Decomposition& d) {
    return {{"rot_rational", &d.rot_rational, true},
            {"rot_irrational", &d.rot_irrational, false},
            {"n2_nontrivial_rational", &d.n2_nontrivial_rational, true},
            {"n2_nontrivial_irrational", &d.n2_nontrivial_irrational, false},
            {"n2_trivial_rational", &d.n2_trivial_rational, true},
            {"n2_trivial_irrational", &d.n2_trivial_irrational, false}};
}

}  // namespace

ValidationResult validate(const Decomposition& d, int n) {
    ValidationResult res;
    auto error = [&](std::string field, std::string msg) {
        res.issues.push_back({Severity::error, std::move(field), std::move(msg)});
    };
    const std::pair<const char*, int> counts[] = {
        {"p_minus", d.p_minus}, {"p_zero", d.p_zero}, {"p_plus", d.p_plus},
        {"q_minus", d.q_minus}, {"q_zero", d.q_zero}, {"q_plus", d.q_plus},
        {"h_plus", d.h_plus},   {"h_minus", d.h_minus}};
    for (const auto& [field, value] : counts)
        if (value < 0) error(field, "count must be non-negative, got " + std::to_string(value));

    const ExactScalar half(Rational(1, 2));
    Int field_d = 0;
    for (const auto& list : angle_lists(d)) {
        for (std::size_t k = 0; k < list.angles->size(); ++k) {
            const auto& t = (*list.angles)[k].turn;
            std::string where = std::string(list.field) + "[" + std::to_string(k) + "]";
            if (t.sign() <= 0 || t >= ExactScalar(1))
                error(where, "turn " + t.str() + " outside (0,1)");
            if (list.rational && !t.is_rational())
                error(where, "irrational turn " + t.str() + " in a rational list");
            if (!list.rational && t.is_rational())
                error(where, "rational turn " + t.str() + " in an irrational list");
            if (t == half) error(where, "turn 1/2 is not allowed");
            if (!t.is_rational()) {
                if (field_d == 0) field_d = t.radicand();
                else if (field_d != t.radicand())
                    error(where, "irrational turns must share one quadratic field, found sqrt(" +
                                     field_d.get_str() + ") and sqrt(" + t.radicand().get_str() + ")");
            }
        }
    }

    if (d.dimension() != n - 1)
        error("dimension", "blocks span dimension " + std::to_string(d.dimension()) +
                               " but n-1 = " + std::to_string(n - 1));

    int odd_blocks = d.p_minus + d.p_zero + d.q_minus + d.q_zero + d.q_plus + d.rotation_count();
    Int diff = d.i1 - odd_blocks;
    if (mpz_odd_p(diff.get_mpz_t())) {
        std::string msg = "i1 = " + d.i1.get_str() + " has the wrong parity for its elliptic blocks";
        if (d.hyperbolic_count() > 0)
            res.issues.push_back({Severity::warning, "i1", msg + " (hyperbolic blocks present)"});
        else
            error("i1", msg);
    }
    return res;
}

void require_valid(const Decomposition& d, int n) {
    auto res = validate(d, n);
    if (!res.ok())
        throw InvalidDecomposition("decomposition '" + d.name + "': " + res.summary());
}

UnitPoint UnitPoint::at(const ExactScalar& turn) {
    if (turn.sign() < 0 || turn >= ExactScalar(1))
        throw std::invalid_argument("unit point turn must lie in [0,1), got " + turn.str());
    return {turn};
}

SplittingPair splitting(const Decomposition& d, const UnitPoint& omega) {
    SplittingPair s;
    const auto& w = omega.turn;
    if (w.sign() == 0) {
        s.s_plus += d.p_minus + d.p_zero;
        s.s_minus += d.p_minus + d.p_zero;
        return s;
    }
    if (w == ExactScalar(Rational(1, 2))) {
        s.s_plus += d.q_zero + d.q_plus;
        s.s_minus += d.q_zero + d.q_plus;
        return s;
    }
    const ExactScalar mirror = ExactScalar(1) - w;
    for (const auto* list : {&d.rot_rational, &d.rot_irrational}) {
        for (const auto& a : *list) {
            if (a.turn == w) s.s_minus += 1;
            if (a.turn == mirror) s.s_plus += 1;
        }
    }
    for (const auto* list : {&d.n2_nontrivial_rational, &d.n2_nontrivial_irrational}) {
        for (const auto& a : *list) {
            if (a.turn == w || a.turn == mirror) s += SplittingPair{1, 1};
        }
    }
    return s;
}

std::vector<ExactScalar> eigen_turns(const Decomposition& d) {
    std::vector<ExactScalar> out;
    auto add = [&](const ExactScalar& t) {
        if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    };
    if (d.q_minus + d.q_zero + d.q_plus > 0) add(ExactScalar(Rational(1, 2)));
    for (const auto& list : angle_lists(d)) {
        for (const auto& a : *list.angles) {
            add(a.turn);
            add(ExactScalar(1) - a.turn);
        }
    }
    return out;
}

int elliptic_height(const Decomposition& d) { return 2 * (d.dimension() - d.hyperbolic_count()); }

int s_plus_one(const Decomposition& d) { return d.p_minus + d.p_zero; }

int big_c(const Decomposition& d) {
    return d.q_zero + d.q_plus + d.rotation_count() + 2 * d.nontrivial_n2_count();
}

int q_of_m(const Decomposition& d, const Int& m_k, const Int& m) {
    int q = 0;
    for (const auto& t : eigen_turns(d)) {
        if (is_integer(ExactScalar(Int(2 * m_k)) * t) && is_integer(ExactScalar(m) * t))
            q += splitting(d, UnitPoint{t}).s_minus;
    }
    return q;
}

int q_closed_form(const Decomposition& d, const Int& m) {
    int q = mpz_even_p(m.get_mpz_t()) ? d.q_zero + d.q_plus : 0;
    const ExactScalar mm(m);
    q += static_cast<int>(d.rot_rational.size());
    for (const auto& a : d.rot_rational) q -= varphi(mm * a.turn);
    q += 2 * static_cast<int>(d.n2_nontrivial_rational.size());
    for (const auto& a : d.n2_nontrivial_rational) q -= 2 * varphi(mm * a.turn);
    return q;
}

int delta_of(const Decomposition& d, const Int& m_k, const ExactScalar& delta) {
    int total = 0;
    const ExactScalar two_mk(Int(2 * m_k));
    for (const auto& t : eigen_turns(d)) {
        auto f = frac(two_mk * t);
        if (f.sign() > 0 && f < delta) total += splitting(d, UnitPoint{t}).s_minus;
    }
    return total;
}

}  // namespace sik
