#include "sik/pinching.hpp"

#include "sik/iteration.hpp"

#include <stdexcept>

namespace sik {

PinchingRegime PinchingRegime::main_pinch(int n) {
    if (n < 4) throw std::invalid_argument("pinching regimes require n >= 4");
    return {Kind::main, n};
}

PinchingRegime PinchingRegime::weak_pinch(int n) {
    if (n < 4) throw std::invalid_argument("pinching regimes require n >= 4");
    return {Kind::weak, n};
}

std::string PinchingRegime::name() const { return kind == Kind::main ? "main" : "weak"; }

PinchingRegime parse_regime(const std::string& text, int n) {
    if (text == "main") return PinchingRegime::main_pinch(n);
    if (text == "weak") return PinchingRegime::weak_pinch(n);
    throw std::invalid_argument("unknown regime '" + text + "' (expected main or weak)");
}

Int min_index(const PinchingRegime& regime, const Int& m) {
    if (m < 1) throw std::invalid_argument("iterate must be >= 1");
    const long n1 = regime.n - 1;
    if (regime.kind == PinchingRegime::Kind::main)
        return floor_div(Int((2 * regime.n - 3) * m), Int(n1)) * n1;
    return floor_div(Int(3 * m), Int(2)) * n1;
}

Rational min_avg_index(const PinchingRegime& regime) {
    if (regime.kind == PinchingRegime::Kind::main) return Rational(2 * regime.n - 3);
    return make_rational(3 * (regime.n - 1), 2);
}

namespace {

bool average_ok(const Decomposition& d, const PinchingRegime& regime, GateResult& res) {
    auto avg = average_index(d);
    Rational bound = min_avg_index(regime);
    if (avg > ExactScalar(bound)) return true;
    res.failures.push_back({std::nullopt, avg.str(), to_string(bound),
                            "average index " + avg.str() + " must exceed " + to_string(bound)});
    return false;
}

void check_iterates(const Decomposition& d, const PinchingRegime& regime, const Int& upto, GateResult& res) {
    for (Int m = 1; m <= upto; ++m) {
        Int i = index(d, m);
        Int bound = min_index(regime, m);
        if (i < bound)
            res.failures.push_back({m, i.get_str(), bound.get_str(),
                                    "index " + i.get_str() + " at iterate " + m.get_str() +
                                        " is below " + bound.get_str()});
    }
    res.checked_up_to = upto;
}

// i(m) >= m * avg - slack for every m.
Int index_slack(const Decomposition& d) {
    return d.rotation_count() + d.p_minus + d.p_zero + d.q_zero + d.q_plus + 2 * d.nontrivial_n2_count();
}

}  // namespace

GateResult gate(const Decomposition& d, const PinchingRegime& regime, long m_max) {
    if (m_max < 0) throw std::invalid_argument("m_max must be >= 0");
    GateResult res;
    average_ok(d, regime, res);
    check_iterates(d, regime, Int(m_max), res);
    return res;
}

std::optional<Int> gate_horizon(const Decomposition& d, const PinchingRegime& regime) {
    auto margin = average_index(d) - ExactScalar(min_avg_index(regime));
    if (margin.sign() <= 0) return std::nullopt;
    Int h = ceil(ExactScalar(index_slack(d)) / margin);
    return h < 1 ? Int(1) : h;
}

GateResult gate_complete(const Decomposition& d, const PinchingRegime& regime, long max_horizon) {
    GateResult res;
    if (!average_ok(d, regime, res)) return res;
    Int h = *gate_horizon(d, regime);
    if (h > max_horizon) {
        res.failures.push_back({std::nullopt, h.get_str(), std::to_string(max_horizon),
                                "gate horizon " + h.get_str() + " exceeds the search cap"});
        return res;
    }
    check_iterates(d, regime, h, res);
    return res;
}

}  // namespace sik
