// Brute-force search for small geodesic systems with a prescribed audit outcome.
//
//   sik_witness_search step2      gated n=4 triple with an axiom geodesic, audit ends in a contradiction
//   sik_witness_search consistent gated n=4 quadruple, two surd rotations each, audit consistent
//   sik_witness_search weak       weakly gated n=4 triple passing the weak count
//
// Prints {"system": ..., "tuple": ...} for the first hit.

#include "sik/io.hpp"

#include <algorithm>
#include <iostream>
#include <map>

using namespace sik;

namespace {

enum class Unit { p_minus, p_zero, p_plus, q_minus, q_zero, q_plus, h_plus, h_minus, rot };

struct Block {
    Unit unit;
    ExactScalar turn{0};
};

std::vector<ExactScalar> rational_turns() {
    std::vector<ExactScalar> t;
    for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 3}, {2, 3}, {1, 4}, {3, 4}, {1, 8}, {3, 8}, {5, 8}, {7, 8}})
        t.emplace_back(make_rational(p, q));
    return t;
}

std::vector<ExactScalar> surd_turns() {
    return {ExactScalar::surd(0, make_rational(1, 2), 2), ExactScalar::surd(1, make_rational(-1, 2), 2),
            ExactScalar::surd(-1, 1, 2), ExactScalar::surd(2, -1, 2),
            ExactScalar::surd(make_rational(1, 2), make_rational(1, 4), 2),
            ExactScalar::surd(make_rational(1, 2), make_rational(-1, 4), 2)};
}

Decomposition build(const std::vector<Block>& blocks, const Int& i1, const std::string& name) {
    Decomposition d;
    d.name = name;
    d.i1 = i1;
    for (const auto& b : blocks) {
        switch (b.unit) {
            case Unit::p_minus: ++d.p_minus; break;
            case Unit::p_zero: ++d.p_zero; break;
            case Unit::p_plus: ++d.p_plus; break;
            case Unit::q_minus: ++d.q_minus; break;
            case Unit::q_zero: ++d.q_zero; break;
            case Unit::q_plus: ++d.q_plus; break;
            case Unit::h_plus: ++d.h_plus; break;
            case Unit::h_minus: ++d.h_minus; break;
            case Unit::rot:
                (b.turn.is_rational() ? d.rot_rational : d.rot_irrational).push_back({b.turn});
                break;
        }
    }
    return d;
}

// Every decomposition of dimension 3 from the block menu, i1 <= i1_max, passing validate and the gate.
std::vector<Decomposition> menu(const PinchingRegime& regime, bool surds, bool rationals, int i1_max) {
    std::vector<Block> atoms;
    for (Unit u : {Unit::p_minus, Unit::p_zero, Unit::p_plus, Unit::q_minus, Unit::q_zero, Unit::q_plus,
                   Unit::h_plus, Unit::h_minus})
        atoms.push_back({u});
    if (rationals)
        for (auto& t : rational_turns()) atoms.push_back({Unit::rot, t});
    if (surds)
        for (auto& t : surd_turns()) atoms.push_back({Unit::rot, t});
    std::vector<Decomposition> out;
    const std::size_t A = atoms.size();
    for (std::size_t a = 0; a < A; ++a)
        for (std::size_t b = a; b < A; ++b)
            for (std::size_t c = b; c < A; ++c)
                for (int i1 = 1; i1 <= i1_max; ++i1) {
                    auto d = build({atoms[a], atoms[b], atoms[c]}, i1, "c");
                    if (!validate(d, 4).ok()) continue;
                    if (!gate_complete(d, regime, 10'000).ok()) continue;
                    out.push_back(std::move(d));
                }
    return out;
}

bool axiom_eligible(const Decomposition& d) {
    return d.p_minus == 0 && d.q_plus == 0 && d.hyperbolic_count() == 0 && !d.rot_irrational.empty() &&
           d.nontrivial_n2_count() == 0 && d.n2_trivial_irrational.empty();
}

std::optional<JumpTuple> first_tuple(const GeodesicSystem& sys, long n_limit) {
    SolveOptions opt;
    opt.bar_m = 3;
    opt.M0 = sys.n - 1;
    opt.epsilon = make_rational(1, 100);
    opt.n_limit = n_limit;
    opt.regime = sys.regime;
    auto t = solve_all(sys.geodesics, opt, 1);
    if (t.empty()) return std::nullopt;
    return t.front();
}

void print(const GeodesicSystem& sys, const JumpTuple& t) {
    json j{{"system", system_to_json(sys)}, {"tuple", tuple_to_json(t)}};
    std::cout << j.dump(2) << "\n";
}

int search_step2() {
    auto regime = PinchingRegime::main_pinch(4);
    auto all = menu(regime, true, true, 11);
    std::vector<Decomposition> heads, rest;
    for (auto& d : all) {
        if (axiom_eligible(d)) heads.push_back(d);
        if (d.rot_irrational.empty()) rest.push_back(d);
    }
    std::cerr << heads.size() << " axiom candidates, " << rest.size() << " rational candidates\n";
    long tried = 0;
    for (const auto& h : heads)
        for (std::size_t a = 0; a < rest.size(); ++a)
            for (std::size_t b = a; b < rest.size(); ++b) {
                GeodesicSystem sys{4, {h, rest[a], rest[b]}, regime, 0};
                sys.geodesics[0].name = "c1";
                sys.geodesics[1].name = "c2";
                sys.geodesics[2].name = "c3";
                auto t = first_tuple(sys, 3000);
                if (!t) continue;
                ++tried;
                auto rep = window_assign(sys, *t);
                if (rep.verdict == AuditReport::Verdict::contradiction && rep.step == "pivot_degree") {
                    std::cerr << "hit after " << tried << " audits\n";
                    print(sys, *t);
                    return 0;
                }
            }
    std::cerr << "no hit after " << tried << " audits\n";
    return 1;
}

int search_consistent() {
    auto regime = PinchingRegime::main_pinch(4);
    // Geodesics sharing one average index share the fraction condition, so tuples are frequent.
    std::map<std::string, std::vector<Decomposition>> by_avg;
    for (auto& d : menu(regime, true, true, 13))
        if (d.rot_irrational.size() == 2 && d.hyperbolic_count() == 0) by_avg[average_index(d).str()].push_back(d);
    long tried = 0;
    for (auto& [avg, pool] : by_avg) {
        const std::size_t P = pool.size();
        if (P < 4) continue;
        std::cerr << "average " << avg << ": " << P << " candidates\n";
        for (std::size_t a = 0; a < P; ++a)
            for (std::size_t b = a + 1; b < P; ++b)
                for (std::size_t c = b + 1; c < P; ++c)
                    for (std::size_t e = c + 1; e < P; ++e) {
                        GeodesicSystem sys{4, {pool[a], pool[b], pool[c], pool[e]}, regime, std::nullopt};
                        for (std::size_t k = 0; k < 4; ++k) sys.geodesics[k].name = "c" + std::to_string(k + 1);
                        SolveOptions opt;
                        opt.bar_m = 3;
                        opt.M0 = 3;
                        opt.epsilon = make_rational(1, 100);
                        opt.n_limit = 20000;
                        opt.regime = regime;
                        for (const auto& t : solve_all(sys.geodesics, opt, 3)) {
                            ++tried;
                            if (window_assign(sys, t).verdict == AuditReport::Verdict::consistent) {
                                std::cerr << "hit after " << tried << " audits\n";
                                print(sys, t);
                                return 0;
                            }
                        }
                    }
    }
    std::cerr << "no hit after " << tried << " audits\n";
    return 1;
}

int search_weak() {
    auto regime = PinchingRegime::weak_pinch(4);
    auto pool = menu(regime, false, true, 9);
    std::cerr << pool.size() << " weakly gated candidates\n";
    const std::size_t P = pool.size();
    for (std::size_t a = 0; a < P; ++a)
        for (std::size_t b = a + 1; b < P; ++b)
            for (std::size_t c = b + 1; c < P; ++c) {
                GeodesicSystem sys{4, {pool[a], pool[b], pool[c]}, regime, std::nullopt};
                for (std::size_t k = 0; k < 3; ++k) sys.geodesics[k].name = "c" + std::to_string(k + 1);
                if (weak_regime_count(sys).consistent) {
                    std::cout << system_to_json(sys).dump(2) << "\n";
                    return 0;
                }
            }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string mode = argc > 1 ? argv[1] : "";
    if (mode == "step2") return search_step2();
    if (mode == "consistent") return search_consistent();
    if (mode == "weak") return search_weak();
    std::cerr << "usage: sik_witness_search step2|consistent|weak\n";
    return 1;
}
