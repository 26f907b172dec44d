#include "oracles.hpp"

#include "sik/iteration.hpp"
#include "sik/pinching.hpp"

#include <doctest.h>

#include <random>

using namespace sik;

namespace {

Decomposition eighth_rotation() {
    Decomposition d;
    d.i1 = 7;
    d.p_plus = 2;
    d.rot_rational = {{ExactScalar(make_rational(1, 8))}};
    return d;
}

}  // namespace

TEST_CASE("min index examples") {
    const auto main4 = PinchingRegime::main_pinch(4);
    const auto weak4 = PinchingRegime::weak_pinch(4);
    CHECK(min_index(main4, 1) == 3);
    CHECK(min_index(main4, 2) == 9);
    CHECK(min_index(weak4, 2) == 9);
    CHECK(min_index(weak4, 1) == 3);
    CHECK(min_index(PinchingRegime::main_pinch(6), 3) == 25);
}

TEST_CASE("min average index") {
    CHECK(min_avg_index(PinchingRegime::main_pinch(4)) == 5);
    CHECK(min_avg_index(PinchingRegime::main_pinch(6)) == 9);
    CHECK(min_avg_index(PinchingRegime::weak_pinch(4)) == Rational(9, 2));
}

TEST_CASE("regimes") {
    CHECK(parse_regime("main", 5) == PinchingRegime::main_pinch(5));
    CHECK(parse_regime("weak", 4) == PinchingRegime::weak_pinch(4));
    CHECK_THROWS(parse_regime("strong", 4));
    CHECK_THROWS(PinchingRegime::main_pinch(3));
    CHECK(PinchingRegime::weak_pinch(4).name() == "weak");
}

TEST_CASE("gate examples") {
    const auto main4 = PinchingRegime::main_pinch(4);
    Decomposition h;
    h.i1 = 3;
    h.h_plus = 3;
    auto bad = gate(h, main4, 20);
    CHECK_FALSE(bad.ok());
    CHECK_FALSE(bad.failures.front().m.has_value());

    auto d = eighth_rotation();
    CHECK(average_index(d) == ExactScalar(make_rational(25, 4)));
    CHECK(gate(d, main4, 20).ok());
    CHECK(gate_complete(d, main4).ok());

    auto only_avg = gate(d, main4, 0);
    CHECK(only_avg.ok());
    CHECK(only_avg.checked_up_to == 0);
    CHECK_FALSE(gate(h, main4, 0).ok());
}

TEST_CASE("superadditivity up to the floor correction") {
    for (int n = 4; n <= 9; ++n)
        for (auto regime : {PinchingRegime::main_pinch(n), PinchingRegime::weak_pinch(n)})
            for (long a = 1; a <= 40; ++a)
                for (long b = 1; b <= 40; ++b)
                    CHECK(min_index(regime, a + b) >= min_index(regime, a) + min_index(regime, b) - (n - 1));
}

TEST_CASE("gate is monotone in m_max and forces the monotonicity package") {
    std::mt19937_64 rng(41);
    int passed = 0;
    for (int k = 0; k < 4000 && passed < 60; ++k) {
        const int n = 4 + static_cast<int>(rng() % 2);
        auto d = oracle::random_decomposition(rng, n - 1);
        d.i1 = oracle::parity_i1(d, Int(static_cast<long>(n - 1 + rng() % 12)));
        const auto regime = PinchingRegime::main_pinch(n);
        auto full = gate(d, regime, 30);
        if (!full.ok()) continue;
        ++passed;
        for (long m = 0; m < 30; ++m) CHECK(gate(d, regime, m).ok());
        CHECK(d.i1 >= n - 1);
        const int e = elliptic_height(d);
        for (long m = 1; m <= 100; ++m)
            CHECK(2 * (index(d, m + 1) - index(d, m) - nullity(d, m)) >= 2 * d.i1 - e);
    }
    CHECK(passed > 0);
}

TEST_CASE("complete gate agrees with a long explicit scan") {
    std::mt19937_64 rng(42);
    const auto regime = PinchingRegime::main_pinch(4);
    for (int k = 0; k < 300; ++k) {
        auto d = oracle::random_decomposition(rng, 3);
        d.i1 = oracle::parity_i1(d, Int(static_cast<long>(3 + rng() % 10)));
        auto complete = gate_complete(d, regime);
        auto horizon = gate_horizon(d, regime);
        CHECK(horizon.has_value() == (average_index(d) > ExactScalar(min_avg_index(regime))));
        if (complete.ok()) CHECK(gate(d, regime, 400).ok());
        if (!gate(d, regime, 400).ok()) CHECK_FALSE(complete.ok());
    }
}
