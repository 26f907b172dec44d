#include "oracles.hpp"

#include "sik/iteration.hpp"

#include <doctest.h>

#include <random>
#include <thread>

using namespace sik;

namespace {

Angle turn(long p, long q) { return {ExactScalar(make_rational(p, q))}; }

Decomposition third() {
    Decomposition d;
    d.i1 = 1;
    d.rot_rational = {turn(1, 3)};
    return d;
}

Decomposition hyperbolic() {
    Decomposition d;
    d.i1 = 3;
    d.h_plus = 1;
    return d;
}

Decomposition shear() {
    Decomposition d;
    d.i1 = 1;
    d.p_minus = 1;
    return d;
}

std::vector<Decomposition> random_pool(unsigned seed, int count, int max_dim) {
    std::mt19937_64 rng(seed);
    std::vector<Decomposition> out;
    for (int k = 0; k < count; ++k)
        out.push_back(oracle::random_decomposition(rng, 1 + static_cast<int>(rng() % max_dim)));
    return out;
}

}  // namespace

TEST_CASE("index examples") {
    CHECK(index(third(), 4) == 3);
    for (long m = 1; m <= 20; ++m) {
        CHECK(index(hyperbolic(), m) == 3 * m);
        CHECK(index(shear(), m) == 2 * m - 1);
        CHECK(nullity(shear(), m) == 1);
    }
    CHECK(nullity(third(), 3) == 2);
    CHECK(nullity(third(), 2) == 0);
}

TEST_CASE("average index examples") {
    CHECK(average_index(third()) == ExactScalar(make_rational(2, 3)));
    CHECK(average_index(hyperbolic()) == ExactScalar(3));
    CHECK(average_index(shear()) == ExactScalar(2));
}

TEST_CASE("bott examples") {
    CHECK(bott_check(third(), 50).ok());
    CHECK(bott_check(hyperbolic(), 50).ok());
    Decomposition mixed;
    mixed.i1 = 2;
    mixed.p_minus = 1;
    mixed.rot_rational = {turn(1, 4)};
    mixed.h_minus = 1;
    CHECK(bott_check(mixed, 100).ok());
}

TEST_CASE("oracle examples") {
    CHECK(realize_and_nullity_oracle(third(), 3) == 2);
    CHECK(realize_and_nullity_oracle(shear(), 5) == 1);
    CHECK(realize_and_nullity_oracle(hyperbolic(), 7) == 0);
    Decomposition bad;
    bad.i1 = 1;
    bad.rot_rational = {turn(1, 7)};
    CHECK_THROWS_AS(realize_and_nullity_oracle(bad, 3), std::domain_error);
}

TEST_CASE("profile invariants") {
    for (const auto& d : random_pool(21, 300, 6)) {
        IterationProfile p(d);
        CHECK(p.index_at(1) == d.i1);
        CHECK(p.nullity_at(1) == d.p_minus + 2 * d.p_zero + d.p_plus);
        CHECK(p.avg_index() == average_index(d));
        for (long m = 1; m <= 60; ++m) {
            const Int nu = p.nullity_at(m);
            CHECK(nu >= 0);
            CHECK(nu <= 2 * d.dimension());
            CHECK(p.top_at(m) == p.index_at(m) + nu);
        }
    }
}

TEST_CASE("profile is safe under concurrent queries") {
    auto d = random_pool(22, 1, 6).front();
    IterationProfile p(d);
    std::vector<std::thread> workers;
    std::vector<int> mismatches(4, 0);
    for (int w = 0; w < 4; ++w)
        workers.emplace_back([&, w] {
            for (long m = 1; m <= 400; ++m)
                if (p.index_at(m) != index(d, m) || p.nullity_at(m) != nullity(d, m)) ++mismatches[w];
        });
    for (auto& t : workers) t.join();
    for (int k : mismatches) CHECK(k == 0);
}

TEST_CASE("index and nullity match the root-of-unity oracle") {
    for (const auto& d : random_pool(23, 250, 6))
        for (long m = 1; m <= 24; ++m) {
            CHECK(index(d, m) == oracle::index_by_roots(d, m));
            CHECK(nullity(d, m) == oracle::nullity_by_roots(d, m));
        }
}

TEST_CASE("nullity matches explicit matrices on small menus") {
    const std::vector<Rational> turns{Rational(1, 3), Rational(1, 4), Rational(1, 5), Rational(2, 5)};
    std::vector<oracle::Piece> menu;
    for (auto a : {oracle::Atom::p_minus, oracle::Atom::p_zero, oracle::Atom::p_plus, oracle::Atom::q_minus,
                   oracle::Atom::q_zero, oracle::Atom::q_plus, oracle::Atom::h_plus, oracle::Atom::h_minus})
        menu.push_back({a});
    for (const auto& t : turns)
        for (auto a : {oracle::Atom::rot, oracle::Atom::n2_nontrivial, oracle::Atom::n2_trivial}) menu.push_back({a, t});
    long compared = 0;
    for (const auto& pieces : oracle::multisets(menu, 2)) {
        auto d = oracle::assemble(pieces, 0);
        d.i1 = oracle::parity_i1(d, 2);
        auto seq = realize_and_nullity_sequence(d, 30);
        for (long m = 1; m <= 30; ++m) {
            CHECK(seq[m - 1] == nullity(d, m));
            ++compared;
        }
    }
    CHECK(compared > 0);
}

TEST_CASE("surd rotations are realized over their field") {
    Decomposition d;
    d.i1 = 2;
    d.rot_irrational = {{ExactScalar::surd(0, make_rational(1, 2), 2)}};
    d.rot_rational = {turn(1, 4)};
    for (long m = 1; m <= 16; ++m) CHECK(realize_and_nullity_oracle(d, m) == nullity(d, m));
}

TEST_CASE("average index is the linear rate") {
    for (const auto& d : random_pool(24, 300, 6)) {
        const ExactScalar avg = average_index(d);
        const ExactScalar bound(Int(4 * d.dimension()));
        for (long m = 1; m <= 100; ++m) {
            const ExactScalar gap = ExactScalar(index(d, m)) - ExactScalar(Int(m)) * avg;
            CHECK(gap <= bound);
            CHECK(-gap <= bound);
        }
    }
}

TEST_CASE("index parity is constant without -1 blocks or hyperbolic parts") {
    std::mt19937_64 rng(25);
    int tested = 0;
    while (tested < 200) {
        auto d = oracle::random_decomposition(rng, 1 + static_cast<int>(rng() % 6), false);
        if (d.q_minus + d.q_zero + d.q_plus > 0) continue;
        ++tested;
        const bool odd = mpz_odd_p(d.i1.get_mpz_t());
        for (long m = 1; m <= 60; ++m) CHECK(mpz_odd_p(index(d, m).get_mpz_t()) == odd);
    }
}

TEST_CASE("bott bounds and the monotonicity package") {
    for (const auto& d : random_pool(26, 400, 6)) {
        auto r = bott_check(d, 100);
        CHECK(r.ok());
        if (d.i1 < d.dimension()) continue;
        const int e = elliptic_height(d);
        for (long m = 1; m <= 100; ++m) {
            const Int step = index(d, m + 1) - index(d, m) - nullity(d, m);
            CHECK(2 * step >= 2 * d.i1 - e);
        }
    }
}
