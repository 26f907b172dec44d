#include "sik/arith.hpp"

#include <doctest.h>

#include <random>

#ifdef SIK_HAVE_MPFR
#include <mpfr.h>
#endif

using namespace sik;

namespace {

ExactScalar q(long p, long r) { return ExactScalar(make_rational(p, r)); }

ExactScalar random_scalar(std::mt19937_64& rng, const Int& d) {
    auto rat = [&] {
        long den = 1 + static_cast<long>(rng() % 40);
        long num = static_cast<long>(rng() % 401) - 200;
        return make_rational(num, den);
    };
    Rational b = rat();
    if (b == 0) b = 1;
    return ExactScalar::surd(rat(), b, d);
}

}  // namespace

TEST_CASE("rational floors and integer parts") {
    CHECK(floor(q(5, 3)) == 1);
    CHECK(floor(q(-1, 3)) == -1);
    CHECK(ceil(q(2, 3)) == 1);
    CHECK(varphi(q(2, 3)) == 1);
    CHECK(varphi(ExactScalar(1)) == 0);
    CHECK(frac(q(7, 3)) == q(1, 3));
    CHECK(floor(ExactScalar(-4)) == -4);
    CHECK(ceil(ExactScalar(-4)) == -4);
}

TEST_CASE("surd floors") {
    const auto r2 = ExactScalar::surd(0, 1, 2);
    CHECK(floor(r2) == 1);
    CHECK(ceil(r2) == 2);
    CHECK(floor(-r2) == -2);
    CHECK(floor(ExactScalar::surd(make_rational(1, 2), make_rational(1, 4), 2)) == 0);
    CHECK(floor(ExactScalar::surd(-1, 1, 5)) == 1);
    CHECK(floor(ExactScalar(1000) * r2) == 1414);
    CHECK(floor(ExactScalar::surd(3, -2, 2)) == 0);  // 3 - 2 sqrt 2 = 0.17...
    CHECK(varphi(r2) == 1);
    CHECK_FALSE(is_integer(r2));
}

TEST_CASE("construction and canonical form") {
    CHECK_THROWS_AS(ExactScalar::surd(0, 1, 4), std::invalid_argument);
    CHECK_THROWS_AS(ExactScalar::surd(0, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(ExactScalar::surd(0, 1, 12), std::invalid_argument);
    CHECK_THROWS_AS(make_rational(1, 0), std::domain_error);
    auto z = ExactScalar::surd(make_rational(1, 3), 0, 7);
    CHECK(z.is_rational());
    CHECK(z.radicand() == 0);
    CHECK(z == q(1, 3));
    CHECK(make_rational(6, -4) == Rational(-3, 2));
    CHECK(make_rational(6, -4).get_den() == 2);
    CHECK(parse_rational(" -6/4 ") == Rational(-3, 2));
    CHECK(parse_rational("5") == 5);
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("surd field arithmetic") {
    const auto a = ExactScalar::surd(1, 1, 2);
    const auto b = ExactScalar::surd(1, -1, 2);
    CHECK(a * b == ExactScalar(-1));
    CHECK((a + b) == ExactScalar(2));
    CHECK(a / a == ExactScalar(1));
    CHECK((ExactScalar(1) / a) == ExactScalar::surd(-1, 1, 2));
    CHECK(a.conjugate() == b);
    CHECK_THROWS_AS(a + ExactScalar::surd(0, 1, 3), std::domain_error);
    CHECK_THROWS_AS(a.as_rational(), std::domain_error);
    CHECK(a > b);
    CHECK(b < ExactScalar(0));
    CHECK(a.str() == "1+1*sqrt(2)");
}

TEST_CASE("integer helpers") {
    CHECK(floor_div(Int(-7), Int(2)) == -4);
    CHECK(floor_div(Int(7), Int(-2)) == -4);
    CHECK(floor_div(Int(6), Int(3)) == 2);
    CHECK(isqrt(Int(99)) == 9);
    CHECK(isqrt(Int(100)) == 10);
    CHECK(is_square_free(Int(30)));
    CHECK_FALSE(is_square_free(Int(18)));
    CHECK(to_int64(Int(-5)) == -5);
    CHECK_THROWS_AS(to_int64(Int("100000000000000000000000")), std::overflow_error);
}

TEST_CASE("floor, frac and varphi properties over random scalars") {
    std::mt19937_64 rng(7);
    const Int fields[] = {2, 3, 5, 6, 7, 10, 101};
    for (int k = 0; k < 2000; ++k) {
        const auto x = random_scalar(rng, fields[k % 7]);
        const Int f = floor(x);
        CHECK(ExactScalar(f) <= x);
        CHECK(x < ExactScalar(Int(f + 1)));
        CHECK(ceil(x) == -floor(-x));
        const Int shift = static_cast<long>(rng() % 21) - 10;
        CHECK(frac(x + ExactScalar(shift)) == frac(x));
        CHECK(frac(x) >= ExactScalar(0));
        CHECK(frac(x) < ExactScalar(1));
        CHECK((varphi(x) == 0) == (frac(x) == ExactScalar(0)));
    }
    for (long p = -50; p <= 50; ++p)
        for (long r = 1; r <= 12; ++r) {
            const auto x = q(p, r);
            CHECK(ExactScalar(floor(x)) <= x);
            CHECK((varphi(x) == 0) == (p % r == 0));
        }
}

#ifdef SIK_HAVE_MPFR
TEST_CASE("surd comparison agrees with 200-digit evaluation") {
    const mpfr_prec_t bits = 700;  // > 200 decimal digits
    auto eval = [&](const ExactScalar& x, mpfr_t out) {
        mpfr_t s, t;
        mpfr_inits2(bits, s, t, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_q(out, x.rational_part().get_mpq_t(), MPFR_RNDN);
        if (!x.is_rational()) {
            mpfr_set_z(s, x.radicand().get_mpz_t(), MPFR_RNDN);
            mpfr_sqrt(s, s, MPFR_RNDN);
            mpfr_set_q(t, x.surd_coefficient().get_mpq_t(), MPFR_RNDN);
            mpfr_mul(s, s, t, MPFR_RNDN);
            mpfr_add(out, out, s, MPFR_RNDN);
        }
        mpfr_clears(s, t, static_cast<mpfr_ptr>(nullptr));
    };
    std::mt19937_64 rng(2024);
    const Int fields[] = {2, 3, 5, 7, 11};
    mpfr_t x, y;
    mpfr_inits2(bits, x, y, static_cast<mpfr_ptr>(nullptr));
    int checked = 0;
    for (int k = 0; k < 1000; ++k) {
        const Int d = fields[k % 5];
        const auto a = random_scalar(rng, d);
        // Every fourth pair is a near-tie.
        const auto b = (k % 4 == 0) ? a + ExactScalar(make_rational(1, 1000000007)) * ExactScalar(k % 8 == 0 ? 1 : -1)
                                    : random_scalar(rng, d);
        eval(a, x);
        eval(b, y);
        const int exact = (a < b) ? -1 : (a == b ? 0 : 1);
        const int approx = mpfr_cmp(x, y);
        CHECK(exact == (approx > 0) - (approx < 0));
        mpfr_floor(x, x);
        CHECK(Int(floor(a)) == Int(static_cast<long>(mpfr_get_si(x, MPFR_RNDN))));
        ++checked;
    }
    mpfr_clears(x, y, static_cast<mpfr_ptr>(nullptr));
    CHECK(checked == 1000);
}
#endif
