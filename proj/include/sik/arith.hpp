#pragma once

/**
 * @file arith.hpp
 * @brief Exact scalars: rationals and real quadratic surds a + b*sqrt(d).
 *
 * Every comparison and integer-part computation is decided with integer
 * arithmetic only. Values from different quadratic fields cannot be mixed.
 */

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

namespace sik {

using Int = mpz_class;
using Rational = mpq_class;

/// Builds num/den in lowest terms. Throws std::domain_error if den == 0.
Rational make_rational(const Int& num, const Int& den = 1);

/// Parses "p", "-p" or "p/q" (optional surrounding whitespace).
Rational parse_rational(std::string_view text);

std::string to_string(const Int& v);
std::string to_string(const Rational& v);

Int floor_div(const Int& a, const Int& b);
Int isqrt(const Int& v);
bool is_square_free(const Int& d);

/// Converts to a machine integer, throwing std::overflow_error when it does not fit.
std::int64_t to_int64(const Int& v);

/**
 * A rational number or a quadratic surd a + b*sqrt(d), d square-free >= 2.
 *
 * A value with b == 0 is always stored as a rational (d reported as 0), so
 * structural equality coincides with numeric equality.
 */
class ExactScalar {
public:
    ExactScalar() = default;
    ExactScalar(const Rational& q) : a_(q) {}          // NOLINT implicit
    ExactScalar(const Int& z) : a_(z) {}               // NOLINT implicit
    ExactScalar(long z) : a_(z) {}                     // NOLINT implicit
    ExactScalar(int z) : a_(z) {}                      // NOLINT implicit

    /// a + b*sqrt(d). Throws std::invalid_argument unless d is square-free and >= 2.
    static ExactScalar surd(const Rational& a, const Rational& b, const Int& d);

    bool is_rational() const { return sgn(b_) == 0; }
    const Rational& rational_part() const { return a_; }
    const Rational& surd_coefficient() const { return b_; }
    /// Radicand, or 0 for a rational.
    const Int& radicand() const { return d_; }

    /// The rational value; throws std::domain_error for a surd.
    const Rational& as_rational() const;

    int sign() const;
    ExactScalar conjugate() const;

    ExactScalar operator-() const;
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    ExactScalar& operator*=(const ExactScalar& o);
    ExactScalar& operator/=(const ExactScalar& o);

    friend ExactScalar operator+(ExactScalar x, const ExactScalar& y) { return x += y; }
    friend ExactScalar operator-(ExactScalar x, const ExactScalar& y) { return x -= y; }
    friend ExactScalar operator*(ExactScalar x, const ExactScalar& y) { return x *= y; }
    friend ExactScalar operator/(ExactScalar x, const ExactScalar& y) { return x /= y; }

    friend bool operator==(const ExactScalar& x, const ExactScalar& y);
    friend std::strong_ordering operator<=>(const ExactScalar& x, const ExactScalar& y);

    /// Human readable: "p/q" or "a+b*sqrt(d)".
    std::string str() const;

private:
    void check_field(const ExactScalar& o) const;
    void normalize();

    Rational a_{0};
    Rational b_{0};
    Int d_{0};
};

std::ostream& operator<<(std::ostream& os, const ExactScalar& x);

/// Greatest integer <= x.
Int floor(const ExactScalar& x);
/// Least integer >= x.
Int ceil(const ExactScalar& x);
/// x - floor(x), in [0, 1).
ExactScalar frac(const ExactScalar& x);
/// 0 when x is an integer, 1 otherwise.
int varphi(const ExactScalar& x);
bool is_integer(const ExactScalar& x);

}  // namespace sik
