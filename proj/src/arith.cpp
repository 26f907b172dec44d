#include "sik/arith.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace sik {

Rational make_rational(const Int& num, const Int& den) {
    if (sgn(den) == 0) throw std::domain_error("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Int parse_int(std::string_view s) {
    s = trim(s);
    std::string_view digits = s;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (digits.empty()) throw std::invalid_argument("empty integer literal");
    for (char c : digits)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw std::invalid_argument("malformed integer literal '" + std::string(s) + "'");
    std::string buf(s.front() == '+' ? s.substr(1) : s);
    return Int(buf, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
    auto s = trim(text);
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(s));
    Int den = parse_int(s.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator in '" + std::string(s) + "'");
    return make_rational(parse_int(s.substr(0, slash)), den);
}

std::string to_string(const Int& v) { return v.get_str(); }

std::string to_string(const Rational& v) {
    if (v.get_den() == 1) return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Int floor_div(const Int& a, const Int& b) {
    if (sgn(b) == 0) throw std::domain_error("division by zero");
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Int isqrt(const Int& v) {
    if (sgn(v) < 0) throw std::domain_error("isqrt of negative value");
    Int r;
    mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
    return r;
}

bool is_square_free(const Int& d) {
    if (d < 1) return false;
    Int rest = d;
    for (Int p = 2; p * p <= rest; ++p) {
        if (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
            rest /= p;
            if (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) return false;
        }
    }
    return true;
}

std::int64_t to_int64(const Int& v) {
    if (!mpz_fits_slong_p(v.get_mpz_t()) || sizeof(long) < sizeof(std::int64_t))
        throw std::overflow_error("integer " + v.get_str() + " exceeds machine range");
    return static_cast<std::int64_t>(v.get_si());
}

ExactScalar ExactScalar::surd(const Rational& a, const Rational& b, const Int& d) {
    if (d < 2 || !is_square_free(d))
        throw std::invalid_argument("surd radicand must be square-free and >= 2, got " + d.get_str());
    ExactScalar x;
    x.a_ = a;
    x.b_ = b;
    x.d_ = d;
    x.normalize();
    return x;
}

void ExactScalar::normalize() {
    if (sgn(b_) == 0) d_ = 0;
}

const Rational& ExactScalar::as_rational() const {
    if (!is_rational()) throw std::domain_error("value " + str() + " is not rational");
    return a_;
}

void ExactScalar::check_field(const ExactScalar& o) const {
    if (!is_rational() && !o.is_rational() && d_ != o.d_)
        throw std::domain_error("mixing quadratic fields sqrt(" + d_.get_str() + ") and sqrt(" +
                                o.d_.get_str() + ")");
}

int ExactScalar::sign() const {
    int sa = sgn(a_);
    int sb = sgn(b_);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // Opposite signs: the larger magnitude wins; a^2 == b^2 d is impossible for square-free d.
    Rational lhs = a_ * a_;
    Rational rhs = b_ * b_ * d_;
    return lhs > rhs ? sa : sb;
}

ExactScalar ExactScalar::conjugate() const {
    ExactScalar x = *this;
    x.b_ = -x.b_;
    return x;
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar x = *this;
    x.a_ = -x.a_;
    x.b_ = -x.b_;
    return x;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    check_field(o);
    if (is_rational()) d_ = o.d_;
    a_ += o.a_;
    b_ += o.b_;
    normalize();
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) { return *this += -o; }

ExactScalar& ExactScalar::operator*=(const ExactScalar& o) {
    check_field(o);
    Int d = is_rational() ? o.d_ : d_;
    Rational a = a_ * o.a_ + b_ * o.b_ * d;
    Rational b = a_ * o.b_ + b_ * o.a_;
    a_ = a;
    b_ = b;
    d_ = d;
    normalize();
    return *this;
}

ExactScalar& ExactScalar::operator/=(const ExactScalar& o) {
    check_field(o);
    if (o.sign() == 0) throw std::domain_error("division by zero");
    if (o.is_rational()) {
        a_ /= o.a_;
        b_ /= o.a_;
        normalize();
        return *this;
    }
    Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * o.d_;
    ExactScalar inv = o.conjugate();
    inv.a_ /= norm;
    inv.b_ /= norm;
    return *this *= inv;
}

bool operator==(const ExactScalar& x, const ExactScalar& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.d_ == y.d_;
}

std::strong_ordering operator<=>(const ExactScalar& x, const ExactScalar& y) {
    int s = (x - y).sign();
    if (s < 0) return std::strong_ordering::less;
    if (s > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

std::string ExactScalar::str() const {
    if (is_rational()) return to_string(a_);
    std::string out;
    if (sgn(a_) != 0) out = to_string(a_) + (sgn(b_) > 0 ? "+" : "");
    out += to_string(b_) + "*sqrt(" + d_.get_str() + ")";
    return out;
}

std::ostream& operator<<(std::ostream& os, const ExactScalar& x) { return os << x.str(); }

namespace {

Int floor_rational(const Rational& q) { return floor_div(q.get_num(), q.get_den()); }

}  // namespace

Int floor(const ExactScalar& x) {
    if (x.is_rational()) return floor_rational(x.rational_part());
    const Rational& b = x.surd_coefficient();
    // floor(b*sqrt(d)) from the integer square root of floor(b^2 d); the root is never an integer.
    Int root = isqrt(floor_rational(b * b * x.radicand()));
    Int k = floor_rational(x.rational_part()) + (sgn(b) > 0 ? root : Int(-root - 1));
    if ((x - ExactScalar(Int(k + 1))).sign() >= 0) ++k;
    return k;
}

Int ceil(const ExactScalar& x) { return -floor(-x); }

ExactScalar frac(const ExactScalar& x) { return x - ExactScalar(floor(x)); }

bool is_integer(const ExactScalar& x) {
    return x.is_rational() && x.rational_part().get_den() == 1;
}

int varphi(const ExactScalar& x) { return is_integer(x) ? 0 : 1; }

}  // namespace sik
