#include "sik/iteration.hpp"

#include <stdexcept>
#include <vector>

namespace sik {

namespace {

using Matrix = std::vector<std::vector<ExactScalar>>;

ExactScalar sqrt_of(long d) { return ExactScalar::surd(0, 1, d); }

// 2 cos(2 pi k / q) for the denominators whose cosines lie in a quadratic field.
ExactScalar twice_cos(const Rational& turn) {
    long q = turn.get_den().get_si();
    long k = turn.get_num().get_si();
    auto near = [&](long j) { return k == j || k == q - j; };
    const Rational half(1, 2);
    switch (q) {
        case 3: return ExactScalar(-1);
        case 4: return ExactScalar(0);
        case 6: return ExactScalar(1);
        case 5:
            if (near(1)) return ExactScalar::surd(-half, half, 5);
            return ExactScalar::surd(-half, -half, 5);
        case 8:
            return near(1) ? sqrt_of(2) : -sqrt_of(2);
        case 10:
            if (near(1)) return ExactScalar::surd(half, half, 5);
            return ExactScalar::surd(half, -half, 5);
        case 12:
            return near(1) ? sqrt_of(3) : -sqrt_of(3);
        default:
            throw std::domain_error("no quadratic realization for turn " + to_string(turn));
    }
}

// cos = 3/5 is not the cosine of a rational multiple of pi.
const Rational aperiodic_twice_cos(6, 5);

ExactScalar twice_cos_of(const Angle& a) {
    return a.is_rational() ? twice_cos(a.turn.as_rational()) : ExactScalar(aperiodic_twice_cos);
}

class Builder {
public:
    explicit Builder(int size) : m_(size, std::vector<ExactScalar>(size)) {}

    void block2(const ExactScalar& a, const ExactScalar& b, const ExactScalar& c, const ExactScalar& d) {
        m_[pos_][pos_] = a;
        m_[pos_][pos_ + 1] = b;
        m_[pos_ + 1][pos_] = c;
        m_[pos_ + 1][pos_ + 1] = d;
        pos_ += 2;
    }

    // [[C, s*(C - cI)], [0, C]] with C the companion matrix of x^2 - 2c x + 1.
    void n2(const ExactScalar& two_c, int s) {
        ExactScalar c = two_c / ExactScalar(2);
        ExactScalar C[2][2] = {{0, -1}, {1, two_c}};
        ExactScalar B[2][2] = {{-c, -1}, {1, two_c - c}};
        for (int r = 0; r < 2; ++r)
            for (int k = 0; k < 2; ++k) {
                m_[pos_ + r][pos_ + k] = C[r][k];
                m_[pos_ + 2 + r][pos_ + 2 + k] = C[r][k];
                m_[pos_ + r][pos_ + 2 + k] = ExactScalar(s) * B[r][k];
            }
        pos_ += 4;
    }

    Matrix take() { return std::move(m_); }

private:
    Matrix m_;
    int pos_ = 0;
};

Matrix realize(const Decomposition& d) {
    Builder b(2 * d.dimension());
    const ExactScalar one(1), zero(0), two(2), half(Rational(1, 2));
    for (int k = 0; k < d.p_minus; ++k) b.block2(one, one, zero, one);
    for (int k = 0; k < d.p_zero; ++k) b.block2(one, zero, zero, one);
    for (int k = 0; k < d.p_plus; ++k) b.block2(one, -one, zero, one);
    for (int k = 0; k < d.q_minus; ++k) b.block2(-one, one, zero, -one);
    for (int k = 0; k < d.q_zero; ++k) b.block2(-one, zero, zero, -one);
    for (int k = 0; k < d.q_plus; ++k) b.block2(-one, -one, zero, -one);
    for (const auto* list : {&d.rot_rational, &d.rot_irrational})
        for (const auto& a : *list) b.block2(zero, -one, one, twice_cos_of(a));
    for (const auto* list : {&d.n2_nontrivial_rational, &d.n2_nontrivial_irrational})
        for (const auto& a : *list) b.n2(twice_cos_of(a), 1);
    for (const auto* list : {&d.n2_trivial_rational, &d.n2_trivial_irrational})
        for (const auto& a : *list) b.n2(twice_cos_of(a), -1);
    for (int k = 0; k < d.h_plus; ++k) b.block2(two, zero, zero, half);
    for (int k = 0; k < d.h_minus; ++k) b.block2(-two, zero, zero, -half);
    return b.take();
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    const std::size_t n = a.size();
    Matrix c(n, std::vector<ExactScalar>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k].sign() == 0) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (b[k][j].sign() != 0) c[i][j] += a[i][k] * b[k][j];
        }
    return c;
}

std::size_t rank(Matrix m) {
    const std::size_t rows = m.size();
    const std::size_t cols = rows ? m[0].size() : 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t pivot = r;
        while (pivot < rows && m[pivot][c].sign() == 0) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            if (m[i][c].sign() == 0) continue;
            ExactScalar f = m[i][c] / m[r][c];
            for (std::size_t j = c; j < cols; ++j)
                if (m[r][j].sign() != 0) m[i][j] -= f * m[r][j];
        }
        ++r;
    }
    return r;
}

void require_single_field(const Matrix& m) {
    Int field = 0;
    for (const auto& row : m)
        for (const auto& x : row) {
            if (x.is_rational()) continue;
            if (field == 0) field = x.radicand();
            else if (field != x.radicand())
                throw std::domain_error("realization needs both sqrt(" + field.get_str() + ") and sqrt(" +
                                        x.radicand().get_str() + ")");
        }
}

Int kernel_dim_minus_identity(Matrix power) {
    for (std::size_t i = 0; i < power.size(); ++i) power[i][i] -= ExactScalar(1);
    const std::size_t n = power.size();
    return Int(static_cast<long>(n - rank(std::move(power))));
}

Matrix checked_realization(const Decomposition& d) {
    Matrix base = realize(d);
    require_single_field(base);
    return base;
}

}  // namespace

Int realize_and_nullity_oracle(const Decomposition& d, long m) {
    if (m < 1) throw std::invalid_argument("iterate must be >= 1");
    Matrix square = checked_realization(d);
    Matrix result;
    for (long e = m; e > 0; e >>= 1) {
        if (e & 1) result = result.empty() ? square : multiply(result, square);
        if (e > 1) square = multiply(square, square);
    }
    return kernel_dim_minus_identity(std::move(result));
}

std::vector<Int> realize_and_nullity_sequence(const Decomposition& d, long m_max) {
    if (m_max < 1) throw std::invalid_argument("m_max must be >= 1");
    const Matrix base = checked_realization(d);
    std::vector<Int> out;
    out.reserve(static_cast<std::size_t>(m_max));
    Matrix power = base;
    for (long k = 1; k <= m_max; ++k) {
        if (k > 1) power = multiply(power, base);
        out.push_back(kernel_dim_minus_identity(power));
    }
    return out;
}

}  // namespace sik
