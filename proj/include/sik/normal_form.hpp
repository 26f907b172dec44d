#pragma once

/**
 * @file normal_form.hpp
 * @brief Basic normal form decomposition of a linearized Poincare map and the
 * splitting-number sums built from it.
 *
 * Angles are stored as turns t = theta/(2 pi) in (0,1). A rotation R(theta)
 * contributes the eigenvalue pair exp(+-i theta) through a single entry.
 */

#include "sik/arith.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace sik {

struct Angle {
    ExactScalar turn;

    bool is_rational() const { return turn.is_rational(); }
    friend bool operator==(const Angle&, const Angle&) = default;
};

struct Decomposition {
    std::string name;
    Int i1{0};

    int p_minus = 0;  // N1(1,1)
    int p_zero = 0;   // I2
    int p_plus = 0;   // N1(1,-1)
    int q_minus = 0;  // N1(-1,1)
    int q_zero = 0;   // -I2
    int q_plus = 0;   // N1(-1,-1)

    std::vector<Angle> rot_rational;
    std::vector<Angle> rot_irrational;
    std::vector<Angle> n2_nontrivial_rational;
    std::vector<Angle> n2_nontrivial_irrational;
    std::vector<Angle> n2_trivial_rational;
    std::vector<Angle> n2_trivial_irrational;

    int h_plus = 0;   // D(2)
    int h_minus = 0;  // D(-2)

    /// Half the real dimension of the symplectic matrix, i.e. n-1 for a geodesic on S^n.
    int dimension() const;
    int rotation_count() const;
    int nontrivial_n2_count() const;
    int trivial_n2_count() const;
    int hyperbolic_count() const { return h_plus + h_minus; }

    friend bool operator==(const Decomposition&, const Decomposition&) = default;
};

/// Block-wise direct sum; the name and i1 of the left operand are kept, i1 values are added.
Decomposition direct_sum(const Decomposition& a, const Decomposition& b);

enum class Severity { error, warning };

struct Issue {
    Severity severity;
    std::string field;
    std::string message;
};

struct ValidationResult {
    std::vector<Issue> issues;

    bool ok() const;
    std::string summary() const;
};

class InvalidDecomposition : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Checks counts, angle ranges, list rationality, one quadratic field, the
/// dimension identity against n-1, and the parity of i1.
ValidationResult validate(const Decomposition& d, int n);

/// Throws InvalidDecomposition listing every error.
void require_valid(const Decomposition& d, int n);

/// Point on the unit circle, exp(2 pi i turn) with turn in [0,1).
struct UnitPoint {
    ExactScalar turn;

    static UnitPoint one() { return {ExactScalar(0)}; }
    static UnitPoint minus_one() { return {ExactScalar(Rational(1, 2))}; }
    static UnitPoint at(const ExactScalar& turn);
};

struct SplittingPair {
    int s_plus = 0;
    int s_minus = 0;

    SplittingPair& operator+=(const SplittingPair& o) {
        s_plus += o.s_plus;
        s_minus += o.s_minus;
        return *this;
    }
    friend bool operator==(const SplittingPair&, const SplittingPair&) = default;
};

SplittingPair splitting(const Decomposition& d, const UnitPoint& omega);

/// Distinct turns in (0,1) at which d has a unit-circle eigenvalue.
std::vector<ExactScalar> eigen_turns(const Decomposition& d);

/// Total multiplicity of unit-circle eigenvalues.
int elliptic_height(const Decomposition& d);

/// S+(1) in closed form.
int s_plus_one(const Decomposition& d);
/// Sum of S- over eigenvalues exp(i theta), 0 < theta < 2 pi, in closed form.
int big_c(const Decomposition& d);

/// Sum of S- over eigen-turns t with 2 m_k t and m t both integers.
int q_of_m(const Decomposition& d, const Int& m_k, const Int& m);
/// Closed form of q_of_m, valid whenever 2 m_k t is an integer for every rational eigen-turn t.
int q_closed_form(const Decomposition& d, const Int& m);
/// Sum of S- over eigen-turns t with 0 < frac(2 m_k t) < delta.
int delta_of(const Decomposition& d, const Int& m_k, const ExactScalar& delta);

}  // namespace sik
