#pragma once

#include <complex>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "appdo/frequency.hpp"
#include "appdo/rational.hpp"

namespace appdo {

using Complex = std::complex<double>;

namespace expr {

enum class Op {
    Rational,     // exact rational constant
    Real,         // floating constant (decimal literal or numeric offset)
    Pi,
    ImagUnit,
    Var,          // xi_k
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Pow,          // base ^ exponent, exponent rational
    Sin,
    Cos,
    Exp,
    Atan,
    JBracket,     // (1 + f^2)^(1/2) of a scalar argument
    JBracketVec,  // (1 + |xi|^2)^(1/2) of the whole variable vector
    Conj,
    Shift,        // f(xi + sum of offsets)
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    Op op;
    appdo::Rational exact;          // Rational value or Pow exponent
    double real = 0.0;              // Real constant value
    std::size_t var = 0;            // Var index
    std::vector<NodePtr> kids;
    std::vector<RealVector> offsets;  // Shift: canonical sorted list
};

}  // namespace expr

/// Closed-form coefficient function of xi in R^d.
///
/// An immutable expression tree with complex evaluation, symbolic
/// differentiation in each xi_k, argument shifts, and conjugation. Smart
/// constructors keep trees in a light normal form: exact rationals fold,
/// zeros and ones are eliminated, conj(conj f) = f, and nested shifts merge
/// with exact cancellation of opposite offsets. Two functions built through
/// the same algebraic route therefore compare equal structurally.
class CoeffFn {
public:
    /// The zero function in dimension 1.
    CoeffFn();
    CoeffFn(expr::NodePtr root, std::size_t dim);

    static CoeffFn parse(std::string_view text, std::size_t dim);
    static CoeffFn constant(Complex c, std::size_t dim);
    static CoeffFn constant(const Rational& q, std::size_t dim);
    static CoeffFn variable(std::size_t k, std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    const expr::NodePtr& root() const noexcept { return root_; }

    /// Throws PoleError at a division pole or when the value is not finite.
    Complex operator()(std::span<const double> xi) const;
    Complex operator()(double xi) const { return (*this)(std::span<const double>(&xi, 1)); }

    CoeffFn derivative(std::size_t k) const;
    /// Mixed partial derivative with multi-index `alpha`.
    CoeffFn derivative(std::span<const int> alpha) const;
    /// xi -> f(xi + offset).
    CoeffFn shifted(const RealVector& offset) const;
    CoeffFn conj() const;

    bool is_zero() const noexcept;
    /// True when no variable occurs in the tree.
    bool is_constant() const noexcept;
    /// Number of nodes; used to guard derivative growth.
    std::size_t size() const noexcept;

    /// Canonical text in the coefficient grammar; shifts are printed by
    /// substituting (xi + c) for the variable.
    std::string str() const;

    friend CoeffFn operator+(const CoeffFn& a, const CoeffFn& b);
    friend CoeffFn operator-(const CoeffFn& a, const CoeffFn& b);
    friend CoeffFn operator*(const CoeffFn& a, const CoeffFn& b);
    friend CoeffFn operator/(const CoeffFn& a, const CoeffFn& b);
    CoeffFn operator-() const;
    CoeffFn pow(const Rational& p) const;

    /// Structural equality of normalized trees.
    friend bool operator==(const CoeffFn& a, const CoeffFn& b);

private:
    expr::NodePtr root_;
    std::size_t dim_ = 1;
};

}  // namespace appdo
