#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ergolab/errors.hpp"

namespace ergolab {

// Closed-form real functions of the single variable "x". Trees are immutable
// after construction; every operation below is pure and re-entrant.

enum class NodeKind {
    Constant,
    Variable,
    Neg,
    Abs,
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
    Tanh,
    Sign,
    Add,
    Sub,
    Mul,
    Div,
    Pow,  // base in lhs, constant exponent in value
};

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    NodeKind kind;
    double value = 0.0;  // Constant payload, or Pow exponent
    NodePtr lhs;
    NodePtr rhs;
};

class Expression {
public:
    Expression() : Expression(constant(0.0)) {}
    explicit Expression(NodePtr root) : root_(std::move(root)) {}

    static Expression constant(double c);
    static Expression variable();

    const ExprNode& root() const { return *root_; }
    const NodePtr& root_ptr() const { return root_; }

    // True when the tree is a single Constant node.
    bool is_constant(double* out = nullptr) const;

    std::string str() const;

private:
    NodePtr root_;
};

// Recursive-descent parser for
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := ("-")? power
//   power  := atom ("^" factor)?
//   atom   := number | "x" | ident "(" expr ")" | "(" expr ")"
// The exponent of "^" must fold to a constant. Throws ParseError.
Expression parse(std::string_view source);

// Precedence-aware printer; parse(to_string(e)) is structurally equal to e
// for any parsed e.
std::string to_string(const Expression& e);

bool structurally_equal(const Expression& a, const Expression& b);

// IEEE double evaluation. Out-of-domain input raises DomainError naming the
// offending subexpression; NaN never propagates silently.
double evaluate(const Expression& e, double x);

// Symbolic derivative with constant folding and 0/1 elimination.
// abs differentiates to sign (valid away from zeros of the argument) and
// sign differentiates to 0 (valid away from its kink).
Expression differentiate(const Expression& e);

// Node constructors with light simplification; used by differentiate and by
// callers assembling weights such as |phi'| and sign(phi').
namespace build {
NodePtr constant(double c);
NodePtr variable();
NodePtr unary(NodeKind kind, NodePtr u);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr pow(NodePtr base, double exponent);
}  // namespace build

namespace num {
// Exact integer with magnitude below 2^53.
bool is_integer(double v) noexcept;
// Square-and-multiply integer power; the same multiplication order is used
// for truncated-series powers so scalar and jet evaluation agree bit-exactly.
double pow_int(double base, long long e);
}  // namespace num

// Polynomial recognition: nodes restricted to constants, x, +, -, *,
// negation and nonnegative integer powers. On success writes the
// coefficients c0 + c1 x + ... into *coeffs when non-null.
bool is_polynomial(const Expression& e, std::vector<double>* coeffs = nullptr);

// Expression c0 + c1*x + ... + cn*x^n from coefficients.
Expression polynomial_expression(const std::vector<double>& coeffs);

// Exact primitive of a polynomial (constant of integration 0).
// Throws PreconditionError when e is not a polynomial.
Expression polynomial_antiderivative(const Expression& e);

}  // namespace ergolab
