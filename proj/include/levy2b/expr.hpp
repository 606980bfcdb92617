#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "levy2b/errors.hpp"

namespace levy2b {

/// Immutable arithmetic expression in the variables t and x.
///
/// Grammar (precedence low to high): `+ -` < `* /` < unary `-` < `^`
/// (right-associative); two-argument functions max/min and one-argument
/// exp/abs/sin/cos/sqrt use call syntax. Expressions are parsed into a flat
/// node arena and are safe to share across threads after construction.
class Expr {
public:
    enum class Op : std::uint8_t {
        Constant,
        VarT,
        VarX,
        Neg,
        Exp,
        Abs,
        Sin,
        Cos,
        Sqrt,
        Add,
        Sub,
        Mul,
        Div,
        Pow,
        Max,
        Min,
    };

    struct Node {
        Op op;
        double value = 0.0;  // Constant payload
        std::int32_t lhs = -1;
        std::int32_t rhs = -1;

        bool operator==(const Node&) const = default;
    };

    /// Parses `source`; throws ParseError with a character offset on bad input.
    static Expr parse(std::string_view source);

    /// Constant expression (used for defaults).
    static Expr constant(double v);

    /// Evaluates at (t, x); throws DomainError if the result leaves the reals.
    double eval(double t, double x) const;

    /// Canonical form with minimal parentheses; reparsing yields an equal AST.
    std::string to_string() const;

    bool structurally_equal(const Expr& other) const;

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    std::int32_t root() const noexcept { return root_; }

    /// Largest absolute value of a Constant node; 0 if there is none.
    double max_abs_constant() const;

private:
    Expr() = default;

    std::vector<Node> nodes_;
    std::int32_t root_ = -1;

    friend class ExprBuilder;
};

/// Programmatic AST construction, mainly for tests and generated terminals.
class ExprBuilder {
public:
    std::int32_t constant(double v);
    std::int32_t var_t();
    std::int32_t var_x();
    std::int32_t unary(Expr::Op op, std::int32_t child);
    std::int32_t binary(Expr::Op op, std::int32_t lhs, std::int32_t rhs);
    Expr finish(std::int32_t root);

private:
    std::vector<Expr::Node> nodes_;
};

}  // namespace levy2b
