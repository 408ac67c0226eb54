// SPDX-License-Identifier: MIT
#pragma once

#include "sasakilab/jet.hpp"

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sasakilab {

/// Immutable expression tree over chart coordinates.
///
/// Grammar (whitespace-insensitive):
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | power
///   power  := atom ('^' factor)?
///   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
/// so `^` binds tighter than unary minus and is right-associative. The only
/// named constant is `pi`; functions are sin cos tan exp log sqrt sinh cosh.
class CoordExpr {
public:
    enum class Kind { Number, Symbol, Constant, Neg, Add, Sub, Mul, Div, Pow, Call };
    enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh };

    struct Node {
        Kind kind = Kind::Number;
        double number = 0.0;  // Number, Constant
        int symbol = -1;      // Symbol: coordinate index
        Func func = Func::Sin;
        bool constant = true;  // subtree free of coordinates
        std::shared_ptr<const Node> lhs;
        std::shared_ptr<const Node> rhs;
    };

    CoordExpr();
    explicit CoordExpr(std::shared_ptr<const Node> root, int nvars);

    static CoordExpr number(double value, int nvars);

    const Node& root() const noexcept { return *root_; }
    int nvars() const noexcept { return nvars_; }
    bool is_constant() const noexcept { return root_->constant; }

    /// Text form that parses back to an equal tree (same chart names).
    std::string render(std::span<const std::string> names) const;

    double eval(std::span<const double> point) const;
    /// Value and all partials up to `order` (0..4), exact to rounding.
    Jet eval_jet(std::span<const double> point, int order) const;

    friend bool operator==(const CoordExpr& a, const CoordExpr& b);

private:
    std::shared_ptr<const Node> root_;
    int nvars_ = 0;
};

/// Parses `text` against the coordinate names of a chart. Throws ParseError
/// carrying the byte offset of the problem.
CoordExpr parse_expr(std::string_view text, std::span<const std::string> chart);

/// Free-function spelling of CoordExpr::eval_jet.
inline Jet eval_jet(const CoordExpr& expr, std::span<const double> point, int order) {
    return expr.eval_jet(point, order);
}

/// Shortest decimal text that reads back to exactly `value`.
std::string format_number(double value);

}  // namespace sasakilab
