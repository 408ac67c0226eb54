// SPDX-License-Identifier: MIT
#include "sasakilab/expr.hpp"

#include "sasakilab/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace sasakilab {

namespace {

using Node = CoordExpr::Node;
using NodePtr = std::shared_ptr<const Node>;
using Kind = CoordExpr::Kind;
using Func = CoordExpr::Func;

struct FuncName {
    std::string_view name;
    Func func;
};

constexpr std::array<FuncName, 8> kFunctions{{{"sin", Func::Sin},
                                              {"cos", Func::Cos},
                                              {"tan", Func::Tan},
                                              {"exp", Func::Exp},
                                              {"log", Func::Log},
                                              {"sqrt", Func::Sqrt},
                                              {"sinh", Func::Sinh},
                                              {"cosh", Func::Cosh}}};

std::string_view func_name(Func f) {
    for (const auto& e : kFunctions)
        if (e.func == f) return e.name;
    return "?";
}

NodePtr make_binary(Kind kind, NodePtr lhs, NodePtr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->constant = lhs->constant && rhs->constant;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
}

class Parser {
public:
    Parser(std::string_view text, std::span<const std::string> chart) : text_(text), chart_(chart) {}

    NodePtr parse() {
        auto e = expr();
        skip_ws();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
        throw ParseError("syntax error at offset " + std::to_string(at) + ": " + msg, at);
    }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }

    NodePtr expr() {
        auto lhs = term();
        while (true) {
            if (peek('+')) {
                ++pos_;
                lhs = make_binary(Kind::Add, lhs, term());
            } else if (peek('-')) {
                ++pos_;
                lhs = make_binary(Kind::Sub, lhs, term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr term() {
        auto lhs = factor();
        while (true) {
            if (peek('*')) {
                ++pos_;
                lhs = make_binary(Kind::Mul, lhs, factor());
            } else if (peek('/')) {
                ++pos_;
                lhs = make_binary(Kind::Div, lhs, factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr factor() {
        if (peek('-')) {
            ++pos_;
            auto operand = factor();
            auto n = std::make_shared<Node>();
            n->kind = Kind::Neg;
            n->constant = operand->constant;
            n->lhs = std::move(operand);
            return n;
        }
        auto base = atom();
        if (peek('^')) {
            ++pos_;
            return make_binary(Kind::Pow, base, factor());
        }
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            auto e = expr();
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0) fail_at("malformed number", start);
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) fail("malformed exponent");
        }
        double value = 0.0;
        const auto res = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (res.ec != std::errc()) fail_at("number out of range", start);
        auto n = std::make_shared<Node>();
        n->kind = Kind::Number;
        n->number = value;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        const bool call = peek('(');
        for (const auto& f : kFunctions) {
            if (f.name != name) continue;
            if (!call) fail_at("function '" + name + "' expects one argument", start);
            ++pos_;
            auto arg = expr();
            if (peek(',')) fail("arity mismatch: '" + name + "' takes one argument");
            if (!peek(')')) fail("expected ')'");
            ++pos_;
            auto n = std::make_shared<Node>();
            n->kind = Kind::Call;
            n->func = f.func;
            n->constant = arg->constant;
            n->lhs = std::move(arg);
            return n;
        }
        if (call) fail_at("arity mismatch: '" + name + "' is not a function", start);
        if (name == "pi") {
            auto n = std::make_shared<Node>();
            n->kind = Kind::Constant;
            n->number = std::numbers::pi;
            return n;
        }
        for (std::size_t i = 0; i < chart_.size(); ++i) {
            if (chart_[i] != name) continue;
            auto n = std::make_shared<Node>();
            n->kind = Kind::Symbol;
            n->symbol = static_cast<int>(i);
            n->constant = false;
            return n;
        }
        fail_at("unknown identifier '" + name + "'", start);
    }

    std::string_view text_;
    std::span<const std::string> chart_;
    std::size_t pos_ = 0;
};

int precedence(const Node& n) {
    switch (n.kind) {
        case Kind::Add:
        case Kind::Sub: return 1;
        case Kind::Mul:
        case Kind::Div: return 2;
        case Kind::Neg: return 3;
        case Kind::Pow: return 4;
        default: return 5;
    }
}

void render_node(const Node& n, std::span<const std::string> names, std::string& out);

void render_child(const Node& child, int min_prec, std::span<const std::string> names, std::string& out) {
    if (precedence(child) < min_prec) {
        out += '(';
        render_node(child, names, out);
        out += ')';
    } else {
        render_node(child, names, out);
    }
}

void render_node(const Node& n, std::span<const std::string> names, std::string& out) {
    switch (n.kind) {
        case Kind::Number: out += format_number(n.number); return;
        case Kind::Constant: out += "pi"; return;
        case Kind::Symbol: out += names[static_cast<std::size_t>(n.symbol)]; return;
        case Kind::Neg:
            out += '-';
            render_child(*n.lhs, 3, names, out);
            return;
        case Kind::Call:
            out += func_name(n.func);
            out += '(';
            render_node(*n.lhs, names, out);
            out += ')';
            return;
        case Kind::Pow:
            render_child(*n.lhs, 5, names, out);
            out += '^';
            render_child(*n.rhs, 3, names, out);
            return;
        default: break;
    }
    const int p = precedence(n);
    const char op = n.kind == Kind::Add ? '+' : n.kind == Kind::Sub ? '-' : n.kind == Kind::Mul ? '*' : '/';
    render_child(*n.lhs, p, names, out);
    out += ' ';
    out += op;
    out += ' ';
    render_child(*n.rhs, p + 1, names, out);
}

bool equal_nodes(const Node& a, const Node& b) {
    if (a.kind != b.kind) return false;
    switch (a.kind) {
        case Kind::Number:
        case Kind::Constant: return a.number == b.number;
        case Kind::Symbol: return a.symbol == b.symbol;
        case Kind::Neg: return equal_nodes(*a.lhs, *b.lhs);
        case Kind::Call: return a.func == b.func && equal_nodes(*a.lhs, *b.lhs);
        default: return equal_nodes(*a.lhs, *b.lhs) && equal_nodes(*a.rhs, *b.rhs);
    }
}

double eval_const(const Node& n) {
    switch (n.kind) {
        case Kind::Number:
        case Kind::Constant: return n.number;
        case Kind::Neg: return -eval_const(*n.lhs);
        case Kind::Add: return eval_const(*n.lhs) + eval_const(*n.rhs);
        case Kind::Sub: return eval_const(*n.lhs) - eval_const(*n.rhs);
        case Kind::Mul: return eval_const(*n.lhs) * eval_const(*n.rhs);
        case Kind::Div: return eval_const(*n.lhs) / eval_const(*n.rhs);
        case Kind::Pow: return std::pow(eval_const(*n.lhs), eval_const(*n.rhs));
        case Kind::Call: break;
        case Kind::Symbol: break;
    }
    return std::nan("");
}

Jet apply(Func f, const Jet& x) {
    switch (f) {
        case Func::Sin: return sin(x);
        case Func::Cos: return cos(x);
        case Func::Tan: return tan(x);
        case Func::Exp: return exp(x);
        case Func::Log: return log(x);
        case Func::Sqrt: return sqrt(x);
        case Func::Sinh: return sinh(x);
        case Func::Cosh: return cosh(x);
    }
    return x;
}

struct JetEvaluator {
    std::span<const double> point;
    int nvars;
    int order;

    Jet checked(Jet j) const {
        if (!j.all_finite()) throw DomainError("non-finite intermediate value");
        return j;
    }

    Jet eval(const Node& n) const {
        switch (n.kind) {
            case Kind::Number:
            case Kind::Constant: return Jet(nvars, order, n.number);
            case Kind::Symbol:
                return Jet::variable(nvars, order, n.symbol, point[static_cast<std::size_t>(n.symbol)]);
            case Kind::Neg: return -eval(*n.lhs);
            case Kind::Add: return checked(eval(*n.lhs) + eval(*n.rhs));
            case Kind::Sub: return checked(eval(*n.lhs) - eval(*n.rhs));
            case Kind::Mul: return checked(eval(*n.lhs) * eval(*n.rhs));
            case Kind::Div: return checked(eval(*n.lhs) / eval(*n.rhs));
            case Kind::Call: return checked(apply(n.func, eval(*n.lhs)));
            case Kind::Pow: return power(n);
        }
        return Jet(nvars, order);
    }

    Jet power(const Node& n) const {
        Jet base = eval(*n.lhs);
        if (n.rhs->constant) {
            const double p = eval_const(*n.rhs);
            if (!std::isfinite(p)) throw DomainError("non-finite exponent");
            return checked(pow(base, p));
        }
        if (!(base.value() > 0.0)) throw DomainError("variable exponent requires a positive base");
        return checked(exp(eval(*n.rhs) * log(base)));
    }
};

}  // namespace

std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

CoordExpr::CoordExpr() : CoordExpr(number(0.0, 0)) {}

CoordExpr::CoordExpr(std::shared_ptr<const Node> root, int nvars) : root_(std::move(root)), nvars_(nvars) {}

CoordExpr CoordExpr::number(double value, int nvars) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Number;
    n->number = value;
    return CoordExpr(std::move(n), nvars);
}

std::string CoordExpr::render(std::span<const std::string> names) const {
    std::string out;
    render_node(*root_, names, out);
    return out;
}

double CoordExpr::eval(std::span<const double> point) const { return eval_jet(point, 0).value(); }

Jet CoordExpr::eval_jet(std::span<const double> point, int order) const {
    if (static_cast<int>(point.size()) != nvars_)
        throw PreconditionError("expression evaluated at a point of wrong dimension");
    if (order < 0 || order > kMaxJetOrder) throw PreconditionError("jet order must be in 0..4");
    JetEvaluator ev{point, nvars_, order};
    Jet j = ev.eval(*root_);
    if (!j.all_finite()) throw DomainError("non-finite value");
    return j;
}

bool operator==(const CoordExpr& a, const CoordExpr& b) {
    return a.nvars_ == b.nvars_ && equal_nodes(*a.root_, *b.root_);
}

CoordExpr parse_expr(std::string_view text, std::span<const std::string> chart) {
    Parser p(text, chart);
    return CoordExpr(p.parse(), static_cast<int>(chart.size()));
}

}  // namespace sasakilab
