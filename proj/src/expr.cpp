#include "levy2b/expr.hpp"

#include <array>
#include <cassert>
#include <charconv>
#include <cmath>
#include <cstdlib>

namespace levy2b {

namespace {

struct FunctionInfo {
    std::string_view name;
    Expr::Op op;
    int arity;
};

constexpr std::array<FunctionInfo, 7> kFunctions = {{
    {"exp", Expr::Op::Exp, 1},
    {"abs", Expr::Op::Abs, 1},
    {"sin", Expr::Op::Sin, 1},
    {"cos", Expr::Op::Cos, 1},
    {"sqrt", Expr::Op::Sqrt, 1},
    {"max", Expr::Op::Max, 2},
    {"min", Expr::Op::Min, 2},
}};

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    Expr run() {
        ExprBuilder b;
        std::int32_t root = parse_expression(b);
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError(pos_, "unexpected token '" + std::string(1, src_[pos_]) + "'");
        return b.finish(root);
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' ||
                                      src_[pos_] == '\n' || src_[pos_] == '\r'))
            ++pos_;
    }

    bool eat(char c) {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    std::int32_t parse_expression(ExprBuilder& b) {
        std::int32_t lhs = parse_term(b);
        for (;;) {
            if (eat('+'))
                lhs = b.binary(Expr::Op::Add, lhs, parse_term(b));
            else if (eat('-'))
                lhs = b.binary(Expr::Op::Sub, lhs, parse_term(b));
            else
                return lhs;
        }
    }

    std::int32_t parse_term(ExprBuilder& b) {
        std::int32_t lhs = parse_unary(b);
        for (;;) {
            if (eat('*'))
                lhs = b.binary(Expr::Op::Mul, lhs, parse_unary(b));
            else if (eat('/'))
                lhs = b.binary(Expr::Op::Div, lhs, parse_unary(b));
            else
                return lhs;
        }
    }

    std::int32_t parse_unary(ExprBuilder& b) {
        if (eat('-')) {
            std::int32_t child = parse_unary(b);
            return b.unary(Expr::Op::Neg, child);
        }
        return parse_power(b);
    }

    std::int32_t parse_power(ExprBuilder& b) {
        std::int32_t base = parse_primary(b);
        if (eat('^')) {
            // right-associative; the exponent may carry a unary minus
            std::int32_t exponent = parse_unary(b);
            return b.binary(Expr::Op::Pow, base, exponent);
        }
        return base;
    }

    std::int32_t parse_primary(ExprBuilder& b) {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input");
        char c = src_[pos_];
        if (c == '(') {
            std::size_t open = pos_;
            ++pos_;
            std::int32_t inner = parse_expression(b);
            if (!eat(')')) throw ParseError(open, "unbalanced parenthesis");
            return inner;
        }
        if ((c >= '0' && c <= '9') || c == '.') return parse_number(b);
        if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')
            return parse_identifier(b);
        throw ParseError(pos_, std::string("unexpected token '") + c + "'");
    }

    std::int32_t parse_number(ExprBuilder& b) {
        std::size_t start = pos_;
        double value = 0.0;
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        auto [ptr, ec] = std::from_chars(first, last, value);
        if (ec != std::errc{}) throw ParseError(start, "malformed number");
        pos_ += static_cast<std::size_t>(ptr - first);
        return b.constant(value);
    }

    std::int32_t parse_identifier(ExprBuilder& b) {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               ((src_[pos_] >= 'a' && src_[pos_] <= 'z') ||
                (src_[pos_] >= 'A' && src_[pos_] <= 'Z') ||
                (src_[pos_] >= '0' && src_[pos_] <= '9') || src_[pos_] == '_'))
            ++pos_;
        std::string_view name = src_.substr(start, pos_ - start);
        if (name == "t") return b.var_t();
        if (name == "x") return b.var_x();
        for (const auto& fn : kFunctions) {
            if (name != fn.name) continue;
            if (!eat('('))
                throw ParseError(pos_, "expected '(' after '" + std::string(name) + "'");
            std::int32_t a0 = parse_expression(b);
            if (fn.arity == 1) {
                if (!eat(')')) throw ParseError(pos_, "expected ')'");
                return b.unary(fn.op, a0);
            }
            if (!eat(',')) throw ParseError(pos_, "expected ','");
            std::int32_t a1 = parse_expression(b);
            if (!eat(')')) throw ParseError(pos_, "expected ')'");
            return b.binary(fn.op, a0, a1);
        }
        throw ParseError(start, "unknown identifier '" + std::string(name) + "'");
    }
};

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw DomainError(what);
    return v;
}

int precedence(Expr::Op op) {
    switch (op) {
        case Expr::Op::Add:
        case Expr::Op::Sub: return 1;
        case Expr::Op::Mul:
        case Expr::Op::Div: return 2;
        case Expr::Op::Neg: return 3;
        case Expr::Op::Pow: return 4;
        default: return 5;  // atoms and call syntax
    }
}

void format_double(std::string& out, double v) {
    std::array<char, 32> buf;
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    assert(ec == std::errc{});
    out.append(buf.data(), ptr);
}

}  // namespace

std::int32_t ExprBuilder::constant(double v) {
    nodes_.push_back({Expr::Op::Constant, v, -1, -1});
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExprBuilder::var_t() {
    nodes_.push_back({Expr::Op::VarT, 0.0, -1, -1});
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExprBuilder::var_x() {
    nodes_.push_back({Expr::Op::VarX, 0.0, -1, -1});
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExprBuilder::unary(Expr::Op op, std::int32_t child) {
    // fold a literal negation so "-3" round-trips as a constant
    if (op == Expr::Op::Neg && nodes_[static_cast<std::size_t>(child)].op == Expr::Op::Constant) {
        nodes_[static_cast<std::size_t>(child)].value =
            -nodes_[static_cast<std::size_t>(child)].value;
        return child;
    }
    nodes_.push_back({op, 0.0, child, -1});
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

std::int32_t ExprBuilder::binary(Expr::Op op, std::int32_t lhs, std::int32_t rhs) {
    nodes_.push_back({op, 0.0, lhs, rhs});
    return static_cast<std::int32_t>(nodes_.size() - 1);
}

Expr ExprBuilder::finish(std::int32_t root) {
    Expr e;
    e.nodes_ = std::move(nodes_);
    e.root_ = root;
    return e;
}

Expr Expr::parse(std::string_view source) { return Parser(source).run(); }

Expr Expr::constant(double v) {
    ExprBuilder b;
    return b.finish(b.constant(v));
}

namespace {

double eval_node(const std::vector<Expr::Node>& nodes, std::int32_t idx, double t, double x) {
    const Expr::Node& n = nodes[static_cast<std::size_t>(idx)];
    switch (n.op) {
        case Expr::Op::Constant: return n.value;
        case Expr::Op::VarT: return t;
        case Expr::Op::VarX: return x;
        case Expr::Op::Neg: return -eval_node(nodes, n.lhs, t, x);
        case Expr::Op::Exp:
            return finite_or_throw(std::exp(eval_node(nodes, n.lhs, t, x)), "exp overflow");
        case Expr::Op::Abs: return std::abs(eval_node(nodes, n.lhs, t, x));
        case Expr::Op::Sin: return std::sin(eval_node(nodes, n.lhs, t, x));
        case Expr::Op::Cos: return std::cos(eval_node(nodes, n.lhs, t, x));
        case Expr::Op::Sqrt: {
            double a = eval_node(nodes, n.lhs, t, x);
            if (a < 0.0) throw DomainError("sqrt of negative value");
            return std::sqrt(a);
        }
        case Expr::Op::Add:
            return finite_or_throw(
                eval_node(nodes, n.lhs, t, x) + eval_node(nodes, n.rhs, t, x), "overflow in +");
        case Expr::Op::Sub:
            return finite_or_throw(
                eval_node(nodes, n.lhs, t, x) - eval_node(nodes, n.rhs, t, x), "overflow in -");
        case Expr::Op::Mul:
            return finite_or_throw(
                eval_node(nodes, n.lhs, t, x) * eval_node(nodes, n.rhs, t, x), "overflow in *");
        case Expr::Op::Div: {
            double den = eval_node(nodes, n.rhs, t, x);
            if (den == 0.0) throw DomainError("division by zero");
            return finite_or_throw(eval_node(nodes, n.lhs, t, x) / den, "overflow in /");
        }
        case Expr::Op::Pow: {
            double base = eval_node(nodes, n.lhs, t, x);
            double exponent = eval_node(nodes, n.rhs, t, x);
            if (base < 0.0 && exponent != std::nearbyint(exponent))
                throw DomainError("non-integer power of negative base");
            return finite_or_throw(std::pow(base, exponent), "overflow or domain error in ^");
        }
        case Expr::Op::Max:
            return std::max(eval_node(nodes, n.lhs, t, x), eval_node(nodes, n.rhs, t, x));
        case Expr::Op::Min:
            return std::min(eval_node(nodes, n.lhs, t, x), eval_node(nodes, n.rhs, t, x));
    }
    throw SpecError("corrupt expression node");
}

void print_node(const std::vector<Expr::Node>& nodes, std::int32_t idx, std::string& out) {
    const Expr::Node& n = nodes[static_cast<std::size_t>(idx)];
    auto child = [&](std::int32_t c, bool parens) {
        if (parens) out.push_back('(');
        print_node(nodes, c, out);
        if (parens) out.push_back(')');
    };
    int prec = precedence(n.op);
    switch (n.op) {
        case Expr::Op::Constant: format_double(out, n.value); return;
        case Expr::Op::VarT: out.push_back('t'); return;
        case Expr::Op::VarX: out.push_back('x'); return;
        case Expr::Op::Neg:
            out.push_back('-');
            child(n.lhs, precedence(nodes[static_cast<std::size_t>(n.lhs)].op) < prec);
            return;
        case Expr::Op::Exp:
        case Expr::Op::Abs:
        case Expr::Op::Sin:
        case Expr::Op::Cos:
        case Expr::Op::Sqrt: {
            const char* name = n.op == Expr::Op::Exp   ? "exp"
                               : n.op == Expr::Op::Abs ? "abs"
                               : n.op == Expr::Op::Sin ? "sin"
                               : n.op == Expr::Op::Cos ? "cos"
                                                       : "sqrt";
            out += name;
            out.push_back('(');
            print_node(nodes, n.lhs, out);
            out.push_back(')');
            return;
        }
        case Expr::Op::Max:
        case Expr::Op::Min:
            out += (n.op == Expr::Op::Max) ? "max(" : "min(";
            print_node(nodes, n.lhs, out);
            out += ", ";
            print_node(nodes, n.rhs, out);
            out.push_back(')');
            return;
        case Expr::Op::Add:
        case Expr::Op::Sub:
        case Expr::Op::Mul:
        case Expr::Op::Div:
        case Expr::Op::Pow: {
            int lp = precedence(nodes[static_cast<std::size_t>(n.lhs)].op);
            int rp = precedence(nodes[static_cast<std::size_t>(n.rhs)].op);
            bool left_parens, right_parens;
            if (n.op == Expr::Op::Pow) {
                // right-associative
                left_parens = lp <= prec;
                right_parens = rp < prec;
            } else {
                left_parens = lp < prec;
                right_parens = rp < prec || (rp == prec && (n.op == Expr::Op::Sub ||
                                                            n.op == Expr::Op::Div));
            }
            // a negative constant literal on the right of +,-,*,/ needs parens
            // ("x - -3" would reparse as sub(x, neg(3)))
            const Expr::Node& rn = nodes[static_cast<std::size_t>(n.rhs)];
            if (rn.op == Expr::Op::Constant && std::signbit(rn.value)) right_parens = true;
            child(n.lhs, left_parens);
            switch (n.op) {
                case Expr::Op::Add: out += " + "; break;
                case Expr::Op::Sub: out += " - "; break;
                case Expr::Op::Mul: out += "*"; break;
                case Expr::Op::Div: out += "/"; break;
                default: out += "^"; break;
            }
            child(n.rhs, right_parens);
            return;
        }
    }
}

bool nodes_equal(const std::vector<Expr::Node>& a, std::int32_t ia,
                 const std::vector<Expr::Node>& b, std::int32_t ib) {
    const Expr::Node& na = a[static_cast<std::size_t>(ia)];
    const Expr::Node& nb = b[static_cast<std::size_t>(ib)];
    if (na.op != nb.op) return false;
    if (na.op == Expr::Op::Constant)
        return na.value == nb.value || (std::isnan(na.value) && std::isnan(nb.value));
    if (na.lhs >= 0 && !nodes_equal(a, na.lhs, b, nb.lhs)) return false;
    if (na.rhs >= 0 && !nodes_equal(a, na.rhs, b, nb.rhs)) return false;
    return (na.lhs >= 0) == (nb.lhs >= 0) && (na.rhs >= 0) == (nb.rhs >= 0);
}

}  // namespace

double Expr::eval(double t, double x) const {
    if (root_ < 0) throw SpecError("empty expression");
    return eval_node(nodes_, root_, t, x);
}

std::string Expr::to_string() const {
    std::string out;
    if (root_ >= 0) print_node(nodes_, root_, out);
    return out;
}

bool Expr::structurally_equal(const Expr& other) const {
    if ((root_ < 0) != (other.root_ < 0)) return false;
    if (root_ < 0) return true;
    return nodes_equal(nodes_, root_, other.nodes_, other.root_);
}

double Expr::max_abs_constant() const {
    double m = 0.0;
    for (const Node& n : nodes_)
        if (n.op == Op::Constant) m = std::max(m, std::abs(n.value));
    return m;
}

}  // namespace levy2b
