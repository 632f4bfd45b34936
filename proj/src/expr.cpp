#include "ergolab/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <utility>

namespace ergolab {

namespace num {

bool is_integer(double v) noexcept {
    return std::isfinite(v) && v == std::nearbyint(v) && std::fabs(v) < 9.007199254740992e15;
}

double pow_int(double base, long long e) {
    if (e == 0) return 1.0;
    bool invert = e < 0;
    unsigned long long k = invert ? static_cast<unsigned long long>(-(e + 1)) + 1ULL
                                  : static_cast<unsigned long long>(e);
    double acc = 1.0;
    double sq = base;
    while (k) {
        if (k & 1ULL) acc *= sq;
        k >>= 1;
        if (k) sq *= sq;
    }
    return invert ? 1.0 / acc : acc;
}

}  // namespace num

namespace {

std::string format_double(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

NodePtr make_node(NodeKind kind, double value, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
    return std::make_shared<const ExprNode>(ExprNode{kind, value, std::move(lhs), std::move(rhs)});
}

int precedence(NodeKind k) {
    switch (k) {
        case NodeKind::Add:
        case NodeKind::Sub:
            return 1;
        case NodeKind::Mul:
        case NodeKind::Div:
            return 2;
        case NodeKind::Neg:
            return 3;
        case NodeKind::Pow:
            return 4;
        default:
            return 5;  // constants, the variable, function calls
    }
}

const char* function_name(NodeKind k) {
    switch (k) {
        case NodeKind::Abs: return "abs";
        case NodeKind::Sqrt: return "sqrt";
        case NodeKind::Exp: return "exp";
        case NodeKind::Log: return "log";
        case NodeKind::Sin: return "sin";
        case NodeKind::Cos: return "cos";
        case NodeKind::Tanh: return "tanh";
        case NodeKind::Sign: return "sign";
        default: return nullptr;
    }
}

void print_node(const NodePtr& n, std::string& out);

void print_child(const NodePtr& child, int min_prec, std::string& out) {
    bool parens = precedence(child->kind) < min_prec;
    if (parens) out += '(';
    print_node(child, out);
    if (parens) out += ')';
}

void print_node(const NodePtr& n, std::string& out) {
    switch (n->kind) {
        case NodeKind::Constant:
            out += format_double(n->value);
            return;
        case NodeKind::Variable:
            out += 'x';
            return;
        case NodeKind::Neg:
            out += '-';
            print_child(n->lhs, 4, out);  // operand must parse as a power
            return;
        case NodeKind::Add:
            print_child(n->lhs, 1, out);
            out += '+';
            print_child(n->rhs, 2, out);
            return;
        case NodeKind::Sub:
            print_child(n->lhs, 1, out);
            out += '-';
            print_child(n->rhs, 2, out);
            return;
        case NodeKind::Mul:
            print_child(n->lhs, 2, out);
            out += '*';
            print_child(n->rhs, 3, out);
            return;
        case NodeKind::Div:
            print_child(n->lhs, 2, out);
            out += '/';
            print_child(n->rhs, 3, out);
            return;
        case NodeKind::Pow:
            print_child(n->lhs, 5, out);  // base must be an atom
            out += '^';
            out += format_double(n->value);
            return;
        default: {
            out += function_name(n->kind);
            out += '(';
            print_node(n->lhs, out);
            out += ')';
            return;
        }
    }
}

// Parser ----------------------------------------------------------------

struct Parser {
    std::string_view src;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    char peek() {
        skip_ws();
        return pos < src.size() ? src[pos] : '\0';
    }
    bool consume(char c) {
        if (peek() == c) {
            ++pos;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) {
        skip_ws();
        throw ParseError(msg, pos);
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (consume('+')) {
                lhs = make_node(NodeKind::Add, 0.0, std::move(lhs), parse_term());
            } else if (consume('-')) {
                lhs = make_node(NodeKind::Sub, 0.0, std::move(lhs), parse_term());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_factor();
        for (;;) {
            if (consume('*')) {
                lhs = make_node(NodeKind::Mul, 0.0, std::move(lhs), parse_factor());
            } else if (consume('/')) {
                lhs = make_node(NodeKind::Div, 0.0, std::move(lhs), parse_factor());
            } else {
                return lhs;
            }
        }
    }

    NodePtr parse_factor() {
        if (consume('-')) return make_node(NodeKind::Neg, 0.0, parse_power());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_atom();
        if (!consume('^')) return base;
        skip_ws();
        std::size_t exp_pos = pos;
        NodePtr exponent = parse_factor();
        double folded;
        if (!fold_constant(exponent, &folded) || !std::isfinite(folded))
            throw ParseError("exponent must be a constant", exp_pos);
        return make_node(NodeKind::Pow, folded, std::move(base));
    }

    NodePtr parse_atom() {
        char c = peek();
        if (c == '(') {
            ++pos;
            NodePtr inner = parse_expr();
            if (!consume(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
        if (c == '\0') fail("unexpected end of input");
        fail(std::string("unexpected character '") + c + "'");
    }

    NodePtr parse_number() {
        std::size_t start = pos;
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        if (pos < src.size() && src[pos] == '.') {
            ++pos;
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        }
        if (pos == start || (pos == start + 1 && src[start] == '.'))
            throw ParseError("malformed number", start);
        if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
            std::size_t mark = pos;
            ++pos;
            if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
            if (pos >= src.size() || !std::isdigit(static_cast<unsigned char>(src[pos]))) {
                pos = mark;  // "2e" is "2" followed by an identifier; reject below
                throw ParseError("malformed exponent", mark);
            }
            while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
        }
        double value = 0.0;
        auto res = std::from_chars(src.data() + start, src.data() + pos, value);
        if (res.ec != std::errc{}) throw ParseError("malformed number", start);
        return make_node(NodeKind::Constant, value);
    }

    NodePtr parse_ident() {
        std::size_t start = pos;
        while (pos < src.size() && std::isalpha(static_cast<unsigned char>(src[pos]))) ++pos;
        std::string_view ident = src.substr(start, pos - start);
        if (ident == "x") return make_node(NodeKind::Variable, 0.0);
        NodeKind kind;
        if (ident == "abs") kind = NodeKind::Abs;
        else if (ident == "sqrt") kind = NodeKind::Sqrt;
        else if (ident == "exp") kind = NodeKind::Exp;
        else if (ident == "log") kind = NodeKind::Log;
        else if (ident == "sin") kind = NodeKind::Sin;
        else if (ident == "cos") kind = NodeKind::Cos;
        else if (ident == "tanh") kind = NodeKind::Tanh;
        else if (ident == "sign") kind = NodeKind::Sign;
        else throw ParseError("unknown identifier '" + std::string(ident) + "'", start);
        if (!consume('(')) fail("expected '(' after function name");
        NodePtr arg = parse_expr();
        if (!consume(')')) fail("expected ')'");
        return make_node(kind, 0.0, std::move(arg));
    }

    // Constant-folds a tree containing no variable; used for exponents.
    static bool fold_constant(const NodePtr& n, double* out) {
        switch (n->kind) {
            case NodeKind::Constant:
                *out = n->value;
                return true;
            case NodeKind::Variable:
                return false;
            case NodeKind::Neg: {
                double v;
                if (!fold_constant(n->lhs, &v)) return false;
                *out = -v;
                return true;
            }
            case NodeKind::Add:
            case NodeKind::Sub:
            case NodeKind::Mul:
            case NodeKind::Div: {
                double a, b;
                if (!fold_constant(n->lhs, &a) || !fold_constant(n->rhs, &b)) return false;
                switch (n->kind) {
                    case NodeKind::Add: *out = a + b; break;
                    case NodeKind::Sub: *out = a - b; break;
                    case NodeKind::Mul: *out = a * b; break;
                    default:
                        if (b == 0.0) return false;
                        *out = a / b;
                        break;
                }
                return true;
            }
            case NodeKind::Pow: {
                double a;
                if (!fold_constant(n->lhs, &a)) return false;
                if (num::is_integer(n->value)) {
                    *out = num::pow_int(a, static_cast<long long>(n->value));
                    return true;
                }
                if (a < 0.0) return false;
                *out = std::pow(a, n->value);
                return true;
            }
            default: {  // function call on a constant argument
                double v;
                if (!fold_constant(n->lhs, &v)) return false;
                switch (n->kind) {
                    case NodeKind::Abs: *out = std::fabs(v); return true;
                    case NodeKind::Sqrt:
                        if (v < 0.0) return false;
                        *out = std::sqrt(v);
                        return true;
                    case NodeKind::Exp: *out = std::exp(v); return true;
                    case NodeKind::Log:
                        if (v <= 0.0) return false;
                        *out = std::log(v);
                        return true;
                    case NodeKind::Sin: *out = std::sin(v); return true;
                    case NodeKind::Cos: *out = std::cos(v); return true;
                    case NodeKind::Tanh: *out = std::tanh(v); return true;
                    case NodeKind::Sign: *out = (v > 0.0) - (v < 0.0); return true;
                    default: return false;
                }
            }
        }
    }
};

double eval_node(const ExprNode& n, double x);

[[noreturn]] void domain_fail(const std::string& what, const ExprNode& n) {
    std::string text;
    print_node(std::make_shared<const ExprNode>(n), text);
    throw DomainError(what, text);
}

double eval_checked(const ExprNode& n, double a, double b, double r) {
    if (std::isnan(r) && !std::isnan(a) && !std::isnan(b)) domain_fail("non-finite result", n);
    return r;
}

double eval_node(const ExprNode& n, double x) {
    switch (n.kind) {
        case NodeKind::Constant: return n.value;
        case NodeKind::Variable: return x;
        case NodeKind::Neg: return -eval_node(*n.lhs, x);
        case NodeKind::Abs: return std::fabs(eval_node(*n.lhs, x));
        case NodeKind::Sqrt: {
            double v = eval_node(*n.lhs, x);
            if (v < 0.0) domain_fail("sqrt of negative value", n);
            return std::sqrt(v);
        }
        case NodeKind::Exp: return std::exp(eval_node(*n.lhs, x));
        case NodeKind::Log: {
            double v = eval_node(*n.lhs, x);
            if (v <= 0.0) domain_fail("log of nonpositive value", n);
            return std::log(v);
        }
        case NodeKind::Sin: return std::sin(eval_node(*n.lhs, x));
        case NodeKind::Cos: return std::cos(eval_node(*n.lhs, x));
        case NodeKind::Tanh: return std::tanh(eval_node(*n.lhs, x));
        case NodeKind::Sign: {
            double v = eval_node(*n.lhs, x);
            return static_cast<double>((v > 0.0) - (v < 0.0));
        }
        case NodeKind::Add: {
            double a = eval_node(*n.lhs, x), b = eval_node(*n.rhs, x);
            return eval_checked(n, a, b, a + b);
        }
        case NodeKind::Sub: {
            double a = eval_node(*n.lhs, x), b = eval_node(*n.rhs, x);
            return eval_checked(n, a, b, a - b);
        }
        case NodeKind::Mul: {
            double a = eval_node(*n.lhs, x), b = eval_node(*n.rhs, x);
            return eval_checked(n, a, b, a * b);
        }
        case NodeKind::Div: {
            double a = eval_node(*n.lhs, x), b = eval_node(*n.rhs, x);
            if (b == 0.0) domain_fail("division by zero", n);
            return eval_checked(n, a, b, a / b);
        }
        case NodeKind::Pow: {
            double base = eval_node(*n.lhs, x);
            double e = n.value;
            if (num::is_integer(e)) {
                if (base == 0.0 && e < 0.0) domain_fail("zero base with negative exponent", n);
                return num::pow_int(base, static_cast<long long>(e));
            }
            if (base < 0.0) domain_fail("negative base with non-integer exponent", n);
            if (base == 0.0 && e < 0.0) domain_fail("zero base with negative exponent", n);
            return std::pow(base, e);
        }
    }
    domain_fail("unreachable node kind", n);
}

}  // namespace

Expression Expression::constant(double c) { return Expression(make_node(NodeKind::Constant, c)); }

Expression Expression::variable() { return Expression(make_node(NodeKind::Variable, 0.0)); }

bool Expression::is_constant(double* out) const {
    if (root_->kind != NodeKind::Constant) return false;
    if (out) *out = root_->value;
    return true;
}

std::string Expression::str() const { return to_string(*this); }

Expression parse(std::string_view source) {
    Parser p{source};
    NodePtr root = p.parse_expr();
    p.skip_ws();
    if (p.pos != source.size()) p.fail("unexpected trailing input");
    return Expression(std::move(root));
}

std::string to_string(const Expression& e) {
    std::string out;
    print_node(e.root_ptr(), out);
    return out;
}

bool structurally_equal(const Expression& a, const Expression& b) {
    struct Cmp {
        static bool eq(const NodePtr& x, const NodePtr& y) {
            if (!x || !y) return x == y;
            if (x->kind != y->kind) return false;
            if (x->kind == NodeKind::Constant || x->kind == NodeKind::Pow) {
                // Bitwise so that 0.0 and -0.0 stay distinguishable.
                if (!(x->value == y->value && std::signbit(x->value) == std::signbit(y->value)))
                    return false;
            }
            return eq(x->lhs, y->lhs) && eq(x->rhs, y->rhs);
        }
    };
    return Cmp::eq(a.root_ptr(), b.root_ptr());
}

double evaluate(const Expression& e, double x) { return eval_node(e.root(), x); }

// Smart constructors ------------------------------------------------------

namespace build {

namespace {
bool const_value(const NodePtr& n, double* v) {
    if (n->kind != NodeKind::Constant) return false;
    *v = n->value;
    return true;
}
}  // namespace

NodePtr constant(double c) { return make_node(NodeKind::Constant, c == 0.0 ? 0.0 : c); }

NodePtr variable() { return make_node(NodeKind::Variable, 0.0); }

NodePtr unary(NodeKind kind, NodePtr u) {
    double v;
    if (kind == NodeKind::Neg) {
        if (const_value(u, &v)) return constant(-v);
        if (u->kind == NodeKind::Neg) return u->lhs;
        return make_node(kind, 0.0, std::move(u));
    }
    if (const_value(u, &v)) {
        double folded;
        NodePtr asnode = make_node(kind, 0.0, u);
        if (Parser::fold_constant(asnode, &folded)) return constant(folded);
        return asnode;
    }
    return make_node(kind, 0.0, std::move(u));
}

NodePtr add(NodePtr a, NodePtr b) {
    double va, vb;
    bool ca = const_value(a, &va), cb = const_value(b, &vb);
    if (ca && cb) return constant(va + vb);
    if (ca && va == 0.0) return b;
    if (cb && vb == 0.0) return a;
    if (cb && vb < 0.0) return make_node(NodeKind::Sub, 0.0, std::move(a), constant(-vb));
    return make_node(NodeKind::Add, 0.0, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
    double va, vb;
    bool ca = const_value(a, &va), cb = const_value(b, &vb);
    if (ca && cb) return constant(va - vb);
    if (cb && vb == 0.0) return a;
    if (ca && va == 0.0) return unary(NodeKind::Neg, std::move(b));
    if (cb && vb < 0.0) return make_node(NodeKind::Add, 0.0, std::move(a), constant(-vb));
    return make_node(NodeKind::Sub, 0.0, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
    double va, vb;
    bool ca = const_value(a, &va), cb = const_value(b, &vb);
    if (ca && cb) return constant(va * vb);
    if ((ca && va == 0.0) || (cb && vb == 0.0)) return constant(0.0);
    if (ca && va == 1.0) return b;
    if (cb && vb == 1.0) return a;
    return make_node(NodeKind::Mul, 0.0, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
    double va, vb;
    bool ca = const_value(a, &va), cb = const_value(b, &vb);
    if (ca && va == 0.0) return constant(0.0);
    if (cb && vb == 1.0) return a;
    if (ca && cb && vb != 0.0) return constant(va / vb);
    return make_node(NodeKind::Div, 0.0, std::move(a), std::move(b));
}

NodePtr pow(NodePtr base, double exponent) {
    if (exponent == 0.0) return constant(1.0);
    if (exponent == 1.0) return base;
    double vb;
    if (const_value(base, &vb)) {
        if (num::is_integer(exponent))
            return constant(num::pow_int(vb, static_cast<long long>(exponent)));
        if (vb > 0.0) return constant(std::pow(vb, exponent));
    }
    return make_node(NodeKind::Pow, exponent, std::move(base));
}

}  // namespace build

namespace {

NodePtr diff_node(const NodePtr& n) {
    using namespace build;
    switch (n->kind) {
        case NodeKind::Constant: return constant(0.0);
        case NodeKind::Variable: return constant(1.0);
        case NodeKind::Neg: return unary(NodeKind::Neg, diff_node(n->lhs));
        case NodeKind::Abs: return mul(unary(NodeKind::Sign, n->lhs), diff_node(n->lhs));
        case NodeKind::Sign: return constant(0.0);
        case NodeKind::Sqrt:
            return div(diff_node(n->lhs), mul(constant(2.0), unary(NodeKind::Sqrt, n->lhs)));
        case NodeKind::Exp: return mul(unary(NodeKind::Exp, n->lhs), diff_node(n->lhs));
        case NodeKind::Log: return div(diff_node(n->lhs), n->lhs);
        case NodeKind::Sin: return mul(unary(NodeKind::Cos, n->lhs), diff_node(n->lhs));
        case NodeKind::Cos:
            return unary(NodeKind::Neg, mul(unary(NodeKind::Sin, n->lhs), diff_node(n->lhs)));
        case NodeKind::Tanh:
            return mul(sub(constant(1.0), pow(unary(NodeKind::Tanh, n->lhs), 2.0)),
                       diff_node(n->lhs));
        case NodeKind::Add: return add(diff_node(n->lhs), diff_node(n->rhs));
        case NodeKind::Sub: return sub(diff_node(n->lhs), diff_node(n->rhs));
        case NodeKind::Mul:
            return add(mul(diff_node(n->lhs), n->rhs), mul(n->lhs, diff_node(n->rhs)));
        case NodeKind::Div:
            return div(sub(mul(diff_node(n->lhs), n->rhs), mul(n->lhs, diff_node(n->rhs))),
                       pow(n->rhs, 2.0));
        case NodeKind::Pow:
            return mul(mul(constant(n->value), pow(n->lhs, n->value - 1.0)), diff_node(n->lhs));
    }
    return build::constant(0.0);
}

}  // namespace

Expression differentiate(const Expression& e) { return Expression(diff_node(e.root_ptr())); }

// Polynomials --------------------------------------------------------------

namespace {

constexpr std::size_t kMaxPolyDegree = 64;

bool poly_rec(const NodePtr& n, std::vector<double>& c) {
    switch (n->kind) {
        case NodeKind::Constant:
            c = {n->value};
            return true;
        case NodeKind::Variable:
            c = {0.0, 1.0};
            return true;
        case NodeKind::Neg: {
            if (!poly_rec(n->lhs, c)) return false;
            for (double& v : c) v = -v;
            return true;
        }
        case NodeKind::Add:
        case NodeKind::Sub: {
            std::vector<double> a, b;
            if (!poly_rec(n->lhs, a) || !poly_rec(n->rhs, b)) return false;
            c.assign(std::max(a.size(), b.size()), 0.0);
            for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
            double sgn = (n->kind == NodeKind::Add) ? 1.0 : -1.0;
            for (std::size_t i = 0; i < b.size(); ++i) c[i] += sgn * b[i];
            return true;
        }
        case NodeKind::Mul: {
            std::vector<double> a, b;
            if (!poly_rec(n->lhs, a) || !poly_rec(n->rhs, b)) return false;
            if (a.size() + b.size() > kMaxPolyDegree + 2) return false;
            c.assign(a.size() + b.size() - 1, 0.0);
            for (std::size_t i = 0; i < a.size(); ++i)
                for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
            return true;
        }
        case NodeKind::Pow: {
            if (!num::is_integer(n->value) || n->value < 0.0 || n->value > kMaxPolyDegree)
                return false;
            std::vector<double> base;
            if (!poly_rec(n->lhs, base)) return false;
            auto e = static_cast<std::size_t>(n->value);
            c = {1.0};
            for (std::size_t k = 0; k < e; ++k) {
                if (c.size() + base.size() > kMaxPolyDegree + 2) return false;
                std::vector<double> next(c.size() + base.size() - 1, 0.0);
                for (std::size_t i = 0; i < c.size(); ++i)
                    for (std::size_t j = 0; j < base.size(); ++j) next[i + j] += c[i] * base[j];
                c = std::move(next);
            }
            return true;
        }
        default:
            return false;
    }
}

void trim(std::vector<double>& c) {
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
}

}  // namespace

bool is_polynomial(const Expression& e, std::vector<double>* coeffs) {
    std::vector<double> c;
    if (!poly_rec(e.root_ptr(), c)) return false;
    trim(c);
    if (coeffs) *coeffs = std::move(c);
    return true;
}

Expression polynomial_expression(const std::vector<double>& coeffs) {
    using namespace build;
    NodePtr acc = constant(coeffs.empty() ? 0.0 : coeffs[0]);
    for (std::size_t k = 1; k < coeffs.size(); ++k) {
        if (coeffs[k] == 0.0) continue;
        acc = add(std::move(acc), mul(constant(coeffs[k]), pow(variable(), static_cast<double>(k))));
    }
    return Expression(std::move(acc));
}

Expression polynomial_antiderivative(const Expression& e) {
    std::vector<double> c;
    if (!is_polynomial(e, &c)) throw PreconditionError("expression is not a polynomial");
    std::vector<double> primitive(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) primitive[k + 1] = c[k] / static_cast<double>(k + 1);
    return polynomial_expression(primitive);
}

}  // namespace ergolab
