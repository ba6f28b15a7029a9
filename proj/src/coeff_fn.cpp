#include "appdo/coeff_fn.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

#include "appdo/error.hpp"

namespace appdo {

using expr::Node;
using expr::NodePtr;
using expr::Op;

namespace {

NodePtr make_node(Node n) { return std::make_shared<const Node>(std::move(n)); }

NodePtr rational(const Rational& q) { return make_node(Node{Op::Rational, q, 0.0, 0, {}, {}}); }
NodePtr real(double v) {
    if (v == std::nearbyint(v) && std::abs(v) < 9.0e15) return rational(Rational(static_cast<std::int64_t>(v)));
    return make_node(Node{Op::Real, {}, v, 0, {}, {}});
}
NodePtr leaf(Op op) { return make_node(Node{op, {}, 0.0, 0, {}, {}}); }
NodePtr var(std::size_t k) { return make_node(Node{Op::Var, {}, 0.0, k, {}, {}}); }
NodePtr unary(Op op, NodePtr a) { return make_node(Node{op, {}, 0.0, 0, {std::move(a)}, {}}); }
NodePtr binary(Op op, NodePtr a, NodePtr b) { return make_node(Node{op, {}, 0.0, 0, {std::move(a), std::move(b)}, {}}); }

bool is_rational(const NodePtr& n) { return n->op == Op::Rational; }
bool is_zero(const NodePtr& n) {
    return (n->op == Op::Rational && n->exact.is_zero()) || (n->op == Op::Real && n->real == 0.0);
}
bool is_one(const NodePtr& n) {
    return (n->op == Op::Rational && n->exact == Rational(1)) || (n->op == Op::Real && n->real == 1.0);
}
bool is_negative_constant(const NodePtr& n) {
    return (n->op == Op::Rational && n->exact < Rational(0)) || (n->op == Op::Real && std::signbit(n->real));
}
bool has_variables(const NodePtr& n) {
    if (n->op == Op::Var || n->op == Op::JBracketVec) return true;
    return std::any_of(n->kids.begin(), n->kids.end(), has_variables);
}

NodePtr neg(const NodePtr& a) {
    if (a->op == Op::Rational) return rational(-a->exact);
    if (a->op == Op::Real) return real(-a->real);
    if (a->op == Op::Neg) return a->kids[0];
    return unary(Op::Neg, a);
}

NodePtr add(const NodePtr& a, const NodePtr& b) {
    if (is_zero(a)) return b;
    if (is_zero(b)) return a;
    if (is_rational(a) && is_rational(b)) return rational(a->exact + b->exact);
    return binary(Op::Add, a, b);
}

bool equal(const NodePtr& a, const NodePtr& b);

NodePtr sub(const NodePtr& a, const NodePtr& b) {
    if (equal(a, b)) return rational(0);
    if (is_zero(b)) return a;
    if (is_zero(a)) return neg(b);
    if (is_rational(a) && is_rational(b)) return rational(a->exact - b->exact);
    return binary(Op::Sub, a, b);
}

NodePtr mul(const NodePtr& a, const NodePtr& b) {
    if (is_zero(a) || is_zero(b)) return rational(0);
    if (is_one(a)) return b;
    if (is_one(b)) return a;
    if (is_rational(a) && is_rational(b)) return rational(a->exact * b->exact);
    // Negations are pulled outside products.
    if (a->op == Op::Neg) return neg(mul(a->kids[0], b));
    if (b->op == Op::Neg) return neg(mul(a, b->kids[0]));
    if (is_negative_constant(a)) return neg(mul(neg(a), b));
    if (is_negative_constant(b)) return neg(mul(a, neg(b)));
    return binary(Op::Mul, a, b);
}

NodePtr div(const NodePtr& a, const NodePtr& b) {
    if (is_zero(a) && !is_zero(b)) return rational(0);
    if (is_one(b)) return a;
    if (is_rational(a) && is_rational(b) && !b->exact.is_zero()) return rational(a->exact / b->exact);
    if (a->op == Op::Neg) return neg(div(a->kids[0], b));
    if (b->op == Op::Neg) return neg(div(a, b->kids[0]));
    if (is_negative_constant(a)) return neg(div(neg(a), b));
    if (is_negative_constant(b) && !is_zero(b)) return neg(div(a, neg(b)));
    return binary(Op::Div, a, b);
}

NodePtr pow(const NodePtr& base, const Rational& p) {
    if (p.is_zero()) return rational(1);
    if (p == Rational(1)) return base;
    if (is_rational(base) && p.is_integer() && (!base->exact.is_zero() || p > Rational(0)) &&
        std::abs(p.num()) <= 16) {
        try {
            Rational acc(1);
            for (std::int64_t i = 0; i < std::abs(p.num()); ++i) acc *= base->exact;
            return rational(p.num() < 0 ? Rational(1) / acc : acc);
        } catch (const Error&) {
            // overflow: keep the power unevaluated
        }
    }
    return make_node(Node{Op::Pow, p, 0.0, 0, {base}, {}});
}

NodePtr func(Op op, const NodePtr& a) { return unary(op, a); }

NodePtr conj(const NodePtr& a) {
    switch (a->op) {
        case Op::Conj: return a->kids[0];
        case Op::Rational:
        case Op::Real:
        case Op::Pi:
        case Op::Var:
        case Op::JBracketVec: return a;
        default: return unary(Op::Conj, a);
    }
}

bool offsets_cancel(const RealVector& a, const RealVector& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] + b[k] != 0.0) return false;
    }
    return true;
}

NodePtr shift(const NodePtr& a, std::vector<RealVector> offsets) {
    std::erase_if(offsets, [](const RealVector& v) { return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; }); });
    if (offsets.empty() || !has_variables(a)) return a;
    if (a->op == Op::Conj) return conj(shift(a->kids[0], std::move(offsets)));
    NodePtr inner = a;
    if (a->op == Op::Shift) {
        inner = a->kids[0];
        offsets.insert(offsets.begin(), a->offsets.begin(), a->offsets.end());
    }
    bool removed = true;
    while (removed) {
        removed = false;
        for (std::size_t i = 0; i < offsets.size() && !removed; ++i) {
            for (std::size_t j = i + 1; j < offsets.size() && !removed; ++j) {
                if (offsets_cancel(offsets[i], offsets[j])) {
                    offsets.erase(offsets.begin() + static_cast<std::ptrdiff_t>(j));
                    offsets.erase(offsets.begin() + static_cast<std::ptrdiff_t>(i));
                    removed = true;
                }
            }
        }
    }
    if (offsets.empty()) return inner;
    std::sort(offsets.begin(), offsets.end());
    return make_node(Node{Op::Shift, {}, 0.0, 0, {inner}, std::move(offsets)});
}

// ---------------------------------------------------------------- evaluation

Complex int_pow(Complex b, std::int64_t n) {
    const bool inv = n < 0;
    std::uint64_t e = static_cast<std::uint64_t>(inv ? -n : n);
    Complex r(1.0, 0.0);
    while (e) {
        if (e & 1U) r *= b;
        b *= b;
        e >>= 1U;
    }
    return inv ? Complex(1.0, 0.0) / r : r;
}

Complex eval(const Node& n, std::span<const double> xi) {
    switch (n.op) {
        case Op::Rational: return {n.exact.to_double(), 0.0};
        case Op::Real: return {n.real, 0.0};
        case Op::Pi: return {std::numbers::pi, 0.0};
        case Op::ImagUnit: return {0.0, 1.0};
        case Op::Var: return {xi[n.var], 0.0};
        case Op::Add: return eval(*n.kids[0], xi) + eval(*n.kids[1], xi);
        case Op::Sub: return eval(*n.kids[0], xi) - eval(*n.kids[1], xi);
        case Op::Mul: return eval(*n.kids[0], xi) * eval(*n.kids[1], xi);
        case Op::Div: {
            const Complex den = eval(*n.kids[1], xi);
            if (den == Complex(0.0, 0.0)) throw PoleError("division by zero in coefficient function");
            return eval(*n.kids[0], xi) / den;
        }
        case Op::Neg: return -eval(*n.kids[0], xi);
        case Op::Pow: {
            const Complex b = eval(*n.kids[0], xi);
            if (b == Complex(0.0, 0.0) && n.exact < Rational(0)) {
                throw PoleError("negative power of zero in coefficient function");
            }
            if (n.exact.is_integer()) return int_pow(b, n.exact.num());
            if (b.imag() == 0.0 && b.real() >= 0.0) return {std::pow(b.real(), n.exact.to_double()), 0.0};
            return std::pow(b, n.exact.to_double());
        }
        case Op::Sin: return std::sin(eval(*n.kids[0], xi));
        case Op::Cos: return std::cos(eval(*n.kids[0], xi));
        case Op::Exp: return std::exp(eval(*n.kids[0], xi));
        case Op::Atan: return std::atan(eval(*n.kids[0], xi));
        case Op::JBracket: {
            const Complex f = eval(*n.kids[0], xi);
            if (f.imag() == 0.0) return {std::sqrt(1.0 + f.real() * f.real()), 0.0};
            return std::sqrt(1.0 + f * f);
        }
        case Op::JBracketVec: {
            double s = 1.0;
            for (double v : xi) s += v * v;
            return {std::sqrt(s), 0.0};
        }
        case Op::Conj: return std::conj(eval(*n.kids[0], xi));
        case Op::Shift: {
            RealVector shifted(xi.begin(), xi.end());
            for (const auto& off : n.offsets) {
                for (std::size_t k = 0; k < shifted.size(); ++k) shifted[k] += off[k];
            }
            return eval(*n.kids[0], shifted);
        }
    }
    return {};
}

// ---------------------------------------------------------------- derivative

NodePtr derive(const NodePtr& n, std::size_t k) {
    switch (n->op) {
        case Op::Rational:
        case Op::Real:
        case Op::Pi:
        case Op::ImagUnit: return rational(0);
        case Op::Var: return rational(n->var == k ? 1 : 0);
        case Op::Add: return add(derive(n->kids[0], k), derive(n->kids[1], k));
        case Op::Sub: return sub(derive(n->kids[0], k), derive(n->kids[1], k));
        case Op::Neg: return neg(derive(n->kids[0], k));
        case Op::Mul: {
            const auto& a = n->kids[0];
            const auto& b = n->kids[1];
            return add(mul(derive(a, k), b), mul(a, derive(b, k)));
        }
        case Op::Div: {
            const auto& a = n->kids[0];
            const auto& b = n->kids[1];
            const NodePtr da = derive(a, k);
            const NodePtr db = derive(b, k);
            return sub(div(da, b), div(mul(a, db), pow(b, 2)));
        }
        case Op::Pow: {
            const auto& b = n->kids[0];
            const Rational p = n->exact;
            return mul(mul(rational(p), pow(b, p - Rational(1))), derive(b, k));
        }
        case Op::Sin: return mul(func(Op::Cos, n->kids[0]), derive(n->kids[0], k));
        case Op::Cos: return neg(mul(func(Op::Sin, n->kids[0]), derive(n->kids[0], k)));
        case Op::Exp: return mul(n, derive(n->kids[0], k));
        case Op::Atan: {
            const auto& f = n->kids[0];
            return div(derive(f, k), add(rational(1), pow(f, 2)));
        }
        case Op::JBracket: {
            const auto& f = n->kids[0];
            return div(mul(f, derive(f, k)), n);
        }
        case Op::JBracketVec: return div(var(k), n);
        case Op::Conj: return conj(derive(n->kids[0], k));
        case Op::Shift: return shift(derive(n->kids[0], k), n->offsets);
    }
    return rational(0);
}

// ---------------------------------------------------------------- printing

std::string format_real(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    std::string s(buf, res.ptr);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

int precedence(const Node& n) {
    switch (n.op) {
        case Op::Add:
        case Op::Sub:
        case Op::Neg: return 1;
        case Op::Rational: return n.exact < Rational(0) ? 1 : 4;
        case Op::Real: return std::signbit(n.real) ? 1 : 4;
        case Op::Mul:
        case Op::Div: return 2;
        case Op::Pow: return 3;
        default: return 4;
    }
}

// Replace shifted variables by explicit (xi + c) subtrees before printing.
NodePtr substitute_shifts(const NodePtr& n, const RealVector& total, bool active) {
    if (n->op == Op::Shift) {
        RealVector t = total;
        if (!active) t.assign(n->offsets.front().size(), 0.0);
        for (const auto& off : n->offsets) {
            for (std::size_t k = 0; k < t.size(); ++k) t[k] += off[k];
        }
        return substitute_shifts(n->kids[0], t, true);
    }
    if (!active) {
        if (n->kids.empty()) return n;
        Node copy = *n;
        for (auto& kid : copy.kids) kid = substitute_shifts(kid, total, false);
        return make_node(std::move(copy));
    }
    auto shifted_var = [&](std::size_t k) -> NodePtr {
        const double c = total[k];
        if (c == 0.0) return var(k);
        if (std::signbit(c)) return binary(Op::Sub, var(k), real(-c));
        return binary(Op::Add, var(k), real(c));
    };
    if (n->op == Op::Var) return shifted_var(n->var);
    if (n->op == Op::JBracketVec) {
        if (total.size() == 1) return unary(Op::JBracket, shifted_var(0));
        NodePtr s = rational(1);
        for (std::size_t k = 0; k < total.size(); ++k) s = binary(Op::Add, s, pow(shifted_var(k), 2));
        return pow(s, Rational(1, 2));
    }
    if (n->kids.empty()) return n;
    Node copy = *n;
    for (auto& kid : copy.kids) kid = substitute_shifts(kid, total, true);
    return make_node(std::move(copy));
}

std::string var_name(std::size_t k, std::size_t dim) { return dim == 1 ? "xi" : "xi" + std::to_string(k + 1); }

std::string print(const NodePtr& n, std::size_t dim, bool leading);

std::string wrap(const NodePtr& n, std::size_t dim) { return "(" + print(n, dim, true) + ")"; }

std::string print(const NodePtr& n, std::size_t dim, bool leading) {
    const int p = precedence(*n);
    if (p == 1 && !leading && n->op != Op::Add && n->op != Op::Sub) return wrap(n, dim);
    switch (n->op) {
        case Op::Rational: return n->exact.str();
        case Op::Real: return format_real(n->real);
        case Op::Pi: return "pi";
        case Op::ImagUnit: return "i";
        case Op::Var: return var_name(n->var, dim);
        case Op::Add:
        case Op::Sub: {
            const auto& r = n->kids[1];
            std::string rs = precedence(*r) <= 1 ? wrap(r, dim) : print(r, dim, false);
            return print(n->kids[0], dim, leading) + (n->op == Op::Add ? " + " : " - ") + rs;
        }
        case Op::Neg: {
            const auto& c = n->kids[0];
            return "-" + (precedence(*c) <= 1 ? wrap(c, dim) : print(c, dim, false));
        }
        case Op::Mul:
        case Op::Div: {
            const auto& l = n->kids[0];
            const auto& r = n->kids[1];
            std::string ls = precedence(*l) < 2 ? wrap(l, dim) : print(l, dim, false);
            std::string rs = precedence(*r) <= 2 ? wrap(r, dim) : print(r, dim, false);
            return ls + (n->op == Op::Mul ? " * " : " / ") + rs;
        }
        case Op::Pow: {
            const auto& b = n->kids[0];
            std::string bs = precedence(*b) < 4 ? wrap(b, dim) : print(b, dim, false);
            const Rational& e = n->exact;
            std::string es = (e.is_integer() && e >= Rational(0)) ? e.str() : "(" + e.str() + ")";
            return bs + "^" + es;
        }
        case Op::Sin: return "sin(" + print(n->kids[0], dim, true) + ")";
        case Op::Cos: return "cos(" + print(n->kids[0], dim, true) + ")";
        case Op::Exp: return "exp(" + print(n->kids[0], dim, true) + ")";
        case Op::Atan: return "atan(" + print(n->kids[0], dim, true) + ")";
        case Op::JBracket: return "jbracket(" + print(n->kids[0], dim, true) + ")";
        case Op::JBracketVec: return "jbracket(xi)";
        case Op::Conj: return "conj(" + print(n->kids[0], dim, true) + ")";
        case Op::Shift: return print(substitute_shifts(n, {}, false), dim, leading);
    }
    return {};
}

bool equal(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (a->op != b->op || a->kids.size() != b->kids.size()) return false;
    switch (a->op) {
        case Op::Rational:
            if (a->exact != b->exact) return false;
            break;
        case Op::Real:
            if (a->real != b->real) return false;
            break;
        case Op::Var:
            if (a->var != b->var) return false;
            break;
        case Op::Pow:
            if (a->exact != b->exact) return false;
            break;
        case Op::Shift:
            if (a->offsets != b->offsets) return false;
            break;
        default: break;
    }
    for (std::size_t i = 0; i < a->kids.size(); ++i) {
        if (!equal(a->kids[i], b->kids[i])) return false;
    }
    return true;
}

std::size_t count_nodes(const NodePtr& n) {
    std::size_t c = 1;
    for (const auto& k : n->kids) c += count_nodes(k);
    return c;
}

// ---------------------------------------------------------------- parser

class Parser {
public:
    Parser(std::string_view text, std::size_t dim) : s_(text), dim_(dim) {}

    NodePtr parse() {
        NodePtr e = expression();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
        return e;
    }

private:
    std::string_view s_;
    std::size_t dim_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool accept(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!accept(c)) {
            throw ParseError(std::string("expected '") + c + "'", pos_);
        }
    }

    NodePtr expression() {
        NodePtr e;
        if (accept('-')) {
            e = neg(term());
        } else {
            accept('+');
            e = term();
        }
        while (true) {
            if (accept('+')) {
                e = add(e, term());
            } else if (accept('-')) {
                e = sub(e, term());
            } else {
                return e;
            }
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        while (true) {
            if (accept('*')) {
                e = mul(e, factor());
            } else if (accept('/')) {
                e = div(e, factor());
            } else {
                return e;
            }
        }
    }

    NodePtr factor() {
        NodePtr b = base();
        if (accept('^')) {
            const bool paren = accept('(');
            skip_ws();
            const std::size_t start = pos_;
            if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
            // A bare exponent is a signed integer or decimal; p/q needs parentheses.
            while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) ||
                                        (paren && s_[pos_] == '/') || s_[pos_] == '.')) {
                ++pos_;
            }
            if (pos_ == start) throw ParseError("expected rational exponent", pos_);
            Rational p;
            try {
                p = Rational::parse(s_.substr(start, pos_ - start));
            } catch (const InputError&) {
                throw ParseError("malformed exponent", start);
            }
            if (paren) expect(')');
            b = pow(b, p);
        }
        return b;
    }

    NodePtr number() {
        const std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (pos_ < s_.size() && s_[pos_] == '/' && pos_ + 1 < s_.size() &&
            std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            try {
                return rational(Rational::parse(s_.substr(start, pos_ - start)));
            } catch (const Error&) {
                throw ParseError("malformed rational literal", start);
            }
        }
        bool decimal = false;
        if (pos_ < s_.size() && s_[pos_] == '.') {
            decimal = true;
            ++pos_;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
        if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
            std::size_t p = pos_ + 1;
            if (p < s_.size() && (s_[p] == '-' || s_[p] == '+')) ++p;
            if (p < s_.size() && std::isdigit(static_cast<unsigned char>(s_[p]))) {
                decimal = true;
                pos_ = p;
                while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            }
        }
        const std::string_view lit = s_.substr(start, pos_ - start);
        if (decimal) {
            double v = 0.0;
            auto res = std::from_chars(lit.data(), lit.data() + lit.size(), v);
            if (res.ec != std::errc() || res.ptr != lit.data() + lit.size()) {
                throw ParseError("malformed decimal literal", start);
            }
            return real(v);
        }
        try {
            return rational(Rational::parse(lit));
        } catch (const Error&) {
            throw ParseError("malformed integer literal", start);
        }
    }

    NodePtr base() {
        const char c = peek();
        if (c == '\0') throw ParseError("unexpected end of expression", pos_);
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (c == '(') {
            ++pos_;
            NodePtr e = expression();
            expect(')');
            return e;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
            const std::string id(s_.substr(start, pos_ - start));
            if (id == "pi") return leaf(Op::Pi);
            if (id == "i") return leaf(Op::ImagUnit);
            if (id == "xi") {
                if (dim_ != 1) throw ParseError("'xi' is only a scalar in dimension 1; use xi1..xi" + std::to_string(dim_), start);
                return var(0);
            }
            if (id.size() == 3 && id.starts_with("xi") && id[2] >= '1' && id[2] <= '9') {
                const std::size_t k = static_cast<std::size_t>(id[2] - '1');
                if (k >= dim_) throw ParseError("variable " + id + " exceeds dimension " + std::to_string(dim_), start);
                return var(k);
            }
            Op op;
            if (id == "sin") op = Op::Sin;
            else if (id == "cos") op = Op::Cos;
            else if (id == "exp") op = Op::Exp;
            else if (id == "atan") op = Op::Atan;
            else if (id == "jbracket") op = Op::JBracket;
            else if (id == "conj") op = Op::Conj;
            else throw ParseError("unknown identifier '" + id + "'", start);

            if (peek() != '(') throw ParseError("function '" + id + "' takes exactly one argument in parentheses", pos_);
            ++pos_;
            if (op == Op::JBracket) {
                // jbracket(xi) is the vector bracket in every dimension.
                const std::size_t save = pos_;
                skip_ws();
                if (s_.substr(pos_, 2) == "xi" &&
                    (pos_ + 2 >= s_.size() || !std::isalnum(static_cast<unsigned char>(s_[pos_ + 2])))) {
                    pos_ += 2;
                    if (accept(')')) return leaf(Op::JBracketVec);
                }
                pos_ = save;
            }
            NodePtr arg = expression();
            if (peek() == ',') throw ParseError("function '" + id + "' takes exactly one argument", pos_);
            expect(')');
            return op == Op::Conj ? conj(arg) : func(op, arg);
        }
        throw ParseError("unexpected '" + std::string(1, c) + "'", pos_);
    }
};

}  // namespace

CoeffFn::CoeffFn() : root_(rational(0)), dim_(1) {}

CoeffFn::CoeffFn(NodePtr root, std::size_t dim) : root_(std::move(root)), dim_(dim) {
    if (dim_ == 0 || dim_ > 9) throw InputError("coefficient dimension must be in 1..9");
}

CoeffFn CoeffFn::parse(std::string_view text, std::size_t dim) {
    if (dim == 0 || dim > 9) throw InputError("coefficient dimension must be in 1..9");
    return CoeffFn(Parser(text, dim).parse(), dim);
}

CoeffFn CoeffFn::constant(Complex c, std::size_t dim) {
    NodePtr re = real(c.real());
    if (c.imag() == 0.0) return CoeffFn(re, dim);
    NodePtr im = mul(real(c.imag()), leaf(Op::ImagUnit));
    return CoeffFn(c.real() == 0.0 ? im : add(re, im), dim);
}

CoeffFn CoeffFn::constant(const Rational& q, std::size_t dim) { return CoeffFn(rational(q), dim); }

CoeffFn CoeffFn::variable(std::size_t k, std::size_t dim) {
    if (k >= dim) throw InputError("variable index exceeds dimension");
    return CoeffFn(var(k), dim);
}

Complex CoeffFn::operator()(std::span<const double> xi) const {
    if (xi.size() != dim_) {
        throw InputError("coefficient function of dimension " + std::to_string(dim_) + " evaluated at a point of dimension " +
                         std::to_string(xi.size()));
    }
    const Complex v = eval(*root_, xi);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
        throw PoleError("coefficient function is not finite at the evaluation point");
    }
    return v;
}

CoeffFn CoeffFn::derivative(std::size_t k) const {
    if (k >= dim_) throw InputError("derivative index exceeds dimension");
    return CoeffFn(derive(root_, k), dim_);
}

CoeffFn CoeffFn::derivative(std::span<const int> alpha) const {
    if (alpha.size() != dim_) throw InputError("multi-index length does not match dimension");
    CoeffFn f = *this;
    for (std::size_t k = 0; k < alpha.size(); ++k) {
        if (alpha[k] < 0) throw InputError("negative derivative order");
        for (int j = 0; j < alpha[k]; ++j) f = f.derivative(k);
    }
    return f;
}

CoeffFn CoeffFn::shifted(const RealVector& offset) const {
    if (offset.size() != dim_) throw InputError("shift dimension mismatch");
    return CoeffFn(shift(root_, {offset}), dim_);
}

CoeffFn CoeffFn::conj() const { return CoeffFn(appdo::conj(root_), dim_); }

bool CoeffFn::is_zero() const noexcept { return appdo::is_zero(root_); }

bool CoeffFn::is_constant() const noexcept { return !has_variables(root_); }

std::size_t CoeffFn::size() const noexcept { return count_nodes(root_); }

std::string CoeffFn::str() const { return print(root_, dim_, true); }

CoeffFn operator+(const CoeffFn& a, const CoeffFn& b) { return CoeffFn(add(a.root_, b.root_), a.dim_); }
CoeffFn operator-(const CoeffFn& a, const CoeffFn& b) { return CoeffFn(sub(a.root_, b.root_), a.dim_); }
CoeffFn operator*(const CoeffFn& a, const CoeffFn& b) { return CoeffFn(mul(a.root_, b.root_), a.dim_); }
CoeffFn operator/(const CoeffFn& a, const CoeffFn& b) { return CoeffFn(div(a.root_, b.root_), a.dim_); }
CoeffFn CoeffFn::operator-() const { return CoeffFn(neg(root_), dim_); }
CoeffFn CoeffFn::pow(const Rational& p) const { return CoeffFn(appdo::pow(root_, p), dim_); }

bool operator==(const CoeffFn& a, const CoeffFn& b) { return a.dim_ == b.dim_ && equal(a.root_, b.root_); }

}  // namespace appdo
