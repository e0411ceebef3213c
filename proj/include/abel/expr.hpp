#pragma once

#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "abel/errors.hpp"

namespace abel {

// Grammar for inhomogeneity expressions Q(x) and construction coefficients:
//   expr   := term (('+'|'-') term)*
//   term   := unary (('*'|'/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' unary)?          // right-associative, binds tighter than unary '-'
//   primary:= number | 'x' | constant | fn '(' expr ')' | '(' expr ')'
// Constants are the symbolic names A, B, S, C, bound at evaluation time.

enum class BinaryOp { add, sub, mul, div, pow };
enum class UnaryOp { neg, sin, cos, tan, exp, ln, abs, sqrt };

using Bindings = std::map<std::string, double>;

namespace detail {

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Tag { number, variable, constant, unary, binary };

    Tag tag;
    double value = 0.0;        // number
    std::string name;          // constant
    UnaryOp uop = UnaryOp::neg;
    BinaryOp bop = BinaryOp::add;
    NodePtr child;             // unary operand / binary lhs
    NodePtr rhs;               // binary rhs

    static NodePtr number(double v) {
        auto n = std::make_shared<ExprNode>();
        n->tag = Tag::number;
        n->value = v;
        return n;
    }
    static NodePtr variable() {
        auto n = std::make_shared<ExprNode>();
        n->tag = Tag::variable;
        return n;
    }
    static NodePtr constant(std::string name) {
        auto n = std::make_shared<ExprNode>();
        n->tag = Tag::constant;
        n->name = std::move(name);
        return n;
    }
    static NodePtr unary(UnaryOp op, NodePtr c) {
        auto n = std::make_shared<ExprNode>();
        n->tag = Tag::unary;
        n->uop = op;
        n->child = std::move(c);
        return n;
    }
    static NodePtr binary(BinaryOp op, NodePtr l, NodePtr r) {
        auto n = std::make_shared<ExprNode>();
        n->tag = Tag::binary;
        n->bop = op;
        n->child = std::move(l);
        n->rhs = std::move(r);
        return n;
    }
};

inline bool node_equal(const NodePtr& a, const NodePtr& b) {
    if (a == b) return true;
    if (!a || !b || a->tag != b->tag) return false;
    switch (a->tag) {
        case ExprNode::Tag::number: return a->value == b->value;
        case ExprNode::Tag::variable: return true;
        case ExprNode::Tag::constant: return a->name == b->name;
        case ExprNode::Tag::unary: return a->uop == b->uop && node_equal(a->child, b->child);
        case ExprNode::Tag::binary:
            return a->bop == b->bop && node_equal(a->child, b->child) && node_equal(a->rhs, b->rhs);
    }
    return false;
}

inline const char* unary_name(UnaryOp op) {
    switch (op) {
        case UnaryOp::neg: return "-";
        case UnaryOp::sin: return "sin";
        case UnaryOp::cos: return "cos";
        case UnaryOp::tan: return "tan";
        case UnaryOp::exp: return "exp";
        case UnaryOp::ln: return "ln";
        case UnaryOp::abs: return "abs";
        case UnaryOp::sqrt: return "sqrt";
    }
    return "?";
}

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    NodePtr parse() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("empty expression", 0);
        NodePtr e = parse_expr();
        skip_ws();
        if (pos_ < text_.size())
            throw SyntaxError(std::string("unexpected '") + text_[pos_] + "'", pos_);
        return e;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool peek_is(char c) {
        skip_ws();
        return pos_ < text_.size() && text_[pos_] == c;
    }
    bool consume(char c) {
        if (peek_is(c)) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr parse_expr() {
        NodePtr lhs = parse_term();
        for (;;) {
            if (consume('+')) lhs = ExprNode::binary(BinaryOp::add, lhs, parse_term());
            else if (consume('-')) lhs = ExprNode::binary(BinaryOp::sub, lhs, parse_term());
            else return lhs;
        }
    }

    NodePtr parse_term() {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (consume('*')) lhs = ExprNode::binary(BinaryOp::mul, lhs, parse_unary());
            else if (consume('/')) lhs = ExprNode::binary(BinaryOp::div, lhs, parse_unary());
            else return lhs;
        }
    }

    NodePtr parse_unary() {
        if (consume('-')) return ExprNode::unary(UnaryOp::neg, parse_unary());
        return parse_power();
    }

    NodePtr parse_power() {
        NodePtr base = parse_primary();
        if (consume('^')) return ExprNode::binary(BinaryOp::pow, base, parse_unary());
        return base;
    }

    NodePtr parse_primary() {
        skip_ws();
        if (pos_ >= text_.size()) throw SyntaxError("unexpected end of expression", pos_);
        const char c = text_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
        if (consume('(')) {
            NodePtr e = parse_expr();
            if (!consume(')')) throw SyntaxError("expected ')'", pos_);
            return e;
        }
        throw SyntaxError(std::string("unexpected '") + c + "'", pos_);
    }

    NodePtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t mark = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            } else {
                pos_ = mark;  // 'e' was not an exponent
            }
        }
        const std::string tok(text_.substr(start, pos_ - start));
        if (tok == ".") throw SyntaxError("malformed number", start);
        return ExprNode::number(std::strtod(tok.c_str(), nullptr));
    }

    NodePtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
            ++pos_;
        const std::string name(text_.substr(start, pos_ - start));
        static const std::map<std::string, UnaryOp> functions = {
            {"sin", UnaryOp::sin}, {"cos", UnaryOp::cos}, {"tan", UnaryOp::tan},
            {"exp", UnaryOp::exp}, {"ln", UnaryOp::ln},   {"abs", UnaryOp::abs},
            {"sqrt", UnaryOp::sqrt}};
        if (auto it = functions.find(name); it != functions.end()) {
            if (!consume('(')) throw SyntaxError("expected '(' after function '" + name + "'", pos_);
            NodePtr arg = parse_expr();
            if (!consume(')')) throw SyntaxError("expected ')'", pos_);
            return ExprNode::unary(it->second, arg);
        }
        if (name == "x") return ExprNode::variable();
        if (name == "A" || name == "B" || name == "S" || name == "C") return ExprNode::constant(name);
        throw UnknownIdentifierError(name, start);
    }
};

inline double eval_node(const NodePtr& n, double x, const Bindings& bindings) {
    switch (n->tag) {
        case ExprNode::Tag::number: return n->value;
        case ExprNode::Tag::variable: return x;
        case ExprNode::Tag::constant: {
            auto it = bindings.find(n->name);
            if (it == bindings.end()) throw UnboundConstantError(n->name);
            return it->second;
        }
        case ExprNode::Tag::unary: {
            const double v = eval_node(n->child, x, bindings);
            switch (n->uop) {
                case UnaryOp::neg: return -v;
                case UnaryOp::sin: return std::sin(v);
                case UnaryOp::cos: return std::cos(v);
                case UnaryOp::tan: {
                    const double r = std::tan(v);
                    if (!std::isfinite(r)) throw DomainError("tan at a pole");
                    return r;
                }
                case UnaryOp::exp: {
                    const double r = std::exp(v);
                    if (!std::isfinite(r)) throw DomainError("exp overflow");
                    return r;
                }
                case UnaryOp::ln:
                    if (v <= 0.0) throw DomainError("ln of non-positive argument");
                    return std::log(v);
                case UnaryOp::abs: return std::abs(v);
                case UnaryOp::sqrt:
                    if (v < 0.0) throw DomainError("sqrt of negative argument");
                    return std::sqrt(v);
            }
            break;
        }
        case ExprNode::Tag::binary: {
            const double a = eval_node(n->child, x, bindings);
            const double b = eval_node(n->rhs, x, bindings);
            double r = 0.0;
            switch (n->bop) {
                case BinaryOp::add: r = a + b; break;
                case BinaryOp::sub: r = a - b; break;
                case BinaryOp::mul: r = a * b; break;
                case BinaryOp::div:
                    if (b == 0.0) throw DomainError("division by zero");
                    r = a / b;
                    break;
                case BinaryOp::pow:
                    if (a == 0.0 && b < 0.0) throw DomainError("0 raised to a negative power");
                    if (a < 0.0 && b != std::floor(b)) throw DomainError("negative base with non-integer exponent");
                    r = std::pow(a, b);
                    break;
            }
            if (!std::isfinite(r)) throw DomainError("non-finite intermediate value");
            return r;
        }
    }
    throw Error("corrupt expression node");
}

// Serialization emits the minimal parentheses that re-parse to the same tree.
inline int node_prec(const NodePtr& n) {
    switch (n->tag) {
        case ExprNode::Tag::binary:
            switch (n->bop) {
                case BinaryOp::add:
                case BinaryOp::sub: return 1;
                case BinaryOp::mul:
                case BinaryOp::div: return 2;
                case BinaryOp::pow: return 4;
            }
            return 1;
        case ExprNode::Tag::unary:
            return n->uop == UnaryOp::neg ? 3 : 5;
        case ExprNode::Tag::number:
            return n->value < 0.0 ? 3 : 5;
        default: return 5;
    }
}

inline void serialize_node(const NodePtr& n, std::string& out) {
    switch (n->tag) {
        case ExprNode::Tag::number: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", n->value);
            out += buf;
            return;
        }
        case ExprNode::Tag::variable: out += 'x'; return;
        case ExprNode::Tag::constant: out += n->name; return;
        case ExprNode::Tag::unary: {
            if (n->uop == UnaryOp::neg) {
                out += '-';
                const bool parens = node_prec(n->child) < 3;
                if (parens) out += '(';
                serialize_node(n->child, out);
                if (parens) out += ')';
            } else {
                out += unary_name(n->uop);
                out += '(';
                serialize_node(n->child, out);
                out += ')';
            }
            return;
        }
        case ExprNode::Tag::binary: {
            const int p = node_prec(n);
            const char* op = n->bop == BinaryOp::add ? " + "
                           : n->bop == BinaryOp::sub ? " - "
                           : n->bop == BinaryOp::mul ? "*"
                           : n->bop == BinaryOp::div ? "/"
                                                     : "^";
            const bool lp = node_prec(n->child) < p ||
                            (node_prec(n->child) == p && n->bop == BinaryOp::pow);
            const bool rp = node_prec(n->rhs) < p ||
                            (node_prec(n->rhs) == p &&
                             (n->bop == BinaryOp::sub || n->bop == BinaryOp::div));
            if (lp) out += '(';
            serialize_node(n->child, out);
            if (lp) out += ')';
            out += op;
            if (rp) out += '(';
            serialize_node(n->rhs, out);
            if (rp) out += ')';
            return;
        }
    }
}

}  // namespace detail

// Immutable parsed expression; cheap to copy and safe to share across threads.
class Expression {
public:
    Expression() = default;

    static Expression parse(std::string_view text) {
        if (text.empty()) throw SyntaxError("empty expression", 0);
        return Expression(detail::Parser(text).parse());
    }

    double evaluate(double x, const Bindings& bindings = {}) const {
        require();
        return detail::eval_node(root_, x, bindings);
    }

    std::string serialize() const {
        require();
        std::string out;
        detail::serialize_node(root_, out);
        return out;
    }

    bool structurally_equal(const Expression& other) const {
        return detail::node_equal(root_, other.root_);
    }

    bool empty() const { return root_ == nullptr; }
    const detail::NodePtr& root() const { return root_; }

private:
    explicit Expression(detail::NodePtr root) : root_(std::move(root)) {}
    void require() const {
        if (!root_) throw Error("empty Expression");
    }
    detail::NodePtr root_;
};

// ---------------------------------------------------------------------------
// Inhomogeneity classification
// ---------------------------------------------------------------------------

enum class BaseKind { polynomial_x, logarithm, exponential, trigonometric, rational, mixed };

inline const char* to_string(BaseKind k) {
    switch (k) {
        case BaseKind::polynomial_x: return "polynomial";
        case BaseKind::logarithm: return "logarithm";
        case BaseKind::exponential: return "exponential";
        case BaseKind::trigonometric: return "trigonometric";
        case BaseKind::rational: return "rational";
        case BaseKind::mixed: return "mixed";
    }
    return "?";
}

inline std::optional<BaseKind> base_kind_from_string(std::string_view s) {
    if (s == "polynomial" || s == "polynomial-in-x" || s == "x") return BaseKind::polynomial_x;
    if (s == "logarithm" || s == "log") return BaseKind::logarithm;
    if (s == "exponential" || s == "exp") return BaseKind::exponential;
    if (s == "trigonometric" || s == "trig") return BaseKind::trigonometric;
    if (s == "rational") return BaseKind::rational;
    if (s == "mixed") return BaseKind::mixed;
    return std::nullopt;
}

// Base kind of Q plus the order n that drives the beta-factor lookup.
// Rational classes additionally carry the power pair (m, k) with n = m - k,
// and the Table row of the underlying base function.
struct InhomogeneityClass {
    BaseKind kind = BaseKind::polynomial_x;
    int order = 1;
    int m = 0;
    int k = 0;
    BaseKind rational_base = BaseKind::polynomial_x;
};

namespace detail {

// Degree bookkeeping for the classification heuristic: per base kind, the
// minimum and maximum net degree contributed by any additive term.
struct DegreeRange {
    int min = 0;
    int max = 0;
};
struct ClassScan {
    std::map<BaseKind, DegreeRange> degrees;
    bool additive_mix = false;   // some sum has base functions on both sides
    bool base_quotient = false;  // some division has a base power in the divisor
    bool analyzable = true;
};

inline ClassScan unanalyzable() {
    ClassScan s;
    s.analyzable = false;
    return s;
}

inline std::optional<int> literal_int(const NodePtr& n) {
    if (n->tag == ExprNode::Tag::number) {
        if (n->value == std::floor(n->value) && std::abs(n->value) < 1e9)
            return static_cast<int>(n->value);
        return std::nullopt;
    }
    if (n->tag == ExprNode::Tag::unary && n->uop == UnaryOp::neg) {
        if (auto v = literal_int(n->child)) return -*v;
    }
    return std::nullopt;
}

inline ClassScan scan_node(const NodePtr& n) {
    switch (n->tag) {
        case ExprNode::Tag::number:
        case ExprNode::Tag::constant:
            return {};
        case ExprNode::Tag::variable: {
            ClassScan s;
            s.degrees[BaseKind::polynomial_x] = {1, 1};
            return s;
        }
        case ExprNode::Tag::unary: {
            switch (n->uop) {
                case UnaryOp::neg:
                case UnaryOp::abs: return scan_node(n->child);
                case UnaryOp::ln: {
                    ClassScan s;
                    s.degrees[BaseKind::logarithm] = {1, 1};
                    return s;
                }
                case UnaryOp::exp: {
                    ClassScan s;
                    s.degrees[BaseKind::exponential] = {1, 1};
                    return s;
                }
                case UnaryOp::sin:
                case UnaryOp::cos:
                case UnaryOp::tan: {
                    ClassScan s;
                    s.degrees[BaseKind::trigonometric] = {1, 1};
                    return s;
                }
                case UnaryOp::sqrt: {
                    ClassScan c = scan_node(n->child);
                    if (!c.analyzable || !c.degrees.empty()) return unanalyzable();
                    return c;  // sqrt of a constant
                }
            }
            return unanalyzable();
        }
        case ExprNode::Tag::binary: {
            if (n->bop == BinaryOp::pow) {
                auto e = literal_int(n->rhs);
                if (!e) return unanalyzable();
                ClassScan base = scan_node(n->child);
                if (!base.analyzable) return base;
                ClassScan s;
                s.additive_mix = base.additive_mix;
                s.base_quotient = base.base_quotient;
                for (auto& [kind, d] : base.degrees) {
                    int lo = d.min * *e, hi = d.max * *e;
                    if (lo > hi) std::swap(lo, hi);
                    if (lo != 0 || hi != 0) s.degrees[kind] = {lo, hi};
                }
                return s;
            }
            ClassScan a = scan_node(n->child);
            ClassScan b = scan_node(n->rhs);
            if (!a.analyzable || !b.analyzable) return unanalyzable();
            ClassScan s;
            s.additive_mix = a.additive_mix || b.additive_mix;
            s.base_quotient = a.base_quotient || b.base_quotient;
            if (n->bop == BinaryOp::div && !b.degrees.empty()) s.base_quotient = true;
            if (n->bop == BinaryOp::add || n->bop == BinaryOp::sub) {
                if (!a.degrees.empty() && !b.degrees.empty()) s.additive_mix = true;
                s.degrees = a.degrees;
                for (auto& [kind, d] : b.degrees) {
                    auto it = s.degrees.find(kind);
                    if (it == s.degrees.end()) s.degrees[kind] = d;
                    else it->second = {std::min(it->second.min, d.min), std::max(it->second.max, d.max)};
                }
                return s;
            }
            // mul / div: degrees add (subtract for the divisor)
            const int sign = n->bop == BinaryOp::div ? -1 : 1;
            s.degrees = a.degrees;
            for (auto& [kind, d] : b.degrees) {
                int lo = sign * (sign < 0 ? d.max : d.min);
                int hi = sign * (sign < 0 ? d.min : d.max);
                auto it = s.degrees.find(kind);
                if (it == s.degrees.end()) s.degrees[kind] = {lo, hi};
                else it->second = {it->second.min + lo, it->second.max + hi};
            }
            for (auto it = s.degrees.begin(); it != s.degrees.end();) {
                if (it->second.min == 0 && it->second.max == 0) it = s.degrees.erase(it);
                else ++it;
            }
            return s;
        }
    }
    return unanalyzable();
}

// Positive/negative exponent split (m, k) of a single-term quotient of powers.
inline std::pair<int, int> quotient_powers(const NodePtr& n, int sign = 1) {
    switch (n->tag) {
        case ExprNode::Tag::number:
        case ExprNode::Tag::constant: return {0, 0};
        case ExprNode::Tag::variable:
            return sign > 0 ? std::pair{1, 0} : std::pair{0, 1};
        case ExprNode::Tag::unary:
            if (n->uop == UnaryOp::neg || n->uop == UnaryOp::abs)
                return quotient_powers(n->child, sign);
            return sign > 0 ? std::pair{1, 0} : std::pair{0, 1};
        case ExprNode::Tag::binary: {
            if (n->bop == BinaryOp::pow) {
                const int e = literal_int(n->rhs).value_or(1) * sign;
                return e >= 0 ? std::pair{e, 0} : std::pair{0, -e};
            }
            auto [m1, k1] = quotient_powers(n->child, sign);
            auto [m2, k2] = quotient_powers(n->rhs, n->bop == BinaryOp::div ? -sign : sign);
            return {m1 + m2, k1 + k2};
        }
    }
    return {0, 0};
}

}  // namespace detail

// Heuristic classification of Q(x) for the beta-factor lookup. An explicit
// override wins unconditionally; otherwise the highest-degree base kind is
// chosen, single quotients of powers classify as rational, and anything the
// heuristic cannot decide raises ClassificationError.
inline InhomogeneityClass classify_inhomogeneity(
    const Expression& e, std::optional<InhomogeneityClass> override = std::nullopt) {
    if (override) return *override;

    detail::ClassScan scan = detail::scan_node(e.root());
    if (!scan.analyzable)
        throw ClassificationError("expression structure not classifiable; supply an override");
    if (scan.degrees.empty())
        throw ClassificationError("no base function present (constant Q); supply an override");

    // Pick the base kind with the greatest maximum degree; ties are ambiguous.
    auto best = scan.degrees.begin();
    bool tie = false;
    for (auto it = std::next(scan.degrees.begin()); it != scan.degrees.end(); ++it) {
        if (it->second.max > best->second.max) {
            best = it;
            tie = false;
        } else if (it->second.max == best->second.max) {
            tie = true;
        }
    }
    if (tie) throw ClassificationError("two base kinds share the greatest degree; supply an override");

    const BaseKind kind = best->first;
    const detail::DegreeRange deg = best->second;

    // Pure ratios of powers of one base classify as rational (Eq-52 scope);
    // everything else with negative degrees is out of that scope.
    const bool ratio_form = deg.min < 0 || scan.base_quotient;
    if (!ratio_form) {
        if (deg.max < 1)
            throw ClassificationError("degenerate degree; supply an override");
        InhomogeneityClass cls;
        cls.kind = kind;
        cls.order = deg.max;
        return cls;
    }
    if (scan.additive_mix || scan.degrees.size() > 1)
        throw ClassificationError("sum involving quotients of powers; supply an override");

    auto [m, k] = detail::quotient_powers(e.root());
    if (m == 0) {
        m = 1;  // represent c/f^k as f^1/f^(k+1); n = m - k is unchanged
        k += 1;
    }
    InhomogeneityClass cls;
    cls.kind = BaseKind::rational;
    cls.order = m - k;
    cls.m = m;
    cls.k = k;
    cls.rational_base = kind;
    return cls;
}

}  // namespace abel
