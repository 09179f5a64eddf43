#pragma once

#include <cctype>
#include <cstdio>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "topokin/errors.hpp"
#include "topokin/scalar_jet.hpp"

namespace topokin {

// Expression AST over one variable t. The grammar deliberately has no
// non-smooth primitives (abs, floor, min/max, conditionals), so every
// parsable expression is C^infinity on its real domain.
struct ExprNode;
using ExprPtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum class Kind { Number, Var, Const, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind;
    double value = 0.0;    // Number
    std::string name;      // Const ("pi"/"e") or Call function name
    ExprPtr lhs, rhs;      // children (Call/Neg use lhs only)
};

inline ExprPtr make_node(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }

inline bool operator==(const ExprNode& a, const ExprNode& b) {
    if (a.kind != b.kind || a.value != b.value || a.name != b.name) return false;
    auto eq = [](const ExprPtr& x, const ExprPtr& y) {
        if (!x || !y) return !x && !y;
        return *x == *y;
    };
    return eq(a.lhs, b.lhs) && eq(a.rhs, b.rhs);
}

namespace detail {

inline bool is_known_function(std::string_view s) {
    return s == "sin" || s == "cos" || s == "tan" || s == "exp" || s == "log" ||
           s == "sqrt" || s == "atan" || s == "sinh" || s == "cosh";
}

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    ExprPtr parse() {
        skip_ws();
        if (pos_ >= src_.size()) throw ParseError(0, "empty expression");
        ExprPtr e = parse_sum();
        skip_ws();
        if (pos_ < src_.size())
            throw ParseError(pos_, "unexpected trailing input; expected operator or end");
        return e;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
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

    ExprPtr parse_sum() {
        ExprPtr e = parse_product();
        for (;;) {
            if (accept('+'))
                e = make_node({ExprNode::Kind::Add, 0.0, {}, e, parse_product()});
            else if (accept('-'))
                e = make_node({ExprNode::Kind::Sub, 0.0, {}, e, parse_product()});
            else
                return e;
        }
    }

    ExprPtr parse_product() {
        ExprPtr e = parse_unary();
        for (;;) {
            if (accept('*'))
                e = make_node({ExprNode::Kind::Mul, 0.0, {}, e, parse_unary()});
            else if (accept('/'))
                e = make_node({ExprNode::Kind::Div, 0.0, {}, e, parse_unary()});
            else
                return e;
        }
    }

    ExprPtr parse_unary() {
        if (accept('-')) return make_node({ExprNode::Kind::Neg, 0.0, {}, parse_unary(), {}});
        return parse_power();
    }

    // ^ binds tighter than unary minus and is right-associative.
    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (accept('^'))
            return make_node({ExprNode::Kind::Pow, 0.0, {}, base, parse_unary()});
        return base;
    }

    ExprPtr parse_atom() {
        skip_ws();
        if (pos_ >= src_.size())
            throw ParseError(pos_, "expected number, 't', constant, function call, or '('");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            ExprPtr e = parse_sum();
            if (!accept(')')) throw ParseError(pos_, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
        throw ParseError(pos_, "expected number, 't', constant, function call, or '('");
    }

    ExprPtr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        }
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t mark = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            } else {
                pos_ = mark; // not an exponent, leave it for the caller
            }
        }
        const std::string text(src_.substr(start, pos_ - start));
        if (text == ".") throw ParseError(start, "malformed number");
        return make_node({ExprNode::Kind::Number, std::stod(text), {}, {}, {}});
    }

    ExprPtr parse_identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        const std::string id(src_.substr(start, pos_ - start));
        if (id == "t") return make_node({ExprNode::Kind::Var, 0.0, {}, {}, {}});
        if (id == "pi" || id == "e") return make_node({ExprNode::Kind::Const, 0.0, id, {}, {}});
        if (is_known_function(id)) {
            skip_ws();
            if (pos_ >= src_.size() || src_[pos_] != '(')
                throw ParseError(pos_, "expected '(' after function name '" + id + "'");
            ++pos_;
            ExprPtr arg = parse_sum();
            if (!accept(')')) throw ParseError(pos_, "expected ')'");
            return make_node({ExprNode::Kind::Call, 0.0, id, arg, {}});
        }
        throw ParseError(start, "unknown identifier '" + id + "'");
    }
};

} // namespace detail

inline ExprPtr parse_expression(std::string_view source) {
    return detail::Parser(source).parse();
}

// Canonical fully parenthesized printer; parse(print(ast)) == ast.
inline std::string print_expression(const ExprPtr& e) {
    using K = ExprNode::Kind;
    switch (e->kind) {
        case K::Number: {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", e->value);
            return buf;
        }
        case K::Var: return "t";
        case K::Const: return e->name;
        case K::Neg: return "(-" + print_expression(e->lhs) + ")";
        case K::Add: return "(" + print_expression(e->lhs) + "+" + print_expression(e->rhs) + ")";
        case K::Sub: return "(" + print_expression(e->lhs) + "-" + print_expression(e->rhs) + ")";
        case K::Mul: return "(" + print_expression(e->lhs) + "*" + print_expression(e->rhs) + ")";
        case K::Div: return "(" + print_expression(e->lhs) + "/" + print_expression(e->rhs) + ")";
        case K::Pow: return "(" + print_expression(e->lhs) + "^" + print_expression(e->rhs) + ")";
        case K::Call: return e->name + "(" + print_expression(e->lhs) + ")";
    }
    return {};
}

inline ScalarJet eval_scalar_jet(const ExprPtr& e, double t) {
    using K = ExprNode::Kind;
    try {
        switch (e->kind) {
            case K::Number: return ScalarJet::constant(e->value);
            case K::Var: return ScalarJet::variable(t);
            case K::Const:
                return ScalarJet::constant(e->name == "pi" ? 3.14159265358979323846
                                                           : 2.71828182845904523536);
            case K::Neg: return -eval_scalar_jet(e->lhs, t);
            case K::Add: return eval_scalar_jet(e->lhs, t) + eval_scalar_jet(e->rhs, t);
            case K::Sub: return eval_scalar_jet(e->lhs, t) - eval_scalar_jet(e->rhs, t);
            case K::Mul: return eval_scalar_jet(e->lhs, t) * eval_scalar_jet(e->rhs, t);
            case K::Div: return eval_scalar_jet(e->lhs, t) / eval_scalar_jet(e->rhs, t);
            case K::Pow: return pow(eval_scalar_jet(e->lhs, t), eval_scalar_jet(e->rhs, t));
            case K::Call: {
                ScalarJet a = eval_scalar_jet(e->lhs, t);
                if (e->name == "sin") return sin(a);
                if (e->name == "cos") return cos(a);
                if (e->name == "tan") return tan(a);
                if (e->name == "exp") return exp(a);
                if (e->name == "log") return log(a);
                if (e->name == "sqrt") return sqrt(a);
                if (e->name == "atan") return atan(a);
                if (e->name == "sinh") return sinh(a);
                return cosh(a);
            }
        }
    } catch (const DomainError& err) {
        // tag the failure with the subexpression it came from
        if ((e->kind == K::Div || e->kind == K::Pow || e->kind == K::Call) &&
            std::string_view(err.what()).find(" in ") == std::string_view::npos)
            throw DomainError(std::string(err.what()) + " in " + print_expression(e));
        throw;
    }
    throw Error("unreachable expression kind");
}

} // namespace topokin
