#pragma once

// Small arithmetic expression language used by the case registry:
//   "(n-1)/(2*d)", "d*(k^2+k)/2+1", "-(n-1)*(d-1)/(2*d)"
// Expressions are parsed once and evaluated either exactly (Rational) or
// in double precision. The double evaluator additionally understands the
// constant `pi` and the functions sqrt(), gamma() and exp().

#include "qsc/rational.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qsc {

class ExprError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Bindings = std::map<std::string, Rational, std::less<>>;

class Expr {
public:
    Expr() : Expr(parse_or_throw("0")) {}

    static Expr parse(std::string_view text) { return parse_or_throw(text); }

    static Expr constant(std::int64_t v) { return parse_or_throw(std::to_string(v)); }

    const std::string& text() const { return text_; }

    Rational eval(const Bindings& vars) const { return eval_exact(*root_, vars); }

    std::int64_t eval_int(const Bindings& vars) const {
        Rational v = eval(vars);
        if (!is_integer(v))
            throw ExprError("expression '" + text_ + "' evaluates to non-integer " + v.get_str());
        return to_int64(v);
    }

    double eval_double(const std::map<std::string, double, std::less<>>& vars = {}) const {
        return eval_real(*root_, vars);
    }

    /// Free identifiers (variables and constants) referenced by the expression.
    std::set<std::string> identifiers() const {
        std::set<std::string> out;
        collect(*root_, out);
        return out;
    }

private:
    enum class Op { Num, Var, Neg, Add, Sub, Mul, Div, Pow, Call };

    struct Node {
        Op op;
        Rational value;
        std::string name;
        std::unique_ptr<Node> lhs, rhs;
    };

    std::string text_;
    std::shared_ptr<const Node> root_;

    struct Parser {
        std::string_view s;
        std::size_t pos = 0;

        [[noreturn]] void fail(const std::string& what) const {
            throw ExprError("cannot parse expression '" + std::string(s) + "': " + what +
                            " at offset " + std::to_string(pos));
        }
        void skip() {
            while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) {
                ++pos;
                return true;
            }
            return false;
        }
        std::unique_ptr<Node> make(Op op, std::unique_ptr<Node> l, std::unique_ptr<Node> r = nullptr) {
            auto n = std::make_unique<Node>();
            n->op = op;
            n->lhs = std::move(l);
            n->rhs = std::move(r);
            return n;
        }
        std::unique_ptr<Node> expr() {
            auto left = term();
            for (;;) {
                if (eat('+')) left = make(Op::Add, std::move(left), term());
                else if (eat('-')) left = make(Op::Sub, std::move(left), term());
                else return left;
            }
        }
        std::unique_ptr<Node> term() {
            auto left = unary();
            for (;;) {
                if (eat('*')) left = make(Op::Mul, std::move(left), unary());
                else if (eat('/')) left = make(Op::Div, std::move(left), unary());
                else return left;
            }
        }
        std::unique_ptr<Node> unary() {
            if (eat('-')) return make(Op::Neg, unary());
            if (eat('+')) return unary();
            return power();
        }
        std::unique_ptr<Node> power() {
            auto base = primary();
            if (eat('^')) return make(Op::Pow, std::move(base), unary());
            return base;
        }
        std::unique_ptr<Node> primary() {
            skip();
            if (pos >= s.size()) fail("unexpected end");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                auto inner = expr();
                if (!eat(')')) fail("expected ')'");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                auto n = std::make_unique<Node>();
                n->op = Op::Num;
                n->value = Rational(std::string(s.substr(start, pos - start)));
                if (pos < s.size() && s[pos] == '.') {
                    ++pos;
                    std::size_t fstart = pos;
                    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                    std::string digits(s.substr(fstart, pos - fstart));
                    if (!digits.empty()) {
                        BigInt scale;
                        mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits.size());
                        n->value += Rational(BigInt(digits), scale);
                    }
                }
                return n;
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos;
                while (pos < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
                    ++pos;
                std::string name(s.substr(start, pos - start));
                if (eat('(')) {
                    auto arg = expr();
                    if (!eat(')')) fail("expected ')' after argument of " + name);
                    auto n = make(Op::Call, std::move(arg));
                    n->name = name;
                    return n;
                }
                auto n = std::make_unique<Node>();
                n->op = Op::Var;
                n->name = name;
                return n;
            }
            fail(std::string("unexpected character '") + c + "'");
        }
    };

    static Expr parse_or_throw(std::string_view text) {
        Parser p{text};
        auto root = p.expr();
        p.skip();
        if (p.pos != text.size()) p.fail("trailing input");
        Expr e(0);
        e.text_ = std::string(text);
        e.root_ = std::shared_ptr<const Node>(root.release());
        return e;
    }

    explicit Expr(int) {}

    static Rational pow_exact(const Rational& base, const Rational& exp) {
        if (!is_integer(exp)) throw ExprError("non-integer exponent in exact evaluation");
        std::int64_t e = to_int64(exp);
        Rational b = base;
        if (e < 0) {
            if (is_zero(b)) throw ExprError("zero raised to a negative power");
            b = 1 / b;
            e = -e;
        }
        Rational out = 1;
        while (e > 0) {
            if (e & 1) out *= b;
            b *= b;
            e >>= 1;
        }
        return out;
    }

    static Rational eval_exact(const Node& n, const Bindings& vars) {
        switch (n.op) {
            case Op::Num: return n.value;
            case Op::Var: {
                auto it = vars.find(n.name);
                if (it == vars.end()) throw ExprError("unbound variable '" + n.name + "'");
                return it->second;
            }
            case Op::Neg: return -eval_exact(*n.lhs, vars);
            case Op::Add: return eval_exact(*n.lhs, vars) + eval_exact(*n.rhs, vars);
            case Op::Sub: return eval_exact(*n.lhs, vars) - eval_exact(*n.rhs, vars);
            case Op::Mul: return eval_exact(*n.lhs, vars) * eval_exact(*n.rhs, vars);
            case Op::Div: {
                Rational den = eval_exact(*n.rhs, vars);
                if (is_zero(den)) throw ExprError("division by zero");
                return eval_exact(*n.lhs, vars) / den;
            }
            case Op::Pow: return pow_exact(eval_exact(*n.lhs, vars), eval_exact(*n.rhs, vars));
            case Op::Call: throw ExprError("function '" + n.name + "' has no exact value");
        }
        throw ExprError("corrupt expression");
    }

    static double eval_real(const Node& n, const std::map<std::string, double, std::less<>>& vars) {
        switch (n.op) {
            case Op::Num: return n.value.get_d();
            case Op::Var: {
                auto it = vars.find(n.name);
                if (it != vars.end()) return it->second;
                if (n.name == "pi") return std::acos(-1.0);
                throw ExprError("unbound variable '" + n.name + "'");
            }
            case Op::Neg: return -eval_real(*n.lhs, vars);
            case Op::Add: return eval_real(*n.lhs, vars) + eval_real(*n.rhs, vars);
            case Op::Sub: return eval_real(*n.lhs, vars) - eval_real(*n.rhs, vars);
            case Op::Mul: return eval_real(*n.lhs, vars) * eval_real(*n.rhs, vars);
            case Op::Div: return eval_real(*n.lhs, vars) / eval_real(*n.rhs, vars);
            case Op::Pow: return std::pow(eval_real(*n.lhs, vars), eval_real(*n.rhs, vars));
            case Op::Call: {
                double x = eval_real(*n.lhs, vars);
                if (n.name == "sqrt") return std::sqrt(x);
                if (n.name == "gamma") return std::tgamma(x);
                if (n.name == "exp") return std::exp(x);
                throw ExprError("unknown function '" + n.name + "'");
            }
        }
        throw ExprError("corrupt expression");
    }

    static void collect(const Node& n, std::set<std::string>& out) {
        if (n.op == Op::Var) out.insert(n.name);
        if (n.lhs) collect(*n.lhs, out);
        if (n.rhs) collect(*n.rhs, out);
    }
};

}  // namespace qsc
