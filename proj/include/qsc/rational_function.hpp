#pragma once

// Reduced quotients of Laurent polynomials over an exact field.
//
// Canonical form: gcd(num, den) = 1, den is monic with lowest exponent 0
// (monomial content lives in the numerator). With C = Rational this is an
// element of Q(q); RationalFunction<Rational> in the variable `a` is the
// coefficient field Q(a) of the parametric path (BivariateCoeff).

#include "qsc/laurent.hpp"

#include <ostream>
#include <string>
#include <string_view>
#include <utility>

namespace qsc {

template <class C>
class RationalFunction {
public:
    using poly_type = LaurentPoly<C>;

    RationalFunction() : num_(), den_(C(1)) {}
    RationalFunction(int c) : num_(C(c)), den_(C(1)) {}  // NOLINT: field constants
    explicit RationalFunction(C c) : num_(std::move(c)), den_(C(1)) {}
    explicit RationalFunction(poly_type p) : num_(std::move(p)), den_(C(1)) {}

    RationalFunction(poly_type num, poly_type den) : num_(std::move(num)), den_(std::move(den)) {
        if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
        normalize();
    }

    /// The generator of the underlying Laurent ring (q, or a for Q(a)).
    static RationalFunction variable() { return RationalFunction(poly_type::q_power(1)); }

    const poly_type& num() const { return num_; }
    const poly_type& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }

    RationalFunction operator-() const {
        RationalFunction r = *this;
        r.num_ = -r.num_;
        return r;
    }

    friend RationalFunction operator+(const RationalFunction& x, const RationalFunction& y) {
        if (x.is_zero()) return y;
        if (y.is_zero()) return x;
        if (x.den_ == y.den_) return RationalFunction(x.num_ + y.num_, x.den_);
        return RationalFunction(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
    }
    friend RationalFunction operator-(const RationalFunction& x, const RationalFunction& y) { return x + (-y); }
    friend RationalFunction operator*(const RationalFunction& x, const RationalFunction& y) {
        if (x.is_zero() || y.is_zero()) return RationalFunction();
        // Cross-cancel first so the products stay small.
        poly_type g1 = poly_gcd(x.num_, y.den_);
        poly_type g2 = poly_gcd(y.num_, x.den_);
        RationalFunction r;
        r.num_ = exact_div(x.num_, g1) * exact_div(y.num_, g2);
        r.den_ = exact_div(x.den_, g2) * exact_div(y.den_, g1);
        r.normalize_units();
        return r;
    }
    friend RationalFunction operator/(const RationalFunction& x, const RationalFunction& y) {
        return x * y.inverse();
    }

    RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
    RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
    RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }
    RationalFunction& operator/=(const RationalFunction& o) { return *this = *this / o; }

    RationalFunction inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero rational function");
        RationalFunction r;
        r.num_ = den_;
        r.den_ = num_;
        r.normalize_units();
        return r;
    }

    friend bool operator==(const RationalFunction& x, const RationalFunction& y) {
        return x.num_ == y.num_ && x.den_ == y.den_;
    }
    friend bool operator!=(const RationalFunction& x, const RationalFunction& y) { return !(x == y); }

    template <class V>
    V evaluate(const V& x) const {
        return num_.evaluate(x) / den_.evaluate(x);
    }

    std::string to_string(std::string_view var = "q") const {
        if (den_.is_one()) return num_.to_string(var);
        return "(" + num_.to_string(var) + ")/(" + den_.to_string(var) + ")";
    }

private:
    poly_type num_;
    poly_type den_;

    void normalize() {
        if (num_.is_zero()) {
            den_ = poly_type(C(1));
            return;
        }
        poly_type g = poly_gcd(num_, den_);
        if (!g.is_one()) {
            num_ = exact_div(num_, g);
            den_ = exact_div(den_, g);
        }
        normalize_units();
    }

    // Moves the monomial factor and leading coefficient of den into num.
    void normalize_units() {
        if (num_.is_zero()) {
            den_ = poly_type(C(1));
            return;
        }
        std::int64_t shift = den_.low();
        if (shift != 0) {
            den_ = den_.shifted(-shift);
            num_ = num_.shifted(-shift);
        }
        C lc = den_.leading();
        if (!(lc == C(1))) {
            C inv = C(1) / lc;
            den_ *= inv;
            num_ *= inv;
        }
    }
};

template <class C>
std::ostream& operator<<(std::ostream& os, const RationalFunction<C>& x) {
    return os << x.to_string();
}

template <class C>
bool is_zero(const RationalFunction<C>& x) {
    return x.is_zero();
}

/// Coefficients are rendered as functions of the parameter `a`.
template <class C>
std::string to_string(const RationalFunction<C>& x) {
    return x.to_string("a");
}

using QFunction = RationalFunction<Rational>;
/// Element of Q(a), the coefficient field of the parametric path.
using BivariateCoeff = RationalFunction<Rational>;
/// Rational function in q with coefficients in Q(a).
using BivariateFunction = RationalFunction<BivariateCoeff>;

}  // namespace qsc
