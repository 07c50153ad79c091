#pragma once

// Dense univariate Laurent polynomials over an exact field C.
//
// C must be constructible from int, support + - * / and ==, and provide a
// free function is_zero(const C&) and to_string(const C&) visible to
// unqualified lookup (mpq_class overloads live in rational.hpp).

#include "qsc/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qsc {

namespace detail {

// Coefficient predicates found by ordinary lookup (Rational) or ADL (field
// types declared in namespace qsc after this header).
template <class C>
bool coeff_is_zero(const C& c) {
    using qsc::is_zero;
    return is_zero(c);
}

template <class C>
std::string coeff_to_string(const C& c) {
    using qsc::to_string;
    return to_string(c);
}

}  // namespace detail

class DivisionByZero : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

template <class C>
class LaurentPoly {
public:
    using coeff_type = C;

    LaurentPoly() = default;

    /// The constant polynomial c.
    explicit LaurentPoly(C c) : coeffs_{std::move(c)} { trim(); }

    static LaurentPoly monomial(C c, std::int64_t exponent) {
        LaurentPoly p;
        p.low_ = exponent;
        p.coeffs_.push_back(std::move(c));
        p.trim();
        return p;
    }

    /// q^exponent.
    static LaurentPoly q_power(std::int64_t exponent) { return monomial(C(1), exponent); }

    /// Coefficient i of `coeffs` multiplies q^(low + i).
    static LaurentPoly from_coeffs(std::int64_t low, std::vector<C> coeffs) {
        LaurentPoly p;
        p.low_ = low;
        p.coeffs_ = std::move(coeffs);
        p.trim();
        return p;
    }

    /// 1 - q^c.
    static LaurentPoly one_minus_q_power(std::int64_t c) {
        if (c == 0) return LaurentPoly();
        LaurentPoly p = q_power(c);
        return LaurentPoly(C(1)) - p;
    }

    bool is_zero() const { return coeffs_.empty(); }
    std::int64_t low() const { return low_; }
    /// Highest exponent; equals low() - 1 for the zero polynomial.
    std::int64_t high() const { return low_ + static_cast<std::int64_t>(coeffs_.size()) - 1; }
    /// high - low; -1 for zero.
    std::int64_t span() const { return static_cast<std::int64_t>(coeffs_.size()) - 1; }
    std::int64_t degree() const { return high(); }
    const std::vector<C>& coeffs() const { return coeffs_; }
    std::size_t size() const { return coeffs_.size(); }

    C coeff(std::int64_t exponent) const {
        if (exponent < low_ || exponent > high()) return C(0);
        return coeffs_[static_cast<std::size_t>(exponent - low_)];
    }
    const C& leading() const {
        require_nonzero("leading");
        return coeffs_.back();
    }
    const C& trailing() const {
        require_nonzero("trailing");
        return coeffs_.front();
    }
    bool is_constant() const { return is_zero() || (low_ == 0 && coeffs_.size() == 1); }
    bool is_one() const { return low_ == 0 && coeffs_.size() == 1 && coeffs_[0] == C(1); }

    /// Multiplies by q^e.
    LaurentPoly shifted(std::int64_t e) const {
        LaurentPoly p = *this;
        if (!p.is_zero()) p.low_ += e;
        return p;
    }

    LaurentPoly operator-() const {
        LaurentPoly p = *this;
        for (auto& c : p.coeffs_) c = -c;
        return p;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) { return accumulate(o, false); }
    LaurentPoly& operator-=(const LaurentPoly& o) { return accumulate(o, true); }

    LaurentPoly& operator*=(const C& s) {
        if (detail::coeff_is_zero(s)) {
            *this = LaurentPoly();
            return *this;
        }
        for (auto& c : coeffs_) c *= s;
        trim();
        return *this;
    }

    LaurentPoly& operator*=(const LaurentPoly& o) {
        *this = *this * o;
        return *this;
    }

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(LaurentPoly a, const C& s) { return a *= s; }
    friend LaurentPoly operator*(const C& s, LaurentPoly a) { return a *= s; }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
        if (a.is_zero() || b.is_zero()) return LaurentPoly();
        std::vector<C> out(a.coeffs_.size() + b.coeffs_.size() - 1, C(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            const C& ai = a.coeffs_[i];
            if (detail::coeff_is_zero(ai)) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j) {
                const C& bj = b.coeffs_[j];
                if (detail::coeff_is_zero(bj)) continue;
                out[i + j] += ai * bj;
            }
        }
        return from_coeffs(a.low_ + b.low_, std::move(out));
    }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.low_ == b.low_ && a.coeffs_ == b.coeffs_;
    }
    friend bool operator!=(const LaurentPoly& a, const LaurentPoly& b) { return !(a == b); }

    /// Horner evaluation at x (x must be invertible when low() < 0).
    template <class V>
    V evaluate(const V& x) const {
        V acc(0);
        for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + V(*it);
        if (low_ > 0) {
            for (std::int64_t i = 0; i < low_; ++i) acc = acc * x;
        } else {
            for (std::int64_t i = 0; i < -low_; ++i) acc = acc / x;
        }
        return acc;
    }

    /// Divides every coefficient by the leading one.
    LaurentPoly monic() const {
        if (is_zero()) return *this;
        C lc = leading();
        LaurentPoly p = *this;
        for (auto& c : p.coeffs_) c /= lc;
        return p;
    }

    std::string to_string(std::string_view var = "q") const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = coeffs_.size(); i-- > 0;) {
            const C& c = coeffs_[i];
            if (detail::coeff_is_zero(c)) continue;
            std::int64_t e = low_ + static_cast<std::int64_t>(i);
            std::string cs = detail::coeff_to_string(c);
            bool simple = cs.find_first_of("+-/ ", 1) == std::string::npos && cs[0] != '+' && cs[0] != '/';
            if (!first) os << " + ";
            first = false;
            if (e == 0) {
                os << (simple ? cs : "(" + cs + ")");
                continue;
            }
            if (cs == "-1") os << "-";
            else if (cs != "1") os << (simple ? cs : "(" + cs + ")") << "*";
            os << var;
            if (e != 1) os << "^" << e;
        }
        return os.str();
    }

private:
    std::int64_t low_ = 0;
    std::vector<C> coeffs_;

    void require_nonzero(const char* what) const {
        if (coeffs_.empty()) throw std::domain_error(std::string(what) + " coefficient of zero polynomial");
    }

    void trim() {
        std::size_t first = 0;
        while (first < coeffs_.size() && detail::coeff_is_zero(coeffs_[first])) ++first;
        if (first == coeffs_.size()) {
            coeffs_.clear();
            low_ = 0;
            return;
        }
        std::size_t last = coeffs_.size();
        while (last > first && detail::coeff_is_zero(coeffs_[last - 1])) --last;
        if (first > 0 || last < coeffs_.size()) {
            coeffs_.erase(coeffs_.begin() + static_cast<std::ptrdiff_t>(last), coeffs_.end());
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(first));
            low_ += static_cast<std::int64_t>(first);
        }
    }

    LaurentPoly& accumulate(const LaurentPoly& o, bool subtract) {
        if (o.is_zero()) return *this;
        if (is_zero()) {
            *this = subtract ? -o : o;
            return *this;
        }
        std::int64_t lo = std::min(low_, o.low_);
        std::int64_t hi = std::max(high(), o.high());
        if (lo < low_ || hi > high()) {
            std::vector<C> grown(static_cast<std::size_t>(hi - lo + 1), C(0));
            for (std::size_t i = 0; i < coeffs_.size(); ++i)
                grown[static_cast<std::size_t>(low_ - lo) + i] = std::move(coeffs_[i]);
            coeffs_ = std::move(grown);
            low_ = lo;
        }
        for (std::size_t i = 0; i < o.coeffs_.size(); ++i) {
            C& dst = coeffs_[static_cast<std::size_t>(o.low_ - low_) + i];
            if (subtract) dst -= o.coeffs_[i];
            else dst += o.coeffs_[i];
        }
        trim();
        return *this;
    }
};

using QPoly = LaurentPoly<Rational>;

template <class C>
std::string to_string(const LaurentPoly<C>& p) {
    return p.to_string();
}

template <class C>
std::ostream& operator<<(std::ostream& os, const LaurentPoly<C>& p) {
    return os << p.to_string();
}

/// Strips the monomial factor: returns p * q^(-p.low()).
template <class C>
LaurentPoly<C> strip_monomial(const LaurentPoly<C>& p) {
    return p.shifted(-p.low());
}

namespace detail {

// Long division of the coefficient vector of a (taken from exponent a_base)
// by the coefficient vector of b (taken from exponent b_base).
template <class C>
std::pair<LaurentPoly<C>, LaurentPoly<C>> divrem_vectors(const LaurentPoly<C>& a, std::int64_t a_base,
                                                         const LaurentPoly<C>& b, std::int64_t b_base) {
    std::vector<C> bc(static_cast<std::size_t>(b.low() - b_base), C(0));
    bc.insert(bc.end(), b.coeffs().begin(), b.coeffs().end());
    const std::size_t bn = bc.size();
    std::vector<C> rem(static_cast<std::size_t>(a.high() - a_base + 1), C(0));
    for (std::size_t i = 0; i < a.coeffs().size(); ++i)
        rem[static_cast<std::size_t>(a.low() - a_base) + i] = a.coeffs()[i];

    if (rem.size() < bn) return {LaurentPoly<C>(), a};

    const C& lc = bc.back();
    const bool monic = lc == C(1);
    std::vector<C> quot(rem.size() - bn + 1, C(0));
    for (std::size_t i = quot.size(); i-- > 0;) {
        C& top = rem[i + bn - 1];
        if (detail::coeff_is_zero(top)) continue;
        C factor = monic ? top : C(top / lc);
        for (std::size_t j = 0; j + 1 < bn; ++j) {
            if (!detail::coeff_is_zero(bc[j])) rem[i + j] -= factor * bc[j];
        }
        top = C(0);
        quot[i] = std::move(factor);
    }
    rem.resize(bn - 1);
    return {LaurentPoly<C>::from_coeffs(a_base - b_base, std::move(quot)),
            LaurentPoly<C>::from_coeffs(a_base, std::move(rem))};
}

// Division in C[q] for ordinary polynomials (both lowest exponents >= 0).
template <class C>
std::pair<LaurentPoly<C>, LaurentPoly<C>> classical_divrem(const LaurentPoly<C>& a, const LaurentPoly<C>& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (a.is_zero()) return {LaurentPoly<C>(), LaurentPoly<C>()};
    return divrem_vectors(a, 0, b, 0);
}

}  // namespace detail

/// Division with remainder: A = Q*B + R with R = 0 or span(R) < span(B).
///
/// When A is an ordinary polynomial and B has a nonzero constant term this is
/// classical long division. Otherwise the monomial factor of B is split off
/// first (q is a unit of the Laurent ring).
template <class C>
std::pair<LaurentPoly<C>, LaurentPoly<C>> poly_divrem(const LaurentPoly<C>& a, const LaurentPoly<C>& b) {
    if (b.is_zero()) throw DivisionByZero("polynomial division by zero");
    if (a.is_zero()) return {LaurentPoly<C>(), LaurentPoly<C>()};
    if (a.low() >= 0 && b.low() == 0) return detail::divrem_vectors(a, 0, b, 0);
    return detail::divrem_vectors(a, a.low(), b, b.low());
}

template <class C>
LaurentPoly<C> poly_rem(const LaurentPoly<C>& a, const LaurentPoly<C>& b) {
    return poly_divrem(a, b).second;
}

/// Exact quotient; throws when b does not divide a.
template <class C>
LaurentPoly<C> exact_div(const LaurentPoly<C>& a, const LaurentPoly<C>& b) {
    auto [q, r] = poly_divrem(a, b);
    if (!r.is_zero()) throw std::domain_error("exact_div: nonzero remainder");
    return q;
}

/// Monic gcd in the Laurent ring C[q, 1/q] (monomials are units, so the
/// result always has lowest exponent 0 and nonzero constant term).
template <class C>
LaurentPoly<C> poly_gcd(const LaurentPoly<C>& a, const LaurentPoly<C>& b) {
    if (a.is_zero() && b.is_zero()) throw std::domain_error("gcd of two zero polynomials");
    LaurentPoly<C> r0 = strip_monomial(a);
    LaurentPoly<C> r1 = strip_monomial(b);
    if (r0.span() < r1.span()) std::swap(r0, r1);
    while (!r1.is_zero()) {
        LaurentPoly<C> r2 = strip_monomial(poly_rem(r0, r1));
        r0 = std::move(r1);
        r1 = r2.monic();
    }
    return r0.monic();
}

/// Inverse of a modulo m when gcd(a, m) = 1. Both arguments are treated as
/// ordinary polynomials (lowest exponent >= 0) and m must have low() == 0.
template <class C>
std::optional<LaurentPoly<C>> inverse_mod(const LaurentPoly<C>& a, const LaurentPoly<C>& m) {
    if (m.is_zero() || m.low() != 0) throw std::invalid_argument("inverse_mod: modulus must be a polynomial with low() == 0");
    if (a.low() < 0) throw std::invalid_argument("inverse_mod: argument must be an ordinary polynomial");
    if (m.span() == 0) return LaurentPoly<C>();  // everything is zero in the zero ring
    const LaurentPoly<C> monic_m = m.monic();
    LaurentPoly<C> r0 = monic_m;
    LaurentPoly<C> r1 = detail::classical_divrem(a, r0).second;
    LaurentPoly<C> s0, s1(C(1));
    if (r1.is_zero()) return std::nullopt;
    {
        C lc = r1.leading();
        r1 = r1.monic();
        s1 *= C(C(1) / lc);
    }
    while (r1.span() > 0 || r1.low() > 0) {
        auto [quo, rem] = detail::classical_divrem(r0, r1);
        if (rem.is_zero()) return std::nullopt;  // r1 is a nontrivial common factor
        LaurentPoly<C> s2 = s0 - quo * s1;
        C lc = rem.leading();
        C inv_lc = C(1) / lc;
        rem *= inv_lc;
        s2 *= inv_lc;
        r0 = std::move(r1);
        r1 = std::move(rem);
        s0 = std::move(s1);
        s1 = std::move(s2);
    }
    // r1 == 1 here, so s1 * a == 1 (mod m).
    return detail::classical_divrem(s1, monic_m).second;
}

}  // namespace qsc
