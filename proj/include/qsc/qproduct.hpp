#pragma once

// Factored q-products: r * q^e * prod_c (1 - q^c)^{m_c}, c > 0.
//
// Every non-parametric summand, closed form and specialised parametric term
// in the registry has this shape. Because 1 - q^c = -prod_{d | c} Phi_d(q),
// such a product is also r' * q^e * prod_d Phi_d^{e_d}; distinct cyclotomic
// polynomials are coprime, so this form is canonical and cancellation is
// exact bookkeeping on exponents.

#include "qsc/cyclotomic.hpp"
#include "qsc/rational_function.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>

namespace qsc {

/// A q-product requires dividing by a factor that is identically zero.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

struct CyclotomicForm {
    Rational coefficient{1};
    std::int64_t q_exponent = 0;
    std::map<std::int64_t, std::int64_t> phi;  // d -> exponent of Phi_d, nonzero entries only

    bool is_zero() const { return qsc::is_zero(coefficient); }

    std::int64_t valuation(std::int64_t d) const {
        auto it = phi.find(d);
        return it == phi.end() ? 0 : it->second;
    }

    /// coefficient * q^e * prod_{e_d > 0} Phi_d^{e_d}
    QPoly numerator() const {
        if (is_zero()) return QPoly();
        QPoly out = QPoly::monomial(coefficient, q_exponent);
        for (const auto& [d, e] : phi)
            for (std::int64_t i = 0; i < e; ++i) out *= cyclotomic(d);
        return out;
    }

    /// prod_{e_d < 0} Phi_d^{-e_d}; monic with nonzero constant term.
    QPoly denominator() const {
        QPoly out(Rational(1));
        if (is_zero()) return out;
        for (const auto& [d, e] : phi)
            for (std::int64_t i = 0; i < -e; ++i) out *= cyclotomic(d);
        return out;
    }

    /// Already reduced: numerator and denominator share no cyclotomic factor.
    QFunction to_function() const {
        if (is_zero()) return QFunction();
        return QFunction(numerator(), denominator());
    }

    friend bool operator==(const CyclotomicForm& a, const CyclotomicForm& b) {
        if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
        return a.coefficient == b.coefficient && a.q_exponent == b.q_exponent && a.phi == b.phi;
    }
};

class QProduct {
public:
    QProduct() = default;

    static QProduct zero() {
        QProduct p;
        p.coefficient_ = 0;
        return p;
    }

    bool is_zero() const { return qsc::is_zero(coefficient_); }
    const Rational& coefficient() const { return coefficient_; }
    std::int64_t q_exponent() const { return q_exponent_; }
    /// c -> multiplicity of (1 - q^c); every key is positive.
    const std::map<std::int64_t, std::int64_t>& factors() const { return factors_; }

    QProduct& mul_constant(const Rational& r) {
        coefficient_ *= r;
        if (is_zero()) clear_to_zero();
        return *this;
    }

    QProduct& mul_q_power(std::int64_t e) {
        if (!is_zero()) q_exponent_ += e;
        return *this;
    }

    /// Multiplies by (1 - q^c)^mult; mult may be negative.
    QProduct& mul_one_minus_q_power(std::int64_t c, std::int64_t mult) {
        if (mult == 0) return *this;
        if (c == 0) {
            if (mult < 0) throw PoleError("division by the zero factor (1 - q^0)");
            clear_to_zero();
            return *this;
        }
        if (is_zero()) return *this;
        if (c < 0) {
            // 1 - q^c = -q^c (1 - q^-c)
            if (mult % 2 != 0) coefficient_ = -coefficient_;
            q_exponent_ += c * mult;
            c = -c;
        }
        auto& m = factors_[c];
        m += mult;
        if (m == 0) factors_.erase(c);
        return *this;
    }

    /// Multiplies by [m]_q^mult with [m] = (1 - q^m)/(1 - q).
    QProduct& mul_q_integer(std::int64_t m, std::int64_t mult) {
        if (mult == 0) return *this;
        if (m == 0) {
            if (mult < 0) throw PoleError("division by the q-integer [0]");
            clear_to_zero();
            return *this;
        }
        mul_one_minus_q_power(m, mult);
        return mul_one_minus_q_power(1, -mult);
    }

    /// Multiplies by ((q^c; q^s)_k)^mult.
    QProduct& mul_pochhammer(std::int64_t c, std::int64_t s, std::int64_t k, std::int64_t mult) {
        if (k < 0) throw std::invalid_argument("negative q-Pochhammer length");
        for (std::int64_t j = 0; j < k; ++j) mul_one_minus_q_power(c + j * s, mult);
        return *this;
    }

    QProduct& operator*=(const QProduct& o) {
        if (o.is_zero()) {
            clear_to_zero();
            return *this;
        }
        if (is_zero()) return *this;
        coefficient_ *= o.coefficient_;
        q_exponent_ += o.q_exponent_;
        for (const auto& [c, m] : o.factors_) mul_one_minus_q_power(c, m);
        return *this;
    }

    QProduct inverse() const {
        if (is_zero()) throw PoleError("inverse of zero q-product");
        QProduct r;
        r.coefficient_ = 1 / coefficient_;
        r.q_exponent_ = -q_exponent_;
        for (const auto& [c, m] : factors_) r.factors_[c] = -m;
        return r;
    }

    QProduct& operator/=(const QProduct& o) { return *this *= o.inverse(); }

    friend QProduct operator*(QProduct a, const QProduct& b) { return a *= b; }
    friend QProduct operator/(QProduct a, const QProduct& b) { return a /= b; }

    CyclotomicForm cyclotomic_form() const {
        CyclotomicForm f;
        if (is_zero()) {
            f.coefficient = 0;
            return f;
        }
        f.coefficient = coefficient_;
        f.q_exponent = q_exponent_;
        for (const auto& [c, m] : factors_) {
            if (m % 2 != 0) f.coefficient = -f.coefficient;  // 1 - q^c = -(q^c - 1)
            for (std::int64_t d : divisors(c)) f.phi[d] += m;
        }
        std::erase_if(f.phi, [](const auto& kv) { return kv.second == 0; });
        return f;
    }

    /// Multiplicity of Phi_d in the product (negative for poles).
    std::int64_t valuation(std::int64_t d) const {
        std::int64_t v = 0;
        for (const auto& [c, m] : factors_)
            if (c % d == 0) v += m;
        return v;
    }

    QFunction to_function() const { return cyclotomic_form().to_function(); }

    std::string to_string() const {
        if (is_zero()) return "0";
        std::string s = coefficient_.get_str();
        if (q_exponent_ != 0) s += "*q^" + std::to_string(q_exponent_);
        for (const auto& [c, m] : factors_) s += "*(1-q^" + std::to_string(c) + ")^" + std::to_string(m);
        return s;
    }

private:
    Rational coefficient_{1};
    std::int64_t q_exponent_ = 0;
    std::map<std::int64_t, std::int64_t> factors_;

    void clear_to_zero() {
        coefficient_ = 0;
        q_exponent_ = 0;
        factors_.clear();
    }
};

/// Equality as elements of Q(q).
inline bool same_function(const QProduct& a, const QProduct& b) {
    return a.cyclotomic_form() == b.cyclotomic_form();
}

}  // namespace qsc
