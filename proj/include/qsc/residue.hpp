#pragma once

// Quotient rings C[q]/(M) and their elements.
//
// A QuotientRing is immutable and shared between its elements; elements of
// different rings never mix. Reduction accepts Laurent input: q is a unit
// whenever M(0) != 0, and q^-1 is precomputed in closed form from M.

#include "qsc/laurent.hpp"
#include "qsc/rational_function.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

namespace qsc {

/// The denominator of a reduced quantity shares a factor with the modulus:
/// the congruence is not well-posed there.
class NonUnitDenominator : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class ModulusMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <class C>
class QuotientRing {
public:
    using poly_type = LaurentPoly<C>;

    explicit QuotientRing(poly_type modulus) : modulus_(std::move(modulus)) {
        if (modulus_.is_zero()) throw DivisionByZero("quotient ring modulo zero");
        if (modulus_.low() != 0) throw std::invalid_argument("modulus must have lowest exponent 0");
        monic_ = modulus_.monic();
        if (!detail::coeff_is_zero(monic_.coeff(0)) && monic_.span() > 0) {
            // M = m0 + q*T(q)  =>  q * (-T/m0) == 1 (mod M)
            poly_type tail = poly_type::from_coeffs(0, {monic_.coeffs().begin() + 1, monic_.coeffs().end()});
            q_inverse_ = tail * C(C(-1) / monic_.coeff(0));
            q_inverse_ = reduce_poly(q_inverse_);
        }
    }

    static std::shared_ptr<const QuotientRing> make(poly_type modulus) {
        return std::make_shared<const QuotientRing>(std::move(modulus));
    }

    const poly_type& modulus() const { return modulus_; }
    std::int64_t degree() const { return modulus_.span(); }
    bool q_is_unit() const { return monic_.span() == 0 || !detail::coeff_is_zero(monic_.coeff(0)); }

    /// Canonical representative (exponents in [0, deg M)) of a Laurent polynomial.
    poly_type reduce(const poly_type& p) const {
        if (p.is_zero() || degree() == 0) return poly_type();
        if (p.low() >= 0) return reduce_poly(p);
        if (!q_is_unit()) throw NonUnitDenominator("q is not invertible modulo " + modulus_.to_string());
        poly_type shifted = reduce_poly(p.shifted(-p.low()));
        return mul(shifted, q_power(p.low()));
    }

    poly_type mul(const poly_type& x, const poly_type& y) const { return reduce_poly(x * y); }

    /// q^e reduced; negative e uses the precomputed inverse of q.
    poly_type q_power(std::int64_t e) const {
        if (degree() == 0) return poly_type();
        if (e >= 0 && e < degree()) return poly_type::q_power(e);
        if (e >= 0) return reduce_poly(poly_type::q_power(e));
        if (!q_is_unit()) throw NonUnitDenominator("q is not invertible modulo " + modulus_.to_string());
        return pow(q_inverse_, -e);
    }

    poly_type pow(poly_type base, std::int64_t e) const {
        poly_type out(C(1));
        out = reduce_poly(out);
        while (e > 0) {
            if (e & 1) out = mul(out, base);
            e >>= 1;
            if (e > 0) base = mul(base, base);
        }
        return out;
    }

    /// Inverse of an already-reduced element; throws NonUnitDenominator.
    poly_type inverse(const poly_type& x) const {
        auto inv = inverse_mod(x, monic_);
        if (!inv) throw NonUnitDenominator("element " + x.to_string() + " is not a unit modulo " + modulus_.to_string());
        return *inv;
    }

    friend bool operator==(const QuotientRing& a, const QuotientRing& b) { return a.modulus_ == b.modulus_; }

private:
    poly_type modulus_;
    poly_type monic_;
    poly_type q_inverse_;

    poly_type reduce_poly(const poly_type& p) const {
        if (p.low() >= 0 && p.high() < degree()) return p;
        return detail::classical_divrem(p, monic_).second;
    }
};

/// Element of C[q]/(M).
template <class C>
class Residue {
public:
    using ring_type = QuotientRing<C>;
    using poly_type = LaurentPoly<C>;

    Residue(std::shared_ptr<const ring_type> ring, const poly_type& value)
        : ring_(std::move(ring)), value_(ring_->reduce(value)) {}

    static Residue zero(std::shared_ptr<const ring_type> ring) { return Residue(std::move(ring), poly_type()); }
    static Residue one(std::shared_ptr<const ring_type> ring) { return Residue(std::move(ring), poly_type(C(1))); }

    const std::shared_ptr<const ring_type>& ring() const { return ring_; }
    const poly_type& value() const { return value_; }
    bool is_zero() const { return value_.is_zero(); }
    bool is_one() const { return value_.is_one(); }

    friend Residue operator+(const Residue& x, const Residue& y) { return Residue(x.check(y), x.value_ + y.value_, raw_tag{}); }
    friend Residue operator-(const Residue& x, const Residue& y) { return Residue(x.check(y), x.value_ - y.value_, raw_tag{}); }
    friend Residue operator*(const Residue& x, const Residue& y) {
        const auto& ring = x.check(y);
        return Residue(ring, ring->mul(x.value_, y.value_), raw_tag{});
    }
    Residue operator-() const { return Residue(ring_, -value_, raw_tag{}); }
    Residue& operator+=(const Residue& o) { return *this = *this + o; }
    Residue& operator-=(const Residue& o) { return *this = *this - o; }
    Residue& operator*=(const Residue& o) { return *this = *this * o; }

    Residue scaled(const C& s) const { return Residue(ring_, value_ * s, raw_tag{}); }

    /// Multiplies by q^e.
    Residue times_q_power(std::int64_t e) const {
        if (e == 0 || is_zero()) return *this;
        if (e > 0) return Residue(ring_, ring_->reduce(value_.shifted(e)), raw_tag{});
        return Residue(ring_, ring_->mul(value_, ring_->q_power(e)), raw_tag{});
    }

    Residue inverse() const { return Residue(ring_, ring_->inverse(value_), raw_tag{}); }

    Residue pow(std::int64_t e) const {
        if (e < 0) return inverse().pow(-e);
        return Residue(ring_, ring_->pow(value_, e), raw_tag{});
    }

    friend bool operator==(const Residue& x, const Residue& y) {
        x.check(y);
        return x.value_ == y.value_;
    }

    std::string to_string() const { return value_.to_string(); }

private:
    struct raw_tag {};
    Residue(std::shared_ptr<const ring_type> ring, poly_type value, raw_tag)
        : ring_(std::move(ring)), value_(std::move(value)) {}

    const std::shared_ptr<const ring_type>& check(const Residue& o) const {
        if (ring_ != o.ring_ && !(*ring_ == *o.ring_))
            throw ModulusMismatch("residues modulo " + ring_->modulus().to_string() + " and " +
                                  o.ring_->modulus().to_string() + " cannot be combined");
        return ring_;
    }

    std::shared_ptr<const ring_type> ring_;
    poly_type value_;
};

/// Reduces num(P) * den(P)^-1 modulo the ring's modulus.
template <class C>
Residue<C> residue_reduce(const RationalFunction<C>& p, const std::shared_ptr<const QuotientRing<C>>& ring) {
    Residue<C> num(ring, p.num());
    if (num.is_zero()) return num;
    Residue<C> den(ring, p.den());
    if (den.is_zero() && ring->degree() > 0)
        throw NonUnitDenominator("denominator " + p.den().to_string() + " vanishes modulo " + ring->modulus().to_string());
    return num * den.inverse();
}

template <class C>
Residue<C> residue_reduce(const RationalFunction<C>& p, const LaurentPoly<C>& modulus) {
    return residue_reduce(p, QuotientRing<C>::make(modulus));
}

/// Lifts a polynomial with rational coefficients to Q(a) coefficients.
inline LaurentPoly<BivariateCoeff> lift_to_bivariate(const QPoly& p) {
    std::vector<BivariateCoeff> coeffs;
    coeffs.reserve(p.size());
    for (const auto& c : p.coeffs()) coeffs.emplace_back(c);
    return LaurentPoly<BivariateCoeff>::from_coeffs(p.low(), std::move(coeffs));
}

/// Residue of a rational function in q over Q(a) modulo a rational
/// polynomial M(q); the extended Euclidean algorithm runs over Q(a).
inline Residue<BivariateCoeff> bivariate_residue_reduce(const BivariateFunction& p, const QPoly& modulus) {
    return residue_reduce(p, QuotientRing<BivariateCoeff>::make(lift_to_bivariate(modulus)));
}

}  // namespace qsc
