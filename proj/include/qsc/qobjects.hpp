#pragma once

// Compiles registry specs into concrete q-objects for fixed (n, d).

#include "qsc/cyclotomic.hpp"
#include "qsc/qproduct.hpp"
#include "qsc/rational_function.hpp"
#include "qsc/registry.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qsc {

inline Bindings make_bindings(std::int64_t n, std::int64_t d) {
    return Bindings{{"n", Rational(static_cast<long>(n))}, {"d", Rational(static_cast<long>(d))}};
}

namespace detail {

inline std::int64_t eval_integral(const Expr& e, const Bindings& b, const char* what) {
    Rational v = e.eval(b);
    if (!is_integer(v))
        throw RegistryError(std::string(what) + " '" + e.text() + "' is not an integer (" + v.get_str() + ")");
    return to_int64(v);
}

}  // namespace detail

/// A Pochhammer factor with its exponents evaluated. `power` is signed:
/// positive in the numerator, negative in the denominator.
struct CompiledFactor {
    std::int64_t base = 0;
    std::int64_t step = 1;
    std::int64_t power = 1;
    ParamKind param = ParamKind::none;
    bool specialized = false;  // came from a parametric factor with a = q^e
};

class CompiledSummand {
public:
    CompiledSummand() = default;

    CompiledSummand(const SummandSpec& spec, std::int64_t n, std::int64_t d) : bindings_(make_bindings(n, d)) {
        m_ = detail::eval_integral(spec.prefactor_m, bindings_, "prefactor slope");
        r_ = detail::eval_integral(spec.prefactor_r, bindings_, "prefactor offset");
        q_exponent_ = spec.q_exponent;
        for (const auto& f : spec.factors) {
            CompiledFactor cf;
            cf.base = detail::eval_integral(f.base, bindings_, "factor base");
            cf.step = detail::eval_integral(f.step, bindings_, "factor step");
            std::int64_t power = detail::eval_integral(f.power, bindings_, "factor power");
            if (cf.step < 1) throw RegistryError("factor step must be positive");
            if (power < 1) throw RegistryError("factor power must be positive");
            cf.power = f.role == Role::numerator ? power : -power;
            cf.param = f.param;
            factors_.push_back(cf);
        }
        // Plain factors first: an identically vanishing numerator is detected
        // before any specialised denominator is inspected.
        std::stable_partition(factors_.begin(), factors_.end(),
                              [](const CompiledFactor& f) { return f.param == ParamKind::none; });
    }

    std::int64_t prefactor_slope() const { return m_; }
    std::int64_t prefactor_offset() const { return r_; }
    const std::vector<CompiledFactor>& factors() const { return factors_; }

    bool parametric() const {
        return std::any_of(factors_.begin(), factors_.end(),
                           [](const CompiledFactor& f) { return f.param != ParamKind::none; });
    }

    std::int64_t q_exponent(std::int64_t k) const {
        Bindings b = bindings_;
        b["k"] = Rational(static_cast<long>(k));
        return detail::eval_integral(q_exponent_, b, "q-exponent");
    }

    /// Substitutes a = q^e: (a q^c; q^s) -> (q^{c+e}; q^s), (q^c/a; q^s) -> (q^{c-e}; q^s).
    CompiledSummand specialized(std::int64_t e) const {
        CompiledSummand out = *this;
        for (auto& f : out.factors_) {
            if (f.param == ParamKind::none) continue;
            f.base += f.param == ParamKind::a ? e : -e;
            f.param = ParamKind::none;
            f.specialized = true;
        }
        return out;
    }

    /// The same summand with every parametric factor removed.
    CompiledSummand without_parameter() const {
        CompiledSummand out = *this;
        std::erase_if(out.factors_, [](const CompiledFactor& f) { return f.param != ParamKind::none; });
        return out;
    }

private:
    Bindings bindings_;
    std::int64_t m_ = 0;
    std::int64_t r_ = 1;
    Expr q_exponent_;
    std::vector<CompiledFactor> factors_;
};

/// Walks the terms of a summand in order, maintaining the product of its
/// Pochhammer factors in factored form. Parametric factors are skipped; use
/// CompiledSummand::specialized or without_parameter first.
class TermWalker {
public:
    explicit TermWalker(const CompiledSummand& s) : summand_(&s) {}

    std::int64_t index() const { return k_; }

    /// True when the product has a vanishing plain factor: every term from
    /// here on is identically zero.
    bool exhausted() const { return identically_zero_; }

    /// True when the current term is zero.
    bool vanishes() const {
        return identically_zero_ || specialized_zero_ || prefactor_argument() == 0;
    }

    std::int64_t prefactor_argument() const { return summand_->prefactor_slope() * k_ + summand_->prefactor_offset(); }

    const QProduct& pochhammers() const { return product_; }

    std::int64_t summand_q_exponent() const { return summand_->q_exponent(k_); }

    /// [m k + r] q^{e(k)}; zero when the q-integer vanishes.
    QProduct prefactor() const {
        QProduct p;
        p.mul_q_integer(prefactor_argument(), 1);
        p.mul_q_power(summand_q_exponent());
        return p;
    }

    QProduct term() const {
        if (vanishes()) return QProduct::zero();
        return prefactor() * product_;
    }

    /// Moves to the next term. Returns the factors (c, multiplicity) of the
    /// form (1 - q^c)^m that were multiplied into the running product.
    const std::vector<std::pair<std::int64_t, std::int64_t>>& advance() {
        applied_.clear();
        for (const auto& f : summand_->factors()) {
            if (f.param != ParamKind::none) continue;
            std::int64_t c = f.base + k_ * f.step;
            if (c == 0) {
                if (f.power > 0) {
                    (f.specialized ? specialized_zero_ : identically_zero_) = true;
                } else if (!f.specialized) {
                    throw PoleError("summand factor (1 - q^0) in a denominator at k=" + std::to_string(k_));
                } else if (!identically_zero_) {
                    throw PoleError("specialised summand has a vanishing denominator at k=" + std::to_string(k_));
                }
                continue;
            }
            if (identically_zero_) continue;
            product_.mul_one_minus_q_power(c, f.power);
            applied_.emplace_back(c, f.power);
        }
        ++k_;
        return applied_;
    }

private:
    const CompiledSummand* summand_;
    std::int64_t k_ = 0;
    QProduct product_;
    bool identically_zero_ = false;
    bool specialized_zero_ = false;
    std::vector<std::pair<std::int64_t, std::int64_t>> applied_;
};

/// The k-th term of a non-parametric summand.
inline QProduct build_summand(const CompiledSummand& s, std::int64_t k) {
    if (s.parametric()) throw std::invalid_argument("build_summand: summand has parametric factors");
    TermWalker w(s);
    while (w.index() < k) w.advance();
    return w.term();
}

inline QProduct build_summand(const SummandSpec& spec, std::int64_t k, std::int64_t n, std::int64_t d) {
    return build_summand(CompiledSummand(spec, n, d), k);
}

/// The k-th term of a summand over Q(a): coefficients are rational functions
/// of the parameter a.
inline BivariateFunction build_summand_bivariate(const CompiledSummand& s, std::int64_t k) {
    using BP = LaurentPoly<BivariateCoeff>;
    QFunction plain = build_summand(s.without_parameter(), k).to_function();
    auto lift = [](const QPoly& p) {
        std::vector<BivariateCoeff> c;
        for (const auto& x : p.coeffs()) c.emplace_back(x);
        return BP::from_coeffs(p.low(), std::move(c));
    };
    BP num = lift(plain.num());
    BP den = lift(plain.den());
    const BivariateCoeff a = BivariateCoeff::variable();
    const BivariateCoeff inv_a = a.inverse();
    for (const auto& f : s.factors()) {
        if (f.param == ParamKind::none) continue;
        const BivariateCoeff& x = f.param == ParamKind::a ? a : inv_a;
        for (std::int64_t j = 0; j < k; ++j) {
            BP factor = BP(BivariateCoeff(1)) - BP::monomial(x, f.base + j * f.step);
            for (std::int64_t i = 0; i < (f.power > 0 ? f.power : -f.power); ++i) {
                if (f.power > 0) {
                    num *= factor;
                } else {
                    den *= factor;
                }
            }
        }
    }
    return BivariateFunction(num, den);
}

/// The right-hand side selected for (n, d), with the branch that produced it.
struct ClosedFormValue {
    QProduct value;
    const ClosedFormBranch* branch = nullptr;
};

inline const ClosedFormBranch* select_branch(const std::vector<ClosedFormBranch>& branches, const Bindings& b) {
    for (const auto& br : branches)
        if (br.when.holds(b)) return &br;
    return nullptr;
}

inline ClosedFormValue build_closed_form(const std::vector<ClosedFormBranch>& branches, std::int64_t n, std::int64_t d) {
    Bindings b = make_bindings(n, d);
    const ClosedFormBranch* br = select_branch(branches, b);
    if (!br) throw RegistryError("no closed-form branch applies at n=" + std::to_string(n) + ", d=" + std::to_string(d));
    ClosedFormValue out;
    out.branch = br;
    if (br->kind == ClosedFormKind::zero) {
        out.value = QProduct::zero();
        return out;
    }
    QProduct v;
    v.mul_constant(Rational(br->sign));
    for (const auto& f : br->factors) {
        std::int64_t base = detail::eval_integral(f.base, b, "closed-form base");
        std::int64_t step = detail::eval_integral(f.step, b, "closed-form step");
        std::int64_t len = detail::eval_integral(f.length, b, "closed-form length");
        if (len < 0) throw RegistryError("closed-form length '" + f.length.text() + "' is negative");
        v.mul_pochhammer(base, step, len, f.role == Role::numerator ? 1 : -1);
    }
    if (br->n_multiplier) v.mul_q_integer(n, 1);
    v.mul_q_power(detail::eval_integral(br->q_shift, b, "closed-form q-shift"));
    out.value = std::move(v);
    return out;
}

inline ClosedFormValue build_closed_form(const SymbolicCase& c, std::int64_t n, std::int64_t d) {
    return build_closed_form(c.closed_form, n, d);
}

/// Exponents of the cyclotomic factors of a non-parametric modulus:
/// [n] = prod_{e | n, e > 1} Phi_e.
inline std::map<std::int64_t, std::int64_t> modulus_exponents(const ModulusSpec& spec, std::int64_t n) {
    if (n < 2) throw std::invalid_argument("modulus requires n >= 2");
    std::map<std::int64_t, std::int64_t> out;
    for (const auto& f : spec.factors) {
        switch (f.kind) {
            case ModulusFactorKind::cyclotomic: out[n] += f.power; break;
            case ModulusFactorKind::q_integer:
                for (std::int64_t e : divisors(n))
                    if (e > 1) out[e] += 1;
                break;
            default: throw std::invalid_argument("parametric modulus factors have no univariate form");
        }
    }
    return out;
}

inline QPoly cyclotomic_product(const std::map<std::int64_t, std::int64_t>& exponents) {
    QPoly out(Rational(1));
    for (const auto& [e, k] : exponents)
        for (std::int64_t i = 0; i < k; ++i) out *= cyclotomic(e);
    return out;
}

inline QPoly build_modulus(const ModulusSpec& spec, std::int64_t n) {
    return cyclotomic_product(modulus_exponents(spec, n));
}

/// Collapses sign * prod (q^{a_i}; q^s)_inf / prod (q^{b_j}; q^s)_inf to a
/// finite product. Bases are paired in increasing order within each residue
/// class mod s; an unpaired numerator containing the factor (1 - q^0) makes
/// the value zero.
inline QProduct telescope_product(const ProductSpec& spec, std::int64_t n, std::int64_t d) {
    Bindings b = make_bindings(n, d);
    std::int64_t s = detail::eval_integral(spec.step, b, "product step");
    if (s < 1) throw RegistryError("product step must be positive");
    auto residue = [s](std::int64_t x) { return ((x % s) + s) % s; };
    std::map<std::int64_t, std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>>> classes;
    for (const auto& e : spec.num) {
        std::int64_t x = detail::eval_integral(e, b, "product base");
        classes[residue(x)].first.push_back(x);
    }
    for (const auto& e : spec.den) {
        std::int64_t x = detail::eval_integral(e, b, "product base");
        classes[residue(x)].second.push_back(x);
    }

    QProduct out;
    out.mul_constant(Rational(spec.sign));
    bool zero = false;
    for (auto& [r, lists] : classes) {
        auto& [num, den] = lists;
        std::sort(num.begin(), num.end());
        std::sort(den.begin(), den.end());
        if (num.size() != den.size()) {
            bool num_vanishes = r == 0 && !num.empty() && num.front() <= 0;
            bool den_vanishes = r == 0 && !den.empty() && den.front() <= 0;
            if (num.size() > den.size() && num_vanishes && !den_vanishes) {
                zero = true;
                continue;
            }
            throw RegistryError("infinite product does not telescope to a finite form");
        }
        for (std::size_t i = 0; i < num.size(); ++i) {
            std::int64_t a = num[i], c = den[i];
            // (q^a; q^s)_inf / (q^c; q^s)_inf
            if (a < c) {
                for (std::int64_t x = a; x < c; x += s) {
                    if (x == 0) {
                        zero = true;
                        continue;
                    }
                    out.mul_one_minus_q_power(x, 1);
                }
            } else {
                for (std::int64_t x = c; x < a; x += s) {
                    if (x == 0) throw RegistryError("infinite product has a vanishing denominator");
                    out.mul_one_minus_q_power(x, -1);
                }
            }
        }
    }
    return zero ? QProduct::zero() : out;
}

}  // namespace qsc
