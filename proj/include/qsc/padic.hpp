#pragma once

// Finite-precision p-adic arithmetic and the supercongruence checks built on it.

#include "qsc/rational.hpp"
#include "qsc/registry.hpp"
#include "qsc/result.hpp"

#include <gmp.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace qsc {

class PadicError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Work modulo p^m.
struct PadicContext {
    std::int64_t p = 3;
    std::int64_t m = 1;
    BigInt modulus{3};

    static PadicContext make(std::int64_t p, std::int64_t m) {
        if (p < 3 || !detail::is_prime(p)) throw PadicError("p-adic context needs an odd prime, got " + std::to_string(p));
        if (m < 1) throw PadicError("p-adic precision must be positive");
        PadicContext c;
        c.p = p;
        c.m = m;
        mpz_ui_pow_ui(c.modulus.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(m));
        return c;
    }

    friend bool operator==(const PadicContext& a, const PadicContext& b) { return a.p == b.p && a.m == b.m; }
};

/// An element of Z/p^m, value in [0, p^m).
struct PadicResidue {
    PadicContext context;
    BigInt value;

    friend bool operator==(const PadicResidue& a, const PadicResidue& b) {
        return a.context == b.context && a.value == b.value;
    }
};

/// v_p(r); nullopt stands for +infinity (r = 0).
inline std::optional<std::int64_t> padic_valuation(const Rational& r, std::int64_t p) {
    if (is_zero(r)) return std::nullopt;
    BigInt prime(static_cast<long>(p)), rest;
    auto v_num = mpz_remove(rest.get_mpz_t(), r.get_num_mpz_t(), prime.get_mpz_t());
    auto v_den = mpz_remove(rest.get_mpz_t(), r.get_den_mpz_t(), prime.get_mpz_t());
    return static_cast<std::int64_t>(v_num) - static_cast<std::int64_t>(v_den);
}

/// (x)_k = x (x+1) ... (x+k-1).
inline Rational rising_factorial(const Rational& x, std::int64_t k) {
    if (k < 0) throw std::invalid_argument("rising_factorial: negative length");
    Rational out(1);
    Rational y = x;
    for (std::int64_t i = 0; i < k; ++i, y += 1) out *= y;
    return out;
}

/// The residue of a p-integral rational modulo p^m.
inline BigInt padic_reduce(const Rational& x, const PadicContext& ctx) {
    BigInt den = x.get_den();
    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), ctx.modulus.get_mpz_t()) == 0)
        throw PadicError(x.get_str() + " is not " + std::to_string(ctx.p) + "-integral");
    BigInt out = (x.get_num() * inv) % ctx.modulus;
    if (out < 0) out += ctx.modulus;
    return out;
}

inline PadicResidue make_residue(const Rational& x, const PadicContext& ctx) { return {ctx, padic_reduce(x, ctx)}; }

/// Morita's Gamma_p at x modulo p^m, from the product formula at the integer
/// representative r of x: Gamma_p(r) = (-1)^r prod_{0<j<r, p does not divide j} j.
inline PadicResidue padic_gamma(const Rational& x, const PadicContext& ctx) {
    BigInt r = padic_reduce(x, ctx);
    BigInt value;
    if (ctx.modulus.fits_ulong_p() && ctx.modulus.get_ui() < (1UL << 32)) {
        const std::uint64_t mod = ctx.modulus.get_ui();
        const std::uint64_t n = r.get_ui();
        const std::uint64_t p = static_cast<std::uint64_t>(ctx.p);
        std::uint64_t acc = 1 % mod;
        for (std::uint64_t j = 1; j < n; ++j)
            if (j % p != 0) acc = acc * j % mod;
        value = BigInt(static_cast<unsigned long>(acc));
    } else {
        value = 1;
        for (BigInt j = 1; j < r; ++j) {
            if (mpz_divisible_ui_p(j.get_mpz_t(), static_cast<unsigned long>(ctx.p))) continue;
            value = value * j % ctx.modulus;
        }
    }
    if (mpz_odd_p(r.get_mpz_t())) value = (ctx.modulus - value) % ctx.modulus;
    return {ctx, value};
}

/// A p-adic quantity: either an exact rational or a rational known modulo p^precision.
struct PadicValue {
    Rational value;
    std::optional<std::int64_t> precision;  // nullopt: exact
};

namespace detail {

inline Bindings prime_bindings(std::int64_t p) { return Bindings{{"p", Rational(static_cast<long>(p))}}; }

inline std::int64_t eval_in_p(const Expr& e, std::int64_t p, const char* what) {
    Rational v = e.eval(prime_bindings(p));
    if (!is_integer(v)) throw RegistryError(std::string(what) + " '" + e.text() + "' is not an integer at p=" + std::to_string(p));
    return to_int64(v);
}

inline Rational classical_term(const ClassicalSummand& s, std::int64_t k) {
    Bindings b{{"k", Rational(static_cast<long>(k))}};
    Rational t = s.prefactor.eval(b);
    Rational ratio_power(1);
    for (std::int64_t i = 0; i < k; ++i) ratio_power *= s.ratio;
    t *= ratio_power;
    for (const auto& f : s.factors) {
        Rational r = rising_factorial(f.x, k);
        for (std::int64_t i = 0; i < f.power; ++i) {
            if (f.role == Role::numerator) {
                t *= r;
            } else {
                if (is_zero(r)) throw PadicError("vanishing Pochhammer symbol in a denominator");
                t /= r;
            }
        }
    }
    return t;
}

inline Rational p_power(std::int64_t p, std::int64_t e) {
    BigInt x;
    mpz_ui_pow_ui(x.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
    return e < 0 ? Rational(BigInt(1), x) : Rational(x);
}

}  // namespace detail

/// sum_{k=0}^{bound} of a classical summand, exactly.
inline Rational classical_partial_sum(const ClassicalSummand& s, std::int64_t bound) {
    Rational out(0);
    for (std::int64_t k = 0; k <= bound; ++k) out += detail::classical_term(s, k);
    return out;
}

/// Evaluates one side of a p-adic case. Gamma quotients are computed
/// modulo p^precision and then scaled by p^{p_power}.
inline PadicValue evaluate_padic_value(const PadicValueSpec& spec, std::int64_t p, std::int64_t precision) {
    PadicValue out;
    const Rational scale = detail::p_power(p, spec.p_power) * spec.sign;
    switch (spec.kind) {
        case PadicValueKind::zero: out.value = 0; break;
        case PadicValueKind::series: {
            std::int64_t bound = detail::eval_in_p(spec.bound, p, "series bound");
            out.value = classical_partial_sum(spec.summand, bound) * scale;
            break;
        }
        case PadicValueKind::pochhammer_ratio: {
            Rational v(1);
            for (const auto& f : spec.ratio) {
                Rational r = rising_factorial(f.x, detail::eval_in_p(f.length, p, "Pochhammer length"));
                if (f.role == Role::numerator) {
                    v *= r;
                } else {
                    if (is_zero(r)) throw PadicError("vanishing Pochhammer symbol in a denominator");
                    v /= r;
                }
            }
            out.value = v * scale;
            break;
        }
        case PadicValueKind::gamma_quotient: {
            auto ctx = PadicContext::make(p, precision);
            BigInt v(1);
            for (const auto& x : spec.gamma_num) v = v * padic_gamma(x, ctx).value % ctx.modulus;
            for (const auto& x : spec.gamma_den) {
                BigInt g = padic_gamma(x, ctx).value, inv;
                if (mpz_invert(inv.get_mpz_t(), g.get_mpz_t(), ctx.modulus.get_mpz_t()) == 0)
                    throw PadicError("Gamma_p value is not a unit");
                v = v * inv % ctx.modulus;
            }
            out.value = Rational(v) * scale;
            out.precision = precision + spec.p_power;
            break;
        }
    }
    return out;
}

/// The right-hand side branch applicable at p, or nullptr.
inline const PadicValueSpec* select_padic_branch(const PadicCase& c, std::int64_t p) {
    auto b = detail::prime_bindings(p);
    for (const auto& br : c.rhs)
        if (br.when.holds(b)) return &br;
    return nullptr;
}

/// Checks v_p(LHS - RHS) >= threshold for one prime.
inline CaseResult verify_padic_case(const CaseDefinition& c, std::int64_t p) {
    CaseResult r = make_result(c, std::nullopt, std::nullopt, p);
    r.strategy = "padic-exact";
    const auto& pc = c.padic();
    r.threshold = pc.threshold;
    if (auto why = c.condition.violated(detail::prime_bindings(p))) {
        r.strategy = "none";
        r.status = Status::skipped;
        r.detail = "condition not met: " + *why;
        return r;
    }
    const PadicValueSpec* branch = select_padic_branch(pc, p);
    if (!branch) throw RegistryError("case '" + c.id + "': no right-hand side branch applies at p=" + std::to_string(p));

    const std::int64_t precision = pc.threshold;
    PadicValue lhs = evaluate_padic_value(pc.lhs, p, precision);
    PadicValue rhs = evaluate_padic_value(*branch, p, precision);
    std::optional<std::int64_t> known;
    for (const auto& v : {lhs, rhs})
        if (v.precision) known = known ? std::min(*known, *v.precision) : *v.precision;

    Rational diff = lhs.value - rhs.value;
    auto v = padic_valuation(diff, p);
    if (!v && !known) {
        r.valuation_kind = ValuationKind::infinite;
    } else if (!v || (known && *v >= *known)) {
        r.valuation_kind = ValuationKind::at_least;
        r.valuation = *known;
    } else {
        r.valuation_kind = ValuationKind::exact;
        r.valuation = *v;
    }
    bool ok = r.valuation_kind != ValuationKind::exact || r.valuation >= pc.threshold;
    r.status = ok ? Status::pass : Status::fail;
    std::string lhs_text = lhs.precision ? "residue " + lhs.value.get_str() : lhs.value.get_str();
    std::string rhs_text = rhs.precision ? "residue " + rhs.value.get_str() : rhs.value.get_str();
    r.detail = "LHS = " + lhs_text + ", RHS = " + rhs_text + ", v_" + std::to_string(p) + "(LHS - RHS) " +
               (r.valuation_kind == ValuationKind::infinite
                    ? std::string("= infinity")
                    : (r.valuation_kind == ValuationKind::at_least ? ">= " : "= ") + std::to_string(r.valuation));
    if (!ok) r.witness = diff.get_str();
    return r;
}

}  // namespace qsc
