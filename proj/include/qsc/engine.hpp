#pragma once

// Exact verification of q-congruences.
//
// Sums are evaluated separately modulo each prime power Phi_d^e of the
// modulus (these are pairwise coprime). Terms are kept in factored form, so a
// term is its Phi_d-adic valuation times a unit whose residue is updated one
// factor at a time as k advances. When some term or the right-hand side has a
// pole at Phi_d of order P, everything is multiplied by Phi_d^P and computed
// modulo Phi_d^{e+P}: the congruence is well posed exactly when the result is
// divisible by Phi_d^P.

#include "qsc/cyclotomic.hpp"
#include "qsc/qobjects.hpp"
#include "qsc/qproduct.hpp"
#include "qsc/registry.hpp"
#include "qsc/residue.hpp"
#include "qsc/result.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace qsc {

/// Arithmetic in Q[q]/(Phi_d^e) with cached factor residues.
class CyclotomicReducer {
public:
    CyclotomicReducer(std::int64_t d, std::int64_t exponent) : d_(d), exponent_(exponent) {
        if (d < 2) throw std::invalid_argument("CyclotomicReducer requires d >= 2");
        if (exponent < 1) throw std::invalid_argument("CyclotomicReducer requires a positive exponent");
        QPoly m(Rational(1));
        for (std::int64_t i = 0; i < exponent; ++i) m *= cyclotomic(d);
        ring_ = QuotientRing<Rational>::make(std::move(m));
        phi_powers_.push_back(ring_->reduce(QPoly(Rational(1))));
    }

    std::int64_t d() const { return d_; }
    std::int64_t exponent() const { return exponent_; }
    const QuotientRing<Rational>& ring() const { return *ring_; }
    const QPoly& modulus() const { return ring_->modulus(); }

    QPoly mul(const QPoly& x, const QPoly& y) const { return ring_->mul(x, y); }

    /// Phi_d^j reduced; zero once j reaches the exponent.
    QPoly phi_power(std::int64_t j) {
        if (j < 0) throw std::invalid_argument("negative cyclotomic power");
        if (j >= exponent_) return QPoly();
        while (static_cast<std::int64_t>(phi_powers_.size()) <= j)
            phi_powers_.push_back(ring_->mul(phi_powers_.back(), cyclotomic(d_)));
        return phi_powers_[static_cast<std::size_t>(j)];
    }

    const QPoly& q_power(std::int64_t e) {
        auto it = q_powers_.find(e);
        if (it == q_powers_.end()) it = q_powers_.emplace(e, ring_->q_power(e)).first;
        return it->second;
    }

    /// Residue of ((1 - q^c) / Phi_d^{[d | c]})^mult, a unit of the ring.
    const QPoly& unit_power(std::int64_t c, std::int64_t mult) {
        if (c == 0) throw std::invalid_argument("unit_power: (1 - q^0) is not a unit");
        auto key = std::make_pair(c, mult);
        auto it = unit_powers_.find(key);
        if (it != unit_powers_.end()) return it->second;
        QPoly value;
        if (c < 0) {
            // 1 - q^c = -q^c (1 - q^-c)
            value = ring_->mul(unit_power(-c, mult), q_power(c * mult));
            if (mult % 2 != 0) value = -value;
        } else if (mult >= 0) {
            value = ring_->pow(base_unit(c), mult);
        } else {
            value = ring_->pow(inverse_unit(c), -mult);
        }
        return unit_powers_.emplace(key, std::move(value)).first->second;
    }

    /// Residue of p * Phi_d^shift; requires valuation_d(p) + shift >= 0.
    QPoly value(const QProduct& p, std::int64_t shift) {
        if (p.is_zero()) return QPoly();
        std::int64_t v = p.valuation(d_) + shift;
        if (v < 0) throw std::invalid_argument("CyclotomicReducer::value: pole not cleared");
        if (v >= exponent_) return QPoly();
        QPoly out = ring_->mul(q_power(p.q_exponent()), phi_power(v));
        out *= p.coefficient();
        for (const auto& [c, m] : p.factors()) out = ring_->mul(out, unit_power(c, m));
        return out;
    }

    /// Largest j <= exponent with Phi_d^j dividing the residue x.
    std::int64_t valuation(QPoly x) const {
        std::int64_t v = 0;
        while (v < exponent_ && !x.is_zero()) {
            auto [quo, rem] = poly_divrem(x, cyclotomic(d_));
            if (!rem.is_zero()) break;
            x = std::move(quo);
            ++v;
        }
        return x.is_zero() ? exponent_ : v;
    }

private:
    std::int64_t d_;
    std::int64_t exponent_;
    std::shared_ptr<const QuotientRing<Rational>> ring_;
    std::vector<QPoly> phi_powers_;
    std::map<std::int64_t, QPoly> q_powers_;
    std::map<std::int64_t, QPoly> units_;
    std::map<std::int64_t, QPoly> inverses_;
    std::map<std::pair<std::int64_t, std::int64_t>, QPoly> unit_powers_;

    const QPoly& base_unit(std::int64_t c) {
        auto it = units_.find(c);
        if (it != units_.end()) return it->second;
        QPoly u = QPoly::one_minus_q_power(c);
        if (c % d_ == 0) u = exact_div(u, cyclotomic(d_));
        return units_.emplace(c, ring_->reduce(u)).first->second;
    }

    const QPoly& inverse_unit(std::int64_t c) {
        auto it = inverses_.find(c);
        if (it != inverses_.end()) return it->second;
        return inverses_.emplace(c, ring_->inverse(base_unit(c))).first->second;
    }
};

/// sign * sum_{k=0}^{bound} of a compiled summand.
struct SumPiece {
    CompiledSummand summand;
    std::int64_t bound = 0;
    int sign = 1;
};

/// sign * an explicit product.
struct ConstantPiece {
    QProduct value;
    int sign = 1;
};

/// Verdict of X = sum of pieces == 0 modulo prod_d Phi_d^{mu_d}.
struct CongruenceOutcome {
    Status status = Status::pass;
    QPoly witness;  // X reduced modulo M when the verdict is fail
    std::string detail;
    std::map<std::int64_t, std::int64_t> pole_orders;  // d -> P_d > 0 only
    std::map<std::int64_t, std::int64_t> achieved;     // d -> Phi_d-adic valuation of X, capped at mu_d
};

namespace detail {

inline std::int64_t prefactor_valuation(std::int64_t a, std::int64_t d) { return a % d == 0 ? 1 : 0; }

/// Minimum Phi_d-adic valuation of any nonzero term of the piece.
inline void collect_poles(const SumPiece& piece, std::map<std::int64_t, std::int64_t>& poles) {
    TermWalker w(piece.summand);
    for (std::int64_t k = 0; k <= piece.bound; ++k) {
        if (w.exhausted()) break;
        if (!w.vanishes()) {
            std::int64_t a = w.prefactor_argument();
            for (auto& [d, p] : poles) {
                std::int64_t v = w.pochhammers().valuation(d) + prefactor_valuation(a, d);
                p = std::max(p, -v);
            }
        }
        if (k < piece.bound) w.advance();
    }
}

/// Adds the piece's contribution, multiplied by Phi_d^pole, to acc.
inline void accumulate_piece(const SumPiece& piece, CyclotomicReducer& red, std::int64_t pole, QPoly& acc) {
    const std::int64_t d = red.d();
    TermWalker w(piece.summand);
    QPoly unit = red.ring().reduce(QPoly(Rational(piece.sign)));
    std::int64_t v = 0;
    for (std::int64_t k = 0; k <= piece.bound; ++k) {
        if (w.exhausted()) break;
        if (!w.vanishes()) {
            std::int64_t a = w.prefactor_argument();
            std::int64_t j = v + prefactor_valuation(a, d) + pole;
            if (j < red.exponent()) {
                QPoly t = red.mul(unit, red.unit_power(a, 1));
                t = red.mul(t, red.unit_power(1, -1));
                t = red.mul(t, red.q_power(w.summand_q_exponent()));
                t = red.mul(t, red.phi_power(j));
                acc += t;
            }
        }
        if (k == piece.bound) break;
        for (const auto& [c, m] : w.advance()) {
            unit = red.mul(unit, red.unit_power(c, m));
            if (c % d == 0) v += m;
        }
    }
}

inline QPoly crt_combine(const std::vector<std::pair<QPoly, QPoly>>& parts) {
    QPoly modulus(Rational(1));
    for (const auto& [r, m] : parts) modulus *= m;
    QPoly out;
    for (const auto& [r, m] : parts) {
        if (r.is_zero()) continue;
        QPoly cofactor = exact_div(modulus, m);
        auto inv = inverse_mod(poly_rem(cofactor, m), m);
        if (!inv) throw std::logic_error("crt_combine: moduli are not coprime");
        out += poly_rem(r * *inv, m) * cofactor;
    }
    return out.is_zero() ? out : poly_rem(out, modulus.monic());
}

}  // namespace detail

inline CongruenceOutcome evaluate_congruence(const std::vector<SumPiece>& sums,
                                             const std::vector<ConstantPiece>& constants,
                                             const std::map<std::int64_t, std::int64_t>& modulus) {
    CongruenceOutcome out;
    std::map<std::int64_t, std::int64_t> poles;
    for (const auto& [d, mu] : modulus) poles[d] = 0;
    for (const auto& s : sums) detail::collect_poles(s, poles);
    for (const auto& c : constants)
        if (!c.value.is_zero())
            for (auto& [d, p] : poles) p = std::max(p, -c.value.valuation(d));

    std::vector<std::pair<QPoly, QPoly>> witness_parts;
    std::string obstructed;
    bool nonzero = false;
    for (const auto& [d, mu] : modulus) {
        const std::int64_t pole = poles[d];
        if (pole > 0) out.pole_orders[d] = pole;
        CyclotomicReducer red(d, mu + pole);
        QPoly acc;
        for (const auto& s : sums) detail::accumulate_piece(s, red, pole, acc);
        for (const auto& c : constants) {
            QPoly v = red.value(c.value, pole);
            if (c.sign < 0) v = -v;
            acc += v;
        }
        std::int64_t val = red.valuation(acc);
        if (val < pole) {
            if (!obstructed.empty()) obstructed += ", ";
            obstructed += "Phi_" + std::to_string(d) + " (pole order " + std::to_string(pole - val) + ")";
            continue;
        }
        out.achieved[d] = std::min(val - pole, mu);
        QPoly phi_mu(Rational(1));
        for (std::int64_t i = 0; i < mu; ++i) phi_mu *= cyclotomic(d);
        QPoly reduced = acc;
        for (std::int64_t i = 0; i < pole; ++i) reduced = exact_div(reduced, cyclotomic(d));
        reduced = reduced.is_zero() ? reduced : poly_rem(reduced, phi_mu);
        nonzero = nonzero || !reduced.is_zero();
        witness_parts.emplace_back(std::move(reduced), std::move(phi_mu));
    }
    if (!obstructed.empty()) {
        out.status = Status::obstruction;
        out.detail = "difference has a pole at " + obstructed;
        return out;
    }
    if (nonzero) {
        out.status = Status::fail;
        out.witness = detail::crt_combine(witness_parts);
        out.detail = "nonzero remainder of degree " + std::to_string(out.witness.degree());
    }
    return out;
}

inline std::int64_t evaluate_bound(const Expr& bound, std::int64_t n, std::int64_t d) {
    return detail::eval_integral(bound, make_bindings(n, d), "summation bound");
}

namespace detail {

inline void fill_from_outcome(CaseResult& r, const CongruenceOutcome& out, std::int64_t n) {
    r.status = out.status;
    r.detail = out.detail;
    if (out.status == Status::fail) r.witness = out.witness.to_string();
    auto it = out.achieved.find(n);
    if (it != out.achieved.end()) {
        r.valuation = it->second;
        r.valuation_kind = out.status == Status::pass ? ValuationKind::at_least : ValuationKind::exact;
    }
    for (const auto& [d, p] : out.pole_orders)
        r.notes.push_back("terms have poles of order " + std::to_string(p) + " at Phi_" + std::to_string(d) +
                          "; cleared before reduction");
}

}  // namespace detail

/// Sum versus closed form modulo a univariate modulus.
inline CaseResult verify_congruence(const CaseDefinition& c, std::int64_t n, std::optional<std::int64_t> d = std::nullopt) {
    CaseResult r = make_result(c, n, d);
    r.strategy = "residue-ring";
    const auto& sym = c.symbolic();
    const std::int64_t dv = d.value_or(0);
    try {
        SumPiece piece{CompiledSummand(sym.summand, n, dv), evaluate_bound(sym.bound, n, dv), 1};
        ClosedFormValue rhs = build_closed_form(sym, n, dv);
        if (!rhs.branch->note.empty()) r.notes.push_back(rhs.branch->note);
        auto out = evaluate_congruence({piece}, {{rhs.value, -1}}, modulus_exponents(sym.modulus, n));
        detail::fill_from_outcome(r, out, n);
    } catch (const PoleError& e) {
        r.status = Status::obstruction;
        r.detail = e.what();
    }
    return r;
}

/// Difference of two registered sums modulo the given modulus.
inline CaseResult verify_conjecture_pair(const CaseDefinition& a, const CaseDefinition& b, std::int64_t n,
                                         const ModulusSpec& modulus, std::optional<std::int64_t> d = std::nullopt) {
    CaseResult r;
    r.id = a.id + "-" + b.id;
    r.kind = StatementKind::conjecture;
    r.observe = true;
    r.n = n;
    r.d = d;
    r.strategy = "residue-ring-pair";
    const std::int64_t dv = d.value_or(0);
    try {
        const auto& sa = a.symbolic();
        const auto& sb = b.symbolic();
        std::vector<SumPiece> pieces{{CompiledSummand(sa.summand, n, dv), evaluate_bound(sa.bound, n, dv), 1},
                                     {CompiledSummand(sb.summand, n, dv), evaluate_bound(sb.bound, n, dv), -1}};
        auto out = evaluate_congruence(pieces, {}, modulus_exponents(modulus, n));
        detail::fill_from_outcome(r, out, n);
    } catch (const PoleError& e) {
        r.status = Status::obstruction;
        r.detail = e.what();
    }
    return r;
}

enum class Specialization { a_equals_q_n, a_equals_q_minus_n };

inline std::string_view to_string(Specialization s) {
    return s == Specialization::a_equals_q_n ? "a=q^n" : "a=q^-n";
}

/// Outcome of an exact identity between rational functions.
struct IdentityCheck {
    Status status = Status::pass;
    QFunction difference;  // sum - right-hand side, reduced; zero on pass
    std::string detail;
    std::vector<std::string> notes;
};

/// Exact sum of signed q-products as one reduced rational function.
inline QFunction exact_sum(const std::vector<std::pair<QProduct, int>>& terms) {
    std::vector<CyclotomicForm> forms;
    std::map<std::int64_t, std::int64_t> clear;
    for (const auto& [t, sign] : terms) {
        if (t.is_zero()) continue;
        CyclotomicForm f = t.cyclotomic_form();
        if (sign < 0) f.coefficient = -f.coefficient;
        for (const auto& [d, e] : f.phi)
            if (e < 0) clear[d] = std::max(clear[d], -e);
        forms.push_back(std::move(f));
    }
    QPoly num;
    for (const auto& f : forms) {
        QPoly t = QPoly::monomial(f.coefficient, f.q_exponent);
        std::map<std::int64_t, std::int64_t> exps = clear;
        for (const auto& [d, e] : f.phi) exps[d] += e;
        for (const auto& [d, e] : exps)
            for (std::int64_t i = 0; i < e; ++i) t *= cyclotomic(d);
        num += t;
    }
    if (num.is_zero()) return QFunction();
    return QFunction(num, cyclotomic_product(clear));
}

namespace detail {

/// Terms of the specialised sum; throws PoleError on an undefined term.
inline std::vector<QProduct> specialized_terms(const CompiledSummand& s, std::int64_t bound) {
    std::vector<QProduct> out;
    TermWalker w(s);
    for (std::int64_t k = 0; k <= bound; ++k) {
        if (w.exhausted()) break;
        if (!w.vanishes()) out.push_back(w.term());
        if (k < bound) w.advance();
    }
    return out;
}

}  // namespace detail

/// Exact check of the terminating identity obtained from a = q^{+-n}.
inline IdentityCheck verify_identity_specialized(const CaseDefinition& c, std::int64_t n, std::int64_t d,
                                                 Specialization which) {
    IdentityCheck out;
    const auto& sym = c.symbolic();
    CompiledSummand s(sym.summand, n, d);
    std::int64_t bound = evaluate_bound(sym.bound, n, d);
    std::int64_t e = which == Specialization::a_equals_q_n ? n : -n;
    ClosedFormValue rhs = build_closed_form(sym, n, d);

    std::vector<QProduct> terms;
    try {
        terms = detail::specialized_terms(s.specialized(e), bound);
    } catch (const PoleError& err) {
        out.status = Status::obstruction;
        out.detail = std::string(to_string(which)) + ": " + err.what();
        return out;
    }
    std::vector<std::pair<QProduct, int>> signed_terms;
    for (const auto& t : terms) signed_terms.emplace_back(t, 1);
    QFunction sum = exact_sum(signed_terms);
    signed_terms.emplace_back(rhs.value, -1);
    out.difference = exact_sum(signed_terms);
    if (!out.difference.is_zero()) {
        out.status = Status::fail;
        out.detail = std::string(to_string(which)) + ": terminating sum differs from the closed form";
    }

    if (sym.specialized_product) {
        try {
            QProduct product = telescope_product(*sym.specialized_product, n, d);
            bool agrees = exact_sum({{product, 1}}) == sum;
            out.notes.push_back(std::string(to_string(which)) + ": terminating sum " +
                                (agrees ? "equals" : "differs from") + " the telescoped infinite product");
        } catch (const RegistryError& err) {
            out.notes.push_back(std::string(to_string(which)) + ": " + err.what());
        }
    }
    return out;
}

namespace detail {

/// A Laurent polynomial in a with coefficients in Q[q]/(Phi_n^e).
using APoly = std::map<std::int64_t, QPoly>;

/// p *= (1 - a^s q^c)^mult for mult >= 0.
inline void mul_binomial(APoly& p, std::int64_t s, std::int64_t c, std::int64_t mult, CyclotomicReducer& red) {
    for (std::int64_t i = 0; i < mult; ++i) {
        APoly next = p;
        for (const auto& [j, x] : p) {
            QPoly& slot = next[j + s];
            slot -= red.mul(x, red.q_power(c));
            if (slot.is_zero()) next.erase(j + s);
        }
        p = std::move(next);
    }
}

struct Binomial {
    std::int64_t a_power;  // +1 for a q^c, -1 for q^c / a
    std::int64_t c;
    friend auto operator<=>(const Binomial&, const Binomial&) = default;
};

}  // namespace detail

/// The parametric sum is congruent to the closed form modulo Phi_n^power over Q(a).
///
/// All a-dependent denominators are cleared by their common multiple Den, a
/// unit modulo Phi_n over Q(a); the cleared difference is a Laurent
/// polynomial in a whose coefficients must all vanish modulo Phi_n^power.
inline LegResult cyclotomic_leg(const CompiledSummand& s, std::int64_t bound, const QProduct& rhs, std::int64_t n,
                                std::int64_t power) {
    LegResult leg;
    leg.name = "Phi_n" + (power == 1 ? std::string() : "^" + std::to_string(power));
    CompiledSummand plain = s.without_parameter();

    std::vector<CompiledFactor> params;
    for (const auto& f : s.factors())
        if (f.param != ParamKind::none) params.push_back(f);
    auto binomials_before = [&](std::int64_t k, bool numerator) {
        std::map<detail::Binomial, std::int64_t> out;
        for (const auto& f : params) {
            if ((f.power > 0) != numerator) continue;
            std::int64_t s_a = f.param == ParamKind::a ? 1 : -1;
            for (std::int64_t j = 0; j < k; ++j) out[{s_a, f.base + j * f.step}] += f.power > 0 ? f.power : -f.power;
        }
        return out;
    };
    const auto den_all = binomials_before(std::max<std::int64_t>(bound, 0), false);

    std::map<std::int64_t, std::int64_t> poles{{n, 0}};
    detail::collect_poles({plain, bound, 1}, poles);
    if (!rhs.is_zero()) poles[n] = std::max(poles[n], -rhs.valuation(n));
    const std::int64_t pole = poles[n];

    CyclotomicReducer red(n, power + pole);
    const QPoly one = red.ring().reduce(QPoly(Rational(1)));
    detail::APoly acc;
    auto add_scaled = [&](const QPoly& t, const detail::APoly& a, int sign) {
        for (const auto& [j, x] : a) {
            QPoly v = red.mul(t, x);
            QPoly& slot = acc[j];
            if (sign > 0) {
                slot += v;
            } else {
                slot -= v;
            }
        }
    };

    TermWalker w(plain);
    QPoly unit = one;
    std::int64_t v = 0;
    for (std::int64_t k = 0; k <= bound; ++k) {
        if (w.exhausted()) break;
        if (!w.vanishes()) {
            std::int64_t a = w.prefactor_argument();
            std::int64_t j = v + detail::prefactor_valuation(a, n) + pole;
            if (j < red.exponent()) {
                QPoly t = red.mul(unit, red.unit_power(a, 1));
                t = red.mul(t, red.unit_power(1, -1));
                t = red.mul(t, red.q_power(w.summand_q_exponent()));
                t = red.mul(t, red.phi_power(j));
                detail::APoly ap{{0, one}};
                for (const auto& [b, m] : binomials_before(k, true)) detail::mul_binomial(ap, b.a_power, b.c, m, red);
                auto den_k = binomials_before(k, false);
                for (const auto& [b, m] : den_all) {
                    auto it = den_k.find(b);
                    detail::mul_binomial(ap, b.a_power, b.c, m - (it == den_k.end() ? 0 : it->second), red);
                }
                add_scaled(t, ap, 1);
            }
        }
        if (k == bound) break;
        for (const auto& [c, m] : w.advance()) {
            unit = red.mul(unit, red.unit_power(c, m));
            if (c % n == 0) v += m;
        }
    }
    if (!rhs.is_zero()) {
        detail::APoly den{{0, one}};
        for (const auto& [b, m] : den_all) detail::mul_binomial(den, b.a_power, b.c, m, red);
        add_scaled(red.value(rhs, pole), den, -1);
    }

    std::string witness;
    for (const auto& [j, x] : acc) {
        if (x.is_zero()) continue;
        if (red.valuation(x) < pole) {
            leg.status = Status::obstruction;
            leg.detail = "difference has a pole at Phi_n";
            return leg;
        }
        QPoly reduced = x;
        for (std::int64_t i = 0; i < pole; ++i) reduced = exact_div(reduced, cyclotomic(n));
        if (!witness.empty()) witness += " + ";
        witness += "a^" + std::to_string(j) + "*(" + reduced.to_string() + ")";
    }
    if (!witness.empty()) {
        leg.status = Status::fail;
        leg.witness = witness;
        leg.detail = "cleared difference is nonzero modulo Phi_n";
    }
    if (pole > 0) leg.detail += (leg.detail.empty() ? "" : "; ") + std::string("poles of order ") +
                                std::to_string(pole) + " cleared";
    return leg;
}

/// Chinese-remainder decomposition of a parametric modulus: the factors
/// a - q^n, 1 - a q^n and Phi_n are pairwise coprime and checked separately.
inline CaseResult verify_parametric(const CaseDefinition& c, std::int64_t n, std::optional<std::int64_t> d = std::nullopt) {
    CaseResult r = make_result(c, n, d);
    r.strategy = "parametric-crt";
    const auto& sym = c.symbolic();
    const std::int64_t dv = d.value_or(0);
    std::int64_t cyclotomic_power = 0;
    bool leg_q_n = false, leg_q_minus_n = false;
    for (const auto& f : sym.modulus.factors) {
        switch (f.kind) {
            case ModulusFactorKind::cyclotomic: cyclotomic_power += f.power; break;
            case ModulusFactorKind::a_minus_qn: leg_q_n = true; break;
            case ModulusFactorKind::one_minus_a_qn: leg_q_minus_n = true; break;
            case ModulusFactorKind::q_integer: throw RegistryError("case '" + c.id + "': [n] in a parametric modulus");
        }
    }
    ClosedFormValue rhs = build_closed_form(sym, n, dv);
    if (!rhs.branch->note.empty()) r.notes.push_back(rhs.branch->note);

    auto specialized_leg = [&](Specialization which) {
        IdentityCheck chk = verify_identity_specialized(c, n, dv, which);
        LegResult leg;
        leg.name = std::string(to_string(which));
        leg.status = chk.status;
        leg.detail = chk.detail;
        if (chk.status == Status::fail) leg.witness = chk.difference.to_string();
        for (auto& note : chk.notes) r.notes.push_back(std::move(note));
        return leg;
    };
    if (leg_q_n) r.legs.push_back(specialized_leg(Specialization::a_equals_q_n));
    if (leg_q_minus_n) r.legs.push_back(specialized_leg(Specialization::a_equals_q_minus_n));
    if (cyclotomic_power > 0) {
        try {
            CompiledSummand s(sym.summand, n, dv);
            r.legs.push_back(cyclotomic_leg(s, evaluate_bound(sym.bound, n, dv), rhs.value, n, cyclotomic_power));
        } catch (const PoleError& e) {
            r.legs.push_back({"Phi_n", Status::obstruction, "", e.what()});
        }
    }
    r.status = Status::pass;
    for (const auto& leg : r.legs) {
        r.status = combine(r.status, leg.status);
        if (leg.status != Status::pass) {
            if (!r.detail.empty()) r.detail += "; ";
            r.detail += "leg " + leg.name + ": " + std::string(to_string(leg.status));
        }
    }
    return r;
}

/// Runs a symbolic case at (n, d), honouring its applicability condition.
inline CaseResult verify_symbolic(const Registry& reg, const CaseDefinition& c, std::int64_t n,
                                  std::optional<std::int64_t> d = std::nullopt) {
    Bindings b = make_bindings(n, d.value_or(0));
    if (auto why = c.condition.violated(b)) {
        CaseResult r = make_result(c, n, d);
        r.strategy = "none";
        r.status = Status::skipped;
        r.detail = "condition not met: " + *why;
        return r;
    }
    const auto& sym = c.symbolic();
    switch (sym.method) {
        case Method::congruence: return verify_congruence(c, n, d);
        case Method::parametric: return verify_parametric(c, n, d);
        case Method::pair: {
            CaseResult r = verify_conjecture_pair(reg.at(sym.pair_lhs), reg.at(sym.pair_rhs), n, sym.modulus, d);
            CaseResult out = make_result(c, n, d);
            out.strategy = r.strategy;
            out.status = r.status;
            out.witness = std::move(r.witness);
            out.detail = std::move(r.detail);
            out.valuation = r.valuation;
            out.valuation_kind = r.valuation_kind;
            for (auto& note : r.notes) out.notes.push_back(std::move(note));
            return out;
        }
    }
    throw std::logic_error("unhandled method");
}

}  // namespace qsc
