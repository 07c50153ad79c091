#pragma once

// Double-precision checks of the infinite q-series identities, the
// pi-formulas and the q-Gamma limit.

#include "qsc/registry.hpp"
#include "qsc/result.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace qsc {

class AnalyticError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Tail policy: stop once |term| < tol * |partial sum| for 3 consecutive terms.
struct SeriesPolicy {
    double tol = std::numeric_limits<double>::epsilon() / 8;
    std::int64_t n_max = 400;
};

struct SeriesValue {
    double value = 0;
    std::int64_t terms = 0;
    bool converged = false;
};

inline std::string format_double(double x, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*e", digits, x);
    return buf;
}

/// prod_{j>=0} (1 - x q^{c + j s}); stops when |x q^{c+js}| < tol.
inline double scaled_q_product_infinite(double x, double c, double s, double q, double tol = 1e-17) {
    if (!(std::fabs(q) < 1)) throw AnalyticError("infinite q-product needs |q| < 1");
    if (!(s > 0)) throw AnalyticError("infinite q-product needs a positive step");
    if (!(tol > 0)) throw AnalyticError("tolerance must be positive");
    double out = 1;
    for (std::int64_t j = 0;; ++j) {
        double e = c + static_cast<double>(j) * s;
        double t = x * std::pow(q, e);
        if (e > 0 && std::fabs(t) < tol) break;
        out *= 1 - t;
        if (j > 10'000'000) throw AnalyticError("infinite q-product did not converge");
    }
    return out;
}

inline double q_product_infinite(double c, double s, double q, double tol = 1e-17) {
    return scaled_q_product_infinite(1.0, c, s, q, tol);
}

/// log prod_{j>=0} (1 - q^{c + j s}) for 0 < q < 1 and c > 0, where every factor is positive.
inline double log_q_product_infinite(double c, double s, double q, double tol = 1e-17) {
    if (!(q > 0 && q < 1)) throw AnalyticError("logarithmic q-product needs 0 < q < 1");
    if (!(c > 0 && s > 0)) throw AnalyticError("logarithmic q-product needs positive exponents");
    double out = 0;
    for (std::int64_t j = 0;; ++j) {
        double t = std::pow(q, c + static_cast<double>(j) * s);
        if (t < tol) break;
        out += std::log1p(-t);
    }
    return out;
}

/// (x; q)_k for real x and q.
inline double q_pochhammer(double x, double q, std::int64_t k) {
    double out = 1, t = x;
    for (std::int64_t j = 0; j < k; ++j, t *= q) out *= 1 - t;
    return out;
}

/// Sums term(0) + term(1) + ... under the tail policy.
inline SeriesValue sum_series(const std::function<double(std::int64_t)>& term, const SeriesPolicy& policy) {
    if (policy.n_max < 50) throw AnalyticError("series cap must be at least 50");
    SeriesValue out;
    int small = 0;
    for (std::int64_t k = 0; k < policy.n_max; ++k) {
        double t = term(k);
        if (!std::isfinite(t)) throw AnalyticError("series term " + std::to_string(k) + " is not finite");
        out.value += t;
        out.terms = k + 1;
        small = std::fabs(t) < policy.tol * std::fabs(out.value) ? small + 1 : 0;
        if (small == 3) {
            out.converged = true;
            break;
        }
    }
    return out;
}

inline double relative_residual(double lhs, double rhs) { return std::fabs(lhs - rhs) / std::max(1.0, std::fabs(rhs)); }

// ---------------------------------------------------------------------------
// Registry-driven q-series identities

namespace detail {

struct NumericFactor {
    double base, step, power;
    bool numerator;
};

inline double eval_plain(const Expr& e) { return e.eval_double(); }

}  // namespace detail

/// The k-th summand [m k + r]_q * prod (q^base; q^step)_k^{+-power} * q^{e(k)} at real q.
class NumericSummand {
public:
    NumericSummand(const SummandSpec& s, double q) : spec_(&s), q_(q) {
        if (!(std::fabs(q) < 1) || q == 0) throw AnalyticError("q-series needs 0 < |q| < 1");
        if (s.parametric()) throw AnalyticError("numeric summands take no free parameter");
        m_ = detail::eval_plain(s.prefactor_m);
        r_ = detail::eval_plain(s.prefactor_r);
        for (const auto& f : s.factors)
            factors_.push_back({detail::eval_plain(f.base), detail::eval_plain(f.step), detail::eval_plain(f.power),
                                f.role == Role::numerator});
    }

    double operator()(std::int64_t k) const {
        const double kk = static_cast<double>(k);
        double t = (1 - std::pow(q_, m_ * kk + r_)) / (1 - q_);
        for (const auto& f : factors_) {
            double p = 1;
            for (std::int64_t j = 0; j < k; ++j) p *= 1 - std::pow(q_, f.base + static_cast<double>(j) * f.step);
            double v = std::pow(p, f.power);
            if (f.numerator) {
                t *= v;
            } else {
                if (v == 0) throw AnalyticError("vanishing denominator in a q-series term");
                t /= v;
            }
        }
        return t * std::pow(q_, spec_->q_exponent.eval_double({{"k", kk}}));
    }

private:
    const SummandSpec* spec_;
    double q_;
    double m_ = 0, r_ = 0;
    std::vector<detail::NumericFactor> factors_;
};

inline double evaluate_product(const ProductSpec& p, double q) {
    const double step = detail::eval_plain(p.step);
    double out = p.sign;
    for (const auto& c : p.num) out *= q_product_infinite(detail::eval_plain(c), step, q);
    for (const auto& c : p.den) {
        double v = q_product_infinite(detail::eval_plain(c), step, q);
        if (v == 0) throw AnalyticError("vanishing infinite product in a denominator");
        out /= v;
    }
    return out;
}

struct NumericCheck {
    double lhs = 0;
    double rhs = 0;
    double residual = 0;
    std::int64_t terms = 0;
    bool pass = false;
};

inline NumericCheck check_q_identity(const AnalyticCase& c, double q, double tol, const SeriesPolicy& policy = {}) {
    NumericSummand term(c.summand, q);
    auto s = sum_series(term, policy);
    if (!s.converged) throw AnalyticError("q-series did not converge within " + std::to_string(policy.n_max) + " terms");
    NumericCheck out;
    out.lhs = s.value;
    out.terms = s.terms;
    out.rhs = evaluate_product(c.product, q);
    out.residual = relative_residual(out.lhs, out.rhs);
    out.pass = out.residual < tol;
    return out;
}

// ---------------------------------------------------------------------------
// Rahman's quadratic summation

struct RahmanParams {
    double a = 0, b = 0, d = 0;
};

/// sum_k (1 - a q^{3k})/(1 - a) (a;q^2)_k (qa/bd;q)_k (b;q)_k (d;q)_k
///       / ((q;q)_k (qbd;q^2)_k (aq^2/b;q^2)_k (aq^2/d;q^2)_k) q^{(k^2+k)/2}
inline double rahman_lhs(double q, const RahmanParams& x, const SeriesPolicy& policy = {}) {
    const double a = x.a, b = x.b, d = x.d, q2 = q * q;
    if (a == 1 || b == 0 || d == 0) throw AnalyticError("ill-posed Rahman parameters");
    // build each term from the previous one
    double t = 1;
    auto term = [&](std::int64_t k) {
        if (k > 0) {
            const double j = static_cast<double>(k - 1);
            double num = (1 - a * std::pow(q2, j)) * (1 - q * a / (b * d) * std::pow(q, j)) * (1 - b * std::pow(q, j)) *
                         (1 - d * std::pow(q, j));
            double den = (1 - std::pow(q, j + 1)) * (1 - q * b * d * std::pow(q2, j)) *
                         (1 - a * q2 / b * std::pow(q2, j)) * (1 - a * q2 / d * std::pow(q2, j));
            if (den == 0) throw AnalyticError("vanishing denominator in Rahman's series");
            t *= num / den * std::pow(q, static_cast<double>(k));
        }
        return t * (1 - a * std::pow(q, 3.0 * static_cast<double>(k))) / (1 - a);
    };
    auto s = sum_series(term, policy);
    if (!s.converged) throw AnalyticError("Rahman series did not converge");
    return s.value;
}

/// The four denominator products (q, q^2 a/b, q^2 a/d, qbd; q^2)_inf.
inline std::vector<double> rahman_denominators(double q, const RahmanParams& x) {
    return {q_product_infinite(1, 2, q), scaled_q_product_infinite(x.a / x.b, 2, 2, q),
            scaled_q_product_infinite(x.a / x.d, 2, 2, q), scaled_q_product_infinite(x.b * x.d, 1, 2, q)};
}

/// (aq^2, qb, qd, aq^2/bd; q^2)_inf / (q, q^2 a/b, q^2 a/d, qbd; q^2)_inf.
/// With swap_control set, the factor q^2 a/d is replaced by q^2 a/b.
inline double rahman_rhs(double q, const RahmanParams& x, bool swap_control = false) {
    double num = scaled_q_product_infinite(x.a, 2, 2, q) * scaled_q_product_infinite(x.b, 1, 2, q) *
                 scaled_q_product_infinite(x.d, 1, 2, q) * scaled_q_product_infinite(x.a / (x.b * x.d), 2, 2, q);
    auto den = rahman_denominators(q, x);
    if (swap_control) den[2] = scaled_q_product_infinite(x.a / x.b, 2, 2, q);
    double out = num;
    for (double v : den) out /= v;
    return out;
}

inline NumericCheck check_rahman(double q, const RahmanParams& x, double tol, bool swap_control = false,
                                  const SeriesPolicy& policy = {}) {
    if (!(std::fabs(q) < 1)) throw AnalyticError("q-series needs |q| < 1");
    NumericCheck out;
    out.lhs = rahman_lhs(q, x, policy);
    out.rhs = rahman_rhs(q, x, swap_control);
    out.residual = relative_residual(out.lhs, out.rhs);
    out.pass = out.residual < tol;
    return out;
}

struct RahmanPoint {
    double q;
    RahmanParams params;
};

/// q_i = lo + (hi - lo) i/(n-1); a, b, d uniform in [-0.9, 0.9], redrawn
/// while a right-hand denominator factor is below 1e-6 in magnitude.
inline std::vector<RahmanPoint> rahman_grid(std::int64_t n, double lo, double hi, std::uint64_t seed) {
    if (n < 2) throw AnalyticError("Rahman grid needs at least 2 points");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    std::vector<RahmanPoint> out;
    for (std::int64_t i = 0; i < n; ++i) {
        RahmanPoint pt;
        pt.q = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        for (int attempt = 0;; ++attempt) {
            if (attempt > 10'000) throw AnalyticError("could not draw Rahman parameters away from poles");
            pt.params = {u(rng), u(rng), u(rng)};
            if (std::fabs(1 - pt.params.a) < 1e-6 || std::fabs(pt.params.b) < 1e-6 || std::fabs(pt.params.d) < 1e-6)
                continue;
            bool ok = true;
            for (double v : rahman_denominators(pt.q, pt.params))
                if (std::fabs(v) < 1e-6) ok = false;
            if (ok) break;
        }
        out.push_back(pt);
    }
    return out;
}

// ---------------------------------------------------------------------------
// pi-formulas and the Gamma limit

struct PiFormulaCheck {
    double partial_sum = 0;
    double target = 0;
    double gap = 0;
    std::vector<double> gaps;  // gap after each N = 0..terms
    bool shrinking = false;    // gaps non-increasing for N in [10, terms]
};

/// Partial sums sum_{k=0}^{N} of a classical summand in long double.
inline PiFormulaCheck check_pi_formula(const ClassicalSummand& s, const Expr& target, std::int64_t N) {
    if (N < 0) throw AnalyticError("partial sum length must be non-negative");
    PiFormulaCheck out;
    out.target = target.eval_double();
    long double pochs = 1, sum = 0;
    const long double ratio = s.ratio.get_d();
    for (std::int64_t k = 0; k <= N; ++k) {
        if (k > 0) {
            pochs *= ratio;
            for (const auto& f : s.factors) {
                long double step = static_cast<long double>(f.x.get_d()) + static_cast<long double>(k - 1);
                for (std::int64_t i = 0; i < f.power; ++i) {
                    if (f.role == Role::numerator) {
                        pochs *= step;
                    } else {
                        if (step == 0) throw AnalyticError("vanishing Pochhammer symbol in a denominator");
                        pochs /= step;
                    }
                }
            }
        }
        long double pre = s.prefactor.eval_double({{"k", static_cast<double>(k)}});
        sum += pre * pochs;
        out.gaps.push_back(std::fabs(static_cast<double>(sum) - out.target));
    }
    out.partial_sum = static_cast<double>(sum);
    out.gap = out.gaps.back();
    out.shrinking = true;
    for (std::int64_t k = 11; k <= N; ++k)
        if (out.gaps[static_cast<std::size_t>(k)] > out.gaps[static_cast<std::size_t>(k - 1)]) out.shrinking = false;
    return out;
}

/// (q;q)_inf / (q^x;q)_inf (1-q)^{1-x}.
inline double q_gamma(double x, double q) {
    if (!(x > 0)) throw AnalyticError("q-Gamma needs x > 0");
    if (!(q > 0 && q < 1)) throw AnalyticError("q-Gamma needs 0 < q < 1");
    return std::exp(log_q_product_infinite(1, 1, q) - log_q_product_infinite(x, 1, q) + (1 - x) * std::log1p(-q));
}

struct GammaLimitCheck {
    double gamma = 0;
    std::vector<double> values;
    std::vector<double> gaps;
    bool decreasing = false;
};

inline GammaLimitCheck check_gamma_limit(double x, const std::vector<double>& qs) {
    if (!(x > 0)) throw AnalyticError("Gamma limit needs x > 0");
    GammaLimitCheck out;
    out.gamma = std::tgamma(x);
    for (double q : qs) {
        out.values.push_back(q_gamma(x, q));
        out.gaps.push_back(std::fabs(out.values.back() - out.gamma));
    }
    out.decreasing = true;
    for (std::size_t i = 1; i < out.gaps.size(); ++i)
        if (!(out.gaps[i] < out.gaps[i - 1])) out.decreasing = false;
    return out;
}

// ---------------------------------------------------------------------------

/// Runs an analytic case. A positive tol_override replaces the case tolerance.
inline CaseResult verify_analytic(const CaseDefinition& c, double tol_override = 0) {
    CaseResult r = make_result(c);
    const auto& a = c.analytic();
    const double tol = tol_override > 0 ? tol_override : a.tol;
    Status status = Status::pass;
    double worst = 0;
    auto leg = [&](std::string name, bool ok, std::string detail) {
        r.legs.push_back({std::move(name), ok ? Status::pass : Status::fail, "", std::move(detail)});
        if (!ok) status = Status::fail;
    };
    switch (a.check) {
        case AnalyticCheck::q_identity: {
            r.strategy = "numeric-series";
            for (double q : a.q_values) {
                auto chk = check_q_identity(a, q, tol);
                worst = std::max(worst, chk.residual);
                leg("q=" + format_double(q, 3), chk.pass,
                    "residual " + format_double(chk.residual, 3) + " after " + std::to_string(chk.terms) + " terms");
            }
            r.detail = "max relative residual " + format_double(worst, 3) + ", tol " + format_double(tol, 1);
            break;
        }
        case AnalyticCheck::rahman: {
            r.strategy = "numeric-grid";
            if (a.q_values.size() != 2) throw AnalyticError("Rahman check needs a q range [lo, hi]");
            auto grid = rahman_grid(a.grid, a.q_values[0], a.q_values[1], a.seed);
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const auto& pt = grid[i];
                auto chk = check_rahman(pt.q, pt.params, tol);
                worst = std::max(worst, chk.residual);
                leg("point " + std::to_string(i), chk.pass,
                    "q=" + format_double(pt.q, 3) + " a=" + format_double(pt.params.a, 3) +
                        " b=" + format_double(pt.params.b, 3) + " d=" + format_double(pt.params.d, 3) +
                        " residual " + format_double(chk.residual, 3));
            }
            r.detail = std::to_string(grid.size()) + " grid points, max relative residual " + format_double(worst, 3) +
                       ", tol " + format_double(tol, 1);
            break;
        }
        case AnalyticCheck::pi_formula: {
            r.strategy = "partial-sum";
            auto chk = check_pi_formula(a.series, a.target, a.terms);
            worst = chk.gap;
            leg("N=" + std::to_string(a.terms), chk.gap < tol,
                "partial sum " + format_double(chk.partial_sum, 12) + ", target " + format_double(chk.target, 12));
            leg("gap shrinking", chk.shrinking, "gap non-increasing for N in [10, " + std::to_string(a.terms) + "]");
            r.detail = "gap " + format_double(chk.gap, 3) + " at N=" + std::to_string(a.terms) + ", tol " +
                       format_double(tol, 1);
            break;
        }
        case AnalyticCheck::gamma_limit: {
            r.strategy = "q-limit";
            for (const auto& x : a.x_values) {
                auto chk = check_gamma_limit(x.get_d(), a.q_values);
                std::string gaps;
                for (double g : chk.gaps) gaps += (gaps.empty() ? "" : ", ") + format_double(g, 3);
                bool ok = chk.decreasing && !chk.gaps.empty() && chk.gaps.back() < tol;
                worst = std::max(worst, chk.gaps.empty() ? 0.0 : chk.gaps.back());
                leg("x=" + x.get_str(), ok, "gaps " + gaps);
            }
            r.detail = "gaps along q -> 1 must decrease strictly and end below " + format_double(tol, 1);
            break;
        }
    }
    r.residual = worst;
    r.status = status;
    if (status == Status::fail) {
        for (const auto& l : r.legs)
            if (l.status == Status::fail) {
                r.witness = l.name + ": " + l.detail;
                break;
            }
    }
    return r;
}

}  // namespace qsc
