#include "qsc/cyclotomic.hpp"
#include "qsc/laurent.hpp"
#include "qsc/rational_function.hpp"
#include "qsc/residue.hpp"

#include <gtest/gtest.h>

#include <random>

namespace {

using qsc::QPoly;
using qsc::Rational;

QPoly poly(std::int64_t low, std::initializer_list<int> coeffs) {
    std::vector<Rational> c;
    for (int v : coeffs) c.emplace_back(v);
    return QPoly::from_coeffs(low, std::move(c));
}

QPoly one() { return QPoly(Rational(1)); }

QPoly random_poly(std::mt19937_64& rng, int max_degree, int low = 0) {
    std::uniform_int_distribution<int> deg(0, max_degree);
    std::uniform_int_distribution<int> coef(-99, 99);
    std::vector<Rational> c(static_cast<std::size_t>(deg(rng) + 1));
    for (auto& x : c) x = coef(rng);
    if (qsc::is_zero(c.back())) c.back() = 1;
    return QPoly::from_coeffs(low, std::move(c));
}

}  // namespace

TEST(Rational, CanonicalForm) {
    Rational r = qsc::make_rational(6, -4);
    EXPECT_EQ(r.get_num(), -3);
    EXPECT_EQ(r.get_den(), 2);
    Rational z = qsc::make_rational(0, 17);
    EXPECT_EQ(z.get_num(), 0);
    EXPECT_EQ(z.get_den(), 1);
    EXPECT_THROW(qsc::make_rational(1, 0), std::domain_error);
    EXPECT_THROW(qsc::to_int64(Rational(1, 2)), std::domain_error);
}

TEST(LaurentPoly, CanonicalTrimming) {
    QPoly p = poly(-2, {0, 0, 3, 0, 5, 0});
    EXPECT_EQ(p.low(), 0);
    EXPECT_EQ(p.high(), 2);
    QPoly z = poly(4, {0, 0});
    EXPECT_TRUE(z.is_zero());
    EXPECT_EQ(z.low(), 0);
    EXPECT_TRUE(z.coeffs().empty());
    EXPECT_TRUE((p - p).is_zero());
    EXPECT_EQ((p - p).low(), 0);
}

TEST(LaurentPoly, DivremExamples) {
    auto [q1, r1] = qsc::poly_divrem(poly(0, {-1, 0, 1}), poly(0, {-1, 1}));
    EXPECT_EQ(q1, poly(0, {1, 1}));
    EXPECT_TRUE(r1.is_zero());

    auto [q2, r2] = qsc::poly_divrem(QPoly::q_power(3), poly(0, {-1, 1}));
    EXPECT_EQ(q2, poly(0, {1, 1, 1}));
    EXPECT_EQ(r2, one());

    QPoly proper = qsc::cyclotomic(1) * qsc::cyclotomic(2) * qsc::cyclotomic(3) * qsc::cyclotomic(4) * qsc::cyclotomic(6);
    auto [q3, r3] = qsc::poly_divrem(QPoly::q_power(12) - one(), proper);
    EXPECT_EQ(q3, poly(0, {1, 0, -1, 0, 1}));
    EXPECT_TRUE(r3.is_zero());

    EXPECT_THROW(qsc::poly_divrem(one(), QPoly()), qsc::DivisionByZero);
}

TEST(LaurentPoly, DivremLaurentInput) {
    QPoly a = poly(-3, {2, 0, -1, 4, 0, 7});
    QPoly b = poly(0, {1, 1, 1});
    auto [q, r] = qsc::poly_divrem(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_TRUE(r.is_zero() || r.span() < b.span());
}

TEST(LaurentPoly, DivremReconstructionProperty) {
    std::mt19937_64 rng(20240611);
    std::uniform_int_distribution<int> shift(-4, 4);
    for (int trial = 0; trial < 200; ++trial) {
        QPoly a = random_poly(rng, 30, trial % 3 == 0 ? shift(rng) : 0);
        QPoly b = random_poly(rng, 30, trial % 5 == 0 ? shift(rng) : 0);
        auto [q, r] = qsc::poly_divrem(a, b);
        ASSERT_EQ(q * b + r, a) << "trial " << trial;
        ASSERT_TRUE(r.is_zero() || r.span() < b.span()) << "trial " << trial;
    }
}

TEST(LaurentPoly, GcdExamples) {
    EXPECT_EQ(qsc::poly_gcd(poly(0, {-1, 0, 1}), poly(0, {1, -2, 1})), poly(0, {-1, 1}));
    EXPECT_EQ(qsc::poly_gcd(qsc::cyclotomic(5), qsc::cyclotomic(3)), one());

    const QPoly& phi5 = qsc::cyclotomic(5);
    QPoly g = qsc::poly_gcd(qsc::cyclotomic(1) * phi5 * phi5, phi5 * phi5 * phi5);
    EXPECT_EQ(g, phi5 * phi5);
    EXPECT_TRUE(qsc::poly_rem(phi5 * phi5 * phi5, g).is_zero());
    EXPECT_TRUE(qsc::poly_rem(qsc::cyclotomic(1) * phi5 * phi5, g).is_zero());

    EXPECT_THROW(qsc::poly_gcd(QPoly(), QPoly()), std::domain_error);
    EXPECT_EQ(qsc::poly_gcd(QPoly(), poly(0, {2, 4})), QPoly::from_coeffs(0, {Rational(1, 2), Rational(1)}));
}

TEST(LaurentPoly, GcdScalesWithCommonFactor) {
    std::mt19937_64 rng(77);
    int checked = 0;
    while (checked < 40) {
        QPoly a = random_poly(rng, 8);
        QPoly b = random_poly(rng, 8);
        if (a.span() < 1 || b.span() < 1) continue;
        if (!qsc::poly_gcd(a, b).is_one()) continue;
        QPoly g = random_poly(rng, 6);
        if (qsc::is_zero(g.coeff(0))) continue;
        EXPECT_EQ(qsc::poly_gcd(a * g, b * g), g.monic());
        ++checked;
    }
}

TEST(Cyclotomic, SmallValues) {
    EXPECT_EQ(qsc::cyclotomic(1), poly(0, {-1, 1}));
    EXPECT_EQ(qsc::cyclotomic(4), poly(0, {1, 0, 1}));
    EXPECT_EQ(qsc::cyclotomic(12), poly(0, {1, 0, -1, 0, 1}));
    EXPECT_THROW(qsc::cyclotomic(0), std::invalid_argument);
}

namespace {

int mobius(std::int64_t n) {
    int mu = 1;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        n /= p;
        if (n % p == 0) return 0;
        mu = -mu;
    }
    if (n > 1) mu = -mu;
    return mu;
}

// Phi_n = prod_{d | n} (q^d - 1)^{mu(n/d)}, by multiplying out the numerator
// factors and dividing by the denominator ones.
QPoly cyclotomic_by_mobius(std::int64_t n) {
    QPoly num = one();
    QPoly den = one();
    for (std::int64_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        QPoly f = QPoly::q_power(d) - one();
        int mu = mobius(n / d);
        if (mu == 1) num *= f;
        if (mu == -1) den *= f;
    }
    auto [q, r] = qsc::poly_divrem(num, den);
    EXPECT_TRUE(r.is_zero());
    return q;
}

}  // namespace

TEST(Cyclotomic, MatchesMobiusProduct) {
    for (std::int64_t n = 1; n <= 60; ++n) ASSERT_EQ(qsc::cyclotomic(n), cyclotomic_by_mobius(n)) << n;
}

TEST(Cyclotomic, DivisorProductAndDegree) {
    for (std::int64_t n = 1; n <= 60; ++n) {
        QPoly prod = one();
        for (std::int64_t d : qsc::divisors(n)) prod *= qsc::cyclotomic(d);
        ASSERT_EQ(prod, QPoly::q_power(n) - one()) << n;
        ASSERT_EQ(qsc::cyclotomic(n).degree(), qsc::euler_phi(n)) << n;
        for (const auto& c : qsc::cyclotomic(n).coeffs()) ASSERT_TRUE(qsc::is_integer(c));
    }
}

TEST(QInteger, Values) {
    EXPECT_EQ(qsc::q_integer(1), one());
    EXPECT_EQ(qsc::q_integer(5), poly(0, {1, 1, 1, 1, 1}));
    EXPECT_EQ(qsc::q_integer(6), qsc::cyclotomic(2) * qsc::cyclotomic(3) * qsc::cyclotomic(6));
    EXPECT_TRUE(qsc::q_integer(0).is_zero());
    EXPECT_EQ(qsc::q_integer(-1), QPoly::monomial(Rational(-1), -1));
    for (int m = -7; m <= 7; ++m) {
        EXPECT_EQ(qsc::q_integer(m) * poly(0, {1, -1}), QPoly::one_minus_q_power(m)) << m;
    }
}

TEST(QPochhammer, Values) {
    EXPECT_EQ(qsc::q_pochhammer(1, 4, 0), one());
    EXPECT_EQ(qsc::q_pochhammer(1, 4, 2), poly(0, {1, -1, 0, 0, 0, -1, 1}));
    EXPECT_EQ(qsc::q_pochhammer(-1, 4, 1), poly(-1, {-1, 1}));
    EXPECT_TRUE(qsc::q_pochhammer(-4, 2, 3).is_zero());
}

TEST(QPochhammer, SplittingProperty) {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> cd(-3, 5), sd(1, 6), kd(0, 8);
    for (int trial = 0; trial < 150; ++trial) {
        int c = cd(rng), s = sd(rng), j = kd(rng), k = kd(rng);
        EXPECT_EQ(qsc::q_pochhammer(c, s, j + k), qsc::q_pochhammer(c, s, j) * qsc::q_pochhammer(c + s * j, s, k));
    }
}

TEST(RationalFunction, NormalizationMovesMonomials) {
    qsc::QFunction f(poly(0, {1}), poly(-2, {2, 0, 2}));
    EXPECT_EQ(f.den().low(), 0);
    EXPECT_TRUE(qsc::is_zero(f.den().coeff(0)) == false);
    EXPECT_EQ(f.den().leading(), 1);
    EXPECT_EQ(f.num(), QPoly::monomial(Rational(1, 2), 2));

    qsc::QFunction g(poly(0, {-1, 0, 1}), poly(0, {-1, 1}));
    EXPECT_EQ(g.num(), poly(0, {1, 1}));
    EXPECT_TRUE(g.den().is_one());
    EXPECT_THROW(qsc::QFunction(one(), QPoly()), qsc::DivisionByZero);
}

TEST(RationalFunction, FieldArithmetic) {
    qsc::QFunction x(poly(0, {1, 2}), poly(0, {3, 0, 1}));
    qsc::QFunction y(poly(1, {1, -1}), poly(0, {1, 1}));
    EXPECT_EQ((x + y) - y, x);
    EXPECT_EQ((x * y) / y, x);
    EXPECT_EQ(x * x.inverse(), qsc::QFunction(1));
    EXPECT_EQ(x.evaluate(Rational(2)), Rational(5, 7));
}

TEST(Residue, ReduceExamples) {
    const QPoly& phi3 = qsc::cyclotomic(3);
    qsc::QFunction p(one(), poly(0, {1, -1}));
    auto r = qsc::residue_reduce(p, phi3);
    std::vector<Rational> expected{Rational(2, 3), Rational(1, 3)};
    EXPECT_EQ(r.value(), QPoly::from_coeffs(0, expected));
    EXPECT_EQ(qsc::poly_rem(poly(0, {1, -1}) * r.value(), phi3), one());

    EXPECT_TRUE(qsc::residue_reduce(qsc::QFunction(QPoly::q_power(3)), phi3).is_one());
    EXPECT_TRUE(qsc::residue_reduce(qsc::QFunction(), phi3).is_zero());
}

TEST(Residue, NonUnitDenominator) {
    qsc::QFunction p(one(), qsc::cyclotomic(5));
    QPoly m = qsc::cyclotomic(5) * qsc::cyclotomic(5);
    EXPECT_THROW(qsc::residue_reduce(p, m), qsc::NonUnitDenominator);
    qsc::QFunction shared(one(), poly(0, {-1, 0, 1}));
    EXPECT_THROW(qsc::residue_reduce(shared, qsc::cyclotomic(2)), qsc::NonUnitDenominator);
}

TEST(Residue, Arithmetic) {
    auto ring4 = qsc::QuotientRing<Rational>::make(qsc::cyclotomic(4));
    qsc::Residue<Rational> q(ring4, QPoly::q_power(1));
    EXPECT_EQ((q * q).value(), QPoly(Rational(-1)));
    auto zero = qsc::Residue<Rational>::zero(ring4);
    EXPECT_EQ(q + zero, q);
    EXPECT_TRUE((q * q.inverse()).is_one());
    EXPECT_TRUE(q.times_q_power(-1).is_one());
    EXPECT_EQ(ring4->q_power(-1), QPoly::monomial(Rational(-1), 1));

    auto ring3 = qsc::QuotientRing<Rational>::make(qsc::cyclotomic(3));
    qsc::Residue<Rational> other(ring3, QPoly::q_power(1));
    EXPECT_THROW(q + other, qsc::ModulusMismatch);
    EXPECT_THROW(q * other, qsc::ModulusMismatch);
}

TEST(Residue, LaurentInputsReduce) {
    auto ring = qsc::QuotientRing<Rational>::make(qsc::q_integer(7) * qsc::cyclotomic(7));
    QPoly p = poly(-5, {3, 0, -2, 1, 0, 0, 0, 4});
    qsc::Residue<Rational> r(ring, p);
    qsc::Residue<Rational> back = r.times_q_power(5);
    EXPECT_EQ(back.value(), ring->reduce(p.shifted(5)));
}

TEST(Residue, HomomorphismOnUnits) {
    std::mt19937_64 rng(31337);
    std::uniform_int_distribution<int> nd(3, 15);
    int checked = 0;
    while (checked < 40) {
        std::int64_t n = nd(rng);
        QPoly m = qsc::q_integer(n) * qsc::cyclotomic(n) * qsc::cyclotomic(n);
        auto ring = qsc::QuotientRing<Rational>::make(m);
        qsc::QFunction p1(random_poly(rng, 12), random_poly(rng, 10));
        qsc::QFunction p2(random_poly(rng, 12), random_poly(rng, 10));
        if (!qsc::poly_gcd(p1.den(), m).is_one() || !qsc::poly_gcd(p2.den(), m).is_one()) continue;
        auto r12 = qsc::residue_reduce(p1 * p2, ring);
        EXPECT_EQ(r12, qsc::residue_reduce(p1, ring) * qsc::residue_reduce(p2, ring));
        ++checked;
    }
}

TEST(Residue, UnitTimesInverseIsOne) {
    std::mt19937_64 rng(4242);
    int checked = 0;
    auto ring = qsc::QuotientRing<Rational>::make(qsc::q_integer(9) * qsc::cyclotomic(9) * qsc::cyclotomic(9));
    while (checked < 40) {
        qsc::Residue<Rational> u(ring, random_poly(rng, 25));
        if (!qsc::poly_gcd(u.value().is_zero() ? ring->modulus() : u.value(), ring->modulus()).is_one()) continue;
        EXPECT_TRUE((u * u.inverse()).is_one());
        ++checked;
    }
}

namespace {

using qsc::BivariateCoeff;
using APoly = qsc::LaurentPoly<Rational>;  // polynomials in a

BivariateCoeff a_power(std::int64_t e) { return BivariateCoeff(APoly::q_power(e)); }

}  // namespace

TEST(BivariateResidue, Examples) {
    using BF = qsc::BivariateFunction;
    using BP = qsc::LaurentPoly<BivariateCoeff>;

    BF aq(BP::monomial(a_power(1), 1));
    auto r1 = qsc::bivariate_residue_reduce(aq, qsc::cyclotomic(2));
    EXPECT_EQ(r1.value(), BP(-a_power(1)));

    BF inv(BP(BivariateCoeff(1)), BP(BivariateCoeff(1)) - BP::monomial(a_power(1), 1));
    auto r2 = qsc::bivariate_residue_reduce(inv, poly(0, {-1, 1}));
    BivariateCoeff expected = BivariateCoeff(1) / (BivariateCoeff(1) - a_power(1));
    EXPECT_EQ(r2.value(), BP(expected));
}

TEST(BivariateResidue, ProductModPhi3) {
    using BF = qsc::BivariateFunction;
    using BP = qsc::LaurentPoly<BivariateCoeff>;
    // (1 - a q)(1 - q/a) = 1 - (a + 1/a) q + q^2; with q^2 = -1 - q modulo
    // Phi_3 this is -(a + 1 + 1/a) q.
    BP one_minus_aq = BP(BivariateCoeff(1)) - BP::monomial(a_power(1), 1);
    BP one_minus_q_over_a = BP(BivariateCoeff(1)) - BP::monomial(a_power(-1), 1);
    auto r = qsc::bivariate_residue_reduce(BF(one_minus_aq * one_minus_q_over_a), qsc::cyclotomic(3));
    BivariateCoeff c = -(a_power(1) + BivariateCoeff(1) + a_power(-1));
    EXPECT_EQ(r.value(), BP::monomial(c, 1));
}

TEST(BivariateResidue, NonUnitOverFractionField) {
    using BF = qsc::BivariateFunction;
    using BP = qsc::LaurentPoly<BivariateCoeff>;
    BF p(BP(BivariateCoeff(1)), BP::one_minus_q_power(2));
    EXPECT_THROW(qsc::bivariate_residue_reduce(p, qsc::cyclotomic(2)), qsc::NonUnitDenominator);
}
