#include <gtest/gtest.h>

#include <random>

#include "resurgence/alien.hpp"

using namespace resurgence;
using C = std::complex<double>;
using Word = FreeOperatorSeries::Word;

static const C I(0, 1);
static const C TwoPiI(0, 2 * M_PI);

TEST(AlienResidue, ClosedFormExamples) {
    auto e = closed_form_minor<double>("euler");
    EXPECT_LT(std::abs(alien_residue(e, C(-1)) - TwoPiI), 1e-12);
    auto s = closed_form_minor<double>("stirling");
    for (int m : {1, 2, -1}) EXPECT_LT(std::abs(alien_residue(s, TwoPiI * double(m)) - 1.0 / m), 1e-12) << m;
    auto h = closed_form_minor<double>("hurwitz(s=2)");
    for (int m : {1, -2}) {
        C om = TwoPiI * double(m);
        EXPECT_LT(std::abs(alien_residue(h, om) - TwoPiI * om), 1e-10 * std::abs(TwoPiI * om)) << m;
    }
}

TEST(AlienResidue, Errors) {
    auto e = closed_form_minor<double>("euler");
    EXPECT_THROW(alien_residue(e, C(-2)), ValidationError);
    // double pole at 1: 1/(zeta-1)^2 + 1/(zeta-1)
    auto f = make_minor<double, FunctionMinor<double>>(
        [](C z) { return 1.0 / ((z - 1.0) * (z - 1.0)) + 1.0 / (z - 1.0); },
        std::vector<SingularPoint<double>>{{C(1), SingularType::pole, 2}}, 0.0, "dp");
    EXPECT_THROW(alien_residue(f, C(1)), NumericError);
}

TEST(FreeAlgebra, ExpOfZeroIsIdentity) {
    auto e = free_exp(FreeOperatorSeries(4));
    EXPECT_EQ(e, FreeOperatorSeries::identity(4));
}

TEST(FreeAlgebra, DegreeTwoIdentity) {
    auto Dp = free_exp(FreeOperatorSeries::all_letters(3));
    auto c2 = Dp.component(2);
    EXPECT_EQ(c2.coeff({0, 2}), 1);
    EXPECT_EQ(c2.coeff({0, 1, 2}), mpq_class(1, 2));
    EXPECT_EQ(c2.terms().size(), 2u);
}

TEST(FreeAlgebra, DegreeThreeInverse) {
    // Delta = log(Id + sum Delta+); in letters of Delta+
    auto D = free_log(FreeOperatorSeries::identity(3) + FreeOperatorSeries::all_letters(3));
    auto c3 = D.component(3);
    EXPECT_EQ(c3.coeff({0, 3}), 1);
    EXPECT_EQ(c3.coeff({0, 1, 3}), mpq_class(-1, 2));
    EXPECT_EQ(c3.coeff({0, 2, 3}), mpq_class(-1, 2));
    EXPECT_EQ(c3.coeff({0, 1, 2, 3}), mpq_class(1, 3));
}

TEST(FreeAlgebra, ExpLogExactInverses) {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int trial = 0; trial < 3; ++trial) {
        FreeOperatorSeries D(6);
        for (int a = 0; a < 6; ++a)
            for (int b = a + 1; b <= 6; ++b) D.set({a, b}, mpq_class(d(rng), 1 + (d(rng) + 5)));
        D.set({0, 1, 3}, mpq_class(d(rng), 3));
        EXPECT_EQ(free_log(free_exp(D)), D);
        auto T = FreeOperatorSeries::identity(6) + D;
        EXPECT_EQ(free_exp(free_log(T)), T);
    }
}

TEST(FreeAlgebra, CompositionConcatenates) {
    auto a = FreeOperatorSeries::letter(4, 0, 1), b = FreeOperatorSeries::letter(4, 1, 3, 2);
    auto ba = b * a;  // a first
    EXPECT_EQ(ba.coeff({0, 1, 3}), 2);
    EXPECT_TRUE((a * b).terms().empty());
    EXPECT_THROW(FreeOperatorSeries(3).set({2, 1}, 1), ValidationError);
}

TEST(MedianWeights, Examples) {
    auto w1 = median_weights(1);
    ASSERT_EQ(w1.size(), 1u);
    EXPECT_EQ(w1.at({}), 1);
    auto w2 = median_weights(2);
    EXPECT_EQ(w2.at({1}), mpq_class(1, 2));
    EXPECT_EQ(w2.at({-1}), mpq_class(1, 2));
    auto w3 = median_weights(3);
    EXPECT_EQ(w3.at({1, 1}), mpq_class(1, 3));
    EXPECT_EQ(w3.at({1, -1}), mpq_class(1, 6));
    EXPECT_EQ(w3.at({-1, 1}), mpq_class(1, 6));
    EXPECT_EQ(w3.at({-1, -1}), mpq_class(1, 3));
}

TEST(MedianWeights, SumToOne) {
    for (int r = 1; r <= 10; ++r) {
        mpq_class s = 0;
        for (auto& [e, w] : median_weights(r)) s += w;
        EXPECT_EQ(s, 1) << r;
    }
}

// independent expansion over compositions of length <= 2
static std::pair<TauNumber, TauNumber> expand_s_le_2(const std::vector<TauNumber>& Cv, const TauNumber& om, int j) {
    TauNumber p = -Cv[j - 1], m = Cv[j - 1];
    for (int a = 1; a < j; ++a) {
        TauNumber g = om * mpq_class(a) * Cv[a - 1] * Cv[j - a - 1];
        p = p - g * mpq_class(1, 2);
        m = m - g * mpq_class(1, 2);
    }
    return {p, m};
}

TEST(Stokes, SingleConstant) {
    TauNumber om = TauNumber::tau(1), c(3, 1);
    std::vector<TauNumber> Cv{c, TauNumber(0), TauNumber(0)};
    auto [Sp, Sm] = stokes_exp(Cv, om);
    EXPECT_EQ(Sp[0], -c);
    EXPECT_EQ(Sm[0], c);
    for (int j = 1; j <= 2; ++j) {
        auto [p, m] = expand_s_le_2(Cv, om, j);
        EXPECT_EQ(Sp[j - 1], p);
        EXPECT_EQ(Sm[j - 1], m);
    }
    EXPECT_EQ(Sp[1], om * c * c * mpq_class(-1, 2));
    EXPECT_EQ(Sm[1], om * c * c * mpq_class(-1, 2));
    // s = 3: (1, 1, 1), Gamma = om * 2 om
    EXPECT_EQ(Sp[2], om * om * c * c * c * mpq_class(-2, 6));
    EXPECT_EQ(Sm[2], om * om * c * c * c * mpq_class(2, 6));
}

TEST(Stokes, ZeroMapsToZero) {
    std::vector<TauNumber> z(5, TauNumber(0));
    auto [Sp, Sm] = stokes_exp(z, TauNumber::tau(1));
    for (auto& x : Sp) EXPECT_EQ(x, TauNumber(0));
    for (auto& x : Sm) EXPECT_EQ(x, TauNumber(0));
}

TEST(Stokes, ExactRoundTrip) {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> d(-9, 9);
    for (int m : {1, -2}) {
        TauNumber om = TauNumber::tau(1) * mpq_class(m);
        std::vector<TauNumber> Cv;
        for (int j = 0; j < 6; ++j)
            Cv.push_back(TauNumber(mpq_class(d(rng), 7), mpq_class(d(rng), 3)) + TauNumber(mpq_class(d(rng)), 0, 1));
        auto [Sp, Sm] = stokes_exp(Cv, om);
        auto Cp = stokes_log(Sp, om, true), Cm = stokes_log(Sm, om, false);
        for (int j = 0; j < 6; ++j) {
            EXPECT_EQ(Cp[j], Cv[j]);
            EXPECT_EQ(Cm[j], Cv[j]);
        }
    }
}

TEST(Stokes, ComplexRoundTrip) {
    std::vector<C> Cv{C(1, 0.5), C(-0.3, 2), C(0.1, 0.1), C(2, -1)};
    C om = TwoPiI * 2.0;
    auto [Sp, Sm] = stokes_exp(Cv, om);
    auto Cp = stokes_log(Sp, om, true), Cm = stokes_log(Sm, om, false);
    for (int j = 0; j < 4; ++j) {
        EXPECT_LT(std::abs(Cp[j] - Cv[j]), 1e-12 * std::abs(Sp[j]) + 1e-12);
        EXPECT_LT(std::abs(Cm[j] - Cv[j]), 1e-12 * std::abs(Sm[j]) + 1e-12);
    }
    // values agree with the exact ring
    std::vector<TauNumber> T{TauNumber(1, mpq_class(1, 2)), TauNumber(mpq_class(-3, 10), 2)};
    auto [Tp, Tm] = stokes_exp(T, TauNumber::tau(1) * mpq_class(2));
    auto [Xp, Xm] = stokes_exp(std::vector<C>{Cv[0], Cv[1]}, om);
    EXPECT_LT(std::abs(Tp[1].value() - Xp[1]), 1e-12 * std::abs(Xp[1]));
    EXPECT_LT(std::abs(Tm[1].value() - Xm[1]), 1e-12 * std::abs(Xm[1]));
}

TEST(MeasureStokes, Euler) {
    auto e = closed_form_minor<double>("euler");
    auto r = measure_stokes(e, 0, M_PI, 1);
    ASSERT_EQ(r.fit.coeff.size(), 1u);
    EXPECT_TRUE(r.fit.accepted[0]);
    EXPECT_LT(std::abs(r.fit.coeff[0] - TwoPiI) / (2 * M_PI), 1e-6);
}

TEST(MeasureStokes, Stirling) {
    auto s = closed_form_minor<double>("stirling");
    auto r = measure_stokes(s, 0, M_PI / 2, 2);
    ASSERT_EQ(r.fit.coeff.size(), 2u);
    EXPECT_LT(std::abs(r.fit.coeff[0] - 1.0), 1e-5);
    EXPECT_LT(std::abs(r.fit.coeff[1] - 0.5), 1e-5);
    EXPECT_LT(std::abs(r.fit.omega[1] - 2.0 * TwoPiI), 1e-12);
}

TEST(MeasureStokes, EntireMinorHasNoComponents) {
    auto p = make_minor<double, PolynomialMinor<double>>(std::vector<C>{C(1), C(0.5, -1), C(0.25)});
    auto r = measure_stokes(p, 0, M_PI, 3);
    for (auto& c : r.fit.coeff) EXPECT_LT(std::abs(c), 1e-9);
    for (auto& j : r.jump) EXPECT_LT(std::abs(j), 1e-9);
}

TEST(MeasureStokes, IllConditionedGridRejected) {
    std::vector<C> z(10, C(3, 0.1));
    std::vector<C> v(10, C(1));
    EXPECT_THROW(fit_components(z, v, C(-1), 3, 3), NumericError);
}

// Product of the Euler series with itself: the e^{z} component of L+ - L- of the product is
// (Delta+_{-1} phi) phi + phi (Delta+_{-1} phi) = 4 pi i L-phi, and the e^{2z} component is (2 pi i)^2.
TEST(MeasureStokes, LeibnizOnProduct) {
    auto e = closed_form_minor<double>("euler");
    auto sq = closed_form_minor<double>("euler_square");
    auto r = measure_stokes(sq, 0, M_PI, 2);
    ASSERT_FALSE(r.z.empty());
    for (std::size_t k = 0; k < r.z.size(); ++k) {
        C z = r.z[k];
        C first = (r.jump[k] - TwoPiI * TwoPiI * std::exp(2.0 * z)) * std::exp(-z);
        auto [ep, em] = lateral_pair(e, C(0), M_PI, r.eps, z);
        C leibniz = 2.0 * TwoPiI * em.value;
        EXPECT_LT(std::abs(first - leibniz), 1e-5 * std::abs(leibniz)) << z;
    }
}

// lambda = exp(mu): the ratio of lateral sums on the ray pi/2 is (1 - e^{-2 pi i z})^{-1}
TEST(MeasureStokes, ExpOfStirling) {
    auto s = closed_form_minor<double>("stirling");
    C om1 = TwoPiI;
    auto grid = stokes_grid(om1, 2, M_PI / 4, 0.5);
    std::vector<C> ratio;
    for (C z : grid) {
        auto [p, m] = lateral_pair(s, C(0), M_PI / 2, M_PI / 4, z);
        ratio.push_back(std::exp(p.value - m.value) - 1.0);
    }
    auto fit = fit_components(grid, ratio, om1, kStokesGuard, 3);
    for (int j = 0; j < 3; ++j) EXPECT_LT(std::abs(fit.coeff[j] - 1.0), 1e-5) << j;
}

TEST(SingularLattice, Multiples) {
    auto L = SingularLattice<double>::multiples(TwoPiI, 3);
    ASSERT_EQ(L.points.size(), 3u);
    EXPECT_NEAR(L.theta, M_PI / 2, 1e-15);
    EXPECT_TRUE(L.closed_under_addition);
    EXPECT_LT(std::abs(L.points[2] - 3.0 * TwoPiI), 1e-12);
}
