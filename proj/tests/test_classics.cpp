#include <gtest/gtest.h>

#include <boost/math/special_functions/gamma.hpp>

#include <resurgence/classics.hpp>

#include "test_util.hpp"

using namespace resurgence;
using namespace testutil;
using C = std::complex<double>;

TEST(Classics, Bernoulli) {
    auto B = bernoulli(4);
    EXPECT_EQ(B[0], Q(1, 6));
    EXPECT_EQ(B[1], Q(-1, 30));
    EXPECT_EQ(B[2], Q(1, 42));
    EXPECT_EQ(B[3], Q(-1, 30));
    auto all = bernoulli_numbers(30);
    for (int n = 3; n <= 30; n += 2) EXPECT_EQ(all[n], 0);
    EXPECT_EQ(all[1], Q(-1, 2));
}

TEST(Classics, SeriesExamples) {
    auto e = build<Q>("euler", 6);
    EXPECT_EQ(e.series, series({0, 1, -1, 2, -6, 24, -120}));
    auto s = build<Q>("stirling", 5);
    EXPECT_EQ(s.series, series({0, Q(1, 12), 0, Q(-1, 360), 0, Q(1, 1260)}));
    auto h = build<Q>("hurwitz(s=2)", 5);
    EXPECT_EQ(h.series, series({0, 1, Q(1, 2), Q(1, 6), 0, Q(-1, 30)}));
    auto h3 = build<Q>("hurwitz(s=3)", 6);
    // 1/(2z^2) + 1/(2z^3) + C(3,2) B2/3 z^-3 ... = 1/(2z^2) + 1/(2z^3) + (1/4) z^-4 + 0 z^-5 - (1/12) z^-6
    EXPECT_EQ(h3.series, series({0, 0, Q(1, 2), Q(1, 2), Q(1, 4), 0, Q(-1, 12)}));
    auto g = build<Q>("incgamma(alpha=1/2)", 4);
    EXPECT_EQ(g.series, series({0, 1, Q(-1, 2), Q(3, 4), Q(-15, 8)}));
}

TEST(Classics, PoincareCoefficientsAgainstDirectSums) {
    auto p = build<Q>("poincare(w=1/2)", 12);
    for (int n = 0; n < 12; ++n) {
        double b = 0;
        for (int k = 1; k < 400; ++k) b += std::pow(double(k), n) * std::pow(0.5, k);
        if (n == 0) b += 1;
        double a = (n % 2 ? -1 : 1) * b;
        EXPECT_NEAR(p.series[n + 1].get_d() / a, 1.0, 1e-13) << n;
    }
}

TEST(Classics, BorelConsistencyExact) {
    for (auto id : {"euler", "stirling", "poincare(w=1/2)", "poincare(w=-2/3)", "hurwitz(s=2)", "hurwitz(s=4)",
                    "incgamma(alpha=1/2)", "incgamma(alpha=7/3)", "euler_square"}) {
        auto ex = build<Q>(id, 20);
        auto b = borel(ex.series);
        EXPECT_EQ(b.delta, 0) << id;
        ASSERT_EQ(b.minor.size(), ex.minor_taylor.size()) << id;
        for (std::size_t n = 0; n < b.minor.size(); ++n) EXPECT_EQ(b.minor[n], ex.minor_taylor[n]) << id << " " << n;
    }
}

TEST(Classics, MinorEvaluatorMatchesTaylor) {
    for (auto id : {"euler", "stirling", "poincare(w=1/2)", "hurwitz(s=3)", "incgamma(alpha=1/2)", "euler_square"}) {
        auto ex = build<Q>(id, 40);
        C z(0.15, 0.1), s = 0, zp = 1;
        for (std::size_t n = 0; n < ex.minor_taylor.size(); ++n, zp *= z) s += ex.minor_taylor[n].get_d() * zp;
        EXPECT_NEAR(std::abs(ex.minor.eval(z) - s), 0, 1e-14) << id;
    }
}

TEST(Classics, FloatDomainsMatchExact) {
    auto a = build<Q>("poincare(w=1/2)", 15);
    auto b = build<C>("poincare(w=0.5)", 15);
    for (int n = 0; n <= 15; ++n) EXPECT_NEAR(std::abs(b.series[n] - C(a.series[n].get_d())), 0, 1e-9 * std::abs(a.series[n].get_d()) + 1e-15);
    auto c = build<C>("poincare(w=0.3+0.4i)", 10);
    // b_1 = w/(1-w)^2, a_2 = -b_1
    C w(0.3, 0.4);
    EXPECT_NEAR(std::abs(c.series[2] + w / ((1.0 - w) * (1.0 - w))), 0, 1e-14);
    EXPECT_THROW(build<Q>("poincare(w=1/2+i)", 5), ValidationError);
}

TEST(Classics, InvalidParameters) {
    EXPECT_THROW(build<Q>("poincare(w=1)", 5), ValidationError);
    EXPECT_THROW(build<Q>("poincare(w=3/2)", 5), ValidationError);
    EXPECT_THROW(build<Q>("hurwitz(s=1)", 5), ValidationError);
    EXPECT_THROW(build<Q>("hurwitz(s=5/2)", 5), ValidationError);
    EXPECT_THROW(build<Q>("hurwitz", 5), ValidationError);
    EXPECT_THROW(build<Q>("nothing", 5), ValidationError);
    EXPECT_THROW(build<Q>("euler", 0), ValidationError);
}

TEST(Classics, ReferenceValues) {
    EXPECT_NEAR(std::abs(reference_value("poincare(w=1/2)", C(2)) - C(4 * std::log(2.0) - 2)), 0, 1e-14);
    EXPECT_NEAR(std::abs(reference_value("hurwitz(s=2)", C(1)) - C(M_PI * M_PI / 6)), 0, 1e-13);
    EXPECT_NEAR(std::abs(reference_value("hurwitz(s=4)", C(1)) - C(std::pow(M_PI, 4) / 90)), 0, 1e-13);
    C lam = stirling_lambda_reference(C(5));
    double expect = std::pow(2 * M_PI, -0.5) * std::pow(5.0, 0.5 - 5) * std::exp(5.0) * 24;
    EXPECT_NEAR(lam.real() / expect, 1, 1e-13);
    EXPECT_NEAR(lam.imag(), 0, 1e-15);
    for (double x : {1.5, 7.25, 12.0})
        EXPECT_NEAR(gamma_quadrature(C(x)).real() / std::tgamma(x), 1, 1e-13) << x;
    EXPECT_NEAR(incomplete_gamma_reference(0.5, 4) / boost::math::tgamma(0.5, 4.0), 1, 1e-12);
    EXPECT_NEAR(euler_reference(C(1)).real(), 0.59634736, 5e-9);
}

TEST(Classics, SumAgreement) {
    auto check = [](const char* id, std::vector<C> zs, auto transform, auto ref) {
        auto ex = build<Q>(id, 10);
        for (C z : zs) {
            auto r = borel_sum_arc(ex.minor, C(0), ex.spec.arc, z);
            EXPECT_NEAR(std::abs(transform(r.value) - ref(z)), 0, 1e-8 * std::max(1.0, std::abs(ref(z)))) << id << z;
        }
    };
    auto same = [](C v) { return v; };
    check("euler", {1, 2, 5}, same, [](C z) { return reference_value("euler", z); });
    check("poincare(w=1/2)", {2, 3, C(5, 1)}, same, [](C z) { return reference_value("poincare(w=1/2)", z); });
    check("hurwitz(s=2)", {1, 3, C(2, 2)}, same, [](C z) { return reference_value("hurwitz(s=2)", z); });
    check("stirling", {5, 8, 10}, [](C v) { return std::exp(v); },
          [](C z) {
              return C(std::tgamma(z.real()) * std::exp(z.real()) * std::pow(z.real(), 0.5 - z.real()) /
                       std::sqrt(2 * M_PI));
          });
    check("incgamma(alpha=1/2)", {4}, [](C v) { return v * std::exp(-4.0) * 2.0; },
          [](C) { return C(boost::math::tgamma(0.5, 4.0)); });
}

TEST(Classics, JumpIdentities) {
    auto eu = build<Q>("euler", 5);
    for (C z : {C(-3, 0.5), C(-5, -1)}) {
        auto [p, m] = lateral_pair(eu.minor, C(0), M_PI, 0.4, z);
        EXPECT_NEAR(std::abs(p.value - m.value - jump_formula("euler", z)), 0, 1e-7);
    }
    auto st = build<Q>("stirling", 5);
    for (C z : {C(2, -1.2), C(0.5, -0.7)}) {
        auto [p, m] = lateral_pair(st.minor, C(0), M_PI / 2, 0.2, z);
        EXPECT_NEAR(std::abs(p.value - m.value - jump_formula("stirling", z)), 0, 1e-7);
    }
    auto ig = build<Q>("incgamma(alpha=1/2)", 5);
    for (C z : {C(-3, 0.4), C(-2, -0.3)}) {
        auto [p, m] = lateral_pair(ig.minor, C(0), M_PI, 0.3, z);
        EXPECT_NEAR(std::abs(p.value - m.value - jump_formula("incgamma(alpha=1/2)", z)), 0, 1e-7);
    }
    // phi^P - S^{J_0} phi^P at w = 1/2, z = -4 + 0.3i
    auto pc = build<Q>("poincare(w=1/2)", 5);
    C z(-4, 0.3);
    auto arc = poincare_arc(C(0.5), 0);
    EXPECT_NEAR(arc.theta1, M_PI, 1e-15);
    auto s = borel_sum_arc(pc.minor, C(0), arc, z);
    C lhs = poincare_reference(C(0.5), z) - s.value;
    EXPECT_NEAR(std::abs(lhs - poincare_sector_difference(C(0.5), 0, z)), 0, 1e-7);
}

TEST(Classics, StirlingOddness) {
    auto s = build<Q>("stirling", 41);
    for (int n = 0; n <= 41; n += 2) EXPECT_EQ(s.series[n], 0);
    for (int n = 1; n <= 41; n += 2) EXPECT_NE(s.series[n], 0);
}

TEST(Classics, StirlingDifferenceEquation) {
    // mu(z+1) - mu(z) = 1 - (z + 1/2) log(1 + 1/z)
    auto psi = stirling_difference_rhs<Q>(24);
    auto mu = solve_difference(psi);
    auto ref = build<Q>("stirling", mu.order());
    EXPECT_EQ(mu, ref.series);
}

TEST(Classics, EulerSquareIsProductOfSums) {
    auto ex = build<Q>("euler_square", 10);
    for (C z : {C(2), C(3, 1)}) {
        auto r = borel_sum_arc(ex.minor, C(0), ex.spec.arc, z);
        EXPECT_NEAR(std::abs(r.value - reference_value("euler_square", z)), 0, 1e-9);
    }
}
