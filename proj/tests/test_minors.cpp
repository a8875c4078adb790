#include <gtest/gtest.h>

#include <random>

#include <resurgence/borel.hpp>
#include <resurgence/minors.hpp>
#include <resurgence/pade.hpp>

#include "test_util.hpp"

using namespace resurgence;
using namespace testutil;
using R = double;
using C = std::complex<double>;

namespace {

TaylorGerm<Q> euler_minor_taylor(int n) {
    TaylorGerm<Q> t;
    for (int k = 0; k < n; ++k) t.c.push_back(Q(k % 2 ? -1 : 1));
    return t;
}

}  // namespace

TEST(Minors, ClosedFormExamples) {
    auto e = closed_form_minor<R>("euler");
    EXPECT_NEAR(std::abs(e.eval(C(1)) - C(0.5)), 0, 1e-15);
    auto s = closed_form_minor<R>("stirling");
    EXPECT_NEAR(std::abs(s.eval(C(1e-6)) - C(1.0 / 12)), 0, 1e-12);
    EXPECT_NEAR(std::abs(s.eval(C(0)) - C(1.0 / 12)), 0, 1e-15);
    EXPECT_THROW(e.eval(C(-1)), SingularHit);
    EXPECT_THROW(s.eval(C(0, 2 * M_PI)), SingularHit);
}

TEST(Minors, StirlingBranchesAgreeAcrossUnitCircle) {
    // Taylor branch inside |z|<1, closed form outside; both sides of the seam must match.
    auto s = closed_form_minor<R>("stirling");
    // direct oracle: zeta^-2 ((zeta/2) coth(zeta/2) - 1)
    auto oracle = [](C z) {
        C w = z / 2.0;
        return (w * std::cosh(w) / std::sinh(w) - 1.0) / (z * z);
    };
    for (double a : {0.0, 0.7, 1.9, 3.0})
        for (double r : {0.999999, 1.000001, 3.0})
            EXPECT_NEAR(std::abs(s.eval(std::polar(r, a)) - oracle(std::polar(r, a))), 0, 1e-14);
}

TEST(Minors, TaylorAgreementInsideHalfRadius) {
    // Hurwitz s=2 minor vs its Borel series coefficients (-1)^n B_n / n! ... through 1/(1-e^-z) form
    auto h = closed_form_minor<R>("hurwitz(s=2)");
    auto B = bernoulli_numbers(30);
    for (double r : {0.5, 2.0, 3.0}) {
        C z = std::polar(r, 0.4);
        C sum = 0, zp = 1;
        mpq_class f = 1;
        for (int n = 0; n <= 30; ++n) {
            if (n) f *= n;
            mpq_class c = B[n] / f;
            if (n % 2) c = -c;
            sum += c.get_d() * zp;
            zp *= z;
        }
        // tail bound ~ (r / 2 pi)^31 times a constant of order 1
        double tail = 4 * std::pow(r / (2 * M_PI), 31);
        EXPECT_NEAR(std::abs(h.eval(z) - sum), 0, tail + 1e-13) << r;
    }
}

TEST(Minors, PadeRecoversEulerMinor) {
    PadeMinor<R> p(euler_minor_taylor(21), 10, 10, {{C(-1), SingularType::pole, 1}});
    EXPECT_EQ(p.denominator_degree(), 1);
    EXPECT_EQ(p.numerator_degree(), 0);
    EXPECT_NEAR(std::abs(p.eval(C(5)) - C(1.0 / 6)), 0, 1e-10);
    EXPECT_TRUE(p.warnings().empty());
    ASSERT_EQ(p.poles().size(), 1u);
    EXPECT_NEAR(std::abs(p.poles()[0] - C(-1)), 0, 1e-12);
}

TEST(Minors, PadeReproducesRationalMinors) {
    std::mt19937 g(7);
    std::uniform_real_distribution<double> u(-3, 3);
    for (int trial = 0; trial < 10; ++trial) {
        int m = 1 + trial % 4;
        std::vector<C> poles, res;
        std::vector<SingularPoint<R>> known;
        for (int j = 0; j < m; ++j) {
            C p(u(g), u(g));
            if (std::abs(p) < 0.5) p += 1.0;
            poles.push_back(p);
            res.push_back(C(u(g), u(g)));
            known.push_back({p, SingularType::pole, 1});
        }
        auto rm = make_minor<R, RationalMinor<R>>(poles, res);
        // Taylor coefficients of sum r/(z-p) = -sum r/p sum (z/p)^n
        int L = m - 1 + trial % 3, M = m + trial % 2, n = L + M + 1;
        TaylorGerm<C> t;
        t.c.assign(n, C(0));
        for (int j = 0; j < m; ++j) {
            C pw = -res[j] / poles[j];
            for (int k = 0; k < n; ++k, pw /= poles[j]) t.c[k] += pw;
        }
        PadeMinor<R> pm(t, L, M, known);
        for (int k = 0; k < 20; ++k) {
            C z(u(g) * 2, u(g) * 2);
            bool near = false;
            for (auto& p : poles) near |= std::abs(z - p) < 0.05;
            if (near) continue;
            C a = rm.eval(z), b = pm.eval(z);
            EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(a))) << trial;
        }
        EXPECT_TRUE(pm.warnings().empty()) << trial;
    }
}

TEST(Minors, PadeFlagsSpuriousPoles) {
    // Declaring no singular points makes every genuine pole "spurious".
    PadeMinor<R> p(euler_minor_taylor(21), 10, 10);
    ASSERT_EQ(p.warnings().size(), 1u);
    EXPECT_EQ(p.exclusion_zones().size(), 1u);
    EXPECT_DOUBLE_EQ(p.exclusion_zones()[0].second, 0.1);
}

TEST(Minors, PadeDistanceToBranchCut) {
    // log(1+z)/z: poles of the Pade denominator accumulate on the cut (-inf,-1]
    TaylorGerm<Q> t;
    for (int k = 0; k < 31; ++k) t.c.push_back(Q(k % 2 ? -1 : 1, k + 1));
    PadeMinor<R> p(t, 15, 15, {{C(-1), SingularType::branch, 1}});
    for (auto& r : p.poles())
        if (r.real() < -1) {
            EXPECT_LT(std::abs(r.imag()), 0.1 * std::abs(r));
        }
    EXPECT_NEAR(std::abs(p.eval(C(2)) - C(std::log(3.0) / 2)), 0, 1e-12);
}

TEST(Minors, LateralOnEntireMinorIsEval) {
    auto pm = make_minor<R, PolynomialMinor<R>>(std::vector<C>{C(1), C(-2, 1), C(0.5)});
    for (int s : {1, -1})
        for (double th : {0.0, 1.0, M_PI})
            for (double xi : {0.0, 0.3, 2.0, 7.5}) {
                LateralPath<R> path{th, {s}, 0.25};
                EXPECT_EQ(pm.eval_lateral(path, xi), pm.eval(xi * std::polar(1.0, th)));
            }
}

TEST(Minors, PoincareLateralContinuityAndSingleValuedness) {
    auto m = closed_form_minor<R>("poincare(s=-0.6931471805599453)");
    LateralPath<R> plus{M_PI, {1}, 0.2}, minus{M_PI, {-1}, 0.2};
    double d = std::log(2.0);
    // before and after the detour: values on the ray
    for (double xi : {0.1, d - 0.2, d + 0.2, 1.5, 3.0}) {
        C z = xi * C(-1);
        EXPECT_NEAR(std::abs(m.eval_lateral(plus, xi) - m.eval(z)), 0, 1e-12);
        EXPECT_NEAR(std::abs(m.eval_lateral(plus, xi) - m.eval_lateral(minus, xi)), 0, 1e-12);
    }
    // on the detour: + passes above the real axis (right of leftward motion), - below
    C top = m.point_on_path(plus, d).zeta, bottom = m.point_on_path(minus, d).zeta;
    EXPECT_NEAR(std::abs(top - C(-d, 0.2)), 0, 1e-12);
    EXPECT_NEAR(std::abs(bottom - C(-d, -0.2)), 0, 1e-12);
    // continuity along the detour
    C prev = m.eval_lateral(plus, d - 0.2);
    for (int k = 1; k <= 400; ++k) {
        double xi = d - 0.2 + 0.4 * k / 400;
        C v = m.eval_lateral(plus, xi);
        EXPECT_LT(std::abs(v - prev), 0.2);
        prev = v;
    }
    // residue oracle: contour integral of the minor over (+ path) - (- path) equals 2 pi i * 1
    C acc = 0;
    const int K = 2000;
    for (int k = 0; k < K; ++k) {
        double phi = M_PI * (k + 0.5) / K;
        C u = std::polar(1.0, M_PI - phi), v = std::polar(1.0, M_PI + phi);
        C pu = C(-d) + 0.2 * u, pv = C(-d) + 0.2 * v;
        // d zeta / d phi for each half circle
        acc += m.eval(pu) * (C(0, -1) * 0.2 * u) * (M_PI / K);
        acc -= m.eval(pv) * (C(0, 1) * 0.2 * v) * (M_PI / K);
    }
    // both halves are traversed with phi increasing toward the ray ahead; orient + minus -
    EXPECT_NEAR(std::abs(-acc - C(0, 2 * M_PI)), 0, 1e-6);
}

TEST(Minors, StirlingLateralSingleValued) {
    auto m = closed_form_minor<R>("stirling");
    LateralPath<R> plus{M_PI / 2, {1}, 0.3}, minus{M_PI / 2, {-1}, 0.3};
    for (double xi : {6.8, 7.0, 9.0, 12.0}) {
        EXPECT_NEAR(std::abs(m.eval_lateral(plus, xi) - m.eval_lateral(minus, xi)), 0, 1e-12);
        EXPECT_NEAR(std::abs(m.eval_lateral(plus, xi) - m.eval(C(0, xi))), 0, 1e-12);
    }
}

TEST(Minors, MeromorphicLateralAgreesOffRay) {
    std::mt19937 g(3);
    std::uniform_int_distribution<int> sg(0, 1);
    for (auto id : {"euler", "stirling", "poincare(w=1/2)", "hurwitz(s=3)", "rational(poles=-1;2i, residues=1;3)"}) {
        auto m = closed_form_minor<R>(id);
        for (double th : {M_PI, M_PI / 2, -M_PI / 2}) {
            auto on = m.on_ray(th, 20);
            if (on.empty()) continue;
            for (int rep = 0; rep < 4; ++rep) {
                LateralPath<R> p{th, {}, 0.2};
                for (std::size_t j = 0; j < on.size(); ++j) p.crossing_signs.push_back(sg(g) ? 1 : -1);
                for (double xi = 0.05; xi < 19; xi += 0.37) {
                    auto pt = m.point_on_path(p, xi);
                    C a = m.eval_on_path(p, pt), b = m.eval(pt.zeta);
                    EXPECT_LE(std::abs(a - b), 1e-12 * std::max(1.0, std::abs(b))) << id;
                }
            }
        }
    }
}

TEST(Minors, IncGammaBranchSheets) {
    // (1+z)^{alpha-1} with the principal log: crossing the cut to the right (+, above) gives arg +pi
    auto m = closed_form_minor<R>("incgamma(alpha=1/2)");
    LateralPath<R> plus{M_PI, {1}, 0.25}, minus{M_PI, {-1}, 0.25};
    double xi = 3;
    C expect_plus = std::pow(2.0, -0.5) * std::exp(C(0, -0.5 * M_PI));
    C expect_minus = std::pow(2.0, -0.5) * std::exp(C(0, 0.5 * M_PI));
    EXPECT_NEAR(std::abs(m.eval_lateral(plus, xi) - expect_plus), 0, 1e-14);
    EXPECT_NEAR(std::abs(m.eval_lateral(minus, xi) - expect_minus), 0, 1e-14);
    // principal value just above the cut equals the + lateral value
    EXPECT_NEAR(std::abs(m.eval(C(-3, 1e-14)) - expect_plus), 0, 1e-12);
}

TEST(Minors, EulerSquareSecondSheet) {
    // 2 log(1+z)/(2+z): on the principal sheet -2 is removable only if log vanishes there, which it does not
    auto m = closed_form_minor<R>("euler_square");
    LateralPath<R> pp{M_PI, {1, 1}, 0.25}, pm{M_PI, {1, -1}, 0.25};
    // after -2: (+,+) keeps log arg +pi; (+,-) moves to the next sheet
    double xi = 3;
    C Lp(std::log(2.0), M_PI), Lm(std::log(2.0), -M_PI + 2 * M_PI);
    EXPECT_NEAR(std::abs(m.eval_lateral(pp, xi) - 2.0 * Lp / C(-1)), 0, 1e-13);
    EXPECT_NEAR(std::abs(m.eval_lateral(pm, xi) - 2.0 * Lm / C(-1)), 0, 1e-13);
}

TEST(Minors, Parsing) {
    EXPECT_EQ(parse_closed_form_id("poincare(w=1/2)").params.at("w"), "1/2");
    EXPECT_EQ(parse_complex<double>("1/4"), C(0.25));
    EXPECT_EQ(parse_complex<double>("1-2i"), C(1, -2));
    EXPECT_EQ(parse_complex<double>("-i"), C(0, -1));
    EXPECT_EQ(parse_complex<double>("1e-3+2i"), C(1e-3, 2));
    EXPECT_THROW(closed_form_minor<R>("nope"), ValidationError);
    EXPECT_THROW(closed_form_minor<R>("poincare(w=2)"), ValidationError);
    EXPECT_THROW(closed_form_minor<R>("hurwitz(s=1)"), ValidationError);
    EXPECT_THROW(closed_form_minor<R>("hurwitz(s=2.5)"), ValidationError);
    auto r = closed_form_minor<R>("rational(poles=-1;2i)");
    EXPECT_EQ(r.singular_points(10).size(), 2u);
}

TEST(Minors, OnRaySorted) {
    auto m = closed_form_minor<R>("stirling");
    auto on = m.on_ray(M_PI / 2, 40);
    ASSERT_EQ(on.size(), 6u);
    for (std::size_t j = 0; j < on.size(); ++j) EXPECT_NEAR(on[j].omega.imag(), 2 * M_PI * (j + 1), 1e-12);
    EXPECT_TRUE(m.on_ray(0.3, 40).empty());
}
