#include <gtest/gtest.h>

#include <resurgence/borel.hpp>

#include "test_util.hpp"

using namespace resurgence;
using namespace testutil;
using C = std::complex<double>;

namespace {

FormalSeries<Q> euler_series(int N) {
    FormalSeries<Q> e(N);
    Q f = 1;
    for (int n = 0; n < N; ++n) {
        if (n) f *= n;
        e[n + 1] = (n % 2 ? -f : f);
    }
    return e;
}

Q factorial(int n) {
    Q f = 1;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

}  // namespace

TEST(Borel, Examples) {
    auto b = borel(FormalSeries<Q>::monomial(1, 5));
    EXPECT_EQ(b.delta, Q(0));
    EXPECT_EQ(b.minor[0], Q(1));
    for (int n = 1; n < 5; ++n) EXPECT_EQ(b.minor[n], Q(0));

    auto e = borel(euler_series(12));
    for (int n = 0; n < 12; ++n) EXPECT_EQ(e.minor[n], Q(n % 2 ? -1 : 1));

    Q c(2, 3);
    auto s = borel(shift(FormalSeries<Q>::monomial(1, 10), Q(-c)));
    Q cn = 1;
    for (int n = 0; n < 10; ++n) {
        EXPECT_EQ(s.minor[n], cn / factorial(n));
        cn *= c;
    }
}

TEST(Borel, RoundTrip) {
    std::mt19937 g(1);
    auto phi = rand_series(g, 20);
    EXPECT_EQ(inverse_borel(borel(phi)), phi);
}

TEST(Convolve, Examples) {
    std::mt19937 g(2);
    BorelFunction<Q> delta{1, TaylorGerm<Q>(8)};
    auto f = borel(rand_series(g, 8));
    auto r = convolve(delta, f);
    EXPECT_EQ(r.delta, f.delta);
    for (int n = 0; n < 8; ++n) EXPECT_EQ(r.minor[n], f.minor[n]);

    BorelFunction<Q> one{0, TaylorGerm<Q>(std::vector<Q>{1, 0, 0, 0})};
    auto z = convolve(one, one);
    EXPECT_EQ(z.minor[1], Q(1));
    EXPECT_EQ(z.minor[0], Q(0));

    // (zeta e^zeta) * (zeta^2/2 e^zeta) = zeta^4/4! e^zeta
    const int N = 9;
    BorelFunction<Q> a{0, TaylorGerm<Q>(N)}, b{0, TaylorGerm<Q>(N)}, expect{0, TaylorGerm<Q>(N)};
    for (int n = 0; n < N; ++n) {
        if (n >= 1) a.minor[n] = 1 / factorial(n - 1);                       // zeta^1/1! e^zeta
        if (n >= 2) b.minor[n] = 1 / (factorial(2) * factorial(n - 2));      // zeta^2/2! e^zeta
        if (n >= 4) expect.minor[n] = 1 / (factorial(4) * factorial(n - 4));
    }
    auto ab = convolve(a, b);
    for (int n = 0; n < N; ++n) EXPECT_EQ(ab.minor[n], expect.minor[n]) << n;
}

TEST(Convolve, BorelIsAlgebraIsomorphism) {
    std::mt19937 g(3);
    for (int t = 0; t < 5; ++t) {
        auto a = rand_series(g, 25), b = rand_series(g, 25);
        auto lhs = borel(mul(a, b));
        auto rhs = convolve(borel(a), borel(b));
        EXPECT_EQ(lhs.delta, rhs.delta);
        for (int n = 0; n < 25; ++n) EXPECT_EQ(lhs.minor[n], rhs.minor[n]);
    }
}

TEST(Borel, DerivativeAndShiftRules) {
    std::mt19937 g(4);
    auto phi = rand_series(g, 20);
    auto d = borel(derive(phi)), b = borel(phi);
    EXPECT_EQ(d.delta, Q(0));
    EXPECT_EQ(d.minor[0], Q(0));
    for (int n = 1; n < 19; ++n) EXPECT_EQ(d.minor[n], -b.minor[n - 1]);

    // B(T_c phi) minor = e^{-c zeta} phi_hat (+ constant part): check via convolution with delta-free exponential
    Q c(1, 2);
    auto t = borel(shift(phi, c));
    TaylorGerm<Q> ex(20);
    Q cn = 1;
    for (int n = 0; n < 20; ++n) {
        ex[n] = cn / factorial(n);
        cn *= -c;
    }
    auto prod = taylor_mul(ex, b.minor);
    EXPECT_EQ(t.delta, b.delta);
    for (int n = 0; n < 20; ++n) EXPECT_EQ(t.minor[n], prod[n]);
}

TEST(ConvolveNumeric, Examples) {
    auto one = [](C) { return C(1); };
    auto ex = [](C z) { return std::exp(z); };
    EXPECT_NEAR(std::abs(convolve_numeric<double>(one, one, C(2)).value - C(2)), 0, 1e-12);
    EXPECT_NEAR(std::abs(convolve_numeric<double>(ex, ex, C(1)).value - std::exp(1.0)), 0, 1e-10);
}

TEST(ConvolveNumeric, MatchesCoefficientConvolution) {
    std::mt19937 g(5);
    BorelFunction<Q> a{0, TaylorGerm<Q>(22)}, b{0, TaylorGerm<Q>(22)};
    for (int n = 0; n <= 10; ++n) {
        a.minor[n] = rand_q(g);
        b.minor[n] = rand_q(g);
    }
    auto ab = convolve(a, b);
    auto poly = [](const TaylorGerm<Q>& p) {
        return [p](C z) {
            C s = 0;
            for (int n = static_cast<int>(p.size()) - 1; n >= 0; --n) s = s * z + p[n].get_d();
            return s;
        };
    };
    C zeta(0.5, 0);
    auto v = convolve_numeric<double>(poly(a.minor), poly(b.minor), zeta);
    EXPECT_NEAR(std::abs(v.value - poly(ab.minor)(zeta)), 0, 1e-10);
    EXPECT_LT(v.error, 1e-10);
}

TEST(SolveDifference, Examples) {
    EXPECT_EQ(solve_difference(FormalSeries<Q>(10)), FormalSeries<Q>(9));
    auto phi = solve_difference(FormalSeries<Q>::monomial(2, 10));
    EXPECT_EQ(phi[1], Q(-1));
    EXPECT_EQ(phi[2], Q(-1, 2));
    EXPECT_EQ(phi[3], Q(-1, 6));
    auto back = shift(phi, Q(1)) - phi;
    for (int n = 0; n <= 8; ++n) EXPECT_EQ(back[n], n == 2 ? Q(1) : Q(0));
    EXPECT_THROW(solve_difference(FormalSeries<Q>::monomial(1, 5)), ValidationError);
}

TEST(SolveDifference, ResubstitutionRandom) {
    std::mt19937 g(6);
    auto psi = rand_series(g, 18, 2);
    auto phi = solve_difference(psi);
    auto back = shift(phi, Q(1)) - phi;
    for (int n = 0; n <= back.order(); ++n) EXPECT_EQ(back[n], psi[n]);
    EXPECT_EQ(phi[0], Q(0));
}

TEST(Growth, ConvergentVsDivergent) {
    // geometric a_n = 2^-n : |b_n n!|^{1/n} stays bounded
    FormalSeries<Q> geo(30);
    for (int n = 1; n <= 30; ++n) geo[n] = Q(1, 1 << std::min(n, 30));
    auto bg = borel(geo);
    for (int n = 5; n < 30; ++n) {
        double r = std::pow(std::fabs(Q(bg.minor[n] * factorial(n)).get_d()), 1.0 / n);
        EXPECT_LT(r, 1.0);
    }
    // Euler: minor radius 1 by the root test
    auto be = borel(euler_series(40));
    double root = std::pow(std::fabs(be.minor[39].get_d()), 1.0 / 39);
    EXPECT_NEAR(1.0 / root, 1.0, 0.05);
}
