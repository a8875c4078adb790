#include <gtest/gtest.h>

#include <resurgence/diffeo.hpp>

#include "test_util.hpp"

using namespace resurgence;
using namespace testutil;
using D = FormalDiffeo<Q>;

namespace {

D rand_diffeo(std::mt19937& g, int order, bool with_sigma = true) {
    return D(with_sigma ? rand_q(g) : Q(0), rand_series(g, order, 1));
}

D id(int N) { return D::identity(N); }

}  // namespace

TEST(Compose, Examples) {
    std::mt19937 g(1);
    auto f = rand_diffeo(g, 10);
    EXPECT_EQ(compose(f, id(10)), f);
    EXPECT_EQ(compose(id(10), f), f);
    EXPECT_EQ(compose(D::translation(1, 6), D::translation(1, 6)), D::translation(2, 6));
    // (id + z^-1) o (id + 1) = id + 1 + 1/(z+1)
    D a(0, FormalSeries<Q>::monomial(1, 8));
    D c = compose(a, D::translation(1, 8));
    EXPECT_EQ(c.sigma, Q(1));
    for (int n = 1; n <= 8; ++n) EXPECT_EQ(c.tail[n], Q(n % 2 ? 1 : -1));
}

TEST(Invert, Translation) {
    for (auto m : {InversionMethod::lagrange, InversionMethod::fixed_point})
        EXPECT_EQ(invert(D::translation(Q(5, 3), 7), m), D::translation(Q(-5, 3), 7));
}

TEST(Invert, ZInverse) {
    // Oracle: w = z - 1/w solved by iterating the substitution on exact series.
    D h(0, FormalSeries<Q>::monomial(1, 12));
    for (auto m : {InversionMethod::lagrange, InversionMethod::fixed_point}) {
        D u = invert(h, m);
        EXPECT_EQ(u.tail[1], Q(-1));
        EXPECT_EQ(u.tail[2], Q(0));
        EXPECT_EQ(u.tail[3], Q(-1));
        EXPECT_EQ(u.tail[5], Q(-2));
        EXPECT_EQ(u.tail[7], Q(-5));
        EXPECT_EQ(compose(h, u), id(12));
        EXPECT_EQ(compose(u, h), id(12));
    }
}

TEST(Invert, Involution) {
    std::mt19937 g(2);
    for (int t = 0; t < 5; ++t) {
        auto h = rand_diffeo(g, 20);
        EXPECT_EQ(invert(invert(h)), h);
    }
}

TEST(Invert, MethodsAgreeOn50RandomOrder25) {
    std::mt19937 g(3);
    for (int t = 0; t < 50; ++t) {
        auto h = rand_diffeo(g, 25);
        auto a = invert(h, InversionMethod::lagrange);
        auto b = invert(h, InversionMethod::fixed_point);
        ASSERT_EQ(a, b);
        EXPECT_EQ(compose(h, a), id(25));
    }
}

TEST(Group, Axioms) {
    std::mt19937 g(4);
    for (int t = 0; t < 10; ++t) {
        auto f = rand_diffeo(g, 15), h = rand_diffeo(g, 15), k = rand_diffeo(g, 15);
        EXPECT_EQ(compose(compose(f, h), k), compose(f, compose(h, k)));
        EXPECT_EQ(compose(f, invert(f)), id(15));
        EXPECT_EQ(compose(invert(f), f), id(15));
        EXPECT_EQ(compose(f, h).sigma, f.sigma + h.sigma);
        EXPECT_EQ(invert(f).sigma, -f.sigma);
    }
}

TEST(Group, TangentSubgroupClosure) {
    std::mt19937 g(5);
    auto f = rand_diffeo(g, 15, false), h = rand_diffeo(g, 15, false);
    EXPECT_EQ(compose(f, h).sigma, Q(0));
    EXPECT_EQ(invert(f).sigma, Q(0));
    EXPECT_EQ(compose(f, h).tail[0], Q(0));
}

TEST(Float, AgreesWithExact) {
    using C = std::complex<double>;
    std::mt19937 g(6);
    auto h = rand_diffeo(g, 10);
    FormalSeries<C> t(10);
    for (int n = 0; n <= 10; ++n) t[n] = from_rational<C>(h.tail[n]);
    FormalDiffeo<C> hf(from_rational<C>(h.sigma), t);
    auto ue = invert(h);
    auto uf = invert(hf);
    for (int n = 1; n <= 10; ++n)
        EXPECT_NEAR(std::abs(uf.tail[n] - from_rational<C>(ue.tail[n])), 0, 1e-9 * (1 + magnitude(ue.tail[n])));
}
