#pragma once

#include <chrono>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "alien.hpp"
#include "classics.hpp"
#include "diffeo.hpp"
#include "laplace.hpp"
#include "ode.hpp"
#include "parabolic.hpp"

namespace resurgence::acceptance {

struct Outcome {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

namespace detail {

using Q = mpq_class;
using C = std::complex<double>;
inline const C I2PI(0, 2 * M_PI);

struct Report {
    bool pass = true;
    std::ostringstream os;
    Report() { os << std::setprecision(10); }
    // records |err| <= tol
    void check(const std::string& what, double err, double tol) {
        bool ok = err <= tol;
        pass = pass && ok;
        os << what << " err=" << err << (ok ? " <= " : " > ") << tol << "; ";
    }
    void require(const std::string& what, bool ok) {
        pass = pass && ok;
        os << what << (ok ? " ok" : " FAILED") << "; ";
    }
};

inline Report euler_value() {
    Report r;
    auto ex = build<Q>("euler", 10);
    auto s = laplace_ray(ex.minor, C(0), 0.0, C(1));
    r.os << "value=" << s.value.real() << "; ";
    r.check("phi(1) vs 0.59634736", std::abs(s.value - C(0.59634736)), 1e-7);
    return r;
}

inline Report euler_jump() {
    Report r;
    auto ex = build<Q>("euler", 10);
    for (C z : {C(-3), C(-2, 0.5)}) {
        auto [p, m] = lateral_pair(ex.minor, C(0), M_PI, M_PI / 4, z);
        r.check("z=" + std::to_string(z.real()) + "," + std::to_string(z.imag()),
                std::abs(p.value - m.value - I2PI * std::exp(z)), 1e-8);
    }
    return r;
}

inline Report stirling_coefficients() {
    Report r;
    auto mu = classics_detail::stirling_series<Q>(7);
    r.require("mu_1 = 1/12", mu[1] == Q(1, 12));
    r.require("mu_3 = -1/360", mu[3] == Q(-1, 360));
    r.require("mu_5 = 1/1260", mu[5] == Q(1, 1260));
    auto lam = substitute(taylor_exp<Q>(7), mu);
    const Q expect[] = {Q(1, 12), Q(1, 288), Q(-139, 51840), Q(-571, 2488320), Q(163879, 209018880)};
    for (int n = 1; n <= 5; ++n) {
        Q e = expect[n - 1];
        e.canonicalize();
        r.require("lambda_" + std::to_string(n) + " = " + e.get_str(), lam[n] == e);
    }
    return r;
}

inline Report gamma_cross_check() {
    Report r;
    auto ex = build<Q>("stirling", 10);
    for (C z : {C(5), C(8), C(6, 2)}) {
        auto s = laplace_ray(ex.minor, C(0), 0.0, z);
        C lhs = std::exp(s.value), rhs = stirling_lambda_reference(z);
        r.check("z=" + std::to_string(z.real()) + "," + std::to_string(z.imag()), std::abs(lhs - rhs) / std::abs(rhs), 1e-9);
    }
    return r;
}

inline Report stirling_jump() {
    Report r;
    auto ex = build<Q>("stirling", 10);
    C z(2, -1.2);
    auto [p, m] = lateral_pair(ex.minor, C(0), M_PI / 2, 0.4, z);
    r.check("mu+ - mu- + log(1 - e^{-2 pi i z})", std::abs(p.value - m.value + std::log(1.0 - std::exp(-I2PI * z))), 1e-8);
    return r;
}

inline Report poincare() {
    Report r;
    auto ex = build<Q>("poincare(w=1/2)", 10);
    for (C z : {C(2), C(3), C(5, 1)}) {
        auto s = borel_sum_arc(ex.minor, C(0), ex.spec.arc, z);
        r.check("sum z=" + std::to_string(z.real()) + "," + std::to_string(z.imag()),
                std::abs(s.value - poincare_reference(C(0.5), z)), 1e-8);
    }
    C z(-4, 0.3);
    auto s = borel_sum_arc(ex.minor, C(0), poincare_arc(C(0.5), 0), z);
    C omega0 = std::log(0.5);
    C formula = I2PI * std::exp(-omega0 * z) / (1.0 - std::exp(-I2PI * z));
    r.check("jump at -4+0.3i", std::abs(poincare_reference(C(0.5), z) - s.value - formula), 1e-7);
    return r;
}

inline Report hurwitz() {
    Report r;
    auto ex = build<Q>("hurwitz(s=2)", 10);
    for (C z : {C(1), C(3)}) {
        auto s = borel_sum_arc(ex.minor, C(0), ex.spec.arc, z);
        r.check("sum z=" + std::to_string(z.real()), std::abs(s.value - hurwitz_reference(2, z)), 1e-8);
    }
    auto m = measure_stokes(ex.minor, C(0), M_PI / 2, 1);
    C expect = I2PI * I2PI;
    r.os << "measured=" << m.fit.coeff[0] << "; ";
    r.check("Stokes component at 2 pi i (relative)", std::abs(m.fit.coeff[0] - expect) / std::abs(expect), 1e-4);
    return r;
}

inline Report diffeo_algebra() {
    Report r;
    std::mt19937 g(2024);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 9);
    auto q = [&] {
        Q x(num(g), den(g));
        x.canonicalize();
        return x;
    };
    auto rand_diffeo = [&](int N) {
        FormalSeries<Q> t(N);
        for (int n = 1; n <= N; ++n) t[n] = q();
        return FormalDiffeo<Q>(q(), t);
    };
    bool agree = true, inverse = true;
    for (int k = 0; k < 50; ++k) {
        auto h = rand_diffeo(25);
        auto a = invert(h, InversionMethod::lagrange), b = invert(h, InversionMethod::fixed_point);
        agree = agree && a == b;
        inverse = inverse && compose(h, a) == FormalDiffeo<Q>::identity(25) && compose(a, h) == FormalDiffeo<Q>::identity(25);
    }
    r.require("Lagrange == fixed point on 50 random diffeos, order 25", agree);
    r.require("two-sided inverses", inverse);
    bool assoc = true, unit = true;
    for (int k = 0; k < 10; ++k) {
        auto f = rand_diffeo(15), h = rand_diffeo(15), l = rand_diffeo(15);
        assoc = assoc && compose(compose(f, h), l) == compose(f, compose(h, l));
        auto id = FormalDiffeo<Q>::identity(15);
        unit = unit && compose(f, id) == f && compose(id, f) == f;
    }
    r.require("associativity", assoc);
    r.require("identity", unit);
    return r;
}

inline Report alien_combinatorics() {
    Report r;
    std::mt19937 g(6);
    std::uniform_int_distribution<int> num(-7, 7), den(1, 7);
    bool round = true;
    for (int m = 1; m <= 6; ++m) {
        FreeOperatorSeries D(m);
        for (int a = 0; a < m; ++a)
            for (int b = a + 1; b <= m; ++b) D.set({a, b}, mpq_class(num(g), den(g)));
        round = round && free_log(free_exp(D)) == D;
        auto T = FreeOperatorSeries::identity(m) + D;
        round = round && free_exp(free_log(T)) == T;
    }
    r.require("exp/log round trip, degree <= 6", round);
    auto c2 = free_exp(FreeOperatorSeries::all_letters(2)).component(2);
    r.require("Delta+_2 = Delta_2 + 1/2 Delta_{2-1} Delta_1",
              c2.coeff({0, 2}) == 1 && c2.coeff({0, 1, 2}) == mpq_class(1, 2) && c2.terms().size() == 2);
    auto c3 = free_log(FreeOperatorSeries::identity(3) + FreeOperatorSeries::all_letters(3)).component(3);
    r.require("Delta_3 in Delta+ (-1/2, -1/2, 1/3)", c3.coeff({0, 3}) == 1 && c3.coeff({0, 1, 3}) == mpq_class(-1, 2) &&
                                                          c3.coeff({0, 2, 3}) == mpq_class(-1, 2) &&
                                                          c3.coeff({0, 1, 2, 3}) == mpq_class(1, 3));
    auto w2 = median_weights(2), w3 = median_weights(3);
    r.require("r=2 weights 1/2, 1/2", w2.at({1}) == mpq_class(1, 2) && w2.at({-1}) == mpq_class(1, 2));
    r.require("r=3 weights 1/3, 1/6, 1/6, 1/3", w3.at({1, 1}) == mpq_class(1, 3) && w3.at({1, -1}) == mpq_class(1, 6) &&
                                                    w3.at({-1, 1}) == mpq_class(1, 6) && w3.at({-1, -1}) == mpq_class(1, 3));
    return r;
}

inline Report stokes_measurement() {
    Report r;
    auto e = measure_stokes(closed_form_minor<double>("euler"), C(0), M_PI, 1);
    r.check("Euler S_-1 vs 2 pi i (relative)", std::abs(e.fit.coeff[0] - I2PI) / (2 * M_PI), 1e-6);
    auto s = measure_stokes(closed_form_minor<double>("stirling"), C(0), M_PI / 2, 2);
    r.check("Stirling component 1", std::abs(s.fit.coeff[0] - 1.0), 1e-5);
    r.check("Stirling component 1/2", std::abs(s.fit.coeff[1] - 0.5), 1e-5);
    return r;
}

inline Report riccati_bridge() {
    Report r;
    const int N = 60;
    auto p = OdeProblem<hp_complex>::riccati(hp_complex(1), hp_complex(1), N + 1);
    auto m = measure_ode_stokes(p, N);
    double ref = 2 * std::sin(0.5);
    r.os << "C_-1=" << m.C << " est_error=" << m.est_error << "; ";
    r.check("Riccati C_-1 vs 2 sin(1/2) (relative)", std::abs(m.C - ref) / ref, 1e-4);
    auto e = measure_ode_stokes(OdeProblem<Q>::euler(31), 30);
    r.check("Euler C_-1 vs 2 pi i (relative)", std::abs(e.C - I2PI) / (2 * M_PI), 1e-5);
    return r;
}

inline Report parabolic_pipeline() {
    using R = long double;
    using Cx = std::complex<R>;
    using Germ = ParabolicGerm<Q, R>;
    Report r;
    const int N = 40;
    auto f0 = Germ::translation(N + 2);
    auto i0 = invariants(f0, 2, 2.0);
    double a0 = 0;
    for (auto& a : i0.A_plus) a0 = std::max(a0, std::abs(a));
    for (auto& a : i0.A_minus) a0 = std::max(a0, std::abs(a));
    r.check("(a) f0: max |A_m|", a0, 1e-10);

    // h = id + z^-1, conjugated normal form h^-1 o f0 o h
    auto h_eval = [](Cx z) { return z + R(1) / z; };
    auto h_inv = [](Cx w) { return w / R(2) * (R(1) + std::sqrt(R(1) - R(4) / (w * w))); };
    FormalDiffeo<Q> h(Q(0), FormalSeries<Q>::monomial(1, N + 2, Q(1)));
    auto fm = f0.conjugated(invert(h), h_inv, h_eval);
    auto im = invariants(fm, 2, 2.0);
    double am = 0;
    for (auto& a : im.A_plus) am = std::max(am, std::abs(a));
    for (auto& a : im.A_minus) am = std::max(am, std::abs(a));
    r.check("(b) conjugated normal form: max |A_m|", am, 1e-6);

    auto f = Germ::laurent({Q(0), Q(0), Q(1)}, N + 2);
    auto i2 = invariants(f, 2, 2.0), i3 = invariants(f, 2, 3.0);
    r.os << "A_1=" << i2.A_plus[0] << " A_-1=" << i2.A_minus[0] << "; ";
    r.check("(c) A_1 at Y=2 vs Y=3 (relative)", std::abs(i2.A_plus[0] - i3.A_plus[0]) / std::abs(i2.A_plus[0]), 1e-5);
    r.check("(c) A_-1 at Y=2 vs Y=3 (relative)", std::abs(i2.A_minus[0] - i3.A_minus[0]) / std::abs(i2.A_minus[0]), 1e-5);
    auto g = f.conjugated(h, h_eval, h_inv);
    auto ig = invariants(g, 2, 2.0);
    double dm = 0;
    for (int m = 0; m < 2; ++m) {
        dm = std::max(dm, std::abs(std::abs(ig.A_plus[m]) - std::abs(i2.A_plus[m])));
        dm = std::max(dm, std::abs(std::abs(ig.A_minus[m]) - std::abs(i2.A_minus[m])));
    }
    r.check("(c) | |A_m(g)| - |A_m(f)| |, m <= 2", dm, 1e-6);

    auto it = iterator_series(f, 20);
    auto vf = compose(it.v_star, f.f);
    auto f0v = compose(FormalDiffeo<Q>::translation(Q(1), 20), it.v_star);
    r.require("(d) iterator conjugacy residual exactly zero through order 20", vf == f0v);
    return r;
}

inline Report gevrey_suite() {
    Report r;
    for (const char* id : {"euler", "stirling"}) {
        auto ex = build<Q>(id, 16);
        std::function<std::pair<C, double>(const C&)> fn = [&](const C& z) {
            auto s = laplace_ray(ex.minor, C(0), 0.0, z);
            return std::make_pair(s.value, static_cast<double>(s.est_error + s.tail_bound) + 1e-15 * std::abs(s.value));
        };
        auto rep = gevrey_residual<Q, C>(ex.series, fn, {C(8), C(10), C(20)}, 15);
        r.os << id << ": L=" << rep.L << " M=" << rep.M << " inflation=" << rep.inflation << "; ";
        r.require(std::string(id) + " envelope holds for N <= 15", rep.holds);
    }
    return r;
}

}  // namespace detail

struct Criterion {
    int id;
    const char* name;
    std::function<detail::Report()> run;
};

inline const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "Euler value at z=1", detail::euler_value},
        {2, "Euler Stokes jump", detail::euler_jump},
        {3, "Stirling coefficients (exact)", detail::stirling_coefficients},
        {4, "Gamma cross-check", detail::gamma_cross_check},
        {5, "Stirling jump", detail::stirling_jump},
        {6, "Poincare sum and sector jump", detail::poincare},
        {7, "Hurwitz sum and Stokes component", detail::hurwitz},
        {8, "Diffeo algebra", detail::diffeo_algebra},
        {9, "Alien combinatorics", detail::alien_combinatorics},
        {10, "Stokes measurement", detail::stokes_measurement},
        {11, "Riccati Bridge constant", detail::riccati_bridge},
        {12, "Parabolic pipeline", detail::parabolic_pipeline},
        {13, "Gevrey property suite", detail::gevrey_suite},
    };
    return list;
}

inline Outcome run_one(const Criterion& c) {
    Outcome o;
    o.id = c.id;
    o.name = c.name;
    auto t0 = std::chrono::steady_clock::now();
    try {
        auto rep = c.run();
        o.pass = rep.pass;
        o.detail = rep.os.str();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return o;
}

// Runs every criterion, printing one line per criterion as it completes.
inline std::vector<Outcome> run_all(std::ostream& out) {
    std::vector<Outcome> all;
    for (auto& c : criteria()) {
        auto o = run_one(c);
        out << (o.pass ? "PASS" : "FAIL") << " [" << std::setw(2) << o.id << "] " << o.name << " (" << std::fixed
            << std::setprecision(1) << o.seconds << " s) " << std::defaultfloat << o.detail << "\n";
        out.flush();
        all.push_back(o);
    }
    return all;
}

}  // namespace resurgence::acceptance
