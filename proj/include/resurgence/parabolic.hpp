#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "alien.hpp"
#include "borel.hpp"
#include "diffeo.hpp"
#include "errors.hpp"
#include "formal.hpp"

namespace resurgence {

// f = id + 1 + O(z^-2) with exact series and numerical evaluators for f and f^-1.
template <class T, class R = long double>
struct ParabolicGerm {
    using Cx = std::complex<R>;
    using Map = std::function<Cx(Cx)>;

    FormalDiffeo<T> f;
    Map eval, inverse;

    ParabolicGerm(FormalDiffeo<T> series, Map fe, Map fi) : f(std::move(series)), eval(std::move(fe)), inverse(std::move(fi)) {
        if (!(f.sigma == from_int<T>(1))) throw ValidationError("parabolic germ: translation part must be 1");
        if (f.order() >= 1 && !is_zero(f.tail[1], 0.0)) throw ValidationError("parabolic germ: nonzero resiter (z^-1 term)");
        check_evaluator();
    }

    static ParabolicGerm translation(int N) {
        return ParabolicGerm(FormalDiffeo<T>::translation(from_int<T>(1), N), [](Cx z) { return z + R(1); },
                             [](Cx z) { return z - R(1); });
    }

    // f(z) = z + 1 + sum_k c_k z^-k, c[k] the coefficient of z^-k (c[0], c[1] must vanish)
    static ParabolicGerm laurent(const std::vector<T>& c, int N) {
        FormalSeries<T> tail(N);
        for (int k = 0; k < static_cast<int>(c.size()) && k <= N; ++k) tail[k] = c[k];
        if (static_cast<int>(c.size()) > N + 1)
            for (std::size_t k = N + 1; k < c.size(); ++k)
                if (!is_zero(c[k], 0.0)) throw ValidationError("laurent germ: order too small for the tail");
        std::vector<Cx> cc;
        for (auto& x : c) cc.push_back(to_complex<R>(x));
        auto fe = [cc](Cx z) {
            Cx s = 0, w = R(1) / z;
            for (std::size_t k = cc.size(); k-- > 0;) s = s * w + cc[k];
            return z + R(1) + s;
        };
        auto fp = [cc](Cx z) {
            Cx s = 0, w = R(1) / z;
            for (std::size_t k = cc.size(); k-- > 1;) s = s * w - R(k) * cc[k];
            return R(1) + s * w * w;  // derivative of sum c_k z^-k is -k c_k z^-k-1
        };
        auto fi = [fe, fp](Cx z) {
            Cx w = z - R(1);
            for (int it = 0; it < 60; ++it) {
                Cx d = (fe(w) - z) / fp(w);
                w -= d;
                if (std::abs(d) <= 4 * std::numeric_limits<R>::epsilon() * (1 + std::abs(w))) return w;
            }
            throw NumericError("laurent germ: inverse did not converge", 0);
        };
        return ParabolicGerm(FormalDiffeo<T>(from_int<T>(1), tail), fe, fi);
    }

    // h o f o h^-1 for a convergent h = id + chi with evaluators for h and h^-1.
    ParabolicGerm conjugated(const FormalDiffeo<T>& h, Map he, Map hi) const {
        auto g = compose(h, compose(f, invert(h)));
        Map fe = eval, fi = inverse;
        return ParabolicGerm(g, [=](Cx z) { return he(fe(hi(z))); }, [=](Cx z) { return he(fi(hi(z))); });
    }

private:
    void check_evaluator() const {
        const R r = 20;
        for (Cx z : {Cx(r, 0), Cx(0, r), Cx(0, -r), Cx(-r, 0)}) {
            Cx s = z + R(1), zi = R(1) / z, p = 1;
            R last = 0;
            for (int n = 1; n <= f.order(); ++n) {
                p *= zi;
                Cx t = to_complex<R>(f.tail[n]) * p;
                s += t;
                if (std::abs(t) > 0) last = std::abs(t);
            }
            R diff = std::abs(eval(z) - s);
            if (!(diff <= std::max(R(1e-10), 100 * last)))
                throw ValidationError("parabolic germ: evaluator disagrees with the series at |z| = 20");
            if (!(std::abs(inverse(eval(z)) - z) <= R(1e-10) * std::abs(z)))
                throw ValidationError("parabolic germ: inverse evaluator is not an inverse");
        }
    }
};

template <class T>
struct IteratorPair {
    FormalDiffeo<T> v_star, u_star;
    int N = 0;
};

// v = id + phi with phi(z + 1 + beta) - phi(z) = -beta, f = id + 1 + beta; u = v^-1.
template <class T>
IteratorPair<T> iterator_series(const FormalDiffeo<T>& f, int N) {
    if (!(f.sigma == from_int<T>(1))) throw ValidationError("iterator_series: translation part must be 1");
    if (f.order() >= 1 && !is_zero(f.tail[1], 0.0)) throw ValidationError("iterator_series: nonzero resiter");
    const int M = N + 2;
    if (f.order() < M) throw ValidationError("iterator_series: germ series known only to a lower order");
    FormalSeries<T> beta = f.tail.truncated(M);
    FormalSeries<T> one_beta = beta, one = FormalSeries<T>::constant(from_int<T>(1), M);
    one_beta[0] = from_int<T>(1);
    FormalSeries<T> phi(M);
    for (int it = 0; it <= M; ++it) {
        FormalSeries<T> rhs = -beta - (compose_tail(phi, one_beta) - compose_tail(phi, one));
        FormalSeries<T> next = solve_difference(rhs);
        phi = next.truncated(M);
        if (next.order() < M)
            for (int n = next.order() + 1; n <= M; ++n) phi[n] = T(0);
    }
    IteratorPair<T> out;
    out.N = N;
    out.v_star = FormalDiffeo<T>(T(0), phi.truncated(N));
    out.u_star = invert(out.v_star);
    // v o f = f0 o v through order N
    auto vf = compose(FormalDiffeo<T>(T(0), phi), f);
    FormalSeries<T> res = vf.tail.truncated(N) - phi.truncated(N);
    for (int n = 0; n <= N; ++n)
        if (!is_zero(res[n], is_exact_v<T> ? 0.0 : 1e-25))
            throw NumericError("iterator_series: conjugacy residual", static_cast<double>(magnitude(res[n])));
    if (!(vf.sigma == from_int<T>(1)))
        throw NumericError("iterator_series: conjugacy residual in the translation part", 0);
    return out;
}

template <class T, class R>
IteratorPair<T> iterator_series(const ParabolicGerm<T, R>& g, int N) {
    return iterator_series(g.f, N);
}

enum class FatouSide { plus, minus };
enum class HornSide { up, low };

template <class R>
struct FatouValue {
    std::complex<R> value;
    R est_error = 0;
    int steps = 0;
};

// Fatou coordinates v+- from orbits pushed into the region where the truncated iterator
// series is accurate: v+(z) = v*(f^n(z)) - n, v-(z) = v*(f^-n(z)) + n.
template <class R = long double>
class FatouCoordinates {
public:
    using Cx = std::complex<R>;
    using Map = std::function<Cx(Cx)>;

    template <class T>
    FatouCoordinates(const ParabolicGerm<T, R>& g, const IteratorPair<T>& it) : f_(g.eval), finv_(g.inverse) {
        for (int n = 0; n <= it.v_star.order(); ++n) a_.push_back(to_complex<R>(it.v_star.tail[n]));
    }

    // truncated v* at w, stopped before the terms start to grow. The error is the last kept
    // term when stopped early, else the size of the trailing terms.
    std::pair<Cx, R> series(Cx w) const {
        Cx s = w, zi = R(1) / w, p = 1;
        R last = 0, trailing = 0;
        const std::size_t N = a_.size() - 1;
        for (std::size_t n = 1; n <= N; ++n) {
            p *= zi;
            Cx t = a_[n] * p;
            R m = std::abs(t);
            if (n + 4 > N) trailing = std::max(trailing, m);
            if (m == 0) continue;
            if (last > 0 && m > last) return {s, last};
            s += t;
            last = m;
        }
        return {s, trailing};
    }

    FatouValue<R> eval(FatouSide side, Cx z, int n_max = 100000, R tol = default_tol()) const {
        const Map& step = side == FatouSide::plus ? f_ : finv_;
        const R dir = side == FatouSide::plus ? R(1) : R(-1);
        Cx w = z;
        int n = 0;
        R drift = 0;
        for (;;) {
            if (dir * w.real() >= std::abs(w.imag()) && std::abs(w) >= R(6)) {
                auto [s, err] = series(w);
                if (err < tol / 10) {
                    FatouValue<R> out;
                    out.value = s - dir * R(n);
                    out.est_error = err + drift + std::numeric_limits<R>::epsilon() * std::abs(w);
                    out.steps = n;
                    return out;
                }
            }
            if (n >= n_max) throw NumericError("fatou: orbit did not reach the asymptotic region", static_cast<double>(std::abs(w)));
            Cx next = step(w);
            if (std::abs(next - w - dir) > R(0.5))
                throw ValidationError("fatou: point outside the certified domain");
            drift += std::numeric_limits<R>::epsilon() * std::abs(next);
            w = next;
            ++n;
        }
    }

    // u- : inverse of v-, by Newton with a central-difference derivative
    Cx u_minus(Cx z, R tol = default_tol()) const {
        Cx w = z;
        const R h = std::cbrt(std::numeric_limits<R>::epsilon()) * 4;
        for (int it = 0; it < 40; ++it) {
            Cx F = eval(FatouSide::minus, w, 100000, tol).value - z;
            if (std::abs(F) <= 10 * tol * (1 + std::abs(z))) return w;
            Cx d = (eval(FatouSide::minus, w + h, 100000, tol).value - eval(FatouSide::minus, w - h, 100000, tol).value) /
                   (R(2) * h);
            w -= F / d;
        }
        throw NumericError("horn map: inversion of v- failed", 0);
    }

    Cx horn(Cx z, R tol = default_tol()) const { return eval(FatouSide::plus, u_minus(z, tol), 100000, tol).value; }

    static R default_tol() { return std::numeric_limits<R>::epsilon() * 64; }

private:
    Map f_, finv_;
    std::vector<Cx> a_;
};

template <class T, class R>
FatouValue<R> fatou_numeric(const ParabolicGerm<T, R>& g, FatouSide side, std::complex<R> z, int n_max = 100000,
                            R tol = FatouCoordinates<R>::default_tol(), int N = 40) {
    FatouCoordinates<R> fc(g, iterator_series(g, N));
    return fc.eval(side, z, n_max, tol);
}

template <class T, class R>
std::complex<R> horn_map(const ParabolicGerm<T, R>& g, HornSide side, std::complex<R> z, int N = 40) {
    if ((side == HornSide::up) != (z.imag() > 0)) throw ValidationError("horn map: point on the wrong side");
    FatouCoordinates<R> fc(g, iterator_series(g, N));
    return fc.horn(z);
}

struct HornInvariants {
    std::vector<std::complex<double>> A_plus;   // A_1 .. A_m
    std::vector<std::complex<double>> A_minus;  // A_-1 .. A_-m
    double Y = 2;
    std::vector<double> discrepancy_plus, discrepancy_minus;  // |A(Y) - A(Y+1)| per m
    std::vector<double> noise_plus, noise_minus;              // amplified evaluation noise at Y+1
    std::vector<double> est_error;  // per m: min(discrepancy, noise) scaled from Y+1 back to Y
    bool consistent = true;
};

inline constexpr int kHornNodes = 64;

namespace parabolic_detail {

// A_{sign m}, m = 1..m_max, from h - id sampled on Im z = +-Y
template <class R>
std::vector<std::complex<double>> fourier(const FatouCoordinates<R>& fc, HornSide side, int m_max, double Y) {
    using Cx = std::complex<R>;
    std::vector<Cx> P(kHornNodes);
    const R y = side == HornSide::up ? R(Y) : R(-Y);
    for (int k = 0; k < kHornNodes; ++k) {
        Cx z(R(k) / kHornNodes, y);
        P[k] = fc.horn(z) - z;
    }
    std::vector<std::complex<double>> A;
    const R twopi = 2 * pi_v<R>;
    for (int m = 1; m <= m_max; ++m) {
        Cx s = 0;
        R sg = side == HornSide::up ? R(-1) : R(1);  // up: P = sum A_-m e^{2 pi i m z}
        for (int k = 0; k < kHornNodes; ++k) s += P[k] * std::polar(R(1), sg * twopi * m * k / kHornNodes);
        s *= std::exp(twopi * m * R(Y)) / R(kHornNodes);
        A.push_back({static_cast<double>(s.real()), static_cast<double>(s.imag())});
    }
    return A;
}

}  // namespace parabolic_detail

// Ecalle-Voronin invariants from trapezoid Fourier sums at heights +-Y, cross-checked at +-(Y+1).
template <class T, class R>
HornInvariants invariants(const ParabolicGerm<T, R>& g, int m_max, double Y = 2, int N = 40) {
    if (m_max < 1 || 2 * m_max >= kHornNodes) throw ValidationError("invariants: 1 <= m_max < nodes/2 required");
    if (!(Y > 0)) throw ValidationError("invariants: Y > 0 required");
    FatouCoordinates<R> fc(g, iterator_series(g, N));
    HornInvariants inv;
    inv.Y = Y;
    inv.A_plus = parabolic_detail::fourier(fc, HornSide::low, m_max, Y);
    inv.A_minus = parabolic_detail::fourier(fc, HornSide::up, m_max, Y);
    auto Ap2 = parabolic_detail::fourier(fc, HornSide::low, m_max, Y + 1);
    auto Am2 = parabolic_detail::fourier(fc, HornSide::up, m_max, Y + 1);
    const double eval_noise = 1e3 * static_cast<double>(FatouCoordinates<R>::default_tol());
    for (int m = 1; m <= m_max; ++m) {
        double noise = eval_noise * std::exp(2 * M_PI * m * (Y + 1));
        double dp = std::abs(inv.A_plus[m - 1] - Ap2[m - 1]), dm = std::abs(inv.A_minus[m - 1] - Am2[m - 1]);
        inv.discrepancy_plus.push_back(dp);
        inv.discrepancy_minus.push_back(dm);
        inv.noise_plus.push_back(noise);
        inv.noise_minus.push_back(noise);
        inv.est_error.push_back(std::min(std::max(dp, dm), noise) * std::exp(-2 * M_PI * m));
        // only the first harmonic is required to be resolved at both heights
        if (m == 1) {
            double scale = std::max({std::abs(inv.A_plus[0]), std::abs(inv.A_minus[0]), 1e-300});
            if (std::max(dp, dm) > noise + 1e-6 * scale) inv.consistent = false;
        }
    }
    if (!inv.consistent) throw NumericError("invariants: heights Y and Y+1 disagree", std::max(inv.discrepancy_plus[0], inv.discrepancy_minus[0]));
    return inv;
}

struct BridgeConstants {
    StokesData up;    // ray +i R: omega = 2 pi i m, S+ = A_m
    StokesData down;  // ray -i R: omega = -2 pi i m, S- = A_-m
};

inline BridgeConstants bridge_constants(const HornInvariants& inv) {
    const std::complex<double> w_up(0, 2 * M_PI), w_down(0, -2 * M_PI);
    BridgeConstants b;
    b.up = StokesData::from_C(w_up, stokes_log(inv.A_plus, w_up, true));
    b.down = StokesData::from_C(w_down, stokes_log(inv.A_minus, w_down, false));
    return b;
}

}  // namespace resurgence
