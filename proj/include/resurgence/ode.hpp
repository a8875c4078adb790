#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "borel.hpp"
#include "errors.hpp"
#include "formal.hpp"
#include "laplace.hpp"
#include "pade.hpp"

namespace resurgence {

// dphi/dz = B(z, phi) with B(z, y) = sum_n b_n(z) y^n.
template <class T>
struct OdeProblem {
    std::vector<FormalSeries<T>> b;

    explicit OdeProblem(std::vector<FormalSeries<T>> coeffs) : b(std::move(coeffs)) {
        if (b.size() < 2) throw ValidationError("ode: need b_0 and b_1");
        for (std::size_t n = 0; n < b.size(); ++n) {
            if (!is_zero(b[n][0], 0.0) && n != 1) throw ValidationError("ode: b_n must be O(z^-1) for n != 1");
        }
        if (!(b[1][0] == from_int<T>(1))) throw ValidationError("ode: b_1 must be 1 + O(z^-2)");
        if (b[1].order() >= 1 && !is_zero(b[1][1], 0.0)) throw ValidationError("ode: b_1 must be 1 + O(z^-2)");
    }

    int degree() const { return static_cast<int>(b.size()) - 1; }
    int order() const {
        int N = b[0].order();
        for (auto& s : b) N = std::min(N, s.order());
        return N;
    }

    // B = -z^-1 + y
    static OdeProblem euler(int N) {
        return OdeProblem({FormalSeries<T>::monomial(1, N, from_int<T>(-1)), FormalSeries<T>::constant(from_int<T>(1), N)});
    }
    // B = y
    static OdeProblem linear(int N) {
        return OdeProblem({FormalSeries<T>(N), FormalSeries<T>::constant(from_int<T>(1), N)});
    }
    // B = y - (B_- + B_+ y^2) z^-1 / (2 pi i)
    static OdeProblem riccati(const T& Bm, const T& Bp, int N) {
        static_assert(!is_exact_v<T>, "riccati coefficients involve 1/(2 pi i)");
        using RR = std::conditional_t<std::is_same_v<T, hp_complex>, hp_real, typename std::conditional_t<std::is_same_v<T, hp_complex>, std::complex<double>, T>::value_type>;
        T k = T(1) / T(RR(0), 2 * pi_v<RR>);
        return OdeProblem({FormalSeries<T>::monomial(1, N, -k * Bm), FormalSeries<T>::constant(from_int<T>(1), N),
                           FormalSeries<T>::monomial(1, N, -k * Bp)});
    }
};

template <class T>
struct FormalIntegral {
    std::vector<FormalSeries<T>> phi;  // phi_0 .. phi_nmax
};

namespace ode_detail {

template <class T>
FormalSeries<T> fit(const FormalSeries<T>& s, int N) {
    return s.truncated(N);
}

// (1/r!) d^r B/dy^r (z, phi0) = sum_{k>=r} C(k, r) b_k phi0^{k-r}
template <class T>
FormalSeries<T> dyB_over_fact(const OdeProblem<T>& p, int r, const FormalSeries<T>& phi0) {
    int N = phi0.order();
    FormalSeries<T> out(N), pw = FormalSeries<T>::constant(from_int<T>(1), N);
    for (int k = r; k <= p.degree(); ++k) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), k, r);
        out += fit(p.b[k], N) * pw * from_rational<T>(mpq_class(binom));
        pw = pw * phi0;
    }
    return out;
}

template <class T>
FormalSeries<T> eval_B(const OdeProblem<T>& p, const FormalSeries<T>& y) {
    return dyB_over_fact(p, 0, y);
}

// (mu + d)^-1 = sum_p mu^{-p-1} (-d)^p
template <class T>
FormalSeries<T> inverse_mu_plus_d(const T& mu, const FormalSeries<T>& g) {
    FormalSeries<T> out(g.order()), term = g;
    T inv = from_int<T>(1) / mu, f = inv;
    for (int k = 0; k <= g.order() && term.valuation(0.0); ++k) {
        out += term * f;
        term = -derive(term);
        f = f * inv;
    }
    return out;
}

template <class T>
double max_abs(const FormalSeries<T>& s) {
    double m = 0;
    for (auto& c : s.coeffs()) m = std::max(m, static_cast<double>(magnitude(c)));
    return m;
}

}  // namespace ode_detail

// Unique solution of d phi = B(z, phi) in z^-1 C[[z^-1]], to order N.
template <class T>
FormalSeries<T> formal_solution(const OdeProblem<T>& p, int N) {
    if (N < 1) throw ValidationError("formal_solution: N >= 1 required");
    if (p.order() < N) throw ValidationError("formal_solution: coefficients b_n known only to a lower order");
    FormalSeries<T> phi(N);
    for (int it = 0; it <= N; ++it) {
        // phi = d phi - b_0 - (b_1 - 1) phi - sum_{n>=2} b_n phi^n
        FormalSeries<T> rhs = ode_detail::eval_B(p, phi) - phi;
        phi = derive(phi) - rhs;
    }
    FormalSeries<T> res = derive(phi) - ode_detail::eval_B(p, phi);
    double scale = std::max(1.0, ode_detail::max_abs(phi));
    if (ode_detail::max_abs(res) > (is_exact_v<T> ? 0.0 : 1e-25 * scale))
        throw NumericError("formal_solution: re-substitution residual", ode_detail::max_abs(res));
    return phi;
}

// phi_0 .. phi_nmax with phi_0(inf) = 0 and phi_1(inf) = 1.
template <class T>
FormalIntegral<T> formal_integral(const OdeProblem<T>& p, int n_max, int N) {
    if (n_max < 0) throw ValidationError("formal_integral: n_max >= 0 required");
    const int M = N + 1;
    if (p.order() < M) throw ValidationError("formal_integral: coefficients b_n known only to a lower order");
    FormalIntegral<T> fi;
    FormalSeries<T> phi0 = formal_solution(p, M);
    fi.phi.push_back(phi0.truncated(N));
    if (n_max == 0) return fi;

    // d phi_1 = beta phi_1 with beta = d_y B(z, phi_0) - 1 = O(z^-2)
    FormalSeries<T> beta = ode_detail::dyB_over_fact(p, 1, phi0) - FormalSeries<T>::constant(from_int<T>(1), M);
    if (!is_zero(beta[1], 0.0)) throw ValidationError("formal_integral: d_y B(z, phi_0) - 1 must be O(z^-2)");
    FormalSeries<T> phi1(N);
    phi1[0] = from_int<T>(1);
    for (int m = 1; m <= N; ++m) {
        // coefficient of z^-(m+1): -m a_m = sum_{k=2}^{m+1} beta_k a_{m+1-k}
        T s(0);
        for (int k = 2; k <= m + 1; ++k) s += beta[k] * phi1[m + 1 - k];
        phi1[m] = -s / from_int<T>(m);
    }
    fi.phi.push_back(phi1);

    std::vector<FormalSeries<T>> dyB;  // (1/r!) d^r_y B(z, phi_0), r = 0..n_max
    FormalSeries<T> phi0N = phi0.truncated(N);
    for (int r = 0; r <= n_max; ++r) dyB.push_back(ode_detail::dyB_over_fact(p, r, phi0N));
    FormalSeries<T> betaN = beta.truncated(N);

    for (int n = 2; n <= n_max; ++n) {
        // sum over r >= 2 of dyB_r times sums of products phi_{n_1} ... phi_{n_r}, n_i >= 1, sum n_i = n
        // P[r][k]: that sum of products for total k with r parts
        std::vector<std::vector<FormalSeries<T>>> P(n + 1, std::vector<FormalSeries<T>>(n + 1, FormalSeries<T>(N)));
        for (int k = 1; k < n; ++k) P[1][k] = fi.phi[k];
        for (int r = 2; r <= n; ++r)
            for (int k = r; k <= n; ++k)
                for (int j = 1; j <= k - r + 1; ++j)
                    if (j < n) P[r][k] += fi.phi[j] * P[r - 1][k - j];
        FormalSeries<T> rhs(N);
        for (int r = 2; r <= n; ++r) rhs += dyB[r] * P[r][n];
        FormalSeries<T> phin(N);
        T mu = from_int<T>(n - 1);
        for (int it = 0; it <= N; ++it) phin = ode_detail::inverse_mu_plus_d(mu, betaN * phin + rhs);
        fi.phi.push_back(phin);
    }
    return fi;
}

// max |coefficient| of the residual of (E_n) for each n.
template <class T>
std::vector<double> integral_residuals(const OdeProblem<T>& p, const FormalIntegral<T>& fi) {
    int N = fi.phi[0].order();
    int n_max = static_cast<int>(fi.phi.size()) - 1;
    std::vector<double> out;
    out.push_back(ode_detail::max_abs(derive(fi.phi[0]) - ode_detail::eval_B(p, fi.phi[0])));
    std::vector<FormalSeries<T>> dyB;
    for (int r = 0; r <= n_max; ++r) dyB.push_back(ode_detail::dyB_over_fact(p, r, fi.phi[0]));
    for (int n = 1; n <= n_max; ++n) {
        FormalSeries<T> lhs = fi.phi[n] * from_int<T>(n) + derive(fi.phi[n]) - dyB[1] * fi.phi[n];
        // brute force over compositions of n with at least two parts
        FormalSeries<T> rhs(N);
        std::vector<int> parts;
        std::function<void(int, FormalSeries<T>)> rec = [&](int left, FormalSeries<T> prod) {
            if (left == 0) {
                if (parts.size() >= 2) rhs += dyB[parts.size()] * prod;
                return;
            }
            for (int k = 1; k <= left; ++k) {
                parts.push_back(k);
                rec(left - k, prod * fi.phi[k]);
                parts.pop_back();
            }
        };
        rec(n, FormalSeries<T>::constant(from_int<T>(1), N));
        out.push_back(ode_detail::max_abs(lhs - rhs));
    }
    return out;
}

// (C_{-1}, C_1) = (B_- sigma(B_- B_+), -B_+ sigma(B_- B_+)), sigma(b) = 2 b^{-1/2} sin(b^{1/2}/2).
template <class R>
std::pair<std::complex<R>, std::complex<R>> riccati_constants(std::complex<R> Bm, std::complex<R> Bp) {
    using C = std::complex<R>;
    C b = Bm * Bp, sigma;
    if (std::abs(b) < R(1)) {
        // sum_k (-b/4)^k / (2k+1)!
        C term = 1;
        sigma = 0;
        for (int k = 0; k < 30; ++k) {
            sigma += term;
            term *= -b / R(4) / R((2 * k + 2) * (2 * k + 3));
        }
    } else {
        C s = std::sqrt(b);
        sigma = R(2) * std::sin(s / R(2)) / s;
    }
    return {Bm * sigma, -Bp * sigma};
}

// beta_{m_1..m_r} = (m_1 + 1)(m_1 + m_2 + 1) ... (m_1 + ... + m_{r-1} + 1)
inline mpz_class beta_coefficient(const std::vector<int>& m) {
    if (m.empty()) throw ValidationError("beta_coefficient: empty index");
    mpz_class out = 1;
    long partial = 0;
    for (std::size_t k = 0; k + 1 < m.size(); ++k) {
        partial += m[k];
        out *= partial + 1;
    }
    return out;
}

struct OdeStokesResult {
    std::complex<double> C;
    double residual = 0;   // rms misfit of the ratio on the grid
    double est_error = 0;  // standard error of the constant term
    double eps = 0;
    int pade_degree = 0;
    std::vector<std::complex<double>> z;
    std::vector<std::complex<double>> ratio;
};

inline std::vector<std::complex<double>> ode_default_grid(int variant = 0) {
    std::vector<std::complex<double>> z;
    const double xs[2][2] = {{8.0, 10.0}, {9.0, 11.0}};
    for (double x : xs[variant ? 1 : 0])
        for (int k = 0; k < 12; ++k) {
            double y = -4.0 + 8.0 * (k + (variant ? 0.25 : 0.75)) / 12;
            z.push_back({-x, y});
        }
    return z;
}

namespace ode_detail {

template <class T>
MinorEvaluator<double> continued_minor(const FormalSeries<T>& phi, int& degree) {
    auto b = borel(phi);
    bool zero = true;
    for (auto& c : b.minor.c) zero = zero && is_zero(c, 0.0);
    if (zero) return make_minor<double, PolynomialMinor<double>>(std::vector<std::complex<double>>{{0.0, 0.0}});
    int L = (static_cast<int>(b.minor.size()) - 1) / 2;
    degree = L;
    std::vector<SingularPoint<double>> known;
    for (int k = 1; k <= 64; ++k) known.push_back({std::complex<double>(-k, 0), SingularType::branch, 1});
    return MinorEvaluator<double>(std::make_shared<PadeMinor<double>>(b.minor, L, L, known));
}

}  // namespace ode_detail

// Fits (phi_0^+ - phi_0^-)(z) / (e^z phi_1^-(z)) ~ C_{-1} + d_1 e^z + d_2 e^z/z + d_3 e^{2z} on the ray pi.
template <class T>
OdeStokesResult measure_ode_stokes(const OdeProblem<T>& p, int N, const QuadratureConfig& q = {},
                                   std::vector<std::complex<double>> z_grid = {}) {
    using Cd = std::complex<double>;
    auto fi = formal_integral(p, 1, N);
    OdeStokesResult out;
    out.eps = M_PI / 4;
    int deg0 = 0, deg1 = 0;
    auto m0 = ode_detail::continued_minor(fi.phi[0], deg0);
    auto m1 = ode_detail::continued_minor(fi.phi[1], deg1);
    out.pade_degree = deg0;
    out.z = z_grid.empty() ? ode_default_grid() : std::move(z_grid);
    for (Cd z : out.z) {
        if (!(z.real() < 0)) throw ValidationError("measure_ode_stokes: grid points need Re z < 0");
        auto [p0, q0] = lateral_pair(m0, Cd(0), M_PI, out.eps, z, q);
        Cd phi1m = laplace_ray(m1, Cd(1), M_PI + out.eps, z, q).value;
        out.ratio.push_back((p0.value - q0.value) / (std::exp(z) * phi1m));
    }
    const int n = static_cast<int>(out.z.size()), K = 4;
    if (n < 2 * K) throw ValidationError("measure_ode_stokes: grid too small");
    Eigen::MatrixXcd A(n, K);
    Eigen::VectorXcd b(n);
    for (int i = 0; i < n; ++i) {
        Cd z = out.z[i], e = std::exp(z);
        A(i, 0) = 1;
        A(i, 1) = e;
        A(i, 2) = e / z;
        A(i, 3) = e * e;
        b(i) = out.ratio[i];
    }
    Eigen::VectorXd s(K);
    for (int j = 0; j < K; ++j) {
        s(j) = A.col(j).norm();
        A.col(j) /= s(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    Eigen::VectorXcd x = qr.solve(b);
    out.residual = (A * x - b).norm() / std::sqrt(double(n - K));
    Eigen::MatrixXcd cov = (A.adjoint() * A).inverse();
    out.C = x(0) / s(0);
    out.est_error = out.residual * std::sqrt(std::abs(cov(0, 0))) / s(0);
    if (!(qr.rank() == K)) throw NumericError("measure_ode_stokes: rank-deficient fit", out.residual);
    return out;
}

}  // namespace resurgence
