#pragma once

#include <functional>

#include "formal.hpp"
#include "quadrature.hpp"

namespace resurgence {

// a*delta + sum_n b_n zeta^n.
template <class T>
struct BorelFunction {
    T delta{};
    TaylorGerm<T> minor;
};

// a_0 + sum a_{n+1} z^{-n-1}  ->  a_0 delta + sum a_{n+1} zeta^n / n!
template <class T>
BorelFunction<T> borel(const FormalSeries<T>& phi) {
    BorelFunction<T> b;
    b.delta = phi[0];
    b.minor = TaylorGerm<T>(static_cast<std::size_t>(phi.order()));
    mpq_class fact(1);
    for (int n = 0; n < phi.order(); ++n) {
        if (n > 0) fact *= n;
        b.minor[n] = phi[n + 1] * from_rational<T>(1 / fact);
    }
    return b;
}

template <class T>
FormalSeries<T> inverse_borel(const BorelFunction<T>& b) {
    FormalSeries<T> phi(static_cast<int>(b.minor.size()));
    phi[0] = b.delta;
    mpq_class fact(1);
    for (std::size_t n = 0; n < b.minor.size(); ++n) {
        if (n > 0) fact *= static_cast<unsigned long>(n);
        phi[static_cast<int>(n) + 1] = b.minor[n] * from_rational<T>(fact);
    }
    return phi;
}

// Convolution with delta as unit; zeta^p * zeta^q = p! q! / (p+q+1)! zeta^{p+q+1}.
template <class T>
BorelFunction<T> convolve(const BorelFunction<T>& f, const BorelFunction<T>& g) {
    std::size_t n = std::min(f.minor.size(), g.minor.size());
    BorelFunction<T> r;
    r.delta = f.delta * g.delta;
    r.minor = TaylorGerm<T>(n);
    for (std::size_t k = 0; k < n; ++k) r.minor[k] = f.delta * g.minor[k] + g.delta * f.minor[k];
    std::vector<mpq_class> fact(n + 1, mpq_class(1));
    for (std::size_t k = 1; k <= n; ++k) fact[k] = fact[k - 1] * static_cast<unsigned long>(k);
    for (std::size_t p = 0; p + 1 < n; ++p) {
        if (is_zero(f.minor[p], 0.0)) continue;
        for (std::size_t q = 0; p + q + 1 < n; ++q) {
            mpq_class beta = fact[p] * fact[q] / fact[p + q + 1];
            r.minor[p + q + 1] += f.minor[p] * g.minor[q] * from_rational<T>(beta);
        }
    }
    return r;
}

// zeta * int_0^1 F(t zeta) G((1-t) zeta) dt
template <class R>
QuadResult<R> convolve_numeric(const std::function<std::complex<R>(std::complex<R>)>& F,
                               const std::function<std::complex<R>(std::complex<R>)>& G,
                               std::complex<R> zeta, const QuadratureConfig& quad = {}) {
    auto integrand = [&](R t) { return F(t * zeta) * G((R(1) - t) * zeta); };
    int panels = std::max(1, static_cast<int>(std::ceil(std::abs(zeta) * quad.nodes_per_unit / 20)));
    R tol = static_cast<R>(quad.tolerance) / std::max(std::abs(zeta), R(1));
    QuadResult<R> r = integrate<R>(integrand, R(0), R(1), tol, panels, quad.max_depth);
    r.value *= zeta;
    r.error *= std::abs(zeta);
    return r;
}

// psi_hat / (e^{c zeta} - 1) for psi_hat(0) = 0: the simple zero is factored out
// and the quotient taken by exact power-series division. Loses one coefficient.
template <class T>
TaylorGerm<T> divide_by_exp_minus_one(const TaylorGerm<T>& psi, const T& c) {
    if (psi.size() == 0) return psi;
    if (!is_zero(psi[0], 0.0)) throw ValidationError("divide_by_exp_minus_one: minor must vanish at 0");
    std::size_t n = psi.size() - 1;
    TaylorGerm<T> num(n), den(n);
    mpq_class fact(1);
    T cp = c;
    for (std::size_t k = 0; k < n; ++k) {
        num[k] = psi[k + 1];
        fact *= static_cast<unsigned long>(k + 1);
        den[k] = cp * from_rational<T>(1 / fact);
        cp *= c;
    }
    return taylor_div(num, den);
}

// Unique phi in z^-1 C[[z^-1]] with phi(z+1) - phi(z) = psi; minor psi_hat/(e^{-zeta}-1).
template <class T>
FormalSeries<T> solve_difference(const FormalSeries<T>& psi) {
    if (psi.order() < 2) return FormalSeries<T>(std::max(psi.order() - 1, 0));
    if (!is_zero(psi[0], 0.0) || !is_zero(psi[1], 0.0))
        throw ValidationError("solve_difference: right-hand side must have valuation >= 2");
    BorelFunction<T> b = borel(psi);
    BorelFunction<T> out;
    out.delta = T(0);
    out.minor = divide_by_exp_minus_one(b.minor, from_int<T>(-1));
    return inverse_borel(out);
}

}  // namespace resurgence
