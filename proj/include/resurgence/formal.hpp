#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "scalar.hpp"

namespace resurgence {

// Truncated power series in a small variable t (ascending coefficients h_0..h_K).
// Used for Taylor germs H in substitution and for Borel-plane minors.
template <class T>
struct TaylorGerm {
    std::vector<T> c;

    TaylorGerm() = default;
    explicit TaylorGerm(std::vector<T> coeffs) : c(std::move(coeffs)) {}
    explicit TaylorGerm(std::size_t n) : c(n, T(0)) {}

    std::size_t size() const { return c.size(); }
    const T& operator[](std::size_t i) const { return c[i]; }
    T& operator[](std::size_t i) { return c[i]; }
};

template <class T>
TaylorGerm<T> taylor_mul(const TaylorGerm<T>& a, const TaylorGerm<T>& b) {
    std::size_t n = std::min(a.size(), b.size());
    TaylorGerm<T> r(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (is_zero(a[i], 0.0)) continue;
        for (std::size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
    }
    return r;
}

template <class T>
TaylorGerm<T> taylor_div(const TaylorGerm<T>& a, const TaylorGerm<T>& b) {
    std::size_t n = std::min(a.size(), b.size());
    if (n == 0) return TaylorGerm<T>();
    if (is_zero(b[0], 0.0)) throw ValidationError("taylor_div: divisor has zero constant term");
    TaylorGerm<T> q(n);
    for (std::size_t k = 0; k < n; ++k) {
        T s = a[k];
        for (std::size_t j = 1; j <= k; ++j) s -= b[j] * q[k - j];
        q[k] = s / b[0];
    }
    return q;
}

// Taylor coefficients 1/k! of exp, k = 0..K.
template <class T>
TaylorGerm<T> taylor_exp(int K) {
    TaylorGerm<T> h(static_cast<std::size_t>(K + 1));
    mpq_class f(1);
    for (int k = 0; k <= K; ++k) {
        if (k > 0) f /= k;
        h[k] = from_rational<T>(f);
    }
    return h;
}

// Truncated formal series a_0 + a_1 z^-1 + ... + a_N z^-N.
template <class T>
class FormalSeries {
public:
    using value_type = T;

    FormalSeries() : c_(1, T(0)) {}
    explicit FormalSeries(int order) : c_(static_cast<std::size_t>(order + 1), T(0)) {
        if (order < 0) throw ValidationError("FormalSeries: negative order");
    }
    explicit FormalSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) throw ValidationError("FormalSeries: empty coefficient list");
    }

    static FormalSeries monomial(int n, int order, T a = from_int<T>(1)) {
        FormalSeries s(order);
        if (n <= order) s[n] = a;
        return s;
    }
    static FormalSeries constant(T a, int order) { return monomial(0, order, a); }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const T& operator[](int n) const { return c_[static_cast<std::size_t>(n)]; }
    T& operator[](int n) { return c_[static_cast<std::size_t>(n)]; }
    const std::vector<T>& coeffs() const { return c_; }

    FormalSeries truncated(int N) const {
        FormalSeries r(N);
        for (int n = 0; n <= std::min(N, order()); ++n) r[n] = c_[n];
        return r;
    }

    // min{n : a_n != 0}; nullopt for the zero truncation.
    std::optional<int> valuation(double eps = kZeroEps) const {
        for (int n = 0; n <= order(); ++n)
            if (!is_zero(c_[n], eps)) return n;
        return std::nullopt;
    }

    FormalSeries& operator+=(const FormalSeries& o) { return axpy(o, from_int<T>(1)); }
    FormalSeries& operator-=(const FormalSeries& o) { return axpy(o, from_int<T>(-1)); }
    FormalSeries& operator*=(const T& a) {
        for (auto& x : c_) x *= a;
        return *this;
    }

    friend FormalSeries operator+(FormalSeries a, const FormalSeries& b) { return a += b; }
    friend FormalSeries operator-(FormalSeries a, const FormalSeries& b) { return a -= b; }
    friend FormalSeries operator-(FormalSeries a) { return a *= from_int<T>(-1); }
    friend FormalSeries operator*(FormalSeries a, const T& s) { return a *= s; }
    friend FormalSeries operator*(const T& s, FormalSeries a) { return a *= s; }
    friend FormalSeries operator*(const FormalSeries& a, const FormalSeries& b) { return mul(a, b); }

    friend bool operator==(const FormalSeries& a, const FormalSeries& b) { return a.c_ == b.c_; }

private:
    FormalSeries& axpy(const FormalSeries& o, const T& s) {
        int N = std::min(order(), o.order());
        c_.resize(static_cast<std::size_t>(N + 1));
        for (int n = 0; n <= N; ++n) c_[n] += s * o[n];
        return *this;
    }

    std::vector<T> c_;
};

// Cauchy product, truncated at the smaller order.
template <class T>
FormalSeries<T> mul(const FormalSeries<T>& a, const FormalSeries<T>& b) {
    int N = std::min(a.order(), b.order());
    FormalSeries<T> r(N);
    for (int p = 0; p <= N; ++p) {
        if (is_zero(a[p], 0.0)) continue;
        for (int q = 0; p + q <= N; ++q) r[p + q] += a[p] * b[q];
    }
    return r;
}

template <class T>
FormalSeries<T> power(const FormalSeries<T>& a, int k) {
    FormalSeries<T> r = FormalSeries<T>::constant(from_int<T>(1), a.order());
    for (int i = 0; i < k; ++i) r = mul(r, a);
    return r;
}

// Multiplicative inverse; requires a nonzero constant term.
template <class T>
FormalSeries<T> reciprocal(const FormalSeries<T>& a) {
    if (is_zero(a[0], 0.0)) throw ValidationError("reciprocal: zero constant term");
    FormalSeries<T> r(a.order());
    r[0] = from_int<T>(1) / a[0];
    for (int n = 1; n <= a.order(); ++n) {
        T s(0);
        for (int k = 1; k <= n; ++k) s += a[k] * r[n - k];
        r[n] = -s / a[0];
    }
    return r;
}

// d/dz: a_n z^-n -> -n a_n z^-n-1. Order is kept (the exact z^-(N+1) term is dropped).
template <class T>
FormalSeries<T> derive(const FormalSeries<T>& a) {
    FormalSeries<T> r(a.order());
    for (int n = 1; n < a.order(); ++n) r[n + 1] = from_int<T>(-n) * a[n];
    return r;
}

// Antiderivative without constant term; needs val >= 2. Loses one order.
template <class T>
FormalSeries<T> antiderive(const FormalSeries<T>& a) {
    if (!is_zero(a[0], 0.0) || (a.order() >= 1 && !is_zero(a[1], 0.0)))
        throw ValidationError("antiderive: series must have valuation >= 2");
    int N = std::max(a.order() - 1, 0);
    FormalSeries<T> r(N);
    for (int n = 2; n <= a.order(); ++n) r[n - 1] = a[n] / from_int<T>(1 - n);
    return r;
}

// phi o (id + chi) = sum_p chi^p d^p phi / p!, truncated at min order.
template <class T>
FormalSeries<T> compose_tail(const FormalSeries<T>& phi, const FormalSeries<T>& chi) {
    int N = std::min(phi.order(), chi.order());
    FormalSeries<T> d = phi.truncated(N);
    FormalSeries<T> cp = FormalSeries<T>::constant(from_int<T>(1), N);
    FormalSeries<T> chiN = chi.truncated(N);
    FormalSeries<T> r = d;
    mpq_class fact(1);
    for (int p = 1; p <= N; ++p) {
        d = derive(d);
        cp = mul(cp, chiN);
        fact *= p;
        if (!d.valuation(0.0)) break;
        r += mul(cp, d) * from_rational<T>(1 / fact);
    }
    return r;
}

// T_c phi = phi(z + c).
template <class T>
FormalSeries<T> shift(const FormalSeries<T>& phi, const T& c) {
    return compose_tail(phi, FormalSeries<T>::constant(c, phi.order()));
}

// H o phi = sum h_p phi^p for phi without constant term.
template <class T>
FormalSeries<T> substitute(const TaylorGerm<T>& H, const FormalSeries<T>& phi) {
    if (!is_zero(phi[0], 0.0)) throw ValidationError("substitute: series has a constant term");
    int N = phi.order();
    int K = std::min<int>(static_cast<int>(H.size()) - 1, N);
    FormalSeries<T> r(N);
    for (int p = K; p >= 0; --p) {
        r = mul(r, phi);
        r[0] += H[p];
    }
    return r;
}

// Krull distance 2^-val(psi - phi) over the common truncation; 0 when equal there.
template <class T>
double krull_distance(const FormalSeries<T>& a, const FormalSeries<T>& b, double eps = kZeroEps) {
    auto v = (a - b).valuation(eps);
    return v ? std::ldexp(1.0, -*v) : 0.0;
}

}  // namespace resurgence
