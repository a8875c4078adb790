#pragma once

#include "formal.hpp"

namespace resurgence {

// id + sigma + tail, with tail in z^-1 C[[z^-1]].
template <class T>
struct FormalDiffeo {
    T sigma{};
    FormalSeries<T> tail;

    FormalDiffeo() = default;
    FormalDiffeo(T s, FormalSeries<T> t) : sigma(std::move(s)), tail(std::move(t)) {
        if (!is_zero(tail[0], 0.0)) throw ValidationError("FormalDiffeo: tail has a constant term");
    }

    static FormalDiffeo identity(int order) { return {T(0), FormalSeries<T>(order)}; }
    static FormalDiffeo translation(T c, int order) { return {c, FormalSeries<T>(order)}; }
    // Split id + chi into its translation part and tail.
    static FormalDiffeo from_shift(const FormalSeries<T>& chi) {
        FormalSeries<T> t = chi;
        T s = t[0];
        t[0] = T(0);
        return {s, t};
    }

    int order() const { return tail.order(); }
    // chi such that the diffeo is id + chi.
    FormalSeries<T> shift_series() const {
        FormalSeries<T> c = tail;
        c[0] = sigma;
        return c;
    }

    friend bool operator==(const FormalDiffeo& a, const FormalDiffeo& b) {
        return a.sigma == b.sigma && a.tail == b.tail;
    }
};

// f o h = id + chi_h + phi_f o (id + chi_h).
template <class T>
FormalDiffeo<T> compose(const FormalDiffeo<T>& f, const FormalDiffeo<T>& h) {
    FormalSeries<T> chi = h.shift_series();
    FormalSeries<T> phi = f.shift_series();
    return FormalDiffeo<T>::from_shift(chi + compose_tail(phi, chi));
}

enum class InversionMethod { lagrange, fixed_point };

namespace detail {

// id + sum_{k>=1} (-1)^k/k! d^{k-1}(chi^k)
template <class T>
FormalDiffeo<T> invert_lagrange(const FormalDiffeo<T>& h) {
    const int N = h.order();
    FormalSeries<T> chi = h.shift_series();
    FormalSeries<T> chik = FormalSeries<T>::constant(from_int<T>(1), N);
    FormalSeries<T> out(N);
    mpq_class fact(1);
    for (int k = 1; k <= N + 1; ++k) {
        chik = mul(chik, chi);
        fact *= k;
        FormalSeries<T> d = chik;
        for (int j = 1; j < k; ++j) d = derive(d);
        mpq_class s = (k % 2 ? -1 : 1) / fact;
        out += d * from_rational<T>(s);
    }
    return FormalDiffeo<T>::from_shift(out);
}

// Iterates C(f) = id - (f o h - f) from f = id, exactly order+1 times.
template <class T>
FormalDiffeo<T> invert_fixed_point(const FormalDiffeo<T>& h) {
    const int N = h.order();
    FormalSeries<T> chi = h.shift_series();
    FormalSeries<T> phi(N);
    for (int it = 0; it <= N; ++it) phi = -chi - (compose_tail(phi, chi) - phi);
    return FormalDiffeo<T>::from_shift(phi);
}

}  // namespace detail

template <class T>
FormalDiffeo<T> invert(const FormalDiffeo<T>& h, InversionMethod method = InversionMethod::lagrange) {
    return method == InversionMethod::lagrange ? detail::invert_lagrange(h)
                                               : detail::invert_fixed_point(h);
}

}  // namespace resurgence
