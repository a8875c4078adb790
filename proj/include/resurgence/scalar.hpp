#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <type_traits>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <gmpxx.h>

namespace resurgence {

using hp_real = boost::multiprecision::cpp_bin_float_50;
using hp_complex = boost::multiprecision::cpp_complex_50;

// Zero threshold for valuation queries on float coefficients.
inline constexpr double kZeroEps = 1e-13;

template <class T>
struct is_std_complex : std::false_type {};
template <class R>
struct is_std_complex<std::complex<R>> : std::true_type {};

template <class T>
inline constexpr bool is_exact_v = std::is_same_v<T, mpq_class>;

template <class T>
inline constexpr bool is_hp_v = std::is_same_v<T, hp_complex> || std::is_same_v<T, hp_real>;

struct CoeffDomain {
    enum class Mode { exact_rational, complex_float } mode;
    int bits;  // mantissa bits, 0 for exact

    bool operator==(const CoeffDomain&) const = default;
};

template <class T>
CoeffDomain domain_of() {
    if constexpr (is_exact_v<T>) {
        return {CoeffDomain::Mode::exact_rational, 0};
    } else if constexpr (is_std_complex<T>::value) {
        return {CoeffDomain::Mode::complex_float,
                std::numeric_limits<typename T::value_type>::digits};
    } else {
        return {CoeffDomain::Mode::complex_float, std::numeric_limits<hp_real>::digits};
    }
}

inline hp_real hp_from_rational(const mpq_class& q) {
    return hp_real(q.get_num().get_str()) / hp_real(q.get_den().get_str());
}

// Conversion of an exact rational into any supported coefficient type.
template <class T>
T from_rational(const mpq_class& q) {
    if constexpr (is_exact_v<T>) {
        return q;
    } else if constexpr (std::is_same_v<T, std::complex<double>>) {
        return {q.get_d(), 0.0};
    } else if constexpr (is_std_complex<T>::value) {
        using R = typename T::value_type;
        return {static_cast<R>(hp_from_rational(q)), R(0)};
    } else if constexpr (std::is_same_v<T, hp_complex>) {
        return hp_complex(hp_from_rational(q));
    } else if constexpr (std::is_same_v<T, hp_real>) {
        return hp_from_rational(q);
    } else {
        return static_cast<T>(hp_from_rational(q));
    }
}

template <class T>
T from_int(long n) {
    if constexpr (is_exact_v<T>) {
        return mpq_class(n);
    } else {
        return T(static_cast<double>(n));
    }
}

template <class T>
double magnitude(const T& a) {
    if constexpr (is_exact_v<T>) {
        return std::fabs(a.get_d());
    } else if constexpr (is_std_complex<T>::value) {
        return static_cast<double>(std::abs(a));
    } else {
        return static_cast<double>(abs(a));
    }
}

template <class T>
bool is_zero(const T& a, double eps = kZeroEps) {
    if constexpr (is_exact_v<T>) {
        (void)eps;
        return sgn(a) == 0;
    } else {
        return magnitude(a) <= eps;
    }
}

template <class R, class T>
std::complex<R> to_complex(const T& a) {
    if constexpr (is_exact_v<T>) {
        return {static_cast<R>(hp_from_rational(a)), R(0)};
    } else if constexpr (is_std_complex<T>::value) {
        return {static_cast<R>(a.real()), static_cast<R>(a.imag())};
    } else if constexpr (std::is_same_v<T, hp_complex>) {
        return {static_cast<R>(a.real()), static_cast<R>(a.imag())};
    } else {
        return {static_cast<R>(a), R(0)};
    }
}

template <class T, class R>
T from_complex(const std::complex<R>& z) {
    if constexpr (is_std_complex<T>::value) {
        using S = typename T::value_type;
        return {static_cast<S>(z.real()), static_cast<S>(z.imag())};
    } else {
        return T(hp_real(z.real()), hp_real(z.imag()));
    }
}

inline mpq_class parse_rational(const std::string& s) {
    mpq_class q(s);
    q.canonicalize();
    return q;
}

template <class R>
inline const R pi_v = boost::math::constants::pi<R>();

}  // namespace resurgence
