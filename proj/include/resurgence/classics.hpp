#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <string>
#include <vector>

#include "bernoulli.hpp"
#include "borel.hpp"
#include "errors.hpp"
#include "formal.hpp"
#include "laplace.hpp"
#include "minors.hpp"
#include "quadrature.hpp"

namespace resurgence {

// B_2, B_4, ..., B_{2 k_max}.
inline std::vector<mpq_class> bernoulli(int k_max) {
    auto B = bernoulli_numbers(2 * k_max + 1);
    for (int n = 3; n <= 2 * k_max + 1; n += 2)
        if (B[n] != 0) throw NumericError("odd Bernoulli number does not vanish", B[n].get_d());
    std::vector<mpq_class> out;
    for (int k = 1; k <= k_max; ++k) out.push_back(B[2 * k]);
    return out;
}

struct ExampleSpec {
    std::string id;
    std::string kind;
    std::map<std::string, std::string> params;
    std::vector<std::string> identities;
    SummationArc arc;
};

template <class T, class R = double>
struct Example {
    FormalSeries<T> series;
    TaylorGerm<T> minor_taylor;  // from the closed-form minor, independently of series
    MinorEvaluator<R> minor;
    ExampleSpec spec;
};

inline const std::vector<std::string>& catalog_kinds() {
    static const std::vector<std::string> k{"euler", "stirling", "poincare", "hurwitz", "incgamma", "euler_square"};
    return k;
}

namespace classics_detail {

template <class T>
T param_value(const std::string& text) {
    if constexpr (is_exact_v<T>) {
        if (text.find('i') != std::string::npos) throw ValidationError("complex parameter needs a floating domain");
        try {
            if (text.find('.') != std::string::npos || text.find('e') != std::string::npos) {
                mpq_class q(std::stod(text));
                return q;
            }
            return parse_rational(text);
        } catch (const std::invalid_argument&) {
            throw ValidationError("bad parameter: " + text);
        }
    } else {
        return from_complex<T>(parse_complex<double>(text));
    }
}

template <class T>
FormalSeries<T> euler_series(int N) {
    FormalSeries<T> e(N);
    mpq_class f(1);
    for (int n = 0; n + 1 <= N; ++n) {
        if (n) f *= n;
        e[n + 1] = from_rational<T>(n % 2 ? mpq_class(-f) : f);
    }
    return e;
}

// mu = sum B_2k / (2k (2k-1)) z^{1-2k}
template <class T>
FormalSeries<T> stirling_series(int N) {
    FormalSeries<T> m(N);
    auto B = bernoulli((N + 1) / 2);
    for (int k = 1; 2 * k - 1 <= N; ++k) m[2 * k - 1] = from_rational<T>(B[k - 1] / (2 * k * (2 * k - 1)));
    return m;
}

// b_n = sum_k k^n w^k from (1 - w) b_n = (-1)^n + sum_{j<n} C(n,j) (-1)^{n-j+1} b_j.
template <class T>
FormalSeries<T> poincare_series(const T& w, int N) {
    FormalSeries<T> p(N);
    std::vector<T> b;
    T one = from_int<T>(1), inv = one / (one - w);
    std::vector<mpq_class> binom{1};
    for (int n = 0; n + 1 <= N; ++n) {
        if (n > 0) {
            std::vector<mpq_class> next(n + 1, 1);
            for (int j = 1; j < n; ++j) next[j] = binom[j - 1] + binom[j];
            binom = next;
        }
        T s = from_int<T>(n % 2 ? -1 : 1);
        for (int j = 0; j < n; ++j) {
            mpq_class c = binom[j];
            if ((n - j + 1) % 2) c = -c;
            s += from_rational<T>(c) * b[j];
        }
        b.push_back(s * inv);
        p[n + 1] = n % 2 ? T(-b[n]) : b[n];
    }
    return p;
}

// 1/((s-1) z^{s-1}) + 1/(2 z^s) + sum_k C(s+2k-1, s-1) B_2k / ((s+2k-1) z^{s+2k-1})
template <class T>
FormalSeries<T> hurwitz_series(int s, int N) {
    FormalSeries<T> h(N);
    if (s - 1 <= N) h[s - 1] = from_rational<T>(mpq_class(1, s - 1));
    if (s <= N) h[s] = from_rational<T>(mpq_class(1, 2));
    auto B = bernoulli(std::max(1, (N - s + 2) / 2));
    for (int k = 1; s + 2 * k - 1 <= N; ++k) {
        mpz_class c;
        mpz_bin_uiui(c.get_mpz_t(), s + 2 * k - 1, s - 1);
        h[s + 2 * k - 1] = from_rational<T>(mpq_class(c) * B[k - 1] / (s + 2 * k - 1));
    }
    return h;
}

// (alpha-1)(alpha-2)...(alpha-n) z^{-n-1}
template <class T>
FormalSeries<T> incgamma_series(const T& alpha, int N) {
    FormalSeries<T> g(N);
    T f = from_int<T>(1);
    for (int n = 0; n + 1 <= N; ++n) {
        if (n) f *= alpha - from_int<T>(n);
        g[n + 1] = f;
    }
    return g;
}

template <class T>
TaylorGerm<T> exp_germ(const T& c, int n) {
    // e^{c zeta}
    TaylorGerm<T> e(static_cast<std::size_t>(n));
    T p = from_int<T>(1);
    mpq_class f(1);
    for (int k = 0; k < n; ++k) {
        if (k) f /= k;
        e[k] = p * from_rational<T>(f);
        p *= c;
    }
    return e;
}

template <class T>
TaylorGerm<T> minor_taylor(const std::string& kind, const std::map<std::string, std::string>& params, int n) {
    TaylorGerm<T> t(static_cast<std::size_t>(n));
    auto B = bernoulli_numbers(n + 2);
    if (kind == "euler") {
        for (int k = 0; k < n; ++k) t[k] = from_int<T>(k % 2 ? -1 : 1);
    } else if (kind == "stirling") {
        // zeta^-2 ((zeta/2) coth(zeta/2) - 1) = sum B_2k zeta^{2k-2} / (2k)!
        mpq_class f(1);
        for (int m = 1; m <= n + 2; ++m) {
            f *= m;
            if (m % 2 == 0 && m - 2 < n) t[m - 2] = from_rational<T>(B[m] / f);
        }
    } else if (kind == "poincare") {
        T w = param_value<T>(params.at("w"));
        auto e = exp_germ<T>(from_int<T>(-1), n);
        TaylorGerm<T> den(static_cast<std::size_t>(n)), one(static_cast<std::size_t>(n));
        for (int k = 0; k < n; ++k) den[k] = -w * e[k];
        den[0] += from_int<T>(1);
        one[0] = from_int<T>(1);
        t = taylor_div(one, den);
    } else if (kind == "hurwitz") {
        int s = std::stoi(params.at("s"));
        // zeta^{s-2} * [zeta / (1 - e^{-zeta})] / (s-1)!
        TaylorGerm<T> num(static_cast<std::size_t>(n)), den(static_cast<std::size_t>(n));
        num[0] = from_int<T>(1);
        mpq_class f(1);
        for (int k = 0; k < n; ++k) {
            f *= k + 1;
            den[k] = from_rational<T>(mpq_class(k % 2 ? -1 : 1) / f);  // (1 - e^{-zeta})/zeta
        }
        auto q = taylor_div(num, den);
        mpq_class fs(1);
        for (int k = 2; k < s; ++k) fs *= k;
        for (int k = 0; k + s - 2 < n; ++k) t[k + s - 2] = q[k] / from_rational<T>(fs);
    } else if (kind == "incgamma") {
        T a = param_value<T>(params.at("alpha"));
        T c = from_int<T>(1);
        for (int k = 0; k < n; ++k) {
            t[k] = c;
            c = c * (a - from_int<T>(1) - from_int<T>(k)) / from_int<T>(k + 1);
        }
    } else if (kind == "euler_square") {
        // 2 log(1+zeta) / (2+zeta)
        TaylorGerm<T> L(static_cast<std::size_t>(n)), inv(static_cast<std::size_t>(n));
        for (int k = 1; k < n; ++k) L[k] = from_rational<T>(mpq_class(k % 2 ? 2 : -2, k));
        for (int k = 0; k < n; ++k) inv[k] = from_rational<T>(mpq_class(k % 2 ? -1 : 1, 1) / (mpz_class(1) << (k + 1)));
        t = taylor_mul(L, inv);
    } else {
        throw ValidationError("unknown catalog kind: " + kind);
    }
    return t;
}

inline std::string canonical_id(const ClosedFormId& id) {
    std::string s = id.kind;
    if (!id.params.empty()) {
        s += "(";
        bool first = true;
        for (auto& [k, v] : id.params) {
            if (!first) s += ",";
            s += k + "=" + v;
            first = false;
        }
        s += ")";
    }
    return s;
}

}  // namespace classics_detail

// Series of a catalog entry truncated at z^-order, with its minor data.
template <class T, class R = double>
Example<T, R> build(const std::string& id, int order) {
    using namespace classics_detail;
    if (order < 1) throw ValidationError("order must be positive");
    auto pid = parse_closed_form_id(id);
    Example<T, R> ex;
    ex.spec.kind = pid.kind;
    ex.spec.params = pid.params;
    ex.spec.arc = SummationArc{-M_PI / 2, M_PI / 2, 0};
    const auto& k = pid.kind;
    auto need = [&](const char* p) {
        if (!pid.params.count(p)) throw ValidationError(k + ": parameter " + p + " required");
        return pid.params.at(p);
    };
    if (k == "euler") {
        ex.series = euler_series<T>(order);
        ex.spec.identities = {"minor 1/(1+zeta)", "jump across arg pi: 2 pi i e^z", "sum e^z E1(z)"};
    } else if (k == "stirling") {
        ex.series = stirling_series<T>(order);
        ex.spec.identities = {"minor zeta^-2 ((zeta/2) coth(zeta/2) - 1)", "exp(sum) = Gamma(z) e^z z^(1/2-z) / sqrt(2 pi)",
                              "jump across arg pi/2: -log(1 - e^{-2 pi i z})"};
    } else if (k == "poincare") {
        if (!pid.params.count("w") && pid.params.count("s"))
            throw ValidationError("poincare: catalog builder takes w = e^s");
        T w = param_value<T>(need("w"));
        double aw = magnitude(w);
        if (!(aw > 0 && aw < 1)) throw ValidationError("poincare: need 0 < |w| < 1");
        ex.series = poincare_series<T>(w, order);
        ex.spec.identities = {"minor 1/(1 - e^{s-zeta})", "sum: sum_k w^k/(z+k)",
                              "phi - S^{J_k} = 2 pi i e^{-omega_k z}/(1 - e^{-2 pi i z})"};
    } else if (k == "hurwitz") {
        std::string sv = need("s");
        auto sc = parse_complex<double>(sv);
        double sd = sc.real();
        if (sc.imag() != 0) throw ValidationError("hurwitz: real integer s required");
        if (sd != std::floor(sd) || sd < 2) throw ValidationError("hurwitz: integer s >= 2 required");
        pid.params["s"] = std::to_string(static_cast<int>(sd));
        ex.series = hurwitz_series<T>(static_cast<int>(sd), order);
        ex.spec.arc.gamma = 0.05;
        ex.spec.identities = {"minor zeta^{s-1}/(Gamma(s)(1 - e^{-zeta}))", "sum: zeta(s, z)"};
    } else if (k == "incgamma") {
        T a = param_value<T>(need("alpha"));
        ex.series = incgamma_series<T>(a, order);
        ex.spec.identities = {"minor (1+zeta)^{alpha-1}", "Gamma(alpha, z) = e^{-z} z^alpha * sum",
                              "jump across arg pi: 2 pi i e^z (-z)^{-alpha} / Gamma(1-alpha)"};
    } else if (k == "euler_square") {
        auto e = euler_series<T>(order);
        ex.series = mul(e, e);
        ex.spec.identities = {"minor 2 log(1+zeta)/(2+zeta)", "sum (e^z E1(z))^2"};
    } else {
        throw ValidationError("unknown catalog kind: " + k);
    }
    ex.spec.params = pid.params;
    ex.spec.id = canonical_id(pid);
    ex.minor_taylor = minor_taylor<T>(k, pid.params, order);
    ex.minor = closed_form_minor<R>(ex.spec.id);
    return ex;
}

// Independent oracles -------------------------------------------------------

// e^z E_1(z) by the even continued fraction, modified Lentz; z off (-inf, 0].
inline std::complex<double> euler_reference(std::complex<double> z, double tol = 1e-15) {
    using C = std::complex<double>;
    if (z.imag() == 0 && z.real() <= 0) throw ValidationError("euler reference: z on the cut");
    const double tiny = 1e-300;
    C f = z + 1.0, c = f, d = 0;
    for (int k = 1; k < 1000000; ++k) {
        C a = -double(k) * double(k), b = z + double(2 * k + 1);
        d = b + a * d;
        if (std::abs(d) == 0) d = tiny;
        c = b + a / c;
        if (std::abs(c) == 0) c = tiny;
        d = 1.0 / d;
        C delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < tol) return 1.0 / f;
    }
    throw NumericError("euler reference: continued fraction did not converge", 0);
}

// Gamma(z) for Re z >= 1 by quadrature of t^{z-1} e^{-t} on [0, T].
inline std::complex<double> gamma_quadrature(std::complex<double> z) {
    using C = std::complex<double>;
    if (z.real() < 1) throw ValidationError("gamma quadrature needs Re z >= 1");
    double T = z.real() + 60 + 10 * std::sqrt(z.real());
    auto f = [&](double t) { return t == 0 ? C(z == C(1) ? 1 : 0) : std::exp((z - 1.0) * std::log(t) - t); };
    // integrand peaks near t = Re z - 1; split there
    double peak = std::max(1.0, z.real() - 1);
    auto a = integrate<double>(f, 0.0, peak, 1e-15 * std::abs(f(peak)) * peak, 8, 40);
    auto b = integrate<double>(f, peak, T, 1e-15 * std::abs(f(peak)) * peak, 32, 40);
    return a.value + b.value;
}

// lambda(z) = Gamma(z) e^z z^{1/2 - z} / sqrt(2 pi), Re z >= 1.
inline std::complex<double> stirling_lambda_reference(std::complex<double> z) {
    return gamma_quadrature(z) * std::exp(z + (0.5 - z) * std::log(z)) / std::sqrt(2 * M_PI);
}

// sum_k w^k/(z+k)
inline std::complex<double> poincare_reference(std::complex<double> w, std::complex<double> z) {
    using C = std::complex<double>;
    C s = 0, p = 1;
    for (int k = 0; k < 100000; ++k) {
        if (z + double(k) == C(0)) throw ValidationError("poincare reference: z is a pole");
        C t = p / (z + double(k));
        s += t;
        if (std::abs(p) < 1e-18 * std::max(1.0, std::abs(s))) return s;
        p *= w;
    }
    throw NumericError("poincare reference: series did not converge", 0);
}

// zeta(s, z) = sum_k (z+k)^{-s}: direct sum to K terms plus an Euler-Maclaurin tail.
inline std::complex<double> hurwitz_reference(int s, std::complex<double> z) {
    using C = std::complex<double>;
    if (z.imag() == 0 && z.real() <= 0) throw ValidationError("hurwitz reference: z on the cut");
    const int K = 40;
    C sum = 0;
    for (int k = 0; k < K; ++k) sum += std::pow(z + double(k), -s);
    C a = z + double(K);
    // int_a^inf x^-s + a^-s/2 + sum_j B_2j/(2j)! (s)_{2j-1} a^{-s-2j+1}
    sum += std::pow(a, 1 - s) / double(s - 1) + 0.5 * std::pow(a, -s);
    auto B = bernoulli_numbers(20);
    double rising = s;  // s (s+1) ... (s+2j-2)
    double fact = 2;
    for (int j = 1; j <= 10; ++j) {
        sum += B[2 * j].get_d() / fact * rising * std::pow(a, -s - 2 * j + 1);
        rising *= double(s + 2 * j - 1) * double(s + 2 * j);
        fact *= double(2 * j + 1) * double(2 * j + 2);
    }
    return sum;
}

// Gamma(alpha, z) = int_z^inf t^{alpha-1} e^{-t} dt for real z > 0.
inline double incomplete_gamma_reference(double alpha, double z) {
    if (!(z > 0)) throw ValidationError("incomplete gamma reference: z must be positive");
    auto f = [&](double t) { return std::complex<double>(std::exp((alpha - 1) * std::log(t) - t)); };
    double T = z + 80 + std::max(0.0, 2 * alpha);
    return integrate<double>(f, z, T, 1e-16 * std::exp(-z), 32, 40).value.real();
}

// Value the Borel sum of the catalog series should reproduce at z.
inline std::complex<double> reference_value(const std::string& id, std::complex<double> z) {
    using C = std::complex<double>;
    auto p = parse_closed_form_id(id);
    if (p.kind == "euler") return euler_reference(z);
    if (p.kind == "euler_square") {
        C e = euler_reference(z);
        return e * e;
    }
    if (p.kind == "stirling") return std::log(stirling_lambda_reference(z));
    if (p.kind == "poincare") return poincare_reference(parse_complex<double>(p.params.at("w")), z);
    if (p.kind == "hurwitz") return hurwitz_reference(std::stoi(p.params.at("s")), z);
    if (p.kind == "incgamma") {
        if (z.imag() != 0) throw ValidationError("incgamma reference: real z only");
        double a = parse_complex<double>(p.params.at("alpha")).real();
        return std::exp(z.real()) * std::pow(z.real(), -a) * incomplete_gamma_reference(a, z.real());
    }
    throw ValidationError("no reference for " + p.kind);
}

// Closed-form lateral differences L+ - L- (+ = L^{theta - eps}) across the first singular ray.
inline std::complex<double> jump_formula(const std::string& id, std::complex<double> z) {
    using C = std::complex<double>;
    const C I(0, 1);
    auto p = parse_closed_form_id(id);
    if (p.kind == "euler") return 2 * M_PI * I * std::exp(z);
    if (p.kind == "stirling") return -std::log(1.0 - std::exp(-2 * M_PI * I * z));
    if (p.kind == "incgamma") {
        double a = parse_complex<double>(p.params.at("alpha")).real();
        return 2 * M_PI * I * std::exp(z) * std::pow(-z, -a) / std::tgamma(1 - a);
    }
    throw ValidationError("no jump formula for " + p.kind);
}

// phi^P(z) - S^{J_k} phi^P(z), omega_k = s - 2 pi i k.
inline std::complex<double> poincare_sector_difference(std::complex<double> w, int k, std::complex<double> z) {
    using C = std::complex<double>;
    const C I(0, 1);
    C omega = std::log(w) - 2 * M_PI * I * double(k);
    return 2 * M_PI * I * std::exp(-omega * z) / (1.0 - std::exp(-2 * M_PI * I * z));
}

// Arc J_k = (arg omega_k, arg omega_{k+1}) between consecutive Poincare poles, in (pi/2, 3pi/2).
inline SummationArc poincare_arc(std::complex<double> w, int k) {
    using C = std::complex<double>;
    auto ang = [&](int j) {
        double a = std::arg(std::log(w) - 2 * M_PI * C(0, 1) * double(j));
        return a < 0 ? a + 2 * M_PI : a;
    };
    return SummationArc{ang(k), ang(k + 1), 0};
}

// Right-hand side of the Stirling difference equation mu(z+1) - mu(z) = psi(z),
// psi = (z + 1/2) * (-log(1 + 1/z)) + 1 as a series in z^-1.
template <class T>
FormalSeries<T> stirling_difference_rhs(int N) {
    FormalSeries<T> L(N + 1);
    for (int n = 1; n <= N + 1; ++n) L[n] = from_rational<T>(mpq_class(n % 2 ? -1 : 1, n));
    FormalSeries<T> psi(N);
    for (int n = 1; n <= N; ++n) psi[n] = from_rational<T>(mpq_class(1, 2)) * L[n] + L[n + 1];
    return psi;
}

}  // namespace resurgence
