#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "alien.hpp"
#include "borel.hpp"
#include "diffeo.hpp"
#include "formal.hpp"
#include "ode.hpp"
#include "parabolic.hpp"

namespace resurgence::io {

using nlohmann::json;

// Pretty printer with sorted keys and 17 significant digits for floats; non-finite floats become null.
inline void write_json(std::ostream& os, const json& j, int level = 0) {
    auto pad = [&](int l) { os << std::string(2 * l, ' '); };
    if (j.is_object()) {
        if (j.empty()) {
            os << "{}";
            return;
        }
        os << "{\n";
        std::size_t k = 0;
        for (auto it = j.begin(); it != j.end(); ++it, ++k) {
            pad(level + 1);
            os << json(it.key()).dump() << ": ";
            write_json(os, it.value(), level + 1);
            os << (k + 1 < j.size() ? ",\n" : "\n");
        }
        pad(level);
        os << "}";
    } else if (j.is_array()) {
        bool flat = std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive(); });
        if (j.empty() || flat) {
            os << "[";
            for (std::size_t k = 0; k < j.size(); ++k) {
                if (k) os << ", ";
                write_json(os, j[k], level);
            }
            os << "]";
            return;
        }
        os << "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            pad(level + 1);
            write_json(os, j[k], level + 1);
            os << (k + 1 < j.size() ? ",\n" : "\n");
        }
        pad(level);
        os << "]";
    } else if (j.is_number_float()) {
        double x = j.get<double>();
        if (!std::isfinite(x)) {
            os << "null";
            return;
        }
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        os << buf;
    } else {
        os << j.dump();
    }
}

inline json cplx(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

inline std::complex<double> to_cplx(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2) throw ValidationError("expected [re, im]");
    return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline json rational(const mpq_class& q) {
    return json::array({q.get_num().get_str(), q.get_den().get_str()});
}

inline mpq_class to_rational(const json& j) {
    auto s = [](const json& x) { return x.is_string() ? x.get<std::string>() : std::to_string(x.get<long long>()); };
    if (j.is_string() || j.is_number_integer()) return parse_rational(s(j));
    if (!j.is_array() || j.size() != 2) throw ValidationError("expected [\"p\", \"q\"]");
    mpz_class p(s(j.at(0))), q(s(j.at(1)));
    if (q == 0) throw ValidationError("zero denominator");
    mpq_class r(p, q);
    r.canonicalize();
    return r;
}

// {"var":"zinv","order":N,"coeffs_rational":[["p","q"],...]} or "coeffs":[[re,im],...]
template <class T>
json series_to_json(const FormalSeries<T>& s, const char* var = "zinv") {
    json j{{"var", var}, {"order", s.order()}};
    json c = json::array();
    for (auto& x : s.coeffs()) {
        if constexpr (is_exact_v<T>)
            c.push_back(rational(x));
        else
            c.push_back(cplx(to_complex<double>(x)));
    }
    j[is_exact_v<T> ? "coeffs_rational" : "coeffs"] = c;
    return j;
}

template <class T>
FormalSeries<T> series_from_json(const json& j) {
    if (j.contains("var") && j["var"] != "zinv") throw ValidationError("series: var must be zinv");
    std::vector<T> c;
    if (j.contains("coeffs_rational")) {
        for (auto& x : j["coeffs_rational"]) c.push_back(from_rational<T>(to_rational(x)));
    } else if (j.contains("coeffs")) {
        if constexpr (is_exact_v<T>) {
            throw ValidationError("series: exact mode requires coeffs_rational");
        } else {
            for (auto& x : j["coeffs"]) c.push_back(from_complex<T>(to_cplx(x)));
        }
    } else {
        throw ValidationError("series: coeffs or coeffs_rational required");
    }
    if (c.empty()) throw ValidationError("series: empty coefficient list");
    int order = j.value("order", static_cast<int>(c.size()) - 1);
    if (order < static_cast<int>(c.size()) - 1) throw ValidationError("series: more coefficients than the order");
    c.resize(static_cast<std::size_t>(order + 1), T(0));
    return FormalSeries<T>(c);
}

// {"sigma":[re,im] | ["p","q"], "tail":<series>}
template <class T>
json diffeo_to_json(const FormalDiffeo<T>& f) {
    json j;
    if constexpr (is_exact_v<T>)
        j["sigma"] = rational(f.sigma);
    else
        j["sigma"] = cplx(to_complex<double>(f.sigma));
    j["tail"] = series_to_json(f.tail);
    return j;
}

template <class T>
FormalDiffeo<T> diffeo_from_json(const json& j) {
    if (!j.contains("tail")) throw ValidationError("diffeo: tail required");
    T sigma = T(0);
    if (j.contains("sigma")) {
        const json& s = j["sigma"];
        bool textual = s.is_string() || (s.is_array() && s.size() == 2 && s[0].is_string());
        if (textual) {
            sigma = from_rational<T>(to_rational(s));
        } else if constexpr (is_exact_v<T>) {
            auto c = to_cplx(s);
            if (c.imag() != 0 || c.real() != std::floor(c.real()))
                throw ValidationError("diffeo: exact sigma must be rational text or an integer");
            sigma = mpq_class(static_cast<long>(c.real()));
        } else {
            sigma = from_complex<T>(to_cplx(s));
        }
    }
    return FormalDiffeo<T>(sigma, series_from_json<T>(j["tail"]));
}

template <class T>
json borel_to_json(const BorelFunction<T>& b) {
    FormalSeries<T> s(std::vector<T>(b.minor.c.empty() ? std::vector<T>{T(0)} : b.minor.c));
    json j = series_to_json(s, "zeta");
    j["order"] = static_cast<int>(b.minor.size()) - 1;
    j["delta"] = cplx(to_complex<double>(b.delta));
    return j;
}

inline json stokes_to_json(const StokesData& d) {
    json j{{"ray", d.ray}, {"mmax", d.m_max}};
    auto rows = [&](const std::vector<std::complex<double>>& v) {
        json a = json::array();
        for (std::size_t k = 0; k < v.size(); ++k)
            a.push_back({d.omega[k].real(), d.omega[k].imag(), v[k].real(), v[k].imag()});
        return a;
    };
    j["C"] = rows(d.C);
    j["Splus"] = rows(d.Splus);
    j["Sminus"] = rows(d.Sminus);
    return j;
}

inline StokesData stokes_from_json(const json& j) {
    StokesData d;
    d.ray = j.at("ray").get<double>();
    d.m_max = j.at("mmax").get<int>();
    auto read = [&](const char* key, std::vector<std::complex<double>>& out, bool set_omega) {
        for (auto& r : j.at(key)) {
            if (r.size() != 4) throw ValidationError("StokesData rows are [om_re, om_im, re, im]");
            if (set_omega) d.omega.push_back({r[0].get<double>(), r[1].get<double>()});
            out.push_back({r[2].get<double>(), r[3].get<double>()});
        }
    };
    read("C", d.C, true);
    read("Splus", d.Splus, false);
    read("Sminus", d.Sminus, false);
    if (static_cast<int>(d.C.size()) != d.m_max || d.Splus.size() != d.C.size() || d.Sminus.size() != d.C.size())
        throw ValidationError("StokesData: inconsistent lengths");
    return d;
}

inline json horn_to_json(const HornInvariants& h) {
    json j{{"Y", h.Y}, {"consistent", h.consistent}};
    json ap = json::array(), am = json::array();
    for (auto& a : h.A_plus) ap.push_back(cplx(a));
    for (auto& a : h.A_minus) am.push_back(cplx(a));
    j["A_plus"] = ap;
    j["A_minus"] = am;
    j["discrepancy_plus"] = h.discrepancy_plus;
    j["discrepancy_minus"] = h.discrepancy_minus;
    j["noise"] = h.noise_plus;
    j["est_error"] = h.est_error;
    return j;
}

// {"b":[<series>, ...]}
template <class T>
OdeProblem<T> ode_from_json(const json& j) {
    if (!j.contains("b") || !j["b"].is_array()) throw ValidationError("ode problem: array b required");
    std::vector<FormalSeries<T>> b;
    for (auto& s : j["b"]) b.push_back(series_from_json<T>(s));
    return OdeProblem<T>(std::move(b));
}

// f = z + 1 + sum_k c_k z^-k:
// {"tail_rational":[["p","q"],...], "order":N, "conjugate":{"tail_rational":[...]}}
// "conjugate" h = z + sum_k d_k z^-k replaces f by h o f o h^-1.
template <class R = long double>
ParabolicGerm<mpq_class, R> germ_from_json(const json& j, int order) {
    using Germ = ParabolicGerm<mpq_class, R>;
    using Cx = std::complex<R>;
    auto coeffs = [](const json& a) {
        std::vector<mpq_class> c;
        for (auto& x : a) c.push_back(to_rational(x));
        return c;
    };
    std::vector<mpq_class> c = j.contains("tail_rational") ? coeffs(j["tail_rational"]) : std::vector<mpq_class>{};
    int N = std::max(j.value("order", order), order);
    Germ g = Germ::laurent(c, N);
    if (j.contains("conjugate")) {
        std::vector<mpq_class> d = coeffs(j["conjugate"].at("tail_rational"));
        FormalSeries<mpq_class> t(N);
        for (int k = 0; k < static_cast<int>(d.size()) && k <= N; ++k) t[k] = d[k];
        if (!d.empty() && d[0] != 0) throw ValidationError("conjugate: tail must not have a constant term");
        std::vector<Cx> dc;
        for (auto& x : d) dc.push_back(to_complex<R>(x));
        auto he = [dc](Cx z) {
            Cx s = 0, w = R(1) / z;
            for (std::size_t k = dc.size(); k-- > 0;) s = s * w + dc[k];
            return z + s;
        };
        auto hp = [dc](Cx z) {
            Cx s = 0, w = R(1) / z;
            for (std::size_t k = dc.size(); k-- > 1;) s = s * w - R(k) * dc[k];
            return R(1) + s * w * w;
        };
        auto hi = [he, hp](Cx z) {
            Cx w = z;
            for (int it = 0; it < 60; ++it) {
                Cx del = (he(w) - z) / hp(w);
                w -= del;
                if (std::abs(del) <= 4 * std::numeric_limits<R>::epsilon() * (1 + std::abs(w))) return w;
            }
            throw NumericError("conjugate: inverse did not converge", 0);
        };
        g = g.conjugated(FormalDiffeo<mpq_class>(mpq_class(0), t), he, hi);
    }
    return g;
}

}  // namespace resurgence::io
