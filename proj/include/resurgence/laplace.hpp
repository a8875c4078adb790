#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <ostream>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "formal.hpp"
#include "minors.hpp"
#include "quadrature.hpp"

namespace resurgence {

struct Direction {
    double theta = 0;
};

// Open arc (theta1, theta2) with a constant growth exponent gamma.
struct SummationArc {
    double theta1 = -M_PI / 2;
    double theta2 = M_PI / 2;
    double gamma = 0;
};

template <class R>
struct SumResult {
    std::complex<R> value{};
    R est_error = 0;
    R tail_bound = 0;
    R theta = 0;
};

template <class R>
struct ArcSumResult : SumResult<R> {
    bool checked = false;  // a second admissible direction was evaluated
    R theta_check = 0;
    R consistency = 0;  // |difference| between the two directions
};

namespace laplace_detail {

template <class R>
R ray_distance(std::complex<R> omega, R theta) {
    std::complex<R> w = omega * std::polar(R(1), -theta);
    return w.real() >= 0 ? std::abs(w.imag()) : std::abs(w);
}

template <class R>
R choose_length(const Growth<R>& g, R x, const QuadratureConfig& q) {
    if (q.truncation_length > 0) return static_cast<R>(q.truncation_length);
    R margin = x - g.gamma;
    R T = std::log(R(2) * g.alpha / (static_cast<R>(q.tolerance) * margin)) / margin;
    return std::max(T, R(1));
}

template <class R>
R tail(const Growth<R>& g, R x, R T) {
    R margin = x - g.gamma;
    return g.alpha * std::exp(-margin * T) / margin;
}

template <class R>
void check_half_plane(const Growth<R>& g, R x) {
    if (!(x > g.gamma + R(1e-6)))
        throw ValidationError("z lies outside the half-plane of convergence for this direction");
}

template <class R>
void check_path_clear(const MinorEvaluator<R>& m, R theta, R T) {
    for (auto& s : m.singular_points(T + 1))
        if (ray_distance(s.omega, theta) <= R(1e-9) * (R(1) + std::abs(s.omega)))
            throw SingularHit("singular point on the integration ray");
    for (auto& [c, r] : m.exclusion_zones())
        if (std::abs(c) <= T + r && ray_distance(c, theta) < r)
            throw NumericError("Pade exclusion zone intersects the integration ray");
}

template <class R>
int panels_for(R length, R freq, const QuadratureConfig& q) {
    R n = length * std::max(R(q.nodes_per_unit), freq) / R(20);
    return std::max(1, static_cast<int>(std::ceil(n)));
}

}  // namespace laplace_detail

// a + int_0^{infty e^{i theta}} e^{-z zeta} minor(zeta) d zeta
template <class R>
SumResult<R> laplace_ray(const MinorEvaluator<R>& m, std::complex<R> a, R theta, std::complex<R> z,
                         const QuadratureConfig& q = {}) {
    using C = std::complex<R>;
    C e = std::polar(R(1), theta);
    R x = (z * e).real();
    Growth<R> g = m.growth(theta);
    laplace_detail::check_half_plane(g, x);
    R T = laplace_detail::choose_length(g, x, q);
    laplace_detail::check_path_clear(m, theta, T);
    auto f = [&](R xi) {
        C zeta = xi * e;
        return std::exp(-z * zeta) * m.eval(zeta) * e;
    };
    int panels = laplace_detail::panels_for(T, std::abs((z * e).imag()), q);
    auto r = integrate<R>(f, R(0), T, static_cast<R>(q.tolerance) / 2, panels, q.max_depth);
    SumResult<R> out;
    out.tail_bound = laplace_detail::tail(g, x, T);
    out.value = a + r.value;
    out.est_error = r.error + out.tail_bound;
    out.theta = theta;
    return out;
}

// Laplace integral along a lateral path: the ray arg = theta with half-circle detours.
template <class R>
SumResult<R> laplace_path(const MinorEvaluator<R>& m, std::complex<R> a, const LateralPath<R>& path,
                          std::complex<R> z, const QuadratureConfig& q = {}) {
    using C = std::complex<R>;
    using PP = typename MinorEvaluator<R>::PathPoint;
    const R theta = path.theta, r = path.detour_radius;
    C e = std::polar(R(1), theta);
    R x = (z * e).real();
    Growth<R> g;
    g.gamma = m.impl().gamma(theta);
    // the growth sample runs along the detoured path
    {
        R best = 0;
        for (int i = 0; i <= 4000; ++i) {
            R xi = R(400) * R(i) * R(i) / R(4000 * 4000);
            auto p = m.point_on_path(path, xi);
            try {
                best = std::max(best, std::abs(m.eval_on_path(path, p)) * std::exp(-g.gamma * xi));
            } catch (const SingularHit&) {
            }
        }
        g.alpha = std::max(R(2) * best, R(1e-300));
    }
    laplace_detail::check_half_plane(g, x);
    R T = laplace_detail::choose_length(g, x, q);
    auto pts = m.on_ray(theta, T + 2 * r);
    R prev = 0;
    for (auto& s : pts) {
        R d = std::abs(s.omega);
        if (d - r <= prev + R(1e-12)) throw ValidationError("detour radius too large for the singular-point gaps");
        prev = d + r;
    }
    R tol = static_cast<R>(q.tolerance) / 2;
    R total_len = T + pts.size() * (pi_v<R> - 2) * r;
    SumResult<R> out;
    out.theta = theta;
    auto add = [&](const QuadResult<R>& res) {
        out.value += res.value;
        out.est_error += res.error;
    };
    R start = 0;
    R freq = std::abs((z * e).imag());
    for (std::size_t j = 0; j < pts.size(); ++j) {
        R d = std::abs(pts[j].omega);
        R stop = d - r;
        auto line = [&](R xi) {
            PP p{xi * e, static_cast<int>(j) - 1, false};
            return std::exp(-z * p.zeta) * m.eval_on_path(path, p) * e;
        };
        add(integrate<R>(line, start, stop, tol * (stop - start) / total_len,
                         laplace_detail::panels_for(stop - start, freq, q), q.max_depth));
        int s = path.sign(j);
        C w = pts[j].omega;
        auto arc = [&](R phi) {
            C u = std::polar(R(1), theta - s * phi);
            PP p{w + r * u, static_cast<int>(j), true};
            C dz = C(0, -s) * r * u;
            // parametrised from phi = pi down to 0
            return -std::exp(-z * p.zeta) * m.eval_on_path(path, p) * dz;
        };
        add(integrate<R>(arc, R(0), pi_v<R>, tol * pi_v<R> * r / total_len, 2, q.max_depth));
        start = d + r;
    }
    auto line = [&](R xi) {
        PP p{xi * e, static_cast<int>(pts.size()) - 1, false};
        return std::exp(-z * p.zeta) * m.eval_on_path(path, p) * e;
    };
    add(integrate<R>(line, start, T, tol * (T - start) / total_len, laplace_detail::panels_for(T - start, freq, q),
                     q.max_depth));
    out.tail_bound = laplace_detail::tail(g, x, T);
    out.value += a;
    out.est_error += out.tail_bound;
    return out;
}

// Borel sum on an arc: uses the admissible direction maximising Re(z e^{i theta}),
// and a second admissible direction (when one exists) as a consistency check.
template <class R>
ArcSumResult<R> borel_sum_arc(const MinorEvaluator<R>& m, std::complex<R> a, const SummationArc& arc,
                              std::complex<R> z, const QuadratureConfig& q = {}) {
    R t1 = static_cast<R>(arc.theta1), t2 = static_cast<R>(arc.theta2);
    if (!(t1 < t2) || t2 - t1 > pi_v<R> + R(1e-12)) throw ValidationError("arc must satisfy theta1 < theta2 <= theta1 + pi");
    for (auto& s : m.singular_points(R(200))) {
        R arg = std::arg(s.omega);
        for (int k = -2; k <= 2; ++k) {
            R a2 = arg + 2 * pi_v<R> * k;
            if (a2 > t1 + R(1e-9) && a2 < t2 - R(1e-9)) throw ValidationError("arc contains a singular direction");
        }
    }
    R delta = std::min(R(0.01), (t2 - t1) / 10);
    R lo = t1 + delta, hi = t2 - delta;
    auto gamma_at = [&](R th) { return std::max(static_cast<R>(arc.gamma), m.impl().gamma(th)); };
    auto margin = [&](R th) { return (z * std::polar(R(1), th)).real() - gamma_at(th); };
    // best direction: theta = -arg z, moved into [lo, hi] modulo 2 pi
    R best = -std::arg(z);
    R cand = lo, cand_val = margin(lo);
    for (int k = -2; k <= 2; ++k) {
        R th = std::clamp(best + 2 * pi_v<R> * k, lo, hi);
        if (margin(th) > cand_val) {
            cand = th;
            cand_val = margin(th);
        }
    }
    if (!(cand_val > R(1e-6))) throw ValidationError("z lies outside the summation domain of the arc");
    ArcSumResult<R> out;
    static_cast<SumResult<R>&>(out) = laplace_ray(m, a, cand, z, q);
    // a second direction, as far from the first as possible while keeping half the margin
    R other = cand;
    const int steps = 64;
    for (int i = 0; i <= steps; ++i) {
        R th = lo + (hi - lo) * i / steps;
        if (margin(th) >= cand_val / 2 && std::abs(th - cand) > std::abs(other - cand)) other = th;
    }
    if (std::abs(other - cand) > R(1e-3)) {
        auto r2 = laplace_ray(m, a, other, z, q);
        out.checked = true;
        out.theta_check = other;
        out.consistency = std::abs(r2.value - out.value);
    }
    return out;
}

// A requested ray within this angle of a singular direction is moved onto it.
inline constexpr double kRaySnap = 1e-3;

template <class R>
R snap_to_singular_direction(const MinorEvaluator<R>& m, R theta, R radius = R(200)) {
    R best = R(kRaySnap), out = theta;
    for (auto& s : m.singular_points(radius)) {
        R d = std::remainder(std::arg(s.omega) - theta, 2 * pi_v<R>);
        if (std::abs(d) < best) {
            best = std::abs(d);
            out = std::arg(s.omega);
        }
    }
    return out;
}

// (L^{theta - eps}, L^{theta + eps}): the sums to the right (+) and left (-) of a singular ray.
template <class R>
std::pair<SumResult<R>, SumResult<R>> lateral_pair(const MinorEvaluator<R>& m, std::complex<R> a, R theta, R eps,
                                                   std::complex<R> z, const QuadratureConfig& q = {}) {
    if (!(eps > 0) || eps >= pi_v<R> / 2) throw ValidationError("lateral offset must lie in (0, pi/2)");
    for (auto& s : m.singular_points(R(200))) {
        R d = std::remainder(std::arg(s.omega) - theta, 2 * pi_v<R>);
        if (std::abs(d) < R(1e-9)) continue;
        if (std::abs(d) <= eps)
            throw ValidationError("a singular direction lies between the lateral rays");
    }
    return {laplace_ray(m, a, theta - eps, z, q), laplace_ray(m, a, theta + eps, z, q)};
}

// Residual study |value(z) - sum_{n<=N} a_n z^-n| against L M^N N! |z|^{-N-1}.
struct GevreyRow {
    std::complex<double> z;
    int N;
    double residual;
    double noise;
    double envelope = 0;
    bool used = true;
};

struct GevreyReport {
    double L = 0, M = 0;
    double inflation = 1;  // max residual/fit ratio over used rows, folded into L
    bool holds = false;
    std::vector<GevreyRow> rows;
};

// Residual rows below 10x the value's noise floor are excluded from the fit and only
// required to stay under the envelope plus that floor. The bound holds when the
// least-squares envelope needs at most a factor kGevreySlack to cover every row.
inline constexpr double kGevreySlack = 10.0;

template <class T, class V>
GevreyReport gevrey_residual(const FormalSeries<T>& phi, const std::function<std::pair<V, double>(const V&)>& value_fn,
                             const std::vector<V>& z_list, int N_max) {
    if (N_max > phi.order()) throw ValidationError("gevrey_residual: N_max exceeds the series order");
    GevreyReport rep;
    for (const V& z : z_list) {
        auto [val, noise] = value_fn(z);
        V partial = V(0), zp = V(1);
        V zinv = V(1) / z;
        for (int N = 0; N <= N_max; ++N) {
            V a;
            if constexpr (is_exact_v<T>) {
                a = from_rational<V>(phi[N]);
            } else {
                a = from_complex<V>(to_complex<long double>(phi[N]));
            }
            partial += a * zp;
            zp *= zinv;
            GevreyRow row;
            row.z = to_complex<double>(z);
            row.N = N;
            row.residual = magnitude(V(val - partial));
            row.noise = noise;
            row.used = row.residual > 10 * noise && row.residual > 0;
            rep.rows.push_back(row);
        }
    }
    int used = 0;
    for (auto& r : rep.rows) used += r.used;
    if (used < 2) return rep;
    Eigen::MatrixXd A(used, 2);
    Eigen::VectorXd b(used);
    int i = 0;
    for (auto& r : rep.rows) {
        if (!r.used) continue;
        A(i, 0) = 1;
        A(i, 1) = r.N;
        b(i) = std::log(r.residual) - std::lgamma(r.N + 1.0) + (r.N + 1) * std::log(std::abs(r.z));
        ++i;
    }
    Eigen::Vector2d x = A.colPivHouseholderQr().solve(b);
    rep.L = std::exp(x(0));
    rep.M = std::exp(x(1));
    auto env = [&](const GevreyRow& r) {
        return std::exp(x(0) + r.N * x(1) + std::lgamma(r.N + 1.0) - (r.N + 1) * std::log(std::abs(r.z)));
    };
    for (auto& r : rep.rows)
        if (r.used) rep.inflation = std::max(rep.inflation, r.residual / env(r));
    rep.L *= rep.inflation;
    rep.holds = rep.inflation <= kGevreySlack;
    for (auto& r : rep.rows) {
        r.envelope = env(r) * rep.inflation;
        if (!r.used && r.residual > r.envelope + 10 * r.noise) rep.holds = false;
    }
    return rep;
}

// CSV with columns z_re, z_im, value_re, value_im, est_error.
template <class R>
void write_grid_csv(std::ostream& os, const std::vector<std::pair<std::complex<R>, SumResult<R>>>& grid) {
    os << "z_re,z_im,value_re,value_im,est_error\n";
    os.precision(17);
    for (auto& [z, r] : grid)
        os << z.real() << ',' << z.imag() << ',' << r.value.real() << ',' << r.value.imag() << ',' << r.est_error
           << '\n';
}

}  // namespace resurgence
