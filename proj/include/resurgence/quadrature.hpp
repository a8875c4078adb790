#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "errors.hpp"

namespace resurgence {

struct QuadratureConfig {
    double truncation_length = 0;  // 0: choose from the growth bound
    int nodes_per_unit = 8;
    double tolerance = 1e-13;
    int max_depth = 30;
};

template <class R>
struct QuadResult {
    std::complex<R> value{};
    R error = 0;
};

namespace detail {

template <class R, class F>
std::complex<R> gauss_panel(const F& f, R a, R b) {
    using G = boost::math::quadrature::gauss<R, 20>;
    const auto& x = G::abscissa();
    const auto& w = G::weights();
    R h = (b - a) / 2, m = (a + b) / 2;
    std::complex<R> s{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] == R(0)) {
            s += w[i] * f(m);
        } else {
            s += w[i] * (f(m - h * x[i]) + f(m + h * x[i]));
        }
    }
    return s * h;
}

}  // namespace detail

// Composite 20-point Gauss-Legendre on [a,b] with adaptive bisection of panels
// whose halves disagree with the whole by more than their share of tol.
template <class R, class F>
QuadResult<R> integrate(const F& f, R a, R b, R tol, int initial_panels = 1, int max_depth = 30) {
    QuadResult<R> out;
    if (b == a) return out;
    initial_panels = std::max(initial_panels, 1);
    R L = b - a;
    bool failed = false;
    struct Panel {
        R a, b;
        std::complex<R> whole;
        int depth;
    };
    std::vector<Panel> stack;
    for (int k = initial_panels - 1; k >= 0; --k) {
        R pa = a + L * k / initial_panels, pb = a + L * (k + 1) / initial_panels;
        stack.push_back({pa, pb, detail::gauss_panel<R>(f, pa, pb), 0});
    }
    while (!stack.empty()) {
        Panel p = stack.back();
        stack.pop_back();
        R m = (p.a + p.b) / 2;
        auto left = detail::gauss_panel<R>(f, p.a, m);
        auto right = detail::gauss_panel<R>(f, m, p.b);
        R diff = std::abs(left + right - p.whole);
        R local = tol * std::abs(p.b - p.a) / std::abs(L);
        // halves agreeing to roundoff cannot be refined further
        R floor = 64 * std::numeric_limits<R>::epsilon() * (std::abs(left) + std::abs(right));
        if (diff <= local || diff <= floor || p.depth >= max_depth) {
            if (diff > local && diff > floor) failed = true;
            out.value += left + right;
            out.error += diff;
        } else {
            stack.push_back({m, p.b, right, p.depth + 1});
            stack.push_back({p.a, m, left, p.depth + 1});
        }
    }
    if (failed && out.error > tol)
        throw NumericError("quadrature did not converge", static_cast<double>(out.error));
    return out;
}

}  // namespace resurgence
