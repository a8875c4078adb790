#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "errors.hpp"
#include "laplace.hpp"
#include "minors.hpp"

namespace resurgence {

// Ordered singular points omega_1 < omega_2 < ... on the ray arg = theta.
template <class R>
struct SingularLattice {
    R theta = 0;
    std::vector<std::complex<R>> points;
    bool closed_under_addition = false;

    // omega_j = j * omega_1, j = 1..m
    static SingularLattice multiples(std::complex<R> omega1, int m) {
        SingularLattice L;
        L.theta = std::arg(omega1);
        for (int j = 1; j <= m; ++j) L.points.push_back(omega1 * R(j));
        L.closed_under_addition = true;
        return L;
    }
};

// ---------------------------------------------------------------------------
// Residue-based Delta_omega for meromorphic minors.

template <class R>
std::complex<R> alien_residue(const MinorEvaluator<R>& m, std::complex<R> omega) {
    using C = std::complex<R>;
    R gap = std::numeric_limits<R>::infinity();
    bool listed = false;
    for (auto& s : m.singular_points(std::abs(omega) * 2 + 10)) {
        R d = std::abs(s.omega - omega);
        if (d <= R(1e-12) * (1 + std::abs(omega))) {
            listed = true;
            if (s.type != SingularType::pole) throw ValidationError("alien_residue: not a pole");
            continue;
        }
        gap = std::min(gap, d);
    }
    if (!listed) throw ValidationError("alien_residue: omega is not a listed singular point");
    gap = std::min(gap, std::abs(omega));
    const R r = gap / 4;
    const int N = 64;
    C res = 0, second = 0;
    R fmax = 0;
    for (int k = 0; k < N; ++k) {
        C u = std::polar(R(1), 2 * pi_v<R> * k / N);
        C f = m.eval(omega + r * u);
        fmax = std::max(fmax, std::abs(f));
        res += f * u;
        second += f * u * u;
    }
    res *= r / R(N);
    second *= r * r / R(N);
    if (std::abs(second) > R(1e-9) * std::max(std::abs(res) * r, fmax * r * r))
        throw NumericError("alien_residue: pole is not simple", static_cast<double>(std::abs(second)));
    return C(0, 2 * pi_v<R>) * res;
}

// ---------------------------------------------------------------------------
// Free graded operator algebra. A word is a path alpha_0 < alpha_1 < ... < alpha_s of
// lattice indices (0 = origin) and stands for
// Delta_{omega_{alpha_s} - omega_{alpha_{s-1}}} o ... o Delta_{omega_{alpha_1} - omega_{alpha_0}}.
// Composition A o B concatenates a path of B with a path of A starting where it ends.

class FreeOperatorSeries {
public:
    using Word = std::vector<int>;

    FreeOperatorSeries() = default;
    explicit FreeOperatorSeries(int m_max, mpq_class id = 0) : m_max_(m_max), id_(std::move(id)) { id_.canonicalize(); }

    static FreeOperatorSeries identity(int m_max) { return FreeOperatorSeries(m_max, 1); }
    // Delta_{omega_to - omega_from}
    static FreeOperatorSeries letter(int m_max, int from, int to, mpq_class c = 1) {
        c.canonicalize();
        if (!(0 <= from && from < to)) throw ValidationError("letter: need 0 <= from < to");
        FreeOperatorSeries s(m_max);
        if (to <= m_max) s.terms_[{from, to}] = c;
        return s;
    }
    // sum of all letters Delta_{omega_b - omega_a}, 0 <= a < b <= m_max
    static FreeOperatorSeries all_letters(int m_max) {
        FreeOperatorSeries s(m_max);
        for (int a = 0; a < m_max; ++a)
            for (int b = a + 1; b <= m_max; ++b) s.terms_[{a, b}] = 1;
        return s;
    }

    int m_max() const { return m_max_; }
    const mpq_class& id() const { return id_; }
    const std::map<Word, mpq_class>& terms() const { return terms_; }
    mpq_class coeff(const Word& w) const {
        auto it = terms_.find(w);
        return it == terms_.end() ? mpq_class(0) : it->second;
    }
    void set(const Word& w, mpq_class c) {
        validate(w);
        c.canonicalize();
        if (w.back() > m_max_) return;
        if (c == 0)
            terms_.erase(w);
        else
            terms_[w] = std::move(c);
    }

    // Homogeneous component from the origin to omega_j.
    FreeOperatorSeries component(int j) const {
        FreeOperatorSeries s(m_max_);
        for (auto& [w, c] : terms_)
            if (w.front() == 0 && w.back() == j) s.terms_[w] = c;
        return s;
    }

    FreeOperatorSeries& operator+=(const FreeOperatorSeries& o) {
        m_max_ = std::min(m_max_, o.m_max_);
        id_ += o.id_;
        for (auto& [w, c] : o.terms_) terms_[w] += c;
        prune();
        return *this;
    }
    FreeOperatorSeries operator+(const FreeOperatorSeries& o) const {
        FreeOperatorSeries r = *this;
        r += o;
        return r;
    }
    FreeOperatorSeries operator-(const FreeOperatorSeries& o) const { return *this + o * mpq_class(-1); }
    FreeOperatorSeries operator*(const mpq_class& k) const {
        FreeOperatorSeries r = *this;
        r.id_ *= k;
        for (auto& [w, c] : r.terms_) c *= k;
        r.prune();
        return r;
    }
    // composition: (*this) o o  (o is applied first)
    FreeOperatorSeries operator*(const FreeOperatorSeries& o) const {
        FreeOperatorSeries r(std::min(m_max_, o.m_max_));
        r.id_ = id_ * o.id_;
        for (auto& [w, c] : terms_) r.terms_[w] += c * o.id_;
        for (auto& [w, c] : o.terms_) r.terms_[w] += c * id_;
        for (auto& [wb, cb] : o.terms_)
            for (auto& [wa, ca] : terms_) {
                if (wa.front() != wb.back()) continue;
                Word w = wb;
                w.insert(w.end(), wa.begin() + 1, wa.end());
                if (w.back() <= r.m_max_) r.terms_[w] += ca * cb;
            }
        r.prune();
        return r;
    }
    bool operator==(const FreeOperatorSeries& o) const {
        return m_max_ == o.m_max_ && id_ == o.id_ && terms_ == o.terms_;
    }

    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        if (id_ != 0) {
            os << id_.get_str() << " Id";
            first = false;
        }
        for (auto& [w, c] : terms_) {
            os << (first ? "" : " + ") << c.get_str() << " ";
            for (std::size_t k = w.size() - 1; k >= 1; --k) {
                os << "D[" << w[k - 1] << "->" << w[k] << "]";
                if (k > 1) os << "o";
            }
            first = false;
        }
        return first ? "0" : os.str();
    }

private:
    static void validate(const Word& w) {
        if (w.size() < 2 || w.front() < 0) throw ValidationError("word must be a path of length >= 1 from index >= 0");
        for (std::size_t k = 1; k < w.size(); ++k)
            if (w[k] <= w[k - 1]) throw ValidationError("word indices must increase");
    }
    void prune() {
        for (auto it = terms_.begin(); it != terms_.end();)
            it = (it->second == 0 || it->first.back() > m_max_) ? terms_.erase(it) : std::next(it);
    }

    int m_max_ = 0;
    mpq_class id_ = 0;
    std::map<Word, mpq_class> terms_;
};

// exp(D) for D without identity part; the series terminates at degree m_max.
inline FreeOperatorSeries free_exp(const FreeOperatorSeries& D) {
    if (D.id() != 0) throw ValidationError("free_exp: argument has an identity part");
    int m = D.m_max();
    FreeOperatorSeries out = FreeOperatorSeries::identity(m), power = FreeOperatorSeries::identity(m);
    mpq_class f = 1;
    for (int k = 1; k <= m; ++k) {
        power = D * power;
        f /= k;
        out += power * f;
    }
    return out;
}

// log(T) for T = Id + positive-degree part.
inline FreeOperatorSeries free_log(const FreeOperatorSeries& T) {
    if (T.id() != 1) throw ValidationError("free_log: argument must be Id + higher terms");
    int m = T.m_max();
    FreeOperatorSeries P = T - FreeOperatorSeries::identity(m);
    FreeOperatorSeries out(m), power = FreeOperatorSeries::identity(m);
    for (int k = 1; k <= m; ++k) {
        power = P * power;
        out += power * mpq_class(k % 2 ? 1 : -1, k);
    }
    return out;
}

// Weights p(eps)! q(eps)! / r! of the median average over eps in {+,-}^{r-1}; +1 / -1 entries.
inline std::map<std::vector<int>, mpq_class> median_weights(int r) {
    if (r < 1) throw ValidationError("median_weights: r >= 1 required");
    std::map<std::vector<int>, mpq_class> out;
    auto fact = [](int n) {
        mpz_class f = 1;
        for (int k = 2; k <= n; ++k) f *= k;
        return f;
    };
    mpz_class rf = fact(r);
    for (unsigned mask = 0; mask < (1u << (r - 1)); ++mask) {
        std::vector<int> eps(r - 1);
        int p = 0;
        for (int k = 0; k < r - 1; ++k) {
            eps[k] = (mask >> (r - 2 - k)) & 1u ? -1 : 1;
            p += eps[k] > 0;
        }
        mpq_class w(fact(p) * fact(r - 1 - p), rf);
        w.canonicalize();
        out[eps] = w;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stokes data. Values on the lattice omega_j = j omega_1 are indexed j = 1..m.

// Gaussian rationals times powers of tau = 2 pi i: sum_k (a_k + i b_k) tau^k.
class TauNumber {
public:
    TauNumber() = default;
    TauNumber(long v) { if (v) t_[0] = {mpq_class(v), mpq_class(0)}; }
    TauNumber(mpq_class re, mpq_class im = 0, int power = 0) {
        re.canonicalize();
        im.canonicalize();
        if (re != 0 || im != 0) t_[power] = {std::move(re), std::move(im)};
    }
    static TauNumber tau(int power = 1) { return TauNumber(1, 0, power); }

    TauNumber operator+(const TauNumber& o) const {
        TauNumber r = *this;
        for (auto& [k, v] : o.t_) {
            auto& x = r.t_[k];
            x.first += v.first;
            x.second += v.second;
        }
        r.prune();
        return r;
    }
    TauNumber operator-() const {
        TauNumber r = *this;
        for (auto& [k, v] : r.t_) {
            v.first = -v.first;
            v.second = -v.second;
        }
        return r;
    }
    TauNumber operator-(const TauNumber& o) const { return *this + (-o); }
    TauNumber operator*(const TauNumber& o) const {
        TauNumber r;
        for (auto& [i, a] : t_)
            for (auto& [j, b] : o.t_) {
                auto& x = r.t_[i + j];
                x.first += a.first * b.first - a.second * b.second;
                x.second += a.first * b.second + a.second * b.first;
            }
        r.prune();
        return r;
    }
    TauNumber operator*(const mpq_class& k) const { return *this * TauNumber(k); }
    TauNumber& operator+=(const TauNumber& o) { return *this = *this + o; }
    bool operator==(const TauNumber& o) const { return t_ == o.t_; }
    bool operator!=(const TauNumber& o) const { return !(*this == o); }

    std::complex<double> value() const {
        std::complex<double> s = 0, tau(0, 2 * M_PI);
        for (auto& [k, v] : t_) s += std::complex<double>(v.first.get_d(), v.second.get_d()) * std::pow(tau, k);
        return s;
    }
    const std::map<int, std::pair<mpq_class, mpq_class>>& terms() const { return t_; }

private:
    void prune() {
        for (auto it = t_.begin(); it != t_.end();)
            it = (it->second.first == 0 && it->second.second == 0) ? t_.erase(it) : std::next(it);
    }
    std::map<int, std::pair<mpq_class, mpq_class>> t_;
};

inline TauNumber operator*(const mpq_class& k, const TauNumber& t) { return t * k; }

namespace alien_detail {

template <class K>
K scale(const K& x, const mpq_class& q) {
    if constexpr (std::is_same_v<K, TauNumber>) {
        return x * q;
    } else {
        return x * static_cast<typename K::value_type>(q.get_d());
    }
}

// All compositions (j_1, ..., j_s) of n into positive parts.
inline void compositions(int n, std::vector<int>& cur, const std::function<void(const std::vector<int>&)>& f) {
    if (n == 0) {
        f(cur);
        return;
    }
    for (int k = 1; k <= n; ++k) {
        cur.push_back(k);
        compositions(n - k, cur, f);
        cur.pop_back();
    }
}

// sum over compositions of j with s >= 2 parts of w(s)/s! Gamma C...C
template <class K>
K higher_terms(const std::vector<K>& C, const K& omega1, int j, bool plus) {
    K acc = K(0);
    std::vector<int> cur;
    compositions(j, cur, [&](const std::vector<int>& parts) {
        int s = static_cast<int>(parts.size());
        if (s < 2) return;
        K term = K(1);
        int partial = 0;
        for (int k = 0; k < s; ++k) {
            term = term * C[parts[k] - 1];
            if (k < s - 1) {
                partial += parts[k];
                term = term * scale(omega1, mpq_class(partial));
            }
        }
        mpz_class f = 1;
        for (int k = 2; k <= s; ++k) f *= k;
        mpq_class w(1, 1);
        w /= f;
        if (plus)
            w = -w;
        else if (s % 2 == 0)
            w = -w;
        acc = acc + scale(term, w);
    });
    return acc;
}

}  // namespace alien_detail

// S+_j = -sum_s (1/s!) Gamma C..C, S-_j = sum_s ((-1)^{s-1}/s!) Gamma C..C over compositions of j.
template <class K>
std::pair<std::vector<K>, std::vector<K>> stokes_exp(const std::vector<K>& C, const K& omega1) {
    int m = static_cast<int>(C.size());
    std::vector<K> Sp(m), Sm(m);
    for (int j = 1; j <= m; ++j) {
        Sp[j - 1] = alien_detail::scale(C[j - 1], mpq_class(-1)) + alien_detail::higher_terms(C, omega1, j, true);
        Sm[j - 1] = C[j - 1] + alien_detail::higher_terms(C, omega1, j, false);
    }
    return {Sp, Sm};
}

// Inverse of stokes_exp from either family, by a degree-triangular solve.
template <class K>
std::vector<K> stokes_log(const std::vector<K>& S, const K& omega1, bool from_plus) {
    int m = static_cast<int>(S.size());
    std::vector<K> C(m, K(0));
    for (int j = 1; j <= m; ++j) {
        K rest = alien_detail::higher_terms(C, omega1, j, from_plus);
        K d = S[j - 1] - rest;
        C[j - 1] = from_plus ? alien_detail::scale(d, mpq_class(-1)) : d;
    }
    return C;
}

// C, S+ and S- on the lattice omega_j = j omega_1 of one ray.
struct StokesData {
    double ray = 0;
    int m_max = 0;
    std::vector<std::complex<double>> omega, C, Splus, Sminus;

    static StokesData from_C(std::complex<double> omega1, std::vector<std::complex<double>> C) {
        StokesData d;
        d.ray = std::arg(omega1);
        d.m_max = static_cast<int>(C.size());
        for (int j = 1; j <= d.m_max; ++j) d.omega.push_back(double(j) * omega1);
        auto [p, m] = stokes_exp(C, omega1);
        d.C = std::move(C);
        d.Splus = std::move(p);
        d.Sminus = std::move(m);
        return d;
    }
    std::complex<double> omega1() const { return omega.empty() ? std::polar(1.0, ray) : omega.front(); }
};

// ---------------------------------------------------------------------------
// Numerical measurement of exponential components of lateral differences.

struct ComponentFit {
    std::vector<std::complex<double>> omega;
    std::vector<std::complex<double>> coeff;   // accepted estimates (0 if rejected)
    std::vector<std::complex<double>> raw;     // unfiltered least-squares estimates
    std::vector<bool> accepted;
    std::vector<double> std_error;             // per coefficient, from the noise floor and the QR factor
    double residual = 0;
    double condition = 0;
};

inline constexpr double kStokesConditionLimit = 1e12;

// Least-squares fit of values(z) ~ sum_{j=1..M} c_j e^{-j omega1 z}, columns scaled to unit norm.
// noise: error level of the values; the floor is max(noise, residual).
inline ComponentFit fit_components(const std::vector<std::complex<double>>& z,
                                   const std::vector<std::complex<double>>& values, std::complex<double> omega1,
                                   int M, int report, double noise = 0) {
    using C = std::complex<double>;
    int n = static_cast<int>(z.size());
    if (n < M) throw ValidationError("fit_components: fewer grid points than components");
    if (report > M) throw ValidationError("fit_components: more reported than fitted components");
    Eigen::MatrixXcd A(n, M);
    Eigen::VectorXcd b(n);
    Eigen::VectorXd norms(M);
    for (int i = 0; i < n; ++i) {
        b(i) = values[i];
        for (int j = 0; j < M; ++j) A(i, j) = std::exp(-double(j + 1) * omega1 * z[i]);
    }
    for (int j = 0; j < M; ++j) {
        norms(j) = A.col(j).norm();
        if (norms(j) == 0) throw NumericError("fit_components: basis underflow", 0);
        A.col(j) /= norms(j);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(A);
    Eigen::VectorXd d = qr.matrixR().diagonal().cwiseAbs();
    ComponentFit fit;
    fit.condition = d.maxCoeff() / d.minCoeff();
    if (!(fit.condition < kStokesConditionLimit))
        throw NumericError("fit_components: ill-conditioned fit", fit.condition);
    Eigen::VectorXcd x = qr.solve(b);
    fit.residual = (A * x - b).norm() / std::sqrt(double(n));
    // x = P R^-1 Q^H b: the standard error of x_P(k) is floor * |row k of R^-1|
    Eigen::MatrixXcd R = qr.matrixR().topLeftCorner(M, M).triangularView<Eigen::Upper>();
    Eigen::MatrixXcd Rinv = R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXcd::Identity(M, M));
    Eigen::VectorXd se(M);
    double floor = std::max(noise, fit.residual);
    for (int k = 0; k < M; ++k) se(qr.colsPermutation().indices()(k)) = floor * Rinv.row(k).norm();
    for (int j = 0; j < report; ++j) {
        C c = x(j) / norms(j);
        double typical = std::abs(x(j)) / std::sqrt(double(n));  // rms size of component j on the grid
        bool ok = typical > 10 * fit.residual && std::abs(x(j)) > 10 * se(j);
        fit.std_error.push_back(se(j) / norms(j));
        fit.omega.push_back(double(j + 1) * omega1);
        fit.raw.push_back(c);
        fit.accepted.push_back(ok);
        fit.coeff.push_back(ok ? c : C(0));
    }
    return fit;
}

// Grid over one period of the first exponential at two distances from the origin.
inline std::vector<std::complex<double>> stokes_grid(std::complex<double> omega1, int m_max, double eps,
                                                     double min_margin) {
    using C = std::complex<double>;
    double a = std::abs(omega1), theta = std::arg(omega1);
    double rho = std::max(6.9 / (m_max * a), min_margin);
    std::vector<C> z;
    for (double x : {rho, 1.5 * rho}) {
        double half = M_PI / a;
        // keep both lateral half-planes: |y| < x cot(eps)
        double ymax = std::min(half, 0.9 * x / std::tan(eps));
        int count = std::max(16, 2 * m_max);
        for (int k = 0; k < count; ++k) {
            double y = -ymax + 2 * ymax * (k + 0.5) / count;
            z.push_back(std::polar(1.0, -theta) * C(x, y));
        }
    }
    return z;
}

struct StokesMeasurement {
    ComponentFit fit;
    double theta = 0;  // singular direction actually used
    double eps = 0;
    std::vector<std::complex<double>> z;
    std::vector<std::complex<double>> jump;  // L+ - L- on the grid
};

inline constexpr int kStokesGuard = 8;

// Fits L+ - L- (+ = L^{theta - eps}) on the ray of omega1 against e^{-omega_j z}, j <= max(m_max, guard).
inline StokesMeasurement measure_stokes(const MinorEvaluator<double>& m, std::complex<double> a, double theta,
                                        int m_max, std::vector<std::complex<double>> z_grid = {},
                                        const QuadratureConfig& q = {}) {
    using C = std::complex<double>;
    if (m_max < 1) throw ValidationError("measure_stokes: m_max >= 1 required");
    theta = snap_to_singular_direction(m, theta, 1e3);
    auto on = m.on_ray(theta, 1e3);
    C omega1 = on.empty() ? std::polar(1.0, theta) : on.front().omega;
    // widest eps keeping other singular directions out of the lateral sector
    double eps = M_PI / 4;
    for (auto& s : m.singular_points(1e3)) {
        double d = std::abs(std::remainder(std::arg(s.omega) - theta, 2 * M_PI));
        if (d > 1e-9) eps = std::min(eps, d / 2);
    }
    StokesMeasurement out;
    out.theta = theta;
    out.eps = eps;
    double gamma = std::max(m.impl().gamma(theta - eps), m.impl().gamma(theta + eps));
    out.z = z_grid.empty() ? stokes_grid(omega1, m_max, eps, gamma / std::cos(eps) + 0.5) : std::move(z_grid);
    double noise = 0;
    for (C z : out.z) {
        auto [p, mi] = lateral_pair(m, a, theta, eps, z, q);
        out.jump.push_back(p.value - mi.value);
        noise = std::max(noise, p.est_error + mi.est_error);
    }
    int M = std::max(m_max, kStokesGuard);
    M = std::min<int>(M, static_cast<int>(out.z.size()) / 2);
    if (M < m_max) throw ValidationError("measure_stokes: grid too small for m_max components");
    out.fit = fit_components(out.z, out.jump, omega1, M, m_max, noise);
    return out;
}

}  // namespace resurgence
