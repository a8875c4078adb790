#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "bernoulli.hpp"
#include "errors.hpp"
#include "scalar.hpp"

namespace resurgence {

enum class SingularType { pole, branch };

template <class R>
struct SingularPoint {
    std::complex<R> omega;
    SingularType type = SingularType::pole;
    int multiplicity = 1;
};

// |minor(xi e^{i theta})| <= alpha e^{gamma xi} along a ray.
template <class R>
struct Growth {
    R alpha = 1;
    R gamma = 0;
};

// Crossing data of a path that follows the ray arg = theta and goes around the
// singular points met on it by half-circles, to the right (+1) or left (-1).
template <class R>
struct LateralPath {
    R theta = 0;
    std::vector<int> crossing_signs;  // one per singular point on the ray, in order
    R detour_radius = R(0.25);

    int sign(std::size_t j) const {
        if (crossing_signs.empty()) return 1;
        return j < crossing_signs.size() ? crossing_signs[j] : crossing_signs.back();
    }
};

template <class R>
class MinorImpl {
public:
    using C = std::complex<R>;
    virtual ~MinorImpl() = default;

    virtual C eval(C zeta) const = 0;
    virtual std::vector<SingularPoint<R>> singular_points(R radius) const = 0;
    virtual std::string name() const = 0;
    // Exponential type along a ray; polynomially growing minors use a small positive gamma.
    virtual R gamma(R theta) const {
        (void)theta;
        return 0;
    }
    // Minors of the form g(zeta, log(1 + zeta)) override this; eval uses the principal log.
    virtual bool log_branch() const { return false; }
    virtual C eval_with_log(C zeta, C log1p) const {
        (void)log1p;
        return eval(zeta);
    }
    // Discs a path must avoid (Pade artifacts).
    virtual std::vector<std::pair<C, R>> exclusion_zones() const { return {}; }
};

namespace minors_detail {

template <class R>
R polynomial_growth_gamma() {
    return R(0.05);
}

template <class R>
std::vector<R> stirling_taylor(int terms) {
    // sum_{k>=1} B_2k/(2k)! zeta^{2k-2}
    auto B = bernoulli_numbers(2 * terms);
    std::vector<R> c;
    mpq_class f(1);
    for (int n = 1; n <= 2 * terms; ++n) {
        f *= n;
        if (n % 2 == 0) c.push_back(static_cast<R>(hp_from_rational(B[n] / f)));
    }
    return c;
}

// coth(w), stable for large |Re w|
template <class R>
std::complex<R> coth(std::complex<R> w) {
    if (w.real() < 0) return -coth(-w);
    auto e = std::exp(R(-2) * w);
    return (R(1) + e) / (R(1) - e);
}

template <class R>
void check_not_at(const std::complex<R>& zeta, const std::complex<R>& omega) {
    if (std::abs(zeta - omega) <= R(1e-12) * (R(1) + std::abs(omega)))
        throw SingularHit("minor evaluated at a singular point");
}

}  // namespace minors_detail

template <class R>
class EulerMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    C eval(C z) const override {
        minors_detail::check_not_at(z, C(-1));
        return R(1) / (R(1) + z);
    }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        if (radius < 1) return {};
        return {{C(-1), SingularType::pole, 1}};
    }
    std::string name() const override { return "euler"; }
};

// zeta^-2 (zeta/2 coth(zeta/2) - 1)
template <class R>
class StirlingMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    StirlingMinor() : taylor_(minors_detail::stirling_taylor<R>(24)) {}
    C eval(C z) const override {
        if (std::abs(z) < R(1)) {
            C z2 = z * z, s = 0;
            for (auto it = taylor_.rbegin(); it != taylor_.rend(); ++it) s = s * z2 + *it;
            return s;
        }
        R m = std::round(z.imag() / (2 * pi_v<R>));
        if (m != 0) minors_detail::check_not_at(z, C(0, 2 * pi_v<R> * m));
        C w = z / R(2);
        return (w * minors_detail::coth(w) - R(1)) / (z * z);
    }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        std::vector<SingularPoint<R>> out;
        for (int m = 1; 2 * pi_v<R> * m <= radius; ++m) {
            out.push_back({C(0, 2 * pi_v<R> * m), SingularType::pole, 1});
            out.push_back({C(0, -2 * pi_v<R> * m), SingularType::pole, 1});
        }
        return out;
    }
    std::string name() const override { return "stirling"; }

private:
    std::vector<R> taylor_;
};

// 1/(1 - e^{s - zeta}), poles at s + 2 pi i k
template <class R>
class PoincareMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    explicit PoincareMinor(C s) : s_(s) {
        if (s.real() >= 0) throw ValidationError("poincare: need |w| < 1, i.e. Re s < 0");
    }
    C eval(C z) const override {
        C d = z - s_;
        R k = std::round(d.imag() / (2 * pi_v<R>));
        minors_detail::check_not_at(z, s_ + C(0, 2 * pi_v<R> * k));
        if (d.real() < R(-700)) return C(0);
        return R(1) / (R(1) - std::exp(-d));
    }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        std::vector<SingularPoint<R>> out;
        int K = static_cast<int>(radius / (2 * pi_v<R>)) + 1;
        for (int k = -K; k <= K; ++k) {
            C w = s_ + C(0, 2 * pi_v<R> * k);
            if (std::abs(w) <= radius) out.push_back({w, SingularType::pole, 1});
        }
        return out;
    }
    std::string name() const override { return "poincare"; }
    C s() const { return s_; }

private:
    C s_;
};

// zeta^{s-1} / (Gamma(s) (1 - e^{-zeta})), integer s >= 2
template <class R>
class HurwitzMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    explicit HurwitzMinor(int s) : s_(s) {
        if (s < 2) throw ValidationError("hurwitz: integer s >= 2 required");
        gamma_s_ = boost::math::tgamma(static_cast<R>(s));
        auto B = bernoulli_numbers(40);
        mpq_class f(1);
        for (int n = 0; n <= 40; ++n) {
            if (n > 0) f *= n;
            // zeta/(1 - e^{-zeta}) = sum (-1)^n B_n zeta^n / n!
            mpq_class c = B[n] / f;
            if (n % 2) c = -c;
            taylor_.push_back(static_cast<R>(hp_from_rational(c)));
        }
    }
    C eval(C z) const override {
        C q;
        if (std::abs(z) < R(1)) {
            q = 0;
            for (auto it = taylor_.rbegin(); it != taylor_.rend(); ++it) q = q * z + *it;
        } else {
            R m = std::round(z.imag() / (2 * pi_v<R>));
            minors_detail::check_not_at(z, C(0, 2 * pi_v<R> * m));
            if (z.real() < R(-700)) return C(0);
            q = z / (R(1) - std::exp(-z));
        }
        return q * std::pow(z, s_ - 2) / gamma_s_;
    }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        std::vector<SingularPoint<R>> out;
        for (int m = 1; 2 * pi_v<R> * m <= radius; ++m) {
            out.push_back({C(0, 2 * pi_v<R> * m), SingularType::pole, 1});
            out.push_back({C(0, -2 * pi_v<R> * m), SingularType::pole, 1});
        }
        return out;
    }
    R gamma(R) const override { return minors_detail::polynomial_growth_gamma<R>(); }
    std::string name() const override { return "hurwitz"; }
    int s() const { return s_; }

private:
    int s_;
    R gamma_s_;
    std::vector<R> taylor_;
};

// (1 + zeta)^{alpha - 1} on the principal branch, cut along (-inf, -1]
template <class R>
class IncGammaMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    explicit IncGammaMinor(R alpha) : alpha_(alpha) {}
    C eval(C z) const override { return eval_with_log(z, std::log(R(1) + z)); }
    C eval_with_log(C z, C L) const override {
        if (std::abs(R(1) + z) == R(0)) {
            if (alpha_ > 1) return C(0);
            throw SingularHit("incgamma minor evaluated at -1");
        }
        return std::exp((alpha_ - R(1)) * L);
    }
    bool log_branch() const override { return !is_integer(); }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        if (radius < 1 || (is_integer() && alpha_ >= 1)) return {};
        return {{C(-1), is_integer() ? SingularType::pole : SingularType::branch,
                 is_integer() ? static_cast<int>(1 - alpha_) : 1}};
    }
    R gamma(R) const override { return alpha_ > 1 ? minors_detail::polynomial_growth_gamma<R>() : R(0); }
    std::string name() const override { return "incgamma"; }
    R alpha() const { return alpha_; }

private:
    bool is_integer() const { return std::floor(alpha_) == alpha_; }
    R alpha_;
};

// 2 log(1 + zeta)/(2 + zeta): the convolution square of the Euler minor
template <class R>
class EulerSquareMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    C eval(C z) const override { return eval_with_log(z, std::log(R(1) + z)); }
    C eval_with_log(C z, C L) const override {
        if (std::abs(R(2) + z) < R(1e-12)) {
            if (std::abs(L) < R(1e-12)) return C(2) / (R(1) + z);  // removable on the principal sheet
            throw SingularHit("euler_square minor evaluated at -2");
        }
        if (std::abs(R(1) + z) < R(1e-300)) throw SingularHit("euler_square minor evaluated at -1");
        return R(2) * L / (R(2) + z);
    }
    bool log_branch() const override { return true; }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        std::vector<SingularPoint<R>> out;
        if (radius >= 1) out.push_back({C(-1), SingularType::branch, 1});
        if (radius >= 2) out.push_back({C(-2), SingularType::pole, 1});
        return out;
    }
    std::string name() const override { return "euler_square"; }
};

// sum_j r_j / (zeta - p_j)
template <class R>
class RationalMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    RationalMinor(std::vector<C> poles, std::vector<C> residues) : p_(std::move(poles)), r_(std::move(residues)) {
        if (r_.empty()) r_.assign(p_.size(), C(1));
        if (r_.size() != p_.size()) throw ValidationError("rational: poles and residues differ in length");
        for (auto& p : p_)
            if (std::abs(p) == R(0)) throw ValidationError("rational: pole at the origin");
    }
    C eval(C z) const override {
        C s = 0;
        for (std::size_t j = 0; j < p_.size(); ++j) {
            minors_detail::check_not_at(z, p_[j]);
            s += r_[j] / (z - p_[j]);
        }
        return s;
    }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        std::vector<SingularPoint<R>> out;
        for (auto& p : p_)
            if (std::abs(p) <= radius) out.push_back({p, SingularType::pole, 1});
        return out;
    }
    std::string name() const override { return "rational"; }
    const std::vector<C>& poles() const { return p_; }
    const std::vector<C>& residues() const { return r_; }

private:
    std::vector<C> p_, r_;
};

// Entire minor given by its (finite) Taylor polynomial.
template <class R>
class PolynomialMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    explicit PolynomialMinor(std::vector<C> c) : c_(std::move(c)) {}
    C eval(C z) const override {
        C s = 0;
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) s = s * z + *it;
        return s;
    }
    std::vector<SingularPoint<R>> singular_points(R) const override { return {}; }
    R gamma(R) const override { return c_.size() > 1 ? minors_detail::polynomial_growth_gamma<R>() : R(0); }
    std::string name() const override { return "polynomial"; }

private:
    std::vector<C> c_;
};

// Arbitrary callable (e.g. a numerical convolution) with declared singularities.
template <class R>
class FunctionMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    FunctionMinor(std::function<C(C)> f, std::vector<SingularPoint<R>> sing, R gamma, std::string name)
        : f_(std::move(f)), sing_(std::move(sing)), gamma_(gamma), name_(std::move(name)) {}
    C eval(C z) const override {
        for (auto& s : sing_) minors_detail::check_not_at(z, s.omega);
        return f_(z);
    }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        std::vector<SingularPoint<R>> out;
        for (auto& s : sing_)
            if (std::abs(s.omega) <= radius) out.push_back(s);
        return out;
    }
    R gamma(R) const override { return gamma_; }
    std::string name() const override { return name_; }

private:
    std::function<C(C)> f_;
    std::vector<SingularPoint<R>> sing_;
    R gamma_;
    std::string name_;
};

template <class R>
class MinorEvaluator {
public:
    using C = std::complex<R>;

    MinorEvaluator() = default;
    explicit MinorEvaluator(std::shared_ptr<const MinorImpl<R>> impl) : impl_(std::move(impl)) {}

    C eval(C zeta) const { return impl_->eval(zeta); }
    std::vector<SingularPoint<R>> singular_points(R radius) const { return impl_->singular_points(radius); }
    std::string name() const { return impl_->name(); }
    const MinorImpl<R>& impl() const { return *impl_; }

    // Singular points lying on the ray arg = theta, sorted by modulus.
    std::vector<SingularPoint<R>> on_ray(R theta, R radius) const {
        std::vector<SingularPoint<R>> out;
        C u = std::polar(R(1), -theta);
        for (auto& s : singular_points(radius)) {
            C w = s.omega * u;
            if (w.real() > 0 && std::abs(w.imag()) <= R(1e-9) * std::abs(w)) out.push_back(s);
        }
        std::sort(out.begin(), out.end(),
                  [](const auto& a, const auto& b) { return std::abs(a.omega) < std::abs(b.omega); });
        return out;
    }

    // Bound alpha e^{gamma xi} on the ray, alpha from a deterministic sample.
    Growth<R> growth(R theta, R xi_max = R(400)) const {
        Growth<R> g;
        g.gamma = impl_->gamma(theta);
        C e = std::polar(R(1), theta);
        R best = 0;
        for (int i = 0; i <= 4000; ++i) {
            R xi = xi_max * R(i) * R(i) / R(4000 * 4000);
            C v;
            try {
                v = impl_->eval(xi * e);
            } catch (const SingularHit&) {
                continue;
            }
            best = std::max(best, std::abs(v) * std::exp(-g.gamma * xi));
        }
        g.alpha = std::max(R(2) * best, R(1e-300));
        return g;
    }

    // Value of the continuation along a lateral path at abscissa xi (see LateralPath).
    C eval_lateral(const LateralPath<R>& path, R xi) const {
        return eval_on_path(path, point_on_path(path, xi));
    }

    struct PathPoint {
        C zeta;
        int segment;  // index of the last singular point passed (-1 before the first)
        bool on_detour;
    };

    PathPoint point_on_path(const LateralPath<R>& path, R xi) const {
        auto pts = on_ray(path.theta, xi + 2 * path.detour_radius);
        C e = std::polar(R(1), path.theta);
        R r = path.detour_radius;
        int seg = -1;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            R d = std::abs(pts[j].omega);
            if (xi >= d + r) {
                seg = static_cast<int>(j);
            } else if (xi > d - r) {
                R phi = pi_v<R> * (d + r - xi) / (2 * r);
                int s = path.sign(j);
                return {pts[j].omega + r * std::polar(R(1), path.theta - s * phi), static_cast<int>(j), true};
            }
        }
        return {xi * e, seg, false};
    }

    // Value at a point of the path, tracking the sheet of log(1 + zeta) when the path runs along its cut.
    C eval_on_path(const LateralPath<R>& path, const PathPoint& p) const {
        if (!impl_->log_branch()) return impl_->eval(p.zeta);
        C L = log_on_path(path, p);
        return impl_->eval_with_log(p.zeta, L);
    }

    std::vector<std::pair<C, R>> exclusion_zones() const { return impl_->exclusion_zones(); }

private:
    C log_on_path(const LateralPath<R>& path, const PathPoint& p) const {
        C principal = std::log(R(1) + p.zeta);
        // The cut (-inf,-1] is only met by paths along theta = pi.
        if (std::abs(std::remainder(path.theta - pi_v<R>, 2 * pi_v<R>)) > R(1e-12)) return principal;
        auto pts = on_ray(path.theta, std::abs(p.zeta) + 2 * path.detour_radius);
        int first_branch = -1;
        for (std::size_t j = 0; j < pts.size(); ++j)
            if (pts[j].type == SingularType::branch) {
                first_branch = static_cast<int>(j);
                break;
            }
        if (first_branch < 0) return principal;
        int last = p.on_detour ? p.segment - 1 : p.segment;
        if (last < first_branch) return principal;
        int side = path.sign(static_cast<std::size_t>(first_branch));
        int sheet = 0;
        for (int j = first_branch + 1; j <= (p.on_detour ? p.segment : last); ++j) {
            int s = path.sign(static_cast<std::size_t>(j));
            if (s != side) {
                sheet += side > 0 ? 1 : -1;
                side = s;
            }
        }
        if (p.on_detour) return principal + C(0, 2 * pi_v<R> * sheet);
        return C(std::log(std::abs(R(1) + p.zeta)), side * pi_v<R> + 2 * pi_v<R> * sheet);
    }

    std::shared_ptr<const MinorImpl<R>> impl_;
};

template <class R, class Impl, class... Args>
MinorEvaluator<R> make_minor(Args&&... args) {
    return MinorEvaluator<R>(std::make_shared<const Impl>(std::forward<Args>(args)...));
}

// Parameter list "key=value, key=value" of a catalog id such as "poincare(w=1/2)".
struct ClosedFormId {
    std::string kind;
    std::map<std::string, std::string> params;
};

inline ClosedFormId parse_closed_form_id(const std::string& id) {
    static const std::regex re(R"(^\s*([a-z_]+)\s*(?:\((.*)\))?\s*$)");
    std::smatch m;
    if (!std::regex_match(id, m, re)) throw ValidationError("bad minor id: " + id);
    ClosedFormId out{m[1].str(), {}};
    std::string args = m[2].str();
    std::stringstream ss(args);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            if (item.find_first_not_of(" \t") == std::string::npos) continue;
            throw ValidationError("bad parameter in minor id: " + item);
        }
        auto trim = [](std::string s) {
            s.erase(0, s.find_first_not_of(" \t"));
            s.erase(s.find_last_not_of(" \t") + 1);
            return s;
        };
        out.params[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    return out;
}

// Accepts decimals, "p/q", and complex numbers written "a+bi" / "a-bi" / "bi".
template <class R>
std::complex<R> parse_complex(const std::string& text) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    if (s.empty()) throw ValidationError("empty number");
    auto real_of = [](const std::string& t) -> R {
        if (t.empty() || t == "+") return R(1);
        if (t == "-") return R(-1);
        auto slash = t.find('/');
        try {
            if (slash != std::string::npos) return std::stold(t.substr(0, slash)) / std::stold(t.substr(slash + 1));
            return std::stold(t);
        } catch (const std::exception&) {
            throw ValidationError("bad number: " + t);
        }
    };
    if (s.back() != 'i') return {real_of(s), R(0)};
    std::string body = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = body.size(); k-- > 1;)
        if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos) return {R(0), real_of(body)};
    return {real_of(body.substr(0, split)), real_of(body.substr(split))};
}

// Catalog ids: euler, stirling, poincare(s=..|w=..), hurwitz(s=..), incgamma(alpha=..),
// rational(poles=a;b, residues=c;d), euler_square.
template <class R>
MinorEvaluator<R> closed_form_minor(const std::string& id) {
    using C = std::complex<R>;
    auto p = parse_closed_form_id(id);
    auto get = [&](const std::string& k) -> std::optional<std::string> {
        auto it = p.params.find(k);
        if (it == p.params.end()) return std::nullopt;
        return it->second;
    };
    auto list = [](const std::string& s) {
        std::vector<C> v;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ';')) v.push_back(parse_complex<R>(item));
        return v;
    };
    if (p.kind == "euler") return make_minor<R, EulerMinor<R>>();
    if (p.kind == "stirling") return make_minor<R, StirlingMinor<R>>();
    if (p.kind == "euler_square") return make_minor<R, EulerSquareMinor<R>>();
    if (p.kind == "poincare") {
        if (auto s = get("s")) return make_minor<R, PoincareMinor<R>>(parse_complex<R>(*s));
        if (auto w = get("w")) {
            C wv = parse_complex<R>(*w);
            if (std::abs(wv) >= 1 || std::abs(wv) == 0) throw ValidationError("poincare: need 0 < |w| < 1");
            return make_minor<R, PoincareMinor<R>>(std::log(wv));
        }
        throw ValidationError("poincare: parameter s or w required");
    }
    if (p.kind == "hurwitz") {
        auto s = get("s");
        if (!s) throw ValidationError("hurwitz: parameter s required");
        R sv = parse_complex<R>(*s).real();
        if (sv != std::floor(sv)) throw ValidationError("hurwitz: integer s required");
        return make_minor<R, HurwitzMinor<R>>(static_cast<int>(sv));
    }
    if (p.kind == "incgamma") {
        auto a = get("alpha");
        if (!a) throw ValidationError("incgamma: parameter alpha required");
        return make_minor<R, IncGammaMinor<R>>(parse_complex<R>(*a).real());
    }
    if (p.kind == "rational") {
        auto poles = get("poles");
        if (!poles) throw ValidationError("rational: parameter poles required");
        auto res = get("residues");
        return make_minor<R, RationalMinor<R>>(list(*poles), res ? list(*res) : std::vector<C>{});
    }
    throw ValidationError("unknown minor kind: " + p.kind);
}

}  // namespace resurgence
