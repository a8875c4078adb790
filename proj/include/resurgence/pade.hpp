#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <boost/multiprecision/eigen.hpp>

#include "formal.hpp"
#include "minors.hpp"

namespace resurgence {

struct PadeWarning {
    std::complex<double> pole;
    double distance;  // to the nearest known singular point or cut
};

// [L/M] Pade approximant of a Taylor germ, built and evaluated in 50-digit arithmetic.
template <class R>
class PadeMinor : public MinorImpl<R> {
public:
    using C = std::complex<R>;
    using HC = hp_complex;

    template <class T>
    PadeMinor(const TaylorGerm<T>& taylor, int L, int M, std::vector<SingularPoint<R>> known = {})
        : known_(std::move(known)) {
        if (L < 0 || M < 0) throw ValidationError("pade: negative degree");
        if (static_cast<int>(taylor.size()) < L + M + 1) throw ValidationError("pade: need L+M+1 Taylor coefficients");
        std::vector<HC> c(taylor.size());
        for (std::size_t i = 0; i < taylor.size(); ++i) c[i] = to_hp(taylor[i]);
        // rank threshold follows the precision of the input coefficients
        hp_real thr = is_exact_v<T> || is_hp_v<T> ? hp_real("1e-30") : hp_real("1e-12");
        build(c, L, M, thr);
        locate_poles();
    }

    C eval(C z) const override {
        HC zz(hp_real(z.real()), hp_real(z.imag()));
        HC p = 0, q = 0;
        for (auto it = p_.rbegin(); it != p_.rend(); ++it) p = p * zz + *it;
        for (auto it = q_.rbegin(); it != q_.rend(); ++it) q = q * zz + *it;
        if (abs(q) == 0) throw SingularHit("pade: evaluation at a pole");
        HC v = p / q;
        return {static_cast<R>(v.real()), static_cast<R>(v.imag())};
    }
    std::vector<SingularPoint<R>> singular_points(R radius) const override {
        std::vector<SingularPoint<R>> out;
        for (auto& s : known_)
            if (std::abs(s.omega) <= radius) out.push_back(s);
        return out;
    }
    std::vector<std::pair<C, R>> exclusion_zones() const override {
        std::vector<std::pair<C, R>> z;
        for (auto& w : warnings_) z.push_back({C(w.pole.real(), w.pole.imag()), R(0.1)});
        return z;
    }
    std::string name() const override { return "pade"; }

    int numerator_degree() const { return static_cast<int>(p_.size()) - 1; }
    int denominator_degree() const { return static_cast<int>(q_.size()) - 1; }
    double residual() const { return residual_; }
    const std::vector<std::complex<double>>& poles() const { return poles_; }
    const std::vector<PadeWarning>& warnings() const { return warnings_; }

private:
    template <class T>
    static HC to_hp(const T& a) {
        if constexpr (is_exact_v<T>) {
            return from_rational<HC>(a);
        } else if constexpr (std::is_same_v<T, HC>) {
            return a;
        } else {
            return HC(hp_real(a.real()), hp_real(a.imag()));
        }
    }

    void build(const std::vector<HC>& c, int L, int M, const hp_real& thr) {
        using Mat = Eigen::Matrix<HC, Eigen::Dynamic, Eigen::Dynamic>;
        using Vec = Eigen::Matrix<HC, Eigen::Dynamic, 1>;
        auto at = [&](int k) { return k < 0 ? HC(0) : c[static_cast<std::size_t>(k)]; };
        std::vector<HC> q{HC(1)};
        while (M > 0) {
            Mat A(M, M);
            Vec b(M);
            for (int i = 0; i < M; ++i) {
                for (int j = 0; j < M; ++j) A(i, j) = at(L + 1 + i - (j + 1));
                b(i) = -at(L + 1 + i);
            }
            Eigen::ColPivHouseholderQR<Mat> qr(A);
            qr.setThreshold(thr);
            int rank = static_cast<int>(qr.rank());
            if (rank < M) {
                // Degenerate block of the Pade table: drop the deficiency from both degrees.
                int d = M - rank;
                M -= d;
                L = std::max(L - d, 0);
                continue;
            }
            Vec x = qr.solve(b);
            hp_real rn = (A * x - b).norm(), bn = b.norm();
            residual_ = bn > 0 ? static_cast<double>(rn / bn) : static_cast<double>(rn);
            if (residual_ > 1e-8) throw NumericError("pade: Toeplitz system residual too large", residual_);
            q.resize(static_cast<std::size_t>(M + 1));
            for (int j = 0; j < M; ++j) q[j + 1] = x(j);
            break;
        }
        p_.assign(static_cast<std::size_t>(L + 1), HC(0));
        for (int k = 0; k <= L; ++k)
            for (int j = 0; j <= std::min<int>(k, static_cast<int>(q.size()) - 1); ++j) p_[k] += q[j] * at(k - j);
        hp_real qmax = 0;
        for (auto& x : q) qmax = std::max(qmax, hp_real(abs(x)));
        while (q.size() > 1 && abs(q.back()) <= qmax * thr) q.pop_back();
        hp_real pmax = 0;
        for (auto& x : p_) pmax = std::max(pmax, hp_real(abs(x)));
        while (p_.size() > 1 && abs(p_.back()) <= pmax * thr) p_.pop_back();
        q_ = q;
    }

    void locate_poles() {
        std::size_t m = q_.size() - 1;
        hp_real qmax = 0;
        for (auto& x : q_) qmax = std::max(qmax, hp_real(abs(x)));
        while (m > 0 && abs(q_[m]) <= qmax * hp_real("1e-40")) --m;
        if (m == 0) return;
        Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<long>(m), static_cast<long>(m));
        HC lead = q_[m];
        for (std::size_t i = 0; i < m; ++i) {
            HC v = -q_[i] / lead;
            comp(static_cast<long>(i), static_cast<long>(m - 1)) = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
            if (i > 0) comp(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
        for (long i = 0; i < es.eigenvalues().size(); ++i) {
            std::complex<double> r = es.eigenvalues()(i);
            poles_.push_back(r);
            double d = distance_to_known(r);
            if (d > 0.1 * std::abs(r)) warnings_.push_back({r, d});
        }
    }

    // Branch points own the cut running from them away from the origin.
    double distance_to_known(std::complex<double> r) const {
        double best = std::numeric_limits<double>::infinity();
        for (auto& s : known_) {
            std::complex<double> w(static_cast<double>(s.omega.real()), static_cast<double>(s.omega.imag()));
            double d = std::abs(r - w);
            if (s.type == SingularType::branch) {
                std::complex<double> u = w / std::abs(w);
                double t = std::real((r - w) * std::conj(u));
                if (t > 0) d = std::abs(std::imag((r - w) * std::conj(u)));
            }
            best = std::min(best, d);
        }
        return best;
    }

    std::vector<HC> p_, q_;
    std::vector<SingularPoint<R>> known_;
    std::vector<std::complex<double>> poles_;
    std::vector<PadeWarning> warnings_;
    double residual_ = 0;
};

}  // namespace resurgence
