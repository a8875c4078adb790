// Borel sums of the Euler series along the positive axis, against the continued-fraction value,
// and the lateral jump across the negative axis.
#include <cstdio>

#include "resurgence/classics.hpp"
#include "resurgence/laplace.hpp"

int main() {
    using namespace resurgence;
    using C = std::complex<double>;
    auto ex = build<mpq_class>("euler", 12);
    std::printf("%-8s %-22s %-22s %s\n", "z", "Borel sum", "e^z E1(z)", "est_error");
    for (double x : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        auto s = laplace_ray(ex.minor, C(0), 0.0, C(x));
        std::printf("%-8g %-22.16g %-22.16g %.2e\n", x, s.value.real(), euler_reference(C(x)).real(), s.est_error);
    }
    for (C z : {C(-3), C(-2, 0.5)}) {
        auto [p, m] = lateral_pair(ex.minor, C(0), M_PI, M_PI / 4, z);
        C d = p.value - m.value, f = jump_formula("euler", z);
        std::printf("jump at (%g, %g): (%.12g, %.12g)  2 pi i e^z: (%.12g, %.12g)\n", z.real(), z.imag(), d.real(),
                    d.imag(), f.real(), f.imag());
    }
}
