#pragma once

#include <vector>

#include "formal.hpp"

namespace resurgence {

// Taylor coefficients of zeta/(e^zeta - 1) = sum B_n zeta^n / n!, returned as B_0..B_n_max.
inline std::vector<mpq_class> bernoulli_numbers(int n_max) {
    TaylorGerm<mpq_class> num(static_cast<std::size_t>(n_max + 1)), den(static_cast<std::size_t>(n_max + 1));
    num[0] = 1;
    mpq_class fact(1);
    for (int k = 0; k <= n_max; ++k) {
        fact *= k + 1;
        den[k] = 1 / fact;  // (e^zeta - 1)/zeta
    }
    auto q = taylor_div(num, den);
    std::vector<mpq_class> B(static_cast<std::size_t>(n_max + 1));
    mpq_class f(1);
    for (int n = 0; n <= n_max; ++n) {
        if (n > 0) f *= n;
        B[n] = q[n] * f;
    }
    return B;
}

}  // namespace resurgence
