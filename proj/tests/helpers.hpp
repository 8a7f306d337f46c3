#pragma once

#include <random>

#include "gph/types.hpp"

namespace testutil {

inline gph::CMat random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    gph::CMat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gph::cplx(nd(rng), nd(rng));
    return 0.5 * (a + a.adjoint());
}

inline gph::CVec random_state(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    gph::CVec v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = gph::cplx(nd(rng), nd(rng));
    return v.normalized();
}

inline gph::CMat random_density(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> nd;
    gph::CMat a(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) a(i, j) = gph::cplx(nd(rng), nd(rng));
    gph::CMat r = a * a.adjoint();
    return r / r.trace().real();
}

inline double random_phase(std::mt19937_64& rng) {
    return std::uniform_real_distribution<double>(-gph::pi, gph::pi)(rng);
}

inline double angle_diff(double a, double b) { return std::abs(gph::wrap_phase(a - b)); }

}  // namespace testutil
