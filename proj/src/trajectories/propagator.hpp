#pragma once

#include "gph/trajectories.hpp"

namespace gph::detail {

// exp(M) for a 2x2 complex matrix through M = a I + B with B^2 = s^2 I.
inline Mat2c expm2(const Mat2c& M) {
    const cplx a = 0.5 * M.trace();
    Mat2c B = M;
    B(0, 0) -= a;
    B(1, 1) -= a;
    const cplx s2 = B(0, 0) * B(0, 0) + B(0, 1) * B(1, 0);
    const cplx s = std::sqrt(s2);
    cplx ch, sh_over_s;
    if (std::abs(s) < 1e-4) {
        ch = 1.0 + s2 / 2.0 + s2 * s2 / 24.0;
        sh_over_s = 1.0 + s2 / 6.0 + s2 * s2 / 120.0;
    } else {
        ch = std::cosh(s);
        sh_over_s = std::sinh(s) / s;
    }
    Mat2c out = sh_over_s * B;
    out(0, 0) += ch;
    out(1, 1) += ch;
    return std::exp(a) * out;
}

// Unnormalized smooth step over [t, t + dt].
inline Vec2c smooth_propagate(const Vec2c& state, double t, double dt, const RotatingFieldParams& p,
                              const JumpChannelSet& ch) {
    return expm2(-I * dt * effective_hamiltonian(p, ch, t + 0.5 * dt)) * state;
}

}  // namespace gph::detail
