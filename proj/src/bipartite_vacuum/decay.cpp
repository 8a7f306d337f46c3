#include <cmath>
#include <limits>

#include "gph/bipartite_vacuum.hpp"

namespace gph {

namespace {

// Longitudinal partner of A_n with the same phase-shift convention as A_n.
double longitudinal(int n, double x) {
    const double a = x - n * pi / 2;
    return (x * std::cos(a) - std::sin(a)) / (x * x * x);
}

}  // namespace

double decay_function(DecayKind kind, int n, double x, double Lt, double dt) {
    if (!(x > 0.0)) throw DomainError("decay functions need x > 0");
    if (n != 0 && n != 1) throw DomainError("decay function order must be 0 or 1");
    const double x2 = x * x, x3 = x2 * x, x5 = x3 * x2;
    const double m = x - n * pi / 2, p = x + n * pi / 2;
    switch (kind) {
        case DecayKind::A:
            if (n == 0 && x < 1e-2) return 2.0 / 3.0 - 2.0 * x2 / 15.0 + x2 * x2 / 140.0;
            return (x * std::cos(m) + (x2 - 1.0) * std::sin(m)) / x3;
        case DecayKind::B:
            if (n == 0 && x < 1e-2) return -1.0 / 3.0 + x2 / 30.0;
            return (x * std::cos(p) - std::sin(p)) / x3;
        case DecayKind::C:
            return (-(2.0 * Lt * Lt + dt * dt) * x * std::cos(m) + (2.0 * Lt * Lt + dt * dt * (x2 - 1.0)) * std::sin(m)) / x5;
        case DecayKind::D:
            return (-(2.0 * dt * dt - Lt * Lt) * x * std::cos(p) + (2.0 * dt * dt + Lt * Lt * (x2 - 1.0)) * std::sin(p)) / x5;
    }
    return 0.0;
}

double image_zz(int n, double Lt, double dt) {
    const double s2 = Lt * Lt + dt * dt, s = std::sqrt(s2);
    return (decay_function(DecayKind::A, n, s) * dt * dt - 2.0 * longitudinal(n, s) * Lt * Lt) / s2;
}

double image_yy(int n, double Lt, double dt) {
    const double s2 = Lt * Lt + dt * dt, s = std::sqrt(s2);
    return (decay_function(DecayKind::A, n, s) * Lt * Lt - 2.0 * longitudinal(n, s) * dt * dt) / s2;
}

double BipartiteEnvSpec::s_tilde() const {
    if (!d_tilde) return std::numeric_limits<double>::infinity();
    return std::hypot(*d_tilde, L_tilde);
}

BipartiteCoeffs compute_coeffs(const BipartiteEnvSpec& env) {
    for (const auto* r : {&env.pol1, &env.pol2})
        if (std::abs(r->norm() - 1.0) > 1e-9) throw InvalidPolarization("polarization vectors must be unit");
    BipartiteCoeffs k;
    if (env.L_tilde < 1.0) k.warnings.push_back("L*omega < 1: Markov approximation questionable");
    if (env.d_tilde && *env.d_tilde < 1.0) k.warnings.push_back("2*d*omega < 1: Markov approximation questionable");

    const double Lt = env.L_tilde;
    const double A0L = decay_function(DecayKind::A, 0, Lt), B0L = decay_function(DecayKind::B, 0, Lt);
    const double A1L = decay_function(DecayKind::A, 1, Lt), B1L = longitudinal(1, Lt);

    // Components (x, y, z) of the free and image kernels; distance-dependent
    // parts carry 1/2 so that the self term of the free kernel is 1/3.
    Eigen::Vector3d f1(0.5 * A0L, 0.5 * A0L, -B0L);
    Eigen::Vector3d h1(0.5 * A1L, 0.5 * A1L, -B1L);
    Eigen::Vector3d f2 = Eigen::Vector3d::Zero(), h2 = Eigen::Vector3d::Zero(), f2_self = Eigen::Vector3d::Zero();
    if (env.d_tilde) {
        const double dt = *env.d_tilde, s = env.s_tilde();
        f2 << 0.5 * decay_function(DecayKind::A, 0, s), -0.5 * image_yy(0, Lt, dt), 0.5 * image_zz(0, Lt, dt);
        h2 << 0.5 * decay_function(DecayKind::A, 1, s), -0.5 * image_yy(1, Lt, dt), 0.5 * image_zz(1, Lt, dt);
        const double A0d = decay_function(DecayKind::A, 0, dt), B0d = decay_function(DecayKind::B, 0, dt);
        f2_self << 0.5 * A0d, B0d, 0.5 * A0d;
    }

    const Eigen::Vector3d* pol[2] = {&env.pol1, &env.pol2};
    for (int l = 0; l < 2; ++l) {
        const Eigen::Vector3d r2 = pol[l]->cwiseAbs2();
        k.a(l, l) = env.gamma0 * (1.0 / 3.0 - r2.dot(f2_self));
        double shift = 0.0;
        if (env.d_tilde && env.h2_self) shift = env.h2_self(*pol[l], *env.d_tilde);
        k.c(l, l) = -env.gamma0 * shift;
    }
    const Eigen::Vector3d rr = env.pol1.cwiseProduct(env.pol2);
    k.a(0, 1) = k.a(1, 0) = env.gamma0 * rr.dot(f1 - f2);
    k.c(0, 1) = k.c(1, 0) = env.gamma0 * rr.dot(h1 - h2);
    return k;
}

}  // namespace gph
