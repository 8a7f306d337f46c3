#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gph/dielectric_motion.hpp"

namespace gph {

double friction_force(double lambda2g2, double omega, double Omega_mat, double d, double v, double rtol) {
    if (!(omega > 0.0) || !(Omega_mat > 0.0)) throw DomainError("frequencies must be positive");
    if (!(d > 0.0)) throw DomainError("distance must be positive");
    if (!(v > 0.0) || v >= 1.0) throw DomainError("velocity must lie in (0, 1)");
    if (lambda2g2 == 0.0) return 0.0;

    // Radicand v^2(Omega^2 - k^2) - (omega + Omega)^2 = -r(k); r is smallest at k = 0.
    const double a = (omega + Omega_mat) * (omega + Omega_mat);
    const double r0 = a - v * v * Omega_mat * Omega_mat;
    if (r0 <= 1e-12 * a)
        throw BranchError("radicand changes sign on the k-line (v Omega >= omega + Omega); the decaying branch is undefined");

    const double rate = 2.0 * d / v;
    const double sq0 = std::sqrt(r0);
    // exp(-rate sqrt(r)) / r with the k = 0 exponential factored out
    auto f = [&](double k) {
        const double r = r0 + v * v * k * k;
        const double sq = std::sqrt(r);
        return std::exp(-rate * (r - r0) / (sq + sq0)) / r;
    };
    double err = 0.0;
    const double inf = std::numeric_limits<double>::infinity();
    const double half = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, inf, 20, rtol * 0.01, &err);
    if (!std::isfinite(half) || err > rtol * std::abs(half))
        throw QuadratureFailure("friction integral error estimate " + std::to_string(err) + " above tolerance");

    // int dk/2pi over the full line of exp(...)/(-r)
    const double integral = -2.0 * half / (2.0 * pi) * std::exp(-rate * sq0);
    return std::abs(lambda2g2 / 16.0 * (omega + Omega_mat) / (omega * Omega_mat) * integral);
}

}  // namespace gph
