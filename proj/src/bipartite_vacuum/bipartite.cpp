#include <cmath>
#include <algorithm>
#include <array>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gph/bipartite_vacuum.hpp"

namespace gph {

namespace {

CMat qubit_op(const Mat2c& op, int which) {
    return which == 0 ? kron(op, Mat2c::Identity()) : kron(Mat2c::Identity(), op);
}

// (1 - exp(-2 a t)) / a, finite as a -> 0
double relax(double a, double t) {
    if (std::abs(a * t) < 1e-8) return 2.0 * t;
    return -std::expm1(-2.0 * a * t) / a;
}

}  // namespace

CMat bipartite_hamiltonian(const BipartiteEnvSpec& env, const BipartiteCoeffs& k) {
    CMat H = 0.5 * env.omega * (qubit_op(sigma_z(), 0) + qubit_op(sigma_z(), 1));
    for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m) H += k.c(l, m) * qubit_op(sigma_plus(), l) * qubit_op(sigma_minus(), m);
    return H;
}

CMat bipartite_rhs(const BipartiteEnvSpec& env, const BipartiteCoeffs& k, const CMat& rho) {
    const CMat H = bipartite_hamiltonian(env, k);
    CMat out = -I * (H * rho - rho * H);
    const CMat sp[2] = {qubit_op(sigma_plus(), 0), qubit_op(sigma_plus(), 1)};
    const CMat sm[2] = {qubit_op(sigma_minus(), 0), qubit_op(sigma_minus(), 1)};
    for (int l = 0; l < 2; ++l)
        for (int m = 0; m < 2; ++m)
            out -= k.a(l, m) * (sp[l] * sm[m] * rho + rho * sp[m] * sm[l] - sm[m] * rho * sp[l] - sm[l] * rho * sp[m]);
    return out;
}

CVec bipartite_initial_state(double theta) {
    CVec v = CVec::Zero(4);
    v(0) = std::cos(0.5 * theta);
    v(3) = std::sin(0.5 * theta);
    return v;
}

CMat bipartite_state(const BipartiteEnvSpec& env, const BipartiteCoeffs& k, double theta, double t) {
    const double a11 = k.a(0, 0), a12 = k.a(0, 1);
    const double ap = a11 + a12, am = a11 - a12;
    const double c2 = std::pow(std::cos(0.5 * theta), 2);
    const double e4 = std::exp(-4.0 * a11 * t);
    // Symmetric and antisymmetric single-excitation populations.
    const double rss = c2 * ap * std::exp(-2.0 * ap * t) * relax(am, t);
    const double raa = c2 * am * std::exp(-2.0 * am * t) * relax(ap, t);

    CMat r = CMat::Zero(4, 4);
    r(0, 0) = c2 * e4;
    r(1, 1) = r(2, 2) = 0.5 * (rss + raa);
    r(1, 2) = r(2, 1) = 0.5 * (rss - raa);
    r(3, 3) = 1.0 - r(0, 0) - r(1, 1) - r(2, 2);
    r(3, 0) = 0.5 * std::sin(theta) * std::exp(-2.0 * a11 * t) * std::exp(I * (2.0 * (k.c(0, 0) + env.omega) * t));
    r(0, 3) = std::conj(r(3, 0));
    return r;
}

std::vector<CMat> evolve_bipartite(const BipartiteEnvSpec& env, double theta, const std::vector<double>& times) {
    const auto k = compute_coeffs(env);
    std::vector<CMat> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(bipartite_state(env, k, theta, t));
    return out;
}

double concurrence(const CMat& rho, bool x_state) {
    if (rho.rows() != 4 || rho.cols() != 4) throw InvalidState("concurrence needs a two-qubit density matrix");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-9 || std::abs(rho.trace() - 1.0) > 1e-8)
        throw InvalidState("concurrence input is not a density matrix");
    std::array<double, 4> roots{};
    if (x_state) {
        const double p14 = std::sqrt(std::max(0.0, rho(0, 0).real() * rho(3, 3).real()));
        const double p23 = std::sqrt(std::max(0.0, rho(1, 1).real() * rho(2, 2).real()));
        const double c41 = std::abs(rho(3, 0)), c23 = std::abs(rho(1, 2));
        roots = {std::abs(p14 + c41), std::abs(p14 - c41), std::abs(p23 + c23), std::abs(p23 - c23)};
    } else {
        const CMat yy = kron(sigma_y(), sigma_y());
        const CMat R = rho * yy * rho.conjugate() * yy;
        Eigen::ComplexEigenSolver<CMat> es(R, false);
        for (int i = 0; i < 4; ++i) roots[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i).real()));
    }
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return std::max(0.0, roots[0] - roots[1] - roots[2] - roots[3]);
}

std::vector<double> concurrence_transitions(const BipartiteEnvSpec& env, double theta, double t_max,
                                            std::size_t n_grid, double tol) {
    const auto k = compute_coeffs(env);
    auto C = [&](double t) { return concurrence(bipartite_state(env, k, theta, t), true); };
    auto positive = [&](double t) { return C(t) > 1e-14; };
    std::vector<double> out;
    const auto grid = linspace(0.0, t_max, n_grid + 1);
    bool prev = positive(grid[0]);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const bool cur = positive(grid[i]);
        if (cur == prev) continue;
        double lo = grid[i - 1], hi = grid[i];
        while (hi - lo > tol * std::max(1.0, env.omega)) {
            const double mid = 0.5 * (lo + hi);
            (positive(mid) == prev ? lo : hi) = mid;
        }
        out.push_back(0.5 * (lo + hi));
        prev = cur;
    }
    return out;
}

double coherence_decay_time(const BipartiteEnvSpec& env, double theta) {
    const auto k = compute_coeffs(env);
    const double c0 = std::abs(bipartite_state(env, k, theta, 0.0)(3, 0));
    const double target = std::exp(-2.0) * c0;
    auto below = [&](double t) { return std::abs(bipartite_state(env, k, theta, t)(3, 0)) < target; };
    if (k.a(0, 0) <= 0.0) return std::numeric_limits<double>::infinity();
    double hi = 1.0 / env.gamma0;
    while (!below(hi)) {
        hi *= 2.0;
        if (hi > 1e12 / env.gamma0) return std::numeric_limits<double>::infinity();
    }
    double lo = 0.0;
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

double bipartite_unitary_gp(double omega, double theta, double t) {
    const double c2 = std::pow(std::cos(0.5 * theta), 2), s2 = 1.0 - c2;
    const cplx ov = c2 + s2 * std::exp(I * (2.0 * omega * t));
    if (std::abs(ov) <= kOverlapTol) throw OrthogonalEndpoints("unitary two-qubit state orthogonal to the initial state");
    return wrap_phase(std::arg(ov) - 2.0 * omega * s2 * t);
}

BipartitePhase open_gp_bipartite(const BipartiteEnvSpec& env, double theta, double t) {
    const auto k = compute_coeffs(env);
    auto upper = [&](double s) {
        const CMat r = bipartite_state(env, k, theta, s);
        const double r11 = r(0, 0).real(), r44 = r(3, 3).real();
        const cplx r41 = r(3, 0);
        const double eps = 0.5 * (r11 + r44 + std::sqrt((r11 - r44) * (r11 - r44) + 4.0 * std::norm(r41)));
        return std::make_tuple(eps, r44, r41);
    };
    auto vec = [&](double s) {
        auto [eps, r44, r41] = upper(s);
        Vec2c v(eps - r44, r41);
        return Vec2c(v / v.norm());
    };
    auto integrand = [&](double s) {
        auto [eps, r44, r41] = upper(s);
        const double n2 = (r44 - eps) * (r44 - eps) + std::norm(r41);
        return n2 > 0.0 ? 2.0 * (env.omega + k.c(0, 0)) * std::norm(r41) / n2 : 0.0;
    };
    const cplx ends = vec(0.0).dot(vec(t));
    if (std::abs(ends) <= kOverlapTol) throw OrthogonalEndpoints("open two-qubit branch returns orthogonal");

    // Split into half periods so each panel sees a smooth integrand.
    const double panel = pi / env.omega;
    double dyn = 0.0;
    for (double a = 0.0; a < t; a += panel) {
        const double b = std::min(t, a + panel);
        dyn += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, a, b, 15, 1e-13);
    }
    BipartitePhase out;
    out.phi_g = wrap_phase(std::arg(ends) - dyn);
    out.phi_u = bipartite_unitary_gp(env.omega, theta, t);
    out.delta_phi = wrap_phase(out.phi_g - out.phi_u);
    return out;
}

GpExpansion gp_expansion_bipartite(const BipartiteEnvSpec& env, double theta) {
    const auto k = compute_coeffs(env);
    const double a11 = k.a(0, 0), a12 = k.a(0, 1);
    const double s2 = std::pow(std::sin(theta), 2), ct = std::cos(theta);
    GpExpansion e;
    e.order1 = -4.0 * pi * pi * s2 * a11 / env.omega;
    e.order2 = -(16.0 * pi * pi * pi / 3.0) * s2 * ((a11 * a11 + a12 * a12) * (1.0 + ct) + 2.0 * a11 * a11 * ct) /
               (env.omega * env.omega);
    return e;
}

}  // namespace gph
