#include <cmath>

#include "gph/spin_rotating.hpp"

namespace gph {

namespace {

double azimuth(const RotatingFieldParams& p, double t) { return p.phase0 + p.signed_Omega() * t; }

Mat2c frame_rotation(double a) {
    Mat2c r = Mat2c::Zero();
    r(0, 0) = std::exp(-I * (0.5 * a));
    r(1, 1) = std::exp(I * (0.5 * a));
    return r;
}

// Detuning of the upper level seen in the co-rotating frame.
double nu(const RotatingFieldParams& p) { return p.omega - p.signed_Omega() * std::cos(p.theta); }

}  // namespace

double RotatingFieldParams::omega_tilde() const {
    const double a = omega * std::cos(theta) - signed_Omega();
    const double b = omega * std::sin(theta);
    return std::hypot(a, b);
}

Mat2c spin_hamiltonian(const RotatingFieldParams& p, double t) {
    const double a = azimuth(p, t);
    const double st = std::sin(p.theta);
    return 0.5 * p.omega *
           (st * std::cos(a) * sigma_x() + st * std::sin(a) * sigma_y() + std::cos(p.theta) * sigma_z());
}

SpinEigenstates instantaneous_eigenstates(const RotatingFieldParams& p, double t) {
    const double c = std::cos(0.5 * p.theta), s = std::sin(0.5 * p.theta);
    const cplx e = std::exp(I * azimuth(p, t));
    SpinEigenstates out;
    out.plus << c, s * e;
    out.minus << s, -c * e;
    out.E_plus = 0.5 * p.omega;
    out.E_minus = -0.5 * p.omega;
    return out;
}

double berry_phase(double theta, Branch b) {
    return b == Branch::Plus ? -pi * (1.0 - std::cos(theta)) : -pi * (1.0 + std::cos(theta));
}

Vec2c propagate_exact(const RotatingFieldParams& p, const Vec2c& psi0, double t) {
    // Static Hamiltonian of the co-rotating frame, h . sigma with |h| = omega_tilde / 2.
    const double hx = 0.5 * p.omega * std::sin(p.theta);
    const double hz = 0.5 * (p.omega * std::cos(p.theta) - p.signed_Omega());
    const double h = std::hypot(hx, hz);
    Mat2c U = std::cos(h * t) * Mat2c::Identity();
    if (h > 0.0) U -= I * (std::sin(h * t) / h) * (hx * sigma_x() + hz * sigma_z());
    return frame_rotation(azimuth(p, t)) * (U * (frame_rotation(p.phase0).adjoint() * psi0));
}

Vec2c psi_plus_closed_form(const RotatingFieldParams& p, double t) {
    const double wt = p.omega_tilde();
    const double half = 0.5 * wt * t;
    const cplx f = -I * std::sin(half) * nu(p) / wt;
    const cplx g = -I * std::sin(half) * p.signed_Omega() * std::sin(p.theta) / wt;
    const auto es = instantaneous_eigenstates(p, t);
    return std::exp(-I * (0.5 * (azimuth(p, t) - p.phase0))) * ((std::cos(half) + f) * es.plus - g * es.minus);
}

double total_phase_closed(const RotatingFieldParams& p) {
    const double wt = p.omega_tilde();
    const double x = pi * wt / p.Omega;
    const cplx chi = std::cos(x) - I * std::sin(x) * nu(p) / wt;
    if (std::abs(chi) <= kOverlapTol) throw OrthogonalEndpoints("spin returns orthogonal after one period");
    return wrap_phase(-pi + std::arg(chi));
}

double dynamical_phase_closed(const RotatingFieldParams& p) {
    const double wt = p.omega_tilde();
    const double x = 2.0 * pi * wt / p.Omega;
    const double sinc = std::sin(x) / x;
    const double st = std::sin(p.theta);
    return -pi * p.omega / p.Omega + pi * (p.omega * p.Omega / (wt * wt)) * st * st * (1.0 - sinc);
}

double kinematic_gp_closed(const RotatingFieldParams& p) {
    return wrap_phase(total_phase_closed(p) - dynamical_phase_closed(p));
}

double kinematic_gp_numeric(const RotatingFieldParams& p, std::size_t n_samples) {
    const Vec2c psi0 = instantaneous_eigenstates(p, 0.0).plus;
    StatePath path;
    path.times = linspace(0.0, p.period(), n_samples);
    for (double t : path.times) path.states.emplace_back(propagate_exact(p, psi0, t));
    return kinematic_gp(path);
}

double echo_persistence_unitary(double theta, bool adiabatic, double Omega_over_omega) {
    if (adiabatic) {
        const double c = std::cos(2.0 * berry_phase(theta, Branch::Plus));
        return c * c;
    }
    RotatingFieldParams fwd{1.0, Omega_over_omega, theta, +1, 0.0};
    const auto e0 = instantaneous_eigenstates(fwd, 0.0);
    const Vec2c psi0 = (e0.plus + e0.minus) / std::sqrt(2.0);
    const double T = fwd.period();

    const Vec2c a = propagate_exact(fwd, psi0, T);
    const auto eT = instantaneous_eigenstates(fwd, T);
    const Vec2c flipped = eT.plus.dot(a) * eT.minus + eT.minus.dot(a) * eT.plus;

    RotatingFieldParams back = fwd;
    back.direction = -1;
    back.phase0 = std::remainder(fwd.signed_Omega() * T, 2.0 * pi);
    const Vec2c b = propagate_exact(back, flipped, T);
    return std::norm(psi0.dot(b));
}

}  // namespace gph
