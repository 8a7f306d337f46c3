#pragma once

#include "gph/phasefun.hpp"

namespace gph {

// Spin-1/2 in a field of magnitude omega tilted by theta from z and rotating
// about z with angular velocity direction * Omega. The azimuth of the field is
// phase0 + direction * Omega * t.
struct RotatingFieldParams {
    double omega = 1.0;
    double Omega = 0.0;
    double theta = 0.0;
    int direction = +1;
    double phase0 = 0.0;

    double signed_Omega() const { return direction * Omega; }
    double omega_tilde() const;
    double period() const { return 2.0 * pi / Omega; }
};


struct SpinEigenstates {
    Vec2c plus, minus;
    double E_plus, E_minus;
};

Mat2c spin_hamiltonian(const RotatingFieldParams& p, double t);
SpinEigenstates instantaneous_eigenstates(const RotatingFieldParams& p, double t);

double berry_phase(double theta, Branch b);

Vec2c propagate_exact(const RotatingFieldParams& p, const Vec2c& psi0, double t);

// Closed-form state for psi0 = psi_+(0), written in the instantaneous basis.
Vec2c psi_plus_closed_form(const RotatingFieldParams& p, double t);

double total_phase_closed(const RotatingFieldParams& p);
double dynamical_phase_closed(const RotatingFieldParams& p);
// Kinematic phase after one drive period 2 pi / Omega.
double kinematic_gp_closed(const RotatingFieldParams& p);

// Numeric kinematic phase over one period from n_samples exact states.
double kinematic_gp_numeric(const RotatingFieldParams& p, std::size_t n_samples);

double echo_persistence_unitary(double theta, bool adiabatic, double Omega_over_omega = 1e-3);

}  // namespace gph
