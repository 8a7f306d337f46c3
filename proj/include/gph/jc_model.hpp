#pragma once

#include <vector>

#include "gph/phasefun.hpp"

namespace gph {

// Jaynes-Cummings atom-mode system in units of the coupling g. Three-level
// dissipative dynamics use the basis {|-,0>, |+,0>, |-,1>} (indices 0, 1, 2).
struct JCParams {
    double g = 1.0;
    double Delta = 0.0;
    double gamma = 0.0;  // photon loss
    double p = 0.0;      // incoherent pump
    int n = 0;

    double Omega_n() const;
    double cos_theta() const { return Delta / Omega_n(); }
    double sin_theta() const;
    double period() const;
    bool strong_coupling() const { return gamma / g < 1.0; }
};

struct DressedStates {
    Vec2c plus, minus;  // in the doublet basis {|+,n>, |-,n+1>}
    double E_plus, E_minus;
};

Mat2c jc_doublet_hamiltonian(const JCParams& p);
DressedStates dressed_states(const JCParams& p);

// Embeds a doublet vector of the n = 0 sector in the three-level basis.
CVec embed_n0(const Vec2c& v);

double adiabatic_gp_jc(const JCParams& p, Branch b);

// Unitary evolution of |+,n> in the doublet basis.
Vec2c unitary_state_jc(const JCParams& p, double t);
double unitary_gp_jc(const JCParams& p, double t);

// Three-level Hamiltonian and jump operators equivalent to the ODE system.
CMat jc_hamiltonian3(const JCParams& p);
std::vector<CMat> jc_jumps3(const JCParams& p);

std::vector<CMat> lindblad_evolve_jc(const JCParams& p, const CMat& rho0, const std::vector<double>& times,
                                     const OdeControl& ctrl = {});

// Eigenvector of the |+,0>,|-,1> block with the larger eigenvalue, embedded in
// the three-level basis, and that eigenvalue.
std::pair<CVec, double> jc_upper_block_state(const CMat& rho);

struct OpenPhase {
    double phi_g = 0.0;
    double phi_u = 0.0;
    double delta_phi = 0.0;
};

OpenPhase open_gp_jc(const JCParams& p, double t, std::size_t samples_per_period = 4000);

// delta_phi at t = periods * T for each detuning (Delta in units of g).
std::vector<double> jc_delta_scan(const JCParams& base, const std::vector<double>& deltas, double periods = 3.0,
                                  std::size_t samples_per_period = 4000);

// Number of strict interior local extrema of a sampled curve.
std::size_t count_interior_extrema(const std::vector<double>& y, double flat_tol = 1e-12);

}  // namespace gph
