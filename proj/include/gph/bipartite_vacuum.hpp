#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "gph/phasefun.hpp"

namespace gph {

enum class DecayKind { A, B, C, D };

// The oscillating kernel functions A_n .. D_n (n = 0, 1) in their printed form.
double decay_function(DecayKind kind, int n, double x, double L_tilde = 0.0, double d_tilde = 0.0);

// Image-dipole tensor components for a pair separated by L along z and
// mirrored through the plane y = 0 (distance s = sqrt(d^2 + L^2)).
double image_zz(int n, double L_tilde, double d_tilde);
double image_yy(int n, double L_tilde, double d_tilde);

struct BipartiteEnvSpec {
    double omega = 1.0;
    double gamma0 = 1e-3;
    double L_tilde = 1.0;
    std::optional<double> d_tilde;  // nullopt: free space
    Eigen::Vector3d pol1 = Eigen::Vector3d::UnitX();
    Eigen::Vector3d pol2 = Eigen::Vector3d::UnitX();
    // Plane-induced single-qubit frequency shift h_{2,ll}(polarization, d_tilde); defaults to 0.
    std::function<double(const Eigen::Vector3d&, double)> h2_self;

    bool free_space() const { return !d_tilde.has_value(); }
    double s_tilde() const;
};

struct BipartiteCoeffs {
    Eigen::Matrix2d a = Eigen::Matrix2d::Zero();
    Eigen::Matrix2d c = Eigen::Matrix2d::Zero();
    std::vector<std::string> warnings;
};

BipartiteCoeffs compute_coeffs(const BipartiteEnvSpec& env);

// Full master-equation generator in the basis {|++>, |+->, |-+>, |-->}.
CMat bipartite_hamiltonian(const BipartiteEnvSpec& env, const BipartiteCoeffs& k);
CMat bipartite_rhs(const BipartiteEnvSpec& env, const BipartiteCoeffs& k, const CMat& rho);

CVec bipartite_initial_state(double theta);
CMat bipartite_state(const BipartiteEnvSpec& env, const BipartiteCoeffs& k, double theta, double t);
std::vector<CMat> evolve_bipartite(const BipartiteEnvSpec& env, double theta, const std::vector<double>& times);

double concurrence(const CMat& rho, bool x_state = false);

// Times in (0, t_max] where C(t) switches between zero and positive values.
std::vector<double> concurrence_transitions(const BipartiteEnvSpec& env, double theta, double t_max,
                                            std::size_t n_grid = 4000, double tol = 1e-10);

// First time |rho_41| drops below e^-2 of its initial value.
double coherence_decay_time(const BipartiteEnvSpec& env, double theta);

struct BipartitePhase {
    double phi_g = 0.0;
    double phi_u = 0.0;
    double delta_phi = 0.0;
};

double bipartite_unitary_gp(double omega, double theta, double t);
BipartitePhase open_gp_bipartite(const BipartiteEnvSpec& env, double theta, double t);

struct GpExpansion {
    double order1 = 0.0;
    double order2 = 0.0;
    double value(double theta) const { return -2.0 * pi * (1.0 - std::cos(theta)) + order1 + order2; }
};
GpExpansion gp_expansion_bipartite(const BipartiteEnvSpec& env, double theta);

}  // namespace gph
