#pragma once

#include <map>
#include <string>
#include <vector>

#include "gph/phasefun.hpp"

namespace gph {

// Exponential integral E1 on the principal branch (cut along the negative real
// axis, values on the cut taken from above).
cplx expint_e1(cplx z);

struct SlidingAtomSpec {
    double omega0_tilde = 0.2;
    double Gamma_tilde = 1.0;
    double v = 0.0;
    double mu2_over_d3 = 0.005;
    Eigen::Vector3d n_hat = Eigen::Vector3d::UnitX();
    double vartheta0 = pi / 2;

    double v_crit() const { return 0.5 * omega0_tilde; }
    bool supercritical() const { return v >= v_crit(); }
    double mu_i() const { return 1.0 + n_hat.z() * n_hat.z(); }
    double mu_a() const {
        return 3.0 * n_hat.x() * n_hat.x() + n_hat.y() * n_hat.y() + 4.0 * n_hat.z() * n_hat.z();
    }
    double natural_period() const { return 2.0 * pi / omega0_tilde; }
    void validate() const;
};

double spectral_h(double omega0_tilde, double Gamma_tilde);
double spectral_h_d2(double omega0_tilde, double Gamma_tilde);  // second derivative in omega0_tilde

// Velocity and polarization factor P(x) of the kernels.
double velocity_profile(const Eigen::Vector3d& n_hat, double x);

// Pole of the dielectric response in the first quadrant (pure imaginary for Gamma > 2).
cplx omega_r(double Gamma_tilde);

// int_0^inf dw Gamma w cos(w tau - m pi/2) / ((w^2 - 1)^2 + Gamma^2 w^2)
double frequency_integral(int m, double Gamma_tilde, double tau);

// Integrand in t' of zeta_lm, normalized so that the long-time plateau at
// v = 0 equals the Markov value.
double zeta_integrand(const SlidingAtomSpec& spec, int l, int m, double t);

// zeta_lm(t) by adaptive quadrature of zeta_integrand over [0, t].
double zeta_kernel(const SlidingAtomSpec& spec, int l, int m, double t, double rtol = 1e-7);

// Time after which |zeta_integrand| stays below rel_tol of its peak.
double kernel_truncation_time(const SlidingAtomSpec& spec, double rel_tol = 1e-10);

struct MarkovZeta {
    double zeta00 = 0.0;
    double zeta11 = 0.0;
    std::vector<std::string> warnings;
};
MarkovZeta markov_zeta(const SlidingAtomSpec& spec);

// Accumulated kernel quantities along the evolution.
struct SlidingSample {
    double t = 0.0;
    double zeta00 = 0.0, zeta01 = 0.0, zeta10 = 0.0, zeta11 = 0.0;
    double int_zeta00 = 0.0;  // int_0^t zeta00
    double int_zeta01 = 0.0;  // int_0^t zeta01
    double rho_minus = 0.0;   // rho11 - rho22
    double phase_integral = 0.0;

    double coherence_abs(double vartheta0) const;
};

std::vector<SlidingSample> sliding_history(const SlidingAtomSpec& spec, const std::vector<double>& t_samples);

// Density matrix in the basis {|+>, |->}, |+> the excited level.
CMat sliding_density(const SlidingAtomSpec& spec, const SlidingSample& s);

std::vector<DensityMatrix> evolve_sliding(const SlidingAtomSpec& spec, const std::vector<double>& t_samples);

// Long-time excited population from the kernel plateaus.
double steady_excited_population(const SlidingAtomSpec& spec);

struct DecoherenceTime {
    double tau_D = 0.0;
    double tau_D_markov = 0.0;
    double ratio = 1.0;         // tau_D(v) / tau_D(v = 0), numeric
    double ratio_markov = 1.0;  // 1 - (3/8)(mu_a/mu_i) v^2 h''/h
};
DecoherenceTime decoherence_time(const SlidingAtomSpec& spec);

// Coefficient c in tau_D / tau_D(v = 0) ~ 1 - c (mu_a/mu_i) v^2.
double decoherence_ratio_coefficient(double omega0_tilde, double Gamma_tilde);

struct SlidingPhase {
    double phi_g = 0.0;
    double phi_u = 0.0;
    double delta_phi = 0.0;
    double delta_phi_v0 = 0.0;
    double ratio() const { return delta_phi / delta_phi_v0; }
};
double sliding_unitary_gp(double omega0_tilde, double vartheta0, double t);
SlidingPhase open_gp_sliding(const SlidingAtomSpec& spec, double t);

double friction_force(double lambda2g2, double omega, double Omega_mat, double d, double v, double rtol = 1e-6);

struct MaterialPreset {
    std::string name;
    double omega_s = 0.0;
    double Gamma_tilde = 0.0;
    std::map<std::string, std::vector<double>> atom_omega0;  // alternatives per atom, as omega0 / omega_s
    double d_min_m = 1e-9;
    double d_max_m = 5e-9;
};

std::vector<MaterialPreset> builtin_material_presets();
std::vector<MaterialPreset> load_material_presets(const std::string& path);
const MaterialPreset& find_preset(const std::vector<MaterialPreset>& presets, const std::string& name);

}  // namespace gph
