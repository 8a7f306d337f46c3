#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gph/phasefun.hpp"
#include "gph/spin_rotating.hpp"

namespace gph {

// Counter-based stream: every draw hashes (key, counter), so a trajectory's
// numbers depend only on the master seed and its index.
class CounterRng {
public:
    CounterRng(std::uint64_t master_seed, std::uint64_t stream);
    std::uint64_t next_u64();
    double uniform();  // [0, 1)
    std::uint64_t draws() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

// How the Hermitian channels L_d and L_z enter the unraveling. Half weights
// their rates by 1/2; Literal uses gamma as written.
enum class DephasingConvention { Half, Literal };

enum JumpChannel : int { kJumpMinus = 0, kJumpPlus = 1, kJumpDephasing = 2, kJumpZ = 3 };
inline constexpr int kJumpChannelCount = 4;
const char* channel_name(int channel);

struct JumpChannelSet {
    double gamma_minus = 1e-3;
    double gamma_plus = 0.0;
    double gamma_d = 0.32e-3;
    double gamma_z = 0.0;
    DephasingConvention convention = DephasingConvention::Half;

    // gamma_- = Gamma, gamma_+ = 0, gamma_d = 0.32 Gamma.
    static JumpChannelSet from_dissipation(double Gamma, double gamma_z = 0.0);
    double Gamma() const { return gamma_minus; }
    double effective_gamma_d() const;
    double effective_gamma_z() const;
    double total_rate() const;
    void validate() const;
};

// L_-, L_+, L_d, L_z at time t, in JumpChannel order.
std::array<Mat2c, kJumpChannelCount> build_jump_operators(const RotatingFieldParams& p, const JumpChannelSet& ch,
                                                         double t);

// H - (i/2) sum_a L_a^+ L_a
Mat2c effective_hamiltonian(const RotatingFieldParams& p, const JumpChannelSet& ch, double t);

struct StepOutcome {
    Vec2c state;
    int event = -1;  // -1: smooth step, otherwise the JumpChannel
    double p_jump = 0.0;
    double p_smooth = 0.0;
    std::array<double, kJumpChannelCount> p_channel{};
};

inline constexpr double kMaxJumpProbability = 1e-2;

// One step of length dt from t. The smooth branch applies exp(-i dt H_eff) at
// the step midpoint, which agrees with 1 - i dt H_eff to first order.
StepOutcome mc_step(const Vec2c& state, double t, double dt, const RotatingFieldParams& p, const JumpChannelSet& ch,
                    CounterRng& rng);

struct TrajectoryOptions {
    double dt = 0.0;                // 0: default_dt
    std::size_t sample_every = 1;   // keep every k-th smooth state
    bool keep_samples = true;
};

// min(T / 20000, 0.01 / total rate), adjusted so that T is a whole number of steps.
double default_dt(const RotatingFieldParams& p, const JumpChannelSet& ch, double T);

// Monitored evolution over [0, T] starting from psi0 (default psi_+(0)).
TrajectoryRecord run_trajectory(const RotatingFieldParams& p, const JumpChannelSet& ch, double T, std::uint64_t seed,
                                std::uint64_t index = 0, const TrajectoryOptions& opt = {});
TrajectoryRecord run_trajectory(const RotatingFieldParams& p, const JumpChannelSet& ch, const Vec2c& psi0, double T,
                                std::uint64_t seed, std::uint64_t index, const TrajectoryOptions& opt = {});

// ---- no-jump dynamics ----------------------------------------------------

struct NoJumpState {
    Vec2c state;        // normalized
    double norm = 1.0;  // norm of the unnormalized closed-form state
};

// Closed form with f(t) replaced by its cycle average 1 - sin^2(theta)/2,
// for the initial state psi_+(0).
NoJumpState nojump_state_analytic(const RotatingFieldParams& p, const JumpChannelSet& ch, double t);

// Direct integration of i d/dt psi = H_eff(t) psi with the full f(t); the
// returned states keep their decaying norm.
std::vector<Vec2c> nojump_states_numeric(const RotatingFieldParams& p, const JumpChannelSet& ch,
                                         const std::vector<double>& times, const OdeControl& ctrl = {});

StatePath nojump_path_analytic(const RotatingFieldParams& p, const JumpChannelSet& ch, std::size_t n_samples);

// Geometric phase of the analytic no-jump evolution over one period, with the
// dynamical integral done by quadrature. Throws SingularPath when the final
// state is orthogonal to psi_+(0) within overlap_tol.
double nojump_gp_analytic(const RotatingFieldParams& p, const JumpChannelSet& ch, double overlap_tol = 1e-10);

// ---- ensembles -------------------------------------------------------------

struct EnsembleOptions {
    std::size_t n_bins = 64;
    unsigned threads = 1;
    TrajectoryOptions trajectory;
};

struct PhaseEnsemble {
    PhaseDistribution distribution;
    std::vector<double> phases;  // accepted trajectories, in index order
    std::vector<std::size_t> jump_counts;
    std::vector<int> first_channel;  // -1 when no jump
    std::size_t discarded = 0;
    double mean_jumps = 0.0;
    double phi_a = 0.0;    // Berry phase of psi_+
    double phi_0 = 0.0;    // no-jump phase
    double phi_u = 0.0;    // unitary phase at the same drive
    double phi_bar = 0.0;  // first circular moment
    double discard_fraction() const;
};

PhaseEnsemble phase_ensemble(const RotatingFieldParams& p, const JumpChannelSet& ch, std::size_t n_traj,
                             std::uint64_t seed, const EnsembleOptions& opt = {});

// Echo parameter on the branch [5 pi/4, 3 pi/2]: P = cos^2(2 phi).
inline constexpr double kEchoBranchLo = 1.25 * pi;
inline constexpr double kEchoBranchHi = 1.5 * pi;
double echo_parameter(double persistence);

struct EchoRealization {
    double persistence = 0.0;
    double echo_phase = 0.0;
    std::size_t jumps = 0;
    std::array<std::size_t, kJumpChannelCount> jumps_by_channel{};
};

// Superposition start, monitored forward cycle, eigenstate swap, monitored
// reversed cycle.
EchoRealization run_echo(const RotatingFieldParams& p, const JumpChannelSet& ch, std::uint64_t seed,
                         std::uint64_t index, double dt = 0.0);

struct EchoEnsemble {
    PhaseDistribution distribution;
    std::vector<EchoRealization> realizations;
    double mean_jumps = 0.0;
    double nojump_echo_phase = 0.0;
};

EchoEnsemble echo_ensemble(const RotatingFieldParams& p, const JumpChannelSet& ch, std::size_t n_traj,
                           std::uint64_t seed, const EnsembleOptions& opt = {});

// Echo phase of the protocol with every jump suppressed.
double nojump_echo_parameter(const RotatingFieldParams& p, const JumpChannelSet& ch, double dt = 0.0);

// ---- unraveling against the master equation --------------------------------

struct EnsembleAverage {
    std::vector<double> times;                 // checkpoints j T / n_checkpoints, j = 1..n
    std::vector<std::vector<Vec2c>> states;    // [trajectory][checkpoint]
    std::vector<Mat2c> rho;                    // mean projector per checkpoint
};

EnsembleAverage ensemble_average(const RotatingFieldParams& p, const JumpChannelSet& ch, const Vec2c& psi0, double T,
                                 std::size_t n_checkpoints, std::size_t n_traj, std::uint64_t seed,
                                 unsigned threads = 1);

// Lindblad evolution with the same Hamiltonian and jump operators.
std::vector<Mat2c> lindblad_reference(const RotatingFieldParams& p, const JumpChannelSet& ch, const Vec2c& psi0,
                                      const std::vector<double>& times, const OdeControl& ctrl = {});

// RMS trace distance between bootstrap resamples and the ensemble mean.
double bootstrap_trace_error(const EnsembleAverage& avg, std::size_t checkpoint, std::size_t n_boot = 200,
                             std::uint64_t seed = 1);

// ---- topology of the no-jump phase ------------------------------------------

struct TopoScan {
    std::vector<double> theta;
    std::vector<double> phi0;  // continuous in theta, phi0(0) = 0
    int n = 0;
};

// The grid must start at 0 and end at pi; points are inserted until
// consecutive phases differ by less than pi/2.
TopoScan topo_scan(const std::vector<double>& theta_grid, double Omega_over_omega, double Gamma_over_omega);

// (phi0^(1) - phi0^(2)) / 2 pi at the grid angles.
std::vector<double> topo_difference(const std::vector<double>& theta_grid, double Omega1, double Gamma1, double Omega2,
                                    double Gamma2);

// (nu + eps) e^{-2 i pi eps/Omega} - (nu - eps), divided by (nu - eps); omega = 1.
cplx singularity_condition(double theta, double Omega_over_omega, double Gamma_over_omega);

struct SingularPoint {
    double Omega_over_omega = 0.0;
    double Gamma_over_omega = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

SingularPoint find_singularity(double theta, double Omega_lo, double Omega_hi, double Gamma_lo, double Gamma_hi);

}  // namespace gph
