#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "gph/trajectories.hpp"

namespace gph {

namespace {

// Runs task(i) for i in [0, n) on up to `threads` workers; the first exception
// thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
    const unsigned workers = static_cast<unsigned>(std::max<std::size_t>(1, std::min<std::size_t>(threads, n)));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) task(i);
        return;
    }
    std::exception_ptr first;
    std::mutex guard;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) task(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(guard);
                if (!first) first = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first) std::rethrow_exception(first);
}

void require_ensemble_size(std::size_t n_traj) {
    if (n_traj < 100) throw DomainError("ensembles need at least 100 trajectories");
}

}  // namespace

double PhaseEnsemble::discard_fraction() const {
    const double total = static_cast<double>(phases.size() + discarded);
    return total > 0.0 ? static_cast<double>(discarded) / total : 0.0;
}

PhaseEnsemble phase_ensemble(const RotatingFieldParams& p, const JumpChannelSet& ch, std::size_t n_traj,
                             std::uint64_t seed, const EnsembleOptions& opt) {
    require_ensemble_size(n_traj);
    ch.validate();
    const double T = p.period();

    std::vector<double> phase(n_traj, 0.0);
    std::vector<char> ok(n_traj, 0);
    std::vector<std::size_t> jumps(n_traj, 0);
    std::vector<int> first(n_traj, -1);
    parallel_for(n_traj, opt.threads, [&](std::size_t i) {
        const TrajectoryRecord rec = run_trajectory(p, ch, T, seed, i, opt.trajectory);
        jumps[i] = rec.jump_count();
        if (!rec.jumps.empty()) first[i] = rec.jumps.front().channel;
        if (opt.trajectory.keep_samples) {
            try {
                phase[i] = trajectory_gp(rec);
                ok[i] = 1;
            } catch (const OrthogonalStates&) {
                ok[i] = 0;
            }
        } else {
            // Only the endpoints are stored; the step-by-step chain is in fine_phase.
            const auto& s = rec.samples.states;
            ok[i] = std::abs(s.front().dot(s.back())) > kOverlapTol;
            phase[i] = rec.fine_phase;
        }
    });

    PhaseEnsemble out;
    double total_jumps = 0.0;
    for (std::size_t i = 0; i < n_traj; ++i) {
        total_jumps += static_cast<double>(jumps[i]);
        if (!ok[i]) {
            ++out.discarded;
            continue;
        }
        out.phases.push_back(phase[i]);
        out.jump_counts.push_back(jumps[i]);
        out.first_channel.push_back(first[i]);
    }
    if (out.phases.empty()) throw EmptyEnsemble("every trajectory returned orthogonal to its initial state");
    out.mean_jumps = total_jumps / static_cast<double>(n_traj);
    out.distribution = make_distribution(out.phases, opt.n_bins, -pi, pi);
    out.phi_bar = out.distribution.circular_mean();
    out.phi_a = berry_phase(p.theta, Branch::Plus);
    out.phi_u = kinematic_gp_closed(p);
    try {
        out.phi_0 = nojump_gp_analytic(p, ch);
    } catch (const SingularPath&) {
        out.phi_0 = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

EchoEnsemble echo_ensemble(const RotatingFieldParams& p, const JumpChannelSet& ch, std::size_t n_traj,
                           std::uint64_t seed, const EnsembleOptions& opt) {
    require_ensemble_size(n_traj);
    ch.validate();
    EchoEnsemble out;
    out.realizations.resize(n_traj);
    parallel_for(n_traj, opt.threads,
                 [&](std::size_t i) { out.realizations[i] = run_echo(p, ch, seed, i, opt.trajectory.dt); });

    std::vector<double> values;
    values.reserve(n_traj);
    double total = 0.0;
    const double top = std::nextafter(kEchoBranchHi, kEchoBranchLo);
    for (const auto& r : out.realizations) {
        values.push_back(std::min(r.echo_phase, top));
        total += static_cast<double>(r.jumps);
    }
    out.mean_jumps = total / static_cast<double>(n_traj);
    out.distribution = make_distribution(values, opt.n_bins, kEchoBranchLo, kEchoBranchHi);
    out.nojump_echo_phase = nojump_echo_parameter(p, ch, opt.trajectory.dt);
    return out;
}

// ---- unraveling against the master equation --------------------------------

EnsembleAverage ensemble_average(const RotatingFieldParams& p, const JumpChannelSet& ch, const Vec2c& psi0, double T,
                                 std::size_t n_checkpoints, std::size_t n_traj, std::uint64_t seed, unsigned threads) {
    if (n_checkpoints == 0) throw std::invalid_argument("need at least one checkpoint");
    if (n_traj == 0) throw EmptyEnsemble("no trajectories requested");
    double dt = default_dt(p, ch, T);
    auto n = static_cast<std::size_t>(std::llround(T / dt));
    n = (n + n_checkpoints - 1) / n_checkpoints * n_checkpoints;
    dt = T / static_cast<double>(n);
    const std::size_t every = n / n_checkpoints;

    EnsembleAverage out;
    for (std::size_t j = 1; j <= n_checkpoints; ++j) out.times.push_back(static_cast<double>(j * every) * dt);
    out.states.assign(n_traj, std::vector<Vec2c>(n_checkpoints));

    TrajectoryOptions opt;
    opt.dt = dt;
    opt.sample_every = every;
    parallel_for(n_traj, threads, [&](std::size_t i) {
        const TrajectoryRecord rec = run_trajectory(p, ch, psi0, T, seed, i, opt);
        // The latest sample at a checkpoint time is the state after that step.
        std::size_t j = 0;
        for (std::size_t s = 0; s < rec.samples.times.size(); ++s) {
            while (j < n_checkpoints && rec.samples.times[s] > out.times[j] + 0.5 * dt) ++j;
            if (j < n_checkpoints && std::abs(rec.samples.times[s] - out.times[j]) <= 0.5 * dt)
                out.states[i][j] = rec.samples.states[s];
        }
    });

    out.rho.assign(n_checkpoints, Mat2c::Zero());
    for (const auto& traj : out.states)
        for (std::size_t j = 0; j < n_checkpoints; ++j) out.rho[j] += traj[j] * traj[j].adjoint();
    for (auto& r : out.rho) r /= static_cast<double>(n_traj);
    return out;
}

std::vector<Mat2c> lindblad_reference(const RotatingFieldParams& p, const JumpChannelSet& ch, const Vec2c& psi0,
                                      const std::vector<double>& times, const OdeControl& ctrl) {
    auto H = [&p](double t) -> CMat { return spin_hamiltonian(p, t); };
    auto L = [&p, &ch](double t) {
        std::vector<CMat> out;
        for (const Mat2c& m : build_jump_operators(p, ch, t)) out.emplace_back(m);
        return out;
    };
    const CMat rho0 = psi0 * psi0.adjoint();
    std::vector<Mat2c> out;
    for (const CMat& r : lindblad_evolve(H, L, rho0, 0.0, times, ctrl)) out.emplace_back(r);
    return out;
}

double bootstrap_trace_error(const EnsembleAverage& avg, std::size_t checkpoint, std::size_t n_boot,
                             std::uint64_t seed) {
    const std::size_t n = avg.states.size();
    if (n == 0) throw EmptyEnsemble("no trajectories to resample");
    CounterRng rng(seed, checkpoint);
    double acc = 0.0;
    for (std::size_t b = 0; b < n_boot; ++b) {
        Mat2c r = Mat2c::Zero();
        for (std::size_t k = 0; k < n; ++k) {
            const auto i = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
            const Vec2c& v = avg.states[std::min(i, n - 1)][checkpoint];
            r += v * v.adjoint();
        }
        r /= static_cast<double>(n);
        const double d = trace_distance(r, avg.rho[checkpoint]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(n_boot));
}

// ---- topology of the no-jump phase ------------------------------------------

namespace {

double phi0_at(double theta, double Omega, double Gamma) {
    RotatingFieldParams p{1.0, Omega, theta, +1, 0.0};
    return nojump_gp_analytic(p, JumpChannelSet::from_dissipation(Gamma));
}

}  // namespace

TopoScan topo_scan(const std::vector<double>& theta_grid, double Omega_over_omega, double Gamma_over_omega) {
    if (theta_grid.size() < 2 || theta_grid.front() != 0.0 || std::abs(theta_grid.back() - pi) > 1e-12)
        throw std::invalid_argument("theta grid must run from 0 to pi");
    if (!(Omega_over_omega > 0.0) || !(Gamma_over_omega >= 0.0)) throw DomainError("invalid drive or dissipation");
    for (std::size_t i = 1; i < theta_grid.size(); ++i)
        if (!(theta_grid[i] > theta_grid[i - 1])) throw std::invalid_argument("theta grid must increase");

    TopoScan out;
    out.theta.push_back(0.0);
    out.phi0.push_back(0.0);
    double prev_raw = phi0_at(0.0, Omega_over_omega, Gamma_over_omega);
    constexpr std::size_t kMaxPoints = 200000;

    for (std::size_t g = 1; g < theta_grid.size(); ++g) {
        // Pending right ends between the last accepted angle and the grid point.
        std::vector<std::pair<double, double>> stack{{theta_grid[g], phi0_at(theta_grid[g], Omega_over_omega,
                                                                              Gamma_over_omega)}};
        while (!stack.empty()) {
            const auto [th, raw] = stack.back();
            const double step = wrap_phase(raw - prev_raw);
            const double left = out.theta.back();
            if (std::abs(step) < 0.5 * pi) {
                out.theta.push_back(th);
                out.phi0.push_back(out.phi0.back() + step);
                prev_raw = raw;
                stack.pop_back();
                continue;
            }
            const double mid = 0.5 * (left + th);
            if (!(th - left > 1e-13)) throw SingularPath("no-jump phase jumps by pi/2 within a vanishing angle");
            if (out.theta.size() + stack.size() > kMaxPoints) throw NoConvergence("topo scan refinement limit");
            stack.emplace_back(mid, phi0_at(mid, Omega_over_omega, Gamma_over_omega));
        }
    }
    out.n = static_cast<int>(std::lround(out.phi0.back() / (2.0 * pi)));
    return out;
}

std::vector<double> topo_difference(const std::vector<double>& theta_grid, double Omega1, double Gamma1, double Omega2,
                                    double Gamma2) {
    const TopoScan a = topo_scan(theta_grid, Omega1, Gamma1);
    const TopoScan b = topo_scan(theta_grid, Omega2, Gamma2);
    auto at = [](const TopoScan& s, double th) {
        const auto it = std::lower_bound(s.theta.begin(), s.theta.end(), th);
        return s.phi0[static_cast<std::size_t>(it - s.theta.begin())];
    };
    std::vector<double> out;
    out.reserve(theta_grid.size());
    for (double th : theta_grid) out.push_back((at(a, th) - at(b, th)) / (2.0 * pi));
    return out;
}

namespace {

struct SingularTerms {
    cplx value;
    cplx d_Omega;
    cplx d_Gamma;
};

// H = -(nu + eps)^2 exp(-2 i pi eps / Omega) / (Omega^2 sin^2 theta) - 1, which
// is the condition divided by (nu - eps) = -Omega^2 sin^2 theta / (nu + eps).
SingularTerms singular_terms(double theta, double O, double G) {
    const double c = std::cos(theta), s = std::sin(theta);
    const double m = 1.0 - 0.5 * s * s;
    const cplx nu{1.0 - O * c, -0.5 * G * m};
    cplx eps = std::sqrt(nu * nu + O * O * s * s);
    if (eps.real() < 0.0) eps = -eps;
    const cplx q = nu + eps;
    const cplx A = q * q * std::exp(-2.0 * pi * I * eps / O);
    const double den = O * O * s * s;

    const cplx nu_O = -c, nu_G = cplx{0.0, -0.5 * m};
    const cplx eps_O = (nu * nu_O + O * s * s) / eps;
    const cplx eps_G = nu * nu_G / eps;
    const cplx dlogA_O = 2.0 * (nu_O + eps_O) / q - 2.0 * pi * I * (eps_O / O - eps / (O * O));
    const cplx dlogA_G = 2.0 * (nu_G + eps_G) / q - 2.0 * pi * I * eps_G / O;

    SingularTerms t;
    t.value = -A / den - 1.0;
    t.d_Omega = -(A / den) * (dlogA_O - 2.0 / O);
    t.d_Gamma = -(A / den) * dlogA_G;
    return t;
}

}  // namespace

cplx singularity_condition(double theta, double Omega_over_omega, double Gamma_over_omega) {
    if (!(Omega_over_omega > 0.0) || std::sin(theta) == 0.0) throw DomainError("condition needs Omega > 0, sin(theta) != 0");
    return singular_terms(theta, Omega_over_omega, Gamma_over_omega).value;
}

SingularPoint find_singularity(double theta, double Omega_lo, double Omega_hi, double Gamma_lo, double Gamma_hi) {
    if (!(Omega_lo > 0.0 && Omega_hi > Omega_lo && Gamma_hi > Gamma_lo && Gamma_lo >= 0.0))
        throw DomainError("invalid search region");
    if (std::sin(theta) == 0.0) throw DomainError("no singular points for a field along z");

    // Start from the smallest residual on a coarse grid.
    constexpr int kGrid = 101;
    double best = std::numeric_limits<double>::infinity();
    double O = 0.5 * (Omega_lo + Omega_hi), G = 0.5 * (Gamma_lo + Gamma_hi);
    for (int i = 0; i < kGrid; ++i)
        for (int j = 0; j < kGrid; ++j) {
            const double o = Omega_lo + (Omega_hi - Omega_lo) * i / (kGrid - 1.0);
            const double g = Gamma_lo + (Gamma_hi - Gamma_lo) * j / (kGrid - 1.0);
            const double r = std::abs(singular_terms(theta, o, g).value);
            if (r < best) {
                best = r;
                O = o;
                G = g;
            }
        }

    SingularTerms cur = singular_terms(theta, O, G);
    for (int it = 1; it <= 200; ++it) {
        Eigen::Matrix2d J;
        J << cur.d_Omega.real(), cur.d_Gamma.real(), cur.d_Omega.imag(), cur.d_Gamma.imag();
        const Eigen::Vector2d rhs(-cur.value.real(), -cur.value.imag());
        const Eigen::Vector2d step = J.partialPivLu().solve(rhs);
        double lambda = 1.0;
        SingularTerms next = cur;
        double o = O, g = G;
        while (lambda > 1e-8) {
            o = std::clamp(O + lambda * step(0), Omega_lo, Omega_hi);
            g = std::clamp(G + lambda * step(1), Gamma_lo, Gamma_hi);
            next = singular_terms(theta, o, g);
            if (std::abs(next.value) < std::abs(cur.value)) break;
            lambda *= 0.5;
        }
        O = o;
        G = g;
        cur = next;
        if (std::abs(cur.value) < 1e-10) return SingularPoint{O, G, std::abs(cur.value), it};
        if (lambda <= 1e-8) break;
    }
    throw NoConvergence("singular point search did not converge");
}

}  // namespace gph
