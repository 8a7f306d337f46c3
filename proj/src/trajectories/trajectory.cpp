#include <cmath>
#include <algorithm>

#include <boost/math/quadrature/gauss.hpp>

#include "propagator.hpp"

namespace gph {

namespace {

bool same_time(double a, double b, double dt) { return std::abs(a - b) <= 1e-9 * dt; }

struct EvolveResult {
    Vec2c final_state;
    std::size_t jumps = 0;
    std::array<std::size_t, kJumpChannelCount> by_channel{};
};

// Monitored evolution over n_steps of length dt starting at t0. The record is
// optional and, when present, receives samples, jumps and the fine phase sum.
EvolveResult evolve(const RotatingFieldParams& p, const JumpChannelSet& ch, Vec2c psi, double t0, double dt,
                    std::size_t n_steps, CounterRng& rng, TrajectoryRecord* rec, std::size_t sample_every,
                    bool keep_samples, double* link_sum) {
    EvolveResult res;
    for (std::size_t k = 0; k < n_steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double t_next = t0 + static_cast<double>(k + 1) * dt;
        const StepOutcome o = mc_step(psi, t, dt, p, ch, rng);
        if (link_sum) *link_sum += std::arg(psi.dot(o.state));
        if (o.event >= 0) {
            ++res.jumps;
            ++res.by_channel[static_cast<std::size_t>(o.event)];
            if (rec) {
                if (keep_samples && !same_time(rec->samples.times.back(), t, dt)) {
                    rec->samples.times.push_back(t);
                    rec->samples.states.push_back(psi);
                }
                rec->jumps.push_back(JumpEvent{t, o.event, psi, o.state});
                if (keep_samples) {
                    rec->samples.times.push_back(t_next);
                    rec->samples.states.push_back(o.state);
                    rec->jump_sample.push_back(rec->samples.states.size() - 1);
                }
            }
        } else if (rec && keep_samples && ((k + 1) % sample_every == 0 || k + 1 == n_steps)) {
            rec->samples.times.push_back(t_next);
            rec->samples.states.push_back(o.state);
        }
        psi = o.state;
    }
    res.final_state = psi;
    return res;
}

std::size_t step_count(double T, double dt) {
    const double n = std::round(T / dt);
    if (!(n >= 1.0)) throw DomainError("time step longer than the evolution");
    return static_cast<std::size_t>(n);
}

Vec2c echo_swap(const RotatingFieldParams& p, double T, const Vec2c& a) {
    const auto eT = instantaneous_eigenstates(p, T);
    const Vec2c flipped = eT.plus.dot(a) * eT.minus + eT.minus.dot(a) * eT.plus;
    return flipped / flipped.norm();
}

RotatingFieldParams reversed(const RotatingFieldParams& p, double T) {
    RotatingFieldParams back = p;
    back.direction = -p.direction;
    back.phase0 = std::remainder(p.phase0 + p.signed_Omega() * T, 2.0 * pi);
    return back;
}

Vec2c echo_initial(const RotatingFieldParams& p) {
    const auto e0 = instantaneous_eigenstates(p, 0.0);
    return (e0.plus + e0.minus) / std::sqrt(2.0);
}

}  // namespace

double default_dt(const RotatingFieldParams& p, const JumpChannelSet& ch, double T) {
    (void)p;
    if (!(T > 0.0)) throw DomainError("evolution time must be positive");
    double dt = T / 20000.0;
    const double rate = ch.total_rate();
    if (rate > 0.0) dt = std::min(dt, kMaxJumpProbability / rate);
    const double n = std::ceil(T / dt - 1e-9);
    return T / n;
}

TrajectoryRecord run_trajectory(const RotatingFieldParams& p, const JumpChannelSet& ch, double T, std::uint64_t seed,
                                std::uint64_t index, const TrajectoryOptions& opt) {
    return run_trajectory(p, ch, instantaneous_eigenstates(p, 0.0).plus, T, seed, index, opt);
}

TrajectoryRecord run_trajectory(const RotatingFieldParams& p, const JumpChannelSet& ch, const Vec2c& psi0, double T,
                                std::uint64_t seed, std::uint64_t index, const TrajectoryOptions& opt) {
    ch.validate();
    if (std::abs(psi0.norm() - 1.0) > 1e-10) throw InvalidState("initial state must be normalized");
    if (opt.sample_every == 0) throw std::invalid_argument("sample_every must be positive");
    const double dt = opt.dt > 0.0 ? opt.dt : default_dt(p, ch, T);
    const std::size_t n = step_count(T, dt);

    TrajectoryRecord rec;
    rec.seed = seed;
    rec.index = index;
    rec.t_final = static_cast<double>(n) * dt;
    rec.samples.times.push_back(0.0);
    rec.samples.states.push_back(psi0);
    if (opt.keep_samples) {
        const std::size_t expected = n / opt.sample_every + 2;
        rec.samples.times.reserve(expected);
        rec.samples.states.reserve(expected);
    }

    CounterRng rng(seed, index);
    double links = 0.0;
    const EvolveResult r = evolve(p, ch, psi0, 0.0, dt, n, rng, &rec, opt.sample_every, opt.keep_samples, &links);
    if (!opt.keep_samples) {
        rec.samples.times.push_back(rec.t_final);
        rec.samples.states.push_back(r.final_state);
    }
    rec.total_steps = n;
    rec.fine_phase = wrap_phase(std::arg(psi0.dot(r.final_state)) - links);
    return rec;
}

// ---- no-jump dynamics ----------------------------------------------------

namespace {

// Closed-form coefficients on psi_+(0), psi_-(0) in the co-rotating frame,
// multiplied by exp(-i eps t / 2) so that neither grows without bound.
struct NoJumpModel {
    double Omega_s, theta;
    cplx nu, eps;

    NoJumpModel(const RotatingFieldParams& p, const JumpChannelSet& ch) : Omega_s(p.signed_Omega()), theta(p.theta) {
        const double st = std::sin(theta);
        const double fbar = 1.0 - 0.5 * st * st;
        const double G = ch.gamma_minus - ch.gamma_plus;
        nu = cplx{p.omega - Omega_s * std::cos(theta), -0.5 * G * fbar};
        eps = std::sqrt(nu * nu + Omega_s * Omega_s * st * st);
        if (eps.imag() > 0.0) eps = -eps;
        if (std::abs(eps) < 1e-300) throw SingularPath("degenerate no-jump generator");
    }

    std::pair<cplx, cplx> coeffs(double t) const {
        const cplx E = std::exp(-I * eps * t);
        const cplx cp = 0.5 * (1.0 + E) - (nu / eps) * 0.5 * (1.0 - E);
        const cplx cm = (Omega_s * std::sin(theta) / eps) * 0.5 * (1.0 - E);
        return {cp, cm};
    }

    std::pair<cplx, cplx> derivs(double t) const {
        const cplx E = std::exp(-I * eps * t);
        return {-0.5 * I * E * (eps + nu), 0.5 * I * Omega_s * std::sin(theta) * E};
    }

    // Im <psi|psi'> / <psi|psi> for psi = R(Omega_s t) chi.
    double connection(double t) const {
        const auto [cp, cm] = coeffs(t);
        const auto [dp, dm] = derivs(t);
        const double n2 = std::norm(cp) + std::norm(cm);
        const double sz = std::cos(theta) * (std::norm(cp) - std::norm(cm)) +
                          2.0 * std::sin(theta) * (std::conj(cp) * cm).real();
        const double im = (std::conj(cp) * dp + std::conj(cm) * dm).imag();
        return (-0.5 * Omega_s * sz + im) / n2;
    }
};

}  // namespace

NoJumpState nojump_state_analytic(const RotatingFieldParams& p, const JumpChannelSet& ch, double t) {
    const NoJumpModel m(p, ch);
    const auto [cp, cm] = m.coeffs(t);
    const auto es = instantaneous_eigenstates(p, t);
    const double a = p.signed_Omega() * t;
    const Vec2c v = std::exp(-I * (0.5 * a)) * (cp * es.plus + cm * es.minus);
    NoJumpState out;
    const double nv = v.norm();
    out.state = v / nv;
    out.norm = nv * std::exp(-0.5 * m.eps.imag() * t);
    return out;
}

std::vector<Vec2c> nojump_states_numeric(const RotatingFieldParams& p, const JumpChannelSet& ch,
                                         const std::vector<double>& times, const OdeControl& ctrl) {
    const Vec2c psi0 = instantaneous_eigenstates(p, 0.0).plus;
    ComplexRhs rhs = [&](double t, const CVec& y, CVec& dy) { dy = -I * (effective_hamiltonian(p, ch, t) * y); };
    const auto raw = integrate_ode(rhs, CVec(psi0), 0.0, times, ctrl);
    std::vector<Vec2c> out;
    out.reserve(raw.size());
    for (const auto& y : raw) out.emplace_back(y);
    return out;
}

StatePath nojump_path_analytic(const RotatingFieldParams& p, const JumpChannelSet& ch, std::size_t n_samples) {
    if (n_samples < 2) throw std::invalid_argument("need at least two samples");
    StatePath path;
    path.times = linspace(0.0, p.period(), n_samples);
    for (double t : path.times) path.states.push_back(nojump_state_analytic(p, ch, t).state);
    return path;
}

double nojump_gp_analytic(const RotatingFieldParams& p, const JumpChannelSet& ch, double overlap_tol) {
    const NoJumpModel m(p, ch);
    const double T = p.period();
    const auto [cT, dT] = m.coeffs(T);
    const double ov = std::abs(cT) / std::hypot(std::abs(cT), std::abs(dT));
    if (ov <= overlap_tol) throw SingularPath("no-jump evolution ends orthogonal to its initial state");

    using GL = boost::math::quadrature::gauss<double, 20>;
    const double rate = std::abs(m.eps) + std::abs(m.Omega_s);
    const auto panels = static_cast<std::size_t>(std::max(16.0, std::ceil(T * rate / 2.0)));
    double integral = 0.0;
    for (std::size_t k = 0; k < panels; ++k) {
        const double lo = T * static_cast<double>(k) / static_cast<double>(panels);
        const double hi = T * static_cast<double>(k + 1) / static_cast<double>(panels);
        integral += GL::integrate([&m](double t) { return m.connection(t); }, lo, hi);
    }
    // R(+-2 pi) = -1 closes the frame rotation over one period.
    return wrap_phase(std::arg(-cT) - integral);
}

// ---- echo protocol ---------------------------------------------------------

double echo_parameter(double persistence) {
    const double P = std::clamp(persistence, 0.0, 1.0);
    return 0.5 * (3.0 * pi - std::acos(std::sqrt(P)));
}

EchoRealization run_echo(const RotatingFieldParams& p, const JumpChannelSet& ch, std::uint64_t seed,
                         std::uint64_t index, double dt) {
    ch.validate();
    const double T = p.period();
    if (!(dt > 0.0)) dt = default_dt(p, ch, T);
    const std::size_t n = step_count(T, dt);
    const Vec2c psi0 = echo_initial(p);

    CounterRng rng(seed, index);
    const EvolveResult fwd = evolve(p, ch, psi0, 0.0, dt, n, rng, nullptr, 1, false, nullptr);
    const Vec2c swapped = echo_swap(p, T, fwd.final_state);
    const EvolveResult bwd = evolve(reversed(p, T), ch, swapped, 0.0, dt, n, rng, nullptr, 1, false, nullptr);

    EchoRealization out;
    out.persistence = std::norm(psi0.dot(bwd.final_state));
    out.echo_phase = echo_parameter(out.persistence);
    out.jumps = fwd.jumps + bwd.jumps;
    for (int a = 0; a < kJumpChannelCount; ++a) out.jumps_by_channel[a] = fwd.by_channel[a] + bwd.by_channel[a];
    return out;
}

double nojump_echo_parameter(const RotatingFieldParams& p, const JumpChannelSet& ch, double dt) {
    const double T = p.period();
    if (!(dt > 0.0)) dt = default_dt(p, ch, T);
    const std::size_t n = step_count(T, dt);
    const Vec2c psi0 = echo_initial(p);
    Vec2c psi = psi0;
    for (std::size_t k = 0; k < n; ++k) {
        psi = detail::smooth_propagate(psi, static_cast<double>(k) * dt, dt, p, ch);
        psi.normalize();
    }
    psi = echo_swap(p, T, psi);
    const RotatingFieldParams back = reversed(p, T);
    for (std::size_t k = 0; k < n; ++k) {
        psi = detail::smooth_propagate(psi, static_cast<double>(k) * dt, dt, back, ch);
        psi.normalize();
    }
    return echo_parameter(std::norm(psi0.dot(psi)));
}

}  // namespace gph
