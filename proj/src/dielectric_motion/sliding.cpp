#include <algorithm>
#include <array>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "gph/dielectric_motion.hpp"

namespace gph {

namespace odeint = boost::numeric::odeint;

void SlidingAtomSpec::validate() const {
    if (!(omega0_tilde > 0.0)) throw DomainError("omega0_tilde must be positive");
    if (!(Gamma_tilde > 0.0)) throw DomainError("Gamma_tilde must be positive");
    if (v < 0.0) throw DomainError("velocity must be non-negative");
    if (mu2_over_d3 < 0.0) throw DomainError("mu^2/d^3 must be non-negative");
    if (std::abs(n_hat.norm() - 1.0) > 1e-9) throw InvalidPolarization("dipole direction must be a unit vector");
}

double spectral_h(double w, double G) {
    if (!(w > 0.0)) throw DomainError("spectral_h needs omega0 > 0");
    const double q = w * w - 1.0;
    return G * w / (q * q + G * G * w * w);
}

double spectral_h_d2(double w, double G) {
    if (!(w > 0.0)) throw DomainError("spectral_h needs omega0 > 0");
    const double q = w * w - 1.0;
    const double N = G * w, N1 = G;
    const double D = q * q + G * G * w * w;
    const double D1 = 4.0 * w * q + 2.0 * G * G * w;
    const double D2 = 12.0 * w * w - 4.0 + 2.0 * G * G;
    return -N * D2 / (D * D) - 2.0 * D1 * (N1 * D - N * D1) / (D * D * D);
}

double velocity_profile(const Eigen::Vector3d& n, double x) {
    const double x2 = x * x;
    const double num = 4.0 * (1.0 + n.z() * n.z()) + x2 * (-2.0 * n.x() * n.x() + n.y() * n.y() - n.z() * n.z());
    return num / std::pow(4.0 + x2, 2.5);
}

namespace {

// Long-time plateau of the double integral as printed is pi/2 times the
// resonant (Markov) value; the kernels carry 2/pi so the two agree.
double kernel_scale(const SlidingAtomSpec& s) { return s.mu2_over_d3 / pi * (2.0 / pi); }

double abs_profile_bound(const Eigen::Vector3d& n, double x) {
    const double x2 = x * x;
    const double num = 4.0 * (1.0 + n.z() * n.z()) + x2 * std::abs(-2.0 * n.x() * n.x() + n.y() * n.y() - n.z() * n.z());
    return num / std::pow(4.0 + x2, 2.5);
}

// Non-oscillating bound on |I_0| + |I_1|.
double frequency_envelope(double G, double t) {
    if (G >= 2.0) return std::abs(frequency_integral(0, G, t)) + std::abs(frequency_integral(1, G, t));
    const double s = std::sqrt(4.0 - G * G);
    const double decay = 2.0 * pi / s * std::exp(-0.5 * G * t);
    const double tail = std::abs(frequency_integral(0, G, t) - (pi / s) * std::exp(-0.5 * G * t) *
                                                                  std::cos(0.5 * s * t));
    return decay + tail;
}

}  // namespace

double zeta_integrand(const SlidingAtomSpec& spec, int l, int m, double t) {
    if ((l != 0 && l != 1) || (m != 0 && m != 1)) throw std::invalid_argument("kernel indices must be 0 or 1");
    const double c = l == 0 ? std::cos(spec.omega0_tilde * t) : std::sin(spec.omega0_tilde * t);
    return kernel_scale(spec) * c * frequency_integral(m, spec.Gamma_tilde, t) * velocity_profile(spec.n_hat, spec.v * t);
}

double zeta_kernel(const SlidingAtomSpec& spec, int l, int m, double t, double rtol) {
    spec.validate();
    if (t < 0.0) throw DomainError("zeta_kernel needs t >= 0");
    if (t == 0.0) return 0.0;
    const double panel = std::min(pi / spec.omega0_tilde, 2.0);
    const auto n = static_cast<std::size_t>(std::ceil(t / panel));
    double sum = 0.0, err = 0.0, l1 = 0.0;
    auto f = [&](double x) { return zeta_integrand(spec, l, m, x); };
    for (std::size_t i = 0; i < n; ++i) {
        const double a = t * static_cast<double>(i) / static_cast<double>(n);
        const double b = t * static_cast<double>(i + 1) / static_cast<double>(n);
        double e = 0.0, L = 0.0;
        sum += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 12, rtol * 0.1, &e, &L);
        err += e;
        l1 += L;
    }
    if (!std::isfinite(sum) || err > rtol * std::max(std::abs(sum), 1e-3 * l1))
        throw QuadratureFailure("zeta_" + std::to_string(l) + std::to_string(m) + " quadrature error " +
                                std::to_string(err) + " exceeds tolerance at t = " + std::to_string(t));
    return sum;
}

double kernel_truncation_time(const SlidingAtomSpec& spec, double rel_tol) {
    spec.validate();
    auto env = [&](double t) {
        return frequency_envelope(spec.Gamma_tilde, t) * abs_profile_bound(spec.n_hat, spec.v * t);
    };
    double peak = env(0.0);
    double last = 0.0;
    std::vector<std::pair<double, double>> grid;
    for (double t = 1e-3; t < 1e10; t *= 1.02) grid.emplace_back(t, env(t));
    for (const auto& [t, e] : grid) peak = std::max(peak, e);
    for (const auto& [t, e] : grid)
        if (e > rel_tol * peak) last = t;
    return std::max(last, 10.0 * spec.natural_period());
}

MarkovZeta markov_zeta(const SlidingAtomSpec& spec) {
    spec.validate();
    MarkovZeta out;
    const double h = spectral_h(spec.omega0_tilde, spec.Gamma_tilde);
    const double h2 = spectral_h_d2(spec.omega0_tilde, spec.Gamma_tilde);
    const double z = spec.mu2_over_d3 / pi * (spec.mu_i() / 8.0 * h + 3.0 / 64.0 * spec.mu_a() * spec.v * spec.v * h2);
    out.zeta00 = out.zeta11 = z;
    if (spec.supercritical())
        out.warnings.push_back("v = " + std::to_string(spec.v) + " is not below v_crit = " + std::to_string(spec.v_crit()) +
                               "; the low-velocity expansion does not apply");
    return out;
}

double SlidingSample::coherence_abs(double vartheta0) const {
    return 0.5 * std::sin(vartheta0) * std::exp(-2.0 * int_zeta00);
}

namespace {

// State: zeta00, zeta01, zeta10, zeta11, int zeta00, int zeta01, rho_-, phase integral.
using SlideState = std::array<double, 8>;

// Weight |rho12|^2 / ((rho22 - eps+)^2 + |rho12|^2) of the dynamical phase.
double branch_weight(double rho_minus, double c) {
    const double r = std::hypot(rho_minus, 2.0 * c);
    if (r < 1e-14) throw DegenerateSpectrum("density matrix is maximally mixed; eigenbranch undefined");
    if (rho_minus >= 0.0) {
        const double delta = -0.5 * (rho_minus + r);
        return c * c / (delta * delta + c * c);
    }
    const double q = 2.0 * c / (r - rho_minus);  // |rho22 - eps+| / |rho12|
    return 1.0 / (1.0 + q * q);
}

struct SlideRhs {
    const SlidingAtomSpec& spec;
    double t_trunc;
    double half_sin;

    void operator()(const SlideState& y, SlideState& dy, double t) const {
        if (t <= t_trunc) {
            const double P = velocity_profile(spec.n_hat, spec.v * t);
            const double I0 = frequency_integral(0, spec.Gamma_tilde, t);
            const double I1 = frequency_integral(1, spec.Gamma_tilde, t);
            const double k = kernel_scale(spec) * P;
            const double c = std::cos(spec.omega0_tilde * t), s = std::sin(spec.omega0_tilde * t);
            dy[0] = k * c * I0;
            dy[1] = k * c * I1;
            dy[2] = k * s * I0;
            dy[3] = k * s * I1;
        } else {
            dy[0] = dy[1] = dy[2] = dy[3] = 0.0;
        }
        dy[4] = y[0];
        dy[5] = y[1];
        dy[6] = -4.0 * y[3] - 4.0 * y[0] * y[6];
        const double coh = half_sin * std::exp(-2.0 * y[4]);
        dy[7] = half_sin == 0.0 ? 0.0 : (2.0 * y[1] + spec.omega0_tilde) * branch_weight(y[6], coh);
    }
};

SlideState initial_state(const SlidingAtomSpec& spec) { return {0, 0, 0, 0, 0, 0, std::cos(spec.vartheta0), 0}; }

SlidingSample to_sample(double t, const SlideState& y) {
    SlidingSample s;
    s.t = t;
    s.zeta00 = y[0];
    s.zeta01 = y[1];
    s.zeta10 = y[2];
    s.zeta11 = y[3];
    s.int_zeta00 = y[4];
    s.int_zeta01 = y[5];
    s.rho_minus = y[6];
    s.phase_integral = y[7];
    return s;
}

auto make_stepper() { return odeint::make_dense_output(1e-15, 1e-10, odeint::runge_kutta_dopri5<SlideState>()); }

}  // namespace

std::vector<SlidingSample> sliding_history(const SlidingAtomSpec& spec, const std::vector<double>& t_samples) {
    spec.validate();
    std::vector<SlidingSample> out;
    if (t_samples.empty()) return out;
    if (t_samples.front() < 0.0 || !std::is_sorted(t_samples.begin(), t_samples.end()))
        throw std::invalid_argument("sample times must be non-negative and sorted");

    const SlideRhs rhs{spec, kernel_truncation_time(spec), 0.5 * std::sin(spec.vartheta0)};
    auto stepper = make_stepper();
    stepper.initialize(initial_state(spec), 0.0, 1e-3);
    std::size_t next = 0;
    SlideState y;
    while (next < t_samples.size()) {
        while (next < t_samples.size() && t_samples[next] <= stepper.current_time()) {
            if (t_samples[next] == stepper.current_time()) y = stepper.current_state();
            else stepper.calc_state(t_samples[next], y);
            out.push_back(to_sample(t_samples[next], y));
            ++next;
        }
        if (next == t_samples.size()) break;
        // Restart at the truncation time so no step straddles the switch-off.
        const double t = stepper.current_time();
        if (t < rhs.t_trunc && t + stepper.current_time_step() > rhs.t_trunc) {
            stepper.calc_state(rhs.t_trunc, y);
            stepper.initialize(y, rhs.t_trunc, stepper.current_time_step());
            continue;
        }
        stepper.do_step(std::cref(rhs));
        if (stepper.current_time_step() < 1e-12 * std::max(1.0, stepper.current_time()))
            throw StepSizeUnderflow("sliding evolution step size underflow at t = " + std::to_string(stepper.current_time()));
    }
    return out;
}

CMat sliding_density(const SlidingAtomSpec& spec, const SlidingSample& s) {
    CMat rho(2, 2);
    const cplx r12 = s.coherence_abs(spec.vartheta0) *
                     std::exp(-I * (2.0 * s.int_zeta01 + spec.omega0_tilde * s.t));
    rho << 0.5 * (1.0 + s.rho_minus), r12, std::conj(r12), 0.5 * (1.0 - s.rho_minus);
    return rho;
}

std::vector<DensityMatrix> evolve_sliding(const SlidingAtomSpec& spec, const std::vector<double>& t_samples) {
    std::vector<DensityMatrix> out;
    for (const auto& s : sliding_history(spec, t_samples)) out.emplace_back(sliding_density(spec, s), 1e-10, 1e-9);
    return out;
}

double steady_excited_population(const SlidingAtomSpec& spec) {
    const double T = kernel_truncation_time(spec);
    const auto s = sliding_history(spec, {T}).front();
    if (!(s.zeta00 > 0.0)) throw NoDecay("zeta00 plateau is not positive; no stationary state is approached");
    return 0.5 * (s.zeta00 - s.zeta11) / s.zeta00;
}

namespace {

// First time with int_0^t zeta00 = 1.
double decay_crossing(const SlidingAtomSpec& spec) {
    const double T = kernel_truncation_time(spec);
    const SlideRhs rhs{spec, T, 0.0};
    auto stepper = make_stepper();
    stepper.initialize(initial_state(spec), 0.0, 1e-3);
    bool positive_seen = false;
    auto bisect = [&](double lo, double hi) {
        SlideState m;
        while (hi - lo > 1e-12 * hi) {
            const double mid = 0.5 * (lo + hi);
            stepper.calc_state(mid, m);
            (m[4] >= 1.0 ? hi : lo) = mid;
        }
        return 0.5 * (lo + hi);
    };
    while (stepper.current_time() < T) {
        const double t0 = stepper.current_time();
        if (t0 + stepper.current_time_step() > T) {
            SlideState y;
            stepper.calc_state(T, y);
            if (y[4] >= 1.0) return bisect(t0, T);
            stepper.initialize(y, T, T - t0);
            break;
        }
        stepper.do_step(std::cref(rhs));
        const auto& y = stepper.current_state();
        positive_seen = positive_seen || y[0] > 0.0;
        if (y[4] >= 1.0) return bisect(t0, stepper.current_time());
    }
    const auto& y = stepper.current_state();
    if (!(y[0] > 0.0)) {
        throw NoDecay(positive_seen ? "coherence stops decaying: zeta00 plateau is not positive"
                                    : "zeta00 <= 0 throughout; coherence does not decay");
    }
    return stepper.current_time() + (1.0 - y[4]) / y[0];
}

}  // namespace

double decoherence_ratio_coefficient(double w0, double G) {
    return 3.0 / 8.0 * spectral_h_d2(w0, G) / spectral_h(w0, G);
}

DecoherenceTime decoherence_time(const SlidingAtomSpec& spec) {
    spec.validate();
    DecoherenceTime out;
    out.tau_D = decay_crossing(spec);
    SlidingAtomSpec rest = spec;
    rest.v = 0.0;
    out.ratio = spec.v == 0.0 ? 1.0 : out.tau_D / decay_crossing(rest);
    const double h = spectral_h(spec.omega0_tilde, spec.Gamma_tilde);
    out.ratio_markov = 1.0 - (spec.mu_a() / spec.mu_i()) * spec.v * spec.v *
                                 decoherence_ratio_coefficient(spec.omega0_tilde, spec.Gamma_tilde);
    out.tau_D_markov = 8.0 * pi / (spec.mu2_over_d3 * spec.mu_i() * h) * out.ratio_markov;
    return out;
}

namespace {

double open_phase(const SlidingAtomSpec& spec, const SlidingSample& s) {
    const double c = s.coherence_abs(spec.vartheta0);
    const double hc = std::cos(spec.vartheta0 / 2), hs = std::sin(spec.vartheta0 / 2);
    const cplx rho21 = c * std::exp(I * (2.0 * s.int_zeta01 + spec.omega0_tilde * s.t));
    const double r = std::hypot(s.rho_minus, 2.0 * c);
    double delta;  // rho22 - eps+
    if (s.rho_minus >= 0.0) delta = -0.5 * (s.rho_minus + r);
    else delta = -2.0 * c * c / (r - s.rho_minus);
    const cplx ov = rho21 * hs - delta * hc;
    const double norm = std::sqrt(delta * delta + c * c);
    if (norm == 0.0 || std::abs(ov) <= kOverlapTol * norm)
        throw OrthogonalEndpoints("eigenbranch at t = " + std::to_string(s.t) + " is orthogonal to the initial state");
    return wrap_phase(std::arg(ov) - s.phase_integral);
}

}  // namespace

double sliding_unitary_gp(double w0, double th, double t) {
    const double hc = std::cos(th / 2), hs = std::sin(th / 2);
    const cplx ov = 0.5 * std::sin(th) * hs * std::exp(I * w0 * t) + hc * hc * hc;
    return wrap_phase(std::arg(ov) - w0 * hs * hs * t);
}

SlidingPhase open_gp_sliding(const SlidingAtomSpec& spec, double t) {
    spec.validate();
    if (t < 0.0) throw DomainError("open_gp_sliding needs t >= 0");
    SlidingPhase out;
    out.phi_g = open_phase(spec, sliding_history(spec, {t}).front());
    out.phi_u = sliding_unitary_gp(spec.omega0_tilde, spec.vartheta0, t);
    out.delta_phi = wrap_phase(out.phi_g - out.phi_u);
    if (spec.v == 0.0) {
        out.delta_phi_v0 = out.delta_phi;
    } else {
        SlidingAtomSpec rest = spec;
        rest.v = 0.0;
        out.delta_phi_v0 = wrap_phase(open_phase(rest, sliding_history(rest, {t}).front()) - out.phi_u);
    }
    return out;
}

}  // namespace gph
