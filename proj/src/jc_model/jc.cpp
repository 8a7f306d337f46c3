#include <cmath>

#include "gph/jc_model.hpp"

namespace gph {

double JCParams::Omega_n() const { return std::sqrt(4.0 * g * g * (n + 1) + Delta * Delta); }
double JCParams::sin_theta() const { return 2.0 * g * std::sqrt(n + 1.0) / Omega_n(); }
double JCParams::period() const { return 2.0 * pi / Omega_n(); }

Mat2c jc_doublet_hamiltonian(const JCParams& p) {
    const double c = p.g * std::sqrt(p.n + 1.0);
    Mat2c h;
    h << 0.5 * p.Delta, c, c, -0.5 * p.Delta;
    return h;
}

DressedStates dressed_states(const JCParams& p) {
    // half-angle amplitudes from cos(theta_n) = Delta / Omega_n
    const double ct = p.cos_theta();
    const double c = std::sqrt(0.5 * (1.0 + ct)), s = std::sqrt(0.5 * (1.0 - ct));
    DressedStates d;
    d.plus << c, s;
    d.minus << s, -c;
    d.E_plus = 0.5 * p.Omega_n();
    d.E_minus = -0.5 * p.Omega_n();
    return d;
}

CVec embed_n0(const Vec2c& v) {
    CVec out = CVec::Zero(3);
    out(1) = v(0);
    out(2) = v(1);
    return out;
}

double adiabatic_gp_jc(const JCParams& p, Branch b) {
    return b == Branch::Plus ? pi * (1.0 - p.cos_theta()) : pi * (1.0 + p.cos_theta());
}

Vec2c unitary_state_jc(const JCParams& p, double t) {
    const double ct = p.cos_theta();
    const double c2 = 0.5 * (1.0 + ct), s2 = 0.5 * (1.0 - ct);
    const double E = 0.5 * p.Omega_n();
    Vec2c out;
    out << c2 * std::exp(-I * (E * t)) + s2 * std::exp(I * (E * t)), -I * p.sin_theta() * std::sin(E * t);
    return out;
}

double unitary_gp_jc(const JCParams& p, double t) {
    const double W = p.Omega_n();
    const double frac = t / p.period();
    const cplx r = 1.0 + std::exp(I * (2.0 * pi * frac)) * ((W - p.Delta) / (W + p.Delta));
    if (std::abs(r) <= kOverlapTol) throw OrthogonalEndpoints("JC state orthogonal to |+,n> at this time");
    return wrap_phase(-pi * (1.0 - p.cos_theta()) * frac + std::arg(r));
}

CMat jc_hamiltonian3(const JCParams& p) {
    CMat h = CMat::Zero(3, 3);
    h.block(1, 1, 2, 2) = jc_doublet_hamiltonian(JCParams{p.g, p.Delta, 0.0, 0.0, 0});
    return h;
}

std::vector<CMat> jc_jumps3(const JCParams& p) {
    CMat a = CMat::Zero(3, 3), sp = CMat::Zero(3, 3);
    a(0, 2) = std::sqrt(p.gamma);   // |-,1> -> |-,0>
    sp(1, 0) = std::sqrt(p.p);      // |-,0> -> |+,0>
    return {a, sp};
}

std::vector<CMat> lindblad_evolve_jc(const JCParams& p, const CMat& rho0, const std::vector<double>& times,
                                     const OdeControl& ctrl) {
    if (rho0.rows() != 3 || rho0.cols() != 3) throw InvalidState("JC density matrix must be 3x3");
    if (std::abs(rho0(0, 1)) > 1e-14 || std::abs(rho0(0, 2)) > 1e-14)
        throw BlockViolation("initial state couples |-,0> to the excited doublet");

    const double g = p.g, D = p.Delta, ga = p.gamma, pp = p.p;
    // y = {rho00, rho11, rho22, Re rho12, Im rho12}
    RealRhs rhs = [=](const RealState& y, RealState& dy, double) {
        const cplx r12(y[3], y[4]);
        const cplx r21 = std::conj(r12);
        const double r00 = y[0], r11 = y[1], r22 = y[2];
        dy[0] = -pp * r00 + ga * r22;
        dy[1] = (-I * g * (r21 - r12)).real() + pp * r00;
        dy[2] = (-I * g * (r12 - r21)).real() - ga * r22;
        const cplx d12 = -I * g * (r22 - r11) - I * D * r12 - 0.5 * ga * r12;
        dy[3] = d12.real();
        dy[4] = d12.imag();
    };
    RealState y0{rho0(0, 0).real(), rho0(1, 1).real(), rho0(2, 2).real(), rho0(1, 2).real(), rho0(1, 2).imag()};
    auto raw = integrate_ode(rhs, y0, 0.0, times, ctrl);
    std::vector<CMat> out;
    out.reserve(raw.size());
    for (const auto& y : raw) {
        CMat r = CMat::Zero(3, 3);
        r(0, 0) = y[0];
        r(1, 1) = y[1];
        r(2, 2) = y[2];
        r(1, 2) = cplx(y[3], y[4]);
        r(2, 1) = cplx(y[3], -y[4]);
        out.push_back(r);
    }
    return out;
}

std::pair<CVec, double> jc_upper_block_state(const CMat& rho) {
    const double a = rho(1, 1).real(), d = rho(2, 2).real();
    const cplx b = rho(1, 2);
    const double eps = 0.5 * (a + d) + std::sqrt(0.25 * (a - d) * (a - d) + std::norm(b));
    // Two equivalent eigenvector forms; keep the better conditioned one.
    Vec2c u, v;
    u << b, eps - a;
    v << eps - d, std::conj(b);
    Vec2c w = u.norm() >= v.norm() ? u : v;
    if (w.norm() == 0.0) w << 1.0, 0.0;  // rho block proportional to identity
    return {embed_n0(w.normalized()), eps};
}

OpenPhase open_gp_jc(const JCParams& p, double t, std::size_t samples_per_period) {
    const double T = p.period();
    const auto n = static_cast<std::size_t>(std::ceil(samples_per_period * t / T)) + 1;
    const auto times = linspace(0.0, t, std::max<std::size_t>(n, 2));
    CMat rho0 = CMat::Zero(3, 3);
    rho0(1, 1) = 1.0;
    const auto rhos = lindblad_evolve_jc(p, rho0, times);

    std::vector<CVec> branch;
    branch.reserve(rhos.size());
    for (const auto& r : rhos) branch.push_back(jc_upper_block_state(r).first);
    const cplx ends = branch.front().dot(branch.back());
    if (std::abs(ends) <= kOverlapTol) throw OrthogonalEndpoints("open JC branch returns orthogonal");

    OpenPhase out;
    out.phi_g = wrap_phase(std::arg(ends) - chain_dynamical_sum(branch));
    out.phi_u = unitary_gp_jc(p, t);
    out.delta_phi = wrap_phase(out.phi_g - out.phi_u);
    return out;
}

std::vector<double> jc_delta_scan(const JCParams& base, const std::vector<double>& deltas, double periods,
                                  std::size_t samples_per_period) {
    std::vector<double> out;
    out.reserve(deltas.size());
    for (double d : deltas) {
        JCParams q = base;
        q.Delta = d * base.g;
        out.push_back(open_gp_jc(q, periods * q.period(), samples_per_period).delta_phi);
    }
    return out;
}

std::size_t count_interior_extrema(const std::vector<double>& y, double flat_tol) {
    std::size_t count = 0;
    int last_sign = 0;
    for (std::size_t i = 0; i + 1 < y.size(); ++i) {
        const double d = y[i + 1] - y[i];
        const int s = d > flat_tol ? 1 : (d < -flat_tol ? -1 : 0);
        if (s == 0) continue;
        if (last_sign != 0 && s != last_sign) ++count;
        last_sign = s;
    }
    return count;
}

}  // namespace gph
