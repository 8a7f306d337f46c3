#include <cmath>
#include <string>

#include "gph/trajectories.hpp"

namespace gph {

namespace {

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

CounterRng::CounterRng(std::uint64_t master_seed, std::uint64_t stream)
    : key_(mix64(mix64(master_seed) ^ (stream * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t CounterRng::next_u64() { return mix64(key_ ^ mix64(counter_++)); }

double CounterRng::uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

const char* channel_name(int channel) {
    switch (channel) {
        case kJumpMinus: return "minus";
        case kJumpPlus: return "plus";
        case kJumpDephasing: return "dephasing";
        case kJumpZ: return "z";
        default: return "none";
    }
}

JumpChannelSet JumpChannelSet::from_dissipation(double Gamma, double gamma_z) {
    JumpChannelSet ch;
    ch.gamma_minus = Gamma;
    ch.gamma_plus = 0.0;
    ch.gamma_d = 0.32 * Gamma;
    ch.gamma_z = gamma_z;
    return ch;
}

double JumpChannelSet::effective_gamma_d() const {
    return convention == DephasingConvention::Half ? 0.5 * gamma_d : gamma_d;
}

double JumpChannelSet::effective_gamma_z() const {
    return convention == DephasingConvention::Half ? 0.5 * gamma_z : gamma_z;
}

double JumpChannelSet::total_rate() const {
    return gamma_minus + gamma_plus + effective_gamma_d() + effective_gamma_z();
}

void JumpChannelSet::validate() const {
    for (double g : {gamma_minus, gamma_plus, gamma_d, gamma_z})
        if (!(g >= 0.0) || !std::isfinite(g)) throw DomainError("jump rates must be finite and non-negative");
}

std::array<Mat2c, kJumpChannelCount> build_jump_operators(const RotatingFieldParams& p, const JumpChannelSet& ch,
                                                         double t) {
    const auto es = instantaneous_eigenstates(p, t);
    const Mat2c sx = sigma_x();
    const cplx x_mp = es.minus.dot(sx * es.plus);
    const cplx x_pm = es.plus.dot(sx * es.minus);
    const cplx x_pp = es.plus.dot(sx * es.plus);
    const cplx x_mm = es.minus.dot(sx * es.minus);
    const Mat2c Pp = es.plus * es.plus.adjoint();
    const Mat2c Pm = es.minus * es.minus.adjoint();

    std::array<Mat2c, kJumpChannelCount> L;
    L[kJumpMinus] = std::sqrt(ch.gamma_minus) * x_mp * (es.minus * es.plus.adjoint());
    L[kJumpPlus] = std::sqrt(ch.gamma_plus) * x_pm * (es.plus * es.minus.adjoint());
    L[kJumpDephasing] = std::sqrt(ch.effective_gamma_d()) * (x_pp * Pp + x_mm * Pm);
    L[kJumpZ] = std::sqrt(ch.effective_gamma_z()) * sigma_z();
    return L;
}

Mat2c effective_hamiltonian(const RotatingFieldParams& p, const JumpChannelSet& ch, double t) {
    Mat2c H = spin_hamiltonian(p, t);
    for (const Mat2c& L : build_jump_operators(p, ch, t)) H -= 0.5 * I * (L.adjoint() * L);
    return H;
}

namespace {

// Amplitudes and matrix elements in the eigenbasis at one instant:
// e+ = (c, s u), e- = (s, -c u) with u = exp(i azimuth).
struct LocalFrame {
    double c, s;
    cplx u;
    cplx x_mp;    // <-|sigma_x|+>
    double x_pp;  // <+|sigma_x|+> = -<-|sigma_x|->

    LocalFrame(double c_, double s_, double azimuth) : c(c_), s(s_), u(std::polar(1.0, azimuth)) {
        x_mp = s * s * u - c * c * std::conj(u);
        x_pp = 2.0 * c * s * u.real();
    }
    cplx a_plus(const Vec2c& v) const { return c * v(0) + s * std::conj(u) * v(1); }
    cplx a_minus(const Vec2c& v) const { return s * v(0) - c * std::conj(u) * v(1); }
    Vec2c plus() const { return Vec2c(c, s * u); }
    Vec2c minus() const { return Vec2c(s, -c * u); }
};

double azimuth_at(const RotatingFieldParams& p, double t) { return p.phase0 + p.signed_Omega() * t; }

}  // namespace

StepOutcome mc_step(const Vec2c& state, double t, double dt, const RotatingFieldParams& p, const JumpChannelSet& ch,
                    CounterRng& rng) {
    const double c = std::cos(0.5 * p.theta), s = std::sin(0.5 * p.theta);
    const double gd = ch.effective_gamma_d(), gz = ch.effective_gamma_z();
    const double norm2 = state.squaredNorm();

    const LocalFrame f(c, s, azimuth_at(p, t));
    const cplx ap = f.a_plus(state), am = f.a_minus(state);
    const double xmp2 = std::norm(f.x_mp);

    StepOutcome out;
    out.p_channel[kJumpMinus] = dt * ch.gamma_minus * xmp2 * std::norm(ap);
    out.p_channel[kJumpPlus] = dt * ch.gamma_plus * xmp2 * std::norm(am);
    out.p_channel[kJumpDephasing] = dt * gd * f.x_pp * f.x_pp * norm2;
    out.p_channel[kJumpZ] = dt * gz * norm2;
    for (double q : out.p_channel) out.p_jump += q;
    if (out.p_jump > kMaxJumpProbability)
        throw StepTooLarge("jump probability " + std::to_string(out.p_jump) + " exceeds 1e-2 at t = " +
                           std::to_string(t));

    // H_eff is diagonal in the eigenbasis at the step midpoint.
    const LocalFrame m(c, s, azimuth_at(p, t + 0.5 * dt));
    const double mxmp2 = std::norm(m.x_mp), common = gd * m.x_pp * m.x_pp + gz;
    const cplx lam_p{0.5 * p.omega, -0.5 * (ch.gamma_minus * mxmp2 + common)};
    const cplx lam_m{-0.5 * p.omega, -0.5 * (ch.gamma_plus * mxmp2 + common)};
    const Vec2c smooth = std::exp(-I * dt * lam_p) * m.a_plus(state) * m.plus() +
                         std::exp(-I * dt * lam_m) * m.a_minus(state) * m.minus();
    out.p_smooth = smooth.squaredNorm();

    const double r = rng.uniform();
    if (r >= out.p_jump) {
        out.state = smooth / std::sqrt(out.p_smooth);
        return out;
    }
    double acc = 0.0;
    int chosen = -1;
    for (int a = 0; a < kJumpChannelCount; ++a) {
        if (out.p_channel[a] <= 0.0) continue;
        chosen = a;
        acc += out.p_channel[a];
        if (r < acc) break;
    }
    out.event = chosen;
    Vec2c post;
    switch (chosen) {
        case kJumpMinus: post = (f.x_mp * ap) * f.minus(); break;
        case kJumpPlus: post = (std::conj(f.x_mp) * am) * f.plus(); break;
        case kJumpDephasing: post = f.x_pp * (ap * f.plus() - am * f.minus()); break;
        default: post = sigma_z() * state; break;
    }
    out.state = post / post.norm();
    return out;
}

}  // namespace gph
