#include <cstdio>
#include <fstream>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "doctest.h"
#include "friction_oracle.hpp"
#include "helpers.hpp"

#include "gph/dielectric_motion.hpp"
#include "gph/spin_rotating.hpp"

using namespace gph;
using namespace testutil;

namespace {

// Generated by tests/oracles/gen_sliding.py.
struct E1Ref {
    cplx z, value;
};
const E1Ref kE1[] = {
    {{0.5, 0.0}, {0.55977359477616081, 0.0}},
    {{2.0, 1.0}, {0.0093881613104844667, -0.044462994141385386}},
    {{-1.0, 0.5}, {-1.8831483186261845, -1.8336478949049037}},
    {{0.0, 3.9}, {0.12349934920781513, 0.20570503365290884}},
    {{-3.5, 0.2}, {-13.790499356989664, -1.2567363614781671}},
    {{4.1, 0.0}, {0.0033488806360697113, 0.0}},
    {{10.0, -3.0}, {-3.9726156053423149e-6, -5.1088439463994092e-7}},
    {{-5.0, 0.5}, {-37.262468961367937, 11.283268496460262}},
    {{-8.0, 3.0}, {333.79978535775956, 212.2173518535978}},
    {{0.1, -20.0}, {-0.040080718097703844, 0.020602255715676887}},
    {{25.0, 25.0}, {3.1027333742617506e-13, -2.2803022977679165e-13}},
    {{-0.5, 0.866}, {-0.89252134733926869, -1.0223418137226403}},
};

struct FreqRef {
    int m;
    double G, tau, value;
};
const FreqRef kFreq[] = {
    {0, 0.003, 0.5, 1.376617341397546},    {0, 0.003, 3.0, -1.5482816415340264},  {0, 0.003, 20.0, 0.6220937051313755},
    {1, 0.003, 0.5, 0.7525153485898953},   {1, 0.003, 3.0, 0.22068098589763796},  {1, 0.003, 20.0, 1.3916560015847512},
    {0, 1.0, 0.5, 0.935811845627032},      {0, 1.0, 3.0, -0.4173199471105365},    {0, 1.0, 20.0, -0.0024592268453983894},
    {1, 1.0, 0.5, 0.5927324595771417},     {1, 1.0, 3.0, 0.20929705576910837},    {1, 1.0, 20.0, -8.2274633187337e-05},
    {0, 1.9, 0.5, 0.7186480712969141},     {0, 1.9, 3.0, -0.1511762048085893},    {0, 1.9, 20.0, -0.004870673870813166},
    {1, 1.9, 0.5, 0.4864455618319763},     {1, 1.9, 3.0, 0.23443239172961713},    {1, 1.9, 20.0, -1.0771648503715703e-09},
    {0, 3.0, 0.5, 0.5586656590853962},     {0, 3.0, 3.0, -0.0333017684721958},    {0, 3.0, 20.0, -0.008636208187051188},
    {1, 3.0, 0.5, 0.39062269543217476},    {1, 3.0, 3.0, 0.22307307170873392},    {1, 3.0, 20.0, 0.0003380027781053419},
};

SlidingAtomSpec base_spec() {
    SlidingAtomSpec s;
    s.omega0_tilde = 0.2;
    s.Gamma_tilde = 1.0;
    s.mu2_over_d3 = 0.005;
    return s;
}

}  // namespace

TEST_CASE("exponential integral against reference table") {
    for (const auto& r : kE1) CHECK(std::abs(expint_e1(r.z) - r.value) <= 1e-12 * std::abs(r.value));
    // Conjugate symmetry off the cut.
    for (cplx z : {cplx{1.5, 2.0}, cplx{-6.0, 1.0}, cplx{7.0, -0.5}})
        CHECK(std::abs(expint_e1(std::conj(z)) - std::conj(expint_e1(z))) < 1e-13 * std::abs(expint_e1(z)));
    // Series and continued fraction agree across the switch radius.
    for (double ang : {0.3, 1.2, 2.0, -1.0}) {
        const cplx a = std::polar(3.999999, ang), b = std::polar(4.000001, ang);
        CHECK(std::abs(expint_e1(a) - expint_e1(b)) < 1e-5 * std::abs(expint_e1(a)));
    }
    CHECK_THROWS_AS(expint_e1(0.0), DomainError);
}

TEST_CASE("frequency integral") {
    for (const auto& r : kFreq) CHECK(std::abs(frequency_integral(r.m, r.G, r.tau) - r.value) < 1e-9);

    // tau = 0: direct integral of the spectral density.
    for (double G : {0.5, 1.0, 1.9995, 3.0}) {
        auto L = [G](double w) { return G * w / ((w * w - 1) * (w * w - 1) + G * G * w * w); };
        const double ref = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
            L, 0.0, std::numeric_limits<double>::infinity(), 20, 1e-13);
        CHECK(frequency_integral(0, G, 0.0) == doctest::Approx(ref).epsilon(1e-9));
        CHECK(frequency_integral(1, G, 0.0) == 0.0);
    }

    // Ooura Fourier quadrature as a second reference, including both sides of Gamma = 2.
    boost::math::quadrature::ooura_fourier_cos<double> oc;
    boost::math::quadrature::ooura_fourier_sin<double> os;
    for (double G : {0.7, 1.5, 1.998, 2.0, 2.002, 4.0}) {
        auto L = [G](double w) { return G * w / ((w * w - 1) * (w * w - 1) + G * G * w * w); };
        for (double tau : {0.8, 7.0}) {
            CHECK(std::abs(frequency_integral(0, G, tau) - oc.integrate(L, tau).first) < 1e-9);
            CHECK(std::abs(frequency_integral(1, G, tau) - os.integrate(L, tau).first) < 1e-9);
        }
    }
    // Large tau: no overflow, algebraic tail -Gamma / tau^2.
    for (double G : {0.003, 1.0, 3.0}) {
        const double tau = 5e4;
        CHECK(std::isfinite(frequency_integral(0, G, tau)));
        if (G >= 1.0) CHECK(frequency_integral(0, G, tau) * tau * tau == doctest::Approx(-G).epsilon(1e-3));
    }
    CHECK_THROWS_AS(frequency_integral(0, 1.0, -1.0), DomainError);
    CHECK(omega_r(1.0).real() == doctest::Approx(std::sqrt(3.0) / 2));
    CHECK(omega_r(3.0).real() == 0.0);
}

TEST_CASE("spectral function and velocity profile") {
    for (double G : {0.003, 1.0, 2.5}) CHECK(spectral_h(1.0, G) == doctest::Approx(1.0 / G));
    CHECK(spectral_h(1e8, 1.0) < 1e-20);
    CHECK(spectral_h(0.3, 1e-12) < 1e-11);
    for (auto [w, G] : {std::pair{0.2, 1.0}, std::pair{8.0, 1.0}, std::pair{1.1, 0.3}}) {
        const double h = 1e-4 * w;
        const double fd = (spectral_h(w + h, G) - 2 * spectral_h(w, G) + spectral_h(w - h, G)) / (h * h);
        CHECK(spectral_h_d2(w, G) == doctest::Approx(fd).epsilon(1e-5));
    }

    SlidingAtomSpec s;
    s.n_hat = Eigen::Vector3d::UnitZ();
    CHECK(s.mu_i() == 2.0);
    CHECK(s.mu_a() == 4.0);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> g;
    for (int i = 0; i < 20; ++i) {
        Eigen::Vector3d n(g(rng), g(rng), g(rng));
        n.normalize();
        s.n_hat = n;
        CHECK(velocity_profile(n, 0.0) == doctest::Approx(s.mu_i() / 8));
        const double x = 1e-2;
        const double taylor = s.mu_i() / 8 - 3.0 / 64 * s.mu_a() * x * x;
        CHECK(std::abs(velocity_profile(n, x) - taylor) < 1e-7);
    }
    s.n_hat = Eigen::Vector3d(1, 1, 0);
    CHECK_THROWS_AS(s.validate(), InvalidPolarization);
}

TEST_CASE("master equation generator reproduces the population and coherence equations") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-1, 1);
    const Mat2c sp = sigma_plus<double>(), sm = sigma_minus<double>(), sz = sigma_z<double>();
    for (int trial = 0; trial < 20; ++trial) {
        const double z00 = u(rng), z11 = u(rng), z10 = u(rng), w0 = 0.2;
        const CMat rho = random_density(rng, 2);
        auto comm = [](const CMat& a, const CMat& b) -> CMat { return a * b - b * a; };
        auto acomm = [](const CMat& a, const CMat& b) -> CMat { return a * b + b * a; };
        CMat inner = z00 * comm(sp, comm(sm, rho)) + z11 * comm(sp, acomm(sm, rho));
        CMat drho = -I * comm(0.5 * w0 * sz, rho) - I * z10 * comm(sz, rho) - (inner + CMat(inner.adjoint()));
        CHECK(std::abs(drho(0, 0) - (-2 * (z00 + z11) * rho(0, 0) + 2 * (z00 - z11) * rho(1, 1))) < 1e-12);
        CHECK(std::abs(drho(0, 1) - (-(2 * z00 + 2.0 * I * z10 + I * w0) * rho(0, 1))) < 1e-12);
    }
}

TEST_CASE("zeta kernels: quadrature, evolution and Markov limit agree") {
    auto s = base_spec();
    s.v = 0.01;
    for (int l : {0, 1})
        for (int m : {0, 1}) CHECK(zeta_kernel(s, l, m, 0.0) == 0.0);

    const std::vector<double> ts{3.0, 40.0, 250.0};
    const auto hist = sliding_history(s, ts);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double scale = markov_zeta(s).zeta00;
        CHECK(std::abs(zeta_kernel(s, 0, 0, ts[i]) - hist[i].zeta00) < 1e-6 * scale);
        CHECK(std::abs(zeta_kernel(s, 0, 1, ts[i]) - hist[i].zeta01) < 1e-6 * scale);
        CHECK(std::abs(zeta_kernel(s, 1, 0, ts[i]) - hist[i].zeta10) < 1e-6 * scale);
        CHECK(std::abs(zeta_kernel(s, 1, 1, ts[i]) - hist[i].zeta11) < 1e-6 * scale);
    }

    // v = 0: both diagonal plateaus equal the Markov value.
    s.v = 0.0;
    const auto mz = markov_zeta(s);
    CHECK(mz.zeta00 == doctest::Approx(s.mu2_over_d3 / pi * s.mu_i() / 8 * spectral_h(0.2, 1.0)));
    const auto plateau = sliding_history(s, {kernel_truncation_time(s)}).front();
    CHECK(plateau.zeta00 == doctest::Approx(mz.zeta00).epsilon(1e-6));
    CHECK(plateau.zeta11 == doctest::Approx(mz.zeta11).epsilon(1e-6));

    struct P {
        double w0, G, v;
        Eigen::Vector3d n;
    };
    const P grid[] = {{0.2, 1.0, 0.003, Eigen::Vector3d::UnitX()},
                      {0.2, 1.0, 0.02, Eigen::Vector3d::UnitY()},
                      {0.5, 1.0, 0.05, Eigen::Vector3d::UnitZ()},
                      {1.5, 0.5, 0.1, Eigen::Vector3d::UnitX()},
                      {0.1, 2.5, 0.005, Eigen::Vector3d(1, 1, 1).normalized()}};
    for (const auto& p : grid) {
        SlidingAtomSpec q = base_spec();
        q.omega0_tilde = p.w0;
        q.Gamma_tilde = p.G;
        q.v = p.v;
        q.n_hat = p.n;
        const auto h = sliding_history(q, {kernel_truncation_time(q)}).front();
        const auto mk = markov_zeta(q);
        CHECK(mk.warnings.empty());
        CHECK(h.zeta00 == doctest::Approx(mk.zeta00).epsilon(0.01));
        CHECK(h.zeta11 == doctest::Approx(mk.zeta11).epsilon(0.01));
    }
    s.v = 0.15;
    CHECK(!markov_zeta(s).warnings.empty());
}

TEST_CASE("sliding dynamics") {
    auto s = base_spec();
    s.mu2_over_d3 = 0.0;
    s.vartheta0 = 1.1;
    for (const auto& h : sliding_history(s, linspace(0, 500, 11))) {
        CHECK(h.rho_minus == doctest::Approx(std::cos(1.1)));
        CHECK(h.coherence_abs(1.1) == doctest::Approx(std::sin(1.1) / 2));
    }

    for (double v : {0.003, 0.3}) {
        s = base_spec();
        s.v = v;
        const auto times = linspace(0, 2e5, 400);
        const auto hist = sliding_history(s, times);
        double prev = 1.0;
        for (const auto& h : hist) {
            const CMat rho = sliding_density(s, h);
            const auto d = diagnose(rho);
            CHECK(d.trace_error < 1e-15);
            CHECK(d.min_eigenvalue > -1e-9);
            const double c = h.coherence_abs(s.vartheta0);
            if (h.zeta00 >= 0.0) CHECK(c <= prev * (1 + 1e-12));
            prev = c;
        }
        CHECK(evolve_sliding(s, times).size() == times.size());
    }

    // Sub-critical: the excited population vanishes; super-critical: mixed steady state.
    s = base_spec();
    s.v = 0.015 * s.omega0_tilde;
    CHECK(steady_excited_population(s) < 1e-4);
    const double T = kernel_truncation_time(s);
    const double late = T + 30.0 / markov_zeta(s).zeta00;
    CHECK(sliding_density(s, sliding_history(s, {late}).front())(0, 0).real() < 1e-4);

    s.v = 1.5 * s.omega0_tilde;
    const double p_inf = steady_excited_population(s);
    CHECK(p_inf > 0.01);
    const auto far = sliding_history(s, {T + 40.0 / sliding_history(s, {T}).front().zeta00}).front();
    const CMat rho = sliding_density(s, far);
    CHECK(rho(0, 0).real() == doctest::Approx(p_inf).epsilon(1e-6));
    const double purity = (rho * rho).trace().real();
    CHECK(purity == doctest::Approx(p_inf * p_inf + (1 - p_inf) * (1 - p_inf)).epsilon(1e-6));
}

TEST_CASE("decoherence time") {
    auto s = base_spec();
    const auto d0 = decoherence_time(s);
    CHECK(d0.ratio == 1.0);
    CHECK(d0.tau_D == doctest::Approx(d0.tau_D_markov).epsilon(0.01));
    const auto at = sliding_history(s, {d0.tau_D}).front();
    CHECK(std::exp(-2 * at.int_zeta00) == doctest::Approx(std::exp(-2.0)).epsilon(1e-6));

    s.v = 0.003;
    const auto d = decoherence_time(s);
    CHECK(d.ratio == doctest::Approx(d.ratio_markov).epsilon(1e-6));
    CHECK(d.ratio < 1.0);

    s.mu2_over_d3 = 0.0;
    CHECK_THROWS_AS(decoherence_time(s), NoDecay);
}

TEST_CASE("decoherence ratio coefficients for the tabulated presets") {
    const auto presets = builtin_material_presets();
    const auto& nsi = find_preset(presets, "nSi");
    const double rb = decoherence_ratio_coefficient(nsi.atom_omega0.at("Rb").front(), nsi.Gamma_tilde);
    CHECK(rb == doctest::Approx(0.072).epsilon(0.1));
    const auto& nv = nsi.atom_omega0.at("NV");
    const double best = std::min(std::abs(decoherence_ratio_coefficient(nv[0], nsi.Gamma_tilde) - 2.14),
                                 std::abs(decoherence_ratio_coefficient(nv[1], nsi.Gamma_tilde) - 2.14));
    CHECK(best / 2.14 < 0.1);
}

TEST_CASE("sliding geometric phase") {
    auto s = base_spec();
    s.mu2_over_d3 = 0.0;
    for (double th : {0.3, 1.0, pi / 2, 2.4}) {
        s.vartheta0 = th;
        const double t = s.natural_period();
        CHECK(angle_diff(open_gp_sliding(s, t).phi_g, -pi * (1 - std::cos(th))) < 1e-9);

        // Static field of the spin model, phase from the sampled propagator.
        RotatingFieldParams p;
        p.omega = s.omega0_tilde;
        StatePath path;
        Vec2c psi0(std::cos(th / 2), std::sin(th / 2));
        for (double x : linspace(0, 0.77 * t, 4001)) {
            path.times.push_back(x);
            path.states.push_back(propagate_exact(p, psi0, x));
        }
        CHECK(angle_diff(kinematic_gp(path), sliding_unitary_gp(s.omega0_tilde, th, 0.77 * t)) < 1e-6);
    }

    // Integral formula against the eigenvector-chain functional on sampled states.
    s = base_spec();
    s.v = 0.05;
    s.vartheta0 = 1.2;
    const double t = 40.0 * s.natural_period();
    const auto times = linspace(0, t, 160001);
    const auto rhos = evolve_sliding(s, times);
    std::vector<std::pair<double, CMat>> path;
    for (std::size_t i = 0; i < times.size(); ++i) path.emplace_back(times[i], rhos[i].mat());
    CHECK(angle_diff(tong_gp(path, TongVariant::PureInitial), open_gp_sliding(s, t).phi_g) < 1e-5);

    s = base_spec();
    s.v = 1e-6;
    CHECK(open_gp_sliding(s, 50 * s.natural_period()).ratio() == doctest::Approx(1.0).epsilon(1e-8));

    // Quadratic departure of the normalized correction at t = 50 natural periods.
    std::vector<double> vs, ys;
    for (double f : {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3}) {
        s.v = f * s.omega0_tilde;
        vs.push_back(s.v);
        ys.push_back(s.v == 0.0 ? 0.0 : open_gp_sliding(s, 50 * s.natural_period()).ratio() - 1.0);
    }
    double num = 0, den = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        num += ys[i] * vs[i] * vs[i];
        den += std::pow(vs[i], 4);
    }
    const double c2 = num / den;
    double res = 0, norm = 0;
    for (std::size_t i = 0; i < vs.size(); ++i) {
        res += std::pow(ys[i] - c2 * vs[i] * vs[i], 2);
        norm += ys[i] * ys[i];
    }
    CHECK(std::sqrt(res / norm) < 0.05);
}

TEST_CASE("friction force") {
    CHECK(friction_force(0.0, 1, 1, 1, 0.1) == 0.0);
    CHECK(friction_force(3.0, 1, 1, 1, 0.2) == doctest::Approx(3.0 * friction_force(1.0, 1, 1, 1, 0.2)).epsilon(1e-12));
    for (const auto& r : kFriction) {
        const double f = friction_force(r.l2g2, r.omega, r.Omega, r.d, r.v);
        CHECK(f == doctest::Approx(r.value).epsilon(1e-9));
        CHECK(f == doctest::Approx(friction_fixed_grid(r.l2g2, r.omega, r.Omega, r.d, r.v)).epsilon(1e-5));
    }
    CHECK_THROWS_AS(friction_force(1, 1e-14, 1, 1, 1.0 - 1e-15), BranchError);
    CHECK_THROWS_AS(friction_force(1, 1, 1, 1, 1.5), DomainError);
}

TEST_CASE("material presets") {
    const auto builtin = builtin_material_presets();
    const auto loaded = load_material_presets(std::string(GPHASE_DATA_DIR) + "/materials.json");
    REQUIRE(loaded.size() == builtin.size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        CHECK(loaded[i].name == builtin[i].name);
        CHECK(loaded[i].omega_s == builtin[i].omega_s);
        CHECK(loaded[i].Gamma_tilde == builtin[i].Gamma_tilde);
        CHECK(loaded[i].atom_omega0 == builtin[i].atom_omega0);
        CHECK(loaded[i].d_min_m == builtin[i].d_min_m);
        CHECK(loaded[i].d_max_m == builtin[i].d_max_m);
    }
    const auto& au = find_preset(loaded, "Au");
    CHECK(au.omega_s == 9.7e15);
    CHECK(au.Gamma_tilde == 0.003);
    CHECK(find_preset(loaded, "nSi").atom_omega0.at("Rb") == std::vector<double>{8.0});
    CHECK_THROWS_AS(find_preset(loaded, "Ag"), ConfigError);
    CHECK_THROWS_AS(load_material_presets("/nonexistent/materials.json"), ConfigError);

    const std::string bad = "/tmp/gphase_bad_materials.json";
    std::ofstream(bad) << R"({"version": 2, "materials": []})";
    CHECK_THROWS_AS(load_material_presets(bad), ConfigError);
    std::remove(bad.c_str());
}
