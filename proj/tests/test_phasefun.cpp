#include "doctest.h"
#include "helpers.hpp"

#include "gph/phasefun.hpp"

using namespace gph;
using namespace testutil;

namespace {

CVec ket(cplx a, cplx b) {
    CVec v(2);
    v << a, b;
    return v;
}

// Spin precessing about z at polar angle theta, H = (w/2) sigma_z.
StatePath precession(double theta, double T, std::size_t n, double w = 1.0) {
    StatePath p;
    p.times = linspace(0.0, T, n);
    for (double t : p.times)
        p.states.push_back(ket(std::cos(theta / 2) * std::exp(-I * (w * t / 2)), std::sin(theta / 2) * std::exp(I * (w * t / 2))));
    return p;
}

}  // namespace

TEST_CASE("pancharatnam_pair") {
    std::mt19937_64 rng(1);
    CVec a = random_state(rng, 2);
    CHECK(pancharatnam_pair(a, a) == doctest::Approx(0.0));
    CHECK(pancharatnam_pair(a, CVec(std::exp(I * (pi / 3)) * a)) == doctest::Approx(pi / 3));
    CHECK_THROWS_AS(pancharatnam_pair(ket(1, 0), ket(0, 1)), OrthogonalStates);
}

TEST_CASE("discrete_chain_phase basics and octant triangle") {
    std::mt19937_64 rng(2);
    CVec a = random_state(rng, 3), b = random_state(rng, 3);
    CHECK(std::abs(discrete_chain_phase({a, b})) < 1e-14);
    CHECK(std::abs(discrete_chain_phase({a, a, a, a})) < 1e-14);

    const double r = 1.0 / std::sqrt(2.0);
    CVec z = ket(1, 0), x = ket(r, r), y = ket(r, I * r);
    // The spherical triangle z -> x -> y spans pi/2 steradian.
    const double oracle = -0.5 * (pi / 2);
    CHECK(discrete_chain_phase({z, x, y}) == doctest::Approx(oracle).epsilon(1e-12));

    try {
        discrete_chain_phase({z, x, ket(r, -r), ket(0, 1)});
        FAIL("expected OrthogonalStates");
    } catch (const OrthogonalStates& e) {
        CHECK(e.link == 1);
    }
}

TEST_CASE("kinematic_gp on static-field precession") {
    auto p = precession(pi / 2, 2 * pi, 20001);
    CHECK(angle_diff(kinematic_gp(p), -pi) < 1e-7);
    auto q = precession(pi / 3, 2 * pi, 20001);
    CHECK(kinematic_gp(q) == doctest::Approx(-pi * (1 - std::cos(pi / 3))).epsilon(1e-7));
}

TEST_CASE("kinematic_gp vanishes for pure gauge motion") {
    std::mt19937_64 rng(3);
    CVec psi = random_state(rng, 3);
    StatePath p;
    for (int i = 0; i <= 400; ++i) {
        const double t = i / 400.0;
        p.times.push_back(t);
        p.states.push_back(std::exp(I * (3.0 * t + std::sin(5.0 * t))) * psi);
    }
    CHECK(std::abs(kinematic_gp(p)) < 1e-12);
}

TEST_CASE("kinematic_gp errors") {
    auto p = precession(pi / 2, 2 * pi, 5);
    CHECK_THROWS_AS(kinematic_gp(p), CoarsePath);
    StatePath q;
    for (int i = 0; i <= 200; ++i) {
        const double a = 0.5 * pi * i / 200.0;
        q.times.push_back(a);
        q.states.push_back(ket(std::cos(a), std::sin(a)));
    }
    CHECK_THROWS_AS(kinematic_gp(q), OrthogonalEndpoints);
}

TEST_CASE("phase functionals are gauge invariant") {
    std::mt19937_64 rng(4);
    auto p = precession(1.1, 2 * pi, 4001);
    const double k0 = kinematic_gp(p);
    const double c0 = discrete_chain_phase(p.states);
    StatePath q = p;
    for (auto& s : q.states) s *= std::exp(I * random_phase(rng));
    CHECK(angle_diff(kinematic_gp(q), k0) < 1e-9);
    CHECK(angle_diff(nojump_gp(q), k0) < 1e-9);
    CHECK(angle_diff(discrete_chain_phase(q.states), c0) < 1e-9);

    // Unnormalized path with drifting norms and random phases.
    StatePath u = p;
    u.normalized = false;
    for (std::size_t i = 0; i < u.states.size(); ++i) u.states[i] *= std::exp(-0.3 * u.times[i]) * std::exp(I * random_phase(rng));
    CHECK(angle_diff(nojump_gp(u), k0) < 1e-9);
}

TEST_CASE("kinematic_gp is reparametrization invariant") {
    const double theta = 0.9, T = 2 * pi;
    const std::size_t n = 20001;
    auto p = precession(theta, T, n);
    StatePath q;
    for (std::size_t i = 0; i < n; ++i) {
        const double s = static_cast<double>(i) / (n - 1);
        const double t = T * (s + 0.12 * std::sin(2 * pi * s) / (2 * pi));
        q.times.push_back(t);
        q.states.push_back(ket(std::cos(theta / 2) * std::exp(-I * (t / 2)), std::sin(theta / 2) * std::exp(I * (t / 2))));
    }
    CHECK(angle_diff(kinematic_gp(p), kinematic_gp(q)) < 1e-6);
}

TEST_CASE("chain phase converges to the continuum with order two") {
    // A non-geodesic, non-uniform curve: polar angle oscillates while precessing.
    auto curve = [](std::size_t n) {
        std::vector<CVec> s;
        for (std::size_t i = 0; i < n; ++i) {
            const double t = 2 * pi * static_cast<double>(i) / (n - 1);
            const double th = 1.0 + 0.3 * std::sin(2 * t);
            s.push_back(ket(std::cos(th / 2) * std::exp(-I * (t / 2)), std::sin(th / 2) * std::exp(I * (t / 2))));
        }
        return s;
    };
    // Continuum value: -(1/2) * solid angle = -(1/2) int (1 - cos th) dphi.
    double exact = 0.0;
    const int m = 200000;
    for (int i = 0; i < m; ++i) {
        const double t = 2 * pi * (i + 0.5) / m;
        exact += (1 - std::cos(1.0 + 0.3 * std::sin(2 * t))) * 2 * pi / m;
    }
    exact *= -0.5;
    const double e1 = angle_diff(discrete_chain_phase(curve(201)), exact);
    const double e2 = angle_diff(discrete_chain_phase(curve(401)), exact);
    const double e3 = angle_diff(discrete_chain_phase(curve(801)), exact);
    CHECK(e3 < 1e-4);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(std::log2(e2 / e3) == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("tong_gp reduces to kinematic_gp for a unitary pure path") {
    auto p = precession(1.2, 2 * pi, 2001);
    std::vector<std::pair<double, CMat>> rho;
    for (std::size_t i = 0; i < p.states.size(); ++i) rho.emplace_back(p.times[i], p.states[i] * p.states[i].adjoint());
    CHECK(angle_diff(tong_gp(rho), kinematic_gp(p)) < 1e-7);
    CHECK(angle_diff(tong_gp(rho, TongVariant::PureInitial), kinematic_gp(p)) < 1e-7);
}

TEST_CASE("tong_gp on a mixed unitary path and its error modes") {
    // rho = 0.8 |psi><psi| + 0.2 |psi_perp><psi_perp| under the same precession.
    const double theta = 1.2;
    auto p = precession(theta, 2 * pi, 8001);
    std::vector<std::pair<double, CMat>> rho;
    for (std::size_t i = 0; i < p.states.size(); ++i) {
        CVec perp = ket(-std::conj(p.states[i](1)), std::conj(p.states[i](0)));
        rho.emplace_back(p.times[i], 0.8 * p.states[i] * p.states[i].adjoint() + 0.2 * perp * perp.adjoint());
    }
    // Oracle: sum of weighted branch phase factors.
    const double g1 = -pi * (1 - std::cos(theta)), g2 = -pi * (1 + std::cos(theta));
    const double oracle = std::arg(0.8 * std::exp(I * g1) + 0.2 * std::exp(I * g2));
    CHECK(angle_diff(tong_gp(rho, TongVariant::General), oracle) < 1e-6);
    CHECK_THROWS_AS(tong_gp(rho, TongVariant::PureInitial), RankMismatch);

    std::vector<std::pair<double, CMat>> flat;
    for (int i = 0; i < 5; ++i) flat.emplace_back(i, CMat(0.5 * CMat::Identity(2, 2)));
    CHECK_THROWS_AS(tong_gp(flat, TongVariant::General), DegenerateSpectrum);
}

TEST_CASE("trajectory_gp on simple records") {
    auto p = precession(1.0, 2 * pi, 2001);
    TrajectoryRecord r;
    r.samples = p;
    CHECK(angle_diff(trajectory_gp(r), nojump_gp(p)) < 1e-12);

    // A jump whose operator projects onto the current state adds no phase.
    TrajectoryRecord j;
    const std::size_t at = 1000;
    for (std::size_t i = 0; i <= at; ++i) {
        j.samples.times.push_back(p.times[i]);
        j.samples.states.push_back(p.states[i]);
    }
    JumpEvent ev;
    ev.time = p.times[at];
    ev.pre = p.states[at];
    ev.post = (CMat(3.0 * p.states[at] * p.states[at].adjoint()) * p.states[at]).normalized();
    CHECK(std::abs(pancharatnam_pair(ev.pre, ev.post)) < 1e-14);
    j.jumps.push_back(ev);
    j.jump_sample.push_back(at + 1);
    for (std::size_t i = at; i < p.states.size(); ++i) {
        j.samples.times.push_back(p.times[i]);
        j.samples.states.push_back(i == at ? ev.post : p.states[i]);
    }
    CHECK(angle_diff(trajectory_gp(j), nojump_gp(p)) < 1e-12);
}

TEST_CASE("make_distribution") {
    auto d = make_distribution(std::vector<double>(50, 0.3), 64);
    int occupied = 0;
    for (double w : d.weights) occupied += w > 0;
    CHECK(occupied == 1);
    CHECK(d.circular_mean() == doctest::Approx(0.3));

    std::vector<double> grid;
    for (int i = 0; i < 360; ++i) grid.push_back(-pi + 2 * pi * i / 360.0);
    auto u = make_distribution(grid, 64);
    CHECK(u.mean_resultant_length() < 1e-10);
    double total = 0.0;
    for (double w : u.weights) total += w;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));

    // Values wrap into the principal range.
    auto w = make_distribution({3 * pi - 0.1, -0.1 - 2 * pi}, 8);
    CHECK(w.weights.back() == doctest::Approx(0.5));

    CHECK_THROWS_AS(make_distribution({}, 64), EmptyEnsemble);

    auto peaks = make_distribution({0.1, 0.1, 0.1, 2.0, 2.0}, 16).peaks();
    CHECK(peaks.size() == 2);
}
