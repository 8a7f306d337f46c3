#include "doctest.h"
#include "helpers.hpp"

#include "gph/spin_rotating.hpp"

using namespace gph;
using namespace testutil;

TEST_CASE("instantaneous eigenstates") {
    RotatingFieldParams p{1.0, 0.1, 0.0, +1, 0.0};
    auto e = instantaneous_eigenstates(p, 0.3);
    CHECK(std::abs(e.plus(0)) == doctest::Approx(1.0));
    CHECK(std::abs(e.minus(1)) == doctest::Approx(1.0));

    p.theta = pi / 2;
    auto h = instantaneous_eigenstates(p, 0.0);
    const double r = 1 / std::sqrt(2.0);
    CHECK(std::abs(h.plus(0) - r) < 1e-14);
    CHECK(std::abs(h.plus(1) - r) < 1e-14);
    CHECK(std::abs(h.minus(1) + r) < 1e-14);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 200; ++i) {
        RotatingFieldParams q{1.0, u(rng), pi * u(rng), u(rng) < 0.5 ? 1 : -1, 0.0};
        const double t = 20 * u(rng);
        auto es = instantaneous_eigenstates(q, t);
        Mat2c H = spin_hamiltonian(q, t);
        CHECK((H * es.plus - 0.5 * es.plus).norm() < 1e-12);
        CHECK((H * es.minus + 0.5 * es.minus).norm() < 1e-12);
    }
}

TEST_CASE("berry phase values") {
    CHECK(berry_phase(0.0, Branch::Plus) == doctest::Approx(0.0));
    CHECK(berry_phase(pi / 2, Branch::Plus) == doctest::Approx(-pi));
    CHECK(berry_phase(pi / 3, Branch::Plus) == doctest::Approx(-pi / 2));
    CHECK(berry_phase(pi / 3, Branch::Minus) == doctest::Approx(-1.5 * pi));
}

TEST_CASE("propagate_exact solves the Schrodinger equation") {
    // Independent check: integrate i psi' = H(t) psi with the adaptive solver.
    RotatingFieldParams p{1.0, 0.37, 1.1, +1, 0.4};
    std::mt19937_64 rng(8);
    CVec psi0 = random_state(rng, 2);
    ComplexRhs rhs = [&](double t, const CVec& y, CVec& dy) { dy = -I * (spin_hamiltonian(p, t) * y); };
    auto num = integrate_ode(rhs, psi0, 0.0, {3.0, 17.0});
    CHECK((num[0] - CVec(propagate_exact(p, psi0, 3.0))).norm() < 1e-8);
    CHECK((num[1] - CVec(propagate_exact(p, psi0, 17.0))).norm() < 1e-8);
}

TEST_CASE("propagate_exact unitarity and composition") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, 1);
    double worst = 0.0, worst_comp = 0.0;
    for (int i = 0; i < 1000; ++i) {
        RotatingFieldParams p{1.0, 2 * u(rng), pi * u(rng), u(rng) < 0.5 ? 1 : -1, 2 * pi * u(rng)};
        Vec2c psi0 = random_state(rng, 2);
        const double t1 = 30 * u(rng), t2 = 30 * u(rng);
        Vec2c full = propagate_exact(p, psi0, t1 + t2);
        worst = std::max(worst, std::abs(full.norm() - 1.0));
        RotatingFieldParams q = p;
        q.phase0 = p.phase0 + p.signed_Omega() * t1;
        Vec2c two = propagate_exact(q, propagate_exact(p, psi0, t1), t2);
        worst_comp = std::max(worst_comp, (two - full).norm());
    }
    CHECK(worst < 1e-12);
    CHECK(worst_comp < 1e-10);
}

TEST_CASE("closed-form state and its coefficients") {
    RotatingFieldParams p{1.0, 0.0, 0.8, +1, 0.0};
    Vec2c psi0 = instantaneous_eigenstates(p, 0).plus;
    for (double t : {0.5, 3.0, 10.0}) CHECK(std::abs(psi0.dot(propagate_exact(p, psi0, t))) == doctest::Approx(1.0));

    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 1);
    for (int i = 0; i < 100; ++i) {
        RotatingFieldParams q{1.0, 1.5 * u(rng), pi * u(rng), u(rng) < 0.5 ? 1 : -1, 0.0};
        Vec2c s0 = instantaneous_eigenstates(q, 0).plus;
        const double t = 25 * u(rng);
        CHECK((psi_plus_closed_form(q, t) - propagate_exact(q, s0, t)).norm() < 1e-12);
    }

    // theta = pi/2, Omega = omega: omega_tilde = sqrt(2) and |<psi_-|psi>| = |sin(omega_tilde t/2)|/sqrt(2).
    RotatingFieldParams r{1.0, 1.0, pi / 2, +1, 0.0};
    CHECK(r.omega_tilde() == doctest::Approx(std::sqrt(2.0)));
    Vec2c r0 = instantaneous_eigenstates(r, 0).plus;
    for (double t : {0.7, 2.0, 5.5}) {
        const double g = std::abs(instantaneous_eigenstates(r, t).minus.dot(propagate_exact(r, r0, t)));
        CHECK(g == doctest::Approx(std::abs(std::sin(std::sqrt(2.0) * t / 2)) / std::sqrt(2.0)).epsilon(1e-12));
    }
}

TEST_CASE("kinematic phase closed form") {
    RotatingFieldParams a{1.0, 1e-4, pi / 3, +1, 0.0};
    CHECK(std::abs(kinematic_gp_closed(a) + pi / 2) < 5e-4 * pi);
    // The first-order correction for an initial eigenstate carries 3/2 pi sin^2 theta;
    // a coefficient of pi alone leaves a residual of order Omega / omega.
    RotatingFieldParams b{1.0, 0.05, pi / 2, +1, 0.0};
    CHECK(angle_diff(kinematic_gp_closed(b), -pi - 1.5 * pi * 0.05) < 8e-3);
    CHECK(angle_diff(kinematic_gp_closed(b), -pi - pi * 0.05) > 0.05);
    for (double th : {0.4, 1.0, 2.2}) {
        RotatingFieldParams c{1.0, 1e-3, th, +1, 0.0};
        const double first = -pi * (1 - std::cos(th)) - 1.5 * pi * std::sin(th) * std::sin(th) * 1e-3;
        CHECK(angle_diff(kinematic_gp_closed(c), first) < 20e-6);
    }
}

TEST_CASE("numeric kinematic phase matches the closed form with second-order convergence") {
    RotatingFieldParams p{1.0, 0.05, pi / 2, +1, 0.0};
    const double closed = kinematic_gp_closed(p);
    CHECK(angle_diff(kinematic_gp_numeric(p, 200001), closed) < 1e-6);
    const double e1 = angle_diff(kinematic_gp_numeric(p, 4001), closed);
    const double e2 = angle_diff(kinematic_gp_numeric(p, 8001), closed);
    CHECK(std::log2(e1 / e2) == doctest::Approx(2.0).epsilon(0.1));

    RotatingFieldParams q{1.0, 0.3, 2.0, -1, 0.0};
    CHECK(angle_diff(kinematic_gp_numeric(q, 100001), kinematic_gp_closed(q)) < 1e-6);
}

TEST_CASE("adiabatic leakage over one period") {
    RotatingFieldParams p{1.0, 1e-4, 1.0, +1, 0.0};
    Vec2c psi0 = instantaneous_eigenstates(p, 0).plus;
    double worst = 0.0;
    for (double t : linspace(0.0, p.period(), 101))
        worst = std::max(worst, 1.0 - std::norm(instantaneous_eigenstates(p, t).plus.dot(propagate_exact(p, psi0, t))));
    CHECK(worst <= 1e-6);
}

TEST_CASE("unitary echo persistence") {
    CHECK(echo_persistence_unitary(0.0, true) == doctest::Approx(1.0));
    CHECK(echo_persistence_unitary(pi / 2, true) == doctest::Approx(1.0));
    CHECK(echo_persistence_unitary(std::acos(0.75), true) == doctest::Approx(0.0).epsilon(1e-12));
    for (double th : {0.3, 0.7, 1.2, 2.0})
        CHECK(std::abs(echo_persistence_unitary(th, false, 1e-3) - echo_persistence_unitary(th, true)) < 1e-3);
}
