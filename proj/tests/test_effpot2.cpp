#include <cmath>
#include <random>

#include "doctest.h"
#include "momdyn/effective_model.hpp"
#include "momdyn/effpot2.hpp"

using namespace momdyn;

namespace {

Hessian2 random_pd(std::mt19937& rng) {
    std::uniform_real_distribution<double> logv(-0.7, 1.2), rho(-0.85, 0.85);
    Hessian2 h;
    h.v11 = std::exp(logv(rng));
    h.v22 = std::exp(logv(rng));
    h.v12 = rho(rng) * std::sqrt(h.v11 * h.v22);
    return h;
}

}  // namespace

TEST_CASE("effective potential: saturated form and consistency with H_eff") {
    auto V = Potential2D::named("coupled_harmonic", {{"omega", 1.0}, {"gamma", 0.4}});
    SUBCASE("U2=0, U1=hbar^2/2, beta=pi/2 reduces to the decoupled moment part") {
        const double s1 = 0.8, s2 = 1.3;
        const double v = effective_potential_2dof(0.2, -0.1, s1, s2, 0.3, 0.5 * M_PI, 0.5, 0.0, V);
        const auto hh = V.hessian(0.2, -0.1);
        const double expect = V.value(0.2, -0.1) +
                              0.125 * (1.0 / (s1 * s1) + 1.0 / (s2 * s2)) +
                              0.5 * hh[0] * s1 * s1 + 0.5 * hh[1] * s2 * s2;
        CHECK(v == doctest::Approx(expect).epsilon(1e-13));
    }
    SUBCASE("alpha-dependence disappears at U2 = 0") {
        const double a = effective_potential_2dof(0.1, 0.2, 0.9, 1.1, 0.3, 1.2, 0.5, 0.0, V);
        const double b = effective_potential_2dof(0.1, 0.2, 0.9, 1.1, 2.1, 1.2, 0.5, 0.0, V);
        CHECK(a == doctest::Approx(b).epsilon(1e-14));
    }
    SUBCASE("equals the two-DOF effective Hamiltonian at zero momenta") {
        auto H2 = taylor_effective_hamiltonian_2dof(V);
        auto ch = effective_chart_2dof();
        std::mt19937 rng(71);
        std::uniform_real_distribution<double> sU(0.5, 1.6), bU(0.5, 2.6), aU(0.0, 6.28),
            u1U(0.4, 1.4), u2U(0.0, 1.0), qU(-0.8, 0.8);
        for (int t = 0; t < 50; ++t) {
            const double q1 = qU(rng), q2 = qU(rng), s1 = sU(rng), s2 = sU(rng);
            const double beta = bU(rng), alpha = aU(rng), u1 = u1U(rng);
            const double u2 = u1 * u1 * u2U(rng);  // keep the chart radicand well-defined
            ChartPoint x(ch, {q1, 0.0, q2, 0.0, s1, 0.0, s2, 0.0, beta, 0.0, alpha, 0.0, u1, u2});
            const double veff = effective_potential_2dof(q1, q2, s1, s2, alpha, beta, u1, u2, V);
            CHECK(H2(x) == doctest::Approx(veff).epsilon(1e-10));
        }
    }
    SUBCASE("decoupled limit: independent saturated oscillators") {
        auto Vd = Potential2D::named("coupled_harmonic", {{"omega", 1.0}, {"gamma", 0.0}});
        auto m = minimize_moment_sector(Hessian2{1.0, 1.0, 0.0});
        CHECK(m.value == doctest::Approx(1.0).epsilon(1e-8));  // hbar/2 (sqrt(V11)+sqrt(V22))
        CHECK(low_energy_potential(0.0, 0.0, Vd) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("closed-form minimizer satisfies the stationarity system") {
    std::mt19937 rng(73);
    int closed = 0;
    for (int t = 0; t < 100; ++t) {
        auto h = random_pd(rng);
        auto m = minimize_moment_sector(h);
        CHECK(m.stationarity <= 1e-9);
        CHECK(m.s1 > 0.0);
        CHECK(m.s2 > 0.0);
        const double sin2 = std::pow(std::sin(m.beta), 2);
        CHECK(sin2 > 0.0);
        CHECK(sin2 <= 1.0);
        if (m.closed_form) ++closed;
        // minimized moment sector equals the low-energy closed form
        const double vlow = low_energy_from_hessian(0.0, h, 1.0);
        CHECK(m.value == doctest::Approx(vlow).epsilon(1e-8));
    }
    CHECK(closed >= 90);  // generic Hessians take the closed-form route
}

TEST_CASE("explicit stationarity equations hold at the closed-form point") {
    std::mt19937 rng(79);
    for (int t = 0; t < 25; ++t) {
        auto h = random_pd(rng);
        auto m = minimize_moment_sector(h);
        const double s1 = m.s1, s2 = m.s2, b = m.beta;
        const double sb = std::sin(b), cb = std::cos(b);
        const double e1 = -1.0 / (4.0 * s1 * s1 * s1 * sb * sb) + h.v11 * s1 + h.v12 * s2 * cb;
        const double e2 = -1.0 / (4.0 * s2 * s2 * s2 * sb * sb) + h.v22 * s2 + h.v12 * s1 * cb;
        const double e3 = -(s1 * s1 + s2 * s2) * cb / (4.0 * s1 * s1 * s2 * s2 * sb * sb * sb) -
                          h.v12 * s1 * s2 * sb;
        CHECK(std::abs(e1) <= 1e-9);
        CHECK(std::abs(e2) <= 1e-9);
        CHECK(std::abs(e3) <= 1e-9);
    }
}

TEST_CASE("low-energy potential: symmetry, evenness, coupled-oscillator values") {
    SUBCASE("symmetric under V11 <-> V22 and even in V12") {
        CHECK(low_energy_from_hessian(0.0, {1.7, 0.6, 0.3}) ==
              doctest::Approx(low_energy_from_hessian(0.0, {0.6, 1.7, 0.3})).epsilon(1e-14));
        CHECK(low_energy_from_hessian(0.0, {1.7, 0.6, -0.3}) ==
              doctest::Approx(low_energy_from_hessian(0.0, {1.7, 0.6, 0.3})).epsilon(1e-14));
    }
    SUBCASE("coupled oscillator ground energies") {
        for (double g : {0.1, 0.5, 0.9}) {
            auto V = Potential2D::named("coupled_harmonic", {{"omega", 1.0}, {"gamma", g}});
            const double expect = 0.5 * (std::sqrt(1.0 + g) + std::sqrt(1.0 - g));
            CHECK(low_energy_potential(0.0, 0.0, V) == doctest::Approx(expect).epsilon(1e-12));
            auto m = minimize_moment_sector(Hessian2{1.0, 1.0, g});
            CHECK(m.value == doctest::Approx(expect).epsilon(1e-9));
        }
        CHECK(low_energy_potential(0.0, 0.0,
                                   Potential2D::named("coupled_harmonic", {{"gamma", 0.5}})) ==
              doctest::Approx(0.9659258262890683).epsilon(1e-12));
    }
    SUBCASE("unstable direction raises ComplexFrequency") {
        CHECK_THROWS_AS(low_energy_from_hessian(0.0, {0.5, 0.1, 0.9}), ComplexFrequency);
    }
}

TEST_CASE("small-coupling expansion of beta") {
    const Hessian2 h{1.0, 4.0, 1e-3};
    auto m = minimize_moment_sector(h);
    const double slope = (m.beta - 0.5 * M_PI) / h.v12;
    const double expect = 1.0 / (std::pow(h.v11 * h.v22, 0.25) * (std::sqrt(h.v11) + std::sqrt(h.v22)));
    CHECK(slope == doctest::Approx(expect).epsilon(1e-3));
    CHECK(std::abs(slope - expect) < 1e-4);
    // weak coupling sends the cross-covariance s1 s2 cos(beta) to zero
    CHECK(std::abs(m.s1 * m.s2 * std::cos(m.beta)) < 5e-4);
}

TEST_CASE("continuity across the degenerate Hessian") {
    auto a = minimize_moment_sector(Hessian2{1.0, 1.0 + 1e-4, 0.3});
    auto b = minimize_moment_sector(Hessian2{1.0, 1.0, 0.3});
    auto c = minimize_moment_sector(Hessian2{1.0, 1.0 - 1e-4, 0.3});
    CHECK(b.closed_form == false);
    CHECK(a.value == doctest::Approx(b.value).epsilon(1e-4));
    CHECK(c.value == doctest::Approx(b.value).epsilon(1e-4));
    CHECK_THROWS_AS(minimize_moment_sector(Hessian2{1.0, 0.2, 0.9}), NotPositiveDefinite);
}

TEST_CASE("saturation analysis") {
    SUBCASE("ground-state parameters saturate both bounds") {
        auto rep = saturation_analysis(0.5, 0.0, 0.0, 0.5 * M_PI);
        CHECK(rep.phi0 == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(rep.gamma0 == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(rep.both_saturated);
        CHECK(rep.forces_u2_zero_or_cos_alpha_zero);
    }
    SUBCASE("U2 > 0 with cos(alpha)=0 leaves an unbounded potential direction") {
        auto rep = saturation_analysis(0.5, 0.3, 0.5 * M_PI, M_PI / 3.0);
        CHECK(rep.u2_term_slope < 0.0);
        CHECK(rep.u2_term_unbounded_below);
    }
    SUBCASE("U1 below hbar^2/2 cannot satisfy the bounds for every beta") {
        // the relations must hold for all beta; beta = pi/2 is the binding case
        auto worst = saturation_analysis(0.4, 0.0, 0.0, 0.5 * M_PI);
        CHECK(!worst.phi_bound_satisfied);
        auto ok = saturation_analysis(0.5, 0.0, 0.0, 0.5 * M_PI);
        CHECK(ok.phi_bound_satisfied);
        for (double beta = 0.2; beta < M_PI; beta += 0.2) {
            auto rep = saturation_analysis(0.5, 0.0, 0.0, beta);
            CHECK(rep.phi_bound_satisfied);
            CHECK(rep.gamma_bound_satisfied);
        }
    }
    SUBCASE("subtraction at saturation forces U2 = 0 or cos(alpha) = 0") {
        auto rep = saturation_analysis(0.5, 0.09, 0.5 * M_PI, 0.5 * M_PI);
        // cos(alpha)=0 branch: both relations can still be saturated jointly
        CHECK(std::abs(rep.subtraction_value) < 1e-12);
    }
}
