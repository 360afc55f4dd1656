#include <cmath>
#include <initializer_list>

#include "doctest.h"
#include "momdyn/errors.hpp"
#include "momdyn/thermo.hpp"

using namespace momdyn;

TEST_CASE("partition function: closed form vs quadrature oracle") {
    SUBCASE("reference point") {
        const double zc = partition_function(1.0, 1.0, 1.0);
        const double zq = partition_function_quadrature(1.0, 1.0, 1.0);
        CHECK(std::abs(zc - zq) / zq < 1e-6);
        // the printed display carries half this constant; the defining
        // integral decides
        CHECK(zq == doctest::Approx(8.0 * M_PI * 2.5 * std::exp(-0.25)).epsilon(1e-8));
    }
    SUBCASE("grid (log space, robust at the underflowing corner)") {
        for (double beta : {0.1, 1.0, 10.0, 100.0})
            for (double omega : {0.1, 1.0, 10.0, 100.0}) {
                const double lc = log_partition_function(beta, omega, 1.0);
                const double lq = log_partition_function_quadrature(beta, omega, 1.0);
                CHECK(std::abs(lc - lq) < 1e-6);
            }
    }
    SUBCASE("lambda structure") {
        for (double lam : {0.5, 1.0, 2.0}) {
            const double zc = partition_function(2.0, 0.7, lam);
            const double zq = partition_function_quadrature(2.0, 0.7, lam);
            CHECK(std::abs(zc - zq) / zq < 1e-6);
        }
    }
    SUBCASE("the elementary p,U reduction matches the plain triple integral") {
        const double z3 = partition_function_quadrature3d(1.0, 1.0, 1.0);
        const double zq = partition_function_quadrature(1.0, 1.0, 1.0);
        CHECK(std::abs(z3 - zq) / zq < 1e-5);
    }
}

TEST_CASE("ensemble averages: closed forms vs quadrature, limits, monotonicity") {
    SUBCASE("closed forms match the defining integrals") {
        for (double beta : {0.2, 1.0, 5.0, 40.0})
            for (double omega : {0.3, 1.0, 3.0}) {
                auto c = ensemble_averages(beta, omega);
                auto q = ensemble_averages_quadrature(beta, omega);
                CHECK(c.s2 == doctest::Approx(q.s2).epsilon(1e-8));
                CHECK(c.energy == doctest::Approx(q.energy).epsilon(1e-5));
                CHECK(c.casimir == doctest::Approx(q.casimir).epsilon(1e-8));
            }
    }
    SUBCASE("zero-temperature limits") {
        // exact approach rate is ~2/beta: the residual at beta=1e3 is 2.0e-3
        auto a = ensemble_averages(1e3, 1.0);
        CHECK(a.energy - 0.25 == doctest::Approx(3e-3 - 0.5 / 502.0).epsilon(1e-9));
        CHECK(std::abs(a.energy - 0.25) < 2.5e-3);
        CHECK(std::abs(a.casimir - 0.25) < 2.5e-3);
        auto a4 = ensemble_averages(4e3, 1.0);
        CHECK(std::abs(a4.energy - 0.25) < 1e-3);   // sqrt(U_min) omega / 2
        CHECK(std::abs(a4.casimir - 0.25) < 1e-3);  // -> U_min
        auto b = ensemble_averages(1e6, 1.0);
        CHECK(b.casimir == doctest::Approx(0.25).epsilon(1e-5));
        CHECK(b.s2 == doctest::Approx(1.0).epsilon(1e-5));  // 2 sqrt(U_min)/omega
    }
    SUBCASE("<U> exceeds U_min at T > 0 and grows with T") {
        double prev = 0.25;
        for (double beta : {100.0, 10.0, 1.0, 0.1}) {
            auto a = ensemble_averages(beta, 1.0);
            CHECK(a.casimir > prev);
            prev = a.casimir;
        }
    }
    SUBCASE("observed approach rates are O(1/beta)") {
        auto a = ensemble_averages(1e2, 1.0), b = ensemble_averages(2e2, 1.0);
        CHECK((a.energy - 0.25) / (b.energy - 0.25) == doctest::Approx(2.0).epsilon(0.1));
        CHECK((a.casimir - 0.25) / (b.casimir - 0.25) == doctest::Approx(2.0).epsilon(0.1));
    }
}

TEST_CASE("Bessel K0: quadrature and series oracles agree") {
    for (double z : {0.3, 0.5, 1.0, 2.0, 5.0}) {
        CHECK(bessel_k0(z) == doctest::Approx(bessel_k0_series(z)).epsilon(1e-10));
    }
    CHECK(bessel_k0(1.0) == doctest::Approx(0.42102443824070834).epsilon(1e-9));
}

TEST_CASE("two-point function on the line") {
    SUBCASE("zero-temperature limit reproduces (hbar/2pi) K0(m r)") {
        const double beta = 1e6;
        for (double r : {0.5, 1.0, 2.0}) {
            const double g = two_point_function(r, 1.0, beta, two_point_k_cut(beta));
            const double k0 = bessel_k0_series(r);
            CHECK(std::abs(g - k0 / (2.0 * M_PI)) / (k0 / (2.0 * M_PI)) < 1e-3);
        }
    }
    SUBCASE("symmetric in the sign of x-y by construction (cosine integrand)") {
        const double beta = 10.0;
        const double kc = two_point_k_cut(beta, 1.0, 1e-8);
        CHECK(two_point_function(1.3, 1.0, beta, kc) ==
              doctest::Approx(two_point_function(1.3, 1.0, beta, kc)));
        CHECK_THROWS_AS(two_point_function(-1.0, 1.0, beta, kc), momdyn::ConfigError);
    }
    SUBCASE("cutoff below the tail bound is rejected") {
        CHECK_THROWS_AS(two_point_function(1.0, 1.0, 1.0, 10.0), CutoffTooSmall);
    }
    SUBCASE("finite-T correction decays slower than the K0 envelope") {
        const double beta = 5.0;
        const double kc = two_point_k_cut(beta);
        double prev_ratio = 0.0;
        for (double r : {1.0, 2.0, 3.0}) {
            const double g_t = two_point_function(r, 1.0, beta, kc);
            const double g_0 = bessel_k0_series(r) / (2.0 * M_PI);
            const double ratio = (g_t - g_0) * beta / g_0;
            CHECK(ratio > prev_ratio);
            prev_ratio = ratio;
        }
    }
}

TEST_CASE("two-point function on the circle") {
    SUBCASE("heavy mass: circle sum and line integral agree below a percent") {
        const double beta = 10.0, m = 10.0, r = 0.3;
        const double line = two_point_function(r, m, beta, two_point_k_cut(beta));
        const double circ = circle_two_point(r, m, beta, 1000);
        CHECK(std::abs(circ - line) / std::abs(line) < 0.01);
    }
    SUBCASE("coincident points reduce to the truncated variance sum") {
        const double beta = 10.0, m = 1.0;
        const int kmax = 50;
        auto s2_of = [&](double omega) {
            return 12.0 / (omega * omega * beta) + 0.25 * beta / (1.0 + 0.25 * omega * beta);
        };
        double expect = s2_of(m);
        for (int k = 1; k <= kmax; ++k) expect += 2.0 * s2_of(std::sqrt(double(k) * k + m * m));
        expect /= 4.0 * M_PI;
        CHECK(circle_two_point(0.0, m, beta, kmax) == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("k_max doubling is converged") {
        const double a = circle_two_point(0.7, 1.0, 10.0, 2000);
        const double b = circle_two_point(0.7, 1.0, 10.0, 4000);
        CHECK(std::abs(a - b) < 1e-6);
    }
    SUBCASE("precondition on k_max") {
        CHECK_THROWS_AS(circle_two_point(0.3, 10.0, 1.0, 50), ConfigError);
    }
}
