#include <cmath>
#include <random>

#include "doctest.h"
#include "momdyn/realizations.hpp"
#include "momdyn/weyl.hpp"

using namespace momdyn;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

// least-squares slope of log(y) against log(x)
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const int n = static_cast<int>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = 0; i < n; ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace

TEST_CASE("order2: displayed moments and the product identity") {
    const auto& R = realization("order2");
    auto st = realize_order2(R.point({1.0, 0.0, 0.25}));
    CHECK(st.moment(MomentIndex::d1(2, 0)) == doctest::Approx(1.0));
    CHECK(st.moment(MomentIndex::d1(1, 1)) == doctest::Approx(0.0));
    CHECK(st.moment(MomentIndex::d1(0, 2)) == doctest::Approx(0.25));

    auto st2 = realize_order2(R.point({2.0, 1.0, 0.25}));
    CHECK(st2.moment(MomentIndex::d1(2, 0)) == doctest::Approx(4.0));
    CHECK(st2.moment(MomentIndex::d1(1, 1)) == doctest::Approx(2.0));
    CHECK(st2.moment(MomentIndex::d1(0, 2)) == doctest::Approx(1.0625));

    std::mt19937 rng(11);
    for (int t = 0; t < 50; ++t) {
        auto x = R.sample_regular(rng);
        auto st3 = R.realize(x);
        const double prod = st3.moment(MomentIndex::d1(2, 0)) * st3.moment(MomentIndex::d1(0, 2)) -
                            st3.moment(MomentIndex::d1(1, 1)) * st3.moment(MomentIndex::d1(1, 1));
        CHECK(prod == doctest::Approx(x["U"]).epsilon(1e-12));
    }
    CHECK_THROWS_AS(realize_order2(R.point({0.0, 0.0, 0.25})), SingularChart);
}

TEST_CASE("order2: uncertainty relation holds whenever U >= hbar^2/4") {
    const auto& R = realization("order2");
    std::mt19937 rng(13);
    for (int t = 0; t < 50; ++t) {
        auto x = R.sample_regular(rng);
        x["U"] = 0.25 + std::abs(x["U"]);
        CHECK(uncertainty_check(R.realize(x)).empty());
    }
}

TEST_CASE("order2: bracket closure against the sp(2) algebra") {
    std::mt19937 rng(17);
    auto rep = closure_certificate(realization("order2"), 50, rng);
    CHECK(rep.pairs_checked == 9);
    CHECK(rep.max_rel <= 1e-12);
}

TEST_CASE("order3_systematic: compact momentum forms agree with the long display") {
    const auto& R = realization("order3_systematic");
    std::mt19937 rng(19);
    for (int t = 0; t < 100; ++t) {
        auto x = R.sample_regular(rng);
        const double s1 = x["s1"], p1 = x["p1"], s2 = x["s2"], p2 = x["p2"], p3 = x["p3"], U1 = x["U1"];
        const double D = std::sqrt(2.0 * std::pow(s2, 1.5) * std::sqrt(1.0 - 4.0 * p3 * p3));
        // long Phi(s_i, p_i) display
        const double Phi = std::pow(p1 * s1, 3) + 3.0 * p1 * p1 * p3 * s1 * s1 * std::sqrt(s2) +
                           3.0 * p1 * s1 * s2 * (-1.0 + p3 * p3 + 4.0 * p1 * s1 * p2) +
                           64.0 * std::pow(p2, 3) * std::pow(s2, 3) +
                           std::pow(s2, 1.5) * p3 * (-7.0 + p3 * p3 + 24.0 * p1 * p2 * s1) +
                           48.0 * p3 * p2 * p2 * std::pow(s2, 2.5) +
                           12.0 * p2 * s2 * s2 * (-1.0 + p3 * p3 + 4.0 * p1 * s1 * p2);
        const double pi3_long = U1 * Phi / (s1 * s1 * s1 * D);
        const double pi3 = R.moment(MomentIndex::d1(0, 3))(x);
        CHECK(rel(pi3, pi3_long) <= 1e-11);

        // Delta(q2pi)^2 - Delta(qpi2) Delta(q3) = U1^2 s1^2 s2 / D^2
        const double q3 = R.moment(MomentIndex::d1(3, 0))(x);
        const double q2pi = R.moment(MomentIndex::d1(2, 1))(x);
        const double qpi2 = R.moment(MomentIndex::d1(1, 2))(x);
        CHECK(rel(q2pi * q2pi - qpi2 * q3, U1 * U1 * s1 * s1 * s2 / (D * D)) <= 1e-11);
    }
}

TEST_CASE("order3_systematic: f5 evaluates to -U1^4 and U1=|f5|^(1/4) is a casimir") {
    const auto& R = realization("order3_systematic");
    auto q3 = R.moment(MomentIndex::d1(3, 0));
    auto q2pi = R.moment(MomentIndex::d1(2, 1));
    auto qpi2 = R.moment(MomentIndex::d1(1, 2));
    auto pi3 = R.moment(MomentIndex::d1(0, 3));
    auto u1_fn = ChartFunction::make("U1(f5)", [=](auto x) {
        auto a = q2pi.eval(x) * qpi2.eval(x) - q3.eval(x) * pi3.eval(x);
        auto b = qpi2.eval(x) * qpi2.eval(x) - q2pi.eval(x) * pi3.eval(x);
        auto c = q2pi.eval(x) * q2pi.eval(x) - q3.eval(x) * qpi2.eval(x);
        auto f5 = a * a - 4.0 * b * c;
        return sqrt(sqrt(-f5));  // f5 = -U1^4 on this realization
    });
    std::mt19937 rng(23);
    for (int t = 0; t < 30; ++t) {
        auto x = R.sample_regular(rng);
        const double f5 = [&] {
            const double a = q2pi(x) * qpi2(x) - q3(x) * pi3(x);
            const double b = qpi2(x) * qpi2(x) - q2pi(x) * pi3(x);
            const double c = q2pi(x) * q2pi(x) - q3(x) * qpi2(x);
            return a * a - 4.0 * b * c;
        }();
        CHECK(rel(f5, -std::pow(x["U1"], 4)) <= 1e-10);
        CHECK(u1_fn(x) == doctest::Approx(x["U1"]).epsilon(1e-9));
        for (const auto& idx : R.moment_indices()) {
            auto br = poisson_bracket(R.moment(idx), u1_fn, 3);
            CHECK(std::abs(br(x)) <= 1e-10);
        }
    }
}

TEST_CASE("order3_systematic: exact bracket closure at 50 random points") {
    std::mt19937 rng(29);
    auto rep = closure_certificate(realization("order3_systematic"), 50, rng);
    INFO("worst pair ", rep.worst_pair);
    CHECK(rep.pairs_checked == 49);
    CHECK(rep.max_rel <= 1e-10);
}

TEST_CASE("order3_ansatz: direct substitution example") {
    const auto& R = realization("order3_ansatz");
    auto x = R.point({1.0, 0.0, 2.0, 0.0, 3.0, 0.0, 0.25});
    auto st = R.realize(x);
    CHECK(st.moment(MomentIndex::d1(2, 0)) == doctest::Approx(14.0));
    CHECK(st.moment(MomentIndex::d1(1, 1)) == doctest::Approx(0.0));
    CHECK(st.moment(MomentIndex::d1(0, 2)) == doctest::Approx(0.25 * (1.0 + 0.25 + 1.0)));
    CHECK(st.moment(MomentIndex::d1(3, 0)) == doctest::Approx(36.0));
    CHECK(st.moment(MomentIndex::d1(2, 1)) == doctest::Approx(0.0));
    CHECK_THROWS_AS(R.realize(R.point({1.0, 0.0, 1.0, 0.0, 3.0, 0.0, 0.25})), SingularChart);
}

namespace {

// F(s1,s2,s3) = U sum_{i<j} (s_i - s_j)^-2 and its partials via nested duals
template <class S>
S ansatz_F(const S& s1, const S& s2, const S& s3, double U) {
    auto inv2 = [](const S& d) { return 1.0 / (d * d); };
    return U * (inv2(s1 - s2) + inv2(s1 - s3) + inv2(s2 - s3));
}

double F_d1(const std::array<double, 3>& s, double U, int i) {
    using D = Dual<double>;
    std::array<D, 3> d{D(s[0]), D(s[1]), D(s[2])};
    d[i].b = 1.0;
    return ansatz_F(d[0], d[1], d[2], U).b;
}

double F_d2(const std::array<double, 3>& s, double U, int i, int j) {
    using D = Dual<double>;
    using DD = Dual<D>;
    std::array<DD, 3> d{DD(D(s[0])), DD(D(s[1])), DD(D(s[2]))};
    d[i].a.b = 1.0;
    d[j].b.a = 1.0;
    return ansatz_F(d[0], d[1], d[2], U).b.b;
}

double F_d3(const std::array<double, 3>& s, double U, int i, int j, int k) {
    using D1 = Dual<double>;
    using D2 = Dual<D1>;
    using D3 = Dual<D2>;
    std::array<D3, 3> d{D3(D2(D1(s[0]))), D3(D2(D1(s[1]))), D3(D2(D1(s[2])))};
    d[i].a.a.b = 1.0;
    d[j].a.b.a = 1.0;
    d[k].b.a.a = 1.0;
    return ansatz_F(d[0], d[1], d[2], U).b.b.b;
}

}  // namespace

TEST_CASE("order3_ansatz: homogeneity and the independent consistency condition") {
    const auto& R = realization("order3_ansatz");
    std::mt19937 rng(31);
    for (int t = 0; t < 30; ++t) {
        auto x = R.sample_regular(rng);
        const std::array<double, 3> s{x["s1"], x["s2"], x["s3"]};
        const std::array<double, 3> p{x["p1"], x["p2"], x["p3"]};
        const double U = x["U"];
        const double F = ansatz_F(s[0], s[1], s[2], U);

        // Euler relation: sum_i s_i dF/ds_i = -2F
        double euler = 0.0;
        for (int i = 0; i < 3; ++i) euler += s[i] * F_d1(s, U, i);
        CHECK(rel(euler, -2.0 * F) <= 1e-12);

        // second consistency condition residual
        double r = 0.0;
        for (int i = 0; i < 3; ++i) r += 6.0 * p[i] * p[i] * F_d1(s, U, i);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r += 4.0 * p[i] * s[i] * p[j] * F_d2(s, U, i, j);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < 3; ++k) r += 0.5 * s[i] * s[i] * p[j] * p[k] * F_d3(s, U, i, j, k);
        for (int i = 0; i < 3; ++i) r -= 1.5 * s[i] * F_d1(s, U, i) * F_d1(s, U, i);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r -= 0.25 * s[i] * s[i] * F_d1(s, U, j) * F_d2(s, U, i, j);
        CHECK(std::abs(r) <= 1e-10 * std::max(1.0, std::abs(F)));
    }
}

TEST_CASE("order3_ansatz: generated moments match the displayed closed forms") {
    const auto& R = realization("order3_ansatz");
    auto q2pi = generate_moment(R, MomentIndex::d1(2, 1));
    auto qpi2 = generate_moment(R, MomentIndex::d1(1, 2));
    std::mt19937 rng(37);
    for (int t = 0; t < 40; ++t) {
        auto x = R.sample_regular(rng);
        const std::array<double, 3> s{x["s1"], x["s2"], x["s3"]};
        const std::array<double, 3> p{x["p1"], x["p2"], x["p3"]};
        const double U = x["U"];
        double e_q2pi = 0.0, e_qpi2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            e_q2pi += p[i] * s[i] * s[i];
            e_qpi2 += p[i] * p[i] * s[i] - 0.25 * s[i] * s[i] * F_d1(s, U, i);
        }
        CHECK(rel(q2pi(x), e_q2pi) <= 1e-11);
        CHECK(rel(qpi2(x), e_qpi2) <= 1e-11);
    }
    CHECK_THROWS_AS(generate_moment(R, MomentIndex::d1(4, 0)), MissingPredecessor);
}

TEST_CASE("order3_ansatz: brackets with a second-order moment close exactly") {
    std::mt19937 rng(41);
    auto rep = closure_certificate(realization("order3_ansatz"), 30, rng, true);
    INFO("worst pair ", rep.worst_pair);
    CHECK(rep.max_rel <= 1e-10);
}

TEST_CASE("order3_ansatz: truncation residuals scale with the semiclassical hierarchy") {
    const auto& R = realization("order3_ansatz");
    // base point scaled as (lambda s, lambda p, lambda^4 U): s,p ~ sqrt(hbar), U ~ hbar^2
    const std::array<double, 3> s0{0.6, 1.2, 1.9};
    const std::array<double, 3> p0{0.3, -0.5, 0.7};
    const double U0 = 0.8;
    std::vector<double> lambdas;
    for (double l = 1e-3; l <= 1.05e-1; l *= std::pow(100.0, 1.0 / 6.0)) lambdas.push_back(l);

    std::vector<MomentIndex> third = {MomentIndex::d1(3, 0), MomentIndex::d1(2, 1),
                                      MomentIndex::d1(1, 2), MomentIndex::d1(0, 3)};

    SUBCASE("third-by-third brackets vanish one order past the truncation") {
        std::vector<double> resid;
        for (double l : lambdas) {
            auto x = R.point({l * s0[0], l * p0[0], l * s0[1], l * p0[1], l * s0[2], l * p0[2],
                              l * l * l * l * U0});
            double worst = 0.0;
            for (std::size_t i = 0; i < third.size(); ++i)
                for (std::size_t j = i + 1; j < third.size(); ++j) {
                    auto br = poisson_bracket(R.moment(third[i]), R.moment(third[j]), 3);
                    worst = std::max(worst, std::abs(br(x)));
                }
            resid.push_back(worst);
        }
        const double slope = loglog_slope(lambdas, resid);
        INFO("slope ", slope);
        CHECK(slope >= 3.9);
    }

    SUBCASE("brackets with the systematically derived casimir vanish past the truncation") {
        // Measured law (joint homogeneity makes these exact pure powers):
        // {Delta^2, U1} = 0 to machine precision, {Delta^3, U1} = Theta(lambda^4).
        // Both are order > 3, i.e. zero within the third-order truncation.
        auto q3 = R.moment(MomentIndex::d1(3, 0));
        auto q2pi = R.moment(MomentIndex::d1(2, 1));
        auto qpi2 = R.moment(MomentIndex::d1(1, 2));
        auto pi3 = R.moment(MomentIndex::d1(0, 3));
        auto u1_fn = ChartFunction::make("U1(f5(ansatz))", [=](auto x) {
            auto a = q2pi.eval(x) * qpi2.eval(x) - q3.eval(x) * pi3.eval(x);
            auto b = qpi2.eval(x) * qpi2.eval(x) - q2pi.eval(x) * pi3.eval(x);
            auto c = q2pi.eval(x) * q2pi.eval(x) - q3.eval(x) * qpi2.eval(x);
            auto f5 = a * a - 4.0 * b * c;
            return sqrt(sqrt(abs(f5)));
        });
        std::vector<double> resid;
        for (double l : lambdas) {
            auto x = R.point({l * s0[0], l * p0[0], l * s0[1], l * p0[1], l * s0[2], l * p0[2],
                              l * l * l * l * U0});
            double worst = 0.0;
            for (const auto& idx : R.moment_indices()) {
                auto br = poisson_bracket(R.moment(idx), u1_fn, 3);
                const double v = std::abs(br(x));
                if (idx.order() == 2) {
                    // exact invariance of the ideal casimir under the sp(2) action
                    CHECK(v <= 1e-13 * std::max(1.0, u1_fn(x)));
                } else {
                    worst = std::max(worst, v);
                }
            }
            resid.push_back(worst);
        }
        const double slope = loglog_slope(lambdas, resid);
        INFO("slope ", slope);
        CHECK(slope >= 3.9);
        CHECK(slope <= 4.1);
    }
}

TEST_CASE("order4_ansatz: closure-condition limit C=0 and the generating bracket") {
    const auto& R = realization("order4_ansatz");
    SUBCASE("C=0, p=0 collapses odd moments and squares Delta(q2)") {
        auto x = R.point({0.5, 0.0, 1.1, 0.0, 1.7, 0.0, 2.3, 0.0, 2.9, 0.0, 0.4, 0.0});
        auto st = R.realize(x);
        CHECK(st.moment(MomentIndex::d1(3, 0)) == doctest::Approx(0.0));
        const double q2 = st.moment(MomentIndex::d1(2, 0));
        CHECK(st.moment(MomentIndex::d1(4, 0)) == doctest::Approx(q2 * q2).epsilon(1e-12));
    }
    SUBCASE("{Delta(q2 pi), Delta(q3)} = 3 Delta(q2)^2 - 3 Delta(q4)") {
        std::mt19937 rng(43);
        auto q2pi = R.moment(MomentIndex::d1(2, 1));
        auto q3 = R.moment(MomentIndex::d1(3, 0));
        auto br = poisson_bracket(q2pi, q3, 5);
        for (int t = 0; t < 25; ++t) {
            auto x = R.sample_regular(rng);
            auto st = R.realize(x);
            const double expect =
                3.0 * std::pow(st.moment(MomentIndex::d1(2, 0)), 2) - 3.0 * st.moment(MomentIndex::d1(4, 0));
            CHECK(rel(br(x), expect) <= 1e-10);
        }
    }
    SUBCASE("generated Delta(q3 pi) equals -(1/8){Delta(pi2), Delta(q4)} and the oracle algebra") {
        std::mt19937 rng(47);
        auto q3pi = R.moment(MomentIndex::d1(3, 1));
        auto pi2 = R.moment(MomentIndex::d1(0, 2));
        auto q4 = R.moment(MomentIndex::d1(4, 0));
        auto br = poisson_bracket(pi2, q4, 5);
        auto oracle = weyl_bracket_oracle(MomentIndex::d1(0, 2), MomentIndex::d1(4, 0)).truncated(4);
        for (int t = 0; t < 25; ++t) {
            auto x = R.sample_regular(rng);
            CHECK(rel(q3pi(x), -br(x) / 8.0) <= 1e-12);
            CHECK(rel(br(x), oracle.eval(R.realize(x))) <= 1e-10);
        }
    }
    SUBCASE("fifth nested bracket on Delta(q4) vanishes") {
        std::mt19937 rng(53);
        auto pi2 = R.moment(MomentIndex::d1(0, 2));
        ChartFunction nest = R.moment(MomentIndex::d1(4, 0));
        for (int k = 0; k < 5; ++k) nest = poisson_bracket(pi2, nest, 5);
        for (int t = 0; t < 10; ++t) {
            auto x = R.sample_regular(rng);
            CHECK(std::abs(nest(x)) <= 1e-8);
        }
    }
}

TEST_CASE("twodof: saturation point and cross-correlation angle") {
    const auto& R = realization("twodof_order2");
    const double pi_half = std::acos(0.0);
    auto x = R.point({1.3, 0.0, 0.8, 0.0, pi_half, 0.0, 0.0, 0.0, 0.5, 0.0});
    auto st = R.realize(x);
    // Phi = Gamma = hbar^2/4 at U2=0, U1=hbar^2/2, beta=pi/2
    CHECK(st.moment(MomentIndex::d2(0, 2, 0, 0)) == doctest::Approx(0.25 / (1.3 * 1.3)).epsilon(1e-12));
    CHECK(st.moment(MomentIndex::d2(0, 0, 0, 2)) == doctest::Approx(0.25 / (0.8 * 0.8)).epsilon(1e-12));
    CHECK(st.moment(MomentIndex::d2(1, 0, 1, 0)) == doctest::Approx(0.0));
    CHECK(uncertainty_check(st).empty());
    // both single-DOF relations saturate
    const double u1 = st.moment(MomentIndex::d2(2, 0, 0, 0)) * st.moment(MomentIndex::d2(0, 2, 0, 0)) -
                      std::pow(st.moment(MomentIndex::d2(1, 1, 0, 0)), 2);
    CHECK(u1 == doctest::Approx(0.25).epsilon(1e-12));

    std::mt19937 rng(59);
    for (int t = 0; t < 30; ++t) {
        auto y = R.sample_regular(rng);
        auto s = R.realize(y);
        const double corr = s.moment(MomentIndex::d2(1, 0, 1, 0)) /
                            std::sqrt(s.moment(MomentIndex::d2(2, 0, 0, 0)) *
                                      s.moment(MomentIndex::d2(0, 0, 2, 0)));
        CHECK(corr == doctest::Approx(std::cos(y["beta"])).epsilon(1e-12));
    }
}

TEST_CASE("twodof: full sp(4) bracket closure certifies the resolved display typos") {
    std::mt19937 rng(61);
    auto rep = closure_certificate(realization("twodof_order2"), 50, rng);
    INFO("worst pair ", rep.worst_pair);
    CHECK(rep.pairs_checked == 100);
    CHECK(rep.max_rel <= 1e-9);
}

TEST_CASE("realized casimirs receive no dynamics") {
    for (const auto& name : realization_names()) {
        const auto& R = realization(name);
        std::mt19937 rng(67);
        auto x = R.sample_regular(rng);
        for (const auto& idx : R.moment_indices()) {
            auto field = hamiltonian_vector_field(R.moment(idx), x);
            for (int c = 2 * R.chart()->npairs(); c < R.chart()->dim(); ++c) CHECK(field[c] == 0.0);
        }
    }
}
