#include <vector>

#include "doctest.h"
#include "momdyn/moment_algebra.hpp"

using namespace momdyn;

namespace {

MomentPolynomial mono(Rat c, int hbar, std::vector<MomentIndex> fs) {
    MomentPolynomial p;
    p.terms.push_back({c, hbar, std::move(fs)});
    p.normalize();
    return p;
}

const MomentIndex q2 = MomentIndex::d1(2, 0);
const MomentIndex qpi = MomentIndex::d1(1, 1);
const MomentIndex pi2 = MomentIndex::d1(0, 2);
const MomentIndex q3 = MomentIndex::d1(3, 0);
const MomentIndex q2pi = MomentIndex::d1(2, 1);
const MomentIndex qpi2 = MomentIndex::d1(1, 2);
const MomentIndex pi3 = MomentIndex::d1(0, 3);

}  // namespace

TEST_CASE("moment index keys round-trip") {
    CHECK(q2pi.key() == "q2pi");
    CHECK(qpi.key() == "qpi");
    CHECK(MomentIndex::parse("q2pi1", 1) == q2pi);
    CHECK(MomentIndex::parse("q2pi", 1) == q2pi);
    CHECK(MomentIndex::parse("pi3", 1) == pi3);
    CHECK(MomentIndex::d2(1, 0, 0, 1).key() == "q1*pi2");
    CHECK(MomentIndex::parse("q1*pi2", 2) == MomentIndex::d2(1, 0, 0, 1));
    CHECK(MomentIndex::parse("q1^2", 2) == MomentIndex::d2(2, 0, 0, 0));
    CHECK_THROWS_AS(MomentIndex::parse("q-1", 1), ConfigError);
}

TEST_CASE("K coefficients") {
    CHECK(k_coefficient(1, 0, 2, 2, 0) == 4);
    CHECK(k_coefficient(1, 0, 2, 1, 1) == 2);
    CHECK(k_coefficient(1, 1, 1, 0, 3) == -3);
    CHECK(k_coefficient(3, 0, 3, 3, 0) == 6);
    CHECK_THROWS(k_coefficient(1, 0, 0, 0, 0));  // n exceeds M = 0
}

TEST_CASE("single-DOF bracket reproduces the displayed sp(2) relations") {
    CHECK(bracket_single_dof(q2, pi2, 2) == mono(Rat(4), 0, {qpi}));
    CHECK(bracket_single_dof(q2, qpi, 2) == mono(Rat(2), 0, {q2}));
    CHECK(bracket_single_dof(qpi, pi2, 2) == mono(Rat(2), 0, {pi2}));
}

TEST_CASE("second-by-third brackets are linear in third-order moments") {
    CHECK(bracket_single_dof(q2, q2pi, 3) == mono(Rat(2), 0, {q3}));
    CHECK(bracket_single_dof(q2, qpi2, 3) == mono(Rat(4), 0, {q2pi}));
    CHECK(bracket_single_dof(q2, pi3, 3) == mono(Rat(6), 0, {qpi2}));
}

TEST_CASE("third-order moments form an Abelian ideal under truncation") {
    const std::vector<MomentIndex> third = {q3, q2pi, qpi2, pi3};
    for (const auto& A : third)
        for (const auto& B : third) CHECK(bracket_single_dof(A, B, 3).is_zero());

    // untruncated {q3, pi3} keeps its order-four content
    auto full = bracket_single_dof_full(q3, pi3);
    MomentPolynomial expect;
    expect.terms.push_back({Rat(9), 0, {MomentIndex::d1(2, 2)}});
    expect.terms.push_back({Rat(-9), 0, {q2, pi2}});
    expect.terms.push_back({Rat(-3, 2), 2, {}});
    expect.normalize();
    CHECK(full == expect);
    CHECK(full.str() == "-9*pi2*q2 + 9*q2pi2 - 3/2*hbar^2");
}

TEST_CASE("bracket is antisymmetric term by term") {
    std::vector<MomentIndex> idx;
    for (int k = 0; k <= 5; ++k)
        for (int l = 0; k + l <= 5; ++l)
            if (k + l >= 2) idx.push_back(MomentIndex::d1(k, l));
    for (const auto& A : idx)
        for (const auto& B : idx) {
            auto ab = bracket_single_dof_full(A, B);
            auto ba = bracket_single_dof_full(B, A);
            CHECK((ab + ba).is_zero());
        }
}

TEST_CASE("truncation order rule") {
    SUBCASE("product of two second-order moments is order four") {
        auto p = mono(Rat(1), 0, {q2, pi2});
        CHECK(truncate(p, 3).is_zero());
        CHECK(truncate(p, 4) == p);
    }
    SUBCASE("hbar^2 weighted second-order term has order six") {
        auto p = mono(Rat(1), 2, {q2});
        CHECK(truncate(p, 5).is_zero());
        CHECK(truncate(p, 6) == p);
    }
    SUBCASE("s=3 vs s=4 differ exactly by the order-four terms") {
        auto t3 = bracket_single_dof(q2pi, qpi2, 3);
        auto t4 = bracket_single_dof(q2pi, qpi2, 4);
        auto diff = t4 - t3;
        CHECK(!diff.is_zero());
        for (const auto& t : diff.terms) CHECK(t.order() == 4);
        CHECK(t4 == bracket_single_dof_full(q2pi, qpi2).truncated(4));
    }
    SUBCASE("truncation is a projection") {
        auto p = bracket_single_dof_full(MomentIndex::d1(2, 2), MomentIndex::d1(1, 3));
        for (int s = 2; s <= 6; ++s) CHECK(truncate(truncate(p, s), s) == truncate(p, s));
    }
}

TEST_CASE("uncertainty check") {
    MomentState st;
    st.dofs = 1;
    st.hbar = 1.0;
    SUBCASE("saturated state passes") {
        st.moments[q2] = 0.5;
        st.moments[pi2] = 0.5;
        st.moments[qpi] = 0.0;
        CHECK(uncertainty_check(st).empty());
    }
    SUBCASE("violating state is flagged") {
        st.moments[q2] = 0.4;
        st.moments[pi2] = 0.4;
        st.moments[qpi] = 0.3;
        auto bad = uncertainty_check(st);
        REQUIRE(bad.size() == 1);
        CHECK(bad[0] == std::pair<int, int>(1, 1));
    }
    SUBCASE("missing second-order moment is an error") {
        st.moments[q2] = 0.5;
        CHECK_THROWS_AS(uncertainty_check(st), MissingMoment);
    }
}

TEST_CASE("polynomial evaluation against a state") {
    MomentState st;
    st.dofs = 1;
    st.hbar = 2.0;
    st.moments[q2] = 3.0;
    st.moments[pi2] = 5.0;
    MomentPolynomial p;
    p.terms.push_back({Rat(1, 2), 2, {q2}});
    p.terms.push_back({Rat(-1), 0, {q2, pi2}});
    p.normalize();
    CHECK(p.eval(st) == doctest::Approx(0.5 * 4.0 * 3.0 - 15.0));
}

TEST_CASE("moment state JSON round-trip") {
    MomentState st;
    st.dofs = 1;
    st.hbar = 1.0;
    st.expectations = {0.1, -0.2};
    st.moments[q2] = 1.0;
    st.moments[qpi] = 0.25;
    st.moments[pi2] = 0.3125;
    auto st2 = MomentState::from_json(st.to_json());
    CHECK(st2.hbar == st.hbar);
    CHECK(st2.moments == st.moments);
    CHECK(st2.expectations == st.expectations);
}
