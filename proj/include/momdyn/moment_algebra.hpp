#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "momdyn/errors.hpp"
#include "momdyn/rational.hpp"

namespace momdyn {

// Exponent multi-index of a Weyl-ordered central moment Delta(q^k pi^l), one
// (k,l) per degree of freedom. Total order 1 labels the identically-zero
// symbols Delta(q), Delta(pi); order 0 is the constant 1.
struct MomentIndex {
    int dofs = 1;
    std::array<std::array<int, 2>, 2> e{{{0, 0}, {0, 0}}};  // e[i] = {q-power, pi-power}

    static MomentIndex d1(int k, int l) {
        MomentIndex m;
        m.dofs = 1;
        m.e[0] = {k, l};
        return m;
    }
    static MomentIndex d2(int k1, int l1, int k2, int l2) {
        MomentIndex m;
        m.dofs = 2;
        m.e[0] = {k1, l1};
        m.e[1] = {k2, l2};
        return m;
    }

    int order() const {
        int s = 0;
        for (int i = 0; i < dofs; ++i) s += e[i][0] + e[i][1];
        return s;
    }
    int momentum_degree() const {
        int s = 0;
        for (int i = 0; i < dofs; ++i) s += e[i][1];
        return s;
    }
    bool valid() const {
        for (int i = 0; i < dofs; ++i)
            if (e[i][0] < 0 || e[i][1] < 0) return false;
        return dofs == 1 || dofs == 2;
    }

    auto operator<=>(const MomentIndex&) const = default;

    // "q2pi1" style for one DOF ("q2", "qpi", "pi3"); "q1*pi2" style for two.
    std::string key() const;
    static MomentIndex parse(const std::string& key, int dofs);
};

struct MomentTerm {
    Rat coeff;
    int hbar_pow = 0;
    std::vector<MomentIndex> factors;  // sorted after normalize()

    // Semiclassical order: sum of factor orders plus twice the hbar power.
    int order() const {
        int s = 2 * hbar_pow;
        for (const auto& f : factors) s += f.order();
        return s;
    }

    bool operator==(const MomentTerm&) const = default;
};

struct MomentState;

// Finite linear combination of products of moments with exact rational
// coefficients and explicit hbar powers.
struct MomentPolynomial {
    std::vector<MomentTerm> terms;

    MomentPolynomial& normalize();  // drop order-1 factors' terms, merge, sort
    bool is_zero() const { return terms.empty(); }
    MomentPolynomial truncated(int s) const;

    MomentPolynomial operator+(const MomentPolynomial& o) const;
    MomentPolynomial operator-(const MomentPolynomial& o) const;
    MomentPolynomial scaled(const Rat& c) const;
    bool operator==(const MomentPolynomial& o) const { return terms == o.terms; }

    double eval(const MomentState& st) const;
    std::string str() const;
};

// Numeric assignment of moments up to a truncation order, plus the basic
// expectation values.
struct MomentState {
    int dofs = 1;
    double hbar = 1.0;
    std::vector<double> expectations;  // q_1..q_N, pi_1..pi_N
    std::map<MomentIndex, double> moments;

    double moment(const MomentIndex& idx) const {
        if (idx.order() == 0) return 1.0;
        if (idx.order() == 1) return 0.0;
        auto it = moments.find(idx);
        if (it == moments.end()) throw MissingMoment("missing moment " + idx.key());
        return it->second;
    }
    bool has(const MomentIndex& idx) const { return moments.count(idx) > 0; }

    std::string to_json() const;
    static MomentState from_json(const std::string& text);
};

// K^n_{abcd} of the closed-form single-DOF bracket; exact integer arithmetic.
// Preconditions: non-negative arguments, n <= min(a+c, b+d, a+b, c+d).
std::int64_t k_coefficient(int n, int a, int b, int c, int d);

// Closed-form single-DOF bracket {Delta(q^b pi^a), Delta(q^d pi^c)}: the two
// bilinear terms plus the odd-n sum with (i hbar/2)^(n-1) encoded as
// (-1)^((n-1)/2) (hbar/2)^(n-1), truncated to semiclassical order s.
MomentPolynomial bracket_single_dof(const MomentIndex& A, const MomentIndex& B, int s);

// Untruncated variant (used for oracle-equivalence checks).
MomentPolynomial bracket_single_dof_full(const MomentIndex& A, const MomentIndex& B);

// Drops terms of semiclassical order > s.
MomentPolynomial truncate(const MomentPolynomial& p, int s);

// Pairs (j,k), 1-based, violating Delta(q_j^2)Delta(pi_k^2) - Delta(q_j pi_k)^2
// >= hbar^2/4 delta_jk beyond tolerance 1e-12.
std::vector<std::pair<int, int>> uncertainty_check(const MomentState& state);

}  // namespace momdyn
