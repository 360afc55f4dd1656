#include "momdyn/weyl.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace momdyn {

namespace {

struct GaussRat {
    Rat re, im;
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    GaussRat operator+(const GaussRat& o) const { return {re + o.re, im + o.im}; }
    GaussRat operator-(const GaussRat& o) const { return {re - o.re, im - o.im}; }
    GaussRat operator*(const GaussRat& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussRat times_i() const { return {-im, re}; }
    GaussRat times_minus_i() const { return {im, -re}; }
};

// Laurent-free polynomial in hbar: power -> Gaussian rational coefficient.
using HPoly = std::map<int, GaussRat>;
// Normal-ordered operator: monomial exponents -> coefficient.
using Op = std::map<MomentIndex, HPoly>;
// Polynomial in raw Weyl-expectation symbols: sorted symbol multiset -> coefficient.
using EMono = std::vector<MomentIndex>;
using EPoly = std::map<EMono, HPoly>;

void hp_add(HPoly& h, int pw, const GaussRat& g) {
    if (g.is_zero()) return;
    auto& c = h[pw];
    c = c + g;
    if (c.is_zero()) h.erase(pw);
}

HPoly hp_mul(const HPoly& a, const HPoly& b) {
    HPoly r;
    for (const auto& [pa, ga] : a)
        for (const auto& [pb, gb] : b) hp_add(r, pa + pb, ga * gb);
    return r;
}

void op_add(Op& op, const MomentIndex& m, int pw, const GaussRat& g) {
    hp_add(op[m], pw, g);
    if (op[m].empty()) op.erase(m);
}

GaussRat i_power(int k) {
    switch (((k % 4) + 4) % 4) {
        case 0: return {Rat(1), Rat(0)};
        case 1: return {Rat(0), Rat(1)};
        case 2: return {Rat(-1), Rat(0)};
        default: return {Rat(0), Rat(-1)};
    }
}

// pi^b q^c = sum_j (-i hbar)^j j! C(b,j) C(c,j) q^(c-j) pi^(b-j), applied per DOF.
Op op_mul(const Op& A, const Op& B) {
    Op r;
    for (const auto& [ma, ha] : A) {
        for (const auto& [mb, hb] : B) {
            const int dofs = ma.dofs;
            int jmax[2] = {0, 0};
            for (int i = 0; i < dofs; ++i) jmax[i] = std::min(ma.e[i][1], mb.e[i][0]);
            for (int j0 = 0; j0 <= jmax[0]; ++j0) {
                for (int j1 = 0; j1 <= (dofs == 2 ? jmax[1] : 0); ++j1) {
                    const int jtot = j0 + j1;
                    std::int64_t w = factorial(j0) * binomial(ma.e[0][1], j0) * binomial(mb.e[0][0], j0);
                    if (dofs == 2) w *= factorial(j1) * binomial(ma.e[1][1], j1) * binomial(mb.e[1][0], j1);
                    if (w == 0) continue;
                    MomentIndex m;
                    m.dofs = dofs;
                    m.e[0] = {ma.e[0][0] + mb.e[0][0] - j0, ma.e[0][1] + mb.e[0][1] - j0};
                    if (dofs == 2) m.e[1] = {ma.e[1][0] + mb.e[1][0] - j1, ma.e[1][1] + mb.e[1][1] - j1};
                    GaussRat phase = i_power(-jtot);  // (-i)^j
                    GaussRat cw = GaussRat{Rat(w), Rat(0)} * phase;
                    for (const auto& [pa, ga] : ha)
                        for (const auto& [pb, gb] : hb) op_add(r, m, pa + pb + jtot, ga * gb * cw);
                }
            }
        }
    }
    return r;
}

// W(q^a pi^b) = sum_k (-i hbar/2)^k k! C(a,k) C(b,k) q^(a-k) pi^(b-k), per DOF.
Op weyl_to_normal(const MomentIndex& w) {
    Op r;
    const int dofs = w.dofs;
    int kmax[2] = {std::min(w.e[0][0], w.e[0][1]), 0};
    if (dofs == 2) kmax[1] = std::min(w.e[1][0], w.e[1][1]);
    for (int k0 = 0; k0 <= kmax[0]; ++k0) {
        for (int k1 = 0; k1 <= (dofs == 2 ? kmax[1] : 0); ++k1) {
            const int ktot = k0 + k1;
            std::int64_t wt = factorial(k0) * binomial(w.e[0][0], k0) * binomial(w.e[0][1], k0);
            if (dofs == 2) wt *= factorial(k1) * binomial(w.e[1][0], k1) * binomial(w.e[1][1], k1);
            if (wt == 0) continue;
            MomentIndex m;
            m.dofs = dofs;
            m.e[0] = {w.e[0][0] - k0, w.e[0][1] - k0};
            if (dofs == 2) m.e[1] = {w.e[1][0] - k1, w.e[1][1] - k1};
            GaussRat c = GaussRat{Rat(wt, std::int64_t(1) << ktot), Rat(0)} * i_power(-ktot);
            op_add(r, m, ktot, c);
        }
    }
    return r;
}

// q^a pi^b = sum_k (i hbar/2)^k k! C(a,k) C(b,k) W(q^(a-k) pi^(b-k)), per DOF.
std::map<MomentIndex, HPoly> normal_to_weyl(const Op& op) {
    std::map<MomentIndex, HPoly> r;
    for (const auto& [m, h] : op) {
        const int dofs = m.dofs;
        int kmax[2] = {std::min(m.e[0][0], m.e[0][1]), 0};
        if (dofs == 2) kmax[1] = std::min(m.e[1][0], m.e[1][1]);
        for (int k0 = 0; k0 <= kmax[0]; ++k0) {
            for (int k1 = 0; k1 <= (dofs == 2 ? kmax[1] : 0); ++k1) {
                const int ktot = k0 + k1;
                std::int64_t wt = factorial(k0) * binomial(m.e[0][0], k0) * binomial(m.e[0][1], k0);
                if (dofs == 2) wt *= factorial(k1) * binomial(m.e[1][0], k1) * binomial(m.e[1][1], k1);
                if (wt == 0) continue;
                MomentIndex wm;
                wm.dofs = dofs;
                wm.e[0] = {m.e[0][0] - k0, m.e[0][1] - k0};
                if (dofs == 2) wm.e[1] = {m.e[1][0] - k1, m.e[1][1] - k1};
                GaussRat c = GaussRat{Rat(wt, std::int64_t(1) << ktot), Rat(0)} * i_power(ktot);
                for (const auto& [pw, g] : h) hp_add(r[wm], pw + ktot, g * c);
            }
        }
    }
    for (auto it = r.begin(); it != r.end();)
        it = it->second.empty() ? r.erase(it) : std::next(it);
    return r;
}

void epoly_add(EPoly& p, const EMono& m, const HPoly& h) {
    for (const auto& [pw, g] : h) hp_add(p[m], pw, g);
    if (p[m].empty()) p.erase(m);
}

EPoly epoly_mul(const EPoly& a, const EPoly& b) {
    EPoly r;
    for (const auto& [ma, ha] : a) {
        for (const auto& [mb, hb] : b) {
            EMono m = ma;
            m.insert(m.end(), mb.begin(), mb.end());
            std::sort(m.begin(), m.end());
            epoly_add(r, m, hp_mul(ha, hb));
        }
    }
    return r;
}

EPoly epoly_partial(const EPoly& p, const MomentIndex& var) {
    EPoly r;
    for (const auto& [m, h] : p) {
        const auto cnt = std::count(m.begin(), m.end(), var);
        if (cnt == 0) continue;
        EMono dm = m;
        dm.erase(std::find(dm.begin(), dm.end(), var));
        HPoly hh;
        for (const auto& [pw, g] : h) hp_add(hh, pw, g * GaussRat{Rat(cnt), Rat(0)});
        epoly_add(r, dm, hh);
    }
    return r;
}

// {<W_U>, <W_V>} = <[W_U, W_V]> / (i hbar) as a linear combination of raw
// Weyl-expectation symbols.
EPoly e_bracket(const MomentIndex& U, const MomentIndex& V) {
    Op nu = weyl_to_normal(U), nv = weyl_to_normal(V);
    Op ab = op_mul(nu, nv), ba = op_mul(nv, nu);
    for (const auto& [m, h] : ba)
        for (const auto& [pw, g] : h) op_add(ab, m, pw, GaussRat{-g.re, -g.im});
    auto wb = normal_to_weyl(ab);
    EPoly r;
    for (const auto& [m, h] : wb) {
        HPoly hh;
        for (const auto& [pw, g] : h) {
            if (pw < 1) throw Error("weyl oracle: commutator term without hbar factor");
            hp_add(hh, pw - 1, g.times_minus_i());
        }
        EMono mono;
        if (m.order() > 0) mono.push_back(m);
        epoly_add(r, mono, hh);
    }
    return r;
}

// Delta(A) expanded over raw Weyl symbols; the centers enter through the
// order-1 symbols themselves.
EPoly central_expansion(const MomentIndex& A) {
    EPoly r;
    const int dofs = A.dofs;
    const int k0 = A.e[0][0], l0 = A.e[0][1];
    const int k1 = dofs == 2 ? A.e[1][0] : 0, l1 = dofs == 2 ? A.e[1][1] : 0;
    for (int j0 = 0; j0 <= k0; ++j0)
        for (int m0 = 0; m0 <= l0; ++m0)
            for (int j1 = 0; j1 <= k1; ++j1)
                for (int m1 = 0; m1 <= l1; ++m1) {
                    std::int64_t w = binomial(k0, j0) * binomial(l0, m0) * binomial(k1, j1) * binomial(l1, m1);
                    const int sgn = (k0 - j0) + (l0 - m0) + (k1 - j1) + (l1 - m1);
                    EMono mono;
                    MomentIndex inner;
                    inner.dofs = dofs;
                    inner.e[0] = {j0, m0};
                    if (dofs == 2) inner.e[1] = {j1, m1};
                    if (inner.order() > 0) mono.push_back(inner);
                    auto push_center = [&](int dof, int which, int count) {
                        MomentIndex c;
                        c.dofs = dofs;
                        c.e[dof][which] = 1;
                        for (int t = 0; t < count; ++t) mono.push_back(c);
                    };
                    push_center(0, 0, k0 - j0);
                    push_center(0, 1, l0 - m0);
                    if (dofs == 2) {
                        push_center(1, 0, k1 - j1);
                        push_center(1, 1, l1 - m1);
                    }
                    std::sort(mono.begin(), mono.end());
                    HPoly h;
                    hp_add(h, 0, GaussRat{Rat(sgn % 2 == 0 ? w : -w), Rat(0)});
                    epoly_add(r, mono, h);
                }
    return r;
}

// Re-express raw symbols through central moments at given rational centers
// and multiply out. Order-1 moments vanish; imaginary parts must cancel.
MomentPolynomial substitute_centers(const EPoly& P, const std::array<Rat, 4>& centers) {
    auto center_of = [&](const MomentIndex& v) -> Rat {
        // v is an order-1 symbol: q_i or pi_i
        for (int i = 0; i < v.dofs; ++i) {
            if (v.e[i][0] == 1) return centers[2 * i];
            if (v.e[i][1] == 1) return centers[2 * i + 1];
        }
        throw Error("weyl oracle: bad center symbol");
    };

    // expansion of one raw symbol e_C as MomentPolynomial (no hbar)
    auto expand_sym = [&](const MomentIndex& C) {
        MomentPolynomial p;
        if (C.order() == 1) {
            p.terms.push_back({center_of(C), 0, {}});
            p.terms.push_back({Rat(1), 0, {C}});  // order-1 moment, drops in normalize
            p.normalize();
            return p;
        }
        const int dofs = C.dofs;
        const int k0 = C.e[0][0], l0 = C.e[0][1];
        const int k1 = dofs == 2 ? C.e[1][0] : 0, l1 = dofs == 2 ? C.e[1][1] : 0;
        for (int j0 = 0; j0 <= k0; ++j0)
            for (int m0 = 0; m0 <= l0; ++m0)
                for (int j1 = 0; j1 <= k1; ++j1)
                    for (int m1 = 0; m1 <= l1; ++m1) {
                        Rat c(binomial(k0, j0) * binomial(l0, m0) * binomial(k1, j1) * binomial(l1, m1));
                        for (int t = 0; t < k0 - j0; ++t) c *= centers[0];
                        for (int t = 0; t < l0 - m0; ++t) c *= centers[1];
                        for (int t = 0; t < k1 - j1; ++t) c *= centers[2];
                        for (int t = 0; t < l1 - m1; ++t) c *= centers[3];
                        MomentIndex inner;
                        inner.dofs = dofs;
                        inner.e[0] = {j0, m0};
                        if (dofs == 2) inner.e[1] = {j1, m1};
                        std::vector<MomentIndex> fs;
                        if (inner.order() > 0) fs.push_back(inner);
                        p.terms.push_back({c, 0, std::move(fs)});
                    }
        p.normalize();
        return p;
    };

    auto mp_mul = [](const MomentPolynomial& a, const MomentPolynomial& b) {
        MomentPolynomial r;
        for (const auto& ta : a.terms)
            for (const auto& tb : b.terms) {
                MomentTerm t;
                t.coeff = ta.coeff * tb.coeff;
                t.hbar_pow = ta.hbar_pow + tb.hbar_pow;
                t.factors = ta.factors;
                t.factors.insert(t.factors.end(), tb.factors.begin(), tb.factors.end());
                r.terms.push_back(std::move(t));
            }
        r.normalize();
        return r;
    };

    MomentPolynomial total;
    for (const auto& [mono, h] : P) {
        MomentPolynomial prod;
        prod.terms.push_back({Rat(1), 0, {}});
        for (const auto& v : mono) prod = mp_mul(prod, expand_sym(v));
        for (const auto& [pw, g] : h) {
            if (!g.im.is_zero()) throw Error("weyl oracle: imaginary coefficient survived");
            MomentPolynomial scaled = prod.scaled(g.re);
            for (auto& t : scaled.terms) t.hbar_pow += pw;
            total = total + scaled;
        }
    }
    total.normalize();
    return total;
}

}  // namespace

MomentPolynomial weyl_bracket_oracle(const MomentIndex& A, const MomentIndex& B) {
    if (!A.valid() || !B.valid() || A.dofs != B.dofs) throw ConfigError("weyl_bracket_oracle: bad indices");
    if (A.order() > 6 || B.order() > 6)
        throw DegreeTooLarge("weyl_bracket_oracle: degree above the desk-scale cap of 6");
    if (A.order() <= 1 || B.order() <= 1) return {};

    EPoly PA = central_expansion(A), PB = central_expansion(B);

    // variable support of each side
    auto support = [](const EPoly& p) {
        std::vector<MomentIndex> vars;
        for (const auto& [m, h] : p)
            for (const auto& v : m)
                if (std::find(vars.begin(), vars.end(), v) == vars.end()) vars.push_back(v);
        return vars;
    };

    EPoly R;
    for (const auto& U : support(PA)) {
        EPoly dA = epoly_partial(PA, U);
        if (dA.empty()) continue;
        for (const auto& V : support(PB)) {
            EPoly dB = epoly_partial(PB, V);
            if (dB.empty()) continue;
            EPoly br = e_bracket(U, V);
            if (br.empty()) continue;
            EPoly term = epoly_mul(epoly_mul(dA, dB), br);
            for (const auto& [m, h] : term) epoly_add(R, m, h);
        }
    }

    MomentPolynomial at_zero = substitute_centers(R, {Rat(0), Rat(0), Rat(0), Rat(0)});
    MomentPolynomial at_rand = substitute_centers(R, {Rat(1, 3), Rat(2, 5), Rat(-1, 2), Rat(3, 7)});
    if (!(at_zero == at_rand))
        throw Error("weyl oracle: result not translation invariant (internal error)");
    return at_zero;
}

}  // namespace momdyn
