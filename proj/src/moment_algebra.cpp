#include "momdyn/moment_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"

namespace momdyn {

namespace {

std::string dof_part(const char* qname, int k) {
    if (k == 0) return {};
    if (k == 1) return qname;
    return std::string(qname) + std::to_string(k);
}

}  // namespace

std::string MomentIndex::key() const {
    if (order() == 0) return "1";
    if (dofs == 1) {
        std::string s = dof_part("q", e[0][0]) + dof_part("pi", e[0][1]);
        return s;
    }
    std::string s;
    const char* names[4] = {"q1", "pi1", "q2", "pi2"};
    int vals[4] = {e[0][0], e[0][1], e[1][0], e[1][1]};
    for (int i = 0; i < 4; ++i) {
        if (vals[i] == 0) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (vals[i] > 1) s += "^" + std::to_string(vals[i]);
    }
    return s;
}

MomentIndex MomentIndex::parse(const std::string& key, int dofs) {
    MomentIndex m;
    m.dofs = dofs;
    if (key == "1") return m;
    auto fail = [&] { throw ConfigError("bad moment key '" + key + "'"); };
    std::size_t i = 0;
    auto read_int = [&](int dflt) {
        if (i >= key.size() || !std::isdigit(static_cast<unsigned char>(key[i]))) return dflt;
        int v = 0;
        while (i < key.size() && std::isdigit(static_cast<unsigned char>(key[i]))) v = 10 * v + (key[i++] - '0');
        return v;
    };
    if (dofs == 1) {
        while (i < key.size()) {
            if (key[i] == 'q') {
                ++i;
                m.e[0][0] += read_int(1);
            } else if (key.compare(i, 2, "pi") == 0) {
                i += 2;
                m.e[0][1] += read_int(1);
            } else {
                fail();
            }
        }
        return m;
    }
    // two DOF: factors "q1", "pi2", optional "^k", joined by '*'
    while (i < key.size()) {
        int which_q;  // 0 = q, 1 = pi
        if (key.compare(i, 2, "pi") == 0) {
            which_q = 1;
            i += 2;
        } else if (key[i] == 'q') {
            which_q = 0;
            ++i;
        } else {
            fail();
            return m;
        }
        int dof = read_int(-1);
        if (dof != 1 && dof != 2) fail();
        int pw = 1;
        if (i < key.size() && key[i] == '^') {
            ++i;
            pw = read_int(-1);
            if (pw < 1) fail();
        }
        m.e[dof - 1][which_q] += pw;
        if (i < key.size()) {
            if (key[i] != '*') fail();
            ++i;
        }
    }
    if (!m.valid()) fail();
    return m;
}

MomentPolynomial& MomentPolynomial::normalize() {
    std::vector<MomentTerm> out;
    for (auto& t : terms) {
        if (t.coeff.is_zero()) continue;
        bool zero = false;
        std::vector<MomentIndex> keep;
        for (auto& f : t.factors) {
            if (f.order() == 1) {
                zero = true;  // Delta(q), Delta(pi) vanish identically
                break;
            }
            if (f.order() == 0) continue;  // constant factor
            keep.push_back(f);
        }
        if (zero) continue;
        std::sort(keep.begin(), keep.end());
        out.push_back({t.coeff, t.hbar_pow, std::move(keep)});
    }
    std::sort(out.begin(), out.end(), [](const MomentTerm& a, const MomentTerm& b) {
        if (a.hbar_pow != b.hbar_pow) return a.hbar_pow < b.hbar_pow;
        return a.factors < b.factors;
    });
    terms.clear();
    for (auto& t : out) {
        if (!terms.empty() && terms.back().hbar_pow == t.hbar_pow && terms.back().factors == t.factors)
            terms.back().coeff += t.coeff;
        else
            terms.push_back(std::move(t));
    }
    std::erase_if(terms, [](const MomentTerm& t) { return t.coeff.is_zero(); });
    return *this;
}

MomentPolynomial MomentPolynomial::truncated(int s) const { return truncate(*this, s); }

MomentPolynomial MomentPolynomial::operator+(const MomentPolynomial& o) const {
    MomentPolynomial r = *this;
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    return r.normalize(), r;
}

MomentPolynomial MomentPolynomial::operator-(const MomentPolynomial& o) const {
    return *this + o.scaled(Rat(-1));
}

MomentPolynomial MomentPolynomial::scaled(const Rat& c) const {
    MomentPolynomial r = *this;
    for (auto& t : r.terms) t.coeff *= c;
    return r.normalize(), r;
}

double MomentPolynomial::eval(const MomentState& st) const {
    double acc = 0.0;
    for (const auto& t : terms) {
        double v = t.coeff.to_double() * std::pow(st.hbar, t.hbar_pow);
        for (const auto& f : t.factors) v *= st.moment(f);
        acc += v;
    }
    return acc;
}

std::string MomentPolynomial::str() const {
    if (terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms) {
        Rat c = t.coeff;
        bool neg = c.num() < 0;
        if (neg) c = -c;
        os << (first ? (neg ? "-" : "") : (neg ? " - " : " + "));
        first = false;
        std::vector<std::string> parts;
        if (!(c == Rat(1)) || (t.hbar_pow == 0 && t.factors.empty())) parts.push_back(c.str());
        if (t.hbar_pow == 1) parts.push_back("hbar");
        if (t.hbar_pow > 1) parts.push_back("hbar^" + std::to_string(t.hbar_pow));
        for (const auto& f : t.factors) parts.push_back(f.key());
        for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "*" : "") << parts[i];
    }
    return os.str();
}

std::int64_t k_coefficient(int n, int a, int b, int c, int d) {
    if (n < 0 || a < 0 || b < 0 || c < 0 || d < 0)
        throw ConfigError("k_coefficient: negative argument");
    const int M = std::min(std::min(a + c, b + d), std::min(a + b, c + d));
    if (n > M) throw ConfigError("k_coefficient: n exceeds min(a+c, b+d, a+b, c+d)");
    std::int64_t sum = 0;
    for (int m = 0; m <= n; ++m) {
        std::int64_t v = factorial(m) * factorial(n - m) * binomial(a, m) * binomial(b, n - m) *
                         binomial(c, n - m) * binomial(d, m);
        sum += (m % 2 == 0) ? v : -v;
    }
    return sum;
}

MomentPolynomial bracket_single_dof_full(const MomentIndex& A, const MomentIndex& B) {
    if (A.dofs != 1 || B.dofs != 1) throw ConfigError("bracket_single_dof: needs 1-DOF indices");
    MomentPolynomial p;
    if (A.order() <= 1 || B.order() <= 1) return p;  // zero symbols bracket to zero
    const int b = A.e[0][0], a = A.e[0][1];
    const int d = B.e[0][0], c = B.e[0][1];
    if (a >= 1 && d >= 1)
        p.terms.push_back({Rat(std::int64_t(a) * d), 0, {MomentIndex::d1(b, a - 1), MomentIndex::d1(d - 1, c)}});
    if (b >= 1 && c >= 1)
        p.terms.push_back({Rat(-std::int64_t(b) * c), 0, {MomentIndex::d1(b - 1, a), MomentIndex::d1(d, c - 1)}});
    const int M = std::min(std::min(a + c, b + d), std::min(a + b, c + d));
    for (int n = 1; n <= M; n += 2) {
        std::int64_t K = k_coefficient(n, a, b, c, d);
        if (K == 0) continue;
        // (i hbar / 2)^(n-1) is real for odd n: sign (-1)^((n-1)/2), weight (hbar/2)^(n-1)
        Rat coeff = Rat(K) / Rat(std::int64_t(1) << (n - 1));
        if (((n - 1) / 2) % 2 == 1) coeff = -coeff;
        p.terms.push_back({coeff, n - 1, {MomentIndex::d1(b + d - n, a + c - n)}});
    }
    return p.normalize(), p;
}

MomentPolynomial bracket_single_dof(const MomentIndex& A, const MomentIndex& B, int s) {
    if (s < 2) throw ConfigError("bracket_single_dof: truncation order must be >= 2");
    return truncate(bracket_single_dof_full(A, B), s);
}

MomentPolynomial truncate(const MomentPolynomial& p, int s) {
    if (s < 2) throw ConfigError("truncate: order must be >= 2");
    MomentPolynomial r;
    for (const auto& t : p.terms)
        if (t.order() <= s) r.terms.push_back(t);
    return r.normalize(), r;
}

std::vector<std::pair<int, int>> uncertainty_check(const MomentState& state) {
    constexpr double tol = 1e-12;
    std::vector<std::pair<int, int>> bad;
    for (int j = 1; j <= state.dofs; ++j) {
        for (int k = 1; k <= state.dofs; ++k) {
            MomentIndex qq, pp, qp;
            if (state.dofs == 1) {
                qq = MomentIndex::d1(2, 0);
                pp = MomentIndex::d1(0, 2);
                qp = MomentIndex::d1(1, 1);
            } else {
                qq = MomentIndex::d2(j == 1 ? 2 : 0, 0, j == 2 ? 2 : 0, 0);
                pp = MomentIndex::d2(0, k == 1 ? 2 : 0, 0, k == 2 ? 2 : 0);
                qp = MomentIndex::d2(j == 1 ? 1 : 0, k == 1 ? 1 : 0, j == 2 ? 1 : 0, k == 2 ? 1 : 0);
            }
            const double lhs = state.moment(qq) * state.moment(pp) - state.moment(qp) * state.moment(qp);
            const double bound = (j == k) ? state.hbar * state.hbar / 4.0 : 0.0;
            if (lhs < bound - tol) bad.emplace_back(j, k);
        }
    }
    return bad;
}

std::string MomentState::to_json() const {
    nlohmann::json j;
    j["hbar"] = hbar;
    nlohmann::json ex;
    if (dofs == 1) {
        ex["q"] = expectations.size() > 0 ? expectations[0] : 0.0;
        ex["pi"] = expectations.size() > 1 ? expectations[1] : 0.0;
    } else {
        ex["q1"] = expectations.size() > 0 ? expectations[0] : 0.0;
        ex["q2"] = expectations.size() > 1 ? expectations[1] : 0.0;
        ex["pi1"] = expectations.size() > 2 ? expectations[2] : 0.0;
        ex["pi2"] = expectations.size() > 3 ? expectations[3] : 0.0;
    }
    j["expectations"] = ex;
    nlohmann::json mo = nlohmann::json::object();
    for (const auto& [idx, v] : moments) mo[idx.key()] = v;
    j["moments"] = mo;
    j["dofs"] = dofs;
    return j.dump(2);
}

MomentState MomentState::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    MomentState st;
    st.dofs = j.value("dofs", 1);
    st.hbar = j.value("hbar", 1.0);
    if (j.contains("expectations")) {
        const auto& ex = j["expectations"];
        if (st.dofs == 1)
            st.expectations = {ex.value("q", 0.0), ex.value("pi", 0.0)};
        else
            st.expectations = {ex.value("q1", 0.0), ex.value("q2", 0.0), ex.value("pi1", 0.0),
                               ex.value("pi2", 0.0)};
    }
    for (auto it = j["moments"].begin(); it != j["moments"].end(); ++it)
        st.moments[MomentIndex::parse(it.key(), st.dofs)] = it.value().get<double>();
    return st;
}

}  // namespace momdyn
