#include "momdyn/realizations.hpp"

#include <algorithm>
#include <cmath>

#include "momdyn/errors.hpp"
#include "momdyn/weyl.hpp"

namespace momdyn {

namespace {

// chart value indices, 1 DOF charts: interleaved (s_i, p_i), casimirs last
constexpr int S1 = 0, P1 = 1, S2 = 2, P2 = 3, S3 = 4, P3 = 5;

}  // namespace

ChartFunction Realization::moment(const MomentIndex& idx) const {
    if (!idx.valid() || idx.dofs != dofs_) throw ConfigError("moment index does not match realization");
    if (auto it = base_.find(idx); it != base_.end()) return it->second;
    {
        std::scoped_lock lock(*cache_mu_);
        if (auto it = cache_.find(idx); it != cache_.end()) return it->second;
    }
    if (dofs_ != 1 || idx.e[0][1] == 0)
        throw MissingPredecessor("moment " + idx.key() + " is not realized and cannot be generated");
    // Delta(q^(m-1) pi^(n+1)) = -1/(2m) {Delta(pi^2), Delta(q^m pi^n)}
    const int m = idx.e[0][0] + 1, n = idx.e[0][1] - 1;
    ChartFunction pred = moment(MomentIndex::d1(m, n));
    ChartFunction pi2 = moment(MomentIndex::d1(0, 2));
    ChartFunction gen = fn_scale(-1.0 / (2.0 * m), poisson_bracket(pi2, pred, chart_->npairs()));
    std::scoped_lock lock(*cache_mu_);
    auto [it, inserted] = cache_.emplace(idx, gen);
    return it->second;
}

std::vector<MomentIndex> Realization::moment_indices() const {
    std::vector<MomentIndex> out;
    if (dofs_ == 1) {
        for (int o = 2; o <= order_; ++o)
            for (int k = o; k >= 0; --k) out.push_back(MomentIndex::d1(k, o - k));
    } else {
        for (int a = 0; a <= 2; ++a)
            for (int b = 0; a + b <= 2; ++b)
                for (int c = 0; a + b + c <= 2; ++c) {
                    const int d = 2 - a - b - c;
                    out.push_back(MomentIndex::d2(a, b, c, d));
                }
    }
    return out;
}

void Realization::check_regular(const ChartPoint& x) const {
    if (!regular_(x)) throw SingularChart("point outside the domain of realization " + name_);
}

MomentState Realization::realize(const ChartPoint& x, double hbar) const {
    check_regular(x);
    MomentState st;
    st.dofs = dofs_;
    st.hbar = hbar;
    st.expectations.assign(2 * dofs_, 0.0);
    for (const auto& idx : moment_indices()) {
        const double v = moment(idx)(x);
        if (!std::isfinite(v)) throw SingularChart("moment " + idx.key() + " non-finite at chart point");
        st.moments[idx] = v;
    }
    return st;
}

ChartFunction generate_moment(const Realization& R, const MomentIndex& target) {
    if (R.dofs() != 1) throw ConfigError("generate_moment: defined for single-DOF realizations");
    if (target.e[0][1] < 1) throw MissingPredecessor("generate_moment: target has no momentum factor");
    return R.moment(target);
}

struct RealizationFactory {
    static Realization make_order2() {
        Realization r;
        r.name_ = "order2";
        r.dofs_ = 1;
        r.order_ = 2;
        r.chart_ = std::make_shared<CanonicalChart>(
            CanonicalChart({{"s", "p"}}, {"U"}));
        r.base_[MomentIndex::d1(2, 0)] =
            ChartFunction::make("D(q2)", [](auto x) { return x[0] * x[0]; });
        r.base_[MomentIndex::d1(1, 1)] =
            ChartFunction::make("D(qpi)", [](auto x) { return x[0] * x[1]; });
        r.base_[MomentIndex::d1(0, 2)] =
            ChartFunction::make("D(pi2)", [](auto x) { return x[1] * x[1] + x[2] / (x[0] * x[0]); });
        r.regular_ = [](const ChartPoint& x) { return x.v[0] > 0.0; };
        r.sample_ = [chart = r.chart_](std::mt19937& rng) {
            std::uniform_real_distribution<double> sU(0.5, 2.0), pU(-1.0, 1.0), uU(0.3, 1.2);
            return ChartPoint(chart, {sU(rng), pU(rng), uU(rng)});
        };
        return r;
    }

    static Realization make_order3_systematic() {
        Realization r;
        r.name_ = "order3_systematic";
        r.dofs_ = 1;
        r.order_ = 3;
        r.chart_ = std::make_shared<CanonicalChart>(
            CanonicalChart({{"s1", "p1"}, {"s2", "p2"}, {"s3", "p3"}}, {"U1"}));
        const int U1 = 6;
        // common denominator sqrt(2 s2^(3/2) sqrt(1-4 p3^2))
        auto denom = [](auto x) {
            auto s2 = x[S2], p3 = x[P3];
            return sqrt(2.0 * s2 * sqrt(s2) * sqrt(1.0 - 4.0 * p3 * p3));
        };
        auto bigP = [](auto x) { return x[P1] * x[S1] + x[P3] * sqrt(x[S2]) + 4.0 * x[S2] * x[P2]; };

        r.base_[MomentIndex::d1(2, 0)] =
            ChartFunction::make("D(q2)", [](auto x) { return x[S1] * x[S1]; });
        r.base_[MomentIndex::d1(1, 1)] =
            ChartFunction::make("D(qpi)", [](auto x) { return x[S1] * x[P1]; });
        r.base_[MomentIndex::d1(0, 2)] = ChartFunction::make("D(pi2)", [](auto x) {
            auto s1 = x[S1], s2 = x[S2], p2 = x[P2], s3 = x[S3], p3 = x[P3];
            auto f1 = 3.0 * sqrt(s2) * (4.0 * p3 * p3 - 1.0) * s3 + 0.5 * s2 * (7.0 - 10.0 * p3 * p3) -
                      16.0 * s2 * s2 * p2 * p2;
            return x[P1] * x[P1] + f1 / (s1 * s1);
        });
        r.base_[MomentIndex::d1(3, 0)] = ChartFunction::make("D(q3)", [denom, U1](auto x) {
            return x[U1] * x[S1] * x[S1] * x[S1] / denom(x);
        });
        r.base_[MomentIndex::d1(2, 1)] = ChartFunction::make("D(q2pi)", [denom, bigP, U1](auto x) {
            return x[U1] * x[S1] * bigP(x) / denom(x);
        });
        r.base_[MomentIndex::d1(1, 2)] = ChartFunction::make("D(qpi2)", [denom, bigP, U1](auto x) {
            auto P = bigP(x);
            return x[U1] * (P * P - x[S2]) / (x[S1] * denom(x));
        });
        // compact display with the -3P term carrying its s2 factor (matches the
        // long Phi display; certified by bracket closure)
        r.base_[MomentIndex::d1(0, 3)] = ChartFunction::make("D(pi3)", [denom, bigP, U1](auto x) {
            auto P = bigP(x);
            auto s2 = x[S2];
            auto T = P * P * P - 3.0 * P * s2 - 4.0 * x[P3] * s2 * sqrt(s2);
            return x[U1] * T / (x[S1] * x[S1] * x[S1] * denom(x));
        });
        r.regular_ = [](const ChartPoint& x) {
            return x.v[S1] > 0.0 && x.v[S2] > 0.0 && std::abs(x.v[P3]) < 0.5;
        };
        r.sample_ = [chart = r.chart_](std::mt19937& rng) {
            std::uniform_real_distribution<double> sU(0.5, 1.8), pU(-0.8, 0.8), p3U(-0.4, 0.4),
                s3U(-1.0, 1.0), uU(0.3, 1.2);
            return ChartPoint(chart, {sU(rng), pU(rng), sU(rng), pU(rng), s3U(rng), p3U(rng), uU(rng)});
        };
        return r;
    }

    static Realization make_order3_ansatz() {
        Realization r;
        r.name_ = "order3_ansatz";
        r.dofs_ = 1;
        r.order_ = 3;
        r.chart_ = std::make_shared<CanonicalChart>(
            CanonicalChart({{"s1", "p1"}, {"s2", "p2"}, {"s3", "p3"}}, {"U"}));
        const int U = 6;
        r.base_[MomentIndex::d1(2, 0)] = ChartFunction::make("D(q2)", [](auto x) {
            return x[S1] * x[S1] + x[S2] * x[S2] + x[S3] * x[S3];
        });
        r.base_[MomentIndex::d1(1, 1)] = ChartFunction::make("D(qpi)", [](auto x) {
            return x[S1] * x[P1] + x[S2] * x[P2] + x[S3] * x[P3];
        });
        r.base_[MomentIndex::d1(0, 2)] = ChartFunction::make("D(pi2)", [U](auto x) {
            auto d12 = x[S1] - x[S2], d13 = x[S1] - x[S3], d23 = x[S2] - x[S3];
            auto F = x[U] * (1.0 / (d12 * d12) + 1.0 / (d13 * d13) + 1.0 / (d23 * d23));
            return x[P1] * x[P1] + x[P2] * x[P2] + x[P3] * x[P3] + F;
        });
        r.base_[MomentIndex::d1(3, 0)] = ChartFunction::make("D(q3)", [](auto x) {
            return x[S1] * x[S1] * x[S1] + x[S2] * x[S2] * x[S2] + x[S3] * x[S3] * x[S3];
        });
        r.regular_ = [](const ChartPoint& x) {
            const double gap = 1e-6;
            return std::abs(x.v[S1] - x.v[S2]) > gap && std::abs(x.v[S1] - x.v[S3]) > gap &&
                   std::abs(x.v[S2] - x.v[S3]) > gap;
        };
        r.sample_ = [chart = r.chart_](std::mt19937& rng) {
            std::uniform_real_distribution<double> b1(0.4, 0.8), b2(1.0, 1.4), b3(1.6, 2.0),
                pU(-0.8, 0.8), uU(0.3, 1.2);
            return ChartPoint(chart, {b1(rng), pU(rng), b2(rng), pU(rng), b3(rng), pU(rng), uU(rng)});
        };
        return r;
    }

    static Realization make_order4_ansatz() {
        Realization r;
        r.name_ = "order4_ansatz";
        r.dofs_ = 1;
        r.order_ = 4;
        r.chart_ = std::make_shared<CanonicalChart>(CanonicalChart(
            {{"s1", "p1"}, {"s2", "p2"}, {"s3", "p3"}, {"s4", "p4"}, {"s5", "p5"}}, {"U", "C"}));
        const int U = 10, C = 11;
        r.base_[MomentIndex::d1(0, 2)] = ChartFunction::make("D(pi2)", [U](auto x) {
            using Sc = typename decltype(x)::value_type;
            Sc acc{};
            for (int i = 0; i < 5; ++i) acc = acc + x[2 * i + 1] * x[2 * i + 1];
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j) {
                    auto d = x[2 * i] - x[2 * j];
                    acc = acc + x[U] / (d * d);
                }
            return acc;
        });
        r.base_[MomentIndex::d1(2, 0)] = ChartFunction::make("D(q2)", [](auto x) {
            using Sc = typename decltype(x)::value_type;
            Sc acc{};
            for (int i = 0; i < 5; ++i) acc = acc + x[2 * i] * x[2 * i];
            return acc;
        });
        r.base_[MomentIndex::d1(3, 0)] = ChartFunction::make("D(q3)", [C](auto x) {
            using Sc = typename decltype(x)::value_type;
            Sc acc{};
            for (int i = 0; i < 5; ++i) acc = acc + x[2 * i] * x[2 * i] * x[2 * i];
            return x[C] * acc;
        });
        r.base_[MomentIndex::d1(4, 0)] = ChartFunction::make("D(q4)", [C](auto x) {
            using Sc = typename decltype(x)::value_type;
            Sc s4{}, s2{};
            for (int i = 0; i < 5; ++i) {
                auto sq = x[2 * i] * x[2 * i];
                s2 = s2 + sq;
                s4 = s4 + sq * sq;
            }
            return x[C] * x[C] * s4 + s2 * s2;
        });
        r.regular_ = [](const ChartPoint& x) {
            const double gap = 1e-6;
            for (int i = 0; i < 5; ++i)
                for (int j = i + 1; j < 5; ++j)
                    if (std::abs(x.v[2 * i] - x.v[2 * j]) <= gap) return false;
            return true;
        };
        r.sample_ = [chart = r.chart_](std::mt19937& rng) {
            std::uniform_real_distribution<double> pU(-0.8, 0.8), uU(0.3, 1.2), cU(-0.8, 0.8);
            std::vector<double> v;
            for (int i = 0; i < 5; ++i) {
                std::uniform_real_distribution<double> band(0.4 + 1.0 * i, 0.8 + 1.0 * i);
                v.push_back(band(rng));
                v.push_back(pU(rng));
            }
            v.push_back(uU(rng));
            v.push_back(cU(rng));
            return ChartPoint(chart, std::move(v));
        };
        return r;
    }

    static Realization make_twodof() {
        Realization r;
        r.name_ = "twodof_order2";
        r.dofs_ = 2;
        r.order_ = 2;
        r.chart_ = std::make_shared<CanonicalChart>(CanonicalChart(
            {{"s1", "p1"}, {"s2", "p2"}, {"beta", "pbeta"}, {"alpha", "palpha"}}, {"U1", "U2"}));
        [[maybe_unused]] constexpr int B = 4, PB = 5, AL = 6, PA = 7, U1 = 8, U2 = 9;
        auto amp = [](auto x) {
            auto u1 = x[U1], pa = x[PA];
            auto g = u1 - 4.0 * pa * pa;
            return sqrt(x[U2] - u1 * u1 + g * g);
        };
        // Phi and Gamma of the beta/alpha chart
        auto phi = [amp](auto x) {
            auto sb = sin(x[B]);
            return (x[PA] - x[PB]) * (x[PA] - x[PB]) +
                   (x[U1] - 4.0 * x[PA] * x[PA] - amp(x) * sin(x[AL] + x[B])) / (2.0 * sb * sb);
        };
        auto gam = [amp](auto x) {
            auto sb = sin(x[B]);
            return (x[PA] + x[PB]) * (x[PA] + x[PB]) +
                   (x[U1] - 4.0 * x[PA] * x[PA] - amp(x) * sin(x[AL] - x[B])) / (2.0 * sb * sb);
        };

        r.base_[MomentIndex::d2(2, 0, 0, 0)] =
            ChartFunction::make("D(q1^2)", [](auto x) { return x[S1] * x[S1]; });
        r.base_[MomentIndex::d2(1, 1, 0, 0)] =
            ChartFunction::make("D(q1pi1)", [](auto x) { return x[S1] * x[P1]; });
        r.base_[MomentIndex::d2(0, 2, 0, 0)] = ChartFunction::make("D(pi1^2)", [phi](auto x) {
            return x[P1] * x[P1] + phi(x) / (x[S1] * x[S1]);
        });
        r.base_[MomentIndex::d2(0, 0, 2, 0)] =
            ChartFunction::make("D(q2^2)", [](auto x) { return x[S2] * x[S2]; });
        r.base_[MomentIndex::d2(0, 0, 1, 1)] =
            ChartFunction::make("D(q2pi2)", [](auto x) { return x[S2] * x[P2]; });
        r.base_[MomentIndex::d2(0, 0, 0, 2)] = ChartFunction::make("D(pi2^2)", [gam](auto x) {
            return x[P2] * x[P2] + gam(x) / (x[S2] * x[S2]);
        });
        r.base_[MomentIndex::d2(1, 0, 1, 0)] =
            ChartFunction::make("D(q1q2)", [](auto x) { return x[S1] * x[S2] * cos(x[B]); });
        r.base_[MomentIndex::d2(0, 1, 1, 0)] = ChartFunction::make("D(pi1q2)", [](auto x) {
            return x[P1] * x[S2] * cos(x[B]) + sin(x[B]) * (x[S2] / x[S1]) * (x[PA] - x[PB]);
        });
        r.base_[MomentIndex::d2(1, 0, 0, 1)] = ChartFunction::make("D(pi2q1)", [](auto x) {
            return x[P2] * x[S1] * cos(x[B]) - sin(x[B]) * (x[S1] / x[S2]) * (x[PA] + x[PB]);
        });
        r.base_[MomentIndex::d2(0, 1, 0, 1)] = ChartFunction::make("D(pi1pi2)", [amp](auto x) {
            auto s1 = x[S1], p1 = x[P1], s2 = x[S2], p2 = x[P2];
            auto cb = cos(x[B]), sb = sin(x[B]);
            auto pa = x[PA], pb = x[PB];
            auto inv12 = 1.0 / (s1 * s2);
            return p1 * p2 * cb - cb * pb * pb * inv12 +
                   cb * (3.0 - cb * cb) / (sb * sb) * pa * pa * inv12 -
                   sb * pb * (p2 / s1 + p1 / s2) + sb * pa * (p2 / s1 - p1 / s2) -
                   cb / (2.0 * sb * sb) * x[U1] * inv12 +
                   sin(x[AL]) / (2.0 * sb * sb) * amp(x) * inv12;
        });
        r.regular_ = [](const ChartPoint& x) {
            const double u1 = x.v[U1], pa = x.v[PA], g = u1 - 4.0 * pa * pa;
            const double rad = x.v[U2] - u1 * u1 + g * g;
            return x.v[S1] > 0.0 && x.v[S2] > 0.0 && std::abs(std::sin(x.v[B])) > 1e-9 && rad >= 0.0;
        };
        r.sample_ = [chart = r.chart_](std::mt19937& rng) {
            std::uniform_real_distribution<double> sU(0.5, 1.8), pU(-0.8, 0.8), bU(0.4, 2.7),
                u1U(0.5, 1.5), radU(0.2, 1.5), aU(0.0, 6.28);
            const double u1 = u1U(rng);
            return ChartPoint(chart, {sU(rng), pU(rng), sU(rng), pU(rng), bU(rng), pU(rng), aU(rng),
                                      pU(rng), u1, u1 * u1 + radU(rng)});
        };
        return r;
    }
};

const Realization& realization(const std::string& name) {
    static const std::map<std::string, Realization> catalog = [] {
        std::map<std::string, Realization> m;
        m.emplace("order2", RealizationFactory::make_order2());
        m.emplace("order3_systematic", RealizationFactory::make_order3_systematic());
        m.emplace("order3_ansatz", RealizationFactory::make_order3_ansatz());
        m.emplace("order4_ansatz", RealizationFactory::make_order4_ansatz());
        m.emplace("twodof_order2", RealizationFactory::make_twodof());
        return m;
    }();
    auto it = catalog.find(name);
    if (it == catalog.end()) throw ConfigError("unknown realization '" + name + "'");
    return it->second;
}

std::vector<std::string> realization_names() {
    return {"order2", "order3_systematic", "order3_ansatz", "order4_ansatz", "twodof_order2"};
}

ClosureReport closure_certificate(const Realization& R, int npoints, std::mt19937& rng,
                                  bool only_second_order_pairs) {
    const auto idx = R.moment_indices();
    ClosureReport rep;
    rep.points = npoints;

    std::vector<ChartPoint> pts;
    std::vector<MomentState> states;
    pts.reserve(npoints);
    for (int t = 0; t < npoints; ++t) {
        pts.push_back(R.sample_regular(rng));
        states.push_back(R.realize(pts.back()));
    }

    for (std::size_t i = 0; i < idx.size(); ++i) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            const auto &A = idx[i], &B = idx[j];
            if (only_second_order_pairs && A.order() > 2 && B.order() > 2) continue;
            auto expected = weyl_bracket_oracle(A, B).truncated(R.order());
            auto br = poisson_bracket(R.moment(A), R.moment(B), R.chart()->npairs());
            ++rep.pairs_checked;
            for (int t = 0; t < npoints; ++t) {
                const double lhs = br(pts[t]);
                const double rhs = expected.eval(states[t]);
                const double rel = std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
                if (rel > rep.max_rel) {
                    rep.max_rel = rel;
                    rep.worst_pair = "{" + A.key() + "," + B.key() + "}";
                }
            }
        }
    }
    return rep;
}

MomentState realize_order2(const ChartPoint& x, double hbar) {
    return realization("order2").realize(x, hbar);
}
MomentState realize_order3_systematic(const ChartPoint& x, double hbar) {
    return realization("order3_systematic").realize(x, hbar);
}
MomentState realize_order3_ansatz(const ChartPoint& x, double hbar) {
    return realization("order3_ansatz").realize(x, hbar);
}
MomentState realize_order4_ansatz(const ChartPoint& x, double hbar) {
    return realization("order4_ansatz").realize(x, hbar);
}
MomentState realize_twodof(const ChartPoint& x, double hbar) {
    return realization("twodof_order2").realize(x, hbar);
}

}  // namespace momdyn
