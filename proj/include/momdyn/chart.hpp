#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "momdyn/dual.hpp"
#include "momdyn/errors.hpp"

namespace momdyn {

// Layout convention for chart values: [c0, m0, c1, m1, ..., casimir0, ...]
// (coordinate/momentum interleaved pair by pair, casimirs at the end).
class CanonicalChart {
  public:
    CanonicalChart() = default;
    CanonicalChart(std::vector<std::pair<std::string, std::string>> pairs, std::vector<std::string> casimirs)
        : pairs_(std::move(pairs)), casimirs_(std::move(casimirs)) {
        if (pairs_.empty()) throw Error("CanonicalChart: need at least one canonical pair");
        for (const auto& [c, m] : pairs_) {
            names_.push_back(c);
            names_.push_back(m);
        }
        for (const auto& u : casimirs_) names_.push_back(u);
        for (std::size_t i = 0; i < names_.size(); ++i)
            for (std::size_t j = i + 1; j < names_.size(); ++j)
                if (names_[i] == names_[j]) throw Error("CanonicalChart: duplicate name " + names_[i]);
    }

    int npairs() const { return static_cast<int>(pairs_.size()); }
    int ncasimirs() const { return static_cast<int>(casimirs_.size()); }
    int dim() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<std::pair<std::string, std::string>>& pairs() const { return pairs_; }
    const std::vector<std::string>& casimirs() const { return casimirs_; }
    bool is_casimir_index(int i) const { return i >= 2 * npairs(); }

    int index(const std::string& name) const {
        for (std::size_t i = 0; i < names_.size(); ++i)
            if (names_[i] == name) return static_cast<int>(i);
        throw Error("CanonicalChart: unknown name " + name);
    }

  private:
    std::vector<std::pair<std::string, std::string>> pairs_;
    std::vector<std::string> casimirs_;
    std::vector<std::string> names_;
};

struct ChartPoint {
    std::shared_ptr<const CanonicalChart> chart;
    std::vector<double> v;

    ChartPoint() = default;
    ChartPoint(std::shared_ptr<const CanonicalChart> c, std::vector<double> vals)
        : chart(std::move(c)), v(std::move(vals)) {
        if (static_cast<int>(v.size()) != chart->dim()) throw Error("ChartPoint: dimension mismatch");
        for (double x : v)
            if (!std::isfinite(x)) throw Error("ChartPoint: non-finite component");
    }
    double operator[](const std::string& name) const { return v[chart->index(name)]; }
    double& operator[](const std::string& name) { return v[chart->index(name)]; }
};

inline constexpr int kMaxChartVars = 16;
inline constexpr int kNumDualLevels = 7;  // plain double plus six nested dual levels

namespace detail {

template <int L>
struct scalar_at {
    using type = Dual<typename scalar_at<L - 1>::type>;
};
template <>
struct scalar_at<0> {
    using type = double;
};
template <int L>
using scalar_at_t = typename scalar_at<L>::type;

struct FnTable {
    std::function<scalar_at_t<0>(std::span<const scalar_at_t<0>>)> f0;
    std::function<scalar_at_t<1>(std::span<const scalar_at_t<1>>)> f1;
    std::function<scalar_at_t<2>(std::span<const scalar_at_t<2>>)> f2;
    std::function<scalar_at_t<3>(std::span<const scalar_at_t<3>>)> f3;
    std::function<scalar_at_t<4>(std::span<const scalar_at_t<4>>)> f4;
    std::function<scalar_at_t<5>(std::span<const scalar_at_t<5>>)> f5;
    std::function<scalar_at_t<6>(std::span<const scalar_at_t<6>>)> f6;

    template <int L>
    auto& slot() {
        if constexpr (L == 0)
            return f0;
        else if constexpr (L == 1)
            return f1;
        else if constexpr (L == 2)
            return f2;
        else if constexpr (L == 3)
            return f3;
        else if constexpr (L == 4)
            return f4;
        else if constexpr (L == 5)
            return f5;
        else
            return f6;
    }
    template <int L>
    const auto& slot() const {
        return const_cast<FnTable*>(this)->slot<L>();
    }
};

}  // namespace detail

// A smooth scalar function on a chart, evaluable on plain doubles or nested
// duals up to a fixed depth. Derived functions (Poisson brackets) consume one
// dual level per nesting.
class ChartFunction {
  public:
    ChartFunction() = default;

    template <class F>
    static ChartFunction make(std::string label, F f) {
        auto impl = std::make_shared<Impl>();
        impl->label = std::move(label);
        impl->levels = kNumDualLevels;
        fill_all<0>(impl->table, f);
        ChartFunction cf;
        cf.impl_ = std::move(impl);
        return cf;
    }

    const std::string& label() const { return impl_->label; }
    int levels() const { return impl_ ? impl_->levels : 0; }
    bool valid() const { return static_cast<bool>(impl_); }

    template <class S>
    S eval(std::span<const S> x) const {
        constexpr int L = dual_depth<S>::value;
        static_assert(L < kNumDualLevels, "dual nesting exceeds the provisioned depth");
        if (!impl_ || L >= impl_->levels)
            throw Error("ChartFunction '" + (impl_ ? impl_->label : std::string("<null>")) +
                        "': dual depth exhausted (needed level " + std::to_string(L) + ")");
        return impl_->table.template slot<L>()(x);
    }

    double operator()(const ChartPoint& x) const { return eval<double>(std::span<const double>(x.v)); }
    double operator()(std::span<const double> x) const { return eval<double>(x); }

    friend ChartFunction poisson_bracket(const ChartFunction& f, const ChartFunction& g, int npairs);
    friend ChartFunction fn_product(const ChartFunction& f, const ChartFunction& g);
    friend ChartFunction fn_linear(double a, const ChartFunction& f, double b, const ChartFunction& g);
    friend ChartFunction fn_scale(double a, const ChartFunction& f);

  private:
    struct Impl {
        std::string label;
        int levels = 0;
        detail::FnTable table;
    };

    template <int L, class F>
    static void fill_all(detail::FnTable& t, const F& f) {
        using S = detail::scalar_at_t<L>;
        t.slot<L>() = [f](std::span<const S> x) -> S { return f(x); };
        if constexpr (L + 1 < kNumDualLevels) fill_all<L + 1>(t, f);
    }

    template <int L>
    static void fill_bracket(detail::FnTable& t, const ChartFunction& f, const ChartFunction& g, int npairs) {
        using S = detail::scalar_at_t<L>;
        using DS = Dual<S>;
        t.slot<L>() = [f, g, npairs](std::span<const S> x) -> S {
            const std::size_t n = x.size();
            std::array<DS, kMaxChartVars> buf;
            for (std::size_t i = 0; i < n; ++i) buf[i] = DS{x[i], S{}};
            const std::span<const DS> xs(buf.data(), n);
            S acc{};
            for (int k = 0; k < npairs; ++k) {
                const int is = 2 * k, ip = 2 * k + 1;
                buf[is].b = S(1.0);
                DS fs = f.eval<DS>(xs);
                DS gs = g.eval<DS>(xs);
                buf[is].b = S{};
                buf[ip].b = S(1.0);
                DS fp = f.eval<DS>(xs);
                DS gp = g.eval<DS>(xs);
                buf[ip].b = S{};
                acc = acc + (fs.b * gp.b - fp.b * gs.b);
            }
            return acc;
        };
        if constexpr (L + 2 < kNumDualLevels) fill_bracket<L + 1>(t, f, g, npairs);
    }

    template <int L, class Op>
    static void fill_binary(detail::FnTable& t, const ChartFunction& f, const ChartFunction& g, Op op) {
        using S = detail::scalar_at_t<L>;
        t.slot<L>() = [f, g, op](std::span<const S> x) -> S { return op(f.eval<S>(x), g.eval<S>(x)); };
        if constexpr (L + 1 < kNumDualLevels) fill_binary<L + 1>(t, f, g, op);
    }

    std::shared_ptr<const Impl> impl_;
};

// Canonical Poisson bracket over the first `npairs` coordinate/momentum pairs;
// casimir directions do not enter the sum, so {f, h(casimirs)} vanishes
// identically.
inline ChartFunction poisson_bracket(const ChartFunction& f, const ChartFunction& g, int npairs) {
    auto impl = std::make_shared<ChartFunction::Impl>();
    impl->label = "{" + f.label() + "," + g.label() + "}";
    impl->levels = std::min(f.levels(), g.levels()) - 1;
    if (impl->levels < 1) throw Error("poisson_bracket: dual depth exhausted for " + impl->label);
    ChartFunction::fill_bracket<0>(impl->table, f, g, npairs);
    ChartFunction cf;
    cf.impl_ = std::move(impl);
    return cf;
}

inline ChartFunction fn_product(const ChartFunction& f, const ChartFunction& g) {
    auto impl = std::make_shared<ChartFunction::Impl>();
    impl->label = f.label() + "*" + g.label();
    impl->levels = std::min(f.levels(), g.levels());
    ChartFunction::fill_binary<0>(impl->table, f, g, [](const auto& a, const auto& b) { return a * b; });
    ChartFunction cf;
    cf.impl_ = std::move(impl);
    return cf;
}

inline ChartFunction fn_linear(double a, const ChartFunction& f, double b, const ChartFunction& g) {
    auto impl = std::make_shared<ChartFunction::Impl>();
    impl->label = f.label() + "+" + g.label();
    impl->levels = std::min(f.levels(), g.levels());
    ChartFunction::fill_binary<0>(impl->table, f, g,
                                  [a, b](const auto& x, const auto& y) { return a * x + b * y; });
    ChartFunction cf;
    cf.impl_ = std::move(impl);
    return cf;
}

inline ChartFunction fn_scale(double a, const ChartFunction& f) { return fn_linear(a, f, 0.0, f); }

// Forward-mode gradient over every chart name, casimirs included.
// Throws NonFinite on NaN/Inf (chart singularity).
inline std::vector<double> gradient(const ChartFunction& f, const ChartPoint& x) {
    const std::size_t n = x.v.size();
    std::vector<double> g(n);
    std::array<Dual<double>, kMaxChartVars> buf;
    for (std::size_t i = 0; i < n; ++i) buf[i] = Dual<double>{x.v[i], 0.0};
    const std::span<const Dual<double>> xs(buf.data(), n);
    for (std::size_t i = 0; i < n; ++i) {
        buf[i].b = 1.0;
        Dual<double> r = f.eval<Dual<double>>(xs);
        buf[i].b = 0.0;
        if (!dual_finite(r)) throw NonFinite("gradient of '" + f.label() + "' non-finite");
        g[i] = r.b;
    }
    return g;
}

// Hamilton's equations: dcoord_i/dt = dH/dmom_i, dmom_i/dt = -dH/dcoord_i,
// casimir rates exactly zero.
inline std::vector<double> hamiltonian_vector_field(const ChartFunction& H, const ChartPoint& x) {
    const auto g = gradient(H, x);
    std::vector<double> field(x.v.size(), 0.0);
    const int np = x.chart->npairs();
    for (int k = 0; k < np; ++k) {
        field[2 * k] = g[2 * k + 1];
        field[2 * k + 1] = -g[2 * k];
    }
    return field;
}

}  // namespace momdyn
