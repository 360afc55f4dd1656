#include "momdyn/potentials.hpp"

#include <cmath>

namespace momdyn {

double Potential1D::value(double q) const { return value_at<double>(q); }

double Potential1D::derivative(int k, double q) const {
    if (k == 0) return value(q);
    if (is_polynomial()) return poly_eval(poly_derive(coeffs_, k), q);
    if (!smooth_) throw SmoothnessRequired("potential '" + name_ + "' is not differentiable");
    return derivative_at<double>(k, q);
}

std::vector<double> Potential1D::poly_derive(std::vector<double> c, int k) {
    for (int t = 0; t < k; ++t) {
        if (c.size() <= 1) return {0.0};
        std::vector<double> d(c.size() - 1);
        for (std::size_t i = 1; i < c.size(); ++i) d[i - 1] = c[i] * static_cast<double>(i);
        c = std::move(d);
    }
    return c;
}

Potential1D Potential1D::polynomial(std::string name, std::vector<double> coeffs) {
    Potential1D p;
    p.name_ = std::move(name);
    p.smooth_ = true;
    p.coeffs_ = std::move(coeffs);
    p.fn_ = ChartFunction::make(p.name_, [c = p.coeffs_](auto x) { return poly_eval(c, x[0]); });
    return p;
}

Potential1D Potential1D::named(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "abs") {
        Potential1D p;
        p.name_ = "abs";
        p.smooth_ = false;
        p.fn_ = ChartFunction::make("abs", [](auto x) { return abs(x[0]); });
        return p;
    }
    if (name == "relativistic_sqrt") {
        Potential1D p;
        p.name_ = "relativistic_sqrt";
        p.smooth_ = true;
        p.fn_ = ChartFunction::make("sqrt(1+q^2)", [](auto x) { return sqrt(1.0 + x[0] * x[0]); });
        return p;
    }
    if (name == "harmonic") {
        const double w = get("omega", 1.0);
        return polynomial("harmonic", {0.0, 0.0, 0.5 * w * w});
    }
    if (name == "quartic_barrier") {
        // (27/4) V_top gamma q^2 (q-1)(q-1/gamma)
        const double vt = get("v_top", 1.0), g = get("gamma", 0.1);
        const double a = 6.75 * vt;
        return polynomial("quartic_barrier", {0.0, 0.0, a, -a * (g + 1.0), a * g});
    }
    throw ConfigError("unknown 1-DOF potential '" + name + "'");
}

double Potential2D::value(double q1, double q2) const { return value_at<double>(q1, q2); }

std::array<double, 3> Potential2D::hessian(double q1, double q2) const {
    if (hess_) return hess_(q1, q2);
    using D = Dual<double>;
    using DD = Dual<D>;
    auto d2 = [&](int i, int j) {
        std::array<DD, 2> a{DD(D(q1)), DD(D(q2))};
        a[i].a.b = 1.0;
        a[j].b = D(1.0);
        return fn_.eval<DD>(std::span<const DD>(a.data(), 2)).b.b;
    };
    return {d2(0, 0), d2(1, 1), d2(0, 1)};
}

Potential2D Potential2D::named(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "coupled_harmonic") {
        const double w = get("omega", 1.0), g = get("gamma", 0.5);
        Potential2D p;
        p.name_ = "coupled_harmonic";
        p.fn_ = ChartFunction::make("coupled_harmonic", [w, g](auto x) {
            auto q1 = x[0], q2 = x[1];
            return 0.5 * w * w * (q1 * q1 + q2 * q2) + g * w * w * q1 * q2;
        });
        p.hess_ = [w, g](double, double) { return std::array<double, 3>{w * w, w * w, g * w * w}; };
        return p;
    }
    throw ConfigError("unknown 2-DOF potential '" + name + "'");
}

}  // namespace momdyn
