#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "momdyn/chart.hpp"

namespace momdyn {

// Classical 1-DOF potential. Polynomial built-ins carry coefficients so any
// derivative order is analytic; smooth non-polynomial ones differentiate
// through nested duals; |q| is flagged non-smooth.
class Potential1D {
  public:
    Potential1D() = default;

    const std::string& name() const { return name_; }
    bool smooth() const { return smooth_; }
    bool is_polynomial() const { return !coeffs_.empty(); }
    const ChartFunction& fn() const { return fn_; }

    double value(double q) const;
    // k-th derivative at a double point (k = 0 allowed)
    double derivative(int k, double q) const;

    // k-th derivative evaluable at dual scalars (polynomials at any level,
    // smooth non-polynomials spend k dual levels)
    template <class S>
    S derivative_at(int k, const S& q) const {
        if (!smooth_ && k > 0) throw SmoothnessRequired("potential '" + name_ + "' is not differentiable");
        if (is_polynomial()) return poly_eval(poly_derive(coeffs_, k), q);
        return fn_deriv(fn_, k, q);
    }
    template <class S>
    S value_at(const S& q) const {
        std::array<S, 1> a{q};
        return fn_.eval<S>(std::span<const S>(a.data(), 1));
    }

    // named built-ins: abs | relativistic_sqrt | harmonic(omega) |
    // quartic_barrier(v_top, gamma) | poly(c0..)
    static Potential1D named(const std::string& name, const std::map<std::string, double>& params = {});
    static Potential1D polynomial(std::string name, std::vector<double> coeffs);

    static std::vector<double> poly_derive(std::vector<double> c, int k);
    template <class S>
    static S poly_eval(const std::vector<double>& c, const S& q) {
        S acc{};
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * q + c[i];
        return acc;
    }

  private:
    template <class S>
    static S fn_deriv(const ChartFunction& f, int k, const S& q) {
        if (k == 0) {
            std::array<S, 1> a{q};
            return f.eval<S>(std::span<const S>(a.data(), 1));
        }
        if constexpr (dual_depth<S>::value + 1 < kNumDualLevels) {
            Dual<S> d{q, S(1.0)};
            return fn_deriv<Dual<S>>(f, k - 1, d).b;
        } else {
            throw Error("potential derivative: dual depth exhausted");
        }
    }

    std::string name_;
    bool smooth_ = true;
    std::vector<double> coeffs_;  // empty unless polynomial
    ChartFunction fn_;
};

// Two-DOF potential with value and Hessian (analytic for the coupled
// oscillator, nested duals otherwise).
class Potential2D {
  public:
    const std::string& name() const { return name_; }
    const ChartFunction& fn() const { return fn_; }

    double value(double q1, double q2) const;
    // {V11, V22, V12}
    std::array<double, 3> hessian(double q1, double q2) const;

    template <class S>
    S value_at(const S& q1, const S& q2) const {
        std::array<S, 2> a{q1, q2};
        return fn_.eval<S>(std::span<const S>(a.data(), 2));
    }

    // named built-ins: coupled_harmonic(omega, gamma)
    static Potential2D named(const std::string& name, const std::map<std::string, double>& params = {});

  private:
    std::string name_;
    ChartFunction fn_;
    std::function<std::array<double, 3>(double, double)> hess_;
};

}  // namespace momdyn
