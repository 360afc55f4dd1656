#pragma once

#include <memory>
#include <string>

#include "momdyn/potentials.hpp"
#include "momdyn/realizations.hpp"

namespace momdyn {

// Classical potential + realization + truncation order; exposes H_eff and the
// effective potential as chart functions over [q, pi] + realization chart.
struct EffectiveModel {
    Potential1D potential;
    std::string realization_name = "order2";
    int order = 2;
    double mass = 1.0;
    double hbar = 1.0;
};

// chart [(q,pi), realization pairs...; realization casimirs]
std::shared_ptr<const CanonicalChart> effective_chart(const EffectiveModel& model);

// H_eff = pi^2/2m + Delta(pi^2)/2m + V(q) + sum_{n=2}^order V^(n)(q) Delta(q^n)/n!
// Throws SmoothnessRequired for non-differentiable potentials.
ChartFunction taylor_effective_hamiltonian(const EffectiveModel& model);

// V_all(q,s) = U/(2 m s^2) + (V(q+s) + V(q-s))/2; valid for non-smooth V.
double all_orders_potential(const Potential1D& V, double q, double s, double U, double mass = 1.0);

// chart [(q,pi),(s,ps); U] with H = pi^2/2m + ps^2/2m + V_all(q,s)
std::shared_ptr<const CanonicalChart> all_orders_chart();
ChartFunction all_orders_hamiltonian(const Potential1D& V, double mass = 1.0);

struct GroundEstimate {
    double q = 0.0;
    double s = 0.0;
    double energy = 0.0;
};

// Multi-start derivative-free minimization of the all-orders potential over
// (q, s>0); 16 log-spaced s starts x {-1,0,1} q starts, deterministic.
GroundEstimate ground_state_estimate(const Potential1D& V, double U, double mass = 1.0);

// Two-DOF second-order effective Hamiltonian over
// [(q1,pi1),(q2,pi2), twodof realization chart]; used to cross-check the
// closed-form two-DOF effective potential.
std::shared_ptr<const CanonicalChart> effective_chart_2dof();
ChartFunction taylor_effective_hamiltonian_2dof(const Potential2D& V, double mass = 1.0);

}  // namespace momdyn
