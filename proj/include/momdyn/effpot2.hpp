#pragma once

#include "momdyn/potentials.hpp"

namespace momdyn {

struct Hessian2 {
    double v11 = 0.0, v22 = 0.0, v12 = 0.0;
    double det() const { return v11 * v22 - v12 * v12; }
    bool positive_definite() const { return v11 > 0.0 && det() > 0.0; }
};

// Second-order two-DOF effective potential at zero momenta:
// V + (1/(4 sin^2 b))[(U1 - sqrt(U2) sin(a+b))/s1^2 + (U1 - sqrt(U2) sin(a-b))/s2^2]
//   + V11 s1^2/2 + V12 s1 s2 cos(b) + V22 s2^2/2
double effective_potential_2dof(double q1, double q2, double s1, double s2, double alpha,
                                double beta, double u1, double u2, const Potential2D& V);
// same moment sector for a fixed Hessian (the potential sector alone, V excluded)
double moment_sector_value(double s1, double s2, double beta, const Hessian2& h, double hbar);

struct MomentMinimum {
    double s1 = 0.0, s2 = 0.0, beta = 0.0;
    double value = 0.0;       // minimized moment-sector potential (V excluded)
    bool closed_form = true;  // false when the degenerate fallback ran
    double stationarity = 0.0;  // max |gradient| at the reported point
};

// Closed-form minimizer of the saturated (U2=0, U1=hbar^2/2) moment sector,
// Newton-polished; V11 = V22 routes to the numeric fallback.
MomentMinimum minimize_moment_sector(const Hessian2& h, double hbar = 1.0);

// V + (hbar/2) (sqrt((T+D)/2) + sqrt((T-D)/2)), T = V11+V22,
// D = sqrt((V11-V22)^2 + 4 V12^2); ComplexFrequency on negative radicand.
double low_energy_potential(double q1, double q2, const Potential2D& V, double hbar = 1.0);
double low_energy_from_hessian(double v, const Hessian2& h, double hbar = 1.0);

struct SaturationReport {
    double phi0 = 0.0, gamma0 = 0.0;   // Phi, Gamma at zero momenta
    bool phi_bound_satisfied = false;  // >= hbar^2/4
    bool gamma_bound_satisfied = false;
    bool both_saturated = false;
    // Phi0 - Gamma0 = -sqrt(U2) cos(alpha)/sin(beta): must vanish at saturation
    double subtraction_value = 0.0;
    bool forces_u2_zero_or_cos_alpha_zero = false;
    // sampled slope of the U2 potential term in sqrt(U2) under cos(alpha)=0;
    // negative for cos(beta) > 0 means unbounded below
    double u2_term_slope = 0.0;
    bool u2_term_unbounded_below = false;
};
SaturationReport saturation_analysis(double u1, double u2, double alpha, double beta,
                                     double hbar = 1.0);

}  // namespace momdyn
