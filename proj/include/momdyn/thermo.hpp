#pragma once

namespace momdyn {

// Free scalar-field mode thermodynamics over the order-2 realization chart:
// Boltzmann weight exp(-beta (p^2/2 + lambda U/(2s^2) + omega^2 s^2 / 8))
// integrated over s > 0, p real, U > U_min = hbar^2/4.
//
// The closed forms below are normalized against the defining integral; the
// printed display shares the structure but carries half the overall constant
// (log-derivatives are unaffected). The quadrature oracle is authoritative.

double partition_function(double beta, double omega, double lambda, double hbar = 1.0);
double log_partition_function(double beta, double omega, double lambda, double hbar = 1.0);
// 1D adaptive quadrature after the elementary Gaussian p- and exponential
// U-integrals are taken; the oracle for the closed form.
double partition_function_quadrature(double beta, double omega, double lambda, double hbar = 1.0);
double log_partition_function_quadrature(double beta, double omega, double lambda, double hbar = 1.0);
// plain tensor-product integration of the full triple integral (slow; used to
// certify the reduction itself)
double partition_function_quadrature3d(double beta, double omega, double lambda, double hbar = 1.0);

struct EnsembleAverages {
    double s2 = 0.0;      // <s^2>
    double energy = 0.0;  // <E> per (left- or right-moving) mode
    double casimir = 0.0; // <U>
};
EnsembleAverages ensemble_averages(double beta, double omega, double hbar = 1.0);
EnsembleAverages ensemble_averages_quadrature(double beta, double omega, double hbar = 1.0);

// Equal-time two-point function of the field on the line,
// (1/2pi) int_0^inf <s^2>(omega_k) cos(k r) dk with omega_k = sqrt(m^2+k^2);
// evaluated with the analytic 1/omega and 1/omega^2 parts resummed and the
// remainder integrated to k_cut. Throws CutoffTooSmall when the rigorous tail
// bound exceeds tail_tol.
double two_point_function(double r, double m, double beta, double k_cut, double hbar = 1.0,
                          double tail_tol = 1e-8);
double two_point_k_cut(double beta, double hbar = 1.0, double tail_tol = 1e-8);

// Circle version (unit radius, integer k), normalized so that the k-sum
// converges to the line integral as the mode spacing becomes dense.
double circle_two_point(double r, double m, double beta, int k_max, double hbar = 1.0);

// modified Bessel function of the second kind, order zero
double bessel_k0(double z);         // cosh-representation quadrature
double bessel_k0_series(double z);  // independent power-series oracle

}  // namespace momdyn
