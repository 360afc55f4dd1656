#pragma once

#include <vector>

#include "momdyn/potentials.hpp"

namespace momdyn {

struct GaussHermiteRule {
    std::vector<double> x;  // nodes of the weight exp(-x^2)
    std::vector<double> w;  // compensated weights: sum w_i f(x_i) ~ int f(x) dx
                            // for f that already carries the Gaussian decay
};

// Golub-Welsch nodes (Jacobi-matrix eigenvalues) with weights from the
// orthonormal Hermite-function recurrence.
GaussHermiteRule gauss_hermite(int n);

// Eigenvalues of a symmetric matrix (row-major, destroyed): Householder
// tridiagonalization followed by implicit-shift QL. Ascending order.
std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n);

// Eigenvalues of a symmetric tridiagonal matrix (d diagonal, e off-diagonal
// with e[0] unused), ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e);

// Lowest eigenvalue of pi^2/2m + V in the first `basis_size` harmonic
// oscillator eigenfunctions (basis frequency 1); matrix elements by
// Gauss-Hermite quadrature. Convergence guarded by comparing against the
// leading half-size block; throws NonConvergedEigen past 1e-3.
double exact_ground_state(const Potential1D& V, int basis_size, double hbar = 1.0, double mass = 1.0);

}  // namespace momdyn
