#pragma once

#include <string>
#include <vector>

namespace momdyn {

// Position-space density and wave-function phase of a pure state from raw
// moments a_n = <q^n>, b_n = Re<q^n pi>, via the Hermite series. The printed
// series constant uses pi where orthonormality gives sqrt(pi); the raw series
// is reported and the density renormalized to unit integral (the convention
// factor cancels in the phase-gradient ratio).
struct DensityResult {
    std::vector<double> grid;
    std::vector<double> density;     // renormalized to unit trapezoid integral
    std::vector<double> raw_series;  // as printed, before renormalization
    std::vector<double> coefficients;  // c_n = sum_l h_{n,l} a_l
    double raw_norm = 0.0;             // trapezoid integral of the raw series
    double truncation_residual = 0.0;  // sup of the |c_N|-weighted last term
};

DensityResult density_from_moments(const std::vector<double>& a, int order,
                                   const std::vector<double>& grid);

struct PhaseResult {
    std::vector<double> grid;
    std::vector<double> dalpha_dq;
    std::vector<double> alpha;  // cumulative trapezoid with alpha(0) = 0
};

// Requires the (renormalized) density to stay above `floor` on the grid;
// throws DensityFloorHit otherwise.
PhaseResult phase_from_moments(const std::vector<double>& b_re, const DensityResult& density,
                               int order, double hbar = 1.0, double floor = 1e-8);

// Structural impurity scan of a realization: chart parameters whose gradients
// vanish on every moment with at most one momentum factor. Canonical
// (Darboux-sector) candidates take precedence; casimirs are reported as the
// candidates only when no canonical parameter is hidden.
struct ImpurityScan {
    std::vector<std::string> hidden_canonical;
    std::vector<std::string> hidden_casimir;
    std::vector<std::string> candidates;
};
ImpurityScan impurity_candidates(const std::string& realization_name, int samples = 100,
                                 unsigned seed = 1234);

// physicists' Hermite polynomial coefficients, H_n(q) = sum_l h[n][l] q^l
std::vector<std::vector<double>> hermite_coefficients(int order);

}  // namespace momdyn
