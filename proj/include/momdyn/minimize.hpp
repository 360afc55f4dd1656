#pragma once

#include <functional>
#include <span>
#include <vector>

namespace momdyn {

struct PatternResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int evals = 0;
};

// Derivative-free compass search with shrinking steps; feasible() guards the
// domain (infeasible moves count as non-improving). Handles kinks that defeat
// gradient descent.
PatternResult pattern_search(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, double step0, double step_tol,
                             const std::function<bool(std::span<const double>)>& feasible,
                             int max_evals = 200000);

}  // namespace momdyn
