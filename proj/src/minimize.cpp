#include "momdyn/minimize.hpp"

#include <cmath>

namespace momdyn {

PatternResult pattern_search(const std::function<double(std::span<const double>)>& f,
                             std::vector<double> x0, double step0, double step_tol,
                             const std::function<bool(std::span<const double>)>& feasible,
                             int max_evals) {
    PatternResult res;
    res.x = std::move(x0);
    const std::size_t n = res.x.size();
    if (!feasible(res.x)) return res;
    res.value = f(res.x);
    ++res.evals;

    double step = step0;
    std::vector<double> trial(n);
    while (step > step_tol && res.evals < max_evals) {
        bool improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (double sgn : {1.0, -1.0}) {
                trial = res.x;
                trial[i] += sgn * step;
                if (!feasible(trial)) continue;
                const double v = f(trial);
                ++res.evals;
                if (std::isfinite(v) && v < res.value - 1e-15 * std::abs(res.value)) {
                    res.value = v;
                    res.x = trial;
                    improved = true;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    res.converged = step <= step_tol;
    return res;
}

}  // namespace momdyn
