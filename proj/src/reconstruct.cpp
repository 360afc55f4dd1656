#include "momdyn/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "momdyn/errors.hpp"
#include "momdyn/realizations.hpp"

namespace momdyn {

std::vector<std::vector<double>> hermite_coefficients(int order) {
    std::vector<std::vector<double>> h(order + 1);
    h[0] = {1.0};
    if (order >= 1) h[1] = {0.0, 2.0};
    for (int n = 1; n < order; ++n) {
        std::vector<double> next(n + 2, 0.0);
        for (int l = 0; l <= n; ++l) next[l + 1] += 2.0 * h[n][l];
        for (int l = 0; l < n; ++l) next[l] -= 2.0 * n * h[n - 1][l];
        h[n + 1] = std::move(next);
    }
    return h;
}

namespace {

double eval_poly(const std::vector<double>& c, double q) {
    double acc = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) acc = acc * q + c[i];
    return acc;
}

double trapezoid(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (y[i] + y[i - 1]) * (x[i] - x[i - 1]);
    return acc;
}

// series weight of the printed display: c_n / (2^n pi n!)
double series_weight(int n) {
    double w = 1.0 / M_PI;
    for (int i = 1; i <= n; ++i) w /= 2.0 * i;
    return w;
}

std::vector<double> series_on_grid(const std::vector<double>& coef,
                                   const std::vector<std::vector<double>>& herm,
                                   const std::vector<double>& grid, int order) {
    std::vector<double> out(grid.size(), 0.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double q = grid[i];
        double acc = 0.0;
        for (int n = 0; n <= order; ++n) acc += coef[n] * series_weight(n) * eval_poly(herm[n], q);
        out[i] = acc * std::exp(-q * q);
    }
    return out;
}

}  // namespace

DensityResult density_from_moments(const std::vector<double>& a, int order,
                                   const std::vector<double>& grid) {
    if (order < 0 || order > 20)
        throw ConfigError("density_from_moments: order must lie in [0, 20] (series conditioning)");
    if (static_cast<int>(a.size()) <= order)
        throw ConfigError("density_from_moments: need moments a_0..a_order");
    if (std::abs(a[0] - 1.0) > 1e-10)
        throw ConfigError("density_from_moments: a_0 must be 1 (normalized state)");
    if (grid.size() < 3) throw ConfigError("density_from_moments: need a grid");

    const auto herm = hermite_coefficients(order);
    DensityResult res;
    res.grid = grid;
    res.coefficients.resize(order + 1, 0.0);
    for (int n = 0; n <= order; ++n)
        for (std::size_t l = 0; l < herm[n].size(); ++l) res.coefficients[n] += herm[n][l] * a[l];

    res.raw_series = series_on_grid(res.coefficients, herm, grid, order);

    double last_sup = 0.0, total_sup = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double q = grid[i];
        last_sup = std::max(last_sup, std::abs(res.coefficients[order] * series_weight(order) *
                                               eval_poly(herm[order], q) * std::exp(-q * q)));
        total_sup = std::max(total_sup, std::abs(res.raw_series[i]));
    }
    res.truncation_residual = last_sup;
    if (order >= 2 && last_sup > 10.0 * total_sup)
        throw SeriesDiverging("density_from_moments: last retained term dominates the partial sum");

    res.raw_norm = trapezoid(grid, res.raw_series);
    if (!(res.raw_norm > 0.0))
        throw SeriesDiverging("density_from_moments: non-positive raw normalization");
    res.density = res.raw_series;
    for (auto& v : res.density) v /= res.raw_norm;
    return res;
}

PhaseResult phase_from_moments(const std::vector<double>& b_re, const DensityResult& density,
                               int order, double hbar, double floor) {
    if (static_cast<int>(b_re.size()) <= order)
        throw ConfigError("phase_from_moments: need Re b_0..b_order");
    for (std::size_t i = 0; i < density.grid.size(); ++i)
        if (density.density[i] < floor)
            throw DensityFloorHit("phase_from_moments: density below floor at q = " +
                                  std::to_string(density.grid[i]));

    const auto herm = hermite_coefficients(order);
    std::vector<double> d(order + 1, 0.0);
    for (int n = 0; n <= order; ++n)
        for (std::size_t l = 0; l < herm[n].size(); ++l) d[n] += herm[n][l] * b_re[l];

    PhaseResult res;
    res.grid = density.grid;
    const auto f_raw = series_on_grid(d, herm, density.grid, order);
    res.dalpha_dq.resize(res.grid.size());
    // raw/raw ratio: the printed normalization constant cancels here
    for (std::size_t i = 0; i < res.grid.size(); ++i)
        res.dalpha_dq[i] = f_raw[i] / (hbar * density.raw_series[i]);

    // integrate outward from the grid point nearest q = 0
    std::size_t i0 = 0;
    for (std::size_t i = 1; i < res.grid.size(); ++i)
        if (std::abs(res.grid[i]) < std::abs(res.grid[i0])) i0 = i;
    res.alpha.assign(res.grid.size(), 0.0);
    for (std::size_t i = i0 + 1; i < res.grid.size(); ++i)
        res.alpha[i] = res.alpha[i - 1] + 0.5 * (res.dalpha_dq[i] + res.dalpha_dq[i - 1]) *
                                              (res.grid[i] - res.grid[i - 1]);
    for (std::size_t i = i0; i-- > 0;)
        res.alpha[i] = res.alpha[i + 1] - 0.5 * (res.dalpha_dq[i] + res.dalpha_dq[i + 1]) *
                                              (res.grid[i + 1] - res.grid[i]);
    return res;
}

ImpurityScan impurity_candidates(const std::string& realization_name, int samples, unsigned seed) {
    const auto& R = realization(realization_name);
    const auto& names = R.chart()->names();
    const int dim = R.chart()->dim();
    std::vector<double> max_grad(dim, 0.0);

    std::mt19937 rng(seed);
    for (int t = 0; t < samples; ++t) {
        auto x = R.sample_regular(rng);
        for (const auto& idx : R.moment_indices()) {
            if (idx.momentum_degree() > 1) continue;
            auto g = gradient(R.moment(idx), x);
            for (int j = 0; j < dim; ++j) max_grad[j] = std::max(max_grad[j], std::abs(g[j]));
        }
    }
    ImpurityScan scan;
    for (int j = 0; j < dim; ++j) {
        if (max_grad[j] > 1e-10) continue;
        if (R.chart()->is_casimir_index(j))
            scan.hidden_casimir.push_back(names[j]);
        else
            scan.hidden_canonical.push_back(names[j]);
    }
    scan.candidates = scan.hidden_canonical.empty() ? scan.hidden_casimir : scan.hidden_canonical;
    return scan;
}

}  // namespace momdyn
