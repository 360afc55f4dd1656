#include "momdyn/effpot2.hpp"

#include <cmath>

#include "momdyn/dual.hpp"
#include "momdyn/errors.hpp"
#include "momdyn/minimize.hpp"

namespace momdyn {

double effective_potential_2dof(double q1, double q2, double s1, double s2, double alpha,
                                double beta, double u1, double u2, const Potential2D& V) {
    if (!(s1 > 0.0) || !(s2 > 0.0) || std::abs(std::sin(beta)) < 1e-12)
        throw SingularChart("effective_potential_2dof: s1,s2 > 0 and sin(beta) != 0 required");
    if (u2 < 0.0) throw ConfigError("effective_potential_2dof: U2 must be non-negative");
    const auto h = V.hessian(q1, q2);
    const double sb2 = std::sin(beta) * std::sin(beta);
    const double ru2 = std::sqrt(u2);
    return V.value(q1, q2) +
           ((u1 - ru2 * std::sin(alpha + beta)) / (s1 * s1) +
            (u1 - ru2 * std::sin(alpha - beta)) / (s2 * s2)) /
               (4.0 * sb2) +
           0.5 * h[0] * s1 * s1 + h[2] * s1 * s2 * std::cos(beta) + 0.5 * h[1] * s2 * s2;
}

namespace {

template <class S>
S moment_sector(const S& s1, const S& s2, const S& beta, const Hessian2& h, double hbar) {
    auto sb = sin(beta);
    return hbar * hbar / 8.0 * (1.0 / (s1 * s1) + 1.0 / (s2 * s2)) / (sb * sb) +
           0.5 * h.v11 * s1 * s1 + h.v12 * s1 * s2 * cos(beta) + 0.5 * h.v22 * s2 * s2;
}

struct GradHess {
    double g[3];
    double H[3][3];
};

GradHess moment_sector_derivs(const double x[3], const Hessian2& h, double hbar) {
    using D = Dual<double>;
    using DD = Dual<D>;
    GradHess out{};
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            DD v[3] = {DD(D(x[0])), DD(D(x[1])), DD(D(x[2]))};
            v[i].a.b = 1.0;
            v[j].b = D(1.0);
            DD r = moment_sector(v[0], v[1], v[2], h, hbar);
            out.g[i] = r.a.b;  // d/dx_i
            out.H[i][j] = out.H[j][i] = r.b.b;
        }
    }
    return out;
}

bool solve3(const double A[3][3], const double b[3], double x[3]) {
    double m[3][4];
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m[i][j] = A[i][j];
        m[i][3] = b[i];
    }
    for (int c = 0; c < 3; ++c) {
        int piv = c;
        for (int r = c + 1; r < 3; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) < 1e-300) return false;
        for (int j = 0; j < 4; ++j) std::swap(m[c][j], m[piv][j]);
        for (int r = 0; r < 3; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (int j = c; j < 4; ++j) m[r][j] -= f * m[c][j];
        }
    }
    for (int i = 0; i < 3; ++i) x[i] = m[i][3] / m[i][i];
    return true;
}

// Newton iteration on grad(moment_sector) = 0
bool newton_polish(double x[3], const Hessian2& h, double hbar, double& grad_norm) {
    for (int it = 0; it < 80; ++it) {
        auto gh = moment_sector_derivs(x, h, hbar);
        grad_norm = std::max({std::abs(gh.g[0]), std::abs(gh.g[1]), std::abs(gh.g[2])});
        if (grad_norm < 1e-12) return true;
        double dx[3];
        if (!solve3(gh.H, gh.g, dx)) return false;
        double scale = 1.0;
        // keep s positive and beta inside (0, pi)
        for (int t = 0; t < 40; ++t) {
            const double s1 = x[0] - scale * dx[0], s2 = x[1] - scale * dx[1],
                         b = x[2] - scale * dx[2];
            if (s1 > 1e-6 && s2 > 1e-6 && b > 1e-6 && b < M_PI - 1e-6) break;
            scale *= 0.5;
        }
        for (int i = 0; i < 3; ++i) x[i] -= scale * dx[i];
    }
    auto gh = moment_sector_derivs(x, h, hbar);
    grad_norm = std::max({std::abs(gh.g[0]), std::abs(gh.g[1]), std::abs(gh.g[2])});
    return grad_norm < 1e-9;
}

MomentMinimum numeric_fallback(const Hessian2& h, double hbar) {
    auto f = [&](std::span<const double> x) {
        return moment_sector(x[0], x[1], x[2], h, hbar);
    };
    auto feasible = [](std::span<const double> x) {
        return x[0] > 1e-4 && x[1] > 1e-4 && x[2] > 0.05 && x[2] < M_PI - 0.05;
    };
    const double s1g = std::pow(hbar * hbar / (4.0 * h.v11), 0.25);
    const double s2g = std::pow(hbar * hbar / (4.0 * h.v22), 0.25);
    auto r = pattern_search(f, {s1g, s2g, 0.5 * M_PI + 0.1 * (h.v12 < 0 ? -1.0 : 1.0)}, 0.1, 1e-6,
                            feasible);
    if (!r.converged) throw Error("minimize_moment_sector: numeric fallback failed");
    double x[3] = {r.x[0], r.x[1], r.x[2]};
    double gn = 0.0;
    newton_polish(x, h, hbar, gn);
    MomentMinimum m;
    m.s1 = x[0];
    m.s2 = x[1];
    m.beta = x[2];
    m.value = moment_sector(x[0], x[1], x[2], h, hbar);
    m.closed_form = false;
    m.stationarity = gn;
    return m;
}

}  // namespace

double moment_sector_value(double s1, double s2, double beta, const Hessian2& h, double hbar) {
    return moment_sector(s1, s2, beta, h, hbar);
}

MomentMinimum minimize_moment_sector(const Hessian2& h, double hbar) {
    if (!h.positive_definite())
        throw NotPositiveDefinite("minimize_moment_sector: Hessian must be positive definite");
    const double scale = std::max(std::abs(h.v11), std::abs(h.v22));
    if (std::abs(h.v11 - h.v22) < 1e-7 * scale || std::abs(h.v12) < 1e-12 * scale)
        return numeric_fallback(h, hbar);

    const double det = h.det();
    const double rdet = std::sqrt(det);
    const double h2 = hbar * hbar;

    // s1^2/s2^2 solves (V11-C) x^2 + 2C x - (V22+C) = 0, C = V12^2/(V22-V11);
    // the admissible root is fixed by positivity of x, s^4 and sin^2(beta)
    const double denom = h.v11 * (h.v22 - h.v11) - h.v12 * h.v12;
    MomentMinimum best;
    bool found = false;
    for (double sign : {1.0, -1.0}) {
        const double x_ratio = (sign * (h.v22 - h.v11) * rdet - h.v12 * h.v12) / denom;
        if (!(x_ratio > 0.0) || !std::isfinite(x_ratio)) continue;
        // s2^4 from the combined stationarity relation at this root
        const double s2_4 = -h2 / 4.0 * (h.v11 - h.v22) * (x_ratio - 1.0) /
                            ((x_ratio + 1.0) * std::pow(h.v11 * x_ratio - h.v22, 2));
        if (!(s2_4 > 0.0) || !std::isfinite(s2_4)) continue;
        const double s2 = std::pow(s2_4, 0.25);
        const double s1 = std::pow(x_ratio, 0.25) * s2;
        const double sin2 = h2 / (4.0 * s1 * s1 * s2 * s2) * (s2 * s2 - s1 * s1) /
                            (h.v11 * s1 * s1 - h.v22 * s2 * s2);
        if (!(sin2 > 0.0) || !(sin2 <= 1.0)) continue;
        const double sinb = std::sqrt(sin2);
        const double cosb = -4.0 * h.v12 * std::pow(s1 * s2, 3) * sin2 * sin2 /
                            (h2 * (s1 * s1 + s2 * s2));
        double x[3] = {s1, s2, std::atan2(sinb, cosb)};
        double gn = 0.0;
        if (!newton_polish(x, h, hbar, gn)) continue;
        MomentMinimum m;
        m.s1 = x[0];
        m.s2 = x[1];
        m.beta = x[2];
        m.value = moment_sector(x[0], x[1], x[2], h, hbar);
        m.closed_form = true;
        m.stationarity = gn;
        if (!found || m.value < best.value) {
            best = m;
            found = true;
        }
    }
    if (!found) return numeric_fallback(h, hbar);
    return best;
}

double low_energy_from_hessian(double v, const Hessian2& h, double hbar) {
    const double trace = h.v11 + h.v22;
    const double disc = std::sqrt((h.v11 - h.v22) * (h.v11 - h.v22) + 4.0 * h.v12 * h.v12);
    const double hi = 0.5 * (trace + disc), lo = 0.5 * (trace - disc);
    if (lo < 0.0 || hi < 0.0)
        throw ComplexFrequency("low_energy_potential: unstable direction (negative radicand)");
    return v + 0.5 * hbar * (std::sqrt(hi) + std::sqrt(lo));
}

double low_energy_potential(double q1, double q2, const Potential2D& V, double hbar) {
    const auto hh = V.hessian(q1, q2);
    return low_energy_from_hessian(V.value(q1, q2), Hessian2{hh[0], hh[1], hh[2]}, hbar);
}

SaturationReport saturation_analysis(double u1, double u2, double alpha, double beta, double hbar) {
    if (u2 < 0.0) throw ConfigError("saturation_analysis: U2 must be non-negative");
    SaturationReport rep;
    const double sb = std::sin(beta);
    if (std::abs(sb) < 1e-12) throw SingularChart("saturation_analysis: sin(beta) = 0");
    const double ru2 = std::sqrt(u2);
    rep.phi0 = (u1 - ru2 * std::sin(alpha + beta)) / (2.0 * sb * sb);
    rep.gamma0 = (u1 - ru2 * std::sin(alpha - beta)) / (2.0 * sb * sb);
    const double bound = hbar * hbar / 4.0;
    rep.phi_bound_satisfied = rep.phi0 >= bound - 1e-12;
    rep.gamma_bound_satisfied = rep.gamma0 >= bound - 1e-12;
    rep.both_saturated =
        std::abs(rep.phi0 - bound) < 1e-10 && std::abs(rep.gamma0 - bound) < 1e-10;
    rep.subtraction_value = -ru2 * std::cos(alpha) / sb;  // Phi0 - Gamma0
    rep.forces_u2_zero_or_cos_alpha_zero =
        !rep.both_saturated || std::abs(rep.subtraction_value) < 1e-10;

    // U2-dependent potential term under cos(alpha) = 0:
    // V_{U2} = -sqrt(U2) cos(beta)/(4 sin^2 beta) (1/s1^2 + 1/s2^2)
    const double geom = std::cos(beta) / (4.0 * sb * sb) * 2.0;  // s1 = s2 = 1 sample
    rep.u2_term_slope = -geom;
    if (std::cos(beta) > 0.0) {
        const double v_a = -std::sqrt(1.0) * geom;
        const double v_b = -std::sqrt(1e4) * geom;
        rep.u2_term_unbounded_below = v_b < v_a && v_b < -1e2 * std::abs(geom) * 0.5;
    }
    return rep;
}

}  // namespace momdyn
