#include "momdyn/thermo.hpp"

#include <cmath>
#include <functional>

#include "momdyn/errors.hpp"

namespace momdyn {

namespace {

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                            double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0) return left + right;
    if (std::abs(left + right - whole) <= 15.0 * tol) return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int depth = 48) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// ln J_k, J_k = int_0^inf s^(2k) exp(-a/s^2 - b s^2) ds via s = exp(u);
// the peak value is factored out so extreme parameters stay in range
double log_radial_moment(int k, double a, double b, double rel_tol) {
    const double c = 2.0 * k + 1.0;
    const double w = (c + std::sqrt(c * c + 16.0 * a * b)) / (4.0 * b);
    const double ustar = 0.5 * std::log(w);
    auto h = [&](double u) {
        const double s2 = std::exp(2.0 * u);
        return c * u - a / s2 - b * s2;
    };
    const double hpk = h(ustar);
    auto g = [&](double u) { return std::exp(h(u) - hpk); };
    double lo = ustar, hi = ustar;
    for (int it = 0; it < 500 && g(lo) > 1e-22; ++it) lo -= 0.5;
    for (int it = 0; it < 500 && g(hi) > 1e-22; ++it) hi += 0.5;
    return hpk + std::log(adaptive_simpson(g, lo, hi, rel_tol * (hi - lo), 40));
}

// J_k = int_0^inf s^(2k) exp(-a/s^2 - b s^2) ds via s = exp(u)
double radial_moment(int k, double a, double b, double rel_tol) {
    auto g = [&](double u) {
        const double s = std::exp(u);
        return std::exp((2.0 * k + 1.0) * u - a / (s * s) - b * s * s);
    };
    // stationary point of (2k+1)u - a e^(-2u) - b e^(2u)
    const double c = 2.0 * k + 1.0;
    const double w = (c + std::sqrt(c * c + 16.0 * a * b)) / (4.0 * b);
    const double ustar = 0.5 * std::log(w);
    const double peak = g(ustar);
    double lo = ustar, hi = ustar;
    for (int it = 0; it < 500 && g(lo) > 1e-22 * peak; ++it) lo -= 0.5;
    for (int it = 0; it < 500 && g(hi) > 1e-22 * peak; ++it) hi += 0.5;
    return adaptive_simpson(g, lo, hi, rel_tol * peak * (hi - lo), 40);
}

}  // namespace

double partition_function(double beta, double omega, double lambda, double hbar) {
    if (!(beta > 0.0) || !(omega > 0.0) || !(lambda > 0.0))
        throw ConfigError("partition_function: beta, omega, lambda must be positive");
    const double umin = hbar * hbar / 4.0;
    const double x = std::sqrt(umin * lambda);
    return 8.0 * M_PI / lambda * std::pow(omega, -3.0) * std::pow(beta, -3.0) *
           (2.0 + beta * omega * x) * std::exp(-0.5 * beta * omega * x);
}

double partition_function_quadrature(double beta, double omega, double lambda, double hbar) {
    const double umin = hbar * hbar / 4.0;
    const double a = beta * lambda * umin / 2.0;
    const double b = beta * omega * omega / 8.0;
    // p-integral sqrt(2 pi / beta); U-integral (2 s^2/(beta lambda)) exp(-...)
    return std::sqrt(2.0 * M_PI / beta) * (2.0 / (beta * lambda)) * radial_moment(1, a, b, 1e-12);
}

double log_partition_function(double beta, double omega, double lambda, double hbar) {
    const double umin = hbar * hbar / 4.0;
    const double x = std::sqrt(umin * lambda);
    return std::log(8.0 * M_PI / lambda) - 3.0 * std::log(omega) - 3.0 * std::log(beta) +
           std::log(2.0 + beta * omega * x) - 0.5 * beta * omega * x;
}

double log_partition_function_quadrature(double beta, double omega, double lambda, double hbar) {
    const double umin = hbar * hbar / 4.0;
    const double a = beta * lambda * umin / 2.0;
    const double b = beta * omega * omega / 8.0;
    return 0.5 * std::log(2.0 * M_PI / beta) + std::log(2.0 / (beta * lambda)) +
           log_radial_moment(1, a, b, 1e-12);
}

double partition_function_quadrature3d(double beta, double omega, double lambda, double hbar) {
    const double umin = hbar * hbar / 4.0;
    // crude but direct: nested Simpson grids over (s, p, U)
    const double s_hi = 6.0 / std::sqrt(beta) / omega + 8.0 / (beta * omega * omega) + 6.0;
    const double p_hi = 8.0 / std::sqrt(beta);
    auto inner_u = [&](double s) {
        const double scale = 2.0 * s * s / (beta * lambda);
        const double u_hi = umin + 50.0 * scale;
        auto f = [&](double u) { return std::exp(-beta * lambda * u / (2.0 * s * s)); };
        return adaptive_simpson(f, umin, u_hi, 1e-10 * scale);
    };
    auto integrand_s = [&](double s) {
        if (s <= 1e-9) return 0.0;
        auto fp = [&](double p) { return std::exp(-0.5 * beta * p * p); };
        const double ip = adaptive_simpson(fp, -p_hi, p_hi, 1e-10);
        return ip * inner_u(s) * std::exp(-beta * omega * omega * s * s / 8.0);
    };
    return adaptive_simpson(integrand_s, 1e-6, s_hi, 1e-8);
}

EnsembleAverages ensemble_averages(double beta, double omega, double hbar) {
    const double umin = hbar * hbar / 4.0;
    const double ru = std::sqrt(umin);
    EnsembleAverages r;
    r.s2 = 12.0 / (omega * omega * beta) + umin * beta / (1.0 + 0.5 * ru * omega * beta);
    r.energy = (12.0 + beta * omega * (6.0 * ru + umin * omega * beta)) /
               (2.0 * beta * (2.0 + beta * ru * omega));
    r.casimir = umin + 24.0 / (beta * beta * omega * omega) + 4.0 * umin / (2.0 + ru * beta * omega);
    return r;
}

EnsembleAverages ensemble_averages_quadrature(double beta, double omega, double hbar) {
    const double umin = hbar * hbar / 4.0;
    const double a = beta * umin / 2.0;
    const double b = beta * omega * omega / 8.0;
    const double j1 = radial_moment(1, a, b, 1e-12);
    const double j2 = radial_moment(2, a, b, 1e-12);
    EnsembleAverages r;
    r.s2 = j2 / j1;
    // <E> = -d ln Z / d beta by central differences on the quadrature Z
    const double db = 1e-5 * beta;
    r.energy = -(std::log(partition_function_quadrature(beta + db, omega, 1.0, hbar)) -
                 std::log(partition_function_quadrature(beta - db, omega, 1.0, hbar))) /
               (2.0 * db);
    // exponential-moment identity for the U-integral
    r.casimir = umin + 2.0 * r.s2 / beta;
    return r;
}

namespace {

// <s^2>(omega) = 2 sqrt(U_min)/omega + 8/(beta omega^2) + R(omega),
// R(omega) = 4 / (beta omega^2 (1 + sqrt(U_min) beta omega / 2)) > 0
double s2_remainder(double omega, double beta, double ru) {
    return 4.0 / (beta * omega * omega * (1.0 + 0.5 * ru * beta * omega));
}

}  // namespace

double two_point_k_cut(double beta, double hbar, double tail_tol) {
    const double ru = hbar / 2.0;
    // tail bound: int_K^inf R dk <= 8/(ru beta^2) * 1/(2 K^2)
    return std::sqrt(4.0 / (ru * beta * beta * tail_tol)) + 10.0;
}

double two_point_function(double r, double m, double beta, double k_cut, double hbar,
                          double tail_tol) {
    if (!(r > 0.0) || !(m > 0.0)) throw ConfigError("two_point_function: need |x-y| > 0 and m > 0");
    const double ru = hbar / 2.0;  // sqrt(U_min)
    const double tail = 4.0 / (ru * beta * beta * k_cut * k_cut);
    if (tail > tail_tol)
        throw CutoffTooSmall("two_point_function: tail bound " + std::to_string(tail) +
                             " exceeds tolerance");
    auto integrand = [&](double k) {
        return s2_remainder(std::sqrt(k * k + m * m), beta, ru) * std::cos(k * r);
    };
    // integrate one oscillation period per adaptive block
    const double block = std::max(2.0 * M_PI / r, 0.5);
    double remainder = 0.0;
    for (double k0 = 0.0; k0 < k_cut; k0 += block)
        remainder += adaptive_simpson(integrand, k0, std::min(k0 + block, k_cut), 1e-13, 24);
    const double closed = 2.0 * ru * bessel_k0(m * r) + (8.0 / beta) * (M_PI / (2.0 * m)) * std::exp(-m * r);
    return (closed + remainder) / (2.0 * M_PI);
}

double circle_two_point(double r, double m, double beta, int k_max, double hbar) {
    if (k_max < 10 * std::max(1.0, m))
        throw ConfigError("circle_two_point: k_max below 10*max(1,m)");
    const double ru = hbar / 2.0;
    const double umin = hbar * hbar / 4.0;
    auto s2_of = [&](double omega) {
        return 12.0 / (omega * omega * beta) + umin * beta / (1.0 + 0.5 * ru * omega * beta);
    };
    if (r == 0.0) {
        // truncated mode-sum of the variance, no resummation
        double sum = s2_of(m);
        for (int k = 1; k <= k_max; ++k) sum += 2.0 * s2_of(std::sqrt(double(k) * k + m * m));
        return sum / (4.0 * M_PI);
    }
    // closed-form sums over all k for the analytic pieces
    const double log_part = -std::log(2.0 * std::sin(0.5 * r));  // sum cos(kr)/k
    // sum cos(kr)/(k^2+m^2) = (pi/2m) cosh(m(pi-r))/sinh(pi m) - 1/(2 m^2)
    const double lorentz_part =
        (M_PI / (2.0 * m)) * std::cosh(m * (M_PI - r)) / std::sinh(M_PI * m) - 1.0 / (2.0 * m * m);
    double sum = s2_of(m);  // k = 0 term
    sum += 2.0 * (2.0 * ru) * log_part;
    sum += 2.0 * (8.0 / beta) * lorentz_part;
    for (int k = 1; k <= k_max; ++k) {
        const double omega = std::sqrt(double(k) * k + m * m);
        const double corr = 2.0 * ru * (1.0 / omega - 1.0 / k) + s2_remainder(omega, beta, ru);
        sum += 2.0 * corr * std::cos(k * r);
    }
    return sum / (4.0 * M_PI);
}

double bessel_k0(double z) {
    if (!(z > 0.0)) throw ConfigError("bessel_k0: need z > 0");
    // K0(z) = int_0^inf exp(-z cosh t) dt; even integrand, exponential decay
    const double T = std::acosh(std::max(2.0, 700.0 / z)) + 1.0;
    const int n = 3000;
    const double h = T / n;
    double sum = 0.5 * (std::exp(-z) + std::exp(-z * std::cosh(T)));
    for (int i = 1; i < n; ++i) sum += std::exp(-z * std::cosh(i * h));
    return sum * h;
}

double bessel_k0_series(double z) {
    if (!(z > 0.0) || z > 20.0) throw ConfigError("bessel_k0_series: valid for 0 < z <= 20");
    constexpr double euler_gamma = 0.57721566490153286;
    double i0 = 1.0, sum = 0.0, term = 1.0, harmonic = 0.0;
    const double q = 0.25 * z * z;
    for (int mth = 1; mth <= 60; ++mth) {
        term *= q / (double(mth) * mth);
        harmonic += 1.0 / mth;
        i0 += term;
        sum += term * harmonic;
    }
    return -(std::log(0.5 * z) + euler_gamma) * i0 + sum;
}

}  // namespace momdyn
