#include "momdyn/oscillator_basis.hpp"

#include <algorithm>
#include <cmath>

#include "momdyn/errors.hpp"

namespace momdyn {

namespace {

double pythag(double a, double b) { return std::hypot(a, b); }

// Implicit-shift QL on a tridiagonal (d, e) with e[i] the coupling between
// i and i+1 (e[n-1] unused). Eigenvalues only.
void tqli_values(std::vector<double>& d, std::vector<double>& e) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    e[n - 1] = 0.0;
    constexpr double eps = 2.3e-16;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        while (true) {
            int m = l;
            for (; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m == l) break;
            if (++iter > 100) throw NonConvergedEigen("tqli: too many iterations");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = pythag(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool early = false;
            for (int i = m - 1; i >= l; --i) {
                double f = s * e[i];
                const double b = c * e[i];
                r = pythag(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (early) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// Householder reduction to tridiagonal form, no eigenvector accumulation.
void tred_values(std::vector<double>& a, int n, std::vector<double>& d, std::vector<double>& e) {
    auto A = [&](int i, int j) -> double& { return a[static_cast<std::size_t>(i) * n + j]; };
    for (int i = n - 1; i >= 1; --i) {
        const int l = i - 1;
        double h = 0.0, scale = 0.0;
        if (l > 0) {
            for (int k = 0; k <= l; ++k) scale += std::abs(A(i, k));
            if (scale == 0.0) {
                e[i] = A(i, l);
            } else {
                for (int k = 0; k <= l; ++k) {
                    A(i, k) /= scale;
                    h += A(i, k) * A(i, k);
                }
                double f = A(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                A(i, l) = f - g;
                f = 0.0;
                for (int j = 0; j <= l; ++j) {
                    g = 0.0;
                    for (int k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
                    for (int k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
                    e[j] = g / h;
                    f += e[j] * A(i, j);
                }
                const double hh = f / (h + h);
                for (int j = 0; j <= l; ++j) {
                    f = A(i, j);
                    e[j] = g = e[j] - hh * f;
                    for (int k = 0; k <= j; ++k) A(j, k) -= f * e[k] + g * A(i, k);
                }
            }
        } else {
            e[i] = A(i, l);
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for (int i = 0; i < n; ++i) d[i] = A(i, i);
}

}  // namespace

std::vector<double> tridiagonal_eigenvalues(std::vector<double> d, std::vector<double> e) {
    if (e.size() < d.size()) e.resize(d.size(), 0.0);
    tqli_values(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

std::vector<double> symmetric_eigenvalues(std::vector<double> a, int n) {
    std::vector<double> d(n), e(n);
    tred_values(a, n, d, e);
    // shift the subdiagonal into the e[i] = (i,i+1) convention
    for (int i = 0; i < n - 1; ++i) e[i] = e[i + 1];
    e[n - 1] = 0.0;
    tqli_values(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

GaussHermiteRule gauss_hermite(int n) {
    std::vector<double> d(n, 0.0), e(n, 0.0);
    for (int k = 1; k < n; ++k) e[k - 1] = std::sqrt(k / 2.0);
    auto nodes = tridiagonal_eigenvalues(d, e);

    GaussHermiteRule rule;
    rule.x = nodes;
    rule.w.resize(n);
    for (int i = 0; i < n; ++i) {
        const double x = nodes[i];
        // orthonormal Hermite functions phi_k(x) = v_k exp(L); the explicit
        // log scale keeps the recurrence alive where exp(-x^2/2) underflows
        double L = -0.5 * x * x - 0.25 * std::log(M_PI);
        double vm1 = 1.0;
        double v = std::sqrt(2.0) * x;
        double sum = 0.0;
        auto accumulate = [&](double vk) {
            if (vk == 0.0) return;
            const double lg = 2.0 * L + 2.0 * std::log(std::abs(vk));
            if (lg > -700.0) sum += std::exp(lg);
        };
        accumulate(vm1);
        for (int k = 1; k < n; ++k) {
            accumulate(v);
            const double vn = x * std::sqrt(2.0 / (k + 1)) * v - std::sqrt(double(k) / (k + 1)) * vm1;
            vm1 = v;
            v = vn;
            const double mag = std::max(std::abs(v), std::abs(vm1));
            if (mag > 1e250) {
                v *= 1e-250;
                vm1 *= 1e-250;
                L += 250.0 * std::log(10.0);
            }
        }
        rule.w[i] = 1.0 / sum;
    }
    return rule;
}

double exact_ground_state(const Potential1D& V, int basis_size, double hbar, double mass) {
    if (basis_size < 20) throw ConfigError("exact_ground_state: basis too small");
    const int N = basis_size;
    const int Nq = 3 * N + 120;
    const auto rule = gauss_hermite(Nq);
    const double alpha = std::sqrt(hbar / mass);  // q = alpha x at basis frequency 1

    // basis functions on the nodes
    std::vector<double> phi(static_cast<std::size_t>(N) * Nq);
    const double phi0 = std::pow(M_PI, -0.25);
    for (int i = 0; i < Nq; ++i) {
        const double x = rule.x[i];
        double pm1 = phi0 * std::exp(-0.5 * x * x);
        double p = std::sqrt(2.0) * x * pm1;
        phi[i] = pm1;
        if (N > 1) phi[static_cast<std::size_t>(Nq) + i] = p;
        for (int k = 2; k < N; ++k) {
            const double pn = x * std::sqrt(2.0 / k) * p - std::sqrt((k - 1.0) / k) * pm1;
            pm1 = p;
            p = pn;
            phi[static_cast<std::size_t>(k) * Nq + i] = p;
        }
    }
    std::vector<double> wv(Nq);
    for (int i = 0; i < Nq; ++i) wv[i] = rule.w[i] * V.value(alpha * rule.x[i]);

    std::vector<double> H(static_cast<std::size_t>(N) * N, 0.0);
    for (int m = 0; m < N; ++m) {
        const double* pm = &phi[static_cast<std::size_t>(m) * Nq];
        for (int nn = m; nn < N; ++nn) {
            const double* pn = &phi[static_cast<std::size_t>(nn) * Nq];
            double acc = 0.0;
            for (int i = 0; i < Nq; ++i) acc += pm[i] * pn[i] * wv[i];
            H[static_cast<std::size_t>(m) * N + nn] = acc;
            H[static_cast<std::size_t>(nn) * N + m] = acc;
        }
    }
    for (int nn = 0; nn < N; ++nn) {
        H[static_cast<std::size_t>(nn) * N + nn] += hbar * (2 * nn + 1) / 4.0;
        if (nn + 2 < N) {
            const double k = -hbar / 4.0 * std::sqrt((nn + 1.0) * (nn + 2.0));
            H[static_cast<std::size_t>(nn) * N + nn + 2] += k;
            H[static_cast<std::size_t>(nn + 2) * N + nn] += k;
        }
    }

    // convergence guard against the leading half-size block
    const int Nh = N / 2;
    std::vector<double> Hh(static_cast<std::size_t>(Nh) * Nh);
    for (int m = 0; m < Nh; ++m)
        for (int nn = 0; nn < Nh; ++nn) Hh[static_cast<std::size_t>(m) * Nh + nn] = H[static_cast<std::size_t>(m) * N + nn];

    const double e_full = symmetric_eigenvalues(std::move(H), N).front();
    const double e_half = symmetric_eigenvalues(std::move(Hh), Nh).front();
    if (std::abs(e_full - e_half) >= 1e-3)
        throw NonConvergedEigen("exact_ground_state: basis not converged (N vs N/2 differ by " +
                                std::to_string(std::abs(e_full - e_half)) + ")");
    return e_full;
}

}  // namespace momdyn
