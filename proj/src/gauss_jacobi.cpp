#include "fraq/gauss_jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace fraq {

namespace {

constexpr int kMaxPoints = 512;

void check_exponents(double a, double b) {
    if (!(a > -1.0) || !(b > -1.0))
        throw std::invalid_argument("jacobi exponents must be > -1, got a=" +
                                    std::to_string(a) + " b=" + std::to_string(b));
}

// Recurrence coefficients of the monic Jacobi polynomials:
// p_{k+1} = (x - alpha_k) p_k - beta_k p_{k-1}.
double monic_alpha(double a, double b, int k) {
    if (k == 0) return (b - a) / (a + b + 2.0);
    const double s = 2.0 * k + a + b;
    return (b * b - a * a) / (s * (s + 2.0));
}

double monic_beta(double a, double b, int k) {
    // beta_0 carries the zeroth moment; beta_k (k>=1) are the squared
    // off-diagonal entries of the Jacobi matrix.
    if (k == 0) return jacobi_moment0(a, b);
    const double s = 2.0 * k + a + b;
    if (k == 1) return 4.0 * (a + 1.0) * (b + 1.0) / ((s) * (s) * (s + 1.0));
    return 4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s + 1.0) * (s - 1.0));
}

// Symmetric tridiagonal eigen-solver (implicit QL with Wilkinson shift),
// eigenvectors accumulated in z (row-major n x n). Deterministic.
void tql2(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z, int n) {
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 2.3e-16 * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) throw std::runtime_error("tql2: no convergence");
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0, c = 1.0, p = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double bb = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * bb;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - bb;
                    for (int k = 0; k < n; ++k) {
                        f = z[(std::size_t)k * n + i + 1];
                        z[(std::size_t)k * n + i + 1] = s * z[(std::size_t)k * n + i] + c * f;
                        z[(std::size_t)k * n + i] = c * z[(std::size_t)k * n + i] - s * f;
                    }
                }
                if (r == 0.0 && m - 1 >= l) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

// Value and derivative of the monic Jacobi polynomial of degree n at x.
void monic_eval(double a, double b, int n, double x, double& p, double& dp) {
    double pm1 = 0.0, dpm1 = 0.0;
    p = 1.0;
    dp = 0.0;
    for (int k = 0; k < n; ++k) {
        const double al = monic_alpha(a, b, k);
        const double be = (k == 0) ? 0.0 : monic_beta(a, b, k);
        const double pn = (x - al) * p - be * pm1;
        const double dpn = p + (x - al) * dp - be * dpm1;
        pm1 = p;
        dpm1 = dp;
        p = pn;
        dp = dpn;
    }
}

}  // namespace

double gamma_fn(double x) {
    // Lanczos, g = 7, 9 terms.
    static const double coef[9] = {
        0.99999999999980993,   676.5203681218851,    -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,  12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    x -= 1.0;
    double acc = coef[0];
    for (int i = 1; i < 9; ++i) acc += coef[i] / (x + i);
    const double t = x + 7.5;
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * acc;
}

double inv_gamma_product(double alpha) {
    return std::sin(std::numbers::pi * alpha) / std::numbers::pi;
}

double jacobi_moment0(double a, double b) {
    check_exponents(a, b);
    return std::pow(2.0, a + b + 1.0) * gamma_fn(a + 1.0) * gamma_fn(b + 1.0) /
           gamma_fn(a + b + 2.0);
}

double jacobi_moment(double a, double b, int k) {
    check_exponents(a, b);
    if (k < 0) throw std::invalid_argument("jacobi_moment: k must be >= 0");
    // m_{k+1} = ((b-a) m_k + k m_{k-1}) / (a+b+2+k), from integrating
    // s^k d[(1-s)^(a+1)(1+s)^(b+1)] by parts.
    double prev = jacobi_moment0(a, b);
    if (k == 0) return prev;
    double cur = (b - a) / (a + b + 2.0) * prev;
    for (int j = 1; j < k; ++j) {
        const double next = ((b - a) * cur + j * prev) / (a + b + 2.0 + j);
        prev = cur;
        cur = next;
    }
    return cur;
}

JacobiRule gauss_jacobi(double a, double b, int n_points) {
    check_exponents(a, b);
    if (n_points < 1) throw std::invalid_argument("gauss_jacobi: n_points must be >= 1");
    if (n_points > kMaxPoints) throw std::invalid_argument("gauss_jacobi: n_points capped at 512");

    const int n = n_points;
    const double mu0 = jacobi_moment0(a, b);

    std::vector<double> diag(n), off(n), z((std::size_t)n * n, 0.0);
    for (int k = 0; k < n; ++k) {
        diag[k] = monic_alpha(a, b, k);
        z[(std::size_t)k * n + k] = 1.0;
    }
    for (int k = 1; k < n; ++k) off[k] = std::sqrt(monic_beta(a, b, k));

    tql2(diag, off, z, n);

    JacobiRule rule;
    rule.exponent_a = a;
    rule.exponent_b = b;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int i, int j) { return diag[i] < diag[j]; });

    for (int i = 0; i < n; ++i) {
        const int c = order[i];
        double x = diag[c];
        // One Newton step on the degree-n monic Jacobi polynomial restores
        // full double precision lost in the eigen iteration.
        double p, dp;
        monic_eval(a, b, n, x, p, dp);
        if (dp != 0.0) {
            const double step = p / dp;
            if (std::abs(step) < 1e-8) x -= step;
        }
        rule.nodes[i] = x;
        // Weight from the Christoffel function: w = mu0 / sum_k p_k(x)^2
        // over orthonormal polynomials, consistent with the polished node.
        double pm1 = 0.0, pk = 1.0 / std::sqrt(mu0), sum = pk * pk;
        double bk = 0.0;
        for (int k = 0; k < n - 1; ++k) {
            const double bk1 = std::sqrt(monic_beta(a, b, k + 1));
            const double pk1 = ((x - monic_alpha(a, b, k)) * pk - bk * pm1) / bk1;
            pm1 = pk;
            pk = pk1;
            bk = bk1;
            sum += pk * pk;
        }
        rule.weights[i] = 1.0 / sum;
    }
    return rule;
}

}  // namespace fraq
