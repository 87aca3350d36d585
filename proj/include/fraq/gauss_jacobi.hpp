#pragma once

#include <vector>

namespace fraq {

/// Gauss-Jacobi quadrature rule for the weight (1-s)^a (1+s)^b on [-1,1].
struct JacobiRule {
    double exponent_a = 0.0;
    double exponent_b = 0.0;
    std::vector<double> nodes;    // strictly increasing, in (-1,1)
    std::vector<double> weights;  // strictly positive

    std::size_t size() const { return nodes.size(); }
};

/// Lanczos gamma function, relative error below 1e-13 for x in the ranges
/// this library needs (arguments derived from exponents > -1).
double gamma_fn(double x);

/// sin(pi*alpha)/pi, i.e. 1/(Gamma(1-alpha)*Gamma(alpha)) without cancellation.
double inv_gamma_product(double alpha);

/// Zeroth moment 2^(a+b+1) * Gamma(a+1) * Gamma(b+1) / Gamma(a+b+2).
double jacobi_moment0(double exponent_a, double exponent_b);

/// Moment of s^k against the Jacobi weight, via the stable three-term
/// recurrence in k. Test oracle for rule exactness.
double jacobi_moment(double exponent_a, double exponent_b, int k);

/// Build an n_points Gauss-Jacobi rule by Golub-Welsch (symmetric
/// tridiagonal eigenvalues) with one Newton polish per node.
/// Throws std::invalid_argument for exponents <= -1, n_points == 0, or
/// n_points > 256.
JacobiRule gauss_jacobi(double exponent_a, double exponent_b, int n_points);

}  // namespace fraq
