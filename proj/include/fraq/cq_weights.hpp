#pragma once

#include <vector>

namespace fraq {

enum class CqScheme { BE, SBD };

/// Classical convolution-quadrature weights d_i of delta(zeta)^alpha,
/// delta being the BE or SBD generating function. Units are time^-alpha.
struct WeightTable {
    CqScheme scheme = CqScheme::BE;
    double alpha = 0.0;  // in (0,1]
    double tau = 1.0;    // time step
    std::vector<double> weights;  // d_0 .. d_n_max

    double operator[](std::size_t i) const { return weights[i]; }
    std::size_t size() const { return weights.size(); }
};

/// Power-series coefficients of ((1-zeta)/tau)^alpha via the binomial
/// recurrence d_i = d_{i-1} (i-1-alpha)/i, d_0 = tau^-alpha.
WeightTable be_weights(double alpha, double tau, long n_max);

/// Coefficients of (((1-zeta)+(1-zeta)^2/2)/tau)^alpha through the
/// factorization (3/2)(1-zeta)(1-zeta/3): two binomial series and one
/// Cauchy product.
WeightTable sbd_weights(double alpha, double tau, long n_max);

/// Coupling constant a = (1-m)/(2m-1) of the two-state system from the
/// Markov transition probability m. Throws for m = 1/2 (singular) and for
/// m outside (0,1].
double coupling_from_transition(double m);

}  // namespace fraq
