#include "fraq/cq_weights.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fraq {

namespace {

void check_alpha_tau(double alpha, double tau) {
    if (!(alpha > 0.0) || !(alpha <= 1.0))
        throw std::invalid_argument("cq_weights: alpha must be in (0,1], got " + std::to_string(alpha));
    if (!(tau > 0.0))
        throw std::invalid_argument("cq_weights: tau must be > 0");
}

// Coefficients of (1 - x*zeta)^alpha.
std::vector<double> binomial_series(double alpha, double x, long n_max) {
    std::vector<double> c(static_cast<std::size_t>(n_max) + 1);
    c[0] = 1.0;
    for (long i = 1; i <= n_max; ++i)
        c[i] = c[i - 1] * ((i - 1 - alpha) / i) * x;
    return c;
}

}  // namespace

WeightTable be_weights(double alpha, double tau, long n_max) {
    check_alpha_tau(alpha, tau);
    if (n_max < 0) throw std::invalid_argument("be_weights: n_max must be >= 0");
    WeightTable t;
    t.scheme = CqScheme::BE;
    t.alpha = alpha;
    t.tau = tau;
    t.weights = binomial_series(alpha, 1.0, n_max);
    const double scale = std::pow(tau, -alpha);
    for (double& w : t.weights) w *= scale;
    return t;
}

WeightTable sbd_weights(double alpha, double tau, long n_max) {
    check_alpha_tau(alpha, tau);
    if (n_max < 0) throw std::invalid_argument("sbd_weights: n_max must be >= 0");
    const auto c1 = binomial_series(alpha, 1.0, n_max);
    const auto c2 = binomial_series(alpha, 1.0 / 3.0, n_max);
    WeightTable t;
    t.scheme = CqScheme::SBD;
    t.alpha = alpha;
    t.tau = tau;
    t.weights.assign(static_cast<std::size_t>(n_max) + 1, 0.0);
    const double scale = std::pow(1.5 / tau, alpha);
    for (long i = 0; i <= n_max; ++i) {
        double acc = 0.0;
        for (long j = 0; j <= i; ++j) acc += c1[j] * c2[i - j];
        t.weights[i] = scale * acc;
    }
    return t;
}

double coupling_from_transition(double m) {
    if (!(m > 0.0) || !(m <= 1.0))
        throw std::invalid_argument("coupling_from_transition: m must be in (0,1], got " + std::to_string(m));
    if (m == 0.5)
        throw std::invalid_argument("coupling_from_transition: m = 1/2 makes the transition matrix singular");
    return (1.0 - m) / (2.0 * m - 1.0);
}

}  // namespace fraq
