#pragma once

#include <functional>
#include <vector>

namespace conic {

struct Tolerance {
    double abs_tol = 1e-8;
    int max_subdivisions = 2000;

    // Throws DomainError unless abs_tol > 0 and max_subdivisions >= 1.
    void validate() const;
};

/// Standard normal distribution function, absolute error below 1e-12.
double normal_cdf(double x);

/// Standard normal density.
double normal_pdf(double x);

/// Inverse of normal_cdf on (0, 1). Acklam's rational approximation followed
/// by one Halley step against normal_cdf. Throws DomainError outside (0, 1).
double normal_quantile(double p);

struct PoissonWeights {
    std::vector<double> weights;   // weights[n] = P(N = n) / (1 - dropped tail)
    int n_max = 0;                 // last retained index
    double renormalization = 1.0;  // factor applied to the raw probabilities
};

/// Truncated Poisson(rate) probabilities. n_max is the smallest N whose upper
/// tail P(N > n) falls below tail_tol; the retained weights are rescaled to
/// sum to one. Throws DomainError for rate < 0, rate > 700 or tail_tol
/// outside (0, 1).
PoissonWeights poisson_weights(double rate, double tail_tol);

/// Globally adaptive 15-point Gauss-Kronrod quadrature over [lo, hi].
/// Bisects the interval with the largest error estimate until the summed
/// estimate is below tol.abs_tol. Throws NonConvergence once
/// tol.max_subdivisions intervals are in use without meeting the target.
double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          const Tolerance& tol);

}  // namespace conic
