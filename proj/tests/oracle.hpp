#pragma once

// Reference implementations used only by the tests. Nothing here calls into
// the library, and the special functions avoid libm's erf/erfc so they check
// the production path independently.

#include <cmath>
#include <numbers>
#include <vector>

namespace oracle {

// erf by its Maclaurin series for |x| <= 3 and erfc by a Lentz continued
// fraction beyond, both in long double.
inline long double erf_series(long double x) {
    long double term = x;  // (-1)^n x^{2n+1} / n!
    long double sum = x;
    for (int n = 1; n < 200; ++n) {
        term *= -x * x / n;
        const long double add = term / (2 * n + 1);
        sum += add;
        if (std::fabs(add) < 1e-22L * std::fabs(sum)) break;
    }
    return 2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum;
}

inline long double erfc_fraction(long double x) {
    // erfc(x) = exp(-x^2)/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0
    const long double tiny = 1e-300L;
    long double f = x;
    long double c = x;
    long double d = 0.0L;
    for (int k = 1; k < 5000; ++k) {
        const long double a = k / 2.0L;
        d = x + a * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = x + a / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0L / d;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-21L) break;
    }
    return std::exp(-x * x) / std::sqrt(std::numbers::pi_v<long double>) / f;
}

inline long double phi(long double x) {
    const long double z = x / std::numbers::sqrt2_v<long double>;
    if (std::fabs(z) <= 3.0L) return 0.5L * (1.0L + erf_series(z));
    if (z > 0) return 1.0L - 0.5L * erfc_fraction(z);
    return 0.5L * erfc_fraction(-z);
}

inline long double normal_density(long double x) {
    return std::exp(-0.5L * x * x) / std::sqrt(2.0L * std::numbers::pi_v<long double>);
}

// P(N = n) through explicit n! in long double.
inline long double poisson_pmf_naive(long double rate, int n) {
    long double fact = 1.0L;
    for (int k = 2; k <= n; ++k) fact *= k;
    return std::exp(-rate) * std::pow(rate, n) / fact;
}

// Smallest N with 1 - sum_{n <= N} P(N = n) < tol, by brute-force summation.
inline int poisson_tail_nmax(long double rate, long double tol) {
    long double cum = 0.0L;
    for (int n = 0;; ++n) {
        cum += poisson_pmf_naive(rate, n);
        if (1.0L - cum < tol) return n;
    }
}

// P(L <= x) for log L ~ Normal(mean, sd^2).
inline long double lognormal_cdf(long double x, long double mean, long double sd) {
    return phi((std::log(x) - mean) / sd);
}

}  // namespace oracle
