#include "conic/numerics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <string>

#include "conic/errors.hpp"

namespace conic {

void Tolerance::validate() const {
    if (!(abs_tol > 0.0) || !std::isfinite(abs_tol)) {
        throw DomainError("tolerance: abs_tol must be positive, got " + std::to_string(abs_tol));
    }
    if (max_subdivisions < 1) {
        throw DomainError("tolerance: max_subdivisions must be >= 1");
    }
}

double normal_cdf(double x) {
    // erfc keeps full relative precision in the lower tail, where 1 - erf would cancel.
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

namespace {

// Acklam's coefficients, relative error ~1.15e-9 before refinement.
constexpr std::array<double, 6> kA = {-3.969683028665376e+01, 2.209460984245205e+02,
                                      -2.759285104469687e+02, 1.383577518672690e+02,
                                      -3.066479806614716e+01, 2.506628277459239e+00};
constexpr std::array<double, 5> kB = {-5.447609879822406e+01, 1.615858368580409e+02,
                                      -1.556989798598866e+02, 6.680131188771972e+01,
                                      -1.328068155288572e+01};
constexpr std::array<double, 6> kC = {-7.784894002430293e-03, -3.223964580411365e-01,
                                      -2.400758277161838e+00, -2.549732539343734e+00,
                                      4.374664141464968e+00,  2.938163982698783e+00};
constexpr std::array<double, 4> kD = {7.784695709041462e-03, 3.224671290700398e-01,
                                      2.445134137142996e+00, 3.754408661907416e+00};

double acklam(double p) {
    constexpr double p_low = 0.02425;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
               ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((kC[0] * q + kC[1]) * q + kC[2]) * q + kC[3]) * q + kC[4]) * q + kC[5]) /
               ((((kD[0] * q + kD[1]) * q + kD[2]) * q + kD[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((kA[0] * r + kA[1]) * r + kA[2]) * r + kA[3]) * r + kA[4]) * r + kA[5]) * q /
           (((((kB[0] * r + kB[1]) * r + kB[2]) * r + kB[3]) * r + kB[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal_quantile: p must lie in (0, 1), got " + std::to_string(p));
    }
    // Work in the lower half so the residual Phi(x) - p is formed without cancellation.
    if (p > 0.5) {
        return -normal_quantile(1.0 - p);
    }
    double x = acklam(p);
    // Halley refinement; two passes reach the double-precision fixed point.
    for (int i = 0; i < 2; ++i) {
        const double pdf = normal_pdf(x);
        if (pdf == 0.0) {
            break;
        }
        const double u = (normal_cdf(x) - p) / pdf;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

PoissonWeights poisson_weights(double rate, double tail_tol) {
    if (!(rate >= 0.0) || !std::isfinite(rate)) {
        throw DomainError("poisson_weights: rate must be non-negative, got " + std::to_string(rate));
    }
    if (rate > 700.0) {
        throw DomainError("poisson_weights: rate " + std::to_string(rate) +
                          " exceeds 700 (exp(-rate) underflows)");
    }
    if (!(tail_tol > 0.0 && tail_tol < 1.0)) {
        throw DomainError("poisson_weights: tail_tol must lie in (0, 1), got " +
                          std::to_string(tail_tol));
    }

    // Raw probabilities well past the point where the remainder is negligible
    // against tail_tol. Past n > 2*rate successive ratios are below 1/2, so the
    // unseen remainder is bounded by the last term.
    std::vector<double> raw{std::exp(-rate)};
    for (int n = 1;; ++n) {
        const double w = raw.back() * rate / n;
        raw.push_back(w);
        if (n > 2.0 * rate + 1.0 && (w < tail_tol * 1e-6 || w == 0.0)) {
            break;
        }
    }

    // tail[n] = sum_{k >= n} raw[k], accumulated from the small end.
    std::vector<double> tail(raw.size() + 1, 0.0);
    for (std::size_t k = raw.size(); k-- > 0;) {
        tail[k] = tail[k + 1] + raw[k];
    }

    std::size_t n_max = 0;
    while (tail[n_max + 1] >= tail_tol) {
        ++n_max;
    }

    PoissonWeights out;
    out.n_max = static_cast<int>(n_max);
    out.weights.assign(raw.begin(), raw.begin() + static_cast<std::ptrdiff_t>(n_max) + 1);
    double kept = 0.0;
    for (double w : out.weights) {
        kept += w;
    }
    out.renormalization = 1.0 / kept;
    for (double& w : out.weights) {
        w *= out.renormalization;
    }
    return out;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
    double lo;
    double hi;
    double value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double fc = f(center);
    double kronrod = fc * kWgk[7];
    double gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double fsum = f(center - dx) + f(center + dx);
        kronrod += kWgk[j] * fsum;
        if (j % 2 == 1) {
            gauss += kWg[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double lo, double hi,
                          const Tolerance& tol) {
    tol.validate();
    if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
        throw DomainError("integrate_adaptive: need finite lo < hi");
    }

    std::priority_queue<Segment> heap;
    const Segment first = gauss_kronrod(f, lo, hi);
    if (!std::isfinite(first.value)) {
        throw DomainError("integrate_adaptive: integrand is not finite on the interval");
    }
    heap.push(first);
    double total = first.value;
    double error = first.error;

    while (error > tol.abs_tol) {
        if (static_cast<int>(heap.size()) >= tol.max_subdivisions) {
            throw NonConvergence("integrate_adaptive: error estimate " + std::to_string(error) +
                                 " above " + std::to_string(tol.abs_tol) + " after " +
                                 std::to_string(heap.size()) + " subdivisions");
        }
        const Segment worst = heap.top();
        const double mid = 0.5 * (worst.lo + worst.hi);
        if (!(mid > worst.lo && mid < worst.hi)) {
            throw NonConvergence("integrate_adaptive: interval collapsed to machine precision");
        }
        heap.pop();
        const Segment left = gauss_kronrod(f, worst.lo, mid);
        const Segment right = gauss_kronrod(f, mid, worst.hi);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the segments to shed drift from the running updates.
    double sum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        heap.pop();
    }
    return sum;
}

}  // namespace conic
