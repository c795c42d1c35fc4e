#include "conic/terminal_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "conic/errors.hpp"
#include "conic/numerics.hpp"

namespace conic {

double ModelParams::continuous_variance() const {
    return sigma * sigma * maturity + epsilon * epsilon * std::pow(maturity, 2.0 * hurst);
}

void ModelParams::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(s0) || !finite(r) || !finite(sigma) || !finite(epsilon) || !finite(hurst) ||
        !finite(maturity)) {
        throw DomainError("model: all parameters must be finite");
    }
    if (!(s0 > 0.0)) throw DomainError("model: s0 must be positive");
    if (!(maturity > 0.0)) throw DomainError("model: maturity must be positive");
    if (sigma < 0.0 || epsilon < 0.0) throw DomainError("model: volatilities must be non-negative");
    if (sigma == 0.0 && epsilon == 0.0) {
        throw DomainError("model: (sigma, epsilon) must not both be zero");
    }
    if (!(hurst > 0.0 && hurst <= 1.0)) throw DomainError("model: hurst must lie in (0, 1]");
}

double JumpParams::mean_jump() const { return std::exp(mu1 + 0.5 * sigma1_sq); }

double JumpParams::second_moment_jump() const { return std::exp(2.0 * mu1 + 2.0 * sigma1_sq); }

void JumpParams::validate() const {
    if (!std::isfinite(lambda) || !std::isfinite(mu1) || !std::isfinite(sigma1_sq)) {
        throw DomainError("jumps: all parameters must be finite");
    }
    if (lambda < 0.0) throw DomainError("jumps: lambda must be non-negative");
    if (sigma1_sq < 0.0) throw DomainError("jumps: sigma1_sq must be non-negative");
}

std::string_view to_string(DriftConvention conv) {
    return conv == DriftConvention::Compensated ? "compensated" : "uncompensated";
}

JumpFactorMoments jump_factor_moments(const JumpParams& jumps, double t) {
    if (!(t >= 0.0)) throw DomainError("jump_factor_moments: t must be non-negative");
    jumps.validate();
    // E[J(t)] = E[E[J_1]^N], the Poisson generating function at E[J_1]; likewise
    // for the second moment with E[J_1^2].
    const double mean = std::exp(-jumps.lambda * t * (1.0 - jumps.mean_jump()));
    const double second = std::exp(-jumps.lambda * t * (1.0 - jumps.second_moment_jump()));
    return {mean, second - mean * mean};
}

TerminalLaw TerminalLaw::build(const ModelParams& model, const JumpParams& jumps,
                               DriftConvention conv, double tail_tol) {
    model.validate();
    jumps.validate();
    const double cont_var = model.continuous_variance();
    if (!(cont_var > 0.0)) {
        throw DomainError("terminal law: continuous log-variance sigma^2 T + epsilon^2 T^{2H} is zero");
    }
    const double lt = jumps.lambda * model.maturity;
    const PoissonWeights pw = poisson_weights(lt, tail_tol);

    double base_drift = model.r * model.maturity - 0.5 * cont_var;
    if (conv == DriftConvention::Compensated) {
        base_drift += lt * (1.0 - jumps.mean_jump());
    }

    TerminalLaw law;
    law.weights_ = pw.weights;
    law.s0_ = model.s0;
    law.discount_rT_ = model.r * model.maturity;
    law.tail_tol_ = tail_tol;
    law.log_means_.reserve(law.weights_.size());
    law.log_sds_.reserve(law.weights_.size());
    for (int n = 0; n <= pw.n_max; ++n) {
        law.log_means_.push_back(base_drift + n * jumps.mu1);
        law.log_sds_.push_back(std::sqrt(cont_var + n * jumps.sigma1_sq));
    }
    return law;
}

double TerminalLaw::discount_factor() const { return std::exp(-discount_rT_); }

double TerminalLaw::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    const double y = std::log(x) - std::log(s0_);
    double sum = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        sum += weights_[n] * normal_cdf((y - log_means_[n]) / log_sds_[n]);
    }
    return std::min(sum, 1.0);
}

double TerminalLaw::survival(double x) const {
    if (x <= 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    const double y = std::log(x) - std::log(s0_);
    double sum = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        sum += weights_[n] * normal_cdf(-(y - log_means_[n]) / log_sds_[n]);
    }
    return std::min(sum, 1.0);
}

double TerminalLaw::density(double x) const {
    if (x <= 0.0) return 0.0;
    const double y = std::log(x) - std::log(s0_);
    double sum = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        sum += weights_[n] * normal_pdf((y - log_means_[n]) / log_sds_[n]) / log_sds_[n];
    }
    return sum / x;
}

double TerminalLaw::g_n_cdf(int n, double x) const {
    if (n < 0 || n > n_max()) {
        throw IndexError("g_n_cdf: component " + std::to_string(n) + " outside [0, " +
                         std::to_string(n_max()) + "]");
    }
    if (!(x > 0.0)) throw DomainError("g_n_cdf: x must be positive");
    const auto k = static_cast<std::size_t>(n);
    return normal_cdf((std::log(x) - std::log(s0_) - log_means_[k]) / log_sds_[k]);
}

double TerminalLaw::quantile(double p) const {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("quantile: p must lie in (0, 1), got " + std::to_string(p));
    }
    return invert(p, false);
}

double TerminalLaw::survival_quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) {
        throw DomainError("survival_quantile: q must lie in (0, 1), got " + std::to_string(q));
    }
    return invert(q, true);
}

double TerminalLaw::invert(double p, bool upper) const {
    // Work on y = log(x / s0). The mixture CDF at y is a weighted average of
    // component CDFs, so the smallest and largest component quantiles bracket
    // the root.
    const double z = upper ? -normal_quantile(p) : normal_quantile(p);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        const double yn = log_means_[n] + log_sds_[n] * z;
        lo = std::min(lo, yn);
        hi = std::max(hi, yn);
    }

    // Increasing in y in both cases.
    auto residual = [&](double y) {
        double sum = 0.0;
        double slope = 0.0;
        for (std::size_t n = 0; n < weights_.size(); ++n) {
            const double zn = (y - log_means_[n]) / log_sds_[n];
            sum += weights_[n] * normal_cdf(upper ? -zn : zn);
            slope += weights_[n] * normal_pdf(zn) / log_sds_[n];
        }
        return std::pair{upper ? p - sum : sum - p, slope};
    };

    if (hi - lo <= 0.0) {
        return s0_ * std::exp(lo);
    }

    // Bisection safeguarded Newton: each step keeps a sign-changing bracket.
    double y = 0.5 * (lo + hi);
    double h = 0.0;
    for (int iter = 0; iter < 200; ++iter) {
        const auto [res, slope] = residual(y);
        h = res;
        if (h == 0.0) break;
        if (h < 0.0) lo = y; else hi = y;
        double next = slope > 0.0 ? y - h / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const double step = std::abs(next - y);
        y = next;
        if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y)) ||
            hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(y))) {
            h = residual(y).first;
            break;
        }
    }
    if (!(std::abs(h) <= 1e-10)) {
        throw NonConvergence("quantile: bracketed search did not converge");
    }
    return s0_ * std::exp(y);
}

double TerminalLaw::expected_terminal_price() const {
    double sum = 0.0;
    for (std::size_t n = 0; n < weights_.size(); ++n) {
        sum += weights_[n] * std::exp(log_means_[n] + 0.5 * log_sds_[n] * log_sds_[n]);
    }
    return s0_ * sum;
}

}  // namespace conic
