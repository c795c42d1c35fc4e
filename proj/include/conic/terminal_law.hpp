#pragma once

#include <string_view>
#include <vector>

namespace conic {

/// Continuous leg of the price model: log S_T / S_0 gets a Brownian part with
/// volatility `sigma` and an independent fractional Brownian part with
/// volatility `epsilon` and Hurst index `hurst`, so its variance over
/// [0, T] is sigma^2 T + epsilon^2 T^{2H}.
struct ModelParams {
    double s0 = 100.0;
    double r = 0.0;
    double sigma = 0.0;
    double epsilon = 0.0;
    double hurst = 0.8;
    double maturity = 1.0;

    double continuous_variance() const;

    /// Throws DomainError unless s0 > 0, maturity > 0, sigma, epsilon >= 0,
    /// (sigma, epsilon) != (0, 0) and hurst in (0, 1].
    void validate() const;

    /// Hurst index in (3/4, 1], where the mixed process is free of arbitrage.
    bool in_arbitrage_free_regime() const { return hurst > 0.75 && hurst <= 1.0; }
};

/// Compound Poisson jumps with i.i.d. lognormal multiplicative sizes:
/// log J ~ Normal(mu1, sigma1_sq), jump count ~ Poisson(lambda t).
struct JumpParams {
    double lambda = 0.0;
    double mu1 = 0.0;
    double sigma1_sq = 0.0;

    /// E[J_1] = exp(mu1 + sigma1_sq / 2)
    double mean_jump() const;
    /// E[J_1^2] = exp(2 mu1 + 2 sigma1_sq)
    double second_moment_jump() const;

    void validate() const;
};

/// Whether the log-drift includes the jump compensator lambda T (1 - E[J_1]).
/// Compensated makes the discounted price a martingale.
enum class DriftConvention { Compensated, Uncompensated };

std::string_view to_string(DriftConvention conv);

struct JumpFactorMoments {
    double mean;
    double variance;
};

/// Mean and variance of the jump factor J(t) = prod_{i <= N(t)} J_i.
JumpFactorMoments jump_factor_moments(const JumpParams& jumps, double t);

/// Law of S_T as a truncated Poisson mixture of lognormals. Component n
/// (n jumps) has log(S_T / s0) ~ Normal(log_means[n], log_sds[n]^2) with
///   log_means[n] = base_drift + n mu1,
///   log_sds[n]^2 = sigma^2 T + epsilon^2 T^{2H} + n sigma1_sq.
/// Immutable after construction.
class TerminalLaw {
public:
    static TerminalLaw build(const ModelParams& model, const JumpParams& jumps,
                             DriftConvention conv, double tail_tol);

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& log_means() const { return log_means_; }
    const std::vector<double>& log_sds() const { return log_sds_; }
    double s0() const { return s0_; }
    double discount_rT() const { return discount_rT_; }
    double discount_factor() const;
    double tail_tol_used() const { return tail_tol_; }
    int n_max() const { return static_cast<int>(weights_.size()) - 1; }

    /// P(S_T <= x); zero for x <= 0.
    double cdf(double x) const;
    /// P(S_T > x), evaluated directly so that it keeps relative precision
    /// in the upper tail.
    double survival(double x) const;
    /// Density of S_T at x.
    double density(double x) const;

    /// CDF of the n-jump component. Throws IndexError for n > n_max and
    /// DomainError for x <= 0.
    double g_n_cdf(int n, double x) const;

    /// x with cdf(x) = p, by bracketed root finding on log x. Throws
    /// DomainError unless 0 < p < 1.
    double quantile(double p) const;
    /// x with survival(x) = q; the accurate route for q near 0.
    double survival_quantile(double q) const;

    /// E[S_T] = sum_n w_n s0 exp(m_n + s_n^2 / 2).
    double expected_terminal_price() const;

private:
    TerminalLaw() = default;

    // Solves P(S_T <= x) = p (upper == false) or P(S_T > x) = p (upper == true).
    double invert(double p, bool upper) const;

    std::vector<double> weights_;
    std::vector<double> log_means_;
    std::vector<double> log_sds_;
    double s0_ = 0.0;
    double discount_rT_ = 0.0;
    double tail_tol_ = 0.0;
};

inline TerminalLaw build_law(const ModelParams& model, const JumpParams& jumps,
                             DriftConvention conv, double tail_tol) {
    return TerminalLaw::build(model, jumps, conv, tail_tol);
}

}  // namespace conic
