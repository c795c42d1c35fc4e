#pragma once

#include <cstdint>
#include <vector>

#include "conic/distortion.hpp"
#include "conic/pricing.hpp"
#include "conic/terminal_law.hpp"

namespace conic {

struct McConfig {
    std::int64_t n_samples = 1'000'000;
    std::uint64_t seed = 42;
    int n_batches = 20;

    // Throws DomainError unless n_samples >= n_batches >= 2.
    void validate() const;
};

/// Draws S_T from its exact terminal law: a Poisson jump count by CDF
/// inversion, then a Gaussian log-return with the component's mean and
/// variance. Batch b is generated from its own substream of `seed`, so the
/// output is the same for any thread count.
std::vector<double> sample_terminal(const ModelParams& model, const JumpParams& jumps,
                                    DriftConvention conv, const McConfig& cfg);

/// Draws the jump factor J(t) = prod_{i <= N(t)} J_i.
std::vector<double> sample_jump_factor(const JumpParams& jumps, double t, const McConfig& cfg);

struct McQuote {
    double bid;
    double ask;
    double se_bid;
    double se_ask;

    Quote to_quote(double gamma) const {
        return Quote::from_bid_ask(bid, ask, gamma, PricingMethod::MonteCarlo);
    }
};

/// L-statistic estimates of e^{-rT} E_f[X] (bid) and e^{-rT} E_{fhat}[X] (ask)
/// for the option payoff X, with standard errors from batch means.
McQuote mc_quote(const OptionSpec& opt, const ModelParams& model, const JumpParams& jumps,
                 DriftConvention conv, const Distortion& d, const McConfig& cfg);

/// Same estimator over an already drawn terminal sample (batch b occupies
/// the contiguous range produced by sample_terminal).
McQuote mc_quote_from_sample(const OptionSpec& opt, double discount_factor,
                             const std::vector<double>& terminal, const Distortion& d,
                             int n_batches);

}  // namespace conic
