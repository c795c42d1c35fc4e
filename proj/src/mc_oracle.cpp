#include "conic/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "conic/errors.hpp"
#include "conic/numerics.hpp"
#include "parallel.hpp"

namespace conic {

void McConfig::validate() const {
    if (n_batches < 2) throw DomainError("mc: n_batches must be at least 2");
    if (n_samples < n_batches) throw DomainError("mc: n_samples must be at least n_batches");
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Fixed substream per batch index.
std::mt19937_64 batch_engine(std::uint64_t seed, int batch) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(batch) + 1)));
}

// Uniform on the open interval (0, 1) from the top 53 bits.
double open_uniform(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

double standard_normal(std::mt19937_64& rng) { return normal_quantile(open_uniform(rng)); }

int poisson_by_inversion(std::mt19937_64& rng, double mean) {
    const double u = open_uniform(rng);
    double p = std::exp(-mean);
    double cum = p;
    int n = 0;
    while (u > cum && p > 0.0) {
        ++n;
        p *= mean / n;
        cum += p;
    }
    return n;
}

std::int64_t batch_begin(const McConfig& cfg, int b) {
    return cfg.n_samples * b / cfg.n_batches;
}

template <typename Draw>
std::vector<double> sample_batched(const McConfig& cfg, Draw&& draw) {
    cfg.validate();
    std::vector<double> out(static_cast<std::size_t>(cfg.n_samples));
    detail::parallel_for(static_cast<std::size_t>(cfg.n_batches), [&](std::size_t b) {
        auto rng = batch_engine(cfg.seed, static_cast<int>(b));
        const auto end = batch_begin(cfg, static_cast<int>(b) + 1);
        for (auto i = batch_begin(cfg, static_cast<int>(b)); i < end; ++i) {
            out[static_cast<std::size_t>(i)] = draw(rng);
        }
    });
    return out;
}

}  // namespace

std::vector<double> sample_terminal(const ModelParams& model, const JumpParams& jumps,
                                    DriftConvention conv, const McConfig& cfg) {
    model.validate();
    jumps.validate();
    const double cont_var = model.continuous_variance();
    if (!(cont_var > 0.0)) throw DomainError("mc: degenerate continuous log-variance");
    const double lt = jumps.lambda * model.maturity;
    double base_drift = model.r * model.maturity - 0.5 * cont_var;
    if (conv == DriftConvention::Compensated) {
        base_drift += lt * (1.0 - jumps.mean_jump());
    }
    return sample_batched(cfg, [&](std::mt19937_64& rng) {
        const int n = poisson_by_inversion(rng, lt);
        const double mean = base_drift + n * jumps.mu1;
        const double sd = std::sqrt(cont_var + n * jumps.sigma1_sq);
        return model.s0 * std::exp(mean + sd * standard_normal(rng));
    });
}

std::vector<double> sample_jump_factor(const JumpParams& jumps, double t, const McConfig& cfg) {
    jumps.validate();
    if (!(t >= 0.0)) throw DomainError("mc: t must be non-negative");
    const double sd = std::sqrt(jumps.sigma1_sq);
    return sample_batched(cfg, [&](std::mt19937_64& rng) {
        const int n = poisson_by_inversion(rng, jumps.lambda * t);
        double log_factor = 0.0;
        for (int i = 0; i < n; ++i) {
            log_factor += jumps.mu1 + sd * standard_normal(rng);
        }
        return std::exp(log_factor);
    });
}

McQuote mc_quote_from_sample(const OptionSpec& opt, double discount_factor,
                             const std::vector<double>& terminal, const Distortion& d,
                             int n_batches) {
    opt.validate();
    d.validate();
    const McConfig shape{static_cast<std::int64_t>(terminal.size()), 0, n_batches};
    shape.validate();

    std::vector<double> payoff(terminal.size());
    std::transform(terminal.begin(), terminal.end(), payoff.begin(), [&](double s) {
        return opt.kind == OptionKind::Call ? std::max(s - opt.strike, 0.0)
                                            : std::max(opt.strike - s, 0.0);
    });

    const Distortion fhat = d.dual();
    auto estimate = [&](std::vector<double> values) {
        std::sort(values.begin(), values.end());
        return std::pair{discount_factor * distorted_expectation_sorted(values, d),
                         discount_factor * distorted_expectation_sorted(values, fhat)};
    };

    const auto [bid_all, ask_all] = estimate(payoff);

    std::vector<double> batch_bid(static_cast<std::size_t>(n_batches));
    std::vector<double> batch_ask(static_cast<std::size_t>(n_batches));
    detail::parallel_for(batch_bid.size(), [&](std::size_t b) {
        const auto lo = payoff.begin() + batch_begin(shape, static_cast<int>(b));
        const auto hi = payoff.begin() + batch_begin(shape, static_cast<int>(b) + 1);
        const auto [bb, ba] = estimate(std::vector<double>(lo, hi));
        batch_bid[b] = bb;
        batch_ask[b] = ba;
    });

    auto standard_error = [&](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - mean) * (x - mean);
        const double var = ss / static_cast<double>(xs.size() - 1);
        return std::sqrt(var / static_cast<double>(xs.size()));
    };

    return {bid_all, ask_all, standard_error(batch_bid), standard_error(batch_ask)};
}

McQuote mc_quote(const OptionSpec& opt, const ModelParams& model, const JumpParams& jumps,
                 DriftConvention conv, const Distortion& d, const McConfig& cfg) {
    const auto terminal = sample_terminal(model, jumps, conv, cfg);
    return mc_quote_from_sample(opt, std::exp(-model.r * model.maturity), terminal, d,
                                cfg.n_batches);
}

}  // namespace conic
