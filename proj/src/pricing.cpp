#include "conic/pricing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "conic/errors.hpp"

namespace conic {

std::string_view to_string(OptionKind kind) { return kind == OptionKind::Call ? "call" : "put"; }

std::string_view to_string(PricingMethod method) {
    switch (method) {
        case PricingMethod::Quadrature: return "quadrature";
        case PricingMethod::Stieltjes: return "stieltjes";
        case PricingMethod::MonteCarlo: return "montecarlo";
    }
    return "unknown";
}

void OptionSpec::validate() const {
    if (!(strike > 0.0) || !std::isfinite(strike)) {
        throw DomainError("option: strike must be positive and finite");
    }
}

Quote Quote::from_bid_ask(double bid, double ask, double gamma, PricingMethod method) {
    Quote q;
    q.bid = bid;
    q.ask = ask;
    q.mid = 0.5 * (bid + ask);
    q.spread = ask - bid;
    q.gamma = gamma;
    q.method = method;
    return q;
}

namespace {

// e^{-rT} times the integral of g(S(x)) over [K, inf) for calls, or of g(F(x))
// over [0, K] for puts.
double distorted_tail_integral(const OptionSpec& opt, const TerminalLaw& law,
                               const Distortion& g, const Tolerance& tol) {
    opt.validate();
    tol.validate();
    g.validate();
    const double strike = opt.strike;
    const double disc = law.discount_factor();

    if (opt.kind == OptionKind::Put) {
        auto integrand = [&](double x) { return g.apply(law.cdf(x)); };
        return disc * integrate_adaptive(integrand, 0.0, strike, tol);
    }

    // Truncate where the distorted survival drops below a threshold small
    // enough that the neglected tail stays far below abs_tol. For the Wang
    // family the inverse of g is its dual.
    const double threshold =
        std::clamp(1e-4 * tol.abs_tol / (law.s0() * disc), 1e-300, 1e-3);
    const double s_star = g.dual().apply(threshold);
    if (!(s_star > 0.0)) {
        return 0.0;
    }
    const double upper = law.survival_quantile(s_star);
    if (upper <= strike) {
        return 0.0;
    }
    auto integrand = [&](double x) { return g.apply(law.survival(x)); };
    return disc * integrate_adaptive(integrand, strike, upper, tol);
}

}  // namespace

double bid(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
           const Tolerance& tol) {
    return distorted_tail_integral(opt, law, d.dual(), tol);
}

double ask(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
           const Tolerance& tol) {
    return distorted_tail_integral(opt, law, d, tol);
}

Quote quote(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
            const Tolerance& tol) {
    const double b = bid(opt, law, d, tol);
    const double a = ask(opt, law, d, tol);
    if (d.gamma() >= 0.0 && b > a + 2.0 * tol.abs_tol) {
        throw NonConvergence("quote: bid " + std::to_string(b) + " exceeds ask " +
                             std::to_string(a) + " beyond tolerance");
    }
    return Quote::from_bid_ask(b, a, d.gamma(), PricingMethod::Quadrature);
}

double closed_form_price(double s0, double strike, double r, double maturity,
                         double total_log_variance, OptionKind kind) {
    if (!(total_log_variance > 0.0)) {
        throw DomainError("closed_form_price: total log-variance must be positive");
    }
    if (!(s0 > 0.0) || !(strike > 0.0) || !(maturity > 0.0)) {
        throw DomainError("closed_form_price: s0, strike and maturity must be positive");
    }
    const double v = std::sqrt(total_log_variance);
    const double d1 = (std::log(s0 / strike) + r * maturity + 0.5 * total_log_variance) / v;
    const double d2 = d1 - v;
    const double pv_strike = strike * std::exp(-r * maturity);
    const double call = s0 * normal_cdf(d1) - pv_strike * normal_cdf(d2);
    if (kind == OptionKind::Call) {
        return call;
    }
    return call - s0 + pv_strike;
}

double series_price_gamma0(const OptionSpec& opt, const TerminalLaw& law) {
    opt.validate();
    const double strike = opt.strike;
    const double log_moneyness = std::log(law.s0() / strike);
    const auto& w = law.weights();
    const auto& m = law.log_means();
    const auto& s = law.log_sds();
    double sum = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
        const double forward = law.s0() * std::exp(m[n] + 0.5 * s[n] * s[n]);
        const double d2 = (log_moneyness + m[n]) / s[n];
        const double d1 = d2 + s[n];
        const double term = opt.kind == OptionKind::Call
                                ? forward * normal_cdf(d1) - strike * normal_cdf(d2)
                                : strike * normal_cdf(-d2) - forward * normal_cdf(-d1);
        sum += w[n] * term;
    }
    return law.discount_factor() * sum;
}

namespace {

struct GridPoint {
    double x;
    double cdf;
    double survival;
};

GridPoint point_at_score(const TerminalLaw& law, double z) {
    const double x = z <= 0.0 ? law.quantile(normal_cdf(z)) : law.survival_quantile(normal_cdf(-z));
    return {x, law.cdf(x), law.survival(x)};
}

GridPoint point_at_price(const TerminalLaw& law, double x) {
    return {x, law.cdf(x), law.survival(x)};
}

double normal_score(const GridPoint& p) {
    if (p.cdf <= 0.0) return -std::numeric_limits<double>::infinity();
    if (p.survival <= 0.0) return std::numeric_limits<double>::infinity();
    return p.cdf <= 0.5 ? normal_quantile(p.cdf) : -normal_quantile(p.survival);
}

// f(u1) - f(u0) given u and its complement c = 1 - u at both ends. Near 1
// the increment is formed from the dual, f(u) = 1 - fhat(1 - u), to avoid
// cancellation.
double increment(const Distortion& f, double u0, double c0, double u1, double c1) {
    if (std::min(u0, u1) >= 0.5) {
        const Distortion fhat = f.dual();
        return fhat.apply(c0) - fhat.apply(c1);
    }
    return f.apply(u1) - f.apply(u0);
}

}  // namespace

Quote stieltjes_reference(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
                          int n_grid) {
    opt.validate();
    d.validate();
    if (n_grid < 100) {
        throw DomainError("stieltjes_reference: n_grid must be at least 100");
    }
    constexpr double kEdge = 1e-10;
    const double z_lo = normal_quantile(kEdge);
    const double z_hi = -z_lo;
    const double strike = opt.strike;
    const double disc = law.discount_factor();
    const GridPoint at_strike = point_at_price(law, strike);
    const double z_strike = normal_score(at_strike);

    // Grid on [K, upper] for calls and [lower, K] for puts.
    std::vector<GridPoint> grid;
    grid.reserve(static_cast<std::size_t>(n_grid) + 1);
    if (opt.kind == OptionKind::Call) {
        if (z_strike >= z_hi) {
            return Quote::from_bid_ask(0.0, 0.0, d.gamma(), PricingMethod::Stieltjes);
        }
        const double z0 = std::max(z_lo, z_strike);
        grid.push_back(at_strike);
        for (int j = 1; j <= n_grid; ++j) {
            grid.push_back(point_at_score(law, z0 + (z_hi - z0) * j / n_grid));
        }
    } else {
        if (z_strike <= z_lo) {
            return Quote::from_bid_ask(0.0, 0.0, d.gamma(), PricingMethod::Stieltjes);
        }
        const double z1 = std::min(z_hi, z_strike);
        for (int j = 0; j < n_grid; ++j) {
            grid.push_back(point_at_score(law, z_lo + (z1 - z_lo) * j / n_grid));
        }
        grid.push_back(at_strike);
    }

    // Each price is e^{-rT} (int x d(.) - K int d(.)) with the measure as written:
    //   call bid   f(F)      call ask  -f(1 - F)
    //   put  bid  -f(1 - F)  put  ask   f(F)  (with the K and x roles swapped)
    double x_f = 0.0, k_f = 0.0;  // against d f(F)
    double x_s = 0.0, k_s = 0.0;  // against d f(1 - F)
    for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
        const GridPoint& a = grid[j];
        const GridPoint& b = grid[j + 1];
        const double mid = 0.5 * (a.x + b.x);
        const double df = increment(d, a.cdf, a.survival, b.cdf, b.survival);
        const double ds = increment(d, a.survival, a.cdf, b.survival, b.cdf);
        x_f += mid * df;
        k_f += df;
        x_s += mid * ds;
        k_s += ds;
    }

    double bid_price = 0.0;
    double ask_price = 0.0;
    if (opt.kind == OptionKind::Call) {
        bid_price = disc * x_f - disc * strike * k_f;
        ask_price = -disc * x_s + disc * strike * k_s;
    } else {
        bid_price = -disc * strike * k_s + disc * x_s;
        ask_price = disc * strike * k_f - disc * x_f;
    }
    return Quote::from_bid_ask(bid_price, ask_price, d.gamma(), PricingMethod::Stieltjes);
}

}  // namespace conic
