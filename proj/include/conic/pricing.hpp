#pragma once

#include <string_view>

#include "conic/distortion.hpp"
#include "conic/numerics.hpp"
#include "conic/terminal_law.hpp"

namespace conic {

enum class OptionKind { Call, Put };

std::string_view to_string(OptionKind kind);

struct OptionSpec {
    double strike = 100.0;
    OptionKind kind = OptionKind::Call;

    void validate() const;
};

enum class PricingMethod { Quadrature, Stieltjes, MonteCarlo };

std::string_view to_string(PricingMethod method);

struct Quote {
    double bid = 0.0;
    double ask = 0.0;
    double mid = 0.0;
    double spread = 0.0;
    double gamma = 0.0;
    PricingMethod method = PricingMethod::Quadrature;

    static Quote from_bid_ask(double bid, double ask, double gamma, PricingMethod method);
};

// The bid of a payoff X maturing at T is e^{-rT} E_f[X], the ask is
// -e^{-rT} E_f[-X]. Both are evaluated through survival integrals of the
// terminal law, which integration by parts turns into
//
//   call bid  e^{-rT} int_K^inf  fhat(S(x)) dx     call ask  e^{-rT} int_K^inf f(S(x)) dx
//   put  bid  e^{-rT} int_0^K    fhat(F(x)) dx     put  ask  e^{-rT} int_0^K   f(F(x)) dx
//
// with S = 1 - F and fhat the dual of f. The strike sits on an endpoint so
// the integrands are smooth on the open interval.

/// Bid price under distortion d. Throws InvalidDistortion, NonConvergence.
double bid(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
           const Tolerance& tol);

/// Ask price under distortion d; equal to the bid under dual(d).
double ask(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
           const Tolerance& tol);

/// Bid and ask together. Throws NonConvergence if the computed bid exceeds
/// the ask by more than the quadrature tolerance for a nonnegative stress.
Quote quote(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
            const Tolerance& tol);

/// Closed-form price when log(S_T / s0) is Gaussian with total variance
/// `total_log_variance` and risk-neutral drift:
///   C = s0 Phi(d1) - K e^{-rT} Phi(d2),  d1 = (ln(s0/K) + rT + v^2/2) / v,  d2 = d1 - v.
/// Puts follow from parity. Throws DomainError for v^2 <= 0.
double closed_form_price(double s0, double strike, double r, double maturity,
                         double total_log_variance, OptionKind kind);

/// Undistorted price as a Poisson-weighted sum of lognormal prices, one per
/// mixture component.
double series_price_gamma0(const OptionSpec& opt, const TerminalLaw& law);

/// Bid and ask from a direct midpoint discretization of the Stieltjes
/// integrals int (x - K) d f(F(x)) and their put / ask counterparts. Grid
/// points are quantiles of the law at equally spaced normal scores between
/// probabilities 1e-10 and 1 - 1e-10, clipped at the strike. Throws
/// DomainError for n_grid < 100.
Quote stieltjes_reference(const OptionSpec& opt, const TerminalLaw& law, const Distortion& d,
                          int n_grid);

}  // namespace conic
