#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "conic/pricing.hpp"
#include "conic/terminal_law.hpp"

namespace conic::cli {

// Invalid input or environment: bad config, bad flag, unwritable output.
// Mapped to exit code 1.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitCheckFailed = 3;

struct RunConfig {
    ModelParams model;
    JumpParams jumps;
    OptionSpec option;
    double gamma = 0.0;
    DriftConvention drift = DriftConvention::Compensated;
    double tail_tol = 1e-12;
    double quad_tol = 1e-8;
};

/// Parses a JSON config document. Required keys: s0, r, sigma, epsilon,
/// hurst, maturity, strike, kind. Optional keys and defaults: lambda, mu1,
/// sigma1_sq (0), gamma (0), drift ("compensated"), tail_tol (1e-12),
/// quad_tol (1e-8). Unknown keys, wrong types and invalid values raise
/// ConfigError naming the offending field. The result is validated.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config(const std::filesystem::path& path);

/// Throws ConfigError if any parameter invariant fails, including the Hurst
/// gate (0.75, 1]. Returns warnings (gamma outside [0, 1]) as
/// `warn: ...` lines.
std::vector<std::string> validate_run_config(const RunConfig& cfg);

struct QuoteRow {
    RunConfig config;
    Quote quote;
};

inline constexpr const char* kCsvHeader =
    "gamma,hurst,sigma,epsilon,lambda,mu1,sigma1_sq,s0,strike,r,maturity,drift,kind,bid,ask,mid,"
    "spread";

/// Ten significant digits, '.' separator.
std::string format_real(double v);

std::string format_csv(std::span<const QuoteRow> rows);
/// Writes format_csv(rows); I/O failures raise ConfigError.
void write_csv(std::span<const QuoteRow> rows, const std::filesystem::path& path);

/// Single-line JSON object whose keys are the CSV columns.
std::string quote_json(const QuoteRow& row);

/// One axis of a sweep: NAME=LO:HI:STEP.
struct SweepAxis {
    std::string name;
    std::vector<double> values;
};

SweepAxis parse_vary(const std::string& arg);

/// Sets a named numeric parameter (gamma, hurst, sigma, epsilon, lambda, mu1,
/// sigma1_sq, s0, strike, r, maturity). Throws ConfigError for other names.
void set_parameter(RunConfig& cfg, const std::string& name, double value);

enum class Method { Quadrature, Stieltjes };

/// Quote for one configuration point.
Quote evaluate(const RunConfig& cfg, Method method);

/// Cartesian product of the axes (first axis outermost), evaluated
/// concurrently and returned in grid order.
std::vector<QuoteRow> run_sweep(const RunConfig& base, std::span<const SweepAxis> axes,
                                Method method);

/// Command-line entry point; subcommands price, sweep and check.
/// Returns 0 on success, 1 on invalid input, 2 on numerical
/// non-convergence, 3 when `check` finds a disagreement.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace conic::cli
