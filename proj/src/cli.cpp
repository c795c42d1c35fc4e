#include "conic/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "conic/errors.hpp"
#include "conic/mc_oracle.hpp"
#include "parallel.hpp"

namespace conic::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "s0",    "r",    "sigma",  "epsilon", "hurst",    "maturity", "lambda",  "mu1",
        "sigma1_sq", "strike", "kind", "gamma", "drift", "tail_tol", "quad_tol"};
    return keys;
}

std::string lowercase(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

double number_field(const json& doc, const std::string& key, std::optional<double> fallback) {
    if (!doc.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("$." + key + ": required field missing");
    }
    const json& v = doc.at(key);
    if (!v.is_number()) throw ConfigError("$." + key + ": expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("$." + key + ": must be finite");
    return x;
}

std::string string_field(const json& doc, const std::string& key,
                         std::optional<std::string> fallback) {
    if (!doc.contains(key)) {
        if (fallback) return *fallback;
        throw ConfigError("$." + key + ": required field missing");
    }
    const json& v = doc.at(key);
    if (!v.is_string()) throw ConfigError("$." + key + ": expected a string");
    return lowercase(v.get<std::string>());
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("$: malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("$: config must be a JSON object");
    for (const auto& item : doc.items()) {
        if (!known_keys().contains(item.key())) {
            throw ConfigError("$." + item.key() + ": unknown field");
        }
    }

    RunConfig cfg;
    cfg.model.s0 = number_field(doc, "s0", std::nullopt);
    cfg.model.r = number_field(doc, "r", std::nullopt);
    cfg.model.sigma = number_field(doc, "sigma", std::nullopt);
    cfg.model.epsilon = number_field(doc, "epsilon", std::nullopt);
    cfg.model.hurst = number_field(doc, "hurst", std::nullopt);
    cfg.model.maturity = number_field(doc, "maturity", std::nullopt);
    cfg.jumps.lambda = number_field(doc, "lambda", 0.0);
    cfg.jumps.mu1 = number_field(doc, "mu1", 0.0);
    cfg.jumps.sigma1_sq = number_field(doc, "sigma1_sq", 0.0);
    cfg.option.strike = number_field(doc, "strike", std::nullopt);
    cfg.gamma = number_field(doc, "gamma", 0.0);
    cfg.tail_tol = number_field(doc, "tail_tol", 1e-12);
    cfg.quad_tol = number_field(doc, "quad_tol", 1e-8);

    const std::string kind = string_field(doc, "kind", std::nullopt);
    if (kind == "call") {
        cfg.option.kind = OptionKind::Call;
    } else if (kind == "put") {
        cfg.option.kind = OptionKind::Put;
    } else {
        throw ConfigError("$.kind: expected \"call\" or \"put\", got \"" + kind + "\"");
    }
    const std::string drift = string_field(doc, "drift", std::string("compensated"));
    if (drift == "compensated") {
        cfg.drift = DriftConvention::Compensated;
    } else if (drift == "uncompensated") {
        cfg.drift = DriftConvention::Uncompensated;
    } else {
        throw ConfigError("$.drift: expected \"compensated\" or \"uncompensated\", got \"" +
                          drift + "\"");
    }

    validate_run_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

std::vector<std::string> validate_run_config(const RunConfig& cfg) {
    const auto& m = cfg.model;
    if (!(m.hurst > 0.75 && m.hurst <= 1.0)) {
        throw ConfigError("$.hurst: " + format_real(m.hurst) +
                          " outside the arbitrage-free range (0.75, 1]");
    }
    if (!(m.s0 > 0.0)) throw ConfigError("$.s0: must be positive");
    if (!(m.maturity > 0.0)) throw ConfigError("$.maturity: must be positive");
    if (m.sigma < 0.0) throw ConfigError("$.sigma: must be non-negative");
    if (m.epsilon < 0.0) throw ConfigError("$.epsilon: must be non-negative");
    if (m.sigma == 0.0 && m.epsilon == 0.0) {
        throw ConfigError("$.sigma, $.epsilon: must not both be zero");
    }
    if (cfg.jumps.lambda < 0.0) throw ConfigError("$.lambda: must be non-negative");
    if (cfg.jumps.sigma1_sq < 0.0) throw ConfigError("$.sigma1_sq: must be non-negative");
    if (!(cfg.option.strike > 0.0)) throw ConfigError("$.strike: must be positive");
    if (!(cfg.tail_tol > 0.0 && cfg.tail_tol < 1.0)) {
        throw ConfigError("$.tail_tol: must lie in (0, 1)");
    }
    if (!(cfg.quad_tol > 0.0)) throw ConfigError("$.quad_tol: must be positive");
    if (!std::isfinite(cfg.gamma)) throw ConfigError("$.gamma: must be finite");

    std::vector<std::string> warnings;
    if (cfg.gamma < 0.0 || cfg.gamma > 1.0) {
        warnings.emplace_back("warn: gamma outside [0,1]");
    }
    return warnings;
}

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

namespace {

std::vector<std::string> row_fields(const QuoteRow& row) {
    const RunConfig& c = row.config;
    return {format_real(row.quote.gamma), format_real(c.model.hurst),
            format_real(c.model.sigma),   format_real(c.model.epsilon),
            format_real(c.jumps.lambda),  format_real(c.jumps.mu1),
            format_real(c.jumps.sigma1_sq), format_real(c.model.s0),
            format_real(c.option.strike), format_real(c.model.r),
            format_real(c.model.maturity), std::string(to_string(c.drift)),
            std::string(to_string(c.option.kind)), format_real(row.quote.bid),
            format_real(row.quote.ask),   format_real(row.quote.mid),
            format_real(row.quote.spread)};
}

std::vector<std::string> header_fields() {
    std::vector<std::string> out;
    std::stringstream ss(kCsvHeader);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

}  // namespace

std::string format_csv(std::span<const QuoteRow> rows) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const auto& row : rows) {
        const auto fields = row_fields(row);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) out += ',';
            out += fields[i];
        }
        out += '\n';
    }
    return out;
}

void write_csv(std::span<const QuoteRow> rows, const std::filesystem::path& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot open output file " + path.string());
    file << format_csv(rows);
    file.flush();
    if (!file) throw ConfigError("failed writing output file " + path.string());
}

std::string quote_json(const QuoteRow& row) {
    const auto names = header_fields();
    const auto fields = row_fields(row);
    ordered_json obj = ordered_json::object();
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (names[i] == "drift" || names[i] == "kind") {
            obj[names[i]] = fields[i];
        } else {
            // Round through the 10-digit text so JSON and CSV agree.
            obj[names[i]] = std::stod(fields[i]);
        }
    }
    return obj.dump();
}

SweepAxis parse_vary(const std::string& arg) {
    const auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ConfigError("--vary: expected NAME=LO:HI:STEP, got \"" + arg + "\"");
    }
    SweepAxis axis;
    axis.name = arg.substr(0, eq);
    std::stringstream ss(arg.substr(eq + 1));
    std::vector<double> parts;
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ConfigError("--vary " + axis.name + ": \"" + item + "\" is not a number");
        }
    }
    if (parts.size() != 3) {
        throw ConfigError("--vary " + axis.name + ": expected LO:HI:STEP");
    }
    const double lo = parts[0], hi = parts[1], step = parts[2];
    if (!(step > 0.0) || !(hi >= lo) || !std::isfinite(hi) || !std::isfinite(lo)) {
        throw ConfigError("--vary " + axis.name + ": need STEP > 0 and HI >= LO");
    }
    // Tolerate rounding in (hi - lo) / step so that 0:0.5:0.05 has 11 points.
    const auto count = static_cast<long>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1'000'000) throw ConfigError("--vary " + axis.name + ": too many points");
    for (long i = 0; i < count; ++i) {
        axis.values.push_back(lo + static_cast<double>(i) * step);
    }
    RunConfig probe;
    set_parameter(probe, axis.name, lo);
    return axis;
}

void set_parameter(RunConfig& cfg, const std::string& name, double value) {
    if (name == "gamma") cfg.gamma = value;
    else if (name == "hurst") cfg.model.hurst = value;
    else if (name == "sigma") cfg.model.sigma = value;
    else if (name == "epsilon") cfg.model.epsilon = value;
    else if (name == "lambda") cfg.jumps.lambda = value;
    else if (name == "mu1") cfg.jumps.mu1 = value;
    else if (name == "sigma1_sq") cfg.jumps.sigma1_sq = value;
    else if (name == "s0") cfg.model.s0 = value;
    else if (name == "strike") cfg.option.strike = value;
    else if (name == "r") cfg.model.r = value;
    else if (name == "maturity") cfg.model.maturity = value;
    else throw ConfigError("unknown sweep parameter \"" + name + "\"");
}

namespace {

constexpr int kStieltjesGrid = 100'000;

TerminalLaw law_for(const RunConfig& cfg) {
    return TerminalLaw::build(cfg.model, cfg.jumps, cfg.drift, cfg.tail_tol);
}

}  // namespace

Quote evaluate(const RunConfig& cfg, Method method) {
    validate_run_config(cfg);
    const TerminalLaw law = law_for(cfg);
    const Distortion d = Distortion::wang(cfg.gamma);
    if (method == Method::Stieltjes) {
        return stieltjes_reference(cfg.option, law, d, kStieltjesGrid);
    }
    return quote(cfg.option, law, d, Tolerance{cfg.quad_tol, 2000});
}

std::vector<QuoteRow> run_sweep(const RunConfig& base, std::span<const SweepAxis> axes,
                                Method method) {
    std::size_t total = 1;
    for (const auto& axis : axes) total *= axis.values.size();
    if (axes.empty()) total = 1;

    std::vector<QuoteRow> rows(total);
    for (std::size_t i = 0; i < total; ++i) {
        RunConfig cfg = base;
        // Mixed-radix decode, last axis fastest.
        std::size_t rem = i;
        for (std::size_t a = axes.size(); a-- > 0;) {
            const auto& values = axes[a].values;
            set_parameter(cfg, axes[a].name, values[rem % values.size()]);
            rem /= values.size();
        }
        rows[i].config = cfg;
    }
    detail::parallel_for(total, [&](std::size_t i) {
        rows[i].quote = evaluate(rows[i].config, method);
    });
    return rows;
}

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<double> gamma;
    std::optional<double> strike;
    std::string method = "quadrature";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file")->required();
    cmd->add_option("--gamma", flags.gamma, "Wang stress level (overrides config)");
    cmd->add_option("--strike", flags.strike, "Strike (overrides config)");
    cmd->add_option("--method", flags.method, "quadrature | stieltjes")
        ->check(CLI::IsMember({"quadrature", "stieltjes"}));
}

RunConfig load(const CommonFlags& flags) {
    RunConfig cfg = parse_config(flags.config_path);
    if (flags.gamma) cfg.gamma = *flags.gamma;
    if (flags.strike) cfg.option.strike = *flags.strike;
    return cfg;
}

Method method_of(const CommonFlags& flags) {
    return flags.method == "stieltjes" ? Method::Stieltjes : Method::Quadrature;
}

void emit_warnings(const std::vector<std::string>& warnings, std::ostream& err) {
    for (const auto& w : warnings) err << w << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Conic bid/ask option pricer for mixed fractional Brownian motion with jumps"};
    app.name("conic_quote");
    app.require_subcommand(1);

    CommonFlags price_flags;
    auto* price_cmd = app.add_subcommand("price", "Quote one option, JSON on stdout");
    add_common(price_cmd, price_flags);

    CommonFlags sweep_flags;
    std::vector<std::string> vary;
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Quote a cartesian parameter grid as CSV");
    add_common(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--vary", vary, "NAME=LO:HI:STEP (repeatable)");
    sweep_cmd->add_option("--out", sweep_out, "CSV output path (default stdout)");

    CommonFlags check_flags;
    std::int64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    auto* check_cmd =
        app.add_subcommand("check", "Compare the quadrature quote against Monte Carlo");
    add_common(check_cmd, check_flags);
    check_cmd->add_option("--samples", samples, "Monte Carlo sample count");
    check_cmd->add_option("--seed", seed, "Monte Carlo seed");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    try {
        if (*price_cmd) {
            const RunConfig cfg = load(price_flags);
            emit_warnings(validate_run_config(cfg), err);
            const Quote q = evaluate(cfg, method_of(price_flags));
            out << quote_json({cfg, q}) << '\n';
            return kExitOk;
        }
        if (*sweep_cmd) {
            const RunConfig base = load(sweep_flags);
            std::vector<SweepAxis> axes;
            for (const auto& v : vary) axes.push_back(parse_vary(v));
            const auto rows = run_sweep(base, axes, method_of(sweep_flags));
            bool warned = false;
            for (const auto& row : rows) {
                if (!warned && !validate_run_config(row.config).empty()) {
                    emit_warnings(validate_run_config(row.config), err);
                    warned = true;
                }
            }
            if (sweep_out.empty()) {
                out << format_csv(rows);
            } else {
                write_csv(rows, sweep_out);
            }
            return kExitOk;
        }
        if (*check_cmd) {
            RunConfig cfg = load(check_flags);
            emit_warnings(validate_run_config(cfg), err);
            const Quote q = evaluate(cfg, method_of(check_flags));
            const McConfig mc{samples, seed, 20};
            const McQuote m = mc_quote(cfg.option, cfg.model, cfg.jumps, cfg.drift,
                                       Distortion::wang(cfg.gamma), mc);
            const bool bid_ok = std::abs(q.bid - m.bid) <= 3.0 * m.se_bid;
            const bool ask_ok = std::abs(q.ask - m.ask) <= 3.0 * m.se_ask;
            ordered_json report = {
                {"method", std::string(to_string(q.method))},
                {"gamma", cfg.gamma},
                {"bid", q.bid},
                {"ask", q.ask},
                {"mc_bid", m.bid},
                {"mc_ask", m.ask},
                {"se_bid", m.se_bid},
                {"se_ask", m.se_ask},
                {"samples", samples},
                {"seed", seed},
                {"bid_within_3se", bid_ok},
                {"ask_within_3se", ask_ok},
            };
            out << report.dump() << '\n';
            return bid_ok && ask_ok ? kExitOk : kExitCheckFailed;
        }
    } catch (const NonConvergence& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }
    return kExitInvalidInput;
}

int run(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

}  // namespace conic::cli
