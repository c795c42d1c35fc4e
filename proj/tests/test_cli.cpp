#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "conic/cli.hpp"

using namespace conic;
using namespace conic::cli;
namespace fs = std::filesystem;

namespace {

const char* kMinimal = R"({"s0": 100, "r": 0.05, "sigma": 0.2, "epsilon": 0.1, "hurst": 0.8,
                           "maturity": 1, "strike": 100, "kind": "call"})";

const char* kPstar = R"({"s0": 100, "r": 0.05, "sigma": 0.2, "epsilon": 0.1, "hurst": 0.8,
                         "maturity": 1, "lambda": 1, "mu1": -0.05, "sigma1_sq": 0.02,
                         "strike": 100, "kind": "call", "gamma": 0.0})";

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("conic_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path write(const std::string& name, const std::string& text) const {
        std::ofstream(path / name) << text;
        return path / name;
    }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run invoke(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) parts.push_back(item);
    return parts;
}

}  // namespace

TEST_CASE("parse_config: defaults for optional fields") {
    const RunConfig cfg = parse_config_text(kMinimal);
    CHECK(cfg.drift == DriftConvention::Compensated);
    CHECK(cfg.tail_tol == 1e-12);
    CHECK(cfg.quad_tol == 1e-8);
    CHECK(cfg.gamma == 0.0);
    CHECK(cfg.jumps.lambda == 0.0);
    CHECK(cfg.option.kind == OptionKind::Call);
    CHECK(cfg.model.hurst == 0.8);
}

TEST_CASE("parse_config: validation and normalization") {
    auto with = [](const std::string& key, const std::string& value) {
        auto doc = nlohmann::json::parse(kMinimal);
        doc[key] = nlohmann::json::parse(value);
        return doc.dump();
    };
    try {
        parse_config_text(with("hurst", "0.5"));
        FAIL("expected the Hurst gate to reject 0.5");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("(0.75, 1]") != std::string::npos);
        CHECK(std::string(e.what()).find("hurst") != std::string::npos);
    }
    CHECK(parse_config_text(with("kind", "\"CALL\"")).option.kind == OptionKind::Call);
    CHECK(parse_config_text(with("kind", "\"Put\"")).option.kind == OptionKind::Put);
    CHECK(parse_config_text(with("drift", "\"Uncompensated\"")).drift == DriftConvention::Uncompensated);
    CHECK_THROWS_WITH_AS(parse_config_text(with("volatility", "0.2")), doctest::Contains("$.volatility"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(with("sigma", "\"0.2\"")), doctest::Contains("$.sigma"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(with("kind", "\"straddle\"")), doctest::Contains("$.kind"), ConfigError);
    CHECK_THROWS_WITH_AS(parse_config_text(with("s0", "-5")), doctest::Contains("$.s0"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{\"s0\": 100}"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
    CHECK_THROWS_AS(parse_config("/nonexistent/conic.json"), ConfigError);
    // Out-of-range stress is accepted with a warning.
    const RunConfig neg = parse_config_text(with("gamma", "-0.1"));
    const auto warnings = validate_run_config(neg);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0] == "warn: gamma outside [0,1]");
}

TEST_CASE("parse_vary: grid arithmetic") {
    CHECK(parse_vary("gamma=0:0.5:0.05").values.size() == 11);
    CHECK(parse_vary("strike=80:120:20").values == std::vector<double>{80, 100, 120});
    CHECK(parse_vary("hurst=0.8:0.8:0.1").values.size() == 1);
    CHECK_THROWS_AS(parse_vary("gamma"), ConfigError);
    CHECK_THROWS_AS(parse_vary("gamma=0:1"), ConfigError);
    CHECK_THROWS_AS(parse_vary("gamma=0:1:0"), ConfigError);
    CHECK_THROWS_AS(parse_vary("gamma=1:0:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_vary("gamma=0:x:0.1"), ConfigError);
    CHECK_THROWS_AS(parse_vary("color=0:1:0.1"), ConfigError);
}

TEST_CASE("write_csv: header-only for an empty sweep, ten-digit rows") {
    TempDir dir;
    write_csv({}, dir.path / "empty.csv");
    CHECK(slurp(dir.path / "empty.csv") == std::string(kCsvHeader) + "\n");

    QuoteRow row{parse_config_text(kPstar), Quote::from_bid_ask(12.3456789012345, 13.0 / 7.0, 0.25,
                                                                 PricingMethod::Quadrature)};
    write_csv(std::vector<QuoteRow>{row}, dir.path / "one.csv");
    const auto lines = split(slurp(dir.path / "one.csv"), '\n');
    REQUIRE(lines.size() == 2);
    const auto header = split(lines[0], ',');
    const auto fields = split(lines[1], ',');
    REQUIRE(header.size() == fields.size());
    CHECK(fields[11] == "compensated");
    CHECK(fields[12] == "call");
    CHECK(fields[13] == "12.3456789");
    CHECK(std::stod(fields[14]) == std::stod(format_real(13.0 / 7.0)));
    CHECK(std::abs(std::stod(fields[14]) - 13.0 / 7.0) <= 1e-9);
    CHECK(slurp(dir.path / "one.csv").find('\r') == std::string::npos);

    CHECK_THROWS_AS(write_csv({}, dir.path / "missing" / "x.csv"), ConfigError);
}

TEST_CASE("run price: single-line JSON quote") {
    TempDir dir;
    const auto cfg = dir.write("cfg.json", kPstar);
    const Run r = invoke({"price", "--config", cfg.string(), "--gamma", "0.25"});
    CHECK(r.code == 0);
    CHECK(r.err.empty());
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 1);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc.size() == split(kCsvHeader, ',').size());
    CHECK(doc["gamma"] == 0.25);
    CHECK(doc["kind"] == "call");
    CHECK(std::abs(doc["bid"].get<double>() - 9.232545950254965) <= 1e-7);
    CHECK(std::abs(doc["ask"].get<double>() - 17.4690901611852) <= 1e-7);

    const Run strike = invoke({"price", "--config", cfg.string(), "--strike", "120"});
    CHECK(nlohmann::json::parse(strike.out)["strike"] == 120);

    const Run stieltjes = invoke({"price", "--config", cfg.string(), "--gamma", "0.25", "--method", "stieltjes"});
    CHECK(stieltjes.code == 0);
    CHECK(std::abs(nlohmann::json::parse(stieltjes.out)["bid"].get<double>() - 9.232545950254965) <= 1e-2);
}

TEST_CASE("run price: warnings and error exits") {
    TempDir dir;
    const auto cfg = dir.write("cfg.json", kPstar);
    const Run neg = invoke({"price", "--config", cfg.string(), "--gamma", "-0.1"});
    CHECK(neg.code == 0);
    CHECK(neg.err.find("warn: gamma outside [0,1]") != std::string::npos);

    auto bad = nlohmann::json::parse(kPstar);
    bad["hurst"] = 0.5;
    const auto bad_cfg = dir.write("bad.json", bad.dump());
    const Run hurst = invoke({"price", "--config", bad_cfg.string()});
    CHECK(hurst.code == kExitInvalidInput);
    CHECK(hurst.err.rfind("error:", 0) == 0);

    CHECK(invoke({"price", "--config", (dir.path / "nope.json").string()}).code == kExitInvalidInput);
    CHECK(invoke({"price"}).code == kExitInvalidInput);
    CHECK(invoke({"frobnicate"}).code == kExitInvalidInput);
    CHECK(invoke({"price", "--config", cfg.string(), "--method", "fft"}).code == kExitInvalidInput);

    // A tolerance the quadrature cannot reach is a numerical failure.
    auto tight = nlohmann::json::parse(kPstar);
    tight["quad_tol"] = 1e-300;
    const auto tight_cfg = dir.write("tight.json", tight.dump());
    const Run nc = invoke({"price", "--config", tight_cfg.string()});
    CHECK(nc.code == kExitNumerical);
    CHECK(nc.err.rfind("error:", 0) == 0);
}

TEST_CASE("run sweep: grid size, ordering, monotone spread, determinism") {
    TempDir dir;
    const auto cfg = dir.write("cfg.json", kPstar);
    const auto out1 = dir.path / "q1.csv";
    const auto out2 = dir.path / "q2.csv";
    const Run r = invoke({"sweep", "--config", cfg.string(), "--vary", "gamma=0:0.5:0.05", "--out", out1.string()});
    REQUIRE(r.code == 0);
    const auto lines = split(slurp(out1), '\n');
    REQUIRE(lines.size() == 12);
    CHECK(lines[0] == kCsvHeader);
    double prev = -1.0;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto f = split(lines[i], ',');
        CHECK(std::stod(f[0]) == doctest::Approx(0.05 * static_cast<double>(i - 1)));
        const double spread = std::stod(f[16]);
        CHECK(spread >= prev);
        prev = spread;
    }
    REQUIRE(invoke({"sweep", "--config", cfg.string(), "--vary", "gamma=0:0.5:0.05", "--out", out2.string()}).code == 0);
    CHECK(slurp(out1) == slurp(out2));

    // Cartesian product, first axis outermost.
    const Run grid = invoke({"sweep", "--config", cfg.string(), "--vary", "strike=90:110:10", "--vary", "gamma=0:0.2:0.1"});
    REQUIRE(grid.code == 0);
    const auto rows = split(grid.out, '\n');
    REQUIRE(rows.size() == 10);
    CHECK(split(rows[1], ',')[8] == "90");
    CHECK(split(rows[3], ',')[8] == "90");
    CHECK(split(rows[4], ',')[8] == "100");
    CHECK(split(rows[2], ',')[0] == "0.1");

    // A grid point outside the Hurst gate rejects the whole sweep.
    CHECK(invoke({"sweep", "--config", cfg.string(), "--vary", "hurst=0.5:0.9:0.1"}).code == kExitInvalidInput);
    CHECK(invoke({"sweep", "--config", cfg.string(), "--vary", "colour=0:1:1"}).code == kExitInvalidInput);
}

TEST_CASE("run check: quadrature against Monte Carlo") {
    TempDir dir;
    const auto cfg = dir.write("cfg.json", kPstar);
    const Run r = invoke({"check", "--config", cfg.string(), "--gamma", "0.25", "--samples", "200000", "--seed", "42"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["bid_within_3se"] == true);
    CHECK(doc["ask_within_3se"] == true);
    CHECK(doc.contains("se_bid"));
    CHECK(doc.contains("mc_ask"));
    CHECK(doc["seed"] == 42);
}
