#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "cqed/config.hpp"
#include "cqed/curve_fit.hpp"
#include "cqed/curve_io.hpp"
#include "cqed/errors.hpp"
#include "cqed/report.hpp"

using namespace cqed;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cqed_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

}  // namespace

TEST_CASE("minimal config gets the documented defaults") {
    const ExperimentConfig cfg = parse_config(R"({"system": {"kappa_ghz": 5.22}})");
    CHECK(cfg.drive.t0_s == doctest::Approx(170e-9));
    CHECK(cfg.drive.repetition_period_s == doctest::Approx(8e-6));
    CHECK(cfg.drive.pulse_width_s == doctest::Approx(900e-9));
    CHECK(cfg.system.kappa_hz == doctest::Approx(5.22e9));
    CHECK(cfg.drive.omega_l_hz == doctest::Approx(cfg.system.omega_a_hz));
    CHECK(cfg.simulation.fock_levels == 5);
    CHECK(cfg.fit.sim.fock_levels == 3);
}

TEST_CASE("unit suffixes scale into base units") {
    const ExperimentConfig cfg = parse_config(
        R"({"system": {"g_mhz": 42.4}, "drive": {"t0_ns": 170, "p_in_nw": 17}})");
    CHECK(cfg.system.g_hz == doctest::Approx(42.4e6));
    CHECK(cfg.drive.t0_s == doctest::Approx(170e-9));
    CHECK(cfg.drive.p_in_w == doctest::Approx(17e-9));
}

TEST_CASE("validation failures") {
    CHECK_THROWS_AS(parse_config(R"({"system": {"kappa_ghz": -5.0}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"system": {"eta_cav": 0.9}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"system": {"g": 42.4e6}})"), ConfigError);  // no unit
    CHECK_THROWS_AS(parse_config(R"({"system": {"g_parsec": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"system": {"g_hz": 42e6, "g_mhz": 42}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"system": {"banana": 1}})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"volcano": {}})"), ConfigError);

    // lax mode downgrades unknown keys to warnings
    std::vector<std::string> warnings;
    const ExperimentConfig cfg =
        parse_config(R"({"system": {"banana": 1}})", /*strict=*/false, &warnings);
    CHECK(cfg.system.g_hz == doctest::Approx(42.4e6));
    REQUIRE(warnings.size() >= 1);
    CHECK(warnings[0].find("banana") != std::string::npos);
}

TEST_CASE("parse errors carry line and column") {
    try {
        parse_config("{\n  \"system\": {,}\n}");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
}

TEST_CASE("config round trip is identity") {
    TempDir tmp;
    const ExperimentConfig cfg = parse_config(
        R"({"system": {"g_mhz": 37.5, "delta_ac_ghz": 4.2}, "fit": {"hops": 7}})");
    save_config(cfg, tmp.file("a.json"));
    const ExperimentConfig re = load_config(tmp.file("a.json"));
    save_config(re, tmp.file("b.json"));
    CHECK(config_to_json(cfg) == config_to_json(re));
    CHECK(slurp(tmp.file("a.json")) == slurp(tmp.file("b.json")));
    CHECK(config_hash(cfg) == config_hash(re));
}

TEST_CASE("overrides touch exactly the named key") {
    const ExperimentConfig cfg = parse_config("{}");
    const ExperimentConfig over = apply_overrides(cfg, {"system.g_hz=5e7"});
    CHECK(over.system.g_hz == doctest::Approx(5e7));

    // everything else byte-identical
    std::string a = config_to_json(cfg);
    std::string b = config_to_json(over);
    std::istringstream sa(a), sb(b);
    std::string la, lb;
    int differing = 0;
    while (std::getline(sa, la) && std::getline(sb, lb)) {
        if (la != lb) ++differing;
    }
    CHECK(differing == 1);

    CHECK(config_hash(cfg) != config_hash(over));
    CHECK_THROWS_AS(apply_overrides(cfg, {"system.nonsense=1"}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(cfg, {"system.g_hz"}), ConfigError);
}

TEST_CASE("curve round trip is lossless at full precision") {
    TempDir tmp;
    SimCurve c;
    c.x = {1.0 / 3.0, 2.0 / 3.0, 1.0 + 1e-15};
    c.y = {0.1234567890123456, 7.0, -2.5e-300};
    c.sigma = {1e-3, 2e-3, 3e-3};
    c.meta = {{"x_label", "time"}, {"x_unit", "s"}, {"y_label", "rate"},
              {"y_unit", "counts/s"}, {"run", "demo"}};
    write_curve(c, tmp.file("c.csv"));
    const SimCurve r = read_curve(tmp.file("c.csv"));
    REQUIRE(r.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(r.x[i] == c.x[i]);
        CHECK(r.y[i] == c.y[i]);
        CHECK(r.sigma[i] == c.sigma[i]);
    }
    CHECK(r.meta.at("run") == "demo");
    CHECK(r.meta.at("x_unit") == "s");

    // writing twice gives byte-identical files
    write_curve(r, tmp.file("c2.csv"));
    CHECK(slurp(tmp.file("c.csv")) == slurp(tmp.file("c2.csv")));
}

TEST_CASE("curve reader rejects malformed files") {
    TempDir tmp;
    spit(tmp.file("nan.csv"), "x,y\n1,2\n3,nan\n");
    CHECK_THROWS_WITH_AS(read_curve(tmp.file("nan.csv")),
                         doctest::Contains("row 3"), ConfigError);

    spit(tmp.file("ragged.csv"), "x,y\n1,2\n3\n");
    CHECK_THROWS_WITH_AS(read_curve(tmp.file("ragged.csv")),
                         doctest::Contains("ragged"), ConfigError);

    spit(tmp.file("word.csv"), "x,y\n1,2\n3,apple\n");
    CHECK_THROWS_AS(read_curve(tmp.file("word.csv")), ConfigError);

    spit(tmp.file("nonmono.csv"), "x,y\n2,1\n1,2\n");
    std::vector<std::string> warnings;
    const SimCurve c = read_curve(tmp.file("nonmono.csv"), &warnings);
    CHECK(c.size() == 2);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("non-monotone") != std::string::npos);
}

TEST_CASE("re-reading a decay trace reproduces the fitted rate exactly") {
    TempDir tmp;
    SimCurve trace;
    const double tau = 136.4e-9;
    for (int i = 0; i <= 200; ++i) {
        const double t = 1.5e-6 * i / 200.0;
        trace.x.push_back(t);
        trace.y.push_back(0.02 * std::exp(-t / tau));
    }
    const ExponentialFit first = fit_exponential(trace, false);
    write_curve(trace, tmp.file("trace.csv"));
    const SimCurve back = read_curve(tmp.file("trace.csv"));
    const ExponentialFit second = fit_exponential(back, false);
    CHECK(std::abs(second.rate - first.rate) <= 1e-12 * first.rate);
}

TEST_CASE("fit report") {
    TempDir tmp;
    FitResult fit;
    fit.params = {42.4e6, 0.645e9, 1.69e9, 1e-4};
    fit.uncertainties = {0.3e6, 0.01e9, 0.02e9, 1e-5};
    fit.cost = 0.0123;
    fit.n_eval = 321;
    fit.converged = true;
    fit.residual_norms = {{"saturation", 0.05}, {"linewidth", 0.07}, {"decay", 0.06}};

    ReportContext ctx;
    ctx.config_hash = "deadbeef";
    ctx.seed = 12345;
    ctx.param_names = {"g_hz", "gamma_d_hz", "gamma_sd_hz", "background"};
    write_fit_report(fit, ctx, tmp.file("report.json"));

    const std::string text = slurp(tmp.file("report.json"));
    CHECK(text.find("\"g_hz\": 42400000.0") != std::string::npos);
    CHECK(text.find("\"seed\": 12345") != std::string::npos);
    CHECK(text.find("deadbeef") != std::string::npos);
    CHECK(text.find("generated_at") != std::string::npos);

    FitResult empty;
    CHECK_THROWS_AS(write_fit_report(empty, ctx, tmp.file("no.json")), NumericError);
}
