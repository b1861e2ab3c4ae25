#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "nmzi/runner.hpp"

using namespace nmzi;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

RunConfig quick_config() {
    RunConfig cfg;
    cfg.duration = 8.0;  // short but still resolvable
    return cfg;
}

}  // namespace

TEST_CASE("complex literal parsing") {
    CHECK(parse_complex("1.5") == cplx{1.5, 0.0});
    CHECK(parse_complex("-2i") == cplx{0.0, -2.0});
    CHECK(parse_complex("i") == cplx{0.0, 1.0});
    CHECK(parse_complex("1+2i") == cplx{1.0, 2.0});
    CHECK(parse_complex("1e-2-3.5i") == cplx{0.01, -3.5});
    CHECK(parse_complex("(0.5, -0.25)") == cplx{0.5, -0.25});
    CHECK_THROWS_AS(parse_complex("1+2"), ConfigError);
    CHECK_THROWS_AS(parse_complex("abc"), ConfigError);
    CHECK_THROWS_AS(parse_complex(""), ConfigError);
}

TEST_CASE("the documented default config parses back to the defaults") {
    std::istringstream in(default_config_text());
    const RunConfig cfg = parse_config(in);
    CHECK(cfg.setup == 1);
    CHECK(cfg.alpha == cplx{1.0, 0.0});
    CHECK(cfg.rate == 1024.0);
    CHECK(cfg.duration == 1024.0);
    CHECK(cfg.seed == 1);
    CHECK(cfg.network.mirror('A').freq_hz == 31.0);
    CHECK(cfg.network.mirror('F').freq_hz == 47.0);
    CHECK(cfg.network.mirror('C').psi0 == 0.02);
    CHECK_FALSE(cfg.network.lambda.has_value());
}

TEST_CASE("config parser diagnostics") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return parse_config(in);
    };
    CHECK_THROWS_AS(parse("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse("setup = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("mode = casual\n"), ConfigError);
    CHECK_THROWS_AS(parse("rate = fast\n"), ConfigError);
    CHECK_THROWS_AS(parse("[mirrors]\nA 31\n"), ConfigError);
    CHECK_THROWS_AS(parse("[mirrors]\nA 31 0.02 0\nB 31 0.02 0\n"), ConfigError);
    CHECK_THROWS_AS(parse("ensemble = mixture:(1,0.5);(0,0.6)\n"), ConfigError);

    const RunConfig t = parse("ensemble = thermal:1.5\nseed = 9\n");
    CHECK(t.ensemble.kind == EnsembleSpec::Kind::Thermal);
    CHECK(t.ensemble.nbar == 1.5);
    const RunConfig m = parse("ensemble = mixture:(1,0.25);(0,0.75)\nlambda = 3.0\n");
    CHECK(m.ensemble.mixture.size() == 2);
    CHECK(m.network.lambda.has_value());
}

TEST_CASE("simulate writes the three artifacts with the expected membership") {
    const std::filesystem::path dir = "runner_test_out1";
    std::ostringstream log;
    CHECK(run_simulate(quick_config(), dir.string(), log) == 0);
    const std::string csv = slurp(dir / "spectrum.csv");
    CHECK(csv.rfind("freq_hz,power\n", 0) == 0);
    const std::string peaks = slurp(dir / "peaks.json");
    for (const char* frag : {"\"mirror\": \"A\"", "\"mirror\": \"F\"", "\"present\": true"})
        CHECK(peaks.find(frag) != std::string::npos);
    CHECK(peaks.find("\"present\": false") == std::string::npos);
    const std::string summary = slurp(dir / "summary.txt");
    CHECK(summary.find("present mirrors") != std::string::npos);
    CHECK(summary.find("A B C E F") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("setup 2 membership and the degenerate-modulation note") {
    RunConfig cfg = quick_config();
    cfg.setup = 2;
    const std::filesystem::path dir = "runner_test_out2";
    std::ostringstream log;
    CHECK(run_simulate(cfg, dir.string(), log) == 0);
    CHECK(slurp(dir / "summary.txt").find("A B C\n") != std::string::npos);
    std::filesystem::remove_all(dir);

    RunConfig quiet = quick_config();
    for (auto& m : quiet.network.mirrors) m.psi0 = 0.0;
    CHECK(run_simulate(quiet, dir.string(), log) == 0);
    const std::string summary = slurp(dir / "summary.txt");
    CHECK(summary.find("(none)") != std::string::npos);
    CHECK(summary.find("degenerate modulation") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("identical config and seed give byte-identical artifacts") {
    RunConfig cfg = quick_config();
    cfg.ensemble.kind = EnsembleSpec::Kind::Thermal;
    cfg.ensemble.nbar = 1.0;
    cfg.draws = 50;
    std::ostringstream log;
    CHECK(run_simulate(cfg, "runner_det_a", log) == 0);
    CHECK(run_simulate(cfg, "runner_det_b", log) == 0);
    for (const char* name : {"spectrum.csv", "peaks.json", "summary.txt"})
        CHECK(slurp(std::filesystem::path("runner_det_a") / name) ==
              slurp(std::filesystem::path("runner_det_b") / name));
    std::filesystem::remove_all("runner_det_a");
    std::filesystem::remove_all("runner_det_b");
}

TEST_CASE("conformance runner passes on every setup and mode") {
    std::ostringstream log;
    for (int setup : {1, 2}) {
        for (Setup2Mode mode : {Setup2Mode::PaperLiteral, Setup2Mode::Physical}) {
            RunConfig cfg = quick_config();
            cfg.setup = setup;
            cfg.setup2_mode = mode;
            cfg.alpha = cplx{0.7, -0.4};
            CHECK(run_conformance(cfg, 50, log) == 0);
        }
    }
}

TEST_CASE("oracle runner passes at the default amplitude and flags truncation") {
    std::ostringstream log;
    CHECK(run_oracle(quick_config(), 20, log) == 0);
    CHECK(log.str().find("PASS") != std::string::npos);

    RunConfig hot = quick_config();
    hot.alpha = cplx{2.0, 0.0};
    std::ostringstream log2;
    CHECK(run_oracle(hot, 8, log2) == 4);
    CHECK(log2.str().find("truncation") != std::string::npos);
    CHECK(log2.str().find("achieved norm") != std::string::npos);
}

TEST_CASE("lines runner emits sorted CSV") {
    std::ostringstream out;
    CHECK(run_lines(quick_config(), out) == 0);
    const std::string text = out.str();
    CHECK(text.rfind("freq_hz,power\n", 0) == 0);
    CHECK(text.find("4.70000000e+01") != std::string::npos);
    RunConfig loud = quick_config();
    for (auto& m : loud.network.mirrors) m.psi0 = 0.5;
    CHECK_THROWS_AS(run_lines(loud, out), ConfigError);
}
