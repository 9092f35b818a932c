#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <fstream>

#include "hyperlc/config.hpp"
#include "hyperlc/scenarios.hpp"
#include "hyperlc/snapshot.hpp"
#include "hyperlc/timestepper.hpp"

using namespace hlc;

TEST_SUITE("harness") {

TEST_CASE("config parsing") {
    SUBCASE("minimal config takes defaults and echoes canonically") {
        RunConfig cfg = parse_config(R"({"coefficients": {"nu1": 1.0, "nu4": 2.0, "nu5": 1.0}})");
        CHECK(cfg.grid.n == 32);
        CHECK(cfg.scheme.cfl_safety == 0.9);
        const std::string canon = canonical_config(cfg);
        RunConfig again = parse_config(canon);
        CHECK(canonical_config(again) == canon);
    }

    SUBCASE("inadmissible nu4 is rejected naming the inequality") {
        try {
            parse_config(R"({"coefficients": {"nu1": 0.0, "nu4": -1.0, "nu5": 0.0}})");
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("nu4 > 0") != std::string::npos);
        }
    }

    SUBCASE("boundary coefficient values violate the strict inequalities") {
        CHECK_THROWS_AS(
            parse_config(R"({"coefficients": {"nu1": -6.0, "nu4": 2.0, "nu5": 1.0}})"),
            ConfigError);
        CHECK_THROWS_AS(
            parse_config(R"({"coefficients": {"nu1": 0.0, "nu4": 2.0, "nu5": -2.0}})"),
            ConfigError);
    }

    SUBCASE("unknown keys are rejected with their path") {
        try {
            parse_config(R"({"grid": {"points": 32, "sides": 2}})");
            FAIL("expected a config error");
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find("grid.sides") != std::string::npos);
        }
    }

    SUBCASE("syntax errors are config errors") {
        CHECK_THROWS_AS(parse_config("{"), ConfigError);
        CHECK_THROWS_AS(parse_config("[1,2]"), ConfigError);
    }

    SUBCASE("scheme and profile enumerations are validated") {
        CHECK_THROWS_AS(parse_config(R"({"scheme": {"method": "RK4"}})"), ConfigError);
        CHECK_THROWS_AS(parse_config(R"({"initial_data": {"profile": "white-noise"}})"),
                        ConfigError);
        CHECK_NOTHROW(parse_config(R"({"scheme": {"method": "ETD-midpoint"}})"));
    }
}

TEST_CASE("simulate reports divergence with partial artifacts") {
    // Amplitude far outside the chart margin: the second angle leaves the
    // valid region during reconstruction and the run aborts.
    const auto dir = std::filesystem::temp_directory_path() / "hlc_divergence_test";
    RunConfig cfg = parse_config(R"({
        "coefficients": {"nu1": 0.1, "nu4": 0.2, "nu5": 0.1},
        "grid": {"points": 16},
        "initial_data": {"epsilon0": 1e5, "seed": 2, "band": [1, 2]},
        "scheme": {"dt": 0.05, "t_end": 1.0},
        "diagnostics": {"cadence_steps": 2}
    })");
    cfg.output_dir = dir.string();
    const int code = cmd_simulate(cfg);
    CHECK(code == exit_divergence);
    CHECK(std::filesystem::exists(dir / "series.csv"));
    CHECK(std::filesystem::exists(dir / "summary.json"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("snapshot roundtrip is bitwise") {
    Grid3 g(16, 1.0);
    Coefficients c(1.0, 2.0, 1.0);
    InitialDataSpec spec;
    spec.epsilon0 = 1e-2;
    spec.seed = 91;
    SimulationState s = generate_initial_data(spec, g);
    s.t = 1.375;
    s.mean_phi = {0.25, -0.5};
    s.mean_dphi = {1e-3, -2e-3};

    const auto path = std::filesystem::temp_directory_path() / "hlc_snapshot_test.bin";
    save_snapshot(path.string(), s, c, spec.seed);
    Snapshot snap = load_snapshot(path.string());

    CHECK(snap.grid == g);
    CHECK(snap.nu4 == 2.0);
    CHECK(snap.seed == spec.seed);
    CHECK(snap.state.t == s.t);
    CHECK(snap.state.mean_phi == s.mean_phi);
    for (int i = 0; i < 3; ++i)
        CHECK(std::memcmp(snap.state.flow.v[i].coeff.data(), s.flow.v[i].coeff.data(),
                          s.flow.v[i].coeff.size() * sizeof(Complex)) == 0);
    CHECK(std::memcmp(snap.state.wave.w1.coeff.data(), s.wave.w1.coeff.data(),
                      s.wave.w1.coeff.size() * sizeof(Complex)) == 0);

    SUBCASE("foreign version or magic is rejected") {
        // Corrupt the version byte.
        std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
        f.seekp(8);
        char bad = 99;
        f.write(&bad, 1);
        f.close();
        CHECK_THROWS_AS(load_snapshot(path.string()), Error);
    }
    std::filesystem::remove(path);
}

}  // TEST_SUITE
