#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "hyperlc/coefficients.hpp"
#include "hyperlc/grid.hpp"
#include "hyperlc/timestepper.hpp"

namespace hlc {

/// Configuration errors (parse failures, unknown keys, inadmissible values);
/// mapped to a dedicated process exit code by the CLI.
struct ConfigError : Error {
    using Error::Error;
};

struct DiagnosticsConfig {
    int cadence_steps = 10;
    int sobolev_order = 4;
};

struct SnapshotConfig {
    int every_steps = 0;  // 0: endpoints only
};

struct VerifyConfig {
    int xi_samples = 10000;
    int coefficient_samples = 100;
    std::uint64_t seed = 1234;
    double identity_tolerance = 1e-12;
};

struct DecayConfig {
    int points = 128;
    double box_length = 16.0;
    int samples = 12;
    double heat_t_min = 1.0, heat_t_max = 8.0;
    // Dispersive window: after the near-field focusing transient, before the
    // expanding front (t + kernel spread) reaches the half-box at ~50.
    double wave_t_min = 12.0, wave_t_max = 40.0;
    double slope_tolerance = 0.15;
    double bump_width = 1.0;  // physical width of the heat-scenario bump
    int shell = 0;            // dyadic shell for the dispersive scenario
};

struct CrossCheckConfig {
    double epsilon0 = 1e-2;
    double t_end = 1.0;
    double dt = 0.0625;
    int halvings = 2;
    double tolerance = 1e-5;
    double min_order = 1.8;
};

struct RunConfig {
    std::string scenario = "simulate";
    std::string output_dir = "out";
    Grid3 grid{32, 1.0};
    double nu1 = 0.0, nu4 = 1.0, nu5 = 0.0;
    InitialDataSpec initial_data;
    SchemeConfig scheme;
    DiagnosticsConfig diagnostics;
    SnapshotConfig snapshots;
    VerifyConfig verify;
    DecayConfig decay;
    CrossCheckConfig cross_check;

    Coefficients coefficients() const { return Coefficients(nu1, nu4, nu5); }
};

/// Parse and validate a JSON configuration.  Unknown keys are rejected with
/// their path; coefficient admissibility violations name the failed
/// inequality.  Missing keys take defaults.
RunConfig parse_config(const std::string& text);

/// Canonical echo of a configuration (normalized key order, defaults filled).
std::string canonical_config(const RunConfig& cfg);

}  // namespace hlc
