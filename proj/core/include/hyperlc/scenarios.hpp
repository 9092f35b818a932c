#pragma once

#include <vector>

#include "hyperlc/config.hpp"
#include "hyperlc/diagnostics.hpp"

namespace hlc {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 2;
inline constexpr int exit_divergence = 3;
inline constexpr int exit_verification_failure = 4;

struct CheckRow {
    std::string name;
    long samples = 0;
    double max_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

/// Sampled multiplier-operator identity suite: diagonalizer involution and
/// orthogonality, projection identities, the diagonalization of the projected
/// viscous symbol on divergence-free vectors, symbol positivity lower bounds,
/// semigroup and half-wave group laws, dyadic partition, Bernstein constant,
/// and space-localized reconstruction.
std::vector<CheckRow> operator_identity_suite(const VerifyConfig& vc, const Coefficients& c);

struct DecayScenarioResult {
    DecayFit heat;
    DecayFit wave;
    double shell_bound_worst = 0.0;  // max lhs/rhs - 1 over checked times
    bool shell_bound_ok = false;
};

/// Dissipative and dispersive decay measurements against the reference
/// exponents -3/2 and -1.
DecayScenarioResult decay_scenarios(const DecayConfig& dc, const Coefficients& c);

struct CrossCheckResult {
    std::vector<double> dts;
    std::vector<double> discrepancies;  // relative L2 discrepancy of the director field
    std::vector<double> orders;         // log2 ratios of successive discrepancies
    bool pass_tolerance = false;
    bool pass_order = false;
};

/// Director-formulation trajectory (classical RK4) against the diagonalized
/// angle-formulation trajectory (exponential integrator) from identical data.
CrossCheckResult cross_check_scenario(const CrossCheckConfig& xc, const Grid3& grid,
                                      const Coefficients& c, std::uint64_t seed);

int cmd_simulate(const RunConfig& cfg);
int cmd_verify_operators(const RunConfig& cfg);
int cmd_verify_decay(const RunConfig& cfg);
int cmd_cross_check(const RunConfig& cfg);

}  // namespace hlc
