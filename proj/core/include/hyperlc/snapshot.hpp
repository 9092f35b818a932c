#pragma once

#include <cstdint>
#include <string>

#include "hyperlc/coefficients.hpp"
#include "hyperlc/states.hpp"

namespace hlc {

/// Binary state snapshot: magic + version header, grid and coefficient
/// metadata, then raw little-endian IEEE-754 coefficient arrays.
/// load(save(x)) is bitwise identity; the loader rejects foreign versions.
struct Snapshot {
    Grid3 grid;
    double nu1 = 0.0, nu4 = 0.0, nu5 = 0.0;
    std::uint64_t seed = 0;
    SimulationState state;
};

void save_snapshot(const std::string& path, const SimulationState& state, const Coefficients& c,
                   std::uint64_t seed);

Snapshot load_snapshot(const std::string& path);

}  // namespace hlc
