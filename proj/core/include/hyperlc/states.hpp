#pragma once

#include <array>

#include "hyperlc/field.hpp"
#include "hyperlc/multipliers.hpp"

namespace hlc {

/// Default safety margin keeping tan(phi2) finite: runs abort when
/// sup|phi2| reaches pi/2 - margin.
inline constexpr double default_phi2_margin = 0.2;

/// Orientation in polar angles about the equilibrium direction e1,
/// with partial time derivatives.
struct AngleState {
    SpectralField phi1, phi2;
    SpectralField dphi1, dphi2;

    const Grid3& grid() const { return phi1.grid; }
};

/// Unit director field and its partial time derivative.
struct DirectorState {
    VectorField3 d;
    VectorField3 dt_d;

    const Grid3& grid() const { return d.grid(); }
};

/// Velocity in diagonalized coordinates.  The physical velocity is recovered
/// by applying the diagonalizer again (it is an involution).
struct FlowState {
    VectorField3 v;

    const Grid3& grid() const { return v.grid(); }
    VectorField3 velocity() const { return apply_diagonalizer(v); }
};

/// Complex normalized wave variables, one per angle:
///   w = d/dt(phi) + i |grad| phi.
/// The mean mode is excluded (kept at zero); means travel separately.
struct NormalizedWave {
    SpectralField w1, w2;

    const Grid3& grid() const { return w1.grid; }
    const SpectralField& operator[](int j) const { return j == 0 ? w1 : w2; }
    SpectralField& operator[](int j) { return j == 0 ? w1 : w2; }
};

/// Full evolved state of the coupled system.
struct SimulationState {
    double t = 0.0;
    FlowState flow;
    NormalizedWave wave;
    std::array<double, 2> mean_phi{0.0, 0.0};
    std::array<double, 2> mean_dphi{0.0, 0.0};

    const Grid3& grid() const { return flow.grid(); }
};

/// Build the normalized wave from angle data (mean mode dropped).
SpectralField normalized_wave_from_angles(const SpectralField& phi, const SpectralField& dphi);

/// Recover the angle and its time derivative from a normalized wave field.
/// phi's mean mode is set to mean_phi and dphi's to mean_dphi.
SpectralField angle_from_wave(const SpectralField& w, double mean_phi);
SpectralField angle_velocity_from_wave(const SpectralField& w, double mean_dphi);

/// Reassemble the AngleState carried by a SimulationState.
AngleState reconstruct_angles(const SimulationState& s);

}  // namespace hlc
