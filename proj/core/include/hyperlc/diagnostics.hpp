#pragma once

#include <span>
#include <string>
#include <vector>

#include "hyperlc/coefficients.hpp"
#include "hyperlc/physics.hpp"
#include "hyperlc/states.hpp"

namespace hlc {

/// Time series assembled by a run: energies, dissipation, per-shell sup
/// norms of the normalized wave, and constraint residuals.
struct EnergyReport {
    int diag_order = 4;
    std::vector<double> times;
    std::vector<double> total;                 // kinetic + dissipation + wave
    std::vector<double> kinetic;               // (1/2) sum_{|n| in {0,N}} ||d^n v||^2
    std::vector<double> dissipation_integral;  // int_0^t sum ||d^n Lhalf v||^2
    std::vector<double> wave_energy;           // (1/2) sum ||d^n Phi||^2
    std::vector<double> wave_sup;              // sup |Phi|
    std::vector<int> shells;                   // resolved dyadic shell indices
    std::vector<std::vector<double>> shell_sup;  // [sample][shell], sup |P_k Phi|
    std::vector<double> div_residual;
    std::vector<double> unit_residual;
    std::vector<double> mean_residual;
};

struct EnergyBreakdown {
    double kinetic = 0.0;
    double wave = 0.0;
    double dissipation = 0.0;
    double total = 0.0;
};

/// Sum over all derivative multi-indices of exact order `order` of
/// ||d^n f||^2, plus the order-zero term, evaluated as a multiplier.
double derivative_shell_sum(const SpectralField& f, int order);
double derivative_shell_sum(const VectorField3& f, int order);

/// Instantaneous energy functional at derivative orders {0, diag_order}:
/// kinetic part of v, wave part of Phi, plus an externally accumulated
/// dissipation integral.
EnergyBreakdown energy_functional(const SimulationState& s, const Coefficients& c, int diag_order,
                                  double dissipation_accumulated);

/// Instantaneous dissipation rate sum_{|n| in {0,N}} ||d^n Lhalf v||^2.
double dissipation_rate(const SimulationState& s, const Coefficients& c, int diag_order);

/// Trapezoid accumulator for the dissipation integral along a run.
class EnergyTracker {
  public:
    EnergyTracker(const Coefficients& c, int diag_order) : c_(c), order_(diag_order) {}

    void update(const SimulationState& s);
    double dissipation() const { return accumulated_; }
    EnergyBreakdown energy(const SimulationState& s) const {
        return energy_functional(s, c_, order_, accumulated_);
    }
    int order() const { return order_; }

  private:
    Coefficients c_;
    int order_;
    double accumulated_ = 0.0;
    double last_t_ = 0.0;
    double last_rate_ = 0.0;
    bool primed_ = false;
};

// ---- vector-field diagnostics -------------------------------------------------

enum class WordOp { Dt, D1, D2, D3, Rot1, Rot2, Rot3 };

/// A word of at most two vector-field letters applied to field snapshots.
struct VectorFieldWord {
    std::vector<WordOp> ops;
};

struct WordEnergy {
    double v_kinetic = 0.0;           // (1/2) sum_{|n| in {0,N}} ||d^n v^(a)||^2
    double v_dissipation_rate = 0.0;  // sum ||d^n Lhalf v^(a)||^2 (integrate externally)
    double phi_energy = 0.0;          // (1/2) sum (||d^n dt phi^(a)||^2 + ||d^n grad phi^(a)||^2)
};

/// Smooth window used for all x-weighted diagnostics: 1 on the inner 50% of
/// the box (radially, about the origin), 0 on the outer 10%.
double diagnostic_window(double r, const Grid3& g);

/// Apply the word to stored snapshots (time derivatives by centered
/// differences across equally spaced snapshots; rotations are x-weighted
/// under the diagnostic window) and evaluate the energy functionals at the
/// middle snapshot.  Snapshot count must be odd and large enough for the
/// time derivatives in the word (2 per Dt plus one middle layer).
WordEnergy vector_field_energy(std::span<const SimulationState> snapshots,
                               const VectorFieldWord& word, const Coefficients& c,
                               int diag_order);

// ---- wave profile ------------------------------------------------------------

/// Back-propagated normalized wave (stationary under free wave evolution).
NormalizedWave wave_profile(const SimulationState& s);

/// Frequency gradient of a profile, computed as the transform of the
/// windowed physical-space multiplication by -i x.
std::array<SpectralField, 3> profile_frequency_gradient(const SpectralField& psi);

/// Sobolev norm of |xi| * frequency-gradient of the profile (root of the sum
/// of squares over the three components).
double weighted_profile_norm(const SpectralField& psi, double sobolev_order);

// ---- decay fits ----------------------------------------------------------------

struct DecayFit {
    std::string quantity;
    double window_t1 = 0.0, window_t2 = 0.0;
    int samples = 0;
    double slope = 0.0;
    double slope_stderr = 0.0;
    double reference = 0.0;
    std::string reference_source;
    double tolerance = 0.0;
    bool within_tolerance = false;
};

/// Log-log least-squares slope of a positive series over [t1, t2]; requires
/// at least 8 samples in the window and strictly positive values.
DecayFit decay_fit(std::span<const double> t, std::span<const double> value, double t1, double t2,
                   double reference, const std::string& reference_source, double tolerance,
                   const std::string& quantity);

// ---- constraints ----------------------------------------------------------------

struct ConstraintResiduals {
    double divergence = 0.0;     // sup |div u|
    double unit_norm = 0.0;      // max | |d| - 1 | over collocation points
    double mean_velocity = 0.0;  // | mean u |
};

ConstraintResiduals constraint_residuals(const SimulationState& s);

}  // namespace hlc
