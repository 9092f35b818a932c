#pragma once

#include <utility>

#include "hyperlc/coefficients.hpp"
#include "hyperlc/states.hpp"

namespace hlc {

/// Symmetric and antisymmetric parts of the velocity gradient,
///   A_ij = (d_j u_i + d_i u_j)/2,   B_ij = (d_j u_i - d_i u_j)/2.
struct StrainTensors {
    // Symmetric part, components 11,12,13,22,23,33.
    std::array<SpectralField, 6> sym;
    // Antisymmetric part, components 12,13,23 (B_ji = -B_ij).
    std::array<SpectralField, 3> antisym;

    const SpectralField& a(int i, int j) const;
};

/// 3x3 field of spectral components, M[j][i] holds the (j,i) entry.
struct Matrix3Field {
    std::array<std::array<SpectralField, 3>, 3> m;
};

StrainTensors strain_tensors(const VectorField3& u);

// ---- chart maps -------------------------------------------------------------

/// Pointwise polar chart d = (cos p1 cos p2, sin p1 cos p2, sin p2) and its
/// chain-rule time derivative.  |d| = 1 exactly at collocation points.
/// Fails if sup|phi2| >= pi/2 - margin (tan would blow up downstream).
DirectorState angles_to_director(const AngleState& a, double margin = default_phi2_margin);

/// Chart inverse: p1 = atan2(d2, d1), p2 = asin(d3), chain-rule derivatives.
/// Fails if d1 <= 0 anywhere (outside the near-equilibrium chart).
AngleState director_to_angles(const DirectorState& s);

// ---- director-system pieces -------------------------------------------------

/// Leslie stress for the specialized coefficients:
///   sigma_ji = nu1 (d.A d) d_i d_j + nu5 (d_j (A d)_i + d_i (A d)_j),
/// assembled pointwise and dealiased.
Matrix3Field stress_tensor(const Coefficients& c, const VectorField3& d,
                           const StrainTensors& strain);

/// Divergence (div M)_i = sum_j d_j M[j][i], computed spectrally.
VectorField3 tensor_divergence(const Matrix3Field& sigma);

/// Lagrange multiplier keeping |d| = 1:
///   Gamma = -|d/dt d + u.grad d|^2 + |grad d|^2, pointwise and dealiased.
SpectralField lagrange_multiplier_field(const DirectorState& s, const VectorField3& u);

struct DirectorRhs {
    VectorField3 du_dt;     // Leray-projected velocity tendency
    VectorField3 ddtd_dt;   // tendency of dt_d (second-order equation unpacked)
};

/// Right-hand side of the director formulation: incompressible flow driven by
/// the elastic and Leslie stresses, wave-map equation for d with the material
/// second derivative expanded in (d, dt_d).
DirectorRhs director_rhs(const Coefficients& c, const DirectorState& s, const VectorField3& u);

// ---- angle-system pieces ----------------------------------------------------

/// Quadratic stress/angle coupling blocks of the velocity equation (the nu1
/// and nu5 component formulas assembled verbatim, derivatives applied
/// spectrally after dealiased products).
VectorField3 stress_angle_coupling(const Coefficients& c, const AngleState& a,
                                   const VectorField3& u);

/// Cubic-and-higher Taylor remainder of the stress expansion about the
/// equilibrium direction.  The parameter integral over the Taylor variable is
/// evaluated with fixed-order Gauss-Legendre quadrature of the exactly
/// differentiated trigonometric integrand (derivatives taken in the angle
/// arguments, in closed form).
VectorField3 stress_taylor_remainder(const Coefficients& c, const AngleState& a,
                                     const StrainTensors& strain, int quadrature_nodes = 8);

/// Sphere-metric correction to the elastic stress in angle variables:
///   component i = sum_j d_j( sin^2(p2) d_i p1 d_j p1 ).
VectorField3 metric_correction_term(const AngleState& a);

/// Curvature source of the wave-map system in polar angles, with material
/// derivatives expanded:
///   ( 2 tan(p2) (p1' p2' - grad p1 . grad p2),
///     sin(2 p2)/2 (-(p1')^2 + |grad p1|^2) ),  p' = d/dt p + u.grad p.
/// Fails if the phi2 margin is violated.
std::pair<SpectralField, SpectralField> wave_curvature_source(const AngleState& a,
                                                              const VectorField3& u,
                                                              double margin = default_phi2_margin);

struct AngleSystemRhs {
    VectorField3 v_linear;                  // -(diagonal dissipation) v
    VectorField3 v_nonlinear;               // diagonalized, projected sources
    VectorField3 du_dt;                     // full velocity tendency, physical frame
    SpectralField wave_source1, wave_source2;  // sources of the wave equations
};

/// Right-hand side of the diagonalized formulation.  The wave sources are the
/// full nonlinearities of d^2/dt^2 phi - lap phi = source; their mean modes
/// carry the tendencies of the spatially averaged angle velocities.
AngleSystemRhs angle_system_rhs(const Coefficients& c, const AngleState& a,
                                const FlowState& flow,
                                double margin = default_phi2_margin);

/// Largest |phi2| over collocation points.
double phi2_sup(const AngleState& a);

}  // namespace hlc
