#pragma once

#include <array>

#include "hyperlc/coefficients.hpp"
#include "hyperlc/field.hpp"

namespace hlc {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

// ---- pointwise symbols ------------------------------------------------------

/// Symmetric orthogonal involution that block-diagonalizes the projected
/// viscous operator.  With rho = sqrt(xi2^2 + xi3^2):
///   [1   0         0      ]
///   [0   xi2/rho   xi3/rho]
///   [0   xi3/rho  -xi2/rho]
/// On the singular line rho = 0 the identity matrix is used; the viscous
/// symbol is already diagonal and isotropic there, so the diagonalization
/// identity survives this choice.
Mat3 velocity_diagonalizer(const Vec3& xi);

/// Diagonal of the diagonalized viscous operator:
///   ( (nu4+nu5)/2 |xi|^2 + nu1 xi1^2 (xi2^2+xi3^2) / |xi|^2,  same,
///     nu4/2 |xi|^2 + nu5/2 xi1^2 ).
/// Zero at xi = 0.  Entries are strictly positive for xi != 0 under
/// admissible coefficients.
Vec3 dissipation_symbol(const Coefficients& c, const Vec3& xi);

/// Entrywise square root of dissipation_symbol.
Vec3 dissipation_sqrt_symbol(const Coefficients& c, const Vec3& xi);

/// Symmetric matrix symbol of the Leray-projected viscous operator, reduced
/// on the divergence-free subspace.  For every u with xi.u = 0,
///   U(xi) * Lbar(xi) * U(xi) * u = diag(dissipation_symbol(xi)) * u.
Mat3 projected_viscous_symbol(const Coefficients& c, const Vec3& xi);

/// Matrix symbol of the unprojected second-order viscous operator that the
/// linearized stress divergence produces (acting on the velocity).
Mat3 viscous_symbol(const Coefficients& c, const Vec3& xi);

// ---- multiplier applications ------------------------------------------------

/// Orthogonal projection onto divergence-free fields (symbol I - xi xi^T/|xi|^2).
/// The mean mode passes through unchanged.
VectorField3 leray_project(const VectorField3& u);

/// Apply the frequency-wise diagonalizer matrix.  The operation is an
/// involution: applying it twice returns the input.
VectorField3 apply_diagonalizer(const VectorField3& u);

/// Dissipative semigroup in diagonal coordinates: component j is multiplied
/// by exp(-t * L_j(xi)) * |xi|^derivative_order.  Requires t >= 0.
VectorField3 viscous_propagate(const Coefficients& c, double t, const VectorField3& v,
                               int derivative_order = 0);

/// Apply diag(dissipation_symbol) (or its square root) as a multiplier in
/// diagonal coordinates.
VectorField3 apply_dissipation(const Coefficients& c, const VectorField3& v);
VectorField3 apply_dissipation_sqrt(const Coefficients& c, const VectorField3& v);

/// Half-wave group: multiplication by exp(i t |xi|).  Unitary on L^2; the
/// mean mode is multiplied by 1.
SpectralField halfwave_propagate(double t, const SpectralField& f);

/// |xi|^p multiplier (p may be negative; the mean mode maps to zero then).
SpectralField radial_derivative(const SpectralField& f, double power);

/// Divergence of a vector field, computed spectrally.
SpectralField divergence(const VectorField3& u);

}  // namespace hlc
