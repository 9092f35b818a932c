#pragma once

#include <complex>
#include <span>
#include <vector>

#include "hyperlc/grid.hpp"

namespace hlc {

using Complex = std::complex<double>;

/// Complex Fourier coefficients of a scalar field on a Grid3.
/// Fields representing real physical data satisfy coeff(-k) = conj(coeff(k));
/// that symmetry is a property of the data, not enforced by the container.
struct SpectralField {
    Grid3 grid;
    std::vector<Complex> coeff;

    SpectralField() = default;
    explicit SpectralField(const Grid3& g) : grid(g), coeff(g.size(), Complex(0.0, 0.0)) {}

    Complex& operator()(int i1, int i2, int i3) { return coeff[grid.flat_index(i1, i2, i3)]; }
    const Complex& operator()(int i1, int i2, int i3) const {
        return coeff[grid.flat_index(i1, i2, i3)];
    }

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double s);
    SpectralField& operator*=(Complex s);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField f);
SpectralField operator*(Complex s, SpectralField f);

/// Three scalar fields on one shared grid.
struct VectorField3 {
    std::array<SpectralField, 3> comp;

    VectorField3() = default;
    explicit VectorField3(const Grid3& g) : comp{SpectralField(g), SpectralField(g), SpectralField(g)} {}

    const Grid3& grid() const { return comp[0].grid; }
    SpectralField& operator[](int i) { return comp[i]; }
    const SpectralField& operator[](int i) const { return comp[i]; }

    VectorField3& operator+=(const VectorField3& o);
    VectorField3& operator-=(const VectorField3& o);
    VectorField3& operator*=(double s);
};

VectorField3 operator+(VectorField3 a, const VectorField3& b);
VectorField3 operator-(VectorField3 a, const VectorField3& b);
VectorField3 operator*(double s, VectorField3 f);

// ---- transforms ----------------------------------------------------------
//
// Normalization, used everywhere: the forward transform carries 1/n^3, the
// inverse carries 1, so transform_inverse(transform_forward(f)) == f and
// coeff(0) is the mean of the field.

SpectralField transform_forward(std::span<const double> physical, const Grid3& grid);
SpectralField transform_forward(std::span<const Complex> physical, const Grid3& grid);

std::vector<Complex> transform_inverse(const SpectralField& f);
/// Inverse transform keeping the real part only (for fields known to be real).
std::vector<double> transform_inverse_real(const SpectralField& f);

// ---- calculus and products ------------------------------------------------

/// Spectral derivative d^order/dx_axis^order (axis in {1,2,3}).  The Nyquist
/// mode is zeroed for odd orders, where its sign is ambiguous.
SpectralField differentiate(const SpectralField& f, int axis, int order = 1);

/// Zero every coefficient with any |mode| above dealias_fraction * Nyquist
/// (and the Nyquist plane itself).
void dealias(SpectralField& f);
void dealias(VectorField3& f);

/// Zero the three Nyquist planes, where sign-ambiguous odd symbols are
/// undefined.
void zero_nyquist(SpectralField& f);
void zero_nyquist(VectorField3& f);

/// Pointwise physical-space product of 2..4 factors, dealiased.
SpectralField dealias_product(std::span<const SpectralField* const> factors);
SpectralField dealias_product(const SpectralField& a, const SpectralField& b);
SpectralField dealias_product(const SpectralField& a, const SpectralField& b,
                              const SpectralField& c);

// ---- norms ----------------------------------------------------------------
//
// L^2 means the Lebesgue norm on the box: ||f||^2 = integral |f|^2 dx
//                                                 = volume * sum_k |coeff(k)|^2.

double sobolev_norm(const SpectralField& f, double order);
double sobolev_norm(const VectorField3& f, double order);
double l2_norm(const SpectralField& f);
double l2_norm(const VectorField3& f);

/// Max of |field| over collocation points.
double sup_norm(const SpectralField& f);

/// True if any coefficient is NaN or infinite.
bool has_nonfinite(const SpectralField& f);
bool has_nonfinite(const VectorField3& f);

}  // namespace hlc
