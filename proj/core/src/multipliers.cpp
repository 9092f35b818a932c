#include "hyperlc/multipliers.hpp"

#include <cmath>

namespace hlc {

namespace {

// Iterate a frequency-domain kernel over all modes of a grid.
template <typename F>
void for_each_mode(const Grid3& g, F&& body) {
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                body(g.flat_index(i1, i2, i3), Vec3{k1, k2, k3});
            }
        }
    }
}

}  // namespace

Mat3 velocity_diagonalizer(const Vec3& xi) {
    const double rho2 = xi[1] * xi[1] + xi[2] * xi[2];
    Mat3 m{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    if (rho2 == 0.0) return m;  // singular-set rule: identity on the xi2=xi3=0 line
    const double rho = std::sqrt(rho2);
    const double a = xi[1] / rho;
    const double b = xi[2] / rho;
    m[1][1] = a;
    m[1][2] = b;
    m[2][1] = b;
    m[2][2] = -a;
    return m;
}

Vec3 dissipation_symbol(const Coefficients& c, const Vec3& xi) {
    const double q2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (q2 == 0.0) return {0.0, 0.0, 0.0};
    const double perp2 = xi[1] * xi[1] + xi[2] * xi[2];
    const double planar =
        0.5 * (c.nu4() + c.nu5()) * q2 + c.nu1() * xi[0] * xi[0] * perp2 / q2;
    const double axial = 0.5 * c.nu4() * q2 + 0.5 * c.nu5() * xi[0] * xi[0];
    return {planar, planar, axial};
}

Vec3 dissipation_sqrt_symbol(const Coefficients& c, const Vec3& xi) {
    Vec3 s = dissipation_symbol(c, xi);
    return {std::sqrt(s[0]), std::sqrt(s[1]), std::sqrt(s[2])};
}

Mat3 projected_viscous_symbol(const Coefficients& c, const Vec3& xi) {
    const double q2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    Mat3 m{{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
    if (q2 == 0.0) return m;
    const double hs = 0.5 * (c.nu4() + c.nu5());
    const double r1 = c.nu1() * xi[0] * xi[0] / q2;
    m[0][0] = hs * q2 + r1 * (xi[1] * xi[1] + xi[2] * xi[2]);
    m[1][1] = hs * q2 - 0.5 * c.nu5() * xi[2] * xi[2] + r1 * xi[1] * xi[1];
    m[2][2] = hs * q2 - 0.5 * c.nu5() * xi[1] * xi[1] + r1 * xi[2] * xi[2];
    m[1][2] = (0.5 * c.nu5() + r1) * xi[1] * xi[2];
    m[2][1] = m[1][2];
    return m;
}

Mat3 viscous_symbol(const Coefficients& c, const Vec3& xi) {
    const double q2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    const double n4 = c.nu4(), n5 = c.nu5(), n1 = c.nu1();
    Mat3 m{{{0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}, {0.0, 0.0, 0.0}}};
    // nu4/2 Laplacian on all components, plus the linearized stress block:
    //   ( nu5/2 lap u1 + (nu1+nu5) d11 u1,
    //     nu5/2 (d11 u2 + d12 u1),  nu5/2 (d11 u3 + d13 u1) ).
    m[0][0] = 0.5 * n4 * q2 + 0.5 * n5 * q2 + (n1 + n5) * xi[0] * xi[0];
    m[1][1] = 0.5 * n4 * q2 + 0.5 * n5 * xi[0] * xi[0];
    m[2][2] = 0.5 * n4 * q2 + 0.5 * n5 * xi[0] * xi[0];
    m[1][0] = 0.5 * n5 * xi[0] * xi[1];
    m[2][0] = 0.5 * n5 * xi[0] * xi[2];
    return m;
}

VectorField3 leray_project(const VectorField3& u) {
    const Grid3& g = u.grid();
    VectorField3 out = u;
    for_each_mode(g, [&](std::size_t idx, const Vec3& xi) {
        const double q2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (q2 == 0.0) return;  // mean mode untouched
        const Complex dot =
            xi[0] * u[0].coeff[idx] + xi[1] * u[1].coeff[idx] + xi[2] * u[2].coeff[idx];
        for (int i = 0; i < 3; ++i) out[i].coeff[idx] -= xi[i] * dot / q2;
    });
    zero_nyquist(out);  // projector entries are sign-ambiguous there
    return out;
}

VectorField3 apply_diagonalizer(const VectorField3& u) {
    const Grid3& g = u.grid();
    VectorField3 out(g);
    for_each_mode(g, [&](std::size_t idx, const Vec3& xi) {
        const Mat3 m = velocity_diagonalizer(xi);
        const Complex a = u[0].coeff[idx], b = u[1].coeff[idx], c = u[2].coeff[idx];
        out[0].coeff[idx] = a;
        out[1].coeff[idx] = m[1][1] * b + m[1][2] * c;
        out[2].coeff[idx] = m[2][1] * b + m[2][2] * c;
    });
    zero_nyquist(out);  // matrix entries are sign-ambiguous there
    return out;
}

VectorField3 viscous_propagate(const Coefficients& c, double t, const VectorField3& v,
                               int derivative_order) {
    if (t < 0.0) throw Error("viscous_propagate: t must be nonnegative");
    if (derivative_order < 0 || derivative_order > 4)
        throw Error("viscous_propagate: derivative_order must be 0..4");
    const Grid3& g = v.grid();
    VectorField3 out(g);
    for_each_mode(g, [&](std::size_t idx, const Vec3& xi) {
        const Vec3 lam = dissipation_symbol(c, xi);
        const double q = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        const double amp = derivative_order == 0 ? 1.0 : std::pow(q, derivative_order);
        for (int i = 0; i < 3; ++i)
            out[i].coeff[idx] = std::exp(-t * lam[i]) * amp * v[i].coeff[idx];
    });
    return out;
}

namespace {

VectorField3 apply_diag_multiplier(const Coefficients& c, const VectorField3& v, bool sqrt_of) {
    const Grid3& g = v.grid();
    VectorField3 out(g);
    for_each_mode(g, [&](std::size_t idx, const Vec3& xi) {
        Vec3 lam = dissipation_symbol(c, xi);
        for (int i = 0; i < 3; ++i) {
            const double m = sqrt_of ? std::sqrt(lam[i]) : lam[i];
            out[i].coeff[idx] = m * v[i].coeff[idx];
        }
    });
    return out;
}

}  // namespace

VectorField3 apply_dissipation(const Coefficients& c, const VectorField3& v) {
    return apply_diag_multiplier(c, v, false);
}

VectorField3 apply_dissipation_sqrt(const Coefficients& c, const VectorField3& v) {
    return apply_diag_multiplier(c, v, true);
}

SpectralField halfwave_propagate(double t, const SpectralField& f) {
    const Grid3& g = f.grid;
    SpectralField out(g);
    for_each_mode(g, [&](std::size_t idx, const Vec3& xi) {
        const double q = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
        out.coeff[idx] = std::polar(1.0, t * q) * f.coeff[idx];
    });
    return out;
}

SpectralField radial_derivative(const SpectralField& f, double power) {
    const Grid3& g = f.grid;
    SpectralField out(g);
    for_each_mode(g, [&](std::size_t idx, const Vec3& xi) {
        const double q2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (q2 == 0.0) {
            out.coeff[idx] = power == 0.0 ? f.coeff[idx] : Complex(0.0, 0.0);
            return;
        }
        out.coeff[idx] = std::pow(q2, 0.5 * power) * f.coeff[idx];
    });
    return out;
}

SpectralField divergence(const VectorField3& u) {
    SpectralField d = differentiate(u[0], 1);
    d += differentiate(u[1], 2);
    d += differentiate(u[2], 3);
    return d;
}

}  // namespace hlc
