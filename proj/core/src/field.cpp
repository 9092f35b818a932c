#include "hyperlc/field.hpp"

#include <algorithm>
#include <cmath>

#include "hyperlc/fft.hpp"

namespace hlc {

namespace {

void check_same_grid(const Grid3& a, const Grid3& b, const char* what) {
    if (!(a == b)) throw Error(std::string(what) + ": grid mismatch");
}

}  // namespace

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    check_same_grid(grid, o.grid, "field sum");
    for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] += o.coeff[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    check_same_grid(grid, o.grid, "field difference");
    for (std::size_t i = 0; i < coeff.size(); ++i) coeff[i] -= o.coeff[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeff) c *= s;
    return *this;
}

SpectralField& SpectralField::operator*=(Complex s) {
    for (auto& c : coeff) c *= s;
    return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField f) { return f *= s; }
SpectralField operator*(Complex s, SpectralField f) { return f *= s; }

VectorField3& VectorField3::operator+=(const VectorField3& o) {
    for (int i = 0; i < 3; ++i) comp[i] += o.comp[i];
    return *this;
}

VectorField3& VectorField3::operator-=(const VectorField3& o) {
    for (int i = 0; i < 3; ++i) comp[i] -= o.comp[i];
    return *this;
}

VectorField3& VectorField3::operator*=(double s) {
    for (int i = 0; i < 3; ++i) comp[i] *= s;
    return *this;
}

VectorField3 operator+(VectorField3 a, const VectorField3& b) { return a += b; }
VectorField3 operator-(VectorField3 a, const VectorField3& b) { return a -= b; }
VectorField3 operator*(double s, VectorField3 f) { return f *= s; }

SpectralField transform_forward(std::span<const double> physical, const Grid3& grid) {
    if (physical.size() != grid.size())
        throw Error("transform_forward: array shape does not match grid");
    SpectralField f(grid);
    for (std::size_t i = 0; i < physical.size(); ++i) f.coeff[i] = Complex(physical[i], 0.0);
    detail::fft3(f.coeff.data(), grid.n, true);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : f.coeff) c *= scale;
    return f;
}

SpectralField transform_forward(std::span<const Complex> physical, const Grid3& grid) {
    if (physical.size() != grid.size())
        throw Error("transform_forward: array shape does not match grid");
    SpectralField f(grid);
    std::copy(physical.begin(), physical.end(), f.coeff.begin());
    detail::fft3(f.coeff.data(), grid.n, true);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& c : f.coeff) c *= scale;
    return f;
}

std::vector<Complex> transform_inverse(const SpectralField& f) {
    std::vector<Complex> out(f.coeff);
    detail::fft3(out.data(), f.grid.n, false);
    return out;
}

std::vector<double> transform_inverse_real(const SpectralField& f) {
    std::vector<Complex> tmp = transform_inverse(f);
    std::vector<double> out(tmp.size());
    for (std::size_t i = 0; i < tmp.size(); ++i) out[i] = tmp[i].real();
    return out;
}

SpectralField differentiate(const SpectralField& f, int axis, int order) {
    if (axis < 1 || axis > 3) throw Error("differentiate: axis must be 1..3");
    if (order < 1) throw Error("differentiate: order must be positive");
    const Grid3& g = f.grid;
    SpectralField out(g);
    const bool odd = (order % 2) != 0;

    // (i k)^order = i^order * k^order, with i^order cycling {1, i, -1, -i}.
    std::vector<Complex> symbol(g.n);
    for (int i = 0; i < g.n; ++i) {
        const int m = g.mode(i);
        if (odd && m == -g.nyquist()) {
            symbol[i] = Complex(0.0, 0.0);  // sign-ambiguous mode
            continue;
        }
        const double kp = std::pow(m / g.box_length, order);
        switch (order % 4) {
            case 0: symbol[i] = Complex(kp, 0.0); break;
            case 1: symbol[i] = Complex(0.0, kp); break;
            case 2: symbol[i] = Complex(-kp, 0.0); break;
            default: symbol[i] = Complex(0.0, -kp); break;
        }
    }

    for (int i1 = 0; i1 < g.n; ++i1) {
        for (int i2 = 0; i2 < g.n; ++i2) {
            for (int i3 = 0; i3 < g.n; ++i3) {
                const int idx[3] = {i1, i2, i3};
                out(i1, i2, i3) = symbol[idx[axis - 1]] * f(i1, i2, i3);
            }
        }
    }
    return out;
}

void dealias(SpectralField& f) {
    const Grid3& g = f.grid;
    const int lim = g.dealias_limit();
    for (int i1 = 0; i1 < g.n; ++i1) {
        const int m1 = std::abs(g.mode(i1));
        for (int i2 = 0; i2 < g.n; ++i2) {
            const int m2 = std::abs(g.mode(i2));
            for (int i3 = 0; i3 < g.n; ++i3) {
                const int m3 = std::abs(g.mode(i3));
                if (m1 > lim || m2 > lim || m3 > lim) f(i1, i2, i3) = Complex(0.0, 0.0);
            }
        }
    }
}

void dealias(VectorField3& f) {
    for (int i = 0; i < 3; ++i) dealias(f[i]);
}

void zero_nyquist(SpectralField& f) {
    const Grid3& g = f.grid;
    const int ny = g.nyquist();
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3)
                if (i1 == ny || i2 == ny || i3 == ny) f(i1, i2, i3) = Complex(0.0, 0.0);
}

void zero_nyquist(VectorField3& f) {
    for (int i = 0; i < 3; ++i) zero_nyquist(f[i]);
}

SpectralField dealias_product(std::span<const SpectralField* const> factors) {
    if (factors.size() < 2 || factors.size() > 4)
        throw Error("dealias_product: need 2..4 factors");
    const Grid3& g = factors[0]->grid;
    for (const auto* f : factors) check_same_grid(g, f->grid, "dealias_product");

    std::vector<Complex> prod = transform_inverse(*factors[0]);
    for (std::size_t fi = 1; fi < factors.size(); ++fi) {
        std::vector<Complex> next = transform_inverse(*factors[fi]);
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] *= next[i];
    }
    SpectralField out = transform_forward(std::span<const Complex>(prod), g);
    dealias(out);
    return out;
}

SpectralField dealias_product(const SpectralField& a, const SpectralField& b) {
    const SpectralField* fs[2] = {&a, &b};
    return dealias_product(std::span<const SpectralField* const>(fs, 2));
}

SpectralField dealias_product(const SpectralField& a, const SpectralField& b,
                              const SpectralField& c) {
    const SpectralField* fs[3] = {&a, &b, &c};
    return dealias_product(std::span<const SpectralField* const>(fs, 3));
}

double sobolev_norm(const SpectralField& f, double order) {
    const Grid3& g = f.grid;
    double sum = 0.0;
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                const double k2sum = k1 * k1 + k2 * k2 + k3 * k3;
                const double w = order == 0.0 ? 1.0 : std::pow(1.0 + k2sum, order);
                sum += w * std::norm(f(i1, i2, i3));
            }
        }
    }
    return std::sqrt(sum * g.volume());
}

double sobolev_norm(const VectorField3& f, double order) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double ni = sobolev_norm(f[i], order);
        s += ni * ni;
    }
    return std::sqrt(s);
}

double l2_norm(const SpectralField& f) { return sobolev_norm(f, 0.0); }

double l2_norm(const VectorField3& f) { return sobolev_norm(f, 0.0); }

double sup_norm(const SpectralField& f) {
    std::vector<Complex> phys = transform_inverse(f);
    double m = 0.0;
    for (const auto& v : phys) m = std::max(m, std::abs(v));
    return m;
}

bool has_nonfinite(const SpectralField& f) {
    for (const auto& c : f.coeff)
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return true;
    return false;
}

bool has_nonfinite(const VectorField3& f) {
    return has_nonfinite(f[0]) || has_nonfinite(f[1]) || has_nonfinite(f[2]);
}

}  // namespace hlc
