#include "hyperlc/littlewood_paley.hpp"

#include <cmath>

namespace hlc {

namespace {

double ramp(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double ldexp2(int k) { return std::ldexp(1.0, k); }

template <typename Profile>
SpectralField apply_radial_multiplier(const SpectralField& f, Profile&& profile) {
    const Grid3& g = f.grid;
    SpectralField out(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                const double r = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
                const double w = profile(r);
                if (w != 0.0) out(i1, i2, i3) = w * f(i1, i2, i3);
            }
        }
    }
    return out;
}

}  // namespace

double radial_cutoff(double r) {
    const double a = std::abs(r);
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double up = ramp(2.0 - a);
    const double down = ramp(a - 1.0);
    return up / (up + down);
}

double shell_profile(double r, int k) {
    return radial_cutoff(r / ldexp2(k)) - radial_cutoff(r / ldexp2(k - 1));
}

SpectralField shell_project(const SpectralField& f, int k) {
    return apply_radial_multiplier(f, [k](double r) { return r == 0.0 ? 0.0 : shell_profile(r, k); });
}

SpectralField shell_project_leq(const SpectralField& f, int k) {
    return apply_radial_multiplier(f, [k](double r) { return radial_cutoff(r / ldexp2(k)); });
}

SpectralField shell_project_gt(const SpectralField& f, int k) {
    return apply_radial_multiplier(f,
                                   [k](double r) { return 1.0 - radial_cutoff(r / ldexp2(k)); });
}

std::pair<int, int> resolved_shell_range(const Grid3& g) {
    // Smallest nonzero |xi| is 1/box_length, largest is sqrt(3)*nyquist/box_length.
    const double kmin = 1.0 / g.box_length;
    const double kmax = std::sqrt(3.0) * g.nyquist() / g.box_length;
    // P_k touches |xi| in (2^(k-1), 2^(k+1)).
    const int lo = static_cast<int>(std::floor(std::log2(kmin))) - 1;
    const int hi = static_cast<int>(std::ceil(std::log2(kmax))) + 1;
    return {lo, hi};
}

int spatial_scale_limit(const Grid3& g) {
    const double rmax = std::sqrt(3.0) * g.side() / 2.0;
    return static_cast<int>(std::ceil(std::log2(rmax)));
}

SpectralField localized_shell_project(const SpectralField& f, int j, int k) {
    if (j < 0 || k + j < 0)
        throw Error("localized_shell_project: index (k,j) requires j >= 0 and k + j >= 0");

    SpectralField shell = shell_project(f, k);
    std::vector<Complex> phys = transform_inverse(shell);

    const Grid3& g = f.grid;
    auto weight = [&](double r) -> double {
        if (k + j == 0 && k <= 0) return radial_cutoff(r / ldexp2(-k));
        if (j == 0 && k >= 0) return radial_cutoff(r);
        return shell_profile(r, j);
    };
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double x1 = g.centered_coordinate(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double x2 = g.centered_coordinate(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double x3 = g.centered_coordinate(i3);
                const double r = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
                phys[g.flat_index(i1, i2, i3)] *= weight(r);
            }
        }
    }
    return transform_forward(std::span<const Complex>(phys), g);
}

}  // namespace hlc
