#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace hlc {

inline constexpr double pi = 3.14159265358979323846;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform periodic grid on a cube of side 2*pi*box_length with n points per
/// axis.  Wave vectors are integer multiples of 1/box_length, stored in
/// standard FFT ordering (0, 1, ..., n/2-1, -n/2, ..., -1).
struct Grid3 {
    int n = 0;
    double box_length = 1.0;
    double dealias_fraction = 2.0 / 3.0;

    Grid3() = default;

    Grid3(int points_per_axis, double box_len, double dealias = 2.0 / 3.0)
        : n(points_per_axis), box_length(box_len), dealias_fraction(dealias) {
        if (n < 8 || n % 2 != 0)
            throw Error("grid: points_per_axis must be even and >= 8, got " + std::to_string(n));
        if (!(box_length > 0.0))
            throw Error("grid: box_length must be positive");
        if (!(dealias_fraction > 0.0) || dealias_fraction > 1.0)
            throw Error("grid: dealias_fraction must lie in (0,1]");
    }

    std::size_t size() const { return static_cast<std::size_t>(n) * n * n; }

    double side() const { return 2.0 * pi * box_length; }
    double volume() const { return side() * side() * side(); }
    double spacing() const { return side() / n; }

    /// Signed integer mode for a coefficient index along one axis.
    /// The Nyquist index n/2 maps to -n/2.
    int mode(int index) const { return index <= n / 2 - 1 ? index : index - n; }

    double wavenumber(int index) const { return mode(index) / box_length; }

    /// Physical coordinate of a sample index, in [0, side).
    double coordinate(int index) const { return spacing() * index; }

    /// Coordinate wrapped to the origin-centered fundamental cell (-side/2, side/2].
    double centered_coordinate(int index) const {
        double x = coordinate(index);
        return x > side() / 2.0 ? x - side() : x;
    }

    int nyquist() const { return n / 2; }

    /// Largest |mode| kept by the dealias rule (per axis).  For the 2/3 rule
    /// the band is shrunk so that no product of two retained modes can fold
    /// back into the retained band (3*lim <= n-1), keeping quadratic
    /// nonlinearities exactly alias-free.
    int dealias_limit() const {
        int lim = static_cast<int>(std::floor(dealias_fraction * nyquist() + 1e-9));
        if (lim >= nyquist()) lim = nyquist() - 1;
        if (dealias_fraction <= 2.0 / 3.0 + 1e-12 && 3 * lim >= n) --lim;
        return lim;
    }

    std::size_t flat_index(int i1, int i2, int i3) const {
        return (static_cast<std::size_t>(i1) * n + i2) * n + i3;
    }

    bool operator==(const Grid3& o) const {
        return n == o.n && box_length == o.box_length && dealias_fraction == o.dealias_fraction;
    }
};

}  // namespace hlc
