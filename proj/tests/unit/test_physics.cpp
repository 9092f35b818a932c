#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperlc/physics.hpp"

using namespace hlc;

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (double(rng() >> 11) / 9007199254740992.0);
}

// Band-limited random real scalar field normalized to sup amplitude `amp`.
SpectralField band_scalar(const Grid3& g, std::mt19937_64& rng, int kmax, double amp) {
    SpectralField f(g);
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const int m1 = g.mode(i1), m2 = g.mode(i2), m3 = g.mode(i3);
                if (std::abs(m1) > kmax || std::abs(m2) > kmax || std::abs(m3) > kmax) continue;
                if (m1 == 0 && m2 == 0 && m3 == 0) continue;
                f(i1, i2, i3) = Complex(uniform(rng, -1, 1), uniform(rng, -1, 1));
            }
    SpectralField s(g);
    for (int i1 = 0; i1 < g.n; ++i1)
        for (int i2 = 0; i2 < g.n; ++i2)
            for (int i3 = 0; i3 < g.n; ++i3) {
                const int j1 = (g.n - i1) % g.n, j2 = (g.n - i2) % g.n, j3 = (g.n - i3) % g.n;
                s(i1, i2, i3) = 0.5 * (f(i1, i2, i3) + std::conj(f(j1, j2, j3)));
            }
    const double sup = sup_norm(s);
    if (sup > 0.0) s *= amp / sup;
    return s;
}

AngleState band_angles(const Grid3& g, std::mt19937_64& rng, int kmax, double amp) {
    AngleState a;
    a.phi1 = band_scalar(g, rng, kmax, amp);
    a.phi2 = band_scalar(g, rng, kmax, amp);
    a.dphi1 = band_scalar(g, rng, kmax, amp);
    a.dphi2 = band_scalar(g, rng, kmax, amp);
    return a;
}

VectorField3 band_divfree(const Grid3& g, std::mt19937_64& rng, int kmax, double amp) {
    VectorField3 u(g);
    for (int i = 0; i < 3; ++i) u[i] = band_scalar(g, rng, kmax, amp);
    u = leray_project(u);
    double sup = 0.0;
    for (int i = 0; i < 3; ++i) {
        u[i].coeff[0] = Complex(0.0, 0.0);
        sup = std::max(sup, sup_norm(u[i]));
    }
    if (sup > 0.0)
        for (int i = 0; i < 3; ++i) u[i] *= amp / sup;
    return u;
}

double rel_l2_diff(const VectorField3& a, const VectorField3& b) {
    double num = 0.0, den = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double d = l2_norm(a[i] - b[i]);
        const double n = l2_norm(b[i]);
        num += d * d;
        den += n * n;
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

TEST_SUITE("physics") {

TEST_CASE("chart maps") {
    Grid3 g(16, 1.0);
    std::mt19937_64 rng(2);

    SUBCASE("zero angles give the equilibrium direction") {
        AngleState a;
        a.phi1 = SpectralField(g);
        a.phi2 = SpectralField(g);
        a.dphi1 = SpectralField(g);
        a.dphi2 = SpectralField(g);
        DirectorState d = angles_to_director(a);
        auto d1 = transform_inverse_real(d.d[0]);
        auto d2 = transform_inverse_real(d.d[1]);
        auto d3 = transform_inverse_real(d.d[2]);
        for (std::size_t i = 0; i < d1.size(); i += 97) {
            CHECK(d1[i] == doctest::Approx(1.0).epsilon(1e-14));
            CHECK(std::abs(d2[i]) < 1e-14);
            CHECK(std::abs(d3[i]) < 1e-14);
        }
    }

    SUBCASE("constant first angle pi/2 points along e2") {
        AngleState a;
        a.phi1 = SpectralField(g);
        a.phi1.coeff[0] = Complex(pi / 2.0, 0.0);
        a.phi2 = SpectralField(g);
        a.dphi1 = SpectralField(g);
        a.dphi2 = SpectralField(g);
        DirectorState d = angles_to_director(a);
        auto d1 = transform_inverse_real(d.d[0]);
        auto d2 = transform_inverse_real(d.d[1]);
        CHECK(std::abs(d1[5]) < 1e-14);
        CHECK(d2[5] == doctest::Approx(1.0).epsilon(1e-14));
    }

    SUBCASE("director components for a planar direction") {
        // d = (0.6, 0.8, 0): phi1 = atan2(0.8, 0.6), phi2 = 0.
        DirectorState s;
        s.d = VectorField3(g);
        s.dt_d = VectorField3(g);
        s.d[0].coeff[0] = Complex(0.6, 0.0);
        s.d[1].coeff[0] = Complex(0.8, 0.0);
        AngleState a = director_to_angles(s);
        auto p1 = transform_inverse_real(a.phi1);
        auto p2 = transform_inverse_real(a.phi2);
        CHECK(p1[0] == doctest::Approx(std::atan2(0.8, 0.6)).epsilon(1e-14));
        CHECK(std::abs(p2[0]) < 1e-14);
    }

    SUBCASE("roundtrip is the identity on valid states") {
        AngleState a = band_angles(g, rng, 2, 0.3);
        DirectorState d = angles_to_director(a);
        AngleState back = director_to_angles(d);
        for (const auto* pair : {&a.phi1, &a.phi2, &a.dphi1, &a.dphi2}) (void)pair;
        CHECK(l2_norm(back.phi1 - a.phi1) < 1e-12);
        CHECK(l2_norm(back.phi2 - a.phi2) < 1e-12);
        CHECK(l2_norm(back.dphi1 - a.dphi1) < 1e-12);
        CHECK(l2_norm(back.dphi2 - a.dphi2) < 1e-12);
    }

    SUBCASE("unit length and tangency hold at collocation points") {
        AngleState a = band_angles(g, rng, 2, 0.4);
        DirectorState d = angles_to_director(a);
        auto d1 = transform_inverse_real(d.d[0]);
        auto d2 = transform_inverse_real(d.d[1]);
        auto d3 = transform_inverse_real(d.d[2]);
        auto t1 = transform_inverse_real(d.dt_d[0]);
        auto t2 = transform_inverse_real(d.dt_d[1]);
        auto t3 = transform_inverse_real(d.dt_d[2]);
        double unit = 0.0, tang = 0.0;
        for (std::size_t i = 0; i < d1.size(); ++i) {
            unit = std::max(unit, std::abs(d1[i] * d1[i] + d2[i] * d2[i] + d3[i] * d3[i] - 1.0));
            tang = std::max(tang, std::abs(d1[i] * t1[i] + d2[i] * t2[i] + d3[i] * t3[i]));
        }
        CHECK(unit < 5e-15);
        CHECK(tang < 1e-13);
    }

    SUBCASE("phi2 margin violation is reported") {
        AngleState a;
        a.phi1 = SpectralField(g);
        a.phi2 = SpectralField(g);
        a.phi2.coeff[0] = Complex(pi / 2.0 - 0.1, 0.0);  // inside pi/2 but outside margin
        a.dphi1 = SpectralField(g);
        a.dphi2 = SpectralField(g);
        CHECK_THROWS_AS(angles_to_director(a), Error);
    }

    SUBCASE("chart violation d1 <= 0 is reported") {
        DirectorState s;
        s.d = VectorField3(g);
        s.dt_d = VectorField3(g);
        s.d[0].coeff[0] = Complex(-1.0, 0.0);
        CHECK_THROWS_AS(director_to_angles(s), Error);
    }
}

TEST_CASE("strain tensors") {
    Grid3 g(16, 1.0);

    SUBCASE("shear flow u = (sin x2, 0, 0)") {
        VectorField3 u(g);
        u[0](0, 1, 0) = Complex(0.0, -0.5);  // sin(x2)
        u[0](0, g.n - 1, 0) = Complex(0.0, 0.5);
        StrainTensors s = strain_tensors(u);
        auto a12 = transform_inverse_real(s.a(0, 1));
        auto b12 = transform_inverse_real(s.antisym[0]);
        double err = 0.0;
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double expected = 0.5 * std::cos(g.coordinate(i2));
            err = std::max(err, std::abs(a12[g.flat_index(3, i2, 7)] - expected));
            // B[0] holds B_12 = (d_2 u_1 - d_1 u_2)/2 = cos(x2)/2.
            err = std::max(err, std::abs(b12[g.flat_index(3, i2, 7)] - expected));
        }
        CHECK(err < 1e-13);
    }

    SUBCASE("trace of A equals div u (zero for projected fields)") {
        std::mt19937_64 rng(5);
        VectorField3 u = band_divfree(g, rng, 4, 1.0);
        StrainTensors s = strain_tensors(u);
        SpectralField tr = s.a(0, 0) + s.a(1, 1) + s.a(2, 2);
        CHECK(sup_norm(tr) < 1e-12);
    }

    SUBCASE("band-limited rigid-rotation-like field has no symmetric part") {
        // u = (x2-free) rotation approximation: use a solid rotation around
        // x3 restricted to the lowest mode pair via sin expansions is not
        // exactly rigid; instead verify the antisymmetric generator directly:
        // u = (sin x2, -sin x1, 0) has A12 = (cos x2 - cos x1)/2 ... so use
        // u = (sin x2, sin x1, 0): A12 = (cos x2 + cos x1)/2, B12 = (cos x2 - cos x1)/2.
        VectorField3 u(g);
        u[0](0, 1, 0) = Complex(0.0, -0.5);
        u[0](0, g.n - 1, 0) = Complex(0.0, 0.5);
        u[1](1, 0, 0) = Complex(0.0, -0.5);
        u[1](g.n - 1, 0, 0) = Complex(0.0, 0.5);
        StrainTensors s = strain_tensors(u);
        auto a12 = transform_inverse_real(s.a(0, 1));
        auto b12 = transform_inverse_real(s.antisym[0]);
        double err = 0.0;
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i2 = 0; i2 < g.n; ++i2) {
                const double c1 = std::cos(g.coordinate(i1)), c2 = std::cos(g.coordinate(i2));
                err = std::max(err, std::abs(a12[g.flat_index(i1, i2, 0)] - 0.5 * (c1 + c2)));
                err = std::max(err, std::abs(b12[g.flat_index(i1, i2, 0)] - 0.5 * (c2 - c1)));
            }
        CHECK(err < 1e-13);
    }
}

TEST_CASE("stress tensor") {
    Grid3 g(16, 1.0);
    Coefficients c(1.3, 2.0, 0.7);
    std::mt19937_64 rng(8);

    SUBCASE("zero velocity gives zero stress") {
        VectorField3 u(g);
        StrainTensors s = strain_tensors(u);
        DirectorState d;
        d.d = VectorField3(g);
        d.d[0].coeff[0] = Complex(1.0, 0.0);
        d.dt_d = VectorField3(g);
        Matrix3Field sigma = stress_tensor(c, d.d, s);
        double m = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m = std::max(m, l2_norm(sigma.m[j][i]));
        CHECK(m == 0.0);
    }

    SUBCASE("equilibrium direction reduces to the displayed linear form") {
        VectorField3 u = band_divfree(g, rng, 3, 1.0);
        StrainTensors s = strain_tensors(u);
        VectorField3 de1(g);
        de1[0].coeff[0] = Complex(1.0, 0.0);
        Matrix3Field sigma = stress_tensor(c, de1, s);
        // sigma_ji = nu1 A11 delta_i1 delta_j1 + nu5 (delta_j1 A_1i + delta_i1 A_1j)
        CHECK(l2_norm(sigma.m[0][0] - ((c.nu1() + 2.0 * c.nu5()) * s.a(0, 0))) < 1e-12);
        CHECK(l2_norm(sigma.m[0][1] - (c.nu5() * s.a(0, 1))) < 1e-12);
        CHECK(l2_norm(sigma.m[2][0] - (c.nu5() * s.a(0, 2))) < 1e-12);
        CHECK(l2_norm(sigma.m[1][2]) < 1e-13);
    }

    SUBCASE("stress is symmetric for this coefficient specialization") {
        std::mt19937_64 rng2(9);
        AngleState a = band_angles(g, rng2, 2, 0.1);
        DirectorState d = angles_to_director(a);
        VectorField3 u = band_divfree(g, rng2, 2, 1.0);
        Matrix3Field sigma = stress_tensor(c, d.d, strain_tensors(u));
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                CHECK(l2_norm(sigma.m[j][i] - sigma.m[i][j]) < 1e-12);
    }

    SUBCASE("divergence of the assembled tensor equals the product-rule assembly") {
        // Narrow band so every product in either route stays resolved.
        Grid3 g32(32, 1.0);
        std::mt19937_64 rng3(10);
        AngleState a = band_angles(g32, rng3, 1, 0.01);
        DirectorState d = angles_to_director(a);
        VectorField3 u = band_divfree(g32, rng3, 1, 0.1);
        StrainTensors strain = strain_tensors(u);

        VectorField3 route1 = tensor_divergence(stress_tensor(c, d.d, strain));

        // Product rule: d_j sigma_ji assembled pointwise from spectral
        // derivatives of the individual factors.
        const std::size_t npts = g32.size();
        std::vector<double> dp[3], gd[3][3], ap[3][3], gap[3][3][3];
        for (int i = 0; i < 3; ++i) {
            dp[i] = transform_inverse_real(d.d[i]);
            for (int j = 0; j < 3; ++j)
                gd[j][i] = transform_inverse_real(differentiate(d.d[i], j + 1));
        }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                ap[i][j] = transform_inverse_real(strain.a(i, j));
                for (int l = 0; l < 3; ++l)
                    gap[l][i][j] = transform_inverse_real(differentiate(strain.a(i, j), l + 1));
            }

        VectorField3 route2(g32);
        std::vector<double> buf(npts);
        for (int i = 0; i < 3; ++i) {
            for (std::size_t n = 0; n < npts; ++n) {
                double scal = 0.0;  // d.A d
                double w[3];        // (A d)
                for (int k = 0; k < 3; ++k) {
                    w[k] = ap[k][0][n] * dp[0][n] + ap[k][1][n] * dp[1][n] +
                           ap[k][2][n] * dp[2][n];
                    scal += dp[k][n] * w[k];
                }
                double acc = 0.0;
                for (int j = 0; j < 3; ++j) {
                    double dscal = 0.0, dw_i = 0.0, dw_j = 0.0;
                    for (int k = 0; k < 3; ++k) {
                        dw_i += gap[j][i][k][n] * dp[k][n] + ap[i][k][n] * gd[j][k][n];
                        dw_j += gap[j][j][k][n] * dp[k][n] + ap[j][k][n] * gd[j][k][n];
                        for (int p = 0; p < 3; ++p)
                            dscal += gd[j][k][n] * ap[k][p][n] * dp[p][n] +
                                     dp[k][n] * gap[j][k][p][n] * dp[p][n] +
                                     dp[k][n] * ap[k][p][n] * gd[j][p][n];
                    }
                    acc += c.nu1() * (dscal * dp[i][n] * dp[j][n] +
                                      scal * gd[j][i][n] * dp[j][n] +
                                      scal * dp[i][n] * gd[j][j][n]);
                    acc += c.nu5() * (gd[j][j][n] * w[i] + dp[j][n] * dw_i +
                                      gd[j][i][n] * w[j] + dp[i][n] * dw_j);
                }
                buf[n] = acc;
            }
            route2[i] = transform_forward(std::span<const double>(buf), g32);
            dealias(route2[i]);
        }

        double num = 0.0, den = 0.0;
        for (int i = 0; i < 3; ++i) {
            num += std::pow(l2_norm(route1[i] - route2[i]), 2);
            den += std::pow(l2_norm(route1[i]), 2);
        }
        CHECK(std::sqrt(num / den) < 1e-8);
    }
}

TEST_CASE("constraint multiplier") {
    Grid3 g(16, 1.0);
    std::mt19937_64 rng(12);

    SUBCASE("static uniform director gives zero") {
        DirectorState s;
        s.d = VectorField3(g);
        s.d[0].coeff[0] = Complex(1.0, 0.0);
        s.dt_d = VectorField3(g);
        VectorField3 u(g);
        SpectralField gamma = lagrange_multiplier_field(s, u);
        CHECK(sup_norm(gamma) < 1e-14);
    }

    SUBCASE("static spatial director gives the gradient energy density") {
        AngleState a = band_angles(g, rng, 2, 0.2);
        a.dphi1 = SpectralField(g);
        a.dphi2 = SpectralField(g);
        DirectorState s = angles_to_director(a);
        VectorField3 u(g);
        SpectralField gamma = lagrange_multiplier_field(s, u);
        // Independent evaluation of |grad d|^2.
        SpectralField ref(g);
        {
            std::vector<double> acc(g.size(), 0.0);
            for (int i = 0; i < 3; ++i)
                for (int axis = 1; axis <= 3; ++axis) {
                    auto dd = transform_inverse_real(differentiate(s.d[i], axis));
                    for (std::size_t p = 0; p < acc.size(); ++p) acc[p] += dd[p] * dd[p];
                }
            ref = transform_forward(std::span<const double>(acc), g);
            dealias(ref);
        }
        CHECK(l2_norm(gamma - ref) < 1e-12);
    }

    SUBCASE("tangency of the constrained flow for static states") {
        // Larger grid: the chart composition's quartic content must clear
        // the Nyquist mode for the pointwise identity to hold.
        Grid3 g32(32, 1.0);
        AngleState a = band_angles(g32, rng, 2, 0.05);
        a.dphi1 = SpectralField(g32);
        a.dphi2 = SpectralField(g32);
        DirectorState s = angles_to_director(a);
        VectorField3 u(g32);
        SpectralField gamma = lagrange_multiplier_field(s, u);
        auto gphys = transform_inverse_real(gamma);
        std::vector<double> dphys[3], lphys[3];
        for (int i = 0; i < 3; ++i) {
            dphys[i] = transform_inverse_real(s.d[i]);
            SpectralField lap = differentiate(s.d[i], 1, 2);
            lap += differentiate(s.d[i], 2, 2);
            lap += differentiate(s.d[i], 3, 2);
            lphys[i] = transform_inverse_real(lap);
        }
        double worst = 0.0;
        for (std::size_t p = 0; p < gphys.size(); ++p) {
            double dot = 0.0;
            for (int i = 0; i < 3; ++i) dot += dphys[i][p] * (lphys[i][p] + gphys[p] * dphys[i][p]);
            worst = std::max(worst, std::abs(dot));
        }
        CHECK(worst < 1e-8);
    }
}

TEST_CASE("director system right-hand side") {
    Grid3 g(16, 1.0);
    Coefficients c(1.0, 2.0, 1.0);

    SUBCASE("equilibrium is a fixed point") {
        DirectorState s;
        s.d = VectorField3(g);
        s.d[0].coeff[0] = Complex(1.0, 0.0);
        s.dt_d = VectorField3(g);
        VectorField3 u(g);
        DirectorRhs rhs = director_rhs(c, s, u);
        CHECK(l2_norm(rhs.du_dt) < 1e-14);
        CHECK(l2_norm(rhs.ddtd_dt) < 1e-14);
    }

    SUBCASE("at rest the director tendency collapses to lap d + |grad d|^2 d") {
        // One-dimensional profiles: the elastic stress divergence is then a
        // pure gradient, the projected acceleration vanishes, and the
        // tendency of dt_d is exactly lap d + Gamma d.
        Grid3 g32(32, 1.0);
        std::mt19937_64 rng(14);
        AngleState a;
        auto profile_1d = [&](double amp) {
            SpectralField f(g32);
            for (int m = 1; m <= 2; ++m) {
                const Complex cvar(uniform(rng, -1, 1), uniform(rng, -1, 1));
                f(m, 0, 0) = cvar;
                f(g32.n - m, 0, 0) = std::conj(cvar);
            }
            const double sup = sup_norm(f);
            f *= amp / sup;
            return f;
        };
        a.phi1 = profile_1d(0.1);
        a.phi2 = profile_1d(0.1);
        a.dphi1 = SpectralField(g32);
        a.dphi2 = SpectralField(g32);
        DirectorState s = angles_to_director(a);
        VectorField3 u(g32);
        DirectorRhs rhs = director_rhs(c, s, u);
        CHECK(l2_norm(rhs.du_dt) < 1e-12);

        for (int i = 0; i < 3; ++i) {
            SpectralField lap = differentiate(s.d[i], 1, 2);
            lap += differentiate(s.d[i], 2, 2);
            lap += differentiate(s.d[i], 3, 2);
            SpectralField gd = dealias_product(lagrange_multiplier_field(s, u), s.d[i]);
            CHECK(l2_norm(rhs.ddtd_dt[i] - (lap + gd)) < 1e-10);
        }
    }

    SUBCASE("linearization about equilibrium matches the projected viscous symbol") {
        std::mt19937_64 rng(15);
        const double h = 1e-6;
        VectorField3 u = band_divfree(g, rng, 2, h);
        AngleState a = band_angles(g, rng, 2, h);
        DirectorState s = angles_to_director(a);
        DirectorRhs rhs = director_rhs(c, s, u);

        // Expected linear part: -(projected viscous symbol) u, mode by mode.
        VectorField3 expected(g);
        for (int i1 = 0; i1 < g.n; ++i1)
            for (int i2 = 0; i2 < g.n; ++i2)
                for (int i3 = 0; i3 < g.n; ++i3) {
                    const Vec3 xi{g.wavenumber(i1), g.wavenumber(i2), g.wavenumber(i3)};
                    const Mat3 lb = projected_viscous_symbol(c, xi);
                    for (int i = 0; i < 3; ++i) {
                        Complex acc(0.0, 0.0);
                        for (int j = 0; j < 3; ++j) acc += lb[i][j] * u[j](i1, i2, i3);
                        expected[i](i1, i2, i3) = -acc;
                    }
                }
        CHECK(rel_l2_diff(rhs.du_dt, expected) < 1e-4);

        // Wave part: the tendency of dt_d linearizes to lap d.
        VectorField3 lap(g);
        for (int i = 0; i < 3; ++i) {
            lap[i] = differentiate(s.d[i], 1, 2);
            lap[i] += differentiate(s.d[i], 2, 2);
            lap[i] += differentiate(s.d[i], 3, 2);
        }
        double num = 0.0, den = 0.0;
        for (int i = 0; i < 3; ++i) {
            num += std::pow(l2_norm(rhs.ddtd_dt[i] - lap[i]), 2);
            den += std::pow(l2_norm(lap[i]), 2);
        }
        CHECK(std::sqrt(num / den) < 1e-4);
    }
}

TEST_CASE("angle-system nonlinearities vanish appropriately") {
    Grid3 g(16, 1.0);
    Coefficients c(1.0, 2.0, 1.0);
    std::mt19937_64 rng(21);

    AngleState zero_a;
    zero_a.phi1 = SpectralField(g);
    zero_a.phi2 = SpectralField(g);
    zero_a.dphi1 = SpectralField(g);
    zero_a.dphi2 = SpectralField(g);

    SUBCASE("coupling vanishes with zero angles or zero velocity") {
        VectorField3 u = band_divfree(g, rng, 2, 1.0);
        CHECK(l2_norm(stress_angle_coupling(c, zero_a, u)) < 1e-14);
        AngleState a = band_angles(g, rng, 2, 0.1);
        VectorField3 zu(g);
        CHECK(l2_norm(stress_angle_coupling(c, a, zu)) < 1e-14);
    }

    SUBCASE("stress remainder vanishes at zero angles") {
        VectorField3 u = band_divfree(g, rng, 2, 1.0);
        StrainTensors s = strain_tensors(u);
        CHECK(l2_norm(stress_taylor_remainder(c, zero_a, s)) < 1e-14);
    }

    SUBCASE("metric correction vanishes for zero phi2 or constant phi1") {
        AngleState a = band_angles(g, rng, 2, 0.1);
        a.phi2 = SpectralField(g);
        CHECK(l2_norm(metric_correction_term(a)) < 1e-14);
        AngleState b = band_angles(g, rng, 2, 0.1);
        b.phi1 = SpectralField(g);
        b.phi1.coeff[0] = Complex(0.3, 0.0);
        CHECK(l2_norm(metric_correction_term(b)) < 1e-14);
    }

    SUBCASE("curvature source vanishes for zero phi2") {
        AngleState a = band_angles(g, rng, 2, 0.1);
        a.phi2 = SpectralField(g);
        VectorField3 u = band_divfree(g, rng, 2, 0.5);
        auto [first, second] = wave_curvature_source(a, u);
        CHECK(l2_norm(first) < 1e-14);
        CHECK(l2_norm(second) < 1e-14);
    }

    SUBCASE("curvature first component for static angles without flow") {
        AngleState a = band_angles(g, rng, 2, 0.05);
        a.dphi1 = SpectralField(g);
        a.dphi2 = SpectralField(g);
        VectorField3 u(g);
        auto [first, second] = wave_curvature_source(a, u);
        // Expected: -2 tan(phi2) grad(phi1).grad(phi2), assembled independently.
        std::vector<double> expect(g.size(), 0.0);
        auto p2 = transform_inverse_real(a.phi2);
        for (int axis = 1; axis <= 3; ++axis) {
            auto g1 = transform_inverse_real(differentiate(a.phi1, axis));
            auto g2 = transform_inverse_real(differentiate(a.phi2, axis));
            for (std::size_t p = 0; p < expect.size(); ++p) expect[p] += g1[p] * g2[p];
        }
        for (std::size_t p = 0; p < expect.size(); ++p)
            expect[p] *= -2.0 * std::tan(p2[p]);
        SpectralField ref = transform_forward(std::span<const double>(expect), g);
        dealias(ref);
        CHECK(l2_norm(first - ref) < 1e-12);
        (void)second;
    }
}

TEST_CASE("stress remainder quadrature and scaling") {
    Grid3 g(16, 1.0);
    Coefficients c(1.0, 2.0, 1.0);
    std::mt19937_64 rng(33);
    VectorField3 u = band_divfree(g, rng, 2, 1.0);
    StrainTensors s = strain_tensors(u);
    AngleState a = band_angles(g, rng, 2, 0.1);

    SUBCASE("8 versus 16 quadrature nodes") {
        VectorField3 r8 = stress_taylor_remainder(c, a, s, 8);
        VectorField3 r16 = stress_taylor_remainder(c, a, s, 16);
        CHECK(l2_norm(r8 - r16) < 1e-12 * std::max(1.0, l2_norm(r16)));
    }

    SUBCASE("quadratic smallness in the angle amplitude") {
        AngleState small = band_angles(g, rng, 2, 0.05);
        AngleState half = small;
        half.phi1 *= 0.5;
        half.phi2 *= 0.5;
        half.dphi1 *= 0.5;
        half.dphi2 *= 0.5;
        const double n_full = l2_norm(stress_taylor_remainder(c, small, s));
        const double n_half = l2_norm(stress_taylor_remainder(c, half, s));
        CHECK(n_full / n_half == doctest::Approx(4.0).epsilon(0.05));
    }
}

TEST_CASE("every nonlinear source is at least quadratic near equilibrium") {
    Grid3 g(16, 1.0);
    Coefficients c(1.0, 2.0, 1.0);
    std::mt19937_64 rng(35);

    auto source_norm = [&](double amp) {
        std::mt19937_64 local(77);  // same draw, scaled amplitude
        AngleState a = band_angles(g, local, 2, amp);
        VectorField3 u = band_divfree(g, local, 2, amp);
        FlowState flow;
        flow.v = apply_diagonalizer(u);
        AngleSystemRhs rhs = angle_system_rhs(c, a, flow);
        double n = l2_norm(rhs.v_nonlinear);
        n += l2_norm(rhs.wave_source1) + l2_norm(rhs.wave_source2);
        return n;
    };
    const double n1 = source_norm(2e-3);
    const double n2 = source_norm(1e-3);
    CHECK(n1 / n2 >= 3.9);
    (void)rng;
}

TEST_CASE("angle system right-hand side") {
    Grid3 g(16, 1.0);
    Coefficients c(1.0, 2.0, 1.0);

    SUBCASE("equilibrium gives zero tendencies") {
        FlowState flow;
        flow.v = VectorField3(g);
        AngleState a;
        a.phi1 = SpectralField(g);
        a.phi2 = SpectralField(g);
        a.dphi1 = SpectralField(g);
        a.dphi2 = SpectralField(g);
        AngleSystemRhs rhs = angle_system_rhs(c, a, flow);
        CHECK(l2_norm(rhs.du_dt) < 1e-14);
        CHECK(l2_norm(rhs.wave_source1) < 1e-14);
        CHECK(l2_norm(rhs.wave_source2) < 1e-14);
    }

    SUBCASE("linear regime: nonlinear sources are quadratically small") {
        std::mt19937_64 rng(37);
        const double h = 1e-6;
        AngleState a = band_angles(g, rng, 2, h);
        VectorField3 u = band_divfree(g, rng, 2, h);
        FlowState flow;
        flow.v = apply_diagonalizer(u);
        AngleSystemRhs rhs = angle_system_rhs(c, a, flow);
        CHECK(l2_norm(rhs.v_nonlinear) < 1e-4 * l2_norm(rhs.v_linear));
        const double wave_scale = l2_norm(a.dphi1) + l2_norm(a.dphi2);
        CHECK(l2_norm(rhs.wave_source1) + l2_norm(rhs.wave_source2) < 1e-4 * wave_scale);
    }
}

TEST_CASE("formulation equivalence of the two right-hand sides") {
    // The angle-system tendencies must equal the chart pullback of the
    // director-system tendencies.  With band-limited data every product up
    // to quartic order stays inside the dealiased band, so the two
    // assemblies agree to roundoff; tested at three amplitudes.
    Grid3 g(32, 1.0);
    Coefficients c(1.0, 2.0, 1.0);

    for (double amp : {1e-4, 1e-3, 1e-2}) {
        CAPTURE(amp);
        std::mt19937_64 rng(41);
        AngleState a = band_angles(g, rng, 2, amp);
        VectorField3 u = band_divfree(g, rng, 2, amp);
        FlowState flow;
        flow.v = apply_diagonalizer(u);

        AngleSystemRhs rhs_a = angle_system_rhs(c, a, flow);

        DirectorState s = angles_to_director(a);
        DirectorRhs rhs_d = director_rhs(c, s, u);

        // Velocity tendencies agree directly.
        const double vel_diff = rel_l2_diff(rhs_a.du_dt, rhs_d.du_dt);
        CHECK(vel_diff < 1e-8);

        // Wave part: pull the director tendency back through the chart and
        // compare with lap(phi) + source.
        auto d1 = transform_inverse_real(s.d[0]);
        auto d2 = transform_inverse_real(s.d[1]);
        auto d3 = transform_inverse_real(s.d[2]);
        auto q1 = transform_inverse_real(s.dt_d[0]);
        auto q2 = transform_inverse_real(s.dt_d[1]);
        auto q3 = transform_inverse_real(s.dt_d[2]);
        auto w1 = transform_inverse_real(rhs_d.ddtd_dt[0]);
        auto w2 = transform_inverse_real(rhs_d.ddtd_dt[1]);
        auto w3 = transform_inverse_real(rhs_d.ddtd_dt[2]);

        std::vector<double> ptt1(g.size()), ptt2(g.size());
        for (std::size_t p = 0; p < ptt1.size(); ++p) {
            const double rho2 = d1[p] * d1[p] + d2[p] * d2[p];
            const double numdot = d1[p] * q2[p] - d2[p] * q1[p];
            ptt1[p] = (d1[p] * w2[p] - d2[p] * w1[p]) / rho2 -
                      numdot * 2.0 * (d1[p] * q1[p] + d2[p] * q2[p]) / (rho2 * rho2);
            const double cos2 = std::sqrt(1.0 - d3[p] * d3[p]);
            ptt2[p] = w3[p] / cos2 + d3[p] * q3[p] * q3[p] / (cos2 * cos2 * cos2);
        }

        auto check_wave = [&](const SpectralField& phi, const SpectralField& src,
                              const std::vector<double>& ptt) {
            SpectralField lap = differentiate(phi, 1, 2);
            lap += differentiate(phi, 2, 2);
            lap += differentiate(phi, 3, 2);
            auto expect = transform_inverse_real(lap + src);
            double num = 0.0, den = 0.0;
            for (std::size_t p = 0; p < expect.size(); ++p) {
                num += (expect[p] - ptt[p]) * (expect[p] - ptt[p]);
                den += expect[p] * expect[p];
            }
            return std::sqrt(num / std::max(den, 1e-300));
        };
        CHECK(check_wave(a.phi1, rhs_a.wave_source1, ptt1) < 1e-8);
        CHECK(check_wave(a.phi2, rhs_a.wave_source2, ptt2) < 1e-8);
    }
}

}  // TEST_SUITE
