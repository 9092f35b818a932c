#include "hyperlc/physics.hpp"

#include <algorithm>
#include <cmath>

namespace hlc {

namespace {

using Real = std::vector<double>;

Real phys(const SpectralField& f) { return transform_inverse_real(f); }

Real phys_derivative(const SpectralField& f, int axis) {
    return transform_inverse_real(differentiate(f, axis));
}

SpectralField spec(const Real& p, const Grid3& g, bool do_dealias = true) {
    SpectralField f = transform_forward(std::span<const double>(p), g);
    if (do_dealias) dealias(f);
    return f;
}

// Gauss-Legendre nodes and weights on [0,1].
struct Quadrature {
    std::vector<double> node, weight;
};

Quadrature gauss_legendre_unit(int n) {
    if (n < 1 || n > 64) throw Error("quadrature: node count must be 1..64");
    Quadrature q;
    q.node.resize(n);
    q.weight.resize(n);
    for (int i = 0; i < n; ++i) {
        // Newton iteration on P_n from the Chebyshev initial guess.
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        q.node[i] = 0.5 * (1.0 - x);  // map from (-1,1), reversed order is harmless
        q.weight[i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
    return q;
}

double sup_abs(const Real& p) {
    double m = 0.0;
    for (double v : p) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

// ---- normalized wave conversions ---------------------------------------------

SpectralField normalized_wave_from_angles(const SpectralField& phi, const SpectralField& dphi) {
    const Grid3& g = phi.grid;
    if (!(g == dphi.grid)) throw Error("normalized wave: grid mismatch");
    SpectralField w(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                const double q = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
                if (q == 0.0) continue;  // mean mode excluded
                w(i1, i2, i3) = dphi(i1, i2, i3) + Complex(0.0, q) * phi(i1, i2, i3);
            }
        }
    }
    return w;
}

namespace {

template <bool Velocity>
SpectralField wave_component(const SpectralField& w, double mean) {
    const Grid3& g = w.grid;
    SpectralField out(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const int j1 = (g.n - i1) % g.n;
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const int j2 = (g.n - i2) % g.n;
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                const double q = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
                if (q == 0.0) {
                    out(i1, i2, i3) = Complex(mean, 0.0);
                    continue;
                }
                const int j3 = (g.n - i3) % g.n;
                const Complex mirror = std::conj(w(j1, j2, j3));
                if constexpr (Velocity)
                    out(i1, i2, i3) = 0.5 * (w(i1, i2, i3) + mirror);
                else
                    out(i1, i2, i3) = (w(i1, i2, i3) - mirror) / Complex(0.0, 2.0 * q);
            }
        }
    }
    return out;
}

}  // namespace

SpectralField angle_from_wave(const SpectralField& w, double mean_phi) {
    return wave_component<false>(w, mean_phi);
}

SpectralField angle_velocity_from_wave(const SpectralField& w, double mean_dphi) {
    return wave_component<true>(w, mean_dphi);
}

AngleState reconstruct_angles(const SimulationState& s) {
    AngleState a;
    a.phi1 = angle_from_wave(s.wave.w1, s.mean_phi[0]);
    a.phi2 = angle_from_wave(s.wave.w2, s.mean_phi[1]);
    a.dphi1 = angle_velocity_from_wave(s.wave.w1, s.mean_dphi[0]);
    a.dphi2 = angle_velocity_from_wave(s.wave.w2, s.mean_dphi[1]);
    return a;
}

// ---- strain -------------------------------------------------------------------

const SpectralField& StrainTensors::a(int i, int j) const {
    static constexpr int lut[3][3] = {{0, 1, 2}, {1, 3, 4}, {2, 4, 5}};
    return sym[lut[i][j]];
}

StrainTensors strain_tensors(const VectorField3& u) {
    std::array<std::array<SpectralField, 3>, 3> grad;  // grad[j][i] = d_j u_i
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) grad[j][i] = differentiate(u[i], j + 1);

    StrainTensors s;
    int si = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) s.sym[si++] = 0.5 * (grad[j][i] + grad[i][j]);
    int bi = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) s.antisym[bi++] = 0.5 * (grad[j][i] - grad[i][j]);
    return s;
}

// ---- chart maps -----------------------------------------------------------------

double phi2_sup(const AngleState& a) {
    Real p2 = phys(a.phi2);
    return sup_abs(p2);
}

DirectorState angles_to_director(const AngleState& a, double margin) {
    const Grid3& g = a.grid();
    Real p1 = phys(a.phi1), p2 = phys(a.phi2);
    Real q1 = phys(a.dphi1), q2 = phys(a.dphi2);

    const double limit = pi / 2.0 - margin;
    for (std::size_t i = 0; i < p2.size(); ++i) {
        if (std::abs(p2[i]) >= limit)
            throw Error("angle chart: |phi2| = " + std::to_string(std::abs(p2[i])) +
                        " at grid index " + std::to_string(i) + " exceeds pi/2 - margin");
    }

    const std::size_t npts = g.size();
    Real d1(npts), d2(npts), d3(npts), t1(npts), t2(npts), t3(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        const double c1 = std::cos(p1[i]), s1 = std::sin(p1[i]);
        const double c2 = std::cos(p2[i]), s2 = std::sin(p2[i]);
        d1[i] = c1 * c2;
        d2[i] = s1 * c2;
        d3[i] = s2;
        t1[i] = -s1 * c2 * q1[i] - c1 * s2 * q2[i];
        t2[i] = c1 * c2 * q1[i] - s1 * s2 * q2[i];
        t3[i] = c2 * q2[i];
    }

    DirectorState out;
    out.d = VectorField3(g);
    out.dt_d = VectorField3(g);
    out.d[0] = spec(d1, g, false);
    out.d[1] = spec(d2, g, false);
    out.d[2] = spec(d3, g, false);
    out.dt_d[0] = spec(t1, g, false);
    out.dt_d[1] = spec(t2, g, false);
    out.dt_d[2] = spec(t3, g, false);
    return out;
}

AngleState director_to_angles(const DirectorState& s) {
    const Grid3& g = s.grid();
    Real d1 = phys(s.d[0]), d2 = phys(s.d[1]), d3 = phys(s.d[2]);
    Real t1 = phys(s.dt_d[0]), t2 = phys(s.dt_d[1]), t3 = phys(s.dt_d[2]);

    const std::size_t npts = g.size();
    Real p1(npts), p2(npts), q1(npts), q2(npts);
    for (std::size_t i = 0; i < npts; ++i) {
        if (!(d1[i] > 0.0))
            throw Error("director chart: d1 <= 0 at grid index " + std::to_string(i));
        p1[i] = std::atan2(d2[i], d1[i]);
        p2[i] = std::asin(std::clamp(d3[i], -1.0, 1.0));
        const double planar2 = d1[i] * d1[i] + d2[i] * d2[i];
        q1[i] = (d1[i] * t2[i] - d2[i] * t1[i]) / planar2;
        q2[i] = t3[i] / std::sqrt(planar2);
    }

    AngleState out;
    out.phi1 = spec(p1, g, false);
    out.phi2 = spec(p2, g, false);
    out.dphi1 = spec(q1, g, false);
    out.dphi2 = spec(q2, g, false);
    return out;
}

// ---- director-system pieces -----------------------------------------------------

Matrix3Field stress_tensor(const Coefficients& c, const VectorField3& d,
                           const StrainTensors& strain) {
    const Grid3& g = d.grid();
    const std::size_t npts = g.size();

    Real dp[3] = {phys(d[0]), phys(d[1]), phys(d[2])};
    Real ap[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) ap[i][j] = phys(strain.a(i, j));

    auto aval = [&](int i, int j, std::size_t n) { return i <= j ? ap[i][j][n] : ap[j][i][n]; };

    Real comp[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) comp[j][i].resize(npts);

    for (std::size_t n = 0; n < npts; ++n) {
        const double dv[3] = {dp[0][n], dp[1][n], dp[2][n]};
        double w[3];  // (A d)_i
        for (int i = 0; i < 3; ++i)
            w[i] = aval(i, 0, n) * dv[0] + aval(i, 1, n) * dv[1] + aval(i, 2, n) * dv[2];
        const double scal = dv[0] * w[0] + dv[1] * w[1] + dv[2] * w[2];  // d.A d
        for (int j = 0; j < 3; ++j)
            for (int i = j; i < 3; ++i)
                comp[j][i][n] =
                    c.nu1() * scal * dv[i] * dv[j] + c.nu5() * (dv[j] * w[i] + dv[i] * w[j]);
    }

    // Symmetric under i <-> j for this coefficient specialization.
    Matrix3Field sigma;
    for (int j = 0; j < 3; ++j)
        for (int i = j; i < 3; ++i) {
            sigma.m[j][i] = spec(comp[j][i], g);
            if (i != j) sigma.m[i][j] = sigma.m[j][i];
        }
    return sigma;
}

VectorField3 tensor_divergence(const Matrix3Field& sigma) {
    const Grid3& g = sigma.m[0][0].grid;
    VectorField3 out(g);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += differentiate(sigma.m[j][i], j + 1);
    return out;
}

SpectralField lagrange_multiplier_field(const DirectorState& s, const VectorField3& u) {
    const Grid3& g = s.grid();
    const std::size_t npts = g.size();

    Real up[3] = {phys(u[0]), phys(u[1]), phys(u[2])};
    Real tp[3] = {phys(s.dt_d[0]), phys(s.dt_d[1]), phys(s.dt_d[2])};
    Real gd[3][3];  // gd[k][i] = d_k d_i
    for (int k = 0; k < 3; ++k)
        for (int i = 0; i < 3; ++i) gd[k][i] = phys_derivative(s.d[i], k + 1);

    Real gamma(npts);
    for (std::size_t n = 0; n < npts; ++n) {
        double mat2 = 0.0, grad2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double mat =
                tp[i][n] + up[0][n] * gd[0][i][n] + up[1][n] * gd[1][i][n] + up[2][n] * gd[2][i][n];
            mat2 += mat * mat;
            for (int k = 0; k < 3; ++k) grad2 += gd[k][i][n] * gd[k][i][n];
        }
        gamma[n] = -mat2 + grad2;
    }
    return spec(gamma, g);
}

DirectorRhs director_rhs(const Coefficients& c, const DirectorState& s, const VectorField3& u) {
    const Grid3& g = s.grid();
    const std::size_t npts = g.size();

    Real up[3] = {phys(u[0]), phys(u[1]), phys(u[2])};
    Real gu[3][3];  // gu[j][i] = d_j u_i
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) gu[j][i] = phys_derivative(u[i], j + 1);

    // u . grad u
    VectorField3 advect(g);
    {
        Real adv(npts);
        for (int i = 0; i < 3; ++i) {
            for (std::size_t n = 0; n < npts; ++n)
                adv[n] = up[0][n] * gu[0][i][n] + up[1][n] * gu[1][i][n] + up[2][n] * gu[2][i][n];
            advect[i] = spec(adv, g);
        }
    }

    // Elastic stress divergence: (div(grad d (.) grad d))_i = d_j (d_i d_k d_j d_k).
    Real gd[3][3];  // gd[j][k] = d_j d_k
    for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) gd[j][k] = phys_derivative(s.d[k], j + 1);
    VectorField3 elastic(g);
    {
        Real e(npts);
        SpectralField tensor[3][3];  // symmetric in (i,j)
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) {
                for (std::size_t n = 0; n < npts; ++n)
                    e[n] = gd[i][0][n] * gd[j][0][n] + gd[i][1][n] * gd[j][1][n] +
                           gd[i][2][n] * gd[j][2][n];
                tensor[i][j] = spec(e, g);
                if (i != j) tensor[j][i] = tensor[i][j];
            }
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) elastic[i] += differentiate(tensor[i][j], j + 1);
    }

    StrainTensors strain = strain_tensors(u);
    VectorField3 stress_div = tensor_divergence(stress_tensor(c, s.d, strain));

    // Velocity tendency, pressure eliminated by projection; mean pinned to zero.
    VectorField3 du(g);
    for (int i = 0; i < 3; ++i) {
        SpectralField visc(g);
        for (int i1 = 0; i1 < g.n; ++i1) {
            const double k1 = g.wavenumber(i1);
            for (int i2 = 0; i2 < g.n; ++i2) {
                const double k2 = g.wavenumber(i2);
                for (int i3 = 0; i3 < g.n; ++i3) {
                    const double k3 = g.wavenumber(i3);
                    const double q2 = k1 * k1 + k2 * k2 + k3 * k3;
                    visc(i1, i2, i3) = -0.5 * c.nu4() * q2 * u[i](i1, i2, i3);
                }
            }
        }
        du[i] = visc - advect[i] - elastic[i] + stress_div[i];
        du[i].coeff[0] = Complex(0.0, 0.0);
    }
    du = leray_project(du);

    // Wave-map part: dt(dt_d) = lap d + Gamma d - dt(u).grad d - 2 u.grad dt_d
    //                           - u.grad(u.grad d).
    // Gamma assembled from the gradients already at hand.
    Real tp[3] = {phys(s.dt_d[0]), phys(s.dt_d[1]), phys(s.dt_d[2])};
    Real gamma_p(npts);
    {
        for (std::size_t n = 0; n < npts; ++n) {
            double mat2 = 0.0, grad2 = 0.0;
            for (int i = 0; i < 3; ++i) {
                const double mat = tp[i][n] + up[0][n] * gd[0][i][n] + up[1][n] * gd[1][i][n] +
                                   up[2][n] * gd[2][i][n];
                mat2 += mat * mat;
                for (int k = 0; k < 3; ++k) grad2 += gd[k][i][n] * gd[k][i][n];
            }
            gamma_p[n] = -mat2 + grad2;
        }
        SpectralField gamma = spec(gamma_p, g);
        gamma_p = phys(gamma);  // dealiased version, matching the standalone operation
    }
    Real dtu[3] = {phys(du[0]), phys(du[1]), phys(du[2])};
    Real dp[3] = {phys(s.d[0]), phys(s.d[1]), phys(s.d[2])};

    VectorField3 ddtd(g);
    Real buf(npts);
    for (int i = 0; i < 3; ++i) {
        // lap d_i
        SpectralField lap(g);
        for (int i1 = 0; i1 < g.n; ++i1) {
            const double k1 = g.wavenumber(i1);
            for (int i2 = 0; i2 < g.n; ++i2) {
                const double k2 = g.wavenumber(i2);
                for (int i3 = 0; i3 < g.n; ++i3) {
                    const double k3 = g.wavenumber(i3);
                    lap(i1, i2, i3) = -(k1 * k1 + k2 * k2 + k3 * k3) * s.d[i](i1, i2, i3);
                }
            }
        }

        for (std::size_t n = 0; n < npts; ++n) buf[n] = gamma_p[n] * dp[i][n];
        SpectralField gd_term = spec(buf, g);

        for (std::size_t n = 0; n < npts; ++n)
            buf[n] = dtu[0][n] * gd[0][i][n] + dtu[1][n] * gd[1][i][n] + dtu[2][n] * gd[2][i][n];
        SpectralField dtu_term = spec(buf, g);

        Real gq[3] = {phys_derivative(s.dt_d[i], 1), phys_derivative(s.dt_d[i], 2),
                      phys_derivative(s.dt_d[i], 3)};
        for (std::size_t n = 0; n < npts; ++n)
            buf[n] = up[0][n] * gq[0][n] + up[1][n] * gq[1][n] + up[2][n] * gq[2][n];
        SpectralField transport_q = spec(buf, g);

        for (std::size_t n = 0; n < npts; ++n)
            buf[n] = up[0][n] * gd[0][i][n] + up[1][n] * gd[1][i][n] + up[2][n] * gd[2][i][n];
        SpectralField ug = spec(buf, g);
        Real gug[3] = {phys_derivative(ug, 1), phys_derivative(ug, 2), phys_derivative(ug, 3)};
        for (std::size_t n = 0; n < npts; ++n)
            buf[n] = up[0][n] * gug[0][n] + up[1][n] * gug[1][n] + up[2][n] * gug[2][n];
        SpectralField double_transport = spec(buf, g);

        ddtd[i] = lap + gd_term - dtu_term - 2.0 * transport_q - double_transport;
    }

    return DirectorRhs{du, ddtd};
}

// ---- angle-system pieces ----------------------------------------------------------

VectorField3 stress_angle_coupling(const Coefficients& c, const AngleState& a,
                                   const VectorField3& u) {
    const Grid3& g = a.grid();
    const std::size_t npts = g.size();

    StrainTensors strain = strain_tensors(u);
    Real ap[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) ap[i][j] = phys(strain.a(i, j));
    auto A = [&](int i, int j, std::size_t n) { return i <= j ? ap[i][j][n] : ap[j][i][n]; };

    Real p1 = phys(a.phi1), p2 = phys(a.phi2);

    // All twelve distinct products phi_m * A_kj, transformed once.
    SpectralField prod[2][3][3];
    {
        Real buf(npts);
        for (int m = 0; m < 2; ++m) {
            const Real& ph = m == 0 ? p1 : p2;
            for (int k = 0; k < 3; ++k)
                for (int j = k; j < 3; ++j) {
                    for (std::size_t n = 0; n < npts; ++n) buf[n] = ph[n] * A(k, j, n);
                    prod[m][k][j] = spec(buf, g);
                    if (j != k) prod[m][j][k] = prod[m][k][j];
                }
        }
    }
    auto P = [&](int m, int k, int j) -> const SpectralField& { return prod[m][k][j]; };

    // nu1 block.
    VectorField3 out(g);
    out[0] = c.nu1() * (differentiate(P(0, 0, 0), 2) + differentiate(P(1, 0, 0), 3) +
                        2.0 * (differentiate(P(0, 0, 1), 1) + differentiate(P(1, 0, 2), 1)));
    out[1] = c.nu1() * differentiate(P(0, 0, 0), 1);
    out[2] = c.nu1() * differentiate(P(1, 0, 0), 1);

    // nu5 block, component formulas taken literally (A is symmetric).
    {
        SpectralField r0 = differentiate(P(0, 0, 0), 2) + differentiate(P(1, 0, 0), 3) +
                           differentiate(P(0, 1, 0) + P(1, 2, 0), 1);
        for (int j = 0; j < 3; ++j)
            r0 += differentiate(P(0, 1, j) + P(1, 2, j), j + 1);

        SpectralField r1 = differentiate(P(0, 0, 1), 2) + differentiate(P(1, 0, 1), 3) +
                           differentiate(P(0, 1, 1) + P(1, 2, 1), 1);
        for (int j = 0; j < 3; ++j) r1 += differentiate(P(0, 0, j), j + 1);

        SpectralField r2 = differentiate(P(0, 0, 2), 2) + differentiate(P(1, 0, 2), 3) +
                           differentiate(P(0, 1, 2) + P(1, 2, 2), 1);
        for (int j = 0; j < 3; ++j) r2 += differentiate(P(1, 0, j), j + 1);

        out[0] += c.nu5() * r0;
        out[1] += c.nu5() * r1;
        out[2] += c.nu5() * r2;
    }
    return out;
}

namespace {

// Sorted-multiset index of a quadruple over {0,1,2}; 15 distinct values.
struct QuarticTable {
    int index[3][3][3][3];
    int sets[15][4];
    int count = 0;

    QuarticTable() {
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d) index[a][b][c][d] = -1;
        for (int a = 0; a < 3; ++a)
            for (int b = a; b < 3; ++b)
                for (int c = b; c < 3; ++c)
                    for (int d = c; d < 3; ++d) {
                        sets[count][0] = a;
                        sets[count][1] = b;
                        sets[count][2] = c;
                        sets[count][3] = d;
                        ++count;
                    }
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                for (int c = 0; c < 3; ++c)
                    for (int d = 0; d < 3; ++d) {
                        int s[4] = {a, b, c, d};
                        std::sort(s, s + 4);
                        for (int m = 0; m < count; ++m)
                            if (sets[m][0] == s[0] && sets[m][1] == s[1] && sets[m][2] == s[2] &&
                                sets[m][3] == s[3]) {
                                index[a][b][c][d] = m;
                                break;
                            }
                    }
    }
};

const QuarticTable& quartic_table() {
    static const QuarticTable t;
    return t;
}

}  // namespace

VectorField3 stress_taylor_remainder(const Coefficients& c, const AngleState& a,
                                     const StrainTensors& strain, int quadrature_nodes) {
    const Grid3& g = a.grid();
    const std::size_t npts = g.size();
    const Quadrature quad = gauss_legendre_unit(quadrature_nodes);
    const QuarticTable& qt = quartic_table();

    Real p1 = phys(a.phi1), p2 = phys(a.phi2);
    Real ap[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) ap[i][j] = phys(strain.a(i, j));
    auto A = [&](int i, int j, std::size_t n) { return i <= j ? ap[i][j][n] : ap[j][i][n]; };

    // W[i][j](x): the field under d_j for component i.
    Real W[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) W[i][j].resize(npts);

    for (std::size_t n = 0; n < npts; ++n) {
        const double f1 = p1[n], f2 = p2[n];
        const double f11 = f1 * f1, f12 = 2.0 * f1 * f2, f22 = f2 * f2;

        double G2[3][3] = {};  // remainder integrals of d_a d_b
        double G4[15] = {};    // remainder integrals of quartic monomials

        for (int qn = 0; qn < quadrature_nodes; ++qn) {
            const double s = quad.node[qn];
            const double wq = quad.weight[qn] * (1.0 - s);
            double c1, s1, c2, s2;
#if defined(__GNUC__)
            ::sincos(s * f1, &s1, &c1);
            ::sincos(s * f2, &s2, &c2);
#else
            c1 = std::cos(s * f1), s1 = std::sin(s * f1);
            c2 = std::cos(s * f2), s2 = std::sin(s * f2);
#endif

            // Values and directional derivatives (f1 d/da1 + f2 d/da2) of the
            // chart components at angles (s f1, s f2).
            const double val[3] = {c1 * c2, s1 * c2, s2};
            const double d1v[3] = {-f1 * s1 * c2 - f2 * c1 * s2, f1 * c1 * c2 - f2 * s1 * s2,
                                   f2 * c2};
            const double d2v[3] = {-f11 * c1 * c2 + f12 * s1 * s2 - f22 * c1 * c2,
                                   -f11 * s1 * c2 - f12 * c1 * s2 - f22 * s1 * c2,
                                   -f22 * s2};

            for (int x = 0; x < 3; ++x)
                for (int y = x; y < 3; ++y) {
                    const double h = d2v[x] * val[y] + 2.0 * d1v[x] * d1v[y] + val[x] * d2v[y];
                    G2[x][y] += wq * h;
                }

            for (int m = 0; m < qt.count; ++m) {
                const int* t = qt.sets[m];
                const double v0 = val[t[0]], v1 = val[t[1]], v2 = val[t[2]], v3 = val[t[3]];
                double h = d2v[t[0]] * v1 * v2 * v3 + d2v[t[1]] * v0 * v2 * v3 +
                           d2v[t[2]] * v0 * v1 * v3 + d2v[t[3]] * v0 * v1 * v2;
                h += 2.0 * (d1v[t[0]] * d1v[t[1]] * v2 * v3 + d1v[t[0]] * d1v[t[2]] * v1 * v3 +
                            d1v[t[0]] * d1v[t[3]] * v1 * v2 + d1v[t[1]] * d1v[t[2]] * v0 * v3 +
                            d1v[t[1]] * d1v[t[3]] * v0 * v2 + d1v[t[2]] * d1v[t[3]] * v0 * v1);
                G4[m] += wq * h;
            }
        }
        for (int x = 0; x < 3; ++x)
            for (int y = 0; y < x; ++y) G2[x][y] = G2[y][x];

        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double quartic = 0.0;
                for (int k = 0; k < 3; ++k)
                    for (int p = 0; p < 3; ++p)
                        quartic += A(k, p, n) * G4[qt.index[k][p][i][j]];
                double pair1 = 0.0, pair2 = 0.0;
                for (int k = 0; k < 3; ++k) {
                    pair1 += A(k, i, n) * G2[j][k];
                    pair2 += A(k, j, n) * G2[i][k];
                }
                W[i][j][n] = c.nu1() * quartic + c.nu5() * (pair1 + pair2);
            }
    }

    VectorField3 out(g);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) out[i] += differentiate(spec(W[i][j], g), j + 1);
    return out;
}

VectorField3 metric_correction_term(const AngleState& a) {
    const Grid3& g = a.grid();
    const std::size_t npts = g.size();

    Real p2 = phys(a.phi2);
    Real gp1[3] = {phys_derivative(a.phi1, 1), phys_derivative(a.phi1, 2),
                   phys_derivative(a.phi1, 3)};

    VectorField3 out(g);
    Real buf(npts);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            for (std::size_t n = 0; n < npts; ++n) {
                const double sp = std::sin(p2[n]);
                buf[n] = sp * sp * gp1[i][n] * gp1[j][n];
            }
            out[i] += differentiate(spec(buf, g), j + 1);
        }
    }
    return out;
}

std::pair<SpectralField, SpectralField> wave_curvature_source(const AngleState& a,
                                                              const VectorField3& u,
                                                              double margin) {
    const Grid3& g = a.grid();
    const std::size_t npts = g.size();

    Real p2 = phys(a.phi2);
    const double limit = pi / 2.0 - margin;
    for (std::size_t i = 0; i < npts; ++i)
        if (std::abs(p2[i]) >= limit)
            throw Error("wave curvature source: |phi2| exceeds pi/2 - margin at grid index " +
                        std::to_string(i));

    Real q1 = phys(a.dphi1), q2 = phys(a.dphi2);
    Real up[3] = {phys(u[0]), phys(u[1]), phys(u[2])};
    Real g1[3] = {phys_derivative(a.phi1, 1), phys_derivative(a.phi1, 2),
                  phys_derivative(a.phi1, 3)};
    Real g2[3] = {phys_derivative(a.phi2, 1), phys_derivative(a.phi2, 2),
                  phys_derivative(a.phi2, 3)};

    Real first(npts), second(npts);
    for (std::size_t n = 0; n < npts; ++n) {
        const double m1 = q1[n] + up[0][n] * g1[0][n] + up[1][n] * g1[1][n] + up[2][n] * g1[2][n];
        const double m2 = q2[n] + up[0][n] * g2[0][n] + up[1][n] * g2[1][n] + up[2][n] * g2[2][n];
        const double grad_dot = g1[0][n] * g2[0][n] + g1[1][n] * g2[1][n] + g1[2][n] * g2[2][n];
        const double grad1_sq = g1[0][n] * g1[0][n] + g1[1][n] * g1[1][n] + g1[2][n] * g1[2][n];
        first[n] = 2.0 * std::tan(p2[n]) * (m1 * m2 - grad_dot);
        second[n] = 0.5 * std::sin(2.0 * p2[n]) * (-m1 * m1 + grad1_sq);
    }
    return {spec(first, g), spec(second, g)};
}

AngleSystemRhs angle_system_rhs(const Coefficients& c, const AngleState& a,
                                const FlowState& flow, double margin) {
    const Grid3& g = a.grid();
    const std::size_t npts = g.size();

    VectorField3 u = flow.velocity();
    Real up[3] = {phys(u[0]), phys(u[1]), phys(u[2])};

    // Advection u.grad u.
    VectorField3 advect(g);
    {
        Real buf(npts);
        for (int i = 0; i < 3; ++i) {
            Real gui[3] = {phys_derivative(u[i], 1), phys_derivative(u[i], 2),
                           phys_derivative(u[i], 3)};
            for (std::size_t n = 0; n < npts; ++n)
                buf[n] = up[0][n] * gui[0][n] + up[1][n] * gui[1][n] + up[2][n] * gui[2][n];
            advect[i] = spec(buf, g);
        }
    }

    // Wave stress d_j(grad phi_m d_j phi_m), summed over both angles.
    Real gp1[3] = {phys_derivative(a.phi1, 1), phys_derivative(a.phi1, 2),
                   phys_derivative(a.phi1, 3)};
    Real gp2[3] = {phys_derivative(a.phi2, 1), phys_derivative(a.phi2, 2),
                   phys_derivative(a.phi2, 3)};
    VectorField3 wave_stress(g);
    {
        Real buf(npts);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                for (std::size_t n = 0; n < npts; ++n)
                    buf[n] = gp1[i][n] * gp1[j][n] + gp2[i][n] * gp2[j][n];
                wave_stress[i] += differentiate(spec(buf, g), j + 1);
            }
    }

    StrainTensors strain = strain_tensors(u);
    VectorField3 coupling = stress_angle_coupling(c, a, u);
    VectorField3 remainder = stress_taylor_remainder(c, a, strain);
    VectorField3 metric = metric_correction_term(a);

    VectorField3 source_u(g);
    for (int i = 0; i < 3; ++i) {
        source_u[i] = coupling[i] + remainder[i] + metric[i] - advect[i] - wave_stress[i];
        source_u[i].coeff[0] = Complex(0.0, 0.0);  // mean velocity pinned to zero
    }

    AngleSystemRhs rhs;
    rhs.v_nonlinear = apply_diagonalizer(leray_project(source_u));
    rhs.v_linear = -1.0 * apply_dissipation(c, flow.v);
    rhs.du_dt = apply_diagonalizer(rhs.v_linear + rhs.v_nonlinear);

    // Wave sources: -dt(u).grad phi - 2 u.grad dt(phi) - u.grad(u.grad phi) + curvature.
    Real dtu[3] = {phys(rhs.du_dt[0]), phys(rhs.du_dt[1]), phys(rhs.du_dt[2])};
    auto curvature = wave_curvature_source(a, u, margin);

    const SpectralField* dphim[2] = {&a.dphi1, &a.dphi2};
    const Real* gpm[2] = {gp1, gp2};
    const SpectralField* curv[2] = {&curvature.first, &curvature.second};

    for (int m = 0; m < 2; ++m) {
        Real gq[3] = {phys_derivative(*dphim[m], 1), phys_derivative(*dphim[m], 2),
                      phys_derivative(*dphim[m], 3)};
        Real ug(npts);
        for (std::size_t n = 0; n < npts; ++n)
            ug[n] = up[0][n] * gpm[m][0][n] + up[1][n] * gpm[m][1][n] + up[2][n] * gpm[m][2][n];
        SpectralField ug_spec = spec(ug, g);
        Real gug[3] = {phys_derivative(ug_spec, 1), phys_derivative(ug_spec, 2),
                       phys_derivative(ug_spec, 3)};

        Real buf(npts);
        for (std::size_t n = 0; n < npts; ++n) {
            const double dtu_g =
                dtu[0][n] * gpm[m][0][n] + dtu[1][n] * gpm[m][1][n] + dtu[2][n] * gpm[m][2][n];
            const double u_gq = up[0][n] * gq[0][n] + up[1][n] * gq[1][n] + up[2][n] * gq[2][n];
            const double u_gug = up[0][n] * gug[0][n] + up[1][n] * gug[1][n] + up[2][n] * gug[2][n];
            buf[n] = -dtu_g - 2.0 * u_gq - u_gug;
        }
        SpectralField src = spec(buf, g) + *curv[m];
        if (m == 0)
            rhs.wave_source1 = std::move(src);
        else
            rhs.wave_source2 = std::move(src);
    }

    return rhs;
}

}  // namespace hlc
