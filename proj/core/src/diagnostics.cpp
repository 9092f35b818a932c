#include "hyperlc/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "hyperlc/littlewood_paley.hpp"

namespace hlc {

namespace {

// Multi-indices (n1,n2,n3) with n1+n2+n3 == order.
std::vector<std::array<int, 3>> multi_indices(int order) {
    std::vector<std::array<int, 3>> out;
    for (int n1 = 0; n1 <= order; ++n1)
        for (int n2 = 0; n2 <= order - n1; ++n2) out.push_back({n1, n2, order - n1 - n2});
    return out;
}

// Per-mode weight 1 + sum_{|n| = order} xi^(2n), cached per grid and order.
const std::vector<double>& derivative_weight_table(const Grid3& g, int order) {
    static std::mutex mutex;
    static std::map<std::tuple<int, double, int>, std::unique_ptr<std::vector<double>>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto key = std::make_tuple(g.n, g.box_length, order);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    const auto mis = multi_indices(order);
    auto table = std::make_unique<std::vector<double>>(g.size());
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                double w = 0.0;
                if (order > 0)
                    for (const auto& n : mis)
                        w += std::pow(k1 * k1, n[0]) * std::pow(k2 * k2, n[1]) *
                             std::pow(k3 * k3, n[2]);
                (*table)[g.flat_index(i1, i2, i3)] = 1.0 + w;
            }
        }
    }
    auto [pos, inserted] = cache.emplace(key, std::move(table));
    return *pos->second;
}

double smooth_step(double s) {
    // 0 for s <= 0, 1 for s >= 1, C-infinity monotone in between.
    if (s <= 0.0) return 0.0;
    if (s >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / s);
    const double b = std::exp(-1.0 / (1.0 - s));
    return a / (a + b);
}

}  // namespace

double derivative_shell_sum(const SpectralField& f, int order) {
    const Grid3& g = f.grid;
    const auto& w = derivative_weight_table(g, order);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.coeff.size(); ++i) sum += w[i] * std::norm(f.coeff[i]);
    return sum * g.volume();
}

double derivative_shell_sum(const VectorField3& f, int order) {
    double s = 0.0;
    for (int i = 0; i < 3; ++i) s += derivative_shell_sum(f[i], order);
    return s;
}

double dissipation_rate(const SimulationState& s, const Coefficients& c, int diag_order) {
    VectorField3 lv = apply_dissipation_sqrt(c, s.flow.v);
    return derivative_shell_sum(lv, diag_order);
}

EnergyBreakdown energy_functional(const SimulationState& s, const Coefficients& c, int diag_order,
                                  double dissipation_accumulated) {
    (void)c;
    EnergyBreakdown e;
    e.kinetic = 0.5 * derivative_shell_sum(s.flow.v, diag_order);
    e.wave = 0.5 * (derivative_shell_sum(s.wave.w1, diag_order) +
                    derivative_shell_sum(s.wave.w2, diag_order));
    e.dissipation = dissipation_accumulated;
    e.total = e.kinetic + e.wave + e.dissipation;
    return e;
}

void EnergyTracker::update(const SimulationState& s) {
    const double rate = dissipation_rate(s, c_, order_);
    if (primed_) accumulated_ += 0.5 * (s.t - last_t_) * (rate + last_rate_);
    last_t_ = s.t;
    last_rate_ = rate;
    primed_ = true;
}

// ---- vector-field words -----------------------------------------------------

double diagnostic_window(double r, const Grid3& g) {
    const double R = g.side() / 2.0;
    return 1.0 - smooth_step((r - 0.5 * R) / (0.4 * R));
}

namespace {

struct WordLayers {
    std::vector<double> times;
    std::vector<VectorField3> u;
    std::vector<std::array<SpectralField, 2>> phi;
    std::vector<std::array<SpectralField, 2>> dphi;

    std::size_t count() const { return times.size(); }
};

// Windowed coordinate weights w(r) * x_l on the centered cell.
std::array<std::vector<double>, 3> windowed_coordinates(const Grid3& g) {
    std::array<std::vector<double>, 3> X;
    for (auto& v : X) v.resize(g.size());
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double x1 = g.centered_coordinate(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double x2 = g.centered_coordinate(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double x3 = g.centered_coordinate(i3);
                const double r = std::sqrt(x1 * x1 + x2 * x2 + x3 * x3);
                const double w = diagnostic_window(r, g);
                const std::size_t idx = g.flat_index(i1, i2, i3);
                X[0][idx] = w * x1;
                X[1][idx] = w * x2;
                X[2][idx] = w * x3;
            }
        }
    }
    return X;
}

// Windowed rotation (x wedge grad)_axis of a scalar field.
SpectralField rotation_scalar(const SpectralField& f, int axis,
                              const std::array<std::vector<double>, 3>& X) {
    const Grid3& g = f.grid;
    // (x wedge grad)_1 = x2 d3 - x3 d2, cyclic.
    const int a = axis % 3;        // first coordinate index (0-based)
    const int b = (axis + 1) % 3;  // second
    std::vector<double> da = transform_inverse_real(differentiate(f, b + 1));
    std::vector<double> db = transform_inverse_real(differentiate(f, a + 1));
    std::vector<double> out(g.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = X[a][i] * da[i] - X[b][i] * db[i];
    SpectralField res = transform_forward(std::span<const double>(out), g);
    dealias(res);
    return res;
}

// Perturbed rotation on a vector field: component-wise windowed rotation plus
// the constant generator mixing the components.
VectorField3 rotation_vector(const VectorField3& u, int axis,
                             const std::array<std::vector<double>, 3>& X) {
    VectorField3 out(u.grid());
    for (int i = 0; i < 3; ++i) out[i] = rotation_scalar(u[i], axis, X);
    // A_1 = [[0,0,0],[0,0,1],[0,-1,0]], A_2 = [[0,0,-1],[0,0,0],[1,0,0]],
    // A_3 = [[0,1,0],[-1,0,0],[0,0,0]]   (axis is 1-based).
    switch (axis) {
        case 1:
            out[1] += u[2];
            out[2] -= u[1];
            break;
        case 2:
            out[0] -= u[2];
            out[2] += u[0];
            break;
        default:
            out[0] += u[1];
            out[1] -= u[0];
            break;
    }
    return out;
}

void apply_op(WordLayers& L, WordOp op, const std::array<std::vector<double>, 3>& X) {
    const std::size_t n = L.count();
    if (op == WordOp::Dt) {
        if (n < 3) throw Error("vector_field_energy: not enough snapshots for a time derivative");
        WordLayers out;
        for (std::size_t j = 1; j + 1 < n; ++j) {
            const double h = L.times[j + 1] - L.times[j - 1];
            out.times.push_back(L.times[j]);
            VectorField3 du = L.u[j + 1];
            du -= L.u[j - 1];
            du *= 1.0 / h;
            out.u.push_back(std::move(du));
            // d/dt phi is carried exactly by the state; d/dt of the velocity
            // layer falls back to the centered difference.
            out.phi.push_back(L.dphi[j]);
            std::array<SpectralField, 2> dd;
            for (int m = 0; m < 2; ++m) {
                dd[m] = L.dphi[j + 1][m];
                dd[m] -= L.dphi[j - 1][m];
                dd[m] *= 1.0 / h;
            }
            out.dphi.push_back(std::move(dd));
        }
        L = std::move(out);
        return;
    }

    if (op == WordOp::D1 || op == WordOp::D2 || op == WordOp::D3) {
        const int axis = op == WordOp::D1 ? 1 : (op == WordOp::D2 ? 2 : 3);
        for (std::size_t j = 0; j < n; ++j) {
            for (int i = 0; i < 3; ++i) L.u[j][i] = differentiate(L.u[j][i], axis);
            for (int m = 0; m < 2; ++m) {
                L.phi[j][m] = differentiate(L.phi[j][m], axis);
                L.dphi[j][m] = differentiate(L.dphi[j][m], axis);
            }
        }
        return;
    }

    const int axis = op == WordOp::Rot1 ? 1 : (op == WordOp::Rot2 ? 2 : 3);
    for (std::size_t j = 0; j < n; ++j) {
        L.u[j] = rotation_vector(L.u[j], axis, X);
        for (int m = 0; m < 2; ++m) {
            L.phi[j][m] = rotation_scalar(L.phi[j][m], axis, X);
            L.dphi[j][m] = rotation_scalar(L.dphi[j][m], axis, X);
        }
    }
}

}  // namespace

WordEnergy vector_field_energy(std::span<const SimulationState> snapshots,
                               const VectorFieldWord& word, const Coefficients& c,
                               int diag_order) {
    if (snapshots.empty()) throw Error("vector_field_energy: no snapshots");
    if (snapshots.size() % 2 == 0) throw Error("vector_field_energy: snapshot count must be odd");
    if (word.ops.size() > 2)
        throw Error("vector_field_energy: words longer than 2 are not supported");

    const Grid3& g = snapshots[0].grid();
    const auto X = windowed_coordinates(g);

    WordLayers L;
    for (const auto& s : snapshots) {
        L.times.push_back(s.t);
        L.u.push_back(s.flow.velocity());
        AngleState a = reconstruct_angles(s);
        L.phi.push_back({a.phi1, a.phi2});
        L.dphi.push_back({a.dphi1, a.dphi2});
    }

    for (WordOp op : word.ops) apply_op(L, op, X);

    const std::size_t mid = L.count() / 2;
    const VectorField3 v = apply_diagonalizer(L.u[mid]);

    WordEnergy e;
    e.v_kinetic = 0.5 * derivative_shell_sum(v, diag_order);
    e.v_dissipation_rate = derivative_shell_sum(apply_dissipation_sqrt(c, v), diag_order);
    for (int m = 0; m < 2; ++m) {
        e.phi_energy += 0.5 * derivative_shell_sum(L.dphi[mid][m], diag_order);
        for (int axis = 1; axis <= 3; ++axis)
            e.phi_energy +=
                0.5 * derivative_shell_sum(differentiate(L.phi[mid][m], axis), diag_order);
    }
    return e;
}

// ---- wave profile -------------------------------------------------------------

NormalizedWave wave_profile(const SimulationState& s) {
    NormalizedWave psi;
    psi.w1 = halfwave_propagate(-s.t, s.wave.w1);
    psi.w2 = halfwave_propagate(-s.t, s.wave.w2);
    return psi;
}

std::array<SpectralField, 3> profile_frequency_gradient(const SpectralField& psi) {
    const Grid3& g = psi.grid;
    const auto X = windowed_coordinates(g);
    std::vector<Complex> phys = transform_inverse(psi);

    std::array<SpectralField, 3> out;
    std::vector<Complex> buf(g.size());
    for (int l = 0; l < 3; ++l) {
        for (std::size_t i = 0; i < buf.size(); ++i)
            buf[i] = Complex(0.0, -1.0) * X[l][i] * phys[i];
        out[l] = transform_forward(std::span<const Complex>(buf), g);
    }
    return out;
}

double weighted_profile_norm(const SpectralField& psi, double sobolev_order) {
    auto grad = profile_frequency_gradient(psi);
    double sum = 0.0;
    for (int l = 0; l < 3; ++l) {
        SpectralField h = radial_derivative(grad[l], 1.0);
        const double nl = sobolev_norm(h, sobolev_order);
        sum += nl * nl;
    }
    return std::sqrt(sum);
}

// ---- decay fits -----------------------------------------------------------------

DecayFit decay_fit(std::span<const double> t, std::span<const double> value, double t1, double t2,
                   double reference, const std::string& reference_source, double tolerance,
                   const std::string& quantity) {
    if (t.size() != value.size()) throw Error("decay_fit: series size mismatch");
    std::vector<double> lt, lv;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < t1 || t[i] > t2) continue;
        if (!(t[i] > 0.0)) throw Error("decay_fit: nonpositive time inside window");
        if (!(value[i] > 0.0)) throw Error("decay_fit: nonpositive value inside window");
        lt.push_back(std::log(t[i]));
        lv.push_back(std::log(value[i]));
    }
    const int n = static_cast<int>(lt.size());
    if (n < 8) throw Error("decay_fit: need at least 8 samples in the window, have " +
                           std::to_string(n));

    double mt = 0.0, mv = 0.0;
    for (int i = 0; i < n; ++i) {
        mt += lt[i];
        mv += lv[i];
    }
    mt /= n;
    mv /= n;
    double sxx = 0.0, sxy = 0.0;
    for (int i = 0; i < n; ++i) {
        sxx += (lt[i] - mt) * (lt[i] - mt);
        sxy += (lt[i] - mt) * (lv[i] - mv);
    }
    const double slope = sxy / sxx;
    double ss_res = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = lv[i] - mv - slope * (lt[i] - mt);
        ss_res += r * r;
    }
    const double stderr_slope = n > 2 ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;

    DecayFit fit;
    fit.quantity = quantity;
    fit.window_t1 = t1;
    fit.window_t2 = t2;
    fit.samples = n;
    fit.slope = slope;
    fit.slope_stderr = stderr_slope;
    fit.reference = reference;
    fit.reference_source = reference_source;
    fit.tolerance = tolerance;
    fit.within_tolerance = std::abs(slope - reference) <= tolerance;
    return fit;
}

// ---- constraints -----------------------------------------------------------------

ConstraintResiduals constraint_residuals(const SimulationState& s) {
    ConstraintResiduals r;
    VectorField3 u = s.flow.velocity();
    r.divergence = sup_norm(divergence(u));

    AngleState a = reconstruct_angles(s);
    std::vector<double> p1 = transform_inverse_real(a.phi1);
    std::vector<double> p2 = transform_inverse_real(a.phi2);
    double worst = 0.0;
    for (std::size_t i = 0; i < p1.size(); ++i) {
        const double c2 = std::cos(p2[i]), s2 = std::sin(p2[i]);
        const double c1 = std::cos(p1[i]), s1 = std::sin(p1[i]);
        const double d1 = c1 * c2, d2 = s1 * c2, d3 = s2;
        worst = std::max(worst, std::abs(std::sqrt(d1 * d1 + d2 * d2 + d3 * d3) - 1.0));
    }
    r.unit_norm = worst;

    double mean2 = 0.0;
    for (int i = 0; i < 3; ++i) mean2 += std::norm(u[i].coeff[0]);
    r.mean_velocity = std::sqrt(mean2);
    return r;
}

}  // namespace hlc
