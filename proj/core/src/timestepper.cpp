#include "hyperlc/timestepper.hpp"

#include <cmath>
#include <memory>
#include <mutex>
#include <random>

#include "hyperlc/littlewood_paley.hpp"

namespace hlc {

namespace {

// (e^z - 1)/z and (e^z - 1 - z)/z^2, Taylor-switched near zero to control
// cancellation.
Complex phi1_fn(Complex z) {
    if (std::abs(z) < 1e-2)
        return 1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 +
                          z * (1.0 / 120.0 + z * (1.0 / 720.0 + z / 5040.0)))));
    return (std::exp(z) - 1.0) / z;
}

Complex phi2_fn(Complex z) {
    if (std::abs(z) < 1e-2)
        return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 +
                          z * (1.0 / 720.0 + z * (1.0 / 5040.0 + z / 40320.0)))));
    return (std::exp(z) - 1.0 - z) / (z * z);
}

// Per-mode exponential-integrator factors for one scalar symbol z(xi).
struct EtdFactors {
    std::vector<Complex> expz, p1, p2;        // full step
    std::vector<Complex> expz_h, p1_h;        // half step
};

template <typename SymbolFn>
EtdFactors make_factors(const Grid3& g, double dt, SymbolFn&& z_of_mode) {
    EtdFactors f;
    const std::size_t n = g.size();
    f.expz.resize(n);
    f.p1.resize(n);
    f.p2.resize(n);
    f.expz_h.resize(n);
    f.p1_h.resize(n);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                const std::size_t idx = g.flat_index(i1, i2, i3);
                const Complex z = dt * z_of_mode(Vec3{k1, k2, k3});
                f.expz[idx] = std::exp(z);
                f.p1[idx] = phi1_fn(z);
                f.p2[idx] = phi2_fn(z);
                f.expz_h[idx] = std::exp(0.5 * z);
                f.p1_h[idx] = phi1_fn(0.5 * z);
            }
        }
    }
    return f;
}

struct StepFactors {
    std::array<EtdFactors, 3> v;  // one per diagonal viscous component
    EtdFactors w;                 // half-wave factor, shared by both angles
    double dt = -1.0;
};

// Factor tables depend only on (grid, coefficients, dt); rebuilt when any
// of those change.
struct FactorCache {
    std::mutex mutex;
    Grid3 grid;
    double dt = -1.0;
    double nu1 = 0.0, nu4 = 0.0, nu5 = 0.0;
    std::shared_ptr<StepFactors> factors;

    std::shared_ptr<StepFactors> get(const Grid3& g, const Coefficients& c, double step_dt) {
        std::lock_guard<std::mutex> lock(mutex);
        if (factors && grid == g && dt == step_dt && nu1 == c.nu1() && nu4 == c.nu4() &&
            nu5 == c.nu5())
            return factors;
        auto f = std::make_shared<StepFactors>();
        for (int comp = 0; comp < 3; ++comp)
            f->v[comp] = make_factors(g, step_dt, [&c, comp](const Vec3& xi) {
                return Complex(-dissipation_symbol(c, xi)[comp], 0.0);
            });
        f->w = make_factors(g, step_dt, [](const Vec3& xi) {
            const double q = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
            return Complex(0.0, q);
        });
        f->dt = step_dt;
        grid = g;
        dt = step_dt;
        nu1 = c.nu1();
        nu4 = c.nu4();
        nu5 = c.nu5();
        factors = f;
        return f;
    }
};

FactorCache& factor_cache() {
    static FactorCache c;
    return c;
}

struct Sources {
    VectorField3 v;                     // diagonalized projected velocity sources
    std::array<SpectralField, 2> wave;  // wave sources, mean removed
    std::array<double, 2> wave_mean;    // mean tendencies of the angle velocities
};

Sources eval_sources(const SimulationState& s, const Coefficients& c) {
    AngleState a = reconstruct_angles(s);
    AngleSystemRhs rhs = angle_system_rhs(c, a, s.flow);
    Sources src;
    src.v = std::move(rhs.v_nonlinear);
    src.wave[0] = std::move(rhs.wave_source1);
    src.wave[1] = std::move(rhs.wave_source2);
    for (int m = 0; m < 2; ++m) {
        src.wave_mean[m] = src.wave[m].coeff[0].real();
        src.wave[m].coeff[0] = Complex(0.0, 0.0);
    }
    return src;
}

Sources zero_sources(const Grid3& g) {
    Sources src;
    src.v = VectorField3(g);
    src.wave[0] = SpectralField(g);
    src.wave[1] = SpectralField(g);
    src.wave_mean = {0.0, 0.0};
    return src;
}

void check_finite(const SimulationState& s, const char* where) {
    if (has_nonfinite(s.flow.v) || has_nonfinite(s.wave.w1) || has_nonfinite(s.wave.w2) ||
        !std::isfinite(s.mean_phi[0]) || !std::isfinite(s.mean_phi[1]) ||
        !std::isfinite(s.mean_dphi[0]) || !std::isfinite(s.mean_dphi[1]))
        throw Error(std::string("time step diverged (NaN/Inf in ") + where +
                    ") at t = " + std::to_string(s.t));
}

void reproject_velocity(SimulationState& s) {
    VectorField3 u = s.flow.velocity();
    u = leray_project(u);
    for (int i = 0; i < 3; ++i) u[i].coeff[0] = Complex(0.0, 0.0);
    s.flow.v = apply_diagonalizer(u);
}

}  // namespace

SimulationState step(const SimulationState& state, const SchemeConfig& cfg,
                     const Coefficients& c, bool reproject) {
    const Grid3& g = state.grid();
    const double dt = cfg.effective_dt(g);
    if (!(dt > 0.0)) throw Error("step: dt must be positive");
    auto factors = factor_cache().get(g, c, dt);

    check_finite(state, "input state");
    Sources s0 = cfg.linear_only ? zero_sources(g) : eval_sources(state, c);

    auto propagate = [&](const SimulationState& in, bool half) {
        SimulationState out = in;
        for (int comp = 0; comp < 3; ++comp) {
            const auto& fac = half ? factors->v[comp].expz_h : factors->v[comp].expz;
            for (std::size_t i = 0; i < out.flow.v[comp].coeff.size(); ++i)
                out.flow.v[comp].coeff[i] = fac[i] * in.flow.v[comp].coeff[i];
        }
        for (int m = 0; m < 2; ++m) {
            const auto& fac = half ? factors->w.expz_h : factors->w.expz;
            for (std::size_t i = 0; i < out.wave[m].coeff.size(); ++i)
                out.wave[m].coeff[i] = fac[i] * in.wave[m].coeff[i];
        }
        return out;
    };

    auto add_phi1_source = [&](SimulationState& st, const Sources& src, double weight, bool half) {
        for (int comp = 0; comp < 3; ++comp) {
            const auto& fac = half ? factors->v[comp].p1_h : factors->v[comp].p1;
            for (std::size_t i = 0; i < st.flow.v[comp].coeff.size(); ++i)
                st.flow.v[comp].coeff[i] += weight * fac[i] * src.v[comp].coeff[i];
        }
        for (int m = 0; m < 2; ++m) {
            const auto& fac = half ? factors->w.p1_h : factors->w.p1;
            for (std::size_t i = 0; i < st.wave[m].coeff.size(); ++i)
                st.wave[m].coeff[i] += weight * fac[i] * src.wave[m].coeff[i];
        }
    };

    SimulationState next;

    if (cfg.scheme == Scheme::Etd2) {
        // Predictor: exact factor + phi1 source; means by an Euler stage.
        SimulationState pred = propagate(state, false);
        add_phi1_source(pred, s0, dt, false);
        for (int m = 0; m < 2; ++m) {
            pred.mean_phi[m] = state.mean_phi[m] + dt * state.mean_dphi[m];
            pred.mean_dphi[m] = state.mean_dphi[m] + dt * s0.wave_mean[m];
        }
        pred.t = state.t + dt;
        check_finite(pred, "predictor");

        if (cfg.linear_only) {
            next = std::move(pred);
        } else {
            Sources s1 = eval_sources(pred, c);
            next = std::move(pred);
            for (int comp = 0; comp < 3; ++comp)
                for (std::size_t i = 0; i < next.flow.v[comp].coeff.size(); ++i)
                    next.flow.v[comp].coeff[i] += dt * factors->v[comp].p2[i] *
                                                  (s1.v[comp].coeff[i] - s0.v[comp].coeff[i]);
            for (int m = 0; m < 2; ++m)
                for (std::size_t i = 0; i < next.wave[m].coeff.size(); ++i)
                    next.wave[m].coeff[i] +=
                        dt * factors->w.p2[i] * (s1.wave[m].coeff[i] - s0.wave[m].coeff[i]);
            // Heun correction for the mean pair.
            for (int m = 0; m < 2; ++m) {
                next.mean_dphi[m] =
                    state.mean_dphi[m] + 0.5 * dt * (s0.wave_mean[m] + s1.wave_mean[m]);
                next.mean_phi[m] = state.mean_phi[m] +
                                   0.5 * dt * (state.mean_dphi[m] + next.mean_dphi[m]);
            }
        }
    } else {
        // Exponential midpoint: half-step stage, then full factor with the
        // midpoint source.
        SimulationState mid = propagate(state, true);
        add_phi1_source(mid, s0, 0.5 * dt, true);
        for (int m = 0; m < 2; ++m) {
            mid.mean_phi[m] = state.mean_phi[m] + 0.5 * dt * state.mean_dphi[m];
            mid.mean_dphi[m] = state.mean_dphi[m] + 0.5 * dt * s0.wave_mean[m];
        }
        mid.t = state.t + 0.5 * dt;
        check_finite(mid, "midpoint stage");

        Sources sm = cfg.linear_only ? zero_sources(g) : eval_sources(mid, c);
        next = propagate(state, false);
        add_phi1_source(next, sm, dt, false);
        for (int m = 0; m < 2; ++m) {
            next.mean_dphi[m] = state.mean_dphi[m] + dt * sm.wave_mean[m];
            next.mean_phi[m] = state.mean_phi[m] + dt * mid.mean_dphi[m];
        }
    }

    next.t = state.t + dt;
    if (reproject) reproject_velocity(next);
    check_finite(next, "updated state");
    return next;
}

RunResult run(const SimulationState& state0, const SchemeConfig& cfg, const Coefficients& c,
              std::span<const Observer> observers, int observe_every, int diag_order) {
    if (!(cfg.t_end > state0.t) && cfg.t_end != state0.t)
        throw Error("run: t_end must not precede the initial time");
    if (observe_every < 1) observe_every = 1;

    RunResult result;
    result.report.diag_order = diag_order;
    EnergyTracker tracker(c, diag_order);

    const Grid3& g = state0.grid();
    const auto [k_lo, k_hi] = resolved_shell_range(g);
    for (int k = k_lo; k <= k_hi; ++k) result.report.shells.push_back(k);

    auto record = [&](const SimulationState& s) {
        EnergyBreakdown e = tracker.energy(s);
        result.report.times.push_back(s.t);
        result.report.total.push_back(e.total);
        result.report.kinetic.push_back(e.kinetic);
        result.report.dissipation_integral.push_back(e.dissipation);
        result.report.wave_energy.push_back(e.wave);
        result.report.wave_sup.push_back(sup_norm(s.wave.w1) + sup_norm(s.wave.w2));
        std::vector<double> shell_row;
        for (int k : result.report.shells)
            shell_row.push_back(sup_norm(shell_project(s.wave.w1, k)) +
                                sup_norm(shell_project(s.wave.w2, k)));
        result.report.shell_sup.push_back(std::move(shell_row));
        ConstraintResiduals r = constraint_residuals(s);
        result.report.div_residual.push_back(r.divergence);
        result.report.unit_residual.push_back(r.unit_norm);
        result.report.mean_residual.push_back(r.mean_velocity);
        for (const auto& obs : observers) obs(s, tracker);
    };

    SimulationState state = state0;
    tracker.update(state);

    const double dt = cfg.effective_dt(g);
    const double span = cfg.t_end - state0.t;
    const long nsteps = span <= 0.0 ? 0 : std::lround(std::ceil(span / dt - 1e-9));
    if (nsteps > 0) record(state);  // zero-step runs produce an empty series

    try {
        for (long i = 0; i < nsteps; ++i) {
            SchemeConfig local = cfg;
            // Land exactly on t_end: shrink the final step if needed.
            const double remaining = cfg.t_end - state.t;
            local.dt = remaining < dt * (1.0 + 1e-12) ? remaining : dt;
            const bool reproject = ((i + 1) % cfg.reprojection_period) == 0 || i + 1 == nsteps;
            state = step(state, local, c, reproject);
            tracker.update(state);
            if ((i + 1) % observe_every == 0 || i + 1 == nsteps) record(state);
        }
        result.completed = true;
    } catch (const Error& err) {
        result.failure = err.what();
        result.completed = false;
    }
    result.final_state = std::move(state);
    return result;
}

// ---- initial data -----------------------------------------------------------

namespace {

double uniform_pm1(std::mt19937_64& rng) {
    // Deterministic across platforms: draw from the full 64-bit range.
    return 2.0 * (static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0)) - 1.0;
}

// Random coefficients on the integer-mode shell, Hermite-symmetrized so the
// physical field is real, mean-free and dealiased.
SpectralField random_band_field(const Grid3& g, std::mt19937_64& rng, int band_min, int band_max) {
    SpectralField f(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const int m1 = g.mode(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const int m2 = g.mode(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const int m3 = g.mode(i3);
                const double mag = std::sqrt(double(m1) * m1 + double(m2) * m2 + double(m3) * m3);
                if (mag < band_min - 0.5 || mag > band_max + 0.5) continue;
                f(i1, i2, i3) = Complex(uniform_pm1(rng), uniform_pm1(rng));
            }
        }
    }
    // Hermite symmetrization.
    SpectralField sym(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const int j1 = (g.n - i1) % g.n;
        for (int i2 = 0; i2 < g.n; ++i2) {
            const int j2 = (g.n - i2) % g.n;
            for (int i3 = 0; i3 < g.n; ++i3) {
                const int j3 = (g.n - i3) % g.n;
                sym(i1, i2, i3) = 0.5 * (f(i1, i2, i3) + std::conj(f(j1, j2, j3)));
            }
        }
    }
    sym.coeff[0] = Complex(0.0, 0.0);
    dealias(sym);
    zero_nyquist(sym);
    return sym;
}

// Mean-free bump spectrum centered at the origin with seed-fixed modulation.
SpectralField bump_field(const Grid3& g, std::mt19937_64& rng, int band_max) {
    const double s = std::max(1.0, band_max / 2.0) / g.box_length;
    const double a0 = uniform_pm1(rng), a1 = uniform_pm1(rng), a2 = uniform_pm1(rng),
                 a3 = uniform_pm1(rng);
    SpectralField f(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const double k1 = g.wavenumber(i1);
        for (int i2 = 0; i2 < g.n; ++i2) {
            const double k2 = g.wavenumber(i2);
            for (int i3 = 0; i3 < g.n; ++i3) {
                const double k3 = g.wavenumber(i3);
                const double q2 = k1 * k1 + k2 * k2 + k3 * k3;
                if (q2 == 0.0) continue;
                const double env = std::exp(-0.5 * q2 / (s * s));
                f(i1, i2, i3) = env * Complex(a0 + a1 * k1, a2 * k2 - a3 * k3);
            }
        }
    }
    // Hermite symmetrization keeps the physical field real.
    SpectralField sym(g);
    for (int i1 = 0; i1 < g.n; ++i1) {
        const int j1 = (g.n - i1) % g.n;
        for (int i2 = 0; i2 < g.n; ++i2) {
            const int j2 = (g.n - i2) % g.n;
            for (int i3 = 0; i3 < g.n; ++i3) {
                const int j3 = (g.n - i3) % g.n;
                sym(i1, i2, i3) = 0.5 * (f(i1, i2, i3) + std::conj(f(j1, j2, j3)));
            }
        }
    }
    dealias(sym);
    zero_nyquist(sym);
    return sym;
}

}  // namespace

SimulationState generate_initial_data(const InitialDataSpec& spec, const Grid3& grid) {
    SimulationState s;
    s.t = 0.0;
    s.flow.v = VectorField3(grid);
    s.wave.w1 = SpectralField(grid);
    s.wave.w2 = SpectralField(grid);
    if (spec.epsilon0 == 0.0) return s;

    if (spec.band_min < 1 || spec.band_max < spec.band_min)
        throw Error("initial data: empty frequency band");
    bool any = false;
    const int lim = grid.dealias_limit();
    for (int m = spec.band_min; m <= spec.band_max && !any; ++m) any = m <= lim;
    if (!any) throw Error("initial data: band has no resolvable modes on this grid");

    std::mt19937_64 rng(spec.seed);
    const bool random = spec.profile == InitialDataSpec::Profile::RandomBand;
    auto make = [&]() {
        return random ? random_band_field(grid, rng, spec.band_min, spec.band_max)
                      : bump_field(grid, rng, spec.band_max);
    };

    VectorField3 u(grid);
    for (int i = 0; i < 3; ++i) u[i] = make();
    u = leray_project(u);
    for (int i = 0; i < 3; ++i) u[i].coeff[0] = Complex(0.0, 0.0);

    SpectralField phi[2] = {make(), make()};
    SpectralField dphi[2] = {make(), make()};

    // Smallness rescale: all stated norms sum exactly to epsilon0.
    double total = sobolev_norm(u, spec.norm_order);
    for (int m = 0; m < 2; ++m) {
        VectorField3 gphi(grid);
        for (int axis = 1; axis <= 3; ++axis) gphi[axis - 1] = differentiate(phi[m], axis);
        total += sobolev_norm(gphi, spec.norm_order) + sobolev_norm(dphi[m], spec.norm_order);
    }
    if (!(total > 0.0)) throw Error("initial data: degenerate random draw");
    const double scale = spec.epsilon0 / total;
    for (int i = 0; i < 3; ++i) u[i] *= scale;
    for (int m = 0; m < 2; ++m) {
        phi[m] *= scale;
        dphi[m] *= scale;
    }

    s.flow.v = apply_diagonalizer(u);
    s.wave.w1 = normalized_wave_from_angles(phi[0], dphi[0]);
    s.wave.w2 = normalized_wave_from_angles(phi[1], dphi[1]);
    return s;
}

}  // namespace hlc
