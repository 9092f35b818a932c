#include <benchmark/benchmark.h>

#include "hyperlc/physics.hpp"
#include "hyperlc/timestepper.hpp"

namespace {

hlc::SimulationState make_state(int n) {
    hlc::Grid3 g(n, 1.0);
    hlc::InitialDataSpec spec;
    spec.epsilon0 = 1e-2;
    spec.seed = 99;
    spec.band_min = 1;
    spec.band_max = 3;
    return hlc::generate_initial_data(spec, g);
}

void BM_TransformRoundtrip(benchmark::State& state) {
    hlc::Grid3 g(static_cast<int>(state.range(0)), 1.0);
    std::vector<double> p(g.size(), 0.25);
    for (auto _ : state) {
        auto f = hlc::transform_forward(std::span<const double>(p), g);
        auto back = hlc::transform_inverse_real(f);
        benchmark::DoNotOptimize(back.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<long>(g.size()));
}
BENCHMARK(BM_TransformRoundtrip)->Arg(32)->Arg(64);

void BM_AngleSystemRhs(benchmark::State& state) {
    auto s = make_state(static_cast<int>(state.range(0)));
    hlc::Coefficients c(1.0, 2.0, 1.0);
    hlc::AngleState a = hlc::reconstruct_angles(s);
    for (auto _ : state) {
        auto rhs = hlc::angle_system_rhs(c, a, s.flow);
        benchmark::DoNotOptimize(rhs.du_dt[0].coeff.data());
    }
}
BENCHMARK(BM_AngleSystemRhs)->Arg(16)->Arg(32);

void BM_Step(benchmark::State& state) {
    auto s = make_state(static_cast<int>(state.range(0)));
    hlc::Coefficients c(1.0, 2.0, 1.0);
    hlc::SchemeConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 1.0;
    for (auto _ : state) {
        s = hlc::step(s, cfg, c);
        benchmark::DoNotOptimize(s.flow.v[0].coeff.data());
    }
}
BENCHMARK(BM_Step)->Arg(16)->Arg(32);

void BM_ViscousPropagate(benchmark::State& state) {
    hlc::Grid3 g(static_cast<int>(state.range(0)), 1.0);
    hlc::Coefficients c(1.0, 2.0, 1.0);
    hlc::VectorField3 v(g);
    v[0](1, 2, 3) = hlc::Complex(1.0, 0.0);
    for (auto _ : state) {
        auto w = hlc::viscous_propagate(c, 0.5, v);
        benchmark::DoNotOptimize(w[0].coeff.data());
    }
}
BENCHMARK(BM_ViscousPropagate)->Arg(32)->Arg(64);

}  // namespace

BENCHMARK_MAIN();
