#include <benchmark/benchmark.h>

#include <cmath>

#include "qfilter/classical.hpp"
#include "qfilter/ensemble.hpp"
#include "qfilter/identities.hpp"
#include "qfilter/master.hpp"
#include "qfilter/trajectory.hpp"

using namespace qfilter;

namespace {

HPModel driven_model(int dim) {
    Rng rng(7);
    return random_model(dim, rng);
}

void bm_quad_filter_step(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const HPModel m = driven_model(dim);
    const auto beta = CoherentInput::constant(0.5);
    FilterState s = FilterState::from(DensityMatrix::maximally_mixed(dim));
    for (auto _ : state) {
        s = quad_filter_step(s, 1e-3, m, beta, 1e-4);
        benchmark::DoNotOptimize(s.rho.data());
    }
}
BENCHMARK(bm_quad_filter_step)->Arg(2)->Arg(4)->Arg(8);

void bm_count_filter_step(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const HPModel m = driven_model(dim);
    const auto beta = CoherentInput::constant(0.5);
    FilterState s = FilterState::from(DensityMatrix::maximally_mixed(dim));
    for (auto _ : state) {
        s = count_filter_step(s, 0, m, beta, 1e-4);
        benchmark::DoNotOptimize(s.rho.data());
    }
}
BENCHMARK(bm_count_filter_step)->Arg(2)->Arg(4)->Arg(8);

void bm_zakai_step(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const HPModel m = driven_model(dim);
    const auto beta = CoherentInput::constant(0.5);
    FilterState s = FilterState::from(DensityMatrix::maximally_mixed(dim));
    for (auto _ : state) {
        s = zakai_step(s, 1e-3, m, beta, 1e-4, MeasurementKind::quadrature);
        benchmark::DoNotOptimize(s.rho.data());
    }
}
BENCHMARK(bm_zakai_step)->Arg(2)->Arg(4)->Arg(8);

void bm_master_rk4_step(benchmark::State& state) {
    const int dim = static_cast<int>(state.range(0));
    const HPModel m = driven_model(dim);
    const auto beta = CoherentInput::constant(0.5);
    ComplexMatrix rho = DensityMatrix::maximally_mixed(dim).matrix();
    double t = 0.0;
    for (auto _ : state) {
        rho = master_rk4_step(m, beta, rho, t, 1e-4);
        t += 1e-4;
        benchmark::DoNotOptimize(rho.data());
    }
}
BENCHMARK(bm_master_rk4_step)->Arg(2)->Arg(4)->Arg(8);

void bm_ensemble(benchmark::State& state) {
    const EnsembleConfig cfg{
        .trajectories = static_cast<int>(state.range(0)),
        .master_seed = 1,
        .model = HPModel(identity(2), pauli::sigma_minus(), ComplexMatrix::Zero(2, 2)),
        .beta = CoherentInput::constant(0.5),
        .rho0 = DensityMatrix::basis(2, 0),
        .grid = TimeGrid::over(1.0, 1e-3),
        .kind = MeasurementKind::quadrature,
        .threads = 1,
    };
    for (auto _ : state) benchmark::DoNotOptimize(run_ensemble(cfg).max_trace_distance);
}
BENCHMARK(bm_ensemble)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);

void bm_particle_step(benchmark::State& state) {
    using namespace qfilter::classical;
    const ClassicalModel model = linear_model({});
    Rng rng(3);
    auto e = gaussian_ensemble(static_cast<int>(state.range(0)), Vector::Zero(1), Vector::Ones(1), rng);
    const Vector dy = Vector::Constant(1, 1e-3);
    for (auto _ : state) {
        e = particle_step(e, dy, model, 1e-3, rng);
        benchmark::DoNotOptimize(e.log_weights.data());
    }
}
BENCHMARK(bm_particle_step)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
