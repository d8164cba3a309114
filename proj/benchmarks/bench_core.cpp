#include <benchmark/benchmark.h>

#include "kmlab/integrator.hpp"
#include "kmlab/metrics.hpp"
#include "kmlab/model.hpp"
#include "kmlab/random.hpp"
#include "kmlab/theory.hpp"

#include <vector>

namespace {

kmlab::ModelParams make_params(int n) {
    std::vector<double> omega(n);
    kmlab::RandomStream rng(17);
    for (double& w : omega)
        w = rng.uniform(-0.5, 0.5);
    return kmlab::ModelParams(0.05, 1.0, std::move(omega));
}

kmlab::PhaseState make_state(int n) {
    kmlab::RandomStream rng(23);
    kmlab::PhaseState s;
    s.theta.resize(n);
    s.dtheta.resize(n);
    for (int i = 0; i < n; ++i)
        s.theta[i] = rng.uniform(-3.0, 3.0);
    for (int i = 0; i < n; ++i)
        s.dtheta[i] = rng.uniform(-2.0, 2.0);
    return s;
}

void IntegrateFixedStep(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto params = make_params(n);
    const auto initial = make_state(n);
    kmlab::IntegratorConfig cfg;
    cfg.t_end = 1.0;
    cfg.sample_every = 1000;
    for (auto _ : state) {
        auto traj = kmlab::integrate(initial, params, cfg);
        benchmark::DoNotOptimize(traj.samples.back().theta[0]);
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(1.0 / kmlab::default_dt(params)));
}
BENCHMARK(IntegrateFixedStep)->Arg(3)->Arg(6)->Arg(16);

void IntegrateAdaptive(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto params = make_params(n);
    const auto initial = make_state(n);
    kmlab::IntegratorConfig cfg;
    cfg.method = kmlab::Method::Rk45Adaptive;
    cfg.t_end = 1.0;
    cfg.sample_every = 1000;
    for (auto _ : state) {
        auto traj = kmlab::integrate(initial, params, cfg);
        benchmark::DoNotOptimize(traj.steps_taken);
    }
}
BENCHMARK(IntegrateAdaptive)->Arg(3)->Arg(6);

void DiameterRate(benchmark::State& state) {
    const auto s = make_state(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kmlab::diameter_rate(s));
}
BENCHMARK(DiameterRate)->Arg(6)->Arg(64);

void CouplingAsymmetry(benchmark::State& state) {
    const auto s = make_state(static_cast<int>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(kmlab::coupling_asymmetry(s, 0, 1));
}
BENCHMARK(CouplingAsymmetry)->Arg(6)->Arg(64);

void EnergyLedgerBench(benchmark::State& state) {
    const auto params = make_params(4);
    const auto initial = make_state(4);
    kmlab::IntegratorConfig cfg;
    cfg.t_end = 5.0;
    cfg.error_check_interval = 0;
    const auto traj = kmlab::integrate(initial, params, cfg);
    for (auto _ : state)
        benchmark::DoNotOptimize(kmlab::energy_ledger(traj).max_abs_residual);
}
BENCHMARK(EnergyLedgerBench);

void FeasibleSearch(benchmark::State& state) {
    for (auto _ : state) {
        auto res = kmlab::feasible_search(5, 5, kmlab::SearchObjective::MaxMuMax,
                                          static_cast<int>(state.range(0)), 2);
        benchmark::DoNotOptimize(res.objective);
    }
}
BENCHMARK(FeasibleSearch)->Arg(5)->Arg(7);

} // namespace

BENCHMARK_MAIN();
