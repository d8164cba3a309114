#include "kmlab/scenarios.hpp"

#include "kmlab/metrics.hpp"
#include "kmlab/random.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace kmlab {

namespace {
constexpr double kPi = std::numbers::pi;
} // namespace

std::pair<ModelParams, PhaseState> build_counterexample(const CounterexampleConfig& cfg) {
    if (!(0.0 < cfg.eps1 && cfg.eps1 < cfg.eps2 && cfg.eps2 < cfg.eps3 && cfg.eps3 < kPi / 6.0))
        throw std::invalid_argument("counterexample: need 0 < eps1 < eps2 < eps3 < pi/6");
    if (!(cfg.a > 0.0))
        throw std::invalid_argument("counterexample: velocity magnitude a must be positive");
    ModelParams params(cfg.m, cfg.k, std::vector<double>(4, 0.0));
    PhaseState initial;
    initial.t = 0.0;
    initial.theta = {0.0, cfg.eps1, cfg.eps2, cfg.eps3};
    initial.dtheta = {0.0, -cfg.a, cfg.a, 0.0};
    return {std::move(params), std::move(initial)};
}

CounterexampleReport run_counterexample(const CounterexampleConfig& cfg) {
    auto [params, initial] = build_counterexample(cfg);

    IntegratorConfig icfg;
    icfg.t_end = cfg.horizon;
    // Resolve the fast interior sweep: phases move at up to ~a rad/time.
    icfg.dt = std::min(default_dt(params), 0.2 / std::max(1.0, cfg.a));
    const double span_steps = cfg.horizon / icfg.dt;
    icfg.sample_every = std::max(1, static_cast<int>(span_steps / 200000.0));

    const Trajectory traj = integrate(initial, params, icfg);
    const double slack = traj.integration_slack() + 1e-9;

    CounterexampleReport report;
    report.initial_diameter = diameter(initial.theta);
    report.initial_diameter_rate = diameter_rate(initial);
    report.max_diameter = 0.0;
    report.bound_dominated = true;
    report.t.reserve(traj.samples.size());
    report.lower_bound.reserve(traj.samples.size());
    report.separation.reserve(traj.samples.size());
    for (const PhaseState& s : traj.samples) {
        report.max_diameter = std::max(report.max_diameter, diameter(s.theta));
        const double gap = s.theta[2] - s.theta[1];
        const double lb = cfg.eps2 - cfg.eps1 +
                          2.0 * cfg.a * cfg.m * (1.0 - std::exp(-s.t / cfg.m)) -
                          2.0 * cfg.k * s.t;
        report.t.push_back(s.t);
        report.separation.push_back(gap);
        report.lower_bound.push_back(lb);
        if (gap < lb - slack)
            report.bound_dominated = false;
    }
    return report;
}

Thm2ShowcaseReport run_thm2_showcase(const Thm2Params& p, const ModelParams& model,
                                     const PhaseState& initial, double horizon,
                                     double sync_eps, double dt) {
    Thm2ShowcaseReport report;
    report.hypotheses = check_thm2(model, initial, p);
    if (!report.hypotheses.overall()) {
        report.refused = true;
        return report;
    }
    report.trap_time = trap_time(p, model.m, model.k);

    IntegratorConfig icfg;
    icfg.t_end = initial.t + horizon;
    icfg.dt = dt > 0.0 ? dt : default_dt(model);
    icfg.sample_every = std::max(1, static_cast<int>(horizon / icfg.dt / 200000.0));

    const Trajectory traj = integrate(initial, model, icfg);
    const double slack = traj.integration_slack() + 1e-9;

    report.sector_contained = true;
    report.sector_after_trap = true;
    for (const PhaseState& s : traj.samples) {
        const double d = subset_diameter(s.theta, p.majority);
        if (d > kPi - p.alpha + slack)
            report.sector_contained = false;
        if (s.t > initial.t + report.trap_time + slack && d > kPi - p.alpha - p.beta + slack)
            report.sector_after_trap = false;
    }

    const SyncVerdict verdict = detect_frequency_sync(traj, sync_eps, default_sync_window(traj));
    report.frequency_synced = verdict.synced;
    const PhaseState& last = traj.samples.back();
    double residual = 0.0;
    for (double v : last.dtheta)
        residual = std::max(residual, std::abs(v - model.omega_mean));
    report.final_velocity_residual = residual;
    report.collision_count = traj.collisions.size();
    return report;
}

namespace {

struct RunOutcome {
    bool hypothesis_ok = true;
    bool synced = false;
    double residual = 0.0;
    double sup_diameter = 0.0;
    bool bound_violated = false;
};

RunOutcome execute_run(const EnsembleSpec& spec, std::uint64_t run_index) {
    RandomStream rng(substream_seed(spec.seed, run_index));
    const int n = spec.model.n;

    PhaseState initial;
    initial.t = 0.0;
    initial.theta.resize(n);
    initial.dtheta.resize(n);
    for (int i = 0; i < n; ++i)
        initial.theta[i] = rng.uniform(spec.phase_lo, spec.phase_hi);
    for (int i = 0; i < n; ++i)
        initial.dtheta[i] = rng.uniform(spec.vel_lo, spec.vel_hi);

    ModelParams params = spec.model;
    if (spec.freq_interval) {
        std::vector<double> omega(n);
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            omega[i] = rng.uniform(spec.freq_interval->first, spec.freq_interval->second);
            mean += omega[i];
        }
        mean /= n;
        for (double& w : omega)
            w -= mean;
        params = ModelParams(spec.model.m, spec.model.k, std::move(omega));
    }

    RunOutcome out;
    if (!check_n3(params).overall()) {
        out.hypothesis_ok = false;
        return out;
    }

    const double dv0 = diameter(initial.dtheta);
    const double d0 = diameter(initial.theta);
    const double domega = diameter(params.omega);
    const N3Constants consts = n3_constants(params.m, params.k, dv0, d0, domega);

    IntegratorConfig icfg;
    icfg.dt = default_dt(params);
    icfg.sample_every = spec.sample_every;
    icfg.t_end = spec.horizon > 0.0
                     ? spec.horizon
                     : std::max(200.0 / params.k, 20.0 * (consts.t1 + 2.0 * consts.gamma));

    const Trajectory traj = integrate(initial, params, icfg);
    for (const PhaseState& s : traj.samples)
        out.sup_diameter = std::max(out.sup_diameter, diameter(s.theta));

    const double winding_cap = 4.0 * static_cast<double>(consts.n) * kPi + consts.alpha3;
    out.bound_violated = out.sup_diameter > winding_cap + traj.integration_slack();

    const SyncVerdict verdict =
        detect_frequency_sync(traj, spec.sync_eps, default_sync_window(traj));
    out.synced = verdict.synced;
    out.residual = verdict.max_residual;
    return out;
}

} // namespace

MonteCarloSummary run_n3_montecarlo(const EnsembleSpec& spec) {
    if (spec.model.n != 3)
        throw std::domain_error("run_n3_montecarlo: ensemble model must have N = 3");
    if (spec.count < 0)
        throw std::invalid_argument("run_n3_montecarlo: count must be nonnegative");
    if (!check_n3(spec.model).overall())
        throw std::domain_error("run_n3_montecarlo: model fails the N = 3 hypotheses");

    MonteCarloSummary summary;
    summary.seed = spec.seed;
    summary.runs = spec.count;
    if (spec.count == 0)
        return summary;

    std::vector<RunOutcome> outcomes(spec.count);
    const int hw = static_cast<int>(std::thread::hardware_concurrency());
    const int workers = std::clamp(spec.threads > 0 ? spec.threads : hw, 1, spec.count);

    std::vector<std::future<void>> futures;
    futures.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        futures.push_back(std::async(std::launch::async, [&, w] {
            for (int r = w; r < spec.count; r += workers)
                outcomes[r] = execute_run(spec, static_cast<std::uint64_t>(r));
        }));
    }
    for (auto& f : futures)
        f.get();

    for (const RunOutcome& out : outcomes) {
        if (!out.hypothesis_ok) {
            ++summary.hypothesis_rejections;
            continue;
        }
        if (out.synced)
            ++summary.sync_successes;
        if (out.bound_violated)
            ++summary.diameter_bound_violations;
        summary.max_diameter = std::max(summary.max_diameter, out.sup_diameter);
        summary.worst_residual = std::max(summary.worst_residual, out.residual);
    }
    return summary;
}

std::string to_json(const CounterexampleReport& report) {
    nlohmann::ordered_json doc;
    doc["initial_diameter"] = report.initial_diameter;
    doc["initial_diameter_rate"] = report.initial_diameter_rate;
    doc["max_diameter"] = report.max_diameter;
    doc["bound_dominated"] = report.bound_dominated;
    doc["final_lower_bound"] = report.lower_bound.empty() ? 0.0 : report.lower_bound.back();
    doc["samples"] = report.t.size();
    return doc.dump(2);
}

std::string to_json(const Thm2ShowcaseReport& report) {
    nlohmann::ordered_json doc;
    doc["refused"] = report.refused;
    doc["hypotheses"] = nlohmann::ordered_json::parse(to_json(report.hypotheses));
    doc["trap_time"] = report.trap_time;
    doc["sector_contained"] = report.sector_contained;
    doc["sector_after_trap"] = report.sector_after_trap;
    doc["frequency_synced"] = report.frequency_synced;
    doc["final_velocity_residual"] = report.final_velocity_residual;
    doc["collision_count"] = report.collision_count;
    return doc.dump(2);
}

std::string to_json(const MonteCarloSummary& summary) {
    nlohmann::ordered_json doc;
    doc["runs"] = summary.runs;
    doc["sync_successes"] = summary.sync_successes;
    doc["max_diameter"] = summary.max_diameter;
    doc["worst_residual"] = summary.worst_residual;
    doc["diameter_bound_violations"] = summary.diameter_bound_violations;
    doc["hypothesis_rejections"] = summary.hypothesis_rejections;
    doc["seed"] = summary.seed;
    return doc.dump(2);
}

} // namespace kmlab
