#include "commands.hpp"

#include "run_config.hpp"

#include "kmlab/integrator.hpp"
#include "kmlab/metrics.hpp"
#include "kmlab/model.hpp"
#include "kmlab/random.hpp"
#include "kmlab/scenarios.hpp"
#include "kmlab/theory.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

namespace kmlab::cli {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::filesystem::path prepare_out_dir(const CommonOptions& opts) {
    std::filesystem::path dir(opts.out_dir);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec && !std::filesystem::is_directory(dir))
        throw ConfigError("output directory '" + opts.out_dir + "' is not writable");
    return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
    if (!text.empty() && text.back() != '\n')
        out << '\n';
}

ModelParams model_from_config(Config& cfg) {
    const double m = cfg.number("m");
    const double k = cfg.number("K");
    std::vector<double> omega = cfg.table("omega");
    if (cfg.has("N")) {
        const long long n = cfg.integer("N");
        if (n != static_cast<long long>(omega.size()))
            throw ConfigError("N does not match the omega table length");
    }
    try {
        return ModelParams(m, k, std::move(omega));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

IntegratorConfig integrator_from_config(Config& cfg, double default_t_end = 0.0) {
    IntegratorConfig icfg;
    const std::string method = cfg.word_or("method", "rk4");
    if (method == "rk4")
        icfg.method = Method::Rk4Fixed;
    else if (method == "rk45")
        icfg.method = Method::Rk45Adaptive;
    else
        throw ConfigError("method must be rk4 or rk45, got '" + method + "'");
    icfg.dt = cfg.number_or("dt", 0.0);
    icfg.rel_tol = cfg.number_or("rel_tol", 1e-9);
    icfg.abs_tol = cfg.number_or("abs_tol", 1e-11);
    icfg.t_end = cfg.number_or("t_end", default_t_end);
    icfg.sample_every = static_cast<int>(cfg.integer_or("sample_every", 1));
    return icfg;
}

PhaseState explicit_initial(Config& cfg, const ModelParams& params) {
    PhaseState s;
    s.t = 0.0;
    s.theta = cfg.table("theta0");
    s.dtheta = cfg.table("dtheta0");
    if (static_cast<int>(s.theta.size()) != params.n ||
        static_cast<int>(s.dtheta.size()) != params.n)
        throw ConfigError("theta0/dtheta0 length does not match the oscillator count");
    return s;
}

struct SimulateSetup {
    ModelParams params;
    PhaseState initial;
    std::uint64_t seed;
};

SimulateSetup resolve_simulate_source(Config& cfg, const CommonOptions& opts) {
    const bool explicit_src = cfg.has("theta0") || cfg.has("dtheta0");
    const bool random_src = cfg.has("phase_lo") || cfg.has("phase_hi") || cfg.has("vel_lo") ||
                            cfg.has("vel_hi");
    const bool scenario_src = cfg.has("scenario");
    const int sources = int(explicit_src) + int(random_src) + int(scenario_src);
    if (sources != 1)
        throw ConfigError("exactly one initial-condition source required "
                          "(theta0/dtheta0, phase/vel ranges, or scenario)");

    const std::uint64_t config_seed = static_cast<std::uint64_t>(cfg.integer_or("seed", 0));
    const std::uint64_t seed = opts.seed_override.value_or(config_seed);

    if (scenario_src) {
        const std::string name = cfg.word("scenario");
        if (name != "counterexample")
            throw ConfigError("unknown scenario '" + name + "'");
        CounterexampleConfig ce{cfg.number("eps1"), cfg.number("eps2"), cfg.number("eps3"),
                                cfg.number("a"),    cfg.number("m"),    cfg.number("K"),
                                0.0};
        try {
            auto [params, initial] = build_counterexample(ce);
            return {std::move(params), std::move(initial), seed};
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }

    ModelParams params = model_from_config(cfg);
    if (explicit_src)
        return {params, explicit_initial(cfg, params), seed};

    RandomStream rng(substream_seed(seed, 0));
    const double plo = cfg.number("phase_lo"), phi = cfg.number("phase_hi");
    const double vlo = cfg.number("vel_lo"), vhi = cfg.number("vel_hi");
    PhaseState s;
    s.t = 0.0;
    s.theta.resize(params.n);
    s.dtheta.resize(params.n);
    for (int i = 0; i < params.n; ++i)
        s.theta[i] = rng.uniform(plo, phi);
    for (int i = 0; i < params.n; ++i)
        s.dtheta[i] = rng.uniform(vlo, vhi);
    return {std::move(params), std::move(s), seed};
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          std::uint64_t seed) {
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    const int n = traj.params.n;
    out << "# seed=" << seed << "\n";
    out << "t";
    for (int i = 1; i <= n; ++i)
        out << ",theta_" << i;
    for (int i = 1; i <= n; ++i)
        out << ",dtheta_" << i;
    out << ",D,Ddot,E_N\n";
    for (const PhaseState& s : traj.samples) {
        out << fmt17(s.t);
        for (double v : s.theta)
            out << ',' << fmt17(v);
        for (double v : s.dtheta)
            out << ',' << fmt17(v);
        const double d = diameter(s.theta);
        const double ddot = n >= 2 ? diameter_rate(s) : 0.0;
        double e = 0.0;
        for (double v : s.dtheta)
            e += v * v;
        out << ',' << fmt17(d) << ',' << fmt17(ddot) << ',' << fmt17(e) << "\n";
    }
}

Thm2Params thm_params_from_config(Config& cfg, const ModelParams& model, bool identical) {
    Thm2Params p;
    p.alpha = cfg.number("alpha");
    p.beta = cfg.number("beta");
    p.lambda = cfg.number("lambda");
    if (identical) {
        p.majority = model.n;
        p.mu = 0.0;  // pinned by the identical-case formula inside check_thm3
    } else {
        p.majority = static_cast<int>(cfg.integer("M"));
        p.mu = cfg.number("mu");
    }
    return p;
}

} // namespace

int cmd_simulate(const CommonOptions& opts) {
    Config cfg = Config::load(opts.config_path);
    SimulateSetup setup = resolve_simulate_source(cfg, opts);
    IntegratorConfig icfg = integrator_from_config(cfg);
    const double sync_eps = cfg.number_or("sync_eps", 1e-6);
    cfg.finalize();

    const auto out_dir = prepare_out_dir(opts);
    const Trajectory traj = integrate(setup.initial, setup.params, icfg);
    write_trajectory_csv(out_dir / "trajectory.csv", traj, setup.seed);

    nlohmann::ordered_json summary;
    summary["seed"] = setup.seed;
    summary["method"] = traj.method == Method::Rk4Fixed ? "rk4" : "rk45";
    summary["steps_taken"] = traj.steps_taken;
    summary["max_est_local_error"] = traj.max_est_local_error;
    summary["collision_count"] = traj.collisions.size();

    double max_d = 0.0;
    for (const PhaseState& s : traj.samples)
        max_d = std::max(max_d, diameter(s.theta));
    summary["max_diameter"] = max_d;

    if (traj.samples.size() >= 2) {
        const double window = default_sync_window(traj);
        const SyncVerdict fs = detect_frequency_sync(traj, sync_eps, window);
        const SyncVerdict ps = detect_phase_sync(traj, sync_eps, window);
        summary["frequency_synced"] = fs.synced;
        summary["frequency_residual"] = fs.max_residual;
        summary["phase_synced"] = ps.synced;
        summary["phase_residual"] = ps.max_residual;
        summary["energy_residual_max"] = energy_ledger(traj).max_abs_residual;
    }
    write_text(out_dir / "summary.json", summary.dump(2));
    return 0;
}

int cmd_check(const CommonOptions& opts, const std::string& which) {
    Config cfg = Config::load(opts.config_path);
    ConditionReport report;
    if (which == "n3") {
        const ModelParams model = model_from_config(cfg);
        cfg.finalize();
        if (model.n != 3)
            throw ConfigError("check n3 requires exactly three oscillators");
        report = check_n3(model);
    } else if (which == "thm2" || which == "thm3") {
        const ModelParams model = model_from_config(cfg);
        const PhaseState initial = explicit_initial(cfg, model);
        const Thm2Params p = thm_params_from_config(cfg, model, which == "thm3");
        cfg.finalize();
        report = which == "thm2" ? check_thm2(model, initial, p)
                                 : check_thm3(model, initial, p);
    } else {
        throw ConfigError("--which must be thm2, thm3 or n3");
    }

    const std::string doc = to_json(report);
    std::cout << doc << "\n";
    write_text(prepare_out_dir(opts) / "report.json", doc);
    return report.overall() ? 0 : 1;
}

int cmd_sweep(const CommonOptions& opts) {
    Config cfg = Config::load(opts.config_path);
    const int n = static_cast<int>(cfg.integer("N"));
    const int majority = static_cast<int>(cfg.integer("M"));
    const std::string objective_word = cfg.word_or("objective", "mu_max");
    const int grid_level = static_cast<int>(cfg.integer_or("grid_level", 6));
    const int refine_rounds = static_cast<int>(cfg.integer_or("refine_rounds", 3));
    const double lambda_span = cfg.number_or("lambda_span", 10.0);
    cfg.finalize();

    std::vector<std::pair<std::string, SearchObjective>> objectives;
    std::istringstream words(objective_word);
    std::string word;
    while (words >> word) {
        if (word == "mu_max")
            objectives.emplace_back(word, SearchObjective::MaxMuMax);
        else if (word == "mk_bound")
            objectives.emplace_back(word, SearchObjective::MaxMkBound);
        else if (word == "domega_over_k")
            objectives.emplace_back(word, SearchObjective::MaxDomegaOverK);
        else
            throw ConfigError("objective must be mu_max, mk_bound or domega_over_k");
    }

    bool any_infeasible = false;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    std::ostringstream csv;
    csv << "objective,alpha,beta,lambda,mu,value,feasible\n";
    for (const auto& [name, objective] : objectives) {
        SearchResult res;
        try {
            res = feasible_search(n, majority, objective, grid_level, refine_rounds, lambda_span);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!res.feasible)
            any_infeasible = true;
        nlohmann::ordered_json row;
        row["objective"] = name;
        row["alpha"] = res.best.alpha;
        row["beta"] = res.best.beta;
        row["lambda"] = res.best.lambda;
        row["mu"] = res.best.mu;
        row["value"] = res.objective;
        row["feasible"] = res.feasible;
        rows.push_back(std::move(row));
        csv << name << ',' << fmt17(res.best.alpha) << ',' << fmt17(res.best.beta) << ','
            << fmt17(res.best.lambda) << ',' << fmt17(res.best.mu) << ',' << fmt17(res.objective)
            << ',' << (res.feasible ? "true" : "false") << "\n";
    }

    const auto out_dir = prepare_out_dir(opts);
    if (opts.format == "csv") {
        std::cout << csv.str();
        write_text(out_dir / "sweep.csv", csv.str());
    } else {
        std::cout << rows.dump(2) << "\n";
        write_text(out_dir / "sweep.json", rows.dump(2));
    }
    return any_infeasible ? 1 : 0;
}

int cmd_montecarlo(const CommonOptions& opts) {
    Config cfg = Config::load(opts.config_path);
    EnsembleSpec spec{.seed = 0,
                      .count = 0,
                      .phase_lo = 0,
                      .phase_hi = 0,
                      .vel_lo = 0,
                      .vel_hi = 0,
                      .freq_interval = std::nullopt,
                      .model = model_from_config(cfg),
                      .horizon = 0,
                      .sync_eps = 1e-5,
                      .sample_every = 1,
                      .threads = 0};
    spec.seed = opts.seed_override.value_or(static_cast<std::uint64_t>(cfg.integer_or("seed", 0)));
    spec.count = static_cast<int>(cfg.integer("count"));
    spec.phase_lo = cfg.number_or("phase_lo", -50.0 * kPi);
    spec.phase_hi = cfg.number_or("phase_hi", 50.0 * kPi);
    spec.vel_lo = cfg.number_or("vel_lo", -50.0 * spec.model.k);
    spec.vel_hi = cfg.number_or("vel_hi", 50.0 * spec.model.k);
    if (cfg.has("freq_lo") || cfg.has("freq_hi"))
        spec.freq_interval = std::make_pair(cfg.number("freq_lo"), cfg.number("freq_hi"));
    spec.horizon = cfg.number_or("horizon", 0.0);
    spec.sync_eps = cfg.number_or("sync_eps", 1e-5);
    spec.sample_every = static_cast<int>(cfg.integer_or("sample_every", 1));
    spec.threads = static_cast<int>(cfg.integer_or("threads", 0));
    cfg.finalize();

    if (spec.model.n != 3) {
        std::cerr << "montecarlo: model must have exactly three oscillators\n";
        return 1;
    }
    const ConditionReport gate = check_n3(spec.model);
    if (!gate.overall()) {
        std::cout << to_json(gate) << "\n";
        std::cerr << "montecarlo: refused, model fails the N=3 hypotheses\n";
        return 1;
    }

    const MonteCarloSummary summary = run_n3_montecarlo(spec);
    const std::string doc = to_json(summary);
    std::cout << doc << "\n";
    write_text(prepare_out_dir(opts) / "montecarlo.json", doc);
    const bool all_good = summary.sync_successes == summary.runs &&
                          summary.hypothesis_rejections == 0 &&
                          summary.diameter_bound_violations == 0;
    return all_good ? 0 : 1;
}

} // namespace kmlab::cli
