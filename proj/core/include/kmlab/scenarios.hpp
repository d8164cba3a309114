#pragma once

#include "kmlab/integrator.hpp"
#include "kmlab/model.hpp"
#include "kmlab/theory.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kmlab {

/// Four identical oscillators prepared so that the initial diameter and
/// diameter rate reveal nothing about the opposing velocity pair hidden in
/// the interior.
struct CounterexampleConfig {
    double eps1;
    double eps2;
    double eps3;     ///< 0 < eps1 < eps2 < eps3 < pi/6
    double a;        ///< interior velocity magnitude, > 0
    double m;
    double k;
    double horizon;  ///< simulation span T
};

std::pair<ModelParams, PhaseState> build_counterexample(const CounterexampleConfig& cfg);

struct CounterexampleReport {
    double initial_diameter;
    double initial_diameter_rate;
    double max_diameter;                ///< max_t D(Theta(t)) over [0, T]
    std::vector<double> t;
    std::vector<double> lower_bound;    ///< eps2 - eps1 + 2am(1 - e^{-t/m}) - 2Kt
    std::vector<double> separation;     ///< simulated theta_3 - theta_2
    bool bound_dominated;               ///< separation >= lower_bound at every sample
};

CounterexampleReport run_counterexample(const CounterexampleConfig& cfg);

struct Thm2ShowcaseReport {
    bool refused = false;            ///< hypotheses failed; nothing was simulated
    ConditionReport hypotheses;
    double trap_time = 0.0;
    bool sector_contained = false;   ///< D(Theta_M(t)) <= pi - alpha at every sample
    bool sector_after_trap = false;  ///< <= pi - alpha - beta once t > trap_time
    bool frequency_synced = false;
    double final_velocity_residual = 0.0;
    std::size_t collision_count = 0;
};

/// dt <= 0 selects default_dt(model).
Thm2ShowcaseReport run_thm2_showcase(const Thm2Params& p, const ModelParams& model,
                                     const PhaseState& initial, double horizon,
                                     double sync_eps = 1e-6, double dt = 0.0);

/// Random-ensemble specification. Frequencies default to the model's vector;
/// when freq_interval is set they are drawn uniformly and recentered to mean
/// zero for every run.
struct EnsembleSpec {
    std::uint64_t seed = 0;
    int count = 0;
    double phase_lo = 0.0;
    double phase_hi = 0.0;
    double vel_lo = 0.0;
    double vel_hi = 0.0;
    std::optional<std::pair<double, double>> freq_interval;
    ModelParams model;
    double horizon = 0.0;   ///< <= 0 selects max(200/K, 20*(T1 + 2*gamma)) per run
    double sync_eps = 1e-5;
    int sample_every = 1;
    int threads = 0;        ///< 0 = hardware concurrency
};

struct MonteCarloSummary {
    int runs = 0;
    int sync_successes = 0;
    double max_diameter = 0.0;     ///< sup over runs and samples of D(Theta(t))
    double worst_residual = 0.0;   ///< largest trailing-window velocity residual
    int diameter_bound_violations = 0;  ///< runs where sup_t D exceeded 4*n*pi + alpha3
    int hypothesis_rejections = 0;      ///< runs whose sampled frequencies failed check_n3
    std::uint64_t seed = 0;
};

/// Monte-Carlo verification of the unconditional three-oscillator theorem.
/// Requires spec.model to pass check_n3; runs execute concurrently with
/// order-independent aggregation.
MonteCarloSummary run_n3_montecarlo(const EnsembleSpec& spec);

std::string to_json(const CounterexampleReport& report);
std::string to_json(const Thm2ShowcaseReport& report);
std::string to_json(const MonteCarloSummary& summary);

} // namespace kmlab
