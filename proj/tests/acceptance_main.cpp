// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are pinned here, not configurable.

#include "kmlab/integrator.hpp"
#include "kmlab/metrics.hpp"
#include "kmlab/model.hpp"
#include "kmlab/random.hpp"
#include "kmlab/scenarios.hpp"
#include "kmlab/theory.hpp"
#include "support.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

using namespace kmlab;
using kmlab::test::InstanceRanges;
using kmlab::test::RandomInstance;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass)
        ++g_failures;
}

std::string fmt(const char* format, ...) {
    char buf[512];
    va_list args;
    va_start(args, format);
    std::vsnprintf(buf, sizeof buf, format, args);
    va_end(args);
    return buf;
}

std::vector<RandomInstance> criterion1_instances() {
    RandomStream rng(20'240'601);
    InstanceRanges ranges;
    ranges.n_min = 2;
    ranges.n_max = 6;
    ranges.m_lo = 0.01;
    ranges.m_hi = 1.0;
    ranges.k_lo = 0.5;
    ranges.k_hi = 5.0;
    ranges.vel_max = 10.0;
    ranges.omega_max = 2.0;
    std::vector<RandomInstance> instances;
    instances.reserve(200);
    for (int i = 0; i < 200; ++i)
        instances.push_back(kmlab::test::random_instance(rng, ranges));
    return instances;
}

// Criteria 1 and 2 share one integration pass over the same 200 instances,
// run in the mean-zero co-rotating frame (pairwise differences are identical
// in both frames, so the envelope check is unaffected).
void criteria_1_and_2() {
    const Stopwatch clock;
    const auto instances = criterion1_instances();

    double worst_overflow = -1e300;
    double worst_slack = 0.0;
    bool slack_ok = true;
    double worst_mean_err = 0.0;

    for (const RandomInstance& inst : instances) {
        const ReducedSystem reduced = to_reduced(inst.initial, inst.params);

        IntegratorConfig cfg;
        cfg.t_end = 20.0;
        cfg.dt = default_dt(reduced.params) / 4.0;
        const auto steps = static_cast<long long>(20.0 / cfg.dt);
        cfg.sample_every = std::max(1, static_cast<int>(steps / 20000));

        const Trajectory traj = integrate(reduced.state, reduced.params, cfg);
        const double eps_int = traj.integration_slack();
        worst_slack = std::max(worst_slack, eps_int);
        if (eps_int > 1e-5)
            slack_ok = false;
        worst_overflow =
            std::max(worst_overflow, kmlab::test::envelope_overflow(traj) - eps_int);

        double th0 = 0.0, v0 = 0.0;
        for (int i = 0; i < reduced.params.n; ++i) {
            th0 += reduced.state.theta[i];
            v0 += reduced.state.dtheta[i];
        }
        th0 /= reduced.params.n;
        v0 /= reduced.params.n;
        for (const PhaseState& s : traj.samples) {
            const auto [th, v] = mean_phase_exact(th0, v0, reduced.params, s.t);
            double th_sim = 0.0, v_sim = 0.0;
            for (int i = 0; i < reduced.params.n; ++i) {
                th_sim += s.theta[i];
                v_sim += s.dtheta[i];
            }
            th_sim /= reduced.params.n;
            v_sim /= reduced.params.n;
            worst_mean_err = std::max({worst_mean_err, std::abs(th_sim - th), std::abs(v_sim - v)});
        }
    }

    const double elapsed = clock.seconds();
    report(1, "velocity-difference envelope over 200 random instances",
           worst_overflow <= 0.0 && slack_ok && elapsed <= 60.0,
           fmt("max overflow %.2e, eps_int max %.2e <= 1e-5, %.1fs <= 60s", worst_overflow,
               worst_slack, elapsed));
    report(2, "mean phase and velocity track the closed form",
           worst_mean_err <= 1e-7,
           fmt("sup-norm mismatch %.2e <= 1e-7", worst_mean_err));
}

void criterion_3() {
    RandomStream rng(333);
    InstanceRanges ranges;
    ranges.n_min = 4;
    ranges.n_max = 4;
    ranges.m_lo = 0.25;
    ranges.m_hi = 0.5;
    ranges.k_lo = 0.5;
    ranges.k_hi = 1.5;
    ranges.vel_max = 0.4;
    ranges.omega_max = 0.5;
    ranges.mean_zero_freq = true;

    double worst_residual = 0.0;
    double worst_ratio = 1e300;
    double worst_h_bound = -1e300;
    double worst_telescope = 0.0;
    for (int run = 0; run < 20; ++run) {
        const RandomInstance inst = kmlab::test::random_instance(rng, ranges);

        IntegratorConfig cfg;
        cfg.t_end = 10.0;
        cfg.error_check_interval = 0;
        const Trajectory coarse = integrate(inst.initial, inst.params, cfg);
        const double r1 = energy_ledger(coarse).max_abs_residual;

        IntegratorConfig half = cfg;
        half.dt = default_dt(inst.params) / 2.0;
        const double r2 = energy_ledger(integrate(inst.initial, inst.params, half)).max_abs_residual;

        worst_residual = std::max(worst_residual, r1);
        worst_ratio = std::min(worst_ratio, r1 / r2);

        IntegratorConfig fine = cfg;
        fine.dt = default_dt(inst.params) / 32.0;
        const EnergyLedger ledger = energy_ledger(integrate(inst.initial, inst.params, fine));
        for (std::size_t s = 0; s < ledger.t.size(); ++s) {
            worst_h_bound = std::max(worst_h_bound, std::abs(ledger.int_h[s]) -
                                                        ((inst.params.n - 1) * inst.params.k));
            worst_telescope = std::max(
                worst_telescope, std::abs(ledger.int_h[s] - (ledger.phi[s] - ledger.phi[0])));
        }
    }
    report(3, "energy balance residual and coupling-work telescope",
           worst_residual <= 1e-4 && worst_ratio >= 3.5 && worst_h_bound <= 1e-6 &&
               worst_telescope <= 1e-6,
           fmt("max|R| %.2e <= 1e-4, halving ratio %.2f >= 3.5, |intH|-(N-1)K %.2e <= 1e-6, "
               "telescope %.2e <= 1e-6",
               worst_residual, worst_ratio, worst_h_bound, worst_telescope));
}

void criteria_4_and_5() {
    const Stopwatch clock;
    const Thm2Params p{5, kPi / 2.0, 0.1, 0.45595, 2.5};
    const ModelParams model(0.0018, 1.0, {0.2, 0.1, 0.0, -0.1, -0.2});
    const PhaseState initial{0.0, {0.0, 0.25, 0.5, 0.75, 1.0}, {0.0, 0.0, 0.0, 0.0, 0.0}};

    const bool hypotheses_ok = check_thm2(model, initial, p).overall();
    const double t_trap = trap_time(p, model.m, model.k);

    IntegratorConfig cfg;
    cfg.dt = model.m / 20.0;
    cfg.t_end = 100.0;
    cfg.sample_every = 10;
    const Trajectory traj = integrate(initial, model, cfg);
    const double slack = traj.integration_slack();

    bool sector_all = true;
    bool sector_trapped = true;
    for (const PhaseState& s : traj.samples) {
        const double d = diameter(s.theta);
        if (d > kPi - p.alpha + slack)
            sector_all = false;
        if (s.t > t_trap + slack && d > kPi - p.alpha - p.beta + slack)
            sector_trapped = false;
    }
    double residual = 0.0;
    for (double v : traj.samples.back().dtheta)
        residual = std::max(residual, std::abs(v - model.omega_mean));

    const double elapsed = clock.seconds();
    report(4, "majority-sector frequency synchronization desk run",
           hypotheses_ok && sector_all && sector_trapped && residual < 1e-6 && elapsed <= 120.0,
           fmt("hypotheses %s, sector %s, trapped(after %.3f) %s, residual %.2e < 1e-6, "
               "%.1fs <= 120s",
               hypotheses_ok ? "pass" : "fail", sector_all ? "held" : "violated", t_trap,
               sector_trapped ? "held" : "violated", residual, elapsed));

    // identical-frequency variant reaches phase synchronization
    const ModelParams identical(0.0018, 1.0, {0.0, 0.0, 0.0, 0.0, 0.0});
    const bool thm3_ok = check_thm3(identical, initial, p).overall();
    const Trajectory traj5 = integrate(initial, identical, cfg);
    const SyncVerdict ps = detect_phase_sync(traj5, 1e-6, default_sync_window(traj5));
    report(5, "identical-frequency phase synchronization desk run",
           thm3_ok && ps.synced,
           fmt("hypotheses %s, phase residual %.2e <= 1e-6", thm3_ok ? "pass" : "fail",
               ps.max_residual));
}

void criterion_6() {
    const Stopwatch clock;
    const N3Constants c = n3_constants(0.03, 1.0, 0.0, 0.0, 0.04);
    const bool constants_ok = std::abs(c.g - 0.050955) / 0.050955 < 1e-4 &&
                              std::abs(c.lambda3 - 0.045859) / 0.045859 < 1e-4 &&
                              std::abs(c.mk_bound3 - 0.031898) / 0.031898 < 1e-4;

    const ModelParams model(0.03, 1.0, {0.02, 0.0, -0.02});
    EnsembleSpec spec{.seed = 2026,
                      .count = 100,
                      .phase_lo = -50.0 * kPi,
                      .phase_hi = 50.0 * kPi,
                      .vel_lo = -50.0,
                      .vel_hi = 50.0,
                      .freq_interval = std::nullopt,
                      .model = model,
                      .horizon = 200.0,
                      .sync_eps = 1e-5,
                      .sample_every = 1,
                      .threads = 0};
    const MonteCarloSummary summary = run_n3_montecarlo(spec);

    const double elapsed = clock.seconds();
    report(6, "unconditional N=3 synchronization, constants and Monte Carlo",
           constants_ok && summary.sync_successes == 100 &&
               summary.diameter_bound_violations == 0 && summary.hypothesis_rejections == 0 &&
               elapsed <= 600.0,
           fmt("g=%.6f l3=%.6f mk3=%.6f, %d/100 synced, %d winding-cap violations, "
               "max D %.1f, worst residual %.2e, %.1fs <= 600s",
               c.g, c.lambda3, c.mk_bound3, summary.sync_successes,
               summary.diameter_bound_violations, summary.max_diameter, summary.worst_residual,
               elapsed));
}

void criterion_7() {
    double previous = -1e300;
    bool increasing = true;
    bool above_bound = true;
    bool dominated = true;
    std::string detail;
    for (double a : {10.0, 100.0, 1000.0}) {
        CounterexampleConfig cfg{0.1, 0.2, 0.3, a, 1.0, 1.0, 3.0};
        const CounterexampleReport rep = run_counterexample(cfg);
        const double lb =
            0.1 + 2.0 * a * 1.0 * (1.0 - std::exp(-3.0)) - 2.0 * 3.0;
        if (rep.max_diameter <= lb)
            above_bound = false;
        if (rep.max_diameter <= previous)
            increasing = false;
        if (!rep.bound_dominated)
            dominated = false;
        previous = rep.max_diameter;
        detail += fmt("a=%g: maxD %.1f > bound %.1f; ", a, rep.max_diameter, lb);
    }
    report(7, "four-oscillator diameter growth counterexample",
           increasing && above_bound && dominated,
           detail + (dominated ? "separation dominated the bound" : "bound violated"));
}

void criterion_8() {
    const ModelParams p(0.4, 1.0, {0.3, 0.0, -0.3});
    const PhaseState initial{0.0, {-0.5, 0.0, 0.7}, {0.2, -0.1, 0.1}};
    const Trajectory ref = reference_integrate(initial, p, 5.0);

    auto error_at = [&](double dt) {
        IntegratorConfig cfg;
        cfg.dt = dt;
        cfg.t_end = 5.0;
        cfg.error_check_interval = 0;
        return kmlab::test::sup_norm_state_diff(integrate(initial, p, cfg).samples.back(),
                                                ref.samples.back());
    };
    const double e1 = error_at(0.08);
    const double e2 = error_at(0.04);
    const double e3 = error_at(0.02);
    const double order = 0.5 * (std::log2(e1 / e2) + std::log2(e2 / e3));
    report(8, "observed convergence order of the fixed-step method",
           order >= 3.5 && order <= 4.5, fmt("order %.3f in [3.5, 4.5]", order));
}

void criterion_9() {
    RandomStream rng(909);
    double worst = 0.0;
    for (int rep = 0; rep < 10000; ++rep) {
        const int n = 2 + rep % 7;
        PhaseState s;
        s.theta.resize(n);
        s.dtheta.assign(n, 0.0);
        for (double& th : s.theta)
            th = rng.uniform(-2.0 * kPi, 2.0 * kPi);
        const int i = rep % n;
        const int j = (i + 1 + rep % (n - 1)) % n;
        const AsymmetryForms forms = coupling_asymmetry_forms(s, i, j);
        worst = std::max(worst, std::abs(forms.direct - forms.factored));
    }
    report(9, "coupling-asymmetry trigonometric identity on 10^4 states",
           worst <= 1e-12, fmt("max |direct - factored| %.2e <= 1e-12", worst));
}

} // namespace

int main() {
    std::printf("kmlab acceptance suite\n");
    criteria_1_and_2();
    criterion_3();
    criteria_4_and_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
