#include "kmlab/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>

namespace kmlab {

namespace {

// State layout: y = [theta_0..theta_{n-1}, dtheta_0..dtheta_{n-1}].
struct Rhs {
    const ModelParams& params;
    void operator()(std::span<const double> y, std::span<double> dydt) const {
        const int n = params.n;
        for (int i = 0; i < n; ++i)
            dydt[i] = y[n + i];
        accelerations(y.subspan(0, n), y.subspan(n, n), params, dydt.subspan(n, n));
    }
};

struct Rk4Workspace {
    std::vector<double> k1, k2, k3, k4, tmp;
    explicit Rk4Workspace(std::size_t dim) : k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim) {}
};

void rk4_step(const Rhs& rhs, std::span<const double> y, double h, std::span<double> out,
              Rk4Workspace& w) {
    const std::size_t dim = y.size();
    rhs(y, w.k1);
    for (std::size_t i = 0; i < dim; ++i)
        w.tmp[i] = y[i] + 0.5 * h * w.k1[i];
    rhs(w.tmp, w.k2);
    for (std::size_t i = 0; i < dim; ++i)
        w.tmp[i] = y[i] + 0.5 * h * w.k2[i];
    rhs(w.tmp, w.k3);
    for (std::size_t i = 0; i < dim; ++i)
        w.tmp[i] = y[i] + h * w.k3[i];
    rhs(w.tmp, w.k4);
    for (std::size_t i = 0; i < dim; ++i)
        out[i] = y[i] + (h / 6.0) * (w.k1[i] + 2.0 * w.k2[i] + 2.0 * w.k3[i] + w.k4[i]);
}

bool all_finite(std::span<const double> y) {
    for (double v : y)
        if (!std::isfinite(v))
            return false;
    return true;
}

PhaseState unpack(double t, std::span<const double> y, int n) {
    PhaseState s;
    s.t = t;
    s.theta.assign(y.begin(), y.begin() + n);
    s.dtheta.assign(y.begin() + n, y.end());
    return s;
}

void record_collisions(const PhaseState& prev, const PhaseState& next, int n,
                       std::vector<CollisionEvent>& out) {
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double a = prev.theta[i] - prev.theta[j];
            const double b = next.theta[i] - next.theta[j];
            if ((a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) || (a != 0.0 && b == 0.0))
                out.push_back({i, j, prev.t, next.t});
        }
    }
}

Trajectory integrate_rk4(const PhaseState& initial, const ModelParams& params,
                         const IntegratorConfig& config, double dt) {
    const int n = params.n;
    const std::size_t dim = 2 * static_cast<std::size_t>(n);
    const double t0 = initial.t;
    const double span = config.t_end - t0;

    Trajectory traj{{}, params, {}, Method::Rk4Fixed, 0, 0.0, 0.0};
    traj.samples.push_back(initial);
    if (span <= 0.0)
        return traj;

    std::vector<double> y(dim), y_next(dim), y_half(dim), y_half2(dim);
    std::copy(initial.theta.begin(), initial.theta.end(), y.begin());
    std::copy(initial.dtheta.begin(), initial.dtheta.end(), y.begin() + n);

    const Rhs rhs{params};
    Rk4Workspace w(dim);

    const auto n_full = static_cast<std::int64_t>(span / dt);
    const double remainder = span - static_cast<double>(n_full) * dt;
    const bool has_tail = remainder > 1e-12 * dt;
    const std::int64_t n_steps = n_full + (has_tail ? 1 : 0);

    const PhaseState* prev_sample = &traj.samples.back();
    for (std::int64_t step = 0; step < n_steps; ++step) {
        const bool last = step == n_steps - 1;
        const double t_prev = t0 + static_cast<double>(step) * dt;
        const double t_next = last ? config.t_end : t0 + static_cast<double>(step + 1) * dt;
        const double h = last ? config.t_end - t_prev : dt;

        rk4_step(rhs, y, h, y_next, w);

        if (config.error_check_interval > 0 &&
            (step % config.error_check_interval == 0 || last)) {
            rk4_step(rhs, y, 0.5 * h, y_half, w);
            rk4_step(rhs, y_half, 0.5 * h, y_half2, w);
            double est = 0.0;
            for (std::size_t i = 0; i < dim; ++i)
                est = std::max(est, std::abs(y_next[i] - y_half2[i]));
            traj.max_est_local_error = std::max(traj.max_est_local_error, est);
            traj.accumulated_local_error +=
                est * static_cast<double>(last ? 1 : config.error_check_interval);
        }

        if (!all_finite(y_next))
            throw IntegrationError("non-finite state encountered", t_next);

        y.swap(y_next);
        ++traj.steps_taken;

        if (last || (step + 1) % config.sample_every == 0) {
            PhaseState s = unpack(t_next, y, n);
            record_collisions(*prev_sample, s, n, traj.collisions);
            traj.samples.push_back(std::move(s));
            prev_sample = &traj.samples.back();
        }
    }
    return traj;
}

// Dormand-Prince 5(4) tableau.
constexpr double A21 = 1.0 / 5.0;
constexpr double A31 = 3.0 / 40.0, A32 = 9.0 / 40.0;
constexpr double A41 = 44.0 / 45.0, A42 = -56.0 / 15.0, A43 = 32.0 / 9.0;
constexpr double A51 = 19372.0 / 6561.0, A52 = -25360.0 / 2187.0, A53 = 64448.0 / 6561.0,
                 A54 = -212.0 / 729.0;
constexpr double A61 = 9017.0 / 3168.0, A62 = -355.0 / 33.0, A63 = 46732.0 / 5247.0,
                 A64 = 49.0 / 176.0, A65 = -5103.0 / 18656.0;
constexpr double B1 = 35.0 / 384.0, B3 = 500.0 / 1113.0, B4 = 125.0 / 192.0,
                 B5 = -2187.0 / 6784.0, B6 = 11.0 / 84.0;
constexpr double E1 = 35.0 / 384.0 - 5179.0 / 57600.0, E3 = 500.0 / 1113.0 - 7571.0 / 16695.0,
                 E4 = 125.0 / 192.0 - 393.0 / 640.0, E5 = -2187.0 / 6784.0 + 92097.0 / 339200.0,
                 E6 = 11.0 / 84.0 - 187.0 / 2100.0, E7 = -1.0 / 40.0;

Trajectory integrate_dp45(const PhaseState& initial, const ModelParams& params,
                          const IntegratorConfig& config, double dt_init) {
    const int n = params.n;
    const std::size_t dim = 2 * static_cast<std::size_t>(n);
    const double dt_min = params.m * 1e-4;

    Trajectory traj{{}, params, {}, Method::Rk45Adaptive, 0, 0.0, 0.0};
    traj.samples.push_back(initial);
    if (config.t_end - initial.t <= 0.0)
        return traj;

    std::vector<double> y(dim), y5(dim), tmp(dim);
    std::vector<std::vector<double>> k(7, std::vector<double>(dim));
    std::copy(initial.theta.begin(), initial.theta.end(), y.begin());
    std::copy(initial.dtheta.begin(), initial.dtheta.end(), y.begin() + n);

    const Rhs rhs{params};
    double t = initial.t;
    double h = std::min(dt_init, config.t_end - t);
    std::int64_t accepted = 0;
    const PhaseState* prev_sample = &traj.samples.back();

    rhs(y, k[0]);  // FSAL seed
    while (t < config.t_end) {
        // the floor applies to the controller's step, not the final clamp
        if (h < dt_min)
            throw IntegrationError("adaptive step underflow below m*1e-4", t);
        const double h_step = std::min(h, config.t_end - t);

        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h_step * A21 * k[0][i];
        rhs(tmp, k[1]);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h_step * (A31 * k[0][i] + A32 * k[1][i]);
        rhs(tmp, k[2]);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h_step * (A41 * k[0][i] + A42 * k[1][i] + A43 * k[2][i]);
        rhs(tmp, k[3]);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h_step * (A51 * k[0][i] + A52 * k[1][i] + A53 * k[2][i] + A54 * k[3][i]);
        rhs(tmp, k[4]);
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h_step * (A61 * k[0][i] + A62 * k[1][i] + A63 * k[2][i] + A64 * k[3][i] +
                                 A65 * k[4][i]);
        rhs(tmp, k[5]);
        for (std::size_t i = 0; i < dim; ++i)
            y5[i] = y[i] + h_step * (B1 * k[0][i] + B3 * k[2][i] + B4 * k[3][i] + B5 * k[4][i] +
                                B6 * k[5][i]);
        rhs(y5, k[6]);

        double ratio = 0.0;
        double abs_err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double e = h_step * (E1 * k[0][i] + E3 * k[2][i] + E4 * k[3][i] + E5 * k[4][i] +
                                  E6 * k[5][i] + E7 * k[6][i]);
            const double scale =
                config.abs_tol + config.rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
            ratio = std::max(ratio, std::abs(e) / scale);
            abs_err = std::max(abs_err, std::abs(e));
        }

        if (ratio <= 1.0) {
            const double t_next = t + h_step;
            if (!all_finite(y5))
                throw IntegrationError("non-finite state encountered", t_next);
            y.swap(y5);
            k[0].swap(k[6]);
            t = t_next;
            ++accepted;
            ++traj.steps_taken;
            traj.max_est_local_error = std::max(traj.max_est_local_error, abs_err);
            traj.accumulated_local_error += abs_err;
            if (t >= config.t_end || accepted % config.sample_every == 0) {
                PhaseState s = unpack(t, y, n);
                record_collisions(*prev_sample, s, n, traj.collisions);
                traj.samples.push_back(std::move(s));
                prev_sample = &traj.samples.back();
            }
        }
        const double grow =
            ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        h *= std::clamp(grow, 0.2, 5.0);
    }
    return traj;
}

} // namespace

double default_dt(const ModelParams& params) {
    return std::min({params.m / 20.0, 1.0 / (20.0 * params.k), 0.01});
}

Trajectory integrate(const PhaseState& initial, const ModelParams& params,
                     const IntegratorConfig& config) {
    if (static_cast<int>(initial.theta.size()) != params.n ||
        static_cast<int>(initial.dtheta.size()) != params.n)
        throw std::invalid_argument("integrate: initial state dimension mismatch");
    if (!all_finite(initial.theta) || !all_finite(initial.dtheta) || !std::isfinite(initial.t))
        throw std::invalid_argument("integrate: initial state must be finite");
    if (config.sample_every < 1)
        throw std::invalid_argument("integrate: sample_every must be >= 1");
    if (config.t_end < initial.t)
        throw std::invalid_argument("integrate: t_end precedes initial time");
    if (config.method == Method::Rk45Adaptive && (!(config.rel_tol > 0.0) || !(config.abs_tol > 0.0)))
        throw std::invalid_argument("integrate: adaptive tolerances must be positive");

    const double dt = config.dt > 0.0 ? config.dt : default_dt(params);
    if (config.method == Method::Rk4Fixed)
        return integrate_rk4(initial, params, config, dt);
    return integrate_dp45(initial, params, config, dt);
}

Trajectory reference_integrate(const PhaseState& initial, const ModelParams& params,
                               double t_end) {
    constexpr double kAgreeTol = 1e-10;
    constexpr std::int64_t kStepBudget = 1'000'000'000;

    IntegratorConfig cfg;
    cfg.method = Method::Rk4Fixed;
    cfg.t_end = t_end;
    cfg.error_check_interval = 0;

    double dt = default_dt(params);
    const double span = t_end - initial.t;
    if (span <= 0.0) {
        cfg.dt = dt;
        cfg.sample_every = 1;
        return integrate(initial, params, cfg);
    }

    auto run = [&](double step) {
        cfg.dt = step;
        const auto n_steps = static_cast<std::int64_t>(span / step) + 1;
        cfg.sample_every = static_cast<int>(std::max<std::int64_t>(1, n_steps / 10000));
        return integrate(initial, params, cfg);
    };

    Trajectory prev = run(dt);
    std::int64_t budget_used = prev.steps_taken;
    for (int halving = 0; halving < 24; ++halving) {
        dt *= 0.5;
        Trajectory next = run(dt);
        budget_used += next.steps_taken;
        const PhaseState& a = prev.samples.back();
        const PhaseState& b = next.samples.back();
        double diff = 0.0;
        for (int i = 0; i < params.n; ++i) {
            diff = std::max(diff, std::abs(a.theta[i] - b.theta[i]));
            diff = std::max(diff, std::abs(a.dtheta[i] - b.dtheta[i]));
        }
        if (diff <= kAgreeTol)
            return next;
        prev = std::move(next);
        if (budget_used > kStepBudget)
            break;
    }
    throw OracleError("reference_integrate: step halving did not converge to 1e-10");
}

} // namespace kmlab
