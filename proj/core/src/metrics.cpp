#include "kmlab/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kmlab {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
} // namespace

double diameter(std::span<const double> x) {
    if (x.empty())
        throw std::domain_error("diameter: empty vector");
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
}

double subset_diameter(std::span<const double> x, int m) {
    if (m < 1 || m > static_cast<int>(x.size()))
        throw std::domain_error("subset_diameter: subset size out of range");
    return diameter(x.subspan(0, static_cast<std::size_t>(m)));
}

double default_rep_tol(double diam) {
    return 1e-9 * std::max(1.0, diam);
}

RepresentationSet representation_set(std::span<const double> theta, double rep_tol) {
    const double d = diameter(theta);
    RepresentationSet rep{d, {}};
    const int n = static_cast<int>(theta.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && d - (theta[i] - theta[j]) <= rep_tol)
                rep.pairs.emplace_back(i, j);
    return rep;
}

double diameter_rate(const PhaseState& state, double rep_tol) {
    if (state.theta.size() < 2)
        throw std::domain_error("diameter_rate: need at least two oscillators");
    const RepresentationSet rep = representation_set(state.theta, rep_tol);
    double rate = -std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : rep.pairs)
        rate = std::max(rate, state.dtheta[i] - state.dtheta[j]);
    return rate;
}

double diameter_rate(const PhaseState& state) {
    return diameter_rate(state, default_rep_tol(diameter(state.theta)));
}

double velocity_diameter(const PhaseState& state) {
    return diameter(state.dtheta);
}

double velocity_diameter(const PhaseState& state, int m) {
    return subset_diameter(state.dtheta, m);
}

AsymmetryForms coupling_asymmetry_forms(const PhaseState& state, int i, int j) {
    const int n = static_cast<int>(state.theta.size());
    if (i == j || i < 0 || j < 0 || i >= n || j >= n)
        throw std::invalid_argument("coupling_asymmetry: need distinct in-range indices");
    const double ti = state.theta[i];
    const double tj = state.theta[j];
    double direct = 0.0;
    double cos_sum = 0.0;
    const double mid = 0.5 * (ti + tj);
    for (int q = 0; q < n; ++q) {
        direct += std::sin(state.theta[q] - ti) - std::sin(state.theta[q] - tj);
        cos_sum += std::cos(state.theta[q] - mid);
    }
    direct /= static_cast<double>(n);
    const double factored = -2.0 / static_cast<double>(n) * std::sin(0.5 * (ti - tj)) * cos_sum;

    double scale = 1.0;
    for (double th : state.theta)
        scale = std::max(scale, std::abs(th));
    if (std::abs(direct - factored) > 1e-12 * scale)
        throw std::logic_error("coupling_asymmetry: algebraic forms disagree beyond rounding");
    return {direct, factored};
}

double coupling_asymmetry(const PhaseState& state, int i, int j) {
    return coupling_asymmetry_forms(state, i, j).direct;
}

EnergyLedger energy_ledger(const Trajectory& traj) {
    const auto& samples = traj.samples;
    if (samples.size() < 2)
        throw std::invalid_argument("energy_ledger: need at least two samples");
    const ModelParams& p = traj.params;
    const int n = p.n;
    const double kn = p.k / static_cast<double>(n);
    const std::size_t count = samples.size();

    EnergyLedger ledger;
    ledger.t.resize(count);
    ledger.e_n.resize(count);
    ledger.lambda_n.resize(count);
    ledger.h_n.resize(count);
    ledger.int_e.resize(count);
    ledger.int_lambda.resize(count);
    ledger.int_h.resize(count);
    ledger.phi.resize(count);
    ledger.residual.resize(count);

    std::vector<double> coupling(n);
    for (std::size_t s = 0; s < count; ++s) {
        const PhaseState& st = samples[s];
        double e = 0.0, lam = 0.0, h = 0.0, phi = 0.0;
        coupling_sums(st.theta, coupling);
        for (int i = 0; i < n; ++i) {
            e += st.dtheta[i] * st.dtheta[i];
            lam += p.omega[i] * st.dtheta[i];
            h += coupling[i] * st.dtheta[i];
            for (int j = i + 1; j < n; ++j)
                phi += std::cos(st.theta[j] - st.theta[i]);
        }
        ledger.t[s] = st.t;
        ledger.e_n[s] = e;
        ledger.lambda_n[s] = lam;
        ledger.h_n[s] = kn * h;
        ledger.phi[s] = kn * phi;
    }

    ledger.int_e[0] = ledger.int_lambda[0] = ledger.int_h[0] = 0.0;
    for (std::size_t s = 1; s < count; ++s) {
        const double half_dt = 0.5 * (ledger.t[s] - ledger.t[s - 1]);
        ledger.int_e[s] = ledger.int_e[s - 1] + half_dt * (ledger.e_n[s] + ledger.e_n[s - 1]);
        ledger.int_lambda[s] =
            ledger.int_lambda[s - 1] + half_dt * (ledger.lambda_n[s] + ledger.lambda_n[s - 1]);
        ledger.int_h[s] = ledger.int_h[s - 1] + half_dt * (ledger.h_n[s] + ledger.h_n[s - 1]);
    }

    const double half_m = 0.5 * p.m;
    ledger.max_abs_residual = 0.0;
    for (std::size_t s = 0; s < count; ++s) {
        ledger.residual[s] = half_m * ledger.e_n[s] + ledger.int_e[s] - half_m * ledger.e_n[0] -
                             ledger.int_lambda[s] - ledger.int_h[s];
        ledger.max_abs_residual = std::max(ledger.max_abs_residual, std::abs(ledger.residual[s]));
    }
    return ledger;
}

double default_sync_window(const Trajectory& traj) {
    const double span = traj.samples.back().t - traj.samples.front().t;
    return std::min(span, std::max(0.1 * span, 5.0 / traj.params.k));
}

namespace {

std::size_t window_start_index(const Trajectory& traj, double window) {
    const double span = traj.samples.back().t - traj.samples.front().t;
    if (window > span)
        throw std::invalid_argument("sync detector: window longer than trajectory");
    const double t_start = traj.samples.back().t - window;
    std::size_t s = 0;
    while (s + 1 < traj.samples.size() && traj.samples[s].t < t_start)
        ++s;
    return s;
}

} // namespace

SyncVerdict detect_frequency_sync(const Trajectory& traj, double eps, double window) {
    const std::size_t start = window_start_index(traj, window);
    const double w = traj.params.omega_mean;
    double worst = 0.0;
    for (std::size_t s = start; s < traj.samples.size(); ++s)
        for (double v : traj.samples[s].dtheta)
            worst = std::max(worst, std::abs(v - w));
    return {worst <= eps, worst};
}

SyncVerdict detect_phase_sync(const Trajectory& traj, double eps, double window) {
    const std::size_t start = window_start_index(traj, window);
    const int n = traj.params.n;
    double worst = 0.0;
    for (std::size_t s = start; s < traj.samples.size(); ++s) {
        const auto& theta = traj.samples[s].theta;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                worst = std::max(worst, std::abs(wrap_to_pi(theta[i] - theta[j])));
    }
    return {worst <= eps, worst};
}

double wrap_to_pi(double x) {
    double w = std::remainder(x, kTwoPi);
    if (w <= -kPi)
        w += kTwoPi;
    return w;
}

} // namespace kmlab
