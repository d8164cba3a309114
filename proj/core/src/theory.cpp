#include "kmlab/theory.hpp"

#include "kmlab/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace kmlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// Closed-form constants are evaluated in the widest available precision.
long double mu_max_l(long double alpha, long double beta, long double ratio) {
    return ratio * std::sin(alpha / 2 - beta / 4) * std::cos(alpha / 2 + 5 * beta / 8) -
           (1 - ratio) * std::cos(alpha / 2 - beta / 8);
}

double round12(double v) {
    if (!std::isfinite(v))
        return v;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::strtod(buf, nullptr);
}

bool angles_admissible(double alpha, double beta) {
    return beta >= 0.0 && beta < alpha && 2.0 * beta + alpha < kPi;
}

} // namespace

double mu_max(double alpha, double beta, int majority, int n) {
    if (!angles_admissible(alpha, beta))
        throw std::domain_error("mu_max: need 0 <= beta < alpha and 2*beta + alpha < pi");
    if (majority < 1 || majority > n)
        throw std::domain_error("mu_max: majority size out of range");
    const long double ratio = static_cast<long double>(majority) / n;
    return static_cast<double>(mu_max_l(alpha, beta, ratio));
}

double mk_bound(double lambda, double mu, double beta) {
    if (!(mu > 0.0))
        throw std::domain_error("mk_bound: mu must be positive");
    if (!(lambda > mu + 2.0))
        throw std::domain_error("mk_bound: need lambda > mu + 2");
    if (!(beta > 0.0))
        throw std::domain_error("mk_bound: beta must be positive");
    const long double l = lambda, u = mu, b = beta;
    return static_cast<double>(b / (4 * (l + u + 2) * std::log((l + 2 * u + 2) / u)));
}

double tau(double lambda, double mu, double beta, double k) {
    if (!(k > 0.0))
        throw std::domain_error("tau: coupling K must be positive");
    return beta / (4.0 * (lambda + mu + 2.0) * k);
}

double trap_time(const Thm2Params& p, double m, double k) {
    const double look_back = tau(p.lambda, p.mu, p.beta, k);
    const double denom =
        p.mu - (p.lambda + 2.0 * p.mu + 2.0) * std::exp(-look_back / m);
    if (!(denom > 0.0))
        throw std::domain_error("trap_time: mK too large, contraction margin not positive");
    return look_back + p.beta / (k * denom);
}

double lemma1_envelope(double dv0, double domega, double k, double m, double t) {
    if (t < 0.0)
        throw std::domain_error("lemma1_envelope: t must be nonnegative");
    const double decay = std::exp(-t / m);
    return dv0 * decay + (domega + 2.0 * k) * (1.0 - decay);
}

double velocity_envelope(double v0, double omega_abs, double k, double m, double t) {
    if (t < 0.0)
        throw std::domain_error("velocity_envelope: t must be nonnegative");
    const double decay = std::exp(-t / m);
    return v0 * decay + (omega_abs + k) * (1.0 - decay);
}

bool ConditionReport::overall() const {
    for (const auto& row : rows)
        if (!row.verdict)
            return false;
    return true;
}

std::string to_json(const ConditionReport& report) {
    nlohmann::ordered_json doc;
    doc["hypotheses"] = nlohmann::ordered_json::array();
    for (const auto& row : report.rows) {
        nlohmann::ordered_json r;
        r["hypothesis"] = row.hypothesis;
        r["lhs"] = round12(row.lhs);
        r["rhs"] = round12(row.rhs);
        r["verdict"] = row.verdict;
        doc["hypotheses"].push_back(std::move(r));
    }
    doc["overall"] = report.overall();
    return doc.dump(2);
}

namespace {

void require_state_dims(const ModelParams& model, const PhaseState& initial, const char* who) {
    if (static_cast<int>(initial.theta.size()) != model.n ||
        static_cast<int>(initial.dtheta.size()) != model.n)
        throw std::invalid_argument(std::string(who) + ": initial state dimension mismatch");
}

ConditionReport sector_hypotheses(const ModelParams& model, const PhaseState& initial,
                                  const Thm2Params& p, bool identical_case) {
    ConditionReport report;
    const int n = model.n;
    const int m_sub = p.majority;
    const bool majority_ok = m_sub >= 1 && m_sub <= n;
    const bool angles_ok = p.beta > 0.0 && angles_admissible(p.alpha, p.beta);

    report.rows.push_back(
        {"M > N/2", static_cast<double>(m_sub), 0.5 * n, m_sub > 0.5 * n && majority_ok});
    report.rows.push_back({"0 < beta < alpha", p.beta, p.alpha, p.beta > 0.0 && p.beta < p.alpha});
    report.rows.push_back(
        {"2*beta + alpha < pi", 2.0 * p.beta + p.alpha, kPi, 2.0 * p.beta + p.alpha < kPi});

    double cap = kNan;
    if (angles_ok && majority_ok)
        cap = mu_max(p.alpha, p.beta, m_sub, n);
    report.rows.push_back({"0 < mu <= mu_max", p.mu, cap, p.mu > 0.0 && p.mu <= cap});
    report.rows.push_back({"lambda > mu + 2", p.lambda, p.mu + 2.0, p.lambda > p.mu + 2.0});

    double budget = kNan;
    if (p.mu > 0.0 && p.lambda > p.mu + 2.0 && p.beta > 0.0)
        budget = mk_bound(p.lambda, p.mu, p.beta);
    const double mk = model.m * model.k;
    report.rows.push_back({"mK <= mk_bound", mk, budget, mk <= budget});

    const double domega = diameter(model.omega);
    if (identical_case)
        report.rows.push_back({"D(Omega) == 0", domega, 0.0, domega == 0.0});
    report.rows.push_back({"D(Omega) < mu*K", domega, p.mu * model.k, domega < p.mu * model.k});

    double d_theta = kNan, d_vel = kNan;
    if (majority_ok) {
        d_theta = subset_diameter(initial.theta, m_sub);
        d_vel = subset_diameter(initial.dtheta, m_sub);
    }
    const double sector = kPi - p.alpha - p.beta;
    report.rows.push_back(
        {"D(Theta_M(0)) <= pi - alpha - beta", d_theta, sector, d_theta <= sector});
    report.rows.push_back(
        {"D(dTheta_M(0)) < lambda*K", d_vel, p.lambda * model.k, d_vel < p.lambda * model.k});
    return report;
}

} // namespace

ConditionReport check_thm2(const ModelParams& model, const PhaseState& initial,
                           const Thm2Params& p) {
    require_state_dims(model, initial, "check_thm2");
    return sector_hypotheses(model, initial, p, /*identical_case=*/false);
}

ConditionReport check_thm3(const ModelParams& model, const PhaseState& initial,
                           const Thm2Params& p) {
    require_state_dims(model, initial, "check_thm3");
    Thm2Params pinned = p;
    pinned.majority = model.n;
    pinned.mu = angles_admissible(p.alpha, p.beta)
                    ? static_cast<double>(mu_max_l(p.alpha, p.beta, 1.0L))
                    : kNan;
    return sector_hypotheses(model, initial, pinned, /*identical_case=*/true);
}

N3Constants n3_constants(double m, double k, double initial_velocity_diameter,
                         double initial_diameter, double domega) {
    if (!(k > 0.0))
        throw std::domain_error("n3_constants: coupling K must be positive");
    if (!(m > 0.0))
        throw std::domain_error("n3_constants: inertia m must be positive");
    if (initial_velocity_diameter < 0.0 || initial_diameter < 0.0 || domega < 0.0)
        throw std::invalid_argument("n3_constants: diameters must be nonnegative");

    const long double alpha3 = 2.0L * std::numbers::pi_v<long double> / 5.0L;
    const long double g = std::sin(alpha3 / 16) * std::cos(11 * alpha3 / 16);

    N3Constants c;
    c.alpha3 = static_cast<double>(alpha3);
    c.g = static_cast<double>(g);
    c.lambda3 = static_cast<double>(0.9L * g);
    c.mk_bound3 = static_cast<double>(alpha3 / (4 * (g + 2) * std::log((4 * g + 6) / g)));
    c.gamma = static_cast<double>(alpha3 / (4 * (g + 2))) / k;

    const double dv0 = initial_velocity_diameter;
    c.t1 = dv0 > 0.0 ? std::max(0.0, m * std::log(10.0 * dv0 / (c.g * k))) : 0.0;

    const double speed = dv0 + domega + 2.0 * k;
    const double x = ((c.t1 + 2.0 * c.gamma) * speed + initial_diameter - c.alpha3) / (4.0 * kPi);
    c.n = std::max<long long>(1, static_cast<long long>(std::floor(x)) + 1);
    return c;
}

ConditionReport check_n3(const ModelParams& model) {
    if (model.n != 3)
        throw std::domain_error("check_n3: theorem applies to exactly three oscillators");
    const N3Constants c = n3_constants(model.m, model.k, 0.0, 0.0, 0.0);
    ConditionReport report;
    const double mk = model.m * model.k;
    report.rows.push_back({"mK <= mk_bound3", mk, c.mk_bound3, mk <= c.mk_bound3});
    const double domega = diameter(model.omega);
    report.rows.push_back(
        {"D(Omega) < lambda3*K", domega, c.lambda3 * model.k, domega < c.lambda3 * model.k});
    return report;
}

namespace {

struct SearchState {
    bool found = false;
    double value = -std::numeric_limits<double>::infinity();
    Thm2Params best{0, 0, 0, 0, 0};
};

void consider(SearchState& s, SearchObjective objective, double alpha, double beta, int majority,
              int n, double lambda_step) {
    if (!(beta > 0.0) || !angles_admissible(alpha, beta))
        return;
    const double mu =
        static_cast<double>(mu_max_l(alpha, beta, static_cast<long double>(majority) / n));
    if (!(mu > 0.0))
        return;
    const double lambda = mu + 2.0 + lambda_step;
    double value = 0.0;
    switch (objective) {
    case SearchObjective::MaxMuMax:
    case SearchObjective::MaxDomegaOverK:
        value = mu;
        break;
    case SearchObjective::MaxMkBound:
        value = mk_bound(lambda, mu, beta);
        break;
    }
    // Strict improvement keeps the first (smallest alpha, then beta) on ties.
    if (!s.found || value > s.value) {
        s.found = true;
        s.value = value;
        s.best = {majority, alpha, beta, mu, lambda};
    }
}

} // namespace

SearchResult feasible_search(int n, int majority, SearchObjective objective, int grid_level,
                             int refine_rounds, double lambda_span) {
    if (n < 1 || majority < 1 || majority > n)
        throw std::invalid_argument("feasible_search: need 1 <= majority <= n");
    if (!(lambda_span > 0.0))
        throw std::invalid_argument("feasible_search: lambda_span must be positive");
    grid_level = std::clamp(grid_level, 1, 12);
    refine_rounds = std::clamp(refine_rounds, 0, 24);

    SearchState state;
    // mu_max <= 0 everywhere for a non-majority subset; the region is empty.
    if (2 * majority <= n)
        return {false, state.best, 0.0};

    const int steps = 1 << grid_level;
    const double lambda_step = lambda_span / steps;
    for (int ka = 1; ka < steps; ++ka) {
        const double alpha = kPi * ka / steps;
        const double beta_hi = std::min(alpha, 0.5 * (kPi - alpha));
        for (int kb = 1; kb < steps; ++kb)
            consider(state, objective, alpha, beta_hi * kb / steps, majority, n, lambda_step);
    }
    if (!state.found)
        return {false, state.best, 0.0};

    for (int round = 1; round <= refine_rounds; ++round) {
        const double da = kPi / static_cast<double>(steps) / std::pow(2.0, round);
        const double beta_hi =
            std::min(state.best.alpha, 0.5 * (kPi - state.best.alpha));
        const double db = beta_hi / static_cast<double>(steps) / std::pow(2.0, round);
        const double lstep = lambda_step / std::pow(2.0, round);
        const Thm2Params centre = state.best;
        for (int ia = -2; ia <= 2; ++ia) {
            for (int ib = -2; ib <= 2; ++ib) {
                consider(state, objective, centre.alpha + ia * da, centre.beta + ib * db,
                         majority, n, lstep);
            }
        }
    }
    return {true, state.best, state.value};
}

} // namespace kmlab
