#pragma once

#include "kmlab/integrator.hpp"
#include "kmlab/model.hpp"
#include "kmlab/random.hpp"
#include "kmlab/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace kmlab::test {

struct RandomInstance {
    ModelParams params;
    PhaseState initial;
};

struct InstanceRanges {
    int n_min = 2;
    int n_max = 6;
    double m_lo = 0.01;
    double m_hi = 1.0;
    double k_lo = 0.5;
    double k_hi = 5.0;
    double omega_max = 2.0;
    double vel_max = 10.0;
    double phase_max = 3.141592653589793;
    bool mean_zero_freq = false;
};

inline RandomInstance random_instance(RandomStream& rng, const InstanceRanges& r = {}) {
    const int span = r.n_max - r.n_min + 1;
    const int n = r.n_min + std::min(span - 1, static_cast<int>(rng.uniform(0.0, 1.0) * span));
    std::vector<double> omega(n);
    for (double& w : omega)
        w = rng.uniform(-r.omega_max, r.omega_max);
    if (r.mean_zero_freq) {
        double mean = 0.0;
        for (double w : omega)
            mean += w;
        mean /= n;
        for (double& w : omega)
            w -= mean;
    }
    ModelParams params(rng.uniform(r.m_lo, r.m_hi), rng.uniform(r.k_lo, r.k_hi),
                       std::move(omega));
    PhaseState initial;
    initial.t = 0.0;
    initial.theta.resize(n);
    initial.dtheta.resize(n);
    for (int i = 0; i < n; ++i)
        initial.theta[i] = rng.uniform(-r.phase_max, r.phase_max);
    for (int i = 0; i < n; ++i)
        initial.dtheta[i] = rng.uniform(-r.vel_max, r.vel_max);
    return {std::move(params), std::move(initial)};
}

/// Worst violation of the pairwise velocity-difference envelope and the
/// single-velocity envelope over all samples; <= 0 means both hold.
inline double envelope_overflow(const Trajectory& traj) {
    const ModelParams& p = traj.params;
    const PhaseState& first = traj.samples.front();
    double worst = -1e300;
    for (const PhaseState& s : traj.samples) {
        const double t = s.t - first.t;
        for (int i = 0; i < p.n; ++i) {
            const double cap = velocity_envelope(std::abs(first.dtheta[i]),
                                                 std::abs(p.omega[i]), p.k, p.m, t);
            worst = std::max(worst, std::abs(s.dtheta[i]) - cap);
            for (int j = i + 1; j < p.n; ++j) {
                const double dv0 = std::abs(first.dtheta[i] - first.dtheta[j]);
                const double dw = std::abs(p.omega[i] - p.omega[j]);
                const double cap_ij = lemma1_envelope(dv0, dw, p.k, p.m, t);
                worst = std::max(worst, std::abs(s.dtheta[i] - s.dtheta[j]) - cap_ij);
            }
        }
    }
    return worst;
}

inline double sup_norm_state_diff(const PhaseState& a, const PhaseState& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.theta.size(); ++i) {
        d = std::max(d, std::abs(a.theta[i] - b.theta[i]));
        d = std::max(d, std::abs(a.dtheta[i] - b.dtheta[i]));
    }
    return d;
}

} // namespace kmlab::test
