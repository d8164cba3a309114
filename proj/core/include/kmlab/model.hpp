#pragma once

#include <span>
#include <utility>
#include <vector>

namespace kmlab {

/// Parameters of the inertial Kuramoto system
///   m th''_i + th'_i = omega_i + (K/N) sum_j sin(th_j - th_i).
/// Immutable after construction; omega_mean is cached so every consumer
/// sees the same value.
struct ModelParams {
    double m;                    ///< inertia, > 0
    double k;                    ///< coupling strength K, > 0
    int n;                       ///< oscillator count, >= 1
    std::vector<double> omega;   ///< natural frequencies, size n
    double omega_mean;           ///< (1/n) sum omega_i

    ModelParams(double inertia, double coupling, std::vector<double> natural_frequencies);
};

/// Unwrapped phases and angular velocities at a time instant. Phases live on
/// the real line; nothing here is reduced mod 2*pi.
struct PhaseState {
    double t = 0.0;
    std::vector<double> theta;
    std::vector<double> dtheta;
};

/// State and parameters after the co-rotating change of variables
/// th_i -> th_i - omega*t, omega_i -> omega_i - omega. The reduced
/// frequencies sum to zero up to accumulation rounding.
struct ReducedSystem {
    PhaseState state;
    ModelParams params;
};

/// Coupling sums s_i = sum_j sin(theta_j - theta_i), written into `out`.
/// Evaluated via the sine addition identity, O(n) trig calls.
void coupling_sums(std::span<const double> theta, std::span<double> out);

/// Accelerations of the second-order system, written into `out`:
///   out_i = (omega_i - dtheta_i + (K/N) s_i) / m.
void accelerations(std::span<const double> theta, std::span<const double> dtheta,
                   const ModelParams& params, std::span<double> out);

/// Full vector field of the second-order system: returns (dtheta, ddtheta).
std::pair<std::vector<double>, std::vector<double>>
vector_field(const PhaseState& state, const ModelParams& params);

/// First-order (zero-inertia) Kuramoto vector field; used for m -> 0
/// cross-checks only.
std::vector<double> first_order_vector_field(const PhaseState& state, const ModelParams& params);

/// Change of variables to the mean-zero co-rotating frame. Pairwise phase and
/// velocity differences are preserved exactly.
ReducedSystem to_reduced(const PhaseState& state, const ModelParams& params);

/// Closed-form mean-phase dynamics under the mean-zero frequency condition:
///   th(t) = th(0) + m th'(0) (1 - e^{-t/m}),  th'(t) = th'(0) e^{-t/m}.
/// Requires t >= 0 and params with (numerically) zero mean frequency.
std::pair<double, double> mean_phase_exact(double theta0_mean, double dtheta0_mean,
                                           const ModelParams& params, double t);

} // namespace kmlab
