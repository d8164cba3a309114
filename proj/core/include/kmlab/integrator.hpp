#pragma once

#include "kmlab/model.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace kmlab {

enum class Method {
    Rk4Fixed,      ///< classical fixed-step 4th-order Runge-Kutta
    Rk45Adaptive,  ///< Dormand-Prince embedded 4(5) pair
};

struct IntegratorConfig {
    Method method = Method::Rk4Fixed;
    double dt = 0.0;          ///< base step; <= 0 selects default_dt(params)
    double rel_tol = 1e-9;    ///< adaptive relative tolerance
    double abs_tol = 1e-11;   ///< adaptive absolute tolerance (radians)
    double t_end = 0.0;
    int sample_every = 1;     ///< record every k-th accepted step
    int error_check_interval = 1;  ///< fixed-step Richardson cadence; 0 disables
};

/// Sign change of theta_i - theta_j between two adjacent recorded samples.
struct CollisionEvent {
    int i;
    int j;
    double t_lo;
    double t_hi;
};

struct Trajectory {
    std::vector<PhaseState> samples;   ///< strictly increasing in t; samples[0] is the IC
    ModelParams params;
    std::vector<CollisionEvent> collisions;
    Method method = Method::Rk4Fixed;
    std::int64_t steps_taken = 0;
    double max_est_local_error = 0.0;
    double accumulated_local_error = 0.0;  ///< sum of per-step estimates (global error proxy)

    /// eps_int slack used when checking analytic envelopes against samples.
    double integration_slack() const { return 10.0 * accumulated_local_error; }
};

/// Thrown when the state stops being finite or the adaptive step underflows.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string& what, double t_fail)
        : std::runtime_error(what), t_fail_(t_fail) {}
    double t_fail() const { return t_fail_; }

  private:
    double t_fail_;
};

/// Thrown by reference_integrate when step halving fails to converge within
/// its step budget.
class OracleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Stiffness-aware default step: the relaxation scale e^{-t/m} must be
/// resolved, so dt = min(m/20, 1/(20K), 0.01).
double default_dt(const ModelParams& params);

Trajectory integrate(const PhaseState& initial, const ModelParams& params,
                     const IntegratorConfig& config);

/// Brute-force oracle: fixed-step RK4 with dt halved until two successive
/// halvings agree to 1e-10 in sup-norm at t_end.
Trajectory reference_integrate(const PhaseState& initial, const ModelParams& params,
                               double t_end);

} // namespace kmlab
