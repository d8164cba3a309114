#pragma once

#include "kmlab/integrator.hpp"
#include "kmlab/model.hpp"

#include <span>
#include <utility>
#include <vector>

namespace kmlab {

/// D(X) = max_i x_i - min_i x_i over the unwrapped real line (no mod 2*pi).
double diameter(std::span<const double> x);

/// Diameter restricted to the first `m` components, 1 <= m <= size.
double subset_diameter(std::span<const double> x, int m);

/// Index pairs realizing the diameter within rep_tol of the maximum. At a
/// collision instant the set has more than one member.
struct RepresentationSet {
    double value;                           ///< D(theta)
    std::vector<std::pair<int, int>> pairs; ///< D - (theta_i - theta_j) <= rep_tol
};

/// The paper's representation set is exact equality; numerics need a band.
double default_rep_tol(double diam);

RepresentationSet representation_set(std::span<const double> theta, double rep_tol);

/// One-sided rate of change of D(Theta(t)): the max of dtheta_i - dtheta_j
/// over the representation pairs.
double diameter_rate(const PhaseState& state, double rep_tol);
double diameter_rate(const PhaseState& state);

double velocity_diameter(const PhaseState& state);
double velocity_diameter(const PhaseState& state, int m);  ///< first m oscillators

/// F_N for the pair (i, j), zero-based indices. `direct` is the defining sum,
/// `factored` the product form from the sine-difference identity; the two are
/// cross-checked on every call.
struct AsymmetryForms {
    double direct;
    double factored;
};
AsymmetryForms coupling_asymmetry_forms(const PhaseState& state, int i, int j);
double coupling_asymmetry(const PhaseState& state, int i, int j);

/// Per-sample energy functionals and their trapezoidal quadratures:
///   E_N = sum |dtheta_i|^2,  Lambda_N = sum omega_i dtheta_i,
///   H_N = (K/N) sum_{i,j} sin(theta_j - theta_i) dtheta_i,
/// endpoint potential Phi = (K/N) sum_{i<j} cos(theta_j - theta_i), and the
/// energy-balance residual
///   R(t) = (m/2) E(t) + int E - (m/2) E(0) - int Lambda - int H.
struct EnergyLedger {
    std::vector<double> t;
    std::vector<double> e_n;
    std::vector<double> lambda_n;
    std::vector<double> h_n;
    std::vector<double> int_e;
    std::vector<double> int_lambda;
    std::vector<double> int_h;
    std::vector<double> phi;
    std::vector<double> residual;
    double max_abs_residual;
};

EnergyLedger energy_ledger(const Trajectory& traj);

struct SyncVerdict {
    bool synced;
    double max_residual;
};

/// Trailing-window default: last 10% of the run, at least 5/K time units.
double default_sync_window(const Trajectory& traj);

/// True iff max_i |dtheta_i(t) - omega_mean| <= eps at every sample in the
/// final `window` time units.
SyncVerdict detect_frequency_sync(const Trajectory& traj, double eps, double window);

/// True iff max_{i<j} |wrap(theta_i - theta_j)| <= eps throughout the final
/// window, wrap mapping into (-pi, pi] (the k_ij of the definition realized
/// as the nearest multiple of 2*pi).
SyncVerdict detect_phase_sync(const Trajectory& traj, double eps, double window);

/// Reduce to (-pi, pi]; a tie at exactly -pi resolves to +pi.
double wrap_to_pi(double x);

} // namespace kmlab
