#pragma once

#include "kmlab/model.hpp"

#include <string>
#include <vector>

namespace kmlab {

/// Tuple parameterizing the majority-sector sufficient conditions:
/// majority size M > N/2, sector angles 0 < beta < alpha with
/// 2*beta + alpha < pi, coupling margin mu, velocity-spread margin
/// lambda > mu + 2.
struct Thm2Params {
    int majority;
    double alpha;
    double beta;
    double mu;
    double lambda;
};

/// Largest admissible coupling margin:
///   (M/N) sin(a/2 - b/4) cos(a/2 + 5b/8) - (1 - M/N) cos(a/2 - b/8).
/// May be <= 0, in which case no admissible mu exists. beta = 0 is admitted
/// as a boundary evaluation.
double mu_max(double alpha, double beta, int majority, int n);

/// The inertia-coupling budget: beta / (4 (lambda+mu+2) ln((lambda+2mu+2)/mu)).
double mk_bound(double lambda, double mu, double beta);

/// Look-back horizon tau = beta / (4 (lambda+mu+2) K).
double tau(double lambda, double mu, double beta, double k);

/// Time after which the majority sector has contracted to width
/// pi - alpha - beta:  tau + beta / (K (mu - (lambda+2mu+2) e^{-tau/m})).
/// Requires mK small enough that the denominator is positive.
double trap_time(const Thm2Params& p, double m, double k);

/// Pairwise velocity-difference envelope:
///   dv0 e^{-t/m} + (domega + 2K)(1 - e^{-t/m}).
double lemma1_envelope(double dv0, double domega, double k, double m, double t);

/// Single-velocity envelope: v0 e^{-t/m} + (|omega_i| + K)(1 - e^{-t/m}).
double velocity_envelope(double v0, double omega_abs, double k, double m, double t);

struct ConditionRow {
    std::string hypothesis;
    double lhs;
    double rhs;
    bool verdict;
};

struct ConditionReport {
    std::vector<ConditionRow> rows;
    bool overall() const;
};

/// JSON document with fixed field order (hypothesis, lhs, rhs, verdict) per
/// row; values carry 12 significant digits.
std::string to_json(const ConditionReport& report);

/// Hypothesis check for the frequency-synchronization theorem (nonidentical
/// oscillators, majority sector). Never throws; verdicts live in the report.
ConditionReport check_thm2(const ModelParams& model, const PhaseState& initial,
                           const Thm2Params& p);

/// Hypothesis check for the phase-synchronization theorem: identical
/// frequencies, M = N, mu pinned to sin(a/2 - b/4) cos(a/2 + 5b/8).
ConditionReport check_thm3(const ModelParams& model, const PhaseState& initial,
                           const Thm2Params& p);

/// Closed-form constants of the unconditional three-oscillator theorem.
struct N3Constants {
    double alpha3;     ///< 2*pi/5
    double g;          ///< sin(alpha3/16) cos(11 alpha3/16)
    double lambda3;    ///< (9/10) g
    double mk_bound3;  ///< alpha3 / (4 (g+2) ln((4g+6)/g))
    double gamma;      ///< alpha3 / (4 (g+2) K)
    double t1;         ///< first t with D(dTheta(0)) e^{-t/m} < g K / 10
    long long n;       ///< winding budget
};

/// The velocity-relaxation time t1 needs the inertia, so m is a parameter
/// here in addition to K and the initial data.
N3Constants n3_constants(double m, double k, double initial_velocity_diameter,
                         double initial_diameter, double domega);

/// Parameter-only hypothesis check for N = 3: mK <= mk_bound3 and
/// D(Omega) < lambda3 K. No initial-condition rows.
ConditionReport check_n3(const ModelParams& model);

enum class SearchObjective {
    MaxMuMax,       ///< largest admissible coupling margin
    MaxMkBound,     ///< largest inertia-coupling budget
    MaxDomegaOverK, ///< largest admissible frequency spread (equals mu)
};

struct SearchResult {
    bool feasible;
    Thm2Params best;
    double objective;
};

/// Dyadic grid over the admissible (alpha, beta) region plus local bisection
/// refinement around the best point; lambda sweeps (mu+2, mu+2+lambda_span].
/// Nested grids make the returned objective monotone in grid_level.
SearchResult feasible_search(int n, int majority, SearchObjective objective,
                             int grid_level = 6, int refine_rounds = 3,
                             double lambda_span = 10.0);

} // namespace kmlab
