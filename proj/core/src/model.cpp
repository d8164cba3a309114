#include "kmlab/model.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace kmlab {

ModelParams::ModelParams(double inertia, double coupling, std::vector<double> natural_frequencies)
    : m(inertia), k(coupling), n(static_cast<int>(natural_frequencies.size())),
      omega(std::move(natural_frequencies)) {
    if (!(m > 0.0) || !std::isfinite(m))
        throw std::invalid_argument("ModelParams: inertia m must be positive and finite");
    if (!(k > 0.0) || !std::isfinite(k))
        throw std::invalid_argument("ModelParams: coupling K must be positive and finite");
    if (n < 1)
        throw std::invalid_argument("ModelParams: need at least one oscillator");
    double sum = 0.0;
    for (double w : omega) {
        if (!std::isfinite(w))
            throw std::invalid_argument("ModelParams: natural frequencies must be finite");
        sum += w;
    }
    omega_mean = sum / static_cast<double>(n);
}

namespace {

void require_dimension(const PhaseState& state, const ModelParams& params) {
    if (static_cast<int>(state.theta.size()) != params.n ||
        static_cast<int>(state.dtheta.size()) != params.n)
        throw std::invalid_argument("state dimension does not match params.n");
}

} // namespace

void coupling_sums(std::span<const double> theta, std::span<double> out) {
    // sum_j sin(th_j - th_i) = cos(th_i) * sum_j sin(th_j) - sin(th_i) * sum_j cos(th_j)
    const std::size_t n = theta.size();
    double sin_sum = 0.0;
    double cos_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sin_sum += std::sin(theta[i]);
        cos_sum += std::cos(theta[i]);
    }
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::cos(theta[i]) * sin_sum - std::sin(theta[i]) * cos_sum;
}

void accelerations(std::span<const double> theta, std::span<const double> dtheta,
                   const ModelParams& params, std::span<double> out) {
    coupling_sums(theta, out);
    const double kn = params.k / static_cast<double>(params.n);
    for (int i = 0; i < params.n; ++i)
        out[i] = (params.omega[i] - dtheta[i] + kn * out[i]) / params.m;
}

std::pair<std::vector<double>, std::vector<double>>
vector_field(const PhaseState& state, const ModelParams& params) {
    require_dimension(state, params);
    std::vector<double> ddtheta(params.n);
    accelerations(state.theta, state.dtheta, params, ddtheta);
    return {state.dtheta, std::move(ddtheta)};
}

std::vector<double> first_order_vector_field(const PhaseState& state, const ModelParams& params) {
    require_dimension(state, params);
    std::vector<double> out(params.n);
    coupling_sums(state.theta, out);
    const double kn = params.k / static_cast<double>(params.n);
    for (int i = 0; i < params.n; ++i)
        out[i] = params.omega[i] + kn * out[i];
    return out;
}

ReducedSystem to_reduced(const PhaseState& state, const ModelParams& params) {
    require_dimension(state, params);
    const double w = params.omega_mean;
    PhaseState reduced;
    reduced.t = state.t;
    reduced.theta.resize(params.n);
    reduced.dtheta.resize(params.n);
    for (int i = 0; i < params.n; ++i) {
        reduced.theta[i] = state.theta[i] - w * state.t;
        reduced.dtheta[i] = state.dtheta[i] - w;
    }
    std::vector<double> omega_bar(params.omega);
    for (double& wi : omega_bar)
        wi -= w;
    return {std::move(reduced), ModelParams(params.m, params.k, std::move(omega_bar))};
}

std::pair<double, double> mean_phase_exact(double theta0_mean, double dtheta0_mean,
                                           const ModelParams& params, double t) {
    if (t < 0.0)
        throw std::domain_error("mean_phase_exact: t must be nonnegative");
    double scale = 1.0;
    for (double w : params.omega)
        scale = std::max(scale, std::abs(w));
    if (std::abs(params.omega_mean) >
        64.0 * std::numeric_limits<double>::epsilon() * static_cast<double>(params.n) * scale)
        throw std::invalid_argument(
            "mean_phase_exact: frequencies are not mean-zero; apply to_reduced first");
    const double decay = std::exp(-t / params.m);
    return {theta0_mean + params.m * dtheta0_mean * (1.0 - decay), dtheta0_mean * decay};
}

} // namespace kmlab
