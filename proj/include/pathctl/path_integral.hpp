#pragma once

// Exponential path reweighting, effective sample size and propagation of
// the Wick-rotated transition kernel on a 1-D grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pathctl/errors.hpp"
#include "pathctl/foc_solver.hpp"
#include "pathctl/sde_core.hpp"

namespace pathctl {

/// Pairwise summation; the result does not depend on how callers chunk the
/// input, only on its order.
inline double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Euclidean action along a simulated path: sum_n f(s_n, X_n, u_n) dt.
inline double discrete_action(const Path& path, const ProblemSpec& spec)
{
    const double dt = path.grid.dt();
    std::vector<double> terms(path.controls.size());
    for (std::size_t n = 0; n < path.controls.size(); ++n) {
        try {
            terms[n] = f_value(spec, path.grid.time(n), path.states[n], path.controls[n]) * dt;
        } catch (const DomainError& e) {
            throw DomainError(std::string(e.what()) + " (step " + std::to_string(n) + ")");
        }
    }
    return pairwise_sum(terms);
}

enum class Sense { maximize, minimize };

/// Normalized weights w_i and the effective sample size 1 / sum w_i^2.
struct WeightedEnsemble
{
    std::vector<double> costs;
    std::vector<double> weights;
    double ess = 0.0;
};

inline double effective_sample_size(std::span<const double> weights)
{
    std::vector<double> sq(weights.size());
    std::transform(weights.begin(), weights.end(), sq.begin(), [](double w) { return w * w; });
    const double s = pairwise_sum(sq);
    if (!(s > 0.0)) {
        throw InvalidArgument("weights are all zero");
    }
    return 1.0 / s;
}

/// w_i proportional to exp(eps_w J_i) (maximize) or exp(-eps_w J_i)
/// (minimize), shifted by the extreme cost before exponentiating.
inline WeightedEnsemble exp_weights(std::span<const double> costs, double eps_w, Sense sense)
{
    if (costs.empty()) {
        throw InvalidArgument("exp_weights needs at least one cost");
    }
    for (double c : costs) {
        if (!std::isfinite(c)) throw InvalidArgument("exp_weights needs finite costs");
    }
    const double sign = sense == Sense::maximize ? 1.0 : -1.0;
    const double ref = sense == Sense::maximize ? *std::max_element(costs.begin(), costs.end())
                                                : *std::min_element(costs.begin(), costs.end());
    WeightedEnsemble out;
    out.costs.assign(costs.begin(), costs.end());
    out.weights.resize(costs.size());
    for (std::size_t i = 0; i < costs.size(); ++i) {
        out.weights[i] = std::exp(sign * eps_w * (costs[i] - ref));
    }
    // ESS from the unnormalized weights, (sum v)^2 / sum v^2: equal costs
    // give exactly n, which 1 / sum(w^2) after normalization does not.
    const double total = pairwise_sum(out.weights);
    std::vector<double> sq(out.weights.size());
    std::transform(out.weights.begin(), out.weights.end(), sq.begin(), [](double v) { return v * v; });
    out.ess = std::clamp(total * total / pairwise_sum(sq), 1.0, static_cast<double>(costs.size()));
    for (double& w : out.weights) w /= total;
    return out;
}

/// Path-integral control estimate sum_i w_i u_i.
inline Vec weighted_control(const std::vector<Vec>& controls, const WeightedEnsemble& ens)
{
    if (controls.size() != ens.weights.size()) {
        throw InvalidArgument("controls and weights differ in length");
    }
    if (controls.empty()) {
        throw InvalidArgument("no controls to combine");
    }
    const Eigen::Index dim = controls.front().size();
    Vec out(dim);
    std::vector<double> terms(controls.size());
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (std::size_t i = 0; i < controls.size(); ++i) {
            if (controls[i].size() != dim) throw InvalidArgument("controls differ in dimension");
            terms[i] = ens.weights[i] * controls[i][j];
        }
        out[j] = pairwise_sum(terms);
    }
    return out;
}

//---------------------------------------------------------------------------//
// Grid density
//---------------------------------------------------------------------------//

/// Density psi on a uniform grid x0, x0 + dx, ...
struct GridDensity
{
    double x0 = 0.0;
    double dx = 1.0;
    std::vector<double> psi;

    double node(std::size_t i) const { return x0 + static_cast<double>(i) * dx; }
    double mass() const { return pairwise_sum(psi) * dx; }

    /// Rescales to unit mass; returns the factor divided out.
    double normalize()
    {
        const double m = mass();
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw NumericalError("kernel annihilated density");
        }
        for (double& p : psi) p /= m;
        return m;
    }
};

/// One step psi <- exp(-eps f) psi / L_eps, with L_eps the renormalizing
/// constant.
inline GridDensity propagate_kernel(const GridDensity& density, std::span<const double> f_values, double eps)
{
    if (!(eps > 0.0)) {
        throw InvalidArgument("eps must be positive");
    }
    if (f_values.size() != density.psi.size()) {
        throw InvalidArgument("f values do not match the grid");
    }
    if (!(density.dx > 0.0)) {
        throw InvalidArgument("grid spacing must be positive");
    }
    GridDensity out = density;
    // Shift by min f: the common factor cancels in the renormalization and
    // keeps exp() in range.
    const double f_min = *std::min_element(f_values.begin(), f_values.end());
    for (std::size_t i = 0; i < out.psi.size(); ++i) {
        if (density.psi[i] < 0.0) {
            throw InvalidArgument("density must be nonnegative");
        }
        out.psi[i] = density.psi[i] * std::exp(-eps * (f_values[i] - f_min));
    }
    out.normalize();
    return out;
}

}  // namespace pathctl
