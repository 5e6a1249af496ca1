#pragma once

// Receding-horizon path-integral controller: rollouts under a baseline
// control, entropic-robust temperature selection and the weighted
// disturbance update.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "pathctl/errors.hpp"
#include "pathctl/parallel.hpp"
#include "pathctl/path_integral.hpp"
#include "pathctl/sde_core.hpp"
#include "pathctl/strategies.hpp"

namespace pathctl {

/// Nearest-rank quantile: the ceil(q n)-th smallest value (q = 0 gives
/// the minimum).
inline double quantile_nearest_rank(std::vector<double> v, double q)
{
    if (v.empty()) {
        throw InvalidArgument("quantile of an empty sample");
    }
    if (!(q >= 0.0 && q <= 1.0)) {
        throw InvalidArgument("quantile level must lie in [0, 1]");
    }
    std::sort(v.begin(), v.end());
    const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(v.size())));
    return v[rank == 0 ? 0 : rank - 1];
}

using RunningCost = std::function<double(double s, const Vec& x, const Vec& u)>;

/// q = -e^{-zeta s} sum_rho alpha_rho { p [X_rho + w1 sum_other X] u_rho
///                                      - c X_rho [u_rho^2 + w2 sum_other u^2] }
inline double pareto_running_cost(double s, const Vec& x, const Vec& u, const ParetoParams& prm)
{
    if (static_cast<std::size_t>(x.size()) != prm.k || static_cast<std::size_t>(u.size()) != prm.k) {
        throw InvalidArgument("state/control dimension does not match k");
    }
    const double u_sq_total = u.squaredNorm();
    double total = 0.0;
    for (std::size_t r = 0; r < prm.k; ++r) {
        const auto i = static_cast<Eigen::Index>(r);
        const double revenue = prm.p * prm.coupled_output(x, r) * u[i];
        const double cost = prm.c * x[i] * (u[i] * u[i] + prm.omega2 * (u_sq_total - u[i] * u[i]));
        total += prm.alpha[i] * (revenue - cost);
    }
    return -std::exp(-prm.zeta * s) * total;
}

struct PiConfig
{
    std::size_t M = 800;
    std::size_t H = 60;
    double gamma = 0.5;
    double kappa_u = 1.0;
    double u_min = 0.0;
    double u_max = 5.0;
    double dt = 0.01;
    std::size_t theta_count = 50;
    double theta_lo = 1e-2;
    double theta_hi = 1e2;
    /// +1 weights rollouts by exp(+J / theta) as printed, -1 by exp(-J / theta).
    double weight_sign = 1.0;

    void validate() const
    {
        if (M < 1) throw InvalidArgument("M must be at least 1");
        if (H < 1) throw InvalidArgument("H must be at least 1");
        if (!(u_min <= u_max)) throw InvalidArgument("u_min must not exceed u_max");
        if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
        if (theta_count < 1 || !(theta_lo > 0.0) || !(theta_hi >= theta_lo)) {
            throw InvalidArgument("theta grid must be positive and sorted");
        }
        if (weight_sign != 1.0 && weight_sign != -1.0) throw InvalidArgument("weight_sign must be +1 or -1");
    }
};

/// theta_count log-spaced points on [theta_lo, theta_hi] * max(1, IQR(costs)).
inline std::vector<double> theta_grid(std::span<const double> costs, const PiConfig& cfg)
{
    std::vector<double> finite;
    for (double c : costs) {
        if (std::isfinite(c)) finite.push_back(c);
    }
    double scale = 1.0;
    if (!finite.empty()) {
        scale = std::max(1.0, quantile_nearest_rank(finite, 0.75) - quantile_nearest_rank(finite, 0.25));
    }
    std::vector<double> grid(cfg.theta_count);
    const double l0 = std::log(cfg.theta_lo);
    const double l1 = std::log(cfg.theta_hi);
    for (std::size_t i = 0; i < cfg.theta_count; ++i) {
        const double t = cfg.theta_count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(cfg.theta_count - 1);
        grid[i] = scale * std::exp(l0 + t * (l1 - l0));
    }
    return grid;
}

/// theta log mean exp(J / theta), shifted by max J.
inline double entropic_value(std::span<const double> costs, double theta)
{
    if (costs.empty()) {
        throw InvalidArgument("no costs");
    }
    if (!(theta > 0.0)) {
        throw InvalidArgument("theta must be positive");
    }
    const double j_max = *std::max_element(costs.begin(), costs.end());
    std::vector<double> terms(costs.size());
    for (std::size_t i = 0; i < costs.size(); ++i) {
        terms[i] = std::exp((costs[i] - j_max) / theta);
    }
    return j_max + theta * std::log(pairwise_sum(terms) / static_cast<double>(costs.size()));
}

struct TemperatureSelection
{
    double theta_hat = 0.0;
    double objective_value = 0.0;
};

/// argmin over the grid of gamma theta + theta log mean exp(J / theta);
/// infinite costs are dropped first and ties go to the smaller theta.
inline TemperatureSelection select_temperature(std::span<const double> costs, double gamma,
                                               std::span<const double> grid)
{
    if (grid.empty()) {
        throw InvalidArgument("theta grid is empty");
    }
    std::vector<double> finite;
    for (double c : costs) {
        if (std::isfinite(c)) finite.push_back(c);
    }
    if (finite.empty()) {
        throw NumericalError("all rollout costs are infinite");
    }
    TemperatureSelection best{0.0, std::numeric_limits<double>::infinity()};
    double prev = 0.0;
    for (double theta : grid) {
        if (!(theta > prev)) {
            throw InvalidArgument("theta grid must be positive and strictly increasing");
        }
        prev = theta;
        const double obj = gamma * theta + entropic_value(finite, theta);
        if (obj < best.objective_value) {
            best = {theta, obj};
        }
    }
    return best;
}

/// M rollouts of H steps. eps holds the standard-normal draws,
/// eps[(i * H + h) * m + j].
struct RolloutBatch
{
    std::size_t M = 0;
    std::size_t H = 0;
    std::size_t m = 0;
    std::vector<double> eps;
    std::vector<double> costs;
    std::size_t n_diverged = 0;

    Vec first_disturbance(std::size_t i) const
    {
        return Eigen::Map<const Vec>(eps.data() + i * H * m, static_cast<Eigen::Index>(m));
    }
};

/// Noise stream of rollout i at decision n; stream 0 is the closed loop.
constexpr std::uint64_t rollout_stream(std::uint64_t decision_index, std::uint64_t i)
{
    return ((decision_index + 1) << 32) | i;
}

inline RolloutBatch rollout_batch(const Vec& x_now, double s_now, const SdeSpec& spec, const Vec& baseline_u,
                                  const PiConfig& cfg, const RunningCost& cost, std::uint64_t seed,
                                  std::uint64_t decision_index, unsigned threads = 1)
{
    cfg.validate();
    RolloutBatch batch;
    batch.M = cfg.M;
    batch.H = cfg.H;
    batch.m = spec.m;
    batch.eps.resize(cfg.M * cfg.H * spec.m);
    batch.costs.resize(cfg.M);
    const double sqrt_dt = std::sqrt(cfg.dt);

    parallel_for(cfg.M, threads, [&](std::size_t i) {
        const auto noise = BrownianIncrements::generate(seed, rollout_stream(decision_index, i), cfg.H, spec.m, cfg.dt);
        for (std::size_t k = 0; k < noise.values.size(); ++k) {
            batch.eps[i * cfg.H * spec.m + k] = noise.values[k] / sqrt_dt;
        }
        Vec x = x_now;
        double j = 0.0;
        try {
            for (std::size_t h = 0; h < cfg.H; ++h) {
                const double s = s_now + static_cast<double>(h) * cfg.dt;
                x = em_step(x, s, baseline_u, spec, cfg.dt, noise.row(h));
                j += cost(s_now + static_cast<double>(h + 1) * cfg.dt, x, baseline_u) * cfg.dt;
            }
            if (!std::isfinite(j)) {
                j = std::numeric_limits<double>::infinity();
            }
        } catch (const DivergenceError&) {
            j = std::numeric_limits<double>::infinity();
        }
        batch.costs[i] = j;
    });

    for (double j : batch.costs) {
        batch.n_diverged += std::isfinite(j) ? 0 : 1;
    }
    if (2 * batch.n_diverged > cfg.M) {
        throw NumericalError(std::to_string(batch.n_diverged) + " of " + std::to_string(cfg.M)
                             + " rollouts diverged at decision " + std::to_string(decision_index));
    }
    return batch;
}

struct PiUpdate
{
    Vec u;
    double ess = 0.0;
    std::size_t clamp_events = 0;
};

/// u = kappa_u Sigma(X) (sum_i r_i eps_i,first) sqrt(dt), r_i proportional
/// to exp(weight_sign J_i / theta_hat), then clamped to [u_min, u_max] and
/// to nonnegative values.
inline PiUpdate pi_update(double s_now, const Vec& x_now, const RolloutBatch& batch, const TemperatureSelection& sel,
                          const SdeSpec& spec, const Vec& baseline_u, const PiConfig& cfg)
{
    if (!(sel.theta_hat > 0.0)) {
        throw InvalidArgument("theta_hat must be positive");
    }
    std::vector<double> finite_costs;
    std::vector<std::size_t> index;
    for (std::size_t i = 0; i < batch.costs.size(); ++i) {
        if (std::isfinite(batch.costs[i])) {
            finite_costs.push_back(batch.costs[i] / sel.theta_hat);
            index.push_back(i);
        }
    }
    if (finite_costs.empty()) {
        throw NumericalError("all rollout costs are infinite");
    }
    const auto ens = exp_weights(finite_costs, 1.0, cfg.weight_sign > 0.0 ? Sense::maximize : Sense::minimize);

    Vec mix = Vec::Zero(static_cast<Eigen::Index>(batch.m));
    std::vector<double> terms(index.size());
    for (Eigen::Index j = 0; j < mix.size(); ++j) {
        for (std::size_t q = 0; q < index.size(); ++q) {
            terms[q] = ens.weights[q] * batch.eps[index[q] * batch.H * batch.m + static_cast<std::size_t>(j)];
        }
        mix[j] = pairwise_sum(terms);
    }

    const Mat sigma = spec.diffusion(s_now, x_now, baseline_u);
    PiUpdate out;
    out.u = cfg.kappa_u * (sigma * mix) * std::sqrt(cfg.dt);
    out.ess = ens.ess;
    for (Eigen::Index r = 0; r < out.u.size(); ++r) {
        const double raw = out.u[r];
        const double v = std::max(0.0, std::clamp(raw, cfg.u_min, cfg.u_max));
        out.clamp_events += v != raw ? 1 : 0;
        out.u[r] = v;
    }
    return out;
}

struct PiStepDiagnostics
{
    double s = 0.0;
    double theta_hat = 0.0;
    double objective = 0.0;
    double ess = 0.0;
    std::size_t clamp_events = 0;
    std::size_t n_diverged = 0;
};

struct PiRun
{
    Path path;
    std::vector<PiStepDiagnostics> diagnostics;
};

/// Closed loop on [0, t_end]: each decision runs a rollout batch, picks a
/// temperature and applies one Euler-Maruyama step with the closed-loop
/// stream (stream 0). A closed-loop divergence stops the run and is
/// reported on the returned path.
inline PiRun run_receding_horizon(const Vec& x0, const SdeSpec& spec, const PiConfig& cfg, const RunningCost& cost,
                                  std::uint64_t seed, double t_end, unsigned threads = 1)
{
    cfg.validate();
    const TimeGrid grid = TimeGrid::from_dt(t_end, cfg.dt);
    const auto noise = BrownianIncrements::generate(seed, 0, grid.n_steps(), spec.m, grid.dt());
    const Vec baseline = Vec::Zero(static_cast<Eigen::Index>(spec.k));

    std::vector<PiStepDiagnostics> diagnostics;
    diagnostics.reserve(grid.n_steps());
    std::size_t decision = 0;
    const FeedbackRule rule = [&](double s, const Vec& x, RuleContext&) -> Vec {
        const RolloutBatch batch = rollout_batch(x, s, spec, baseline, cfg, cost, seed, decision, threads);
        const auto thetas = theta_grid(batch.costs, cfg);
        const TemperatureSelection sel = select_temperature(batch.costs, cfg.gamma, thetas);
        const PiUpdate upd = pi_update(s, x, batch, sel, spec, baseline, cfg);
        diagnostics.push_back({s, sel.theta_hat, sel.objective_value, upd.ess, upd.clamp_events, batch.n_diverged});
        ++decision;
        return upd.u;
    };

    PiRun run;
    run.path = detail::simulate_path_impl(x0, spec, rule, grid, noise, true);
    run.diagnostics = std::move(diagnostics);
    return run;
}

}  // namespace pathctl
