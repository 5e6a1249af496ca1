#pragma once

// Time grids, Brownian increments and Euler-Maruyama integration of
// controlled SDEs  dX = mu(s, X, u) ds + sigma(s, X, u) dB.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "pathctl/errors.hpp"
#include "pathctl/parallel.hpp"
#include "pathctl/rng.hpp"

namespace pathctl {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline std::string format_vector(const Vec& v)
{
    std::ostringstream os;
    os.precision(17);
    os << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        os << (i ? ", " : "") << v[i];
    }
    os << ')';
    return os.str();
}

//---------------------------------------------------------------------------//
// TimeGrid
//---------------------------------------------------------------------------//

/// Uniform partition of [0, t_end] into n_steps steps of size dt.
class TimeGrid
{
  public:
    /// Grid with step dt; the step count is round(t_end / dt) and must
    /// reproduce t_end to 1e-12 relative.
    static TimeGrid from_dt(double t_end, double dt)
    {
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw InvalidArgument("dt must be positive");
        }
        if (!(t_end > 0.0) || !std::isfinite(t_end)) {
            throw InvalidArgument("t_end must be positive");
        }
        const double ratio = t_end / dt;
        const auto n = static_cast<std::size_t>(std::llround(ratio));
        if (n < 1) {
            throw InvalidArgument("time grid needs at least one step");
        }
        if (std::abs(static_cast<double>(n) * dt - t_end) > 1e-12 * std::max(1.0, t_end)) {
            throw InvalidArgument("t_end is not an integer multiple of dt");
        }
        return TimeGrid(t_end, dt, n);
    }

    static TimeGrid from_steps(double t_end, std::size_t n_steps)
    {
        if (n_steps < 1) {
            throw InvalidArgument("time grid needs at least one step");
        }
        if (!(t_end > 0.0) || !std::isfinite(t_end)) {
            throw InvalidArgument("t_end must be positive");
        }
        return TimeGrid(t_end, t_end / static_cast<double>(n_steps), n_steps);
    }

    double t_end() const noexcept { return t_end_; }
    double dt() const noexcept { return dt_; }
    std::size_t n_steps() const noexcept { return n_steps_; }

    /// Time of node n (n = 0 .. n_steps).
    double time(std::size_t n) const noexcept
    {
        return n == n_steps_ ? t_end_ : static_cast<double>(n) * dt_;
    }

  private:
    TimeGrid(double t_end, double dt, std::size_t n) : t_end_(t_end), dt_(dt), n_steps_(n) {}

    double t_end_;
    double dt_;
    std::size_t n_steps_;
};

//---------------------------------------------------------------------------//
// BrownianIncrements
//---------------------------------------------------------------------------//

/// n_steps x m matrix of N(0, dt) draws keyed by (seed, stream_id).
struct BrownianIncrements
{
    std::size_t n_steps = 0;
    std::size_t m = 0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::vector<double> values;  // row-major, values[n * m + j]

    static BrownianIncrements generate(std::uint64_t seed, std::uint64_t stream_id,
                                       std::size_t n_steps, std::size_t m, double dt)
    {
        if (!(dt > 0.0)) {
            throw InvalidArgument("dt must be positive");
        }
        BrownianIncrements inc{n_steps, m, dt, seed, stream_id, {}};
        inc.values.resize(n_steps * m);
        const rng::NormalStream normals(seed, stream_id);
        const double scale = std::sqrt(dt);
        for (std::size_t n = 0; n < n_steps; ++n) {
            for (std::size_t j = 0; j < m; ++j) {
                inc.values[n * m + j] = scale * normals(n, j);
            }
        }
        return inc;
    }

    Vec row(std::size_t n) const
    {
        return Eigen::Map<const Vec>(values.data() + n * m, static_cast<Eigen::Index>(m));
    }
};

//---------------------------------------------------------------------------//
// SdeSpec
//---------------------------------------------------------------------------//

/// Controlled diffusion with k state and m noise dimensions.
struct SdeSpec
{
    using DriftFn = std::function<Vec(double s, const Vec& x, const Vec& u)>;
    using DiffusionFn = std::function<Mat(double s, const Vec& x, const Vec& u)>;
    /// Projects (x, u) into the domain where drift/diffusion may be
    /// evaluated; returns true when it had to change anything.
    using ProjectFn = std::function<bool(Vec& x, Vec& u)>;

    std::size_t k = 1;
    std::size_t m = 1;
    DriftFn drift;
    DiffusionFn diffusion;
    ProjectFn project;
};

/// Floor applied to state arguments of X^{1/2}-type coefficients.
inline constexpr double kStateFloor = 1e-10;

/// Domain guard for coefficients containing sqrt(sigma u) or X^{1/2}:
/// u -> max(u, 0), X -> max(X, kStateFloor).
inline bool clamp_nonnegative(Vec& x, Vec& u, bool clamp_state, bool clamp_control)
{
    bool changed = false;
    if (clamp_control) {
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            if (u[i] < 0.0) {
                u[i] = 0.0;
                changed = true;
            }
        }
    }
    if (clamp_state) {
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            if (x[i] < kStateFloor) {
                x[i] = kStateFloor;
                changed = true;
            }
        }
    }
    return changed;
}

/// One explicit Euler-Maruyama step. Sets *clamped when the SDE's domain
/// guard altered the evaluation arguments.
inline Vec em_step(const Vec& x, double s, const Vec& u, const SdeSpec& spec, double dt,
                   const Vec& dw, bool* clamped = nullptr)
{
    if (!(dt > 0.0)) {
        throw InvalidArgument("dt must be positive");
    }
    if (static_cast<std::size_t>(dw.size()) != spec.m) {
        throw InvalidArgument("noise vector length does not match m");
    }
    if (static_cast<std::size_t>(x.size()) != spec.k) {
        throw InvalidArgument("state vector length does not match k");
    }

    bool changed = false;
    Vec drift;
    Mat diffusion;
    if (spec.project) {
        Vec xe = x;
        Vec ue = u;
        changed = spec.project(xe, ue);
        drift = spec.drift(s, xe, ue);
        diffusion = spec.diffusion(s, xe, ue);
    } else {
        drift = spec.drift(s, x, u);
        diffusion = spec.diffusion(s, x, u);
    }
    if (clamped) {
        *clamped = changed;
    }
    if (static_cast<std::size_t>(drift.size()) != spec.k
        || static_cast<std::size_t>(diffusion.rows()) != spec.k
        || static_cast<std::size_t>(diffusion.cols()) != spec.m) {
        throw InvalidArgument("drift/diffusion output shape does not match (k, m)");
    }

    Vec next = x + drift * dt + diffusion * dw;
    if (!next.allFinite()) {
        throw DivergenceError(s, format_vector(x));
    }
    return next;
}

//---------------------------------------------------------------------------//
// Feedback rules and paths
//---------------------------------------------------------------------------//

/// Information available to a feedback rule besides (s, X).
struct RuleContext
{
    /// Realized cumulative Brownian motion B(s) along this path.
    const Vec& brownian;
    /// Set by the rule when it had to fall back (e.g. no real root).
    bool fallback = false;
};

using FeedbackRule = std::function<Vec(double s, const Vec& x, RuleContext& ctx)>;

/// Adapts a plain (s, X) -> u map.
template <class F>
FeedbackRule make_rule(F f)
{
    return [f = std::move(f)](double s, const Vec& x, RuleContext&) -> Vec { return f(s, x); };
}

/// Simulated trajectory. states has n_steps + 1 entries, controls and
/// increments n_steps. A diverged path keeps the states computed before the
/// failure.
struct Path
{
    TimeGrid grid = TimeGrid::from_steps(1.0, 1);
    std::vector<Vec> states;
    std::vector<Vec> controls;
    std::vector<Vec> increments;
    std::vector<std::uint8_t> clamped;    // domain guard fired during step n
    std::vector<std::uint8_t> fallback;   // rule fell back at step n
    bool diverged = false;
    std::size_t diverged_step = 0;
    std::string divergence_message;

    std::size_t clamp_count() const
    {
        std::size_t c = 0;
        for (auto f : clamped) c += f;
        return c;
    }
    std::size_t fallback_count() const
    {
        std::size_t c = 0;
        for (auto f : fallback) c += f;
        return c;
    }
};

namespace detail {

inline Path simulate_path_impl(const Vec& x0, const SdeSpec& spec, const FeedbackRule& rule,
                               const TimeGrid& grid, const BrownianIncrements& noise,
                               bool record_divergence)
{
    if (static_cast<std::size_t>(x0.size()) != spec.k) {
        throw InvalidArgument("initial state length does not match k");
    }
    if (noise.n_steps != grid.n_steps() || noise.m != spec.m) {
        throw InvalidArgument("Brownian increments do not match grid/noise dimension");
    }

    const std::size_t n_steps = grid.n_steps();
    Path path;
    path.grid = grid;
    path.states.reserve(n_steps + 1);
    path.controls.reserve(n_steps);
    path.increments.reserve(n_steps);
    path.clamped.reserve(n_steps);
    path.fallback.reserve(n_steps);
    path.states.push_back(x0);

    Vec brownian = Vec::Zero(static_cast<Eigen::Index>(spec.m));
    for (std::size_t n = 0; n < n_steps; ++n) {
        const double s = grid.time(n);
        const Vec& x = path.states.back();
        RuleContext ctx{brownian};
        Vec u = rule(s, x, ctx);
        Vec dw = noise.row(n);
        bool clamped = false;
        Vec next;
        try {
            next = em_step(x, s, u, spec, grid.dt(), dw, &clamped);
        } catch (const DivergenceError& e) {
            if (!record_divergence) {
                throw e.with_step(n);
            }
            path.diverged = true;
            path.diverged_step = n;
            path.divergence_message = e.with_step(n).what();
            return path;
        }
        path.controls.push_back(std::move(u));
        path.clamped.push_back(clamped ? 1 : 0);
        path.fallback.push_back(ctx.fallback ? 1 : 0);
        brownian += dw;
        path.increments.push_back(std::move(dw));
        path.states.push_back(std::move(next));
    }
    return path;
}

}  // namespace detail

/// Integrates one path. controls[n] = rule(s_n, states[n]) is evaluated
/// before stepping. Divergence is rethrown with the step index.
inline Path simulate_path(const Vec& x0, const SdeSpec& spec, const FeedbackRule& rule,
                          const TimeGrid& grid, const BrownianIncrements& noise)
{
    return detail::simulate_path_impl(x0, spec, rule, grid, noise, false);
}

struct Ensemble
{
    std::vector<Path> paths;
    std::size_t n_diverged = 0;
};

/// n_paths independent paths; path i draws its noise from stream_id i.
/// Divergence is recorded per path, never thrown.
inline Ensemble simulate_ensemble(const Vec& x0, const SdeSpec& spec, const FeedbackRule& rule,
                                  const TimeGrid& grid, std::uint64_t seed, std::size_t n_paths,
                                  unsigned threads = 1)
{
    if (n_paths < 1) {
        throw InvalidArgument("n_paths must be at least 1");
    }
    Ensemble out;
    out.paths.resize(n_paths);
    parallel_for(n_paths, threads, [&](std::size_t i) {
        const auto noise = BrownianIncrements::generate(seed, i, grid.n_steps(), spec.m, grid.dt());
        out.paths[i] = detail::simulate_path_impl(x0, spec, rule, grid, noise, true);
    });
    for (const auto& p : out.paths) {
        out.n_diverged += p.diverged ? 1 : 0;
    }
    return out;
}

}  // namespace pathctl
