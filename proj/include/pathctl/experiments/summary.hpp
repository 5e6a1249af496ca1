#pragma once

// Ensemble statistics for Monte Carlo runs.

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathctl/path_integral.hpp"
#include "pathctl/pi_controller.hpp"
#include "pathctl/sde_core.hpp"

namespace pathctl::experiments {

struct SampleStats
{
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0;
    double se = 0.0;
    double min = 0.0;
    double max = 0.0;
    double q05 = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double q95 = 0.0;
};

inline SampleStats sample_stats(const std::vector<double>& v)
{
    if (v.empty()) {
        throw InvalidArgument("statistics of an empty sample");
    }
    SampleStats st;
    st.n = v.size();
    st.mean = pairwise_sum(v) / static_cast<double>(v.size());
    std::vector<double> sq(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) sq[i] = (v[i] - st.mean) * (v[i] - st.mean);
    st.sd = v.size() > 1 ? std::sqrt(pairwise_sum(sq) / static_cast<double>(v.size() - 1)) : 0.0;
    st.se = st.sd / std::sqrt(static_cast<double>(v.size()));
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    st.min = *lo;
    st.max = *hi;
    st.q05 = quantile_nearest_rank(v, 0.05);
    st.q25 = quantile_nearest_rank(v, 0.25);
    st.q50 = quantile_nearest_rank(v, 0.50);
    st.q75 = quantile_nearest_rank(v, 0.75);
    st.q95 = quantile_nearest_rank(v, 0.95);
    return st;
}

inline void to_json(nlohmann::ordered_json& j, const SampleStats& s)
{
    j = nlohmann::ordered_json{{"n", s.n},     {"mean", s.mean}, {"sd", s.sd},   {"se", s.se},
                               {"min", s.min}, {"max", s.max},   {"q05", s.q05}, {"q25", s.q25},
                               {"q50", s.q50}, {"q75", s.q75},   {"q95", s.q95}};
}

/// Equal-width bins over [lo, hi]; the last bin is closed. A degenerate
/// range puts every sample in the first bin.
struct Histogram
{
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::size_t> counts;

    double edge(std::size_t i) const
    {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(counts.size());
    }
};

inline Histogram make_histogram(const std::vector<double>& v, std::size_t bins = 50)
{
    if (v.empty() || bins < 1) {
        throw InvalidArgument("histogram needs samples and at least one bin");
    }
    Histogram h;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    h.lo = *lo;
    h.hi = *hi;
    h.counts.assign(bins, 0);
    const double width = h.hi - h.lo;
    for (double x : v) {
        std::size_t b = 0;
        if (width > 0.0) {
            b = static_cast<std::size_t>(std::floor((x - h.lo) / width * static_cast<double>(bins)));
            b = std::min(b, bins - 1);
        }
        ++h.counts[b];
    }
    return h;
}

/// Left-endpoint Riemann sum of the (already discounted) profit integrand.
inline double discounted_profit(const Path& path, const ProblemSpec& spec)
{
    std::vector<double> terms(path.controls.size());
    for (std::size_t n = 0; n < path.controls.size(); ++n) {
        terms[n] = spec.profit(path.grid.time(n), path.states[n], path.controls[n]) * path.grid.dt();
    }
    return pairwise_sum(terms);
}

struct McSummary
{
    std::size_t n_paths = 0;
    std::size_t n_diverged = 0;
    std::size_t clamp_events = 0;
    std::size_t fallback_events = 0;
    SampleStats terminal;
    SampleStats profit;
    Histogram histogram;
    std::vector<double> terminal_values;  // nondiverged paths, in path order
    std::vector<double> profit_values;
    std::vector<std::size_t> path_index;
    WeightedEnsemble weights;
    double ess = 0.0;
    double ess_ratio = 0.0;
};

using ProfitEvaluator = std::function<double(const Path&)>;

/// Terminal state (first component) and profit statistics over nondiverged
/// paths, a 50-bin terminal histogram and the ESS of exp(eps_w * profit).
inline McSummary mc_summary(const std::vector<Path>& paths, const ProfitEvaluator& profit, double eps_w = 1.0)
{
    if (paths.empty()) {
        throw InvalidArgument("mc_summary needs a nonempty ensemble");
    }
    McSummary out;
    out.n_paths = paths.size();
    for (std::size_t i = 0; i < paths.size(); ++i) {
        const Path& p = paths[i];
        out.clamp_events += p.clamp_count();
        out.fallback_events += p.fallback_count();
        if (p.diverged) {
            ++out.n_diverged;
            continue;
        }
        out.terminal_values.push_back(p.states.back()[0]);
        out.profit_values.push_back(profit(p));
        out.path_index.push_back(i);
    }
    if (out.terminal_values.empty()) {
        throw NumericalError("every path in the ensemble diverged");
    }
    out.terminal = sample_stats(out.terminal_values);
    out.profit = sample_stats(out.profit_values);
    out.histogram = make_histogram(out.terminal_values, 50);
    out.weights = exp_weights(out.profit_values, eps_w, Sense::maximize);
    out.ess = out.weights.ess;
    out.ess_ratio = out.ess / static_cast<double>(out.terminal_values.size());
    return out;
}

inline nlohmann::ordered_json summary_json(const McSummary& s)
{
    nlohmann::ordered_json j;
    j["n_paths"] = s.n_paths;
    j["n_diverged"] = s.n_diverged;
    j["clamp_events"] = s.clamp_events;
    j["fallback_events"] = s.fallback_events;
    j["terminal_X"] = s.terminal;
    j["discounted_profit"] = s.profit;
    j["ess"] = s.ess;
    j["ess_ratio"] = s.ess_ratio;
    return j;
}

}  // namespace pathctl::experiments
