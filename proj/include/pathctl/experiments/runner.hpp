#pragma once

// Experiment runners. Each run writes its CSV tables (and SVG figures unless
// disabled), a summary.json with the run statistics and a manifest.json
// holding the config hash, seed, library version and a content hash of every
// CSV/SVG file. Reruns with equal manifests produce identical files; the
// runtime is kept out of the manifest for that reason.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pathctl/experiments/config.hpp"
#include "pathctl/experiments/csv.hpp"
#include "pathctl/experiments/summary.hpp"
#include "pathctl/experiments/svg.hpp"
#include "pathctl/foc_solver.hpp"
#include "pathctl/models.hpp"
#include "pathctl/pi_controller.hpp"
#include "pathctl/version.hpp"

namespace pathctl::experiments {

using Json = nlohmann::ordered_json;

struct RunOptions
{
    unsigned threads = 1;
    bool svg = true;
};

struct RunResult
{
    Json summary;
    std::vector<std::string> files;  // relative to the output directory
};

inline std::uint64_t fnv1a(const std::string& bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

/// Sorted `key = value` lines with the effective experiment id and seed.
inline std::string canonical_config(const ExperimentConfig& cfg)
{
    std::map<std::string, std::string> kv(cfg.entries.begin(), cfg.entries.end());
    kv["experiment.id"] = cfg.id;
    if (kv.count("run.seed")) kv["run.seed"] = std::to_string(cfg.run.seed);
    std::string out;
    for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
    return out;
}

namespace detail {

/// Collects output files and their content hashes.
class OutputDir
{
  public:
    explicit OutputDir(std::string root) : root_(std::move(root))
    {
        std::error_code ec;
        std::filesystem::create_directories(root_, ec);
        if (ec || !std::filesystem::is_directory(root_)) {
            throw IoError("cannot create output directory " + root_);
        }
    }

    void write(const std::string& name, const std::string& text)
    {
        write_text_file(path(name), text);
        files_.push_back({name, hex64(fnv1a(text))});
    }
    void csv(const std::string& name, const CsvTable& t) { write(name, to_csv_string(t)); }

    std::string path(const std::string& name) const { return (std::filesystem::path(root_) / name).string(); }
    const std::vector<std::pair<std::string, std::string>>& files() const { return files_; }

  private:
    std::string root_;
    std::vector<std::pair<std::string, std::string>> files_;
};

inline std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

/// One row per grid node. The control columns of the terminal row repeat
/// the last applied control (controls are piecewise constant on each step);
/// the flag and noise columns are zero there.
inline CsvTable trajectory_table(const Path& path, bool with_noise, bool with_flags)
{
    const std::size_t k = static_cast<std::size_t>(path.states.front().size());
    const std::size_t m = path.increments.empty() ? 0 : static_cast<std::size_t>(path.increments.front().size());
    CsvTable t;
    t.header = {"step", "s", "s_over_t"};
    auto indexed = [](const char* base, std::size_t i, std::size_t count) {
        return count == 1 ? std::string(base) : std::string(base) + std::to_string(i + 1);
    };
    for (std::size_t i = 0; i < k; ++i) t.header.push_back(indexed("X", i, k));
    const std::size_t ku = path.controls.empty() ? k : static_cast<std::size_t>(path.controls.front().size());
    for (std::size_t i = 0; i < ku; ++i) t.header.push_back(indexed("u", i, ku));
    if (with_flags) {
        t.header.push_back("clamped");
        t.header.push_back("fallback");
    }
    if (with_noise) {
        for (std::size_t j = 0; j < m; ++j) t.header.push_back(indexed("dW", j, m));
    }
    const double t_end = path.grid.t_end();
    for (std::size_t n = 0; n < path.states.size(); ++n) {
        const double s = path.grid.time(n);
        std::vector<double> row{static_cast<double>(n), s, s / t_end};
        for (std::size_t i = 0; i < k; ++i) row.push_back(path.states[n][static_cast<Eigen::Index>(i)]);
        const bool interior = n < path.controls.size();
        for (std::size_t i = 0; i < ku; ++i) {
            const Vec* u = interior ? &path.controls[n] : (path.controls.empty() ? nullptr : &path.controls.back());
            row.push_back(u ? (*u)[static_cast<Eigen::Index>(i)] : 0.0);
        }
        if (with_flags) {
            row.push_back(interior ? path.clamped[n] : 0.0);
            row.push_back(interior ? path.fallback[n] : 0.0);
        }
        if (with_noise) {
            for (std::size_t j = 0; j < m; ++j) {
                row.push_back(interior ? path.increments[n][static_cast<Eigen::Index>(j)] : 0.0);
            }
        }
        t.add_row(std::move(row));
    }
    return t;
}

inline Json path_json(const Path& path, const ProblemSpec* spec)
{
    Json j;
    j["n_steps"] = path.controls.size();
    j["clamp_events"] = path.clamp_count();
    j["fallback_events"] = path.fallback_count();
    j["diverged"] = path.diverged;
    if (path.diverged) {
        j["divergence"] = path.divergence_message;
    }
    double max_abs = 0.0;
    for (const Vec& x : path.states) max_abs = std::max(max_abs, x.cwiseAbs().maxCoeff());
    j["max_abs_X"] = max_abs;
    Json terminal = Json::array();
    for (Eigen::Index i = 0; i < path.states.back().size(); ++i) terminal.push_back(path.states.back()[i]);
    j["terminal_X"] = terminal;
    if (spec && !path.diverged) {
        j["discounted_profit"] = discounted_profit(path, *spec);
    }
    return j;
}

inline Panel line_panel(const std::string& title, const std::string& y_label, std::vector<Series> series)
{
    return Panel{title, "s / t", y_label, std::move(series)};
}

inline Series column_series(const CsvTable& t, const std::string& y, const std::string& color)
{
    return Series{y, t.values("s_over_t"), t.values(y), color, false};
}

inline void write_mc_tables(OutputDir& out, const std::string& prefix, const std::vector<Path>& paths,
                            const McSummary& mc, const RunOptions& opt, const std::string& label)
{
    CsvTable sample;
    sample.header = {"path", "step", "s", "s_over_t", "X", "u"};
    const std::size_t shown = std::min<std::size_t>(paths.size(), 20);
    Panel traj{label + ": sample paths", "s / t", "X", {}};
    for (std::size_t i = 0; i < shown; ++i) {
        const CsvTable one = trajectory_table(paths[i], false, false);
        for (const auto& r : one.rows) sample.add_row({static_cast<double>(i), r[0], r[1], r[2], r[3], r[4]});
        traj.series.push_back({"path " + std::to_string(i), one.values("s_over_t"), one.values("X"), "#1f77b4", false});
    }
    out.csv(prefix + "paths.csv", sample);

    CsvTable hist;
    hist.header = {"bin", "lo", "hi", "count"};
    Series bars{"terminal X", {}, {}, "#2ca02c", true};
    for (std::size_t b = 0; b < mc.histogram.counts.size(); ++b) {
        hist.add_row({static_cast<double>(b), mc.histogram.edge(b), mc.histogram.edge(b + 1),
                      static_cast<double>(mc.histogram.counts[b])});
        bars.x.push_back(mc.histogram.edge(b));
        bars.y.push_back(static_cast<double>(mc.histogram.counts[b]));
    }
    out.csv(prefix + "histogram.csv", hist);

    CsvTable w;
    w.header = {"path", "terminal_X", "profit", "weight"};
    for (std::size_t i = 0; i < mc.path_index.size(); ++i) {
        w.add_row({static_cast<double>(mc.path_index[i]), mc.terminal_values[i], mc.profit_values[i],
                   mc.weights.weights[i]});
    }
    out.csv(prefix + "weights.csv", w);

    if (opt.svg) {
        Figure fig{label + " Monte Carlo", 2, {traj, Panel{"terminal distribution", "X(t)", "count", {bars}}}};
        out.write(prefix + "mc.svg", render_svg(fig));
    }
}

//---------------------------------------------------------------------------//
// Individual experiments
//---------------------------------------------------------------------------//

inline Json walrasian_path(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opt)
{
    const auto& model = *cfg.walrasian;
    const ProblemSpec problem = models::walrasian_problem(model);
    const TimeGrid grid = TimeGrid::from_dt(cfg.run.t, cfg.run.dt);
    const auto noise = BrownianIncrements::generate(cfg.run.seed, 0, grid.n_steps(), 1, grid.dt());
    const Path path = simulate_path(cfg.run.x0, problem.sde, models::walrasian_rule(model.rule, cfg.branch), grid, noise);

    CsvTable full = trajectory_table(path, false, true);
    CsvTable traj;
    traj.header = {"step", "s", "s_over_t", "X", "u", "clamped"};
    for (const auto& r : full.rows) traj.add_row({r[0], r[1], r[2], r[3], r[4], r[5]});
    out.csv("trajectory.csv", traj);
    if (opt.svg) {
        out.write("trajectory.svg", render_svg(walrasian_layout(traj)));
    }

    Json j = path_json(path, &problem);
    j["branch"] = to_string(cfg.branch);
    return j;
}

inline Json walrasian_mc(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opt)
{
    const auto& model = *cfg.walrasian;
    const ProblemSpec problem = models::walrasian_problem(model);
    const TimeGrid grid = TimeGrid::from_dt(cfg.run.t, cfg.run.dt);
    const Ensemble ens = simulate_ensemble(cfg.run.x0, problem.sde, models::walrasian_rule(model.rule, cfg.branch),
                                           grid, cfg.run.seed, cfg.run.n_paths, opt.threads);
    const McSummary mc =
        mc_summary(ens.paths, [&](const Path& p) { return discounted_profit(p, problem); }, cfg.run.eps_w);
    write_mc_tables(out, "", ens.paths, mc, opt, "Walrasian");
    Json j = summary_json(mc);
    j["branch"] = to_string(cfg.branch);
    j["eps_w"] = cfg.run.eps_w;
    return j;
}

inline Json ex3_compare(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opt)
{
    const Ex3Params& prm = *cfg.ex3;
    const ProblemSpec problem = models::ex3_problem(prm);
    const TimeGrid grid = TimeGrid::from_dt(cfg.run.t, cfg.run.dt);
    // Both arms consume the same increments.
    const auto noise = BrownianIncrements::generate(cfg.run.seed, 0, grid.n_steps(), 1, grid.dt());
    const Path quantum = pathctl::detail::simulate_path_impl(cfg.run.x0, problem.sde, models::ex3_quantum_rule(prm), grid, noise, true);
    const Path pontryagin =
        pathctl::detail::simulate_path_impl(cfg.run.x0, problem.sde, models::ex3_pontryagin_rule(prm), grid, noise, true);

    const CsvTable tq = trajectory_table(quantum, true, true);
    const CsvTable tp = trajectory_table(pontryagin, true, true);
    out.csv("ex3_quantum.csv", tq);
    out.csv("ex3_pontryagin.csv", tp);
    if (opt.svg) {
        Figure fig{"Cubic quantum rule vs Pontryagin 2bX/3", 2,
                   {line_panel("quantum: X(s)", "X", {column_series(tq, "X", "#1f77b4")}),
                    line_panel("quantum: u(s)", "u", {column_series(tq, "u", "#1f77b4")}),
                    line_panel("Pontryagin: X(s)", "X", {column_series(tp, "X", "#d62728")}),
                    line_panel("Pontryagin: u(s)", "u", {column_series(tp, "u", "#d62728")})}};
        out.write("ex3_compare.svg", render_svg(fig));
    }
    Json j;
    j["quantum"] = path_json(quantum, &problem);
    j["pontryagin"] = path_json(pontryagin, &problem);
    j["common_noise_stream"] = 0;
    if (quantum.diverged || pontryagin.diverged) {
        throw NumericalError(quantum.diverged ? quantum.divergence_message : pontryagin.divergence_message);
    }
    return j;
}

inline Json ex3_mc(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opt)
{
    const Ex3Params& prm = *cfg.ex3;
    const ProblemSpec problem = models::ex3_problem(prm);
    const TimeGrid grid = TimeGrid::from_dt(cfg.run.t, cfg.run.dt);
    const auto profit = [&](const Path& p) { return discounted_profit(p, problem); };
    // Path i of either arm uses stream i, so the arms share noise path by path.
    const Ensemble q = simulate_ensemble(cfg.run.x0, problem.sde, models::ex3_quantum_rule(prm), grid, cfg.run.seed,
                                         cfg.run.n_paths, opt.threads);
    const Ensemble p = simulate_ensemble(cfg.run.x0, problem.sde, models::ex3_pontryagin_rule(prm), grid,
                                         cfg.run.seed, cfg.run.n_paths, opt.threads);
    const McSummary mq = mc_summary(q.paths, profit, cfg.run.eps_w);
    const McSummary mp = mc_summary(p.paths, profit, cfg.run.eps_w);
    write_mc_tables(out, "quantum_", q.paths, mq, opt, "Quantum");
    write_mc_tables(out, "pontryagin_", p.paths, mp, opt, "Pontryagin");
    Json j;
    j["quantum"] = summary_json(mq);
    j["pontryagin"] = summary_json(mp);
    j["eps_w"] = cfg.run.eps_w;
    return j;
}

inline Json pareto_pi_compare(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opt)
{
    const ParetoParams& prm = *cfg.pareto;
    PiConfig pi = *cfg.pi;
    pi.dt = cfg.run.dt;
    const SdeSpec sde = models::pareto_sde(prm);
    const RunningCost cost = [prm](double s, const Vec& x, const Vec& u) { return pareto_running_cost(s, x, u, prm); };

    const auto t0 = std::chrono::steady_clock::now();
    const PiRun run = run_receding_horizon(cfg.run.x0, sde, pi, cost, cfg.run.seed, cfg.run.t, opt.threads);
    const double pi_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // The closed loop draws from stream 0; the benchmark reuses it.
    const TimeGrid grid = TimeGrid::from_dt(cfg.run.t, cfg.run.dt);
    const auto noise = BrownianIncrements::generate(cfg.run.seed, 0, grid.n_steps(), sde.m, grid.dt());
    const Path pont =
        pathctl::detail::simulate_path_impl(cfg.run.x0, sde, models::pareto_pontryagin_rule(prm, pi.u_max), grid, noise, true);

    const CsvTable tpi = trajectory_table(run.path, true, true);
    const CsvTable tpo = trajectory_table(pont, true, true);
    out.csv("pi_path.csv", tpi);
    out.csv("pontryagin_path.csv", tpo);

    CsvTable diag;
    diag.header = {"step", "s", "theta_hat", "objective", "ess", "clamp_events", "n_diverged"};
    for (std::size_t n = 0; n < run.diagnostics.size(); ++n) {
        const auto& d = run.diagnostics[n];
        diag.add_row({static_cast<double>(n), d.s, d.theta_hat, d.objective, d.ess, static_cast<double>(d.clamp_events),
                      static_cast<double>(d.n_diverged)});
    }
    out.csv("pi_diagnostics.csv", diag);

    if (opt.svg) {
        static const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
        auto panel = [&](const CsvTable& t, const std::string& title, const char* base) {
            std::vector<Series> series;
            for (std::size_t r = 0; r < prm.k; ++r) {
                const std::string col = prm.k == 1 ? std::string(base) : base + std::to_string(r + 1);
                series.push_back(column_series(t, col, palette[r % 6]));
            }
            return line_panel(title, base, std::move(series));
        };
        Figure fig{"Path integral control vs Pontryagin Pareto rule", 2,
                   {panel(tpi, "(a) PI: X(s)", "X"), panel(tpi, "(b) PI: u(s)", "u"),
                    panel(tpo, "(c) Pontryagin: X(s)", "X"), panel(tpo, "(d) Pontryagin: u(s)", "u")}};
        out.write("pareto_compare.svg", render_svg(fig));
    }

    auto control_range = [](const Path& p) {
        double lo = INFINITY, hi = -INFINITY;
        for (const Vec& u : p.controls) {
            lo = std::min(lo, u.minCoeff());
            hi = std::max(hi, u.maxCoeff());
        }
        return std::pair{lo, hi};
    };
    auto arm = [&](const Path& p) {
        Json j = path_json(p, nullptr);
        const auto [lo, hi] = control_range(p);
        j["u_min_seen"] = lo;
        j["u_max_seen"] = hi;
        j["controls_in_bounds"] = lo >= pi.u_min && hi <= pi.u_max;
        bool finite = true;
        for (const Vec& x : p.states) finite = finite && x.allFinite();
        j["states_finite"] = finite && !p.diverged;
        return j;
    };
    Json j;
    j["pi"] = arm(run.path);
    j["pi"]["runtime_seconds"] = pi_seconds;
    std::size_t rollout_diverged = 0;
    for (const auto& d : run.diagnostics) rollout_diverged += d.n_diverged;
    j["pi"]["rollouts_diverged"] = rollout_diverged;
    j["pontryagin"] = arm(pont);
    j["u_bounds"] = {pi.u_min, pi.u_max};
    j["M"] = pi.M;
    j["H"] = pi.H;
    if (run.path.diverged || pont.diverged) {
        throw NumericalError(run.path.diverged ? run.path.divergence_message : pont.divergence_message);
    }
    return j;
}

inline Json foc_scan(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opt)
{
    const FocScanSettings& sc = *cfg.foc_scan;
    const bool walrasian = sc.model == "walrasian";
    const ProblemSpec problem = walrasian ? models::walrasian_problem(*cfg.walrasian) : models::ex3_problem(*cfg.ex3);

    CsvTable t;
    // candidate: -1/+1 = Walrasian minus/plus branch, k >= 1 = k-th cubic
    // root, 0 = root of the stationarity condition found by bracketing.
    t.header = {"s", "X", "candidate", "selected", "u", "residual", "scale", "rel_residual"};
    std::size_t points = 0, rule_candidates = 0, no_real = 0, rule_pass = 0, solver_roots = 0;
    double max_rel_rule = 0.0, max_rel_solver = 0.0;
    auto record = [&](double s, double x, double candidate, bool selected, double u) {
        const FocResidual r = foc_residual_terms(compute_f(problem, s, x, u));
        const double rel = std::abs(r.residual) / (1.0 + r.scale);
        t.add_row({s, x, candidate, selected ? 1.0 : 0.0, u, r.residual, r.scale, rel});
        return rel;
    };
    for (double s : linspace(0.0, cfg.run.t > 0.0 ? cfg.run.t : 1.0, sc.s_points)) {
        for (double x : linspace(sc.x_min, sc.x_max, sc.x_points)) {
            ++points;
            if (walrasian) {
                bool any = false;
                for (Branch b : {Branch::minus, Branch::plus}) {
                    if (const auto u = walrasian_quantum(s, x, cfg.walrasian->rule, b)) {
                        any = true;
                        ++rule_candidates;
                        const double rel = record(s, x, b == Branch::plus ? 1.0 : -1.0, b == cfg.branch, *u);
                        max_rel_rule = std::max(max_rel_rule, rel);
                        rule_pass += rel < 1e-6 ? 1 : 0;
                    }
                }
                no_real += any ? 0 : 1;
            } else {
                const auto roots = cardano_real_roots(ex3_cubic_coeffs(s, x, *cfg.ex3));
                const double chosen = select_cubic_root(roots);
                for (std::size_t r = 0; r < roots.size(); ++r) {
                    ++rule_candidates;
                    const double rel = record(s, x, static_cast<double>(r + 1), roots[r] == chosen, roots[r]);
                    max_rel_rule = std::max(max_rel_rule, rel);
                    rule_pass += rel < 1e-6 ? 1 : 0;
                }
            }
            try {
                const double u = solve_foc(problem, s, x, {sc.u_lo, sc.u_hi});
                ++solver_roots;
                max_rel_solver = std::max(max_rel_solver, record(s, x, 0.0, false, u));
            } catch (const NumericalError&) {
                // no sign change in the bracket at this point
            }
        }
    }
    out.csv("foc_scan.csv", t);
    if (opt.svg && !t.rows.empty()) {
        Figure fig{"Stationarity residual of the closed-form rule", 1,
                   {Panel{"relative residual by X", "X", "|residual| / (1 + scale)",
                          {Series{"candidates", t.values("X"), t.values("rel_residual"), "#d62728", false}}}}};
        out.write("foc_scan.svg", render_svg(fig));
    }
    Json j;
    j["model"] = sc.model;
    j["points"] = points;
    j["rule_candidates"] = rule_candidates;
    j["points_without_real_rule"] = no_real;
    j["rule_candidates_passing_1e-6"] = rule_pass;
    j["max_rel_residual_rule"] = max_rel_rule;
    j["solver_roots"] = solver_roots;
    j["max_rel_residual_solver"] = max_rel_solver;
    return j;
}

/// Smooth test function for the operator defect study and its exact image.
struct MghTestFunction
{
    static double value(double a, double b) { return std::sin(1.3 * a + 0.4) * std::cos(0.7 * b); }

    static double exact_image(double a, double b, const MghParams& p)
    {
        const double sa = std::sin(1.3 * a + 0.4), ca = std::cos(1.3 * a + 0.4);
        const double sb = std::sin(0.7 * b), cb = std::cos(0.7 * b);
        const MghCoefficients k = mgh_coefficients(b, p);
        return k.identity * sa * cb + k.d_a * 1.3 * ca * cb + k.d_b * (-0.7 * sa * sb) + k.d_aa * (-1.69 * sa * cb)
            + k.d_ab * (-0.91 * ca * sb) + k.d_bb * (-0.49 * sa * cb);
    }
};

inline Json mgh_defect(const ExperimentConfig& cfg, OutputDir& out, const RunOptions& opt)
{
    const MghSettings& m = *cfg.mgh;
    CsvTable t;
    t.header = {"level", "n", "h_a", "h_b", "defect", "ratio"};
    double prev = 0.0;
    Json ratios = Json::array();
    for (std::size_t level = 0; level < m.levels; ++level) {
        const std::size_t n = (m.n0 - 1) * (std::size_t{1} << level) + 1;
        const auto grid = GridFunction2D::sample(m.a_min, m.a_max, n, m.b_min, m.b_max, n, MghTestFunction::value);
        const auto image = mgh_operator_apply(grid, m.params);
        double defect = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            for (std::size_t jb = 1; jb + 1 < n; ++jb) {
                defect = std::max(defect,
                                  std::abs(image.at(i, jb) - MghTestFunction::exact_image(grid.a(i), grid.b(jb), m.params)));
            }
        }
        const double ratio = level == 0 ? 0.0 : prev / defect;
        if (level > 0) ratios.push_back(ratio);
        t.add_row({static_cast<double>(level), static_cast<double>(n), grid.da, grid.db, defect, ratio});
        prev = defect;
    }
    out.csv("mgh_defect.csv", t);

    const auto constant = GridFunction2D::sample(m.a_min, m.a_max, m.n0, m.b_min, m.b_max, m.n0,
                                                 [](double, double) { return 2.5; });
    const auto cimg = mgh_operator_apply(constant, m.params);
    double constant_err = 0.0;
    for (std::size_t i = 1; i + 1 < m.n0; ++i) {
        for (std::size_t jb = 1; jb + 1 < m.n0; ++jb) {
            constant_err = std::max(constant_err, std::abs(cimg.at(i, jb) - m.params.r * 2.5));
        }
    }
    if (opt.svg) {
        Figure fig{"Merton-Garman operator defect", 1,
                   {Panel{"max interior defect", "log2 refinement level", "defect",
                          {Series{"defect", t.values("level"), t.values("defect"), "#1f77b4", false}}}}};
        out.write("mgh_defect.svg", render_svg(fig));
    }
    Json j;
    j["ratios"] = ratios;
    j["constant_max_error"] = constant_err;
    return j;
}

/// Rethrows `e` with the experiment id prepended, keeping the error kind.
[[noreturn]] inline void rethrow_with_context(const std::string& id)
{
    const std::string pre = "experiment " + id + ": ";
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(pre + e.what());
    } catch (const IoError& e) {
        throw IoError(pre + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(pre + e.what());
    } catch (const DomainError& e) {
        throw DomainError(pre + e.what());
    } catch (const InvalidArgument& e) {
        throw InvalidArgument(pre + e.what());
    }
}

}  // namespace detail

inline RunResult run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, const RunOptions& opt = {})
{
    require_sections(cfg);
    detail::OutputDir out(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    Json body;
    try {
        if (cfg.id == "walrasian_path") body = detail::walrasian_path(cfg, out, opt);
        else if (cfg.id == "walrasian_mc") body = detail::walrasian_mc(cfg, out, opt);
        else if (cfg.id == "ex3_compare") body = detail::ex3_compare(cfg, out, opt);
        else if (cfg.id == "ex3_mc") body = detail::ex3_mc(cfg, out, opt);
        else if (cfg.id == "pareto_pi_compare") body = detail::pareto_pi_compare(cfg, out, opt);
        else if (cfg.id == "foc_scan") body = detail::foc_scan(cfg, out, opt);
        else body = detail::mgh_defect(cfg, out, opt);
    } catch (const Error&) {
        detail::rethrow_with_context(cfg.id);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    Json summary;
    summary["experiment"] = cfg.id;
    summary["seed"] = cfg.run.seed;
    if (cfg.run.n_steps > 0) {
        summary["t"] = cfg.run.t;
        summary["dt"] = cfg.run.dt;
        summary["n_steps"] = cfg.run.n_steps;
        if (cfg.run.n_listed) summary["n_listed"] = *cfg.run.n_listed;
    }
    summary["results"] = body;
    summary["threads"] = opt.threads;
    summary["runtime_seconds"] = seconds;
    write_text_file(out.path("summary.json"), summary.dump(2) + "\n");

    Json manifest;
    manifest["experiment"] = cfg.id;
    manifest["config_hash"] = hex64(fnv1a(canonical_config(cfg)));
    manifest["seed"] = cfg.run.seed;
    manifest["version"] = version;
    Json files = Json::array();
    RunResult result;
    for (const auto& [name, hash] : out.files()) {
        files.push_back({{"name", name}, {"fnv1a", hash}});
        result.files.push_back(name);
    }
    manifest["files"] = files;
    write_text_file(out.path("manifest.json"), manifest.dump(2) + "\n");
    result.files.push_back("summary.json");
    result.files.push_back("manifest.json");
    result.summary = std::move(summary);
    return result;
}

}  // namespace pathctl::experiments
