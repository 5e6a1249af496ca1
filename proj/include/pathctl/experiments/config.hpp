#pragma once

// Line-oriented experiment configuration:
//
//   # comment
//   section.key = value
//   pareto.alpha = 0.3333333333333333, 0.3333333333333333, 0.3333333333333334
//   pareto.A = 0.15, 0.05, 0.02; 0.05, 0.12, 0.04; 0.02, 0.04, 0.10
//
// Unknown sections or keys, duplicates and malformed values are rejected
// with the offending line number.

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "pathctl/errors.hpp"
#include "pathctl/models.hpp"
#include "pathctl/pi_controller.hpp"
#include "pathctl/strategies.hpp"

namespace pathctl::experiments {

inline const std::set<std::string>& known_experiments()
{
    static const std::set<std::string> ids{"walrasian_path", "walrasian_mc", "ex3_compare", "ex3_mc",
                                           "pareto_pi_compare", "foc_scan", "mgh_defect"};
    return ids;
}

struct RunSettings
{
    double t = 1.0;
    double dt = 0.01;
    Vec x0;
    std::uint64_t seed = 0;
    std::size_t n_paths = 0;
    double eps_w = 1.0;
    std::optional<std::size_t> n_listed;  // tabled N, informative only
    std::size_t n_steps = 0;              // round(t / dt)
};

struct FocScanSettings
{
    std::string model = "walrasian";
    std::size_t s_points = 11;
    std::size_t x_points = 16;
    double x_min = 0.5;
    double x_max = 2.0;
    double u_lo = -1.0;
    double u_hi = 1.0;
};

struct MghSettings
{
    MghParams params;
    double a_min = -0.5;
    double a_max = 0.5;
    double b_min = -0.5;
    double b_max = 0.5;
    std::size_t n0 = 11;
    std::size_t levels = 4;
};

struct ExperimentConfig
{
    std::string id;
    RunSettings run;
    std::optional<models::WalrasianModel> walrasian;
    Branch branch = Branch::minus;
    std::optional<Ex3Params> ex3;
    std::optional<ParetoParams> pareto;
    std::optional<PiConfig> pi;
    std::optional<FocScanSettings> foc_scan;
    std::optional<MghSettings> mgh;
    /// Parsed entries in file order, used for the manifest hash.
    std::vector<std::pair<std::string, std::string>> entries;
};

namespace detail {

struct Entry
{
    std::string value;
    std::size_t line = 0;
    bool used = false;
};

inline std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& text, std::size_t line, const std::string& key)
{
    const std::string t = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(key + ": expected a number, got '" + t + "'", line);
    }
    if (!std::isfinite(v)) {
        throw ConfigError(key + ": value must be finite", line);
    }
    return v;
}

inline std::uint64_t parse_uint(const std::string& text, std::size_t line, const std::string& key)
{
    const std::string t = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
        throw ConfigError(key + ": expected a nonnegative integer, got '" + t + "'", line);
    }
    return v;
}

inline std::vector<double> parse_list(const std::string& text, std::size_t line, const std::string& key)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(item, line, key));
    }
    if (out.empty()) {
        throw ConfigError(key + ": empty list", line);
    }
    return out;
}

inline Mat parse_matrix(const std::string& text, std::size_t line, const std::string& key)
{
    std::vector<std::vector<double>> rows;
    std::stringstream ss(text);
    std::string row;
    while (std::getline(ss, row, ';')) {
        rows.push_back(parse_list(row, line, key));
    }
    if (rows.empty()) {
        throw ConfigError(key + ": empty matrix", line);
    }
    Mat m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.front().size()) {
            throw ConfigError(key + ": ragged matrix rows", line);
        }
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

/// Key lookup with consumption tracking.
class Table
{
  public:
    Table(std::map<std::string, Entry> entries, std::size_t last_line)
        : entries_(std::move(entries)), last_line_(last_line)
    {
    }

    bool has_section(const std::string& section) const
    {
        const std::string prefix = section + ".";
        return std::any_of(entries_.begin(), entries_.end(),
                           [&](const auto& kv) { return kv.first.rfind(prefix, 0) == 0; });
    }

    const Entry* find(const std::string& key)
    {
        auto it = entries_.find(key);
        if (it == entries_.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    const Entry& require(const std::string& key)
    {
        const Entry* e = find(key);
        if (!e) {
            throw ConfigError("missing required key " + key, last_line_);
        }
        return *e;
    }

    double number(const std::string& key)
    {
        const Entry& e = require(key);
        return parse_double(e.value, e.line, key);
    }
    double number_or(const std::string& key, double fallback)
    {
        const Entry* e = find(key);
        return e ? parse_double(e->value, e->line, key) : fallback;
    }
    std::uint64_t integer(const std::string& key)
    {
        const Entry& e = require(key);
        return parse_uint(e.value, e.line, key);
    }
    std::uint64_t integer_or(const std::string& key, std::uint64_t fallback)
    {
        const Entry* e = find(key);
        return e ? parse_uint(e->value, e->line, key) : fallback;
    }
    std::size_t line_of(const std::string& key) const
    {
        auto it = entries_.find(key);
        return it == entries_.end() ? last_line_ : it->second.line;
    }

    void reject_unused() const
    {
        for (const auto& [key, e] : entries_) {
            if (!e.used) {
                throw ConfigError("unknown key " + key, e.line);
            }
        }
    }

  private:
    std::map<std::string, Entry> entries_;
    std::size_t last_line_;
};

/// Runs `check`, rethrowing InvalidArgument as a ConfigError at `line`.
template <class F>
void check_at(std::size_t line, F&& check)
{
    try {
        check();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what(), line);
    }
}

}  // namespace detail

inline ExperimentConfig parse_config_text(const std::string& text)
{
    static const std::set<std::string> sections{"experiment", "run", "walrasian", "ex3", "pareto", "pi", "foc_scan", "mgh"};

    std::map<std::string, detail::Entry> entries;
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = detail::trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("expected 'section.key = value'", line_no);
        }
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const auto dot = key.find('.');
        if (dot == std::string::npos || dot == 0 || dot + 1 == key.size()) {
            throw ConfigError("key '" + key + "' must have the form section.key", line_no);
        }
        if (!sections.count(key.substr(0, dot))) {
            throw ConfigError("unknown section '" + key.substr(0, dot) + "'", line_no);
        }
        if (value.empty()) {
            throw ConfigError(key + ": missing value", line_no);
        }
        if (!entries.emplace(key, detail::Entry{value, line_no, false}).second) {
            throw ConfigError("duplicate key " + key, line_no);
        }
        cfg.entries.emplace_back(key, value);
    }
    detail::Table tab(std::move(entries), line_no);

    if (const auto* e = tab.find("experiment.id")) {
        if (!known_experiments().count(e->value)) {
            throw ConfigError("unknown experiment '" + e->value + "'", e->line);
        }
        cfg.id = e->value;
    }

    // run
    if (tab.has_section("run")) {
        RunSettings& r = cfg.run;
        r.t = tab.number("run.t");
        r.dt = tab.number("run.dt");
        detail::check_at(tab.line_of("run.dt"), [&] {
            if (!(r.dt > 0.0)) throw InvalidArgument("dt must be positive");
        });
        detail::check_at(tab.line_of("run.t"), [&] {
            if (!(r.t > 0.0)) throw InvalidArgument("t must be positive");
        });
        detail::check_at(tab.line_of("run.dt"), [&] { r.n_steps = TimeGrid::from_dt(r.t, r.dt).n_steps(); });
        const auto& x0 = tab.require("run.x0");
        const auto xs = detail::parse_list(x0.value, x0.line, "run.x0");
        r.x0 = Eigen::Map<const Vec>(xs.data(), static_cast<Eigen::Index>(xs.size()));
        r.seed = tab.integer("run.seed");
        r.n_paths = tab.integer_or("run.n_paths", 0);
        r.eps_w = tab.number_or("run.eps_w", 1.0);
        if (tab.find("run.N")) {
            r.n_listed = tab.integer("run.N");
        }
    }

    if (tab.has_section("walrasian")) {
        models::WalrasianModel m;
        m.rule.a = tab.number("walrasian.a");
        m.sigma = tab.number("walrasian.sigma");
        m.rule.p = tab.number("walrasian.p");
        m.rule.c = tab.number("walrasian.c");
        m.rule.zeta = tab.number("walrasian.zeta");
        m.rule.lambda_star = tab.number("walrasian.lambda_star");
        detail::check_at(tab.line_of("walrasian.a"), [&] {
            m.rule.validate();
            if (!(m.sigma > 0.0)) throw InvalidArgument("sigma must be positive");
        });
        if (const auto* b = tab.find("walrasian.branch")) {
            if (b->value == "plus") cfg.branch = Branch::plus;
            else if (b->value == "minus") cfg.branch = Branch::minus;
            else throw ConfigError("walrasian.branch must be plus or minus", b->line);
        }
        cfg.walrasian = m;
    }

    if (tab.has_section("ex3")) {
        Ex3Params p;
        p.b = tab.number("ex3.b");
        p.c = tab.number("ex3.c");
        p.zeta = tab.number("ex3.zeta");
        p.lambda_star = tab.number("ex3.lambda_star");
        p.p = tab.number("ex3.p");
        detail::check_at(tab.line_of("ex3.b"), [&] { p.validate(); });
        cfg.ex3 = p;
    }

    if (tab.has_section("pareto")) {
        ParetoParams p;
        p.k = tab.integer("pareto.k");
        const auto& alpha = tab.require("pareto.alpha");
        const auto av = detail::parse_list(alpha.value, alpha.line, "pareto.alpha");
        p.alpha = Eigen::Map<const Vec>(av.data(), static_cast<Eigen::Index>(av.size()));
        p.p = tab.number("pareto.p");
        p.c = tab.number("pareto.c");
        p.omega1 = tab.number("pareto.omega1");
        p.omega2 = tab.number("pareto.omega2");
        p.zeta = tab.number("pareto.zeta");
        p.lambda_star = tab.number_or("pareto.lambda_star", 0.0);
        const auto& a = tab.require("pareto.A");
        p.a_matrix = detail::parse_matrix(a.value, a.line, "pareto.A");
        p.sigma0 = tab.number("pareto.sigma0");
        detail::check_at(alpha.line, [&] {
            if (static_cast<std::size_t>(p.alpha.size()) != p.k) throw InvalidArgument("alpha must have k entries");
            for (Eigen::Index i = 0; i < p.alpha.size(); ++i) {
                if (!(p.alpha[i] >= 0.0 && p.alpha[i] <= 1.0)) throw InvalidArgument("alpha entries must lie in [0, 1]");
            }
            if (std::abs(p.alpha.sum() - 1.0) > 1e-12) {
                std::ostringstream os;
                os.precision(17);
                os << "alpha sums to " << p.alpha.sum() << ", expected 1";
                throw InvalidArgument(os.str());
            }
        });
        detail::check_at(a.line, [&] { p.validate(); });
        cfg.pareto = p;
    }

    if (tab.has_section("pi")) {
        PiConfig c;
        c.gamma = tab.number("pi.gamma");
        c.M = tab.integer("pi.M");
        c.H = tab.integer("pi.H");
        c.kappa_u = tab.number("pi.kappa_u");
        c.u_min = tab.number("pi.u_min");
        c.u_max = tab.number("pi.u_max");
        c.theta_count = tab.integer_or("pi.theta_count", c.theta_count);
        c.theta_lo = tab.number_or("pi.theta_lo", c.theta_lo);
        c.theta_hi = tab.number_or("pi.theta_hi", c.theta_hi);
        c.weight_sign = tab.number_or("pi.weight_sign", c.weight_sign);
        c.dt = cfg.run.dt;
        detail::check_at(tab.line_of("pi.M"), [&] { c.validate(); });
        cfg.pi = c;
    }

    if (tab.has_section("foc_scan")) {
        FocScanSettings f;
        if (const auto* m = tab.find("foc_scan.model")) {
            if (m->value != "walrasian" && m->value != "ex3") {
                throw ConfigError("foc_scan.model must be walrasian or ex3", m->line);
            }
            f.model = m->value;
        }
        f.s_points = tab.integer("foc_scan.s_points");
        f.x_points = tab.integer("foc_scan.x_points");
        f.x_min = tab.number("foc_scan.x_min");
        f.x_max = tab.number("foc_scan.x_max");
        f.u_lo = tab.number("foc_scan.u_lo");
        f.u_hi = tab.number("foc_scan.u_hi");
        detail::check_at(tab.line_of("foc_scan.x_min"), [&] {
            if (!(f.x_min > 0.0 && f.x_max > f.x_min)) throw InvalidArgument("need 0 < x_min < x_max");
            if (!(f.u_hi > f.u_lo)) throw InvalidArgument("need u_lo < u_hi");
            if (f.s_points < 2 || f.x_points < 2) throw InvalidArgument("scan needs at least two points per axis");
        });
        cfg.foc_scan = f;
    }

    if (tab.has_section("mgh")) {
        MghSettings m;
        m.params.r = tab.number("mgh.r");
        m.params.mu2 = tab.number("mgh.mu2");
        m.params.beta = tab.number("mgh.beta");
        m.params.sigma2 = tab.number("mgh.sigma2");
        m.params.alpha = tab.number("mgh.alpha");
        m.params.gamma = tab.number("mgh.gamma");
        m.a_min = tab.number("mgh.a_min");
        m.a_max = tab.number("mgh.a_max");
        m.b_min = tab.number("mgh.b_min");
        m.b_max = tab.number("mgh.b_max");
        m.n0 = tab.integer("mgh.n0");
        m.levels = tab.integer("mgh.levels");
        detail::check_at(tab.line_of("mgh.n0"), [&] {
            if (m.n0 < 3) throw InvalidArgument("grid needs at least 3 nodes per axis");
            if (m.levels < 2) throw InvalidArgument("need at least two refinement levels");
            if (!(m.a_max > m.a_min && m.b_max > m.b_min)) throw InvalidArgument("empty grid box");
        });
        cfg.mgh = m;
    }

    tab.reject_unused();
    return cfg;
}

inline ExperimentConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot read config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

/// Checks that the sections experiment `id` needs are present.
inline void require_sections(const ExperimentConfig& cfg)
{
    auto need = [&](bool present, const char* section) {
        if (!present) throw ConfigError(std::string("experiment ") + cfg.id + " needs a [" + section + "] section", 0);
    };
    if (!known_experiments().count(cfg.id)) {
        throw ConfigError("unknown experiment '" + cfg.id + "'", 0);
    }
    const bool has_run = cfg.run.n_steps > 0;
    if (cfg.id == "walrasian_path" || cfg.id == "walrasian_mc") {
        need(has_run, "run");
        need(cfg.walrasian.has_value(), "walrasian");
    } else if (cfg.id == "ex3_compare" || cfg.id == "ex3_mc") {
        need(has_run, "run");
        need(cfg.ex3.has_value(), "ex3");
    } else if (cfg.id == "pareto_pi_compare") {
        need(has_run, "run");
        need(cfg.pareto.has_value(), "pareto");
        need(cfg.pi.has_value(), "pi");
    } else if (cfg.id == "foc_scan") {
        need(cfg.foc_scan.has_value(), "foc_scan");
        need(cfg.foc_scan->model == "walrasian" ? cfg.walrasian.has_value() : cfg.ex3.has_value(),
             cfg.foc_scan->model.c_str());
    } else if (cfg.id == "mgh_defect") {
        need(cfg.mgh.has_value(), "mgh");
    }
    if (cfg.id == "walrasian_mc" || cfg.id == "ex3_mc") {
        if (cfg.run.n_paths < 1) throw ConfigError("run.n_paths must be at least 1", 0);
    }
    if (has_run) {
        const std::size_t k = cfg.pareto && cfg.id == "pareto_pi_compare" ? cfg.pareto->k : 1;
        if (static_cast<std::size_t>(cfg.run.x0.size()) != k) {
            throw ConfigError("run.x0 must have " + std::to_string(k) + " entries", 0);
        }
    }
}

}  // namespace pathctl::experiments
