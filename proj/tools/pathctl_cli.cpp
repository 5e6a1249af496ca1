// pathctl command-line driver.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 I/O error.

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pathctl/errors.hpp"
#include "pathctl/experiments/config.hpp"
#include "pathctl/experiments/csv.hpp"
#include "pathctl/experiments/runner.hpp"
#include "pathctl/experiments/svg.hpp"
#include "pathctl/version.hpp"

namespace ex = pathctl::experiments;

namespace {

enum Exit : int { ok = 0, config_error = 2, numerical_error = 3, io_error = 4 };

struct RunArgs
{
    std::string config;
    std::string out;
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned threads = 1;
    bool no_svg = false;
};

void add_run_flags(CLI::App* cmd, RunArgs& a)
{
    cmd->add_option("--config", a.config, "experiment configuration file")->required();
    cmd->add_option("--out", a.out, "output directory (default out/<experiment>)");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&a](const std::uint64_t& s) { a.seed = s, a.seed_given = true; }, "override run.seed");
    cmd->add_option("--threads", a.threads, "worker threads")->check(CLI::PositiveNumber);
    cmd->add_flag("--no-svg", a.no_svg, "skip SVG rendering");
}

/// mc serves both Monte Carlo experiments; the config's model section decides.
std::string resolve_id(const std::string& command, const ex::ExperimentConfig& cfg)
{
    if (command == "simulate") return "walrasian_path";
    if (command == "compare-ex3") return "ex3_compare";
    if (command == "pi-compare") return "pareto_pi_compare";
    if (command == "foc-scan") return "foc_scan";
    if (command == "mgh-defect") return "mgh_defect";
    if (cfg.walrasian && cfg.ex3) {
        throw pathctl::ConfigError("mc needs exactly one of the walrasian and ex3 sections");
    }
    return cfg.ex3 ? "ex3_mc" : "walrasian_mc";
}

int run(const std::string& command, const RunArgs& a)
{
    ex::ExperimentConfig cfg = ex::parse_config(a.config);
    const std::string id = resolve_id(command, cfg);
    if (!cfg.id.empty() && cfg.id != id) {
        throw pathctl::ConfigError("config is for experiment " + cfg.id + ", not " + id);
    }
    cfg.id = id;
    if (a.seed_given) cfg.run.seed = a.seed;
    const std::string out = a.out.empty() ? "out/" + id : a.out;

    const auto result = ex::run_experiment(cfg, out, {a.threads, !a.no_svg});
    std::cout << id << ": wrote " << result.files.size() << " files to " << out << "\n";
    std::cout << result.summary["results"].dump() << "\n";
    return ok;
}

int render(const std::string& input, const std::string& x, const std::string& ys, const std::string& layout,
           const std::string& title, const std::string& out)
{
    const ex::CsvTable table = ex::read_csv(input);
    ex::Figure fig;
    if (layout == "walrasian") {
        fig = ex::walrasian_layout(table);
    } else {
        std::vector<std::string> cols;
        std::stringstream ss(ys);
        std::string c;
        while (std::getline(ss, c, ',')) cols.push_back(c);
        if (cols.empty()) throw pathctl::InvalidArgument("--y needs at least one column");
        fig = ex::figure_from_csv(table, x, cols, title.empty() ? input : title);
    }
    ex::write_text_file(out, ex::render_svg(fig));
    std::cout << "wrote " << out << "\n";
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Path-integral feedback control experiments"};
    app.set_version_flag("--version", pathctl::version);
    app.require_subcommand(1);

    const std::vector<std::pair<std::string, std::string>> commands{
        {"simulate", "single Walrasian trajectory"},
        {"mc", "Monte Carlo ensemble (Walrasian or cubic example)"},
        {"compare-ex3", "cubic quantum rule vs Pontryagin on common noise"},
        {"pi-compare", "receding-horizon PI control vs Pontryagin Pareto rule"},
        {"foc-scan", "stationarity residual of closed-form rules over a grid"},
        {"mgh-defect", "Merton-Garman operator defect under grid refinement"},
    };
    RunArgs args;
    std::vector<CLI::App*> run_cmds;
    for (const auto& [name, help] : commands) {
        auto* cmd = app.add_subcommand(name, help);
        add_run_flags(cmd, args);
        run_cmds.push_back(cmd);
    }

    std::string input, x = "s_over_t", ys = "X,u", layout = "stack", title, out;
    auto* rcmd = app.add_subcommand("render", "render an SVG from a CSV file");
    rcmd->add_option("--input", input, "CSV file")->required();
    rcmd->add_option("--x", x, "x column");
    rcmd->add_option("--y", ys, "comma-separated y columns, one panel each");
    rcmd->add_option("--layout", layout, "stack or walrasian")->check(CLI::IsMember({"stack", "walrasian"}));
    rcmd->add_option("--title", title, "figure title");
    rcmd->add_option("--out", out, "SVG file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    try {
        if (rcmd->parsed()) return render(input, x, ys, layout, title, out);
        for (auto* cmd : run_cmds) {
            if (cmd->parsed()) return run(cmd->get_name(), args);
        }
    } catch (const pathctl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const pathctl::InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const pathctl::IoError& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io_error;
    } catch (const pathctl::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical_error;
    } catch (const std::exception& e) {
        std::cerr << "I/O error: " << e.what() << "\n";
        return io_error;
    }
    return config_error;
}
