// Acceptance run: one PASS/FAIL line per criterion, with runtime and the
// measured quantities. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <Eigen/Eigenvalues>

#include "json.hpp"
#include "pathctl/experiments/config.hpp"
#include "pathctl/experiments/runner.hpp"
#include "pathctl/foc_solver.hpp"
#include "pathctl/models.hpp"
#include "pathctl/path_integral.hpp"
#include "pathctl/pi_controller.hpp"
#include "pathctl/strategies.hpp"

using namespace pathctl;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::string source_dir = PATHCTL_SOURCE_DIR;

//---------------------------------------------------------------------------//
// 1. Stationarity of the closed-form Walrasian rule
//---------------------------------------------------------------------------//

Outcome foc_consistency()
{
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> us(0.0, 1.0), ux(0.5, 2.0);

    // Tabled parameters first: how often does the rule have real roots at all?
    const auto tabled = experiments::parse_config(source_dir + "/configs/table1.cfg").walrasian->rule;
    std::size_t tabled_real = 0;
    const std::size_t tabled_draws = 100000;
    for (std::size_t i = 0; i < tabled_draws; ++i) {
        tabled_real += walrasian_discriminant(us(gen), ux(gen), tabled) >= 0.0 ? 1 : 0;
    }

    // Same model with a cost/scale pair that gives real roots on the box.
    models::WalrasianModel model;
    model.rule.p = 1.0;
    model.rule.c = 10.0;
    model.rule.zeta = 0.2;
    model.rule.a = 0.3;
    model.rule.lambda_star = 0.02;
    model.sigma = 0.5;
    const ProblemSpec problem = models::walrasian_problem(model);

    std::size_t points = 0, tries = 0, ok = 0, evaluated = 0;
    double worst = 0.0;
    while (points < 100 && tries < 1000000) {
        ++tries;
        const double s = us(gen), x = ux(gen);
        if (walrasian_discriminant(s, x, model.rule) < 0.0) continue;
        ++points;
        for (Branch b : {Branch::minus, Branch::plus}) {
            const auto u = walrasian_quantum(s, x, model.rule, b);
            if (!u) continue;
            const FocResidual r = foc_residual_terms(compute_f(problem, s, x, *u));
            const double rel = std::abs(r.residual) / (1.0 + r.scale);
            worst = std::max(worst, rel);
            ok += rel < 1e-6 ? 1 : 0;
            ++evaluated;
        }
    }
    Outcome o;
    o.pass = points == 100 && evaluated == 200 && ok == evaluated;
    o.detail = "tabled parameters: " + std::to_string(tabled_real) + "/" + std::to_string(tabled_draws)
        + " draws with real roots; c=10, lambda*=0.02: " + std::to_string(ok) + "/" + std::to_string(evaluated)
        + " branch values within 1e-6 (worst relative residual " + fmt("%.3g", worst) + ")";
    return o;
}

//---------------------------------------------------------------------------//
// 2. Cubic roots
//---------------------------------------------------------------------------//

/// Real eigenvalue of the companion matrix closest to the real axis.
double companion_real_root(const CubicCoefficients& k)
{
    Eigen::Matrix3d c = Eigen::Matrix3d::Zero();
    c(0, 0) = -k.b1 / k.b0;
    c(0, 1) = -k.b2 / k.b0;
    c(0, 2) = -k.b3 / k.b0;
    c(1, 0) = 1.0;
    c(2, 1) = 1.0;
    const Eigen::Vector3cd ev = Eigen::EigenSolver<Eigen::Matrix3d>(c, false).eigenvalues();
    int best = 0;
    for (int i = 1; i < 3; ++i) {
        if (std::abs(ev[i].imag()) < std::abs(ev[best].imag())) best = i;
    }
    return ev[best].real();
}

Outcome cubic_fidelity()
{
    std::mt19937_64 gen(202);
    std::uniform_real_distribution<double> mag(0.1, 10.0), coef(-10.0, 10.0), sign(-1.0, 1.0);
    std::vector<CubicCoefficients> cubics;
    for (int i = 0; i < 1000; ++i) {
        cubics.push_back({std::copysign(mag(gen), sign(gen)), coef(gen), coef(gen), coef(gen)});
    }
    const Ex3Params table2 = *experiments::parse_config(source_dir + "/configs/table2.cfg").ex3;
    for (int i = 0; i <= 10; ++i) {
        for (int j = 0; j <= 15; ++j) {
            cubics.push_back(ex3_cubic_coeffs(0.1 * i, 0.5 + 0.1 * j, table2));
        }
    }
    std::size_t roots = 0, residual_ok = 0, single = 0, oracle_ok = 0;
    double worst_res = 0.0, worst_gap = 0.0;
    for (const auto& k : cubics) {
        for (double r : cardano_real_roots(k)) {
            ++roots;
            const double rel = std::abs(k(r)) / k.max_abs();
            worst_res = std::max(worst_res, rel);
            residual_ok += rel < 1e-9 ? 1 : 0;
        }
        if (cardano_terms(k).discriminant >= 0.0) {
            ++single;
            const double r = cardano_real_roots(k).front();
            const double gap = std::abs(r - companion_real_root(k)) / std::max(1.0, std::abs(r));
            worst_gap = std::max(worst_gap, gap);
            oracle_ok += gap < 1e-9 ? 1 : 0;
        }
    }
    Outcome o;
    o.pass = residual_ok == roots && oracle_ok == single;
    o.detail = std::to_string(cubics.size()) + " cubics, " + std::to_string(roots) + " roots (worst residual "
        + fmt("%.2g", worst_res) + " x max|B|), " + std::to_string(oracle_ok) + "/" + std::to_string(single)
        + " single-root cases match companion eigenvalue (worst " + fmt("%.2g", worst_gap) + ")";
    return o;
}

//---------------------------------------------------------------------------//
// 3. Euler-Maruyama weak order on dX = 0.3 X ds + 0.2 X dB
//---------------------------------------------------------------------------//

Outcome em_weak_order()
{
    SdeSpec gbm;
    gbm.drift = [](double, const Vec& x, const Vec&) -> Vec { return 0.3 * x; };
    gbm.diffusion = [](double, const Vec& x, const Vec&) -> Mat { return 0.2 * x; };
    const FeedbackRule none = make_rule([](double, const Vec&) { return Vec::Zero(1); });
    const auto ens = simulate_ensemble(Vec::Ones(1), gbm, none, TimeGrid::from_dt(1.0, 0.01), 303, 20000);
    std::vector<double> terminal;
    for (const auto& p : ens.paths) terminal.push_back(p.states.back()[0]);
    const double mean = pairwise_sum(terminal) / 20000.0;
    double ss = 0.0;
    for (double v : terminal) ss += (v - mean) * (v - mean);
    const double se = std::sqrt(ss / 19999.0 / 20000.0);
    const double exact = std::exp(0.3);

    // Mean dynamics of the scheme: E X_{n+1} = (1 + a dt) E X_n, i.e. the
    // noise-free path. Its gap to e^{0.3} is the deterministic bias.
    SdeSpec det = gbm;
    det.diffusion = [](double, const Vec&, const Vec&) -> Mat { return Mat::Zero(1, 1); };
    auto bias = [&](double dt) {
        const TimeGrid g = TimeGrid::from_dt(1.0, dt);
        const auto noise = BrownianIncrements::generate(1, 0, g.n_steps(), 1, dt);
        return exact - simulate_path(Vec::Ones(1), det, none, g, noise).states.back()[0];
    };
    const double b1 = bias(0.01), b2 = bias(0.005);
    const double closed = exact - std::pow(1.003, 100.0);
    const double ratio = b1 / b2;
    Outcome o;
    o.pass = std::abs(mean - exact) < 3.0 * se && ratio >= 1.5 && ratio <= 3.0 && std::abs(b1 - closed) < 1e-12;
    o.detail = "mean " + fmt("%.6f", mean) + " vs e^0.3 = " + fmt("%.6f", exact) + " (" + fmt("%.2f", std::abs(mean - exact) / se)
        + " SE); bias ratio dt 0.01/0.005 = " + fmt("%.4f", ratio);
    return o;
}

//---------------------------------------------------------------------------//
// 4. ESS identities
//---------------------------------------------------------------------------//

Outcome ess_identities()
{
    bool uniform = true;
    for (std::size_t n : {1u, 2u, 3u, 10u, 800u, 2000u, 20000u}) {
        uniform = uniform && exp_weights(std::vector<double>(n, 0.37), 1.0, Sense::maximize).ess == static_cast<double>(n);
    }
    const std::vector<double> w{0.75, 0.25};
    const bool known = effective_sample_size(w) == 1.6;

    std::mt19937_64 gen(404);
    std::normal_distribution<double> d(0.0, 5.0);
    std::vector<double> c(1000);
    for (double& v : c) v = d(gen);
    double worst = 0.0;
    for (double shift : {-1e3, 1.0, 1e4}) {
        std::vector<double> shifted = c;
        for (double& v : shifted) v += shift;
        for (Sense s : {Sense::maximize, Sense::minimize}) {
            const auto a = exp_weights(c, 0.5, s);
            const auto b = exp_weights(shifted, 0.5, s);
            for (std::size_t i = 0; i < c.size(); ++i) worst = std::max(worst, std::abs(a.weights[i] - b.weights[i]));
        }
    }
    Outcome o;
    o.pass = uniform && known && worst <= 1e-12;
    o.detail = std::string("uniform ESS = n: ") + (uniform ? "yes" : "no") + "; (0.75, 0.25) -> "
        + fmt("%.17g", effective_sample_size(w)) + "; worst shift change " + fmt("%.2g", worst);
    return o;
}

//---------------------------------------------------------------------------//
// 5. Temperature limits
//---------------------------------------------------------------------------//

Outcome temperature_limits()
{
    std::mt19937_64 gen(505);
    std::uniform_real_distribution<double> d(-3.0, 7.0);
    std::vector<double> costs(500);
    for (double& v : costs) v = d(gen);
    const double lo = *std::min_element(costs.begin(), costs.end());
    const double hi = *std::max_element(costs.begin(), costs.end());
    const double spread = hi - lo;
    double mean = 0.0;
    for (double v : costs) mean += v;
    mean /= static_cast<double>(costs.size());

    const double hot = std::abs(entropic_value(costs, 1e4 * spread) - mean);
    const double cold = std::abs(entropic_value(costs, 1e-4 * spread) - hi);

    PiConfig cfg;
    const std::vector<double> equal(64, 2.5);
    const auto grid = theta_grid(equal, cfg);
    const auto sel = select_temperature(equal, cfg.gamma, grid);
    Outcome o;
    o.pass = hot < 1e-3 * spread && cold < 1e-3 * spread && sel.theta_hat == grid.front();
    o.detail = "R = " + fmt("%.4f", spread) + ", |hot - mean| = " + fmt("%.2e", hot) + ", |cold - max| = "
        + fmt("%.2e", cold) + ", equal costs pick theta = " + fmt("%.3g", sel.theta_hat);
    return o;
}

//---------------------------------------------------------------------------//
// 6. Receding-horizon run on the three-firm configuration
//---------------------------------------------------------------------------//

Outcome receding_horizon()
{
    auto cfg = experiments::parse_config(source_dir + "/configs/table3.cfg");
    cfg.id = "pareto_pi_compare";
    const fs::path base = fs::temp_directory_path() / "pathctl_acceptance_pi";
    fs::remove_all(base);

    auto timed = [&](unsigned threads) {
        const auto t0 = std::chrono::steady_clock::now();
        auto r = experiments::run_experiment(cfg, (base / std::to_string(threads)).string(), {threads, false});
        return std::pair{r, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
    };
    const auto [r1, t1] = timed(1);
    const auto [r8, t8] = timed(8);

    const auto path = experiments::read_csv((base / "1" / "pi_path.csv").string());
    bool bounded = true, finite = true;
    double max_x = 0.0;
    for (const auto& row : path.rows) {
        for (std::size_t c = 0; c < path.header.size(); ++c) {
            const std::string& h = path.header[c];
            if (h[0] == 'u') bounded = bounded && row[c] >= 0.0 && row[c] <= 5.0;
            if (h[0] == 'X') {
                finite = finite && std::isfinite(row[c]);
                max_x = std::max(max_x, std::abs(row[c]));
            }
        }
    }
    const bool diagnostics = fs::exists(base / "1" / "pi_diagnostics.csv")
        && experiments::read_csv((base / "1" / "pi_diagnostics.csv").string()).rows.size() == 100;
    bool identical = true;
    for (const char* f : {"pi_path.csv", "pontryagin_path.csv", "pi_diagnostics.csv"}) {
        identical = identical && slurp(base / "1" / f) == slurp(base / "8" / f);
    }
    Outcome o;
    o.pass = bounded && finite && max_x < 100.0 && diagnostics && identical && t1 < 120.0 && t8 < 30.0;
    o.detail = "u in [0,5]: " + std::string(bounded ? "yes" : "no") + ", max|X| = " + fmt("%.4f", max_x)
        + ", diagnostics rows ok: " + (diagnostics ? "yes" : "no") + ", 1 vs 8 threads identical: "
        + (identical ? "yes" : "no") + ", " + fmt("%.2f", t1) + " s at 1 thread, " + fmt("%.2f", t8)
        + " s at 8 threads on " + std::to_string(std::thread::hardware_concurrency()) + " core(s)";
    return o;
}

//---------------------------------------------------------------------------//
// 7. A/B ODEs
//---------------------------------------------------------------------------//

Outcome riccati_odes()
{
    ResourceParams quiet;
    quiet.k1 = 0.0;
    quiet.k2 = 0.0;
    quiet.zeta = 0.2;
    const auto sol = solve_AB_odes(quiet, TimeGrid::from_dt(1.0, 0.01), 0.0, 1.7);
    const double b_err = std::abs(sol.b_values.back() / (1.7 * std::exp(0.2)) - 1.0);

    NashParams nash;
    nash.k = 3;
    nash.a = 1.0;
    nash.b = 0.4;
    nash.c = 0.8;
    nash.zeta = 0.2;
    nash.sigma_sq = 0.0625;
    ResourceParams res;
    res.zeta = 0.2;
    res.b = 0.3;
    res.sigma_row = Vec::Constant(1, 0.25);

    // Error ratios under dt halving against a fine reference.
    auto ratios = [](auto&& solve) {
        const double ref = solve(1e-4);
        const double e1 = std::abs(solve(0.1) - ref), e2 = std::abs(solve(0.05) - ref), e3 = std::abs(solve(0.025) - ref);
        return std::pair{e1 / e2, e2 / e3};
    };
    const auto rn = ratios([&](double dt) { return solve_AB_odes(nash, TimeGrid::from_dt(1.0, dt), 0.5, 0.1).a_values.back(); });
    const auto rr = ratios([&](double dt) { return solve_AB_odes(res, TimeGrid::from_dt(1.0, dt), 0.4, 0.2).b_values.back(); });
    auto in = [](double r) { return r >= 10.0 && r <= 22.0; };
    Outcome o;
    o.pass = b_err < 1e-6 && in(rn.first) && in(rn.second) && in(rr.first) && in(rr.second);
    o.detail = "B(1)/(B0 e^0.2) - 1 = " + fmt("%.2e", b_err) + "; Nash A ratios " + fmt("%.2f", rn.first) + ", "
        + fmt("%.2f", rn.second) + "; resource B ratios " + fmt("%.2f", rr.first) + ", " + fmt("%.2f", rr.second);
    return o;
}

//---------------------------------------------------------------------------//
// 8. Merton-Garman operator
//---------------------------------------------------------------------------//

Outcome mgh_operator()
{
    MghParams p;
    p.r = 0.04;
    p.mu2 = 0.15;
    p.beta = 0.3;
    p.sigma2 = 0.4;
    p.alpha = 0.75;
    p.gamma = 0.3;

    const auto constant = GridFunction2D::sample(-1.0, 1.0, 17, -1.0, 1.0, 17, [](double, double) { return 3.25; });
    const auto img = mgh_operator_apply(constant, p);
    double const_err = 0.0;
    for (std::size_t i = 1; i + 1 < 17; ++i) {
        for (std::size_t j = 1; j + 1 < 17; ++j) const_err = std::max(const_err, std::abs(img.at(i, j) - p.r * 3.25));
    }

    // C = e^{a/2} sin(b) + a b^2, with the operator written out term by term:
    // r C + (e^b/2 - r) C_a - (mu2 - beta e^{-b} - s2^2/2 e^{2b(al-1)}) C_b
    //   - e^b/2 C_aa - gamma s2 e^{b(al-1/2)} C_ab - s2^2 e^{2b(al-1)} C_bb.
    auto c = [](double a, double b) { return std::exp(0.5 * a) * std::sin(b) + a * b * b; };
    auto exact = [&](double a, double b) {
        const double ea = std::exp(0.5 * a);
        const double ca = 0.5 * ea * std::sin(b) + b * b;
        const double cb = ea * std::cos(b) + 2.0 * a * b;
        const double caa = 0.25 * ea * std::sin(b);
        const double cab = 0.5 * ea * std::cos(b) + 2.0 * b;
        const double cbb = -ea * std::sin(b) + 2.0 * a;
        const double v = p.sigma2 * p.sigma2 * std::exp(2.0 * b * (p.alpha - 1.0));
        return p.r * c(a, b) + (0.5 * std::exp(b) - p.r) * ca - (p.mu2 - p.beta * std::exp(-b) - 0.5 * v) * cb
            - 0.5 * std::exp(b) * caa - p.gamma * p.sigma2 * std::exp(b * (p.alpha - 0.5)) * cab - v * cbb;
    };
    std::vector<double> defects;
    for (std::size_t n : {11u, 21u, 41u, 81u, 161u}) {
        const auto g = GridFunction2D::sample(-1.0, 1.0, n, -1.0, 1.0, n, c);
        const auto out = mgh_operator_apply(g, p);
        double d = 0.0;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            for (std::size_t j = 1; j + 1 < n; ++j) d = std::max(d, std::abs(out.at(i, j) - exact(g.a(i), g.b(j))));
        }
        defects.push_back(d);
    }
    bool ratios_ok = true;
    std::string listing;
    for (std::size_t i = 1; i < defects.size(); ++i) {
        const double r = defects[i - 1] / defects[i];
        ratios_ok = ratios_ok && r >= 3.5 && r <= 4.5;
        listing += (i > 1 ? ", " : "") + fmt("%.3f", r);
    }
    Outcome o;
    o.pass = const_err <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(p.r * 3.25) && ratios_ok;
    o.detail = "constant -> r C error " + fmt("%.2g", const_err) + "; defect ratios " + listing;
    return o;
}

//---------------------------------------------------------------------------//
// 9. Kernel propagation
//---------------------------------------------------------------------------//

Outcome kernel_semigroup()
{
    GridDensity d0;
    d0.x0 = -2.0;
    d0.dx = 0.05;
    for (int i = 0; i <= 80; ++i) {
        const double x = d0.node(i);
        d0.psi.push_back(std::exp(-0.5 * x * x) * (1.2 + std::sin(3.0 * x)));
    }
    d0.normalize();
    std::vector<double> f(d0.psi.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(d0.node(i)) + 0.3 * d0.node(i) * d0.node(i);

    const int steps = 40;
    const double eps = 0.025;
    bool mass_ok = true, nonneg = true;
    auto d = d0;
    for (int n = 0; n < steps; ++n) {
        d = propagate_kernel(d, f, eps);
        mass_ok = mass_ok && std::abs(d.mass() - 1.0) < 1e-12;
        for (double v : d.psi) nonneg = nonneg && v >= 0.0;
    }
    // One shot, normalized by hand.
    std::vector<double> once(d0.psi.size());
    double mass = 0.0;
    for (std::size_t i = 0; i < once.size(); ++i) {
        once[i] = d0.psi[i] * std::exp(-steps * eps * f[i]);
        mass += once[i] * d0.dx;
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < once.size(); ++i) {
        once[i] /= mass;
        worst = std::max(worst, std::abs(d.psi[i] - once[i]) / once[i]);
    }
    Outcome o;
    o.pass = worst < 1e-12 && mass_ok && nonneg;
    o.detail = std::to_string(steps) + " steps vs one shot: worst relative gap " + fmt("%.2g", worst)
        + ", unit mass every step: " + (mass_ok ? "yes" : "no") + ", nonnegative: " + (nonneg ? "yes" : "no");
    return o;
}

//---------------------------------------------------------------------------//
// 10. Command-line reproduction runs
//---------------------------------------------------------------------------//

Outcome reproduction_harness()
{
    const fs::path base = fs::temp_directory_path() / "pathctl_acceptance_cli";
    fs::remove_all(base);
    fs::create_directories(base);
    struct Cmd
    {
        const char* sub;
        const char* cfg;
    };
    const std::vector<Cmd> cmds{{"simulate", "table1.cfg"}, {"mc", "table1.cfg"}, {"compare-ex3", "table2.cfg"},
                                {"pi-compare", "table3.cfg"}};
    bool all_ok = true;
    std::string notes;
    long fallback = -1;
    for (const auto& c : cmds) {
        bool ok = true;
        for (const char* rep : {"a", "b"}) {
            const fs::path out = base / (std::string(c.sub) + "_" + rep);
            const std::string line = std::string("\"") + PATHCTL_CLI + "\" " + c.sub + " --config \"" + source_dir
                + "/configs/" + c.cfg + "\" --out \"" + out.string() + "\" > \"" + out.string() + ".log\" 2>&1";
            ok = ok && std::system(line.c_str()) == 0 && fs::exists(out / "manifest.json");
        }
        const fs::path a = base / (std::string(c.sub) + "_a"), b = base / (std::string(c.sub) + "_b");
        if (ok) {
            ok = slurp(a / "manifest.json") == slurp(b / "manifest.json");
            const auto manifest = nlohmann::json::parse(slurp(a / "manifest.json"));
            for (const auto& f : manifest["files"]) {
                const std::string name = f["name"];
                const std::string bytes = slurp(a / name);
                ok = ok && !bytes.empty() && bytes == slurp(b / name)
                    && experiments::hex64(experiments::fnv1a(bytes)) == f["fnv1a"].get<std::string>();
            }
        }
        if (ok && std::string(c.sub) == "simulate") {
            const auto summary = nlohmann::json::parse(slurp(a / "summary.json"));
            const auto& res = summary["results"];
            ok = res.contains("fallback_events");
            if (ok) fallback = res["fallback_events"].get<long>();
        }
        all_ok = all_ok && ok;
        notes += std::string(notes.empty() ? "" : ", ") + c.sub + (ok ? " ok" : " FAILED");
    }
    Outcome o;
    o.pass = all_ok && fallback >= 0;
    o.detail = notes + "; simulate fallback events recorded: " + std::to_string(fallback);
    return o;
}

}  // namespace

int main()
{
    struct Criterion
    {
        int id;
        const char* name;
        std::function<Outcome()> run;
        double limit_seconds;  // 0 = no runtime bound
    };
    const std::vector<Criterion> criteria{
        {1, "FOC consistency", foc_consistency, 2.0},
        {2, "cubic fidelity", cubic_fidelity, 1.0},
        {3, "EM weak order", em_weak_order, 30.0},
        {4, "ESS identities", ess_identities, 0.0},
        {5, "temperature limits", temperature_limits, 1.0},
        {6, "receding-horizon stability", receding_horizon, 0.0},
        {7, "A/B ODE integration", riccati_odes, 0.0},
        {8, "Merton-Garman operator", mgh_operator, 5.0},
        {9, "kernel propagation", kernel_semigroup, 0.0},
        {10, "reproduction harness", reproduction_harness, 0.0},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (c.limit_seconds > 0.0 && secs >= c.limit_seconds) {
            o.pass = false;
            o.detail += " [over the " + fmt("%.0f", c.limit_seconds) + " s budget]";
        }
        failed += o.pass ? 0 : 1;
        std::printf("%s criterion %2d  %-28s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
