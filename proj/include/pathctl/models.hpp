#pragma once

// Ready-made problem specifications for the worked examples and the
// feedback rules that drive them in simulation.

#include <cmath>
#include <cstddef>

#include "pathctl/foc_solver.hpp"
#include "pathctl/sde_core.hpp"
#include "pathctl/strategies.hpp"

namespace pathctl::models {

//---------------------------------------------------------------------------//
// Walrasian firm with linear market dynamics
//---------------------------------------------------------------------------//

struct WalrasianModel
{
    WalrasianQuantumParams rule;
    double sigma = 0.5;
};

/// dX = (aX - u) ds + sqrt(sigma u) dB. The diffusion is evaluated at
/// max(u, 0); the domain guard reports negative controls as clamped.
inline SdeSpec walrasian_sde(const WalrasianModel& m)
{
    SdeSpec sde;
    sde.k = 1;
    sde.m = 1;
    const double a = m.rule.a;
    const double sigma = m.sigma;
    sde.drift = [a](double, const Vec& x, const Vec& u) -> Vec { return Vec::Constant(1, a * x[0] - u[0]); };
    sde.diffusion = [sigma](double, const Vec&, const Vec& u) -> Mat {
        return Mat::Constant(1, 1, std::sqrt(sigma * std::max(u[0], 0.0)));
    };
    sde.project = [](Vec& x, Vec& u) { return clamp_nonnegative(x, u, false, true); };
    return sde;
}

/// pi = e^{-zeta s} X^2 (p - c u), g = lambda* e^{-a s} X.
inline ProblemSpec walrasian_problem(const WalrasianModel& m)
{
    const WalrasianQuantumParams q = m.rule;
    ProblemSpec spec;
    spec.zeta = q.zeta;
    spec.sde = walrasian_sde(m);
    spec.profit = [q](double s, const Vec& x, const Vec& u) {
        return std::exp(-q.zeta * s) * x[0] * x[0] * (q.p - q.c * u[0]);
    };
    spec.g = GFunction::analytic(
        [q](double s, const Vec& x) { return q.lambda_star * std::exp(-q.a * s) * x[0]; },
        [q](double s, const Vec& x) { return -q.a * q.lambda_star * std::exp(-q.a * s) * x[0]; },
        [q](double s, const Vec&) -> Vec { return Vec::Constant(1, q.lambda_star * std::exp(-q.a * s)); },
        [](double, const Vec&) -> Mat { return Mat::Zero(1, 1); });
    spec.analytic_partials = [q](double s, double x, double u) {
        const double e = std::exp(-q.zeta * s);
        const double ea = q.lambda_star * std::exp(-q.a * s);
        FValue v;
        v.f_x = 2.0 * x * e * (q.p - q.c * u) + ea;
        v.f_u = -(q.c * x * x * e + ea);
        v.f_xx = 2.0 * e * (q.p - q.c * u);
        v.f_xu = -2.0 * q.c * x * e;
        return v;
    };
    return spec;
}

/// Closed-form rule on the chosen branch; a negative discriminant gives
/// u = 0 and flags the step as a fallback.
inline FeedbackRule walrasian_rule(const WalrasianQuantumParams& q, Branch branch)
{
    return [q, branch](double s, const Vec& x, RuleContext& ctx) -> Vec {
        const auto u = x[0] > 0.0 ? walrasian_quantum(s, x[0], q, branch) : std::nullopt;
        if (!u) {
            ctx.fallback = true;
            return Vec::Zero(1);
        }
        return Vec::Constant(1, *u);
    };
}

//---------------------------------------------------------------------------//
// Consumer-goods firm
//---------------------------------------------------------------------------//

/// dX = (bX - u) ds + sqrt(2b) dB.
inline SdeSpec ex3_sde(const Ex3Params& prm)
{
    SdeSpec sde;
    sde.k = 1;
    sde.m = 1;
    const double b = prm.b;
    sde.drift = [b](double, const Vec& x, const Vec& u) -> Vec { return Vec::Constant(1, b * x[0] - u[0]); };
    sde.diffusion = [b](double, const Vec&, const Vec&) -> Mat { return Mat::Constant(1, 1, std::sqrt(2.0 * b)); };
    return sde;
}

/// pi = e^{-zeta s}(p X^2 - c u^2 X), g = lambda* e^{-b s} X.
inline ProblemSpec ex3_problem(const Ex3Params& prm)
{
    ProblemSpec spec;
    spec.zeta = prm.zeta;
    spec.sde = ex3_sde(prm);
    spec.profit = [prm](double s, const Vec& x, const Vec& u) {
        return std::exp(-prm.zeta * s) * (prm.p * x[0] * x[0] - prm.c * u[0] * u[0] * x[0]);
    };
    spec.g = GFunction::analytic(
        [prm](double s, const Vec& x) { return prm.lambda_star * std::exp(-prm.b * s) * x[0]; },
        [prm](double s, const Vec& x) { return -prm.b * prm.lambda_star * std::exp(-prm.b * s) * x[0]; },
        [prm](double s, const Vec&) -> Vec { return Vec::Constant(1, prm.lambda_star * std::exp(-prm.b * s)); },
        [](double, const Vec&) -> Mat { return Mat::Zero(1, 1); });
    spec.analytic_partials = [prm](double s, double x, double u) {
        const double e = std::exp(-prm.zeta * s);
        const double eb = prm.lambda_star * std::exp(-prm.b * s);
        FValue v;
        v.f_x = e * (2.0 * prm.p * x - prm.c * u * u) + eb;
        v.f_u = -(2.0 * prm.c * x * u * e + eb);
        v.f_xx = 2.0 * prm.p * e;
        v.f_xu = -2.0 * prm.c * u * e;
        return v;
    };
    return spec;
}

/// Cubic rule: Cardano roots of B0 u^3 + ... + B3, then the root selection
/// policy. Nonpositive states fall back to u = 0.
inline FeedbackRule ex3_quantum_rule(const Ex3Params& prm)
{
    return [prm](double s, const Vec& x, RuleContext& ctx) -> Vec {
        if (!(x[0] > 0.0)) {
            ctx.fallback = true;
            return Vec::Zero(1);
        }
        return Vec::Constant(1, select_cubic_root(cardano_real_roots(ex3_cubic_coeffs(s, x[0], prm))));
    };
}

inline FeedbackRule ex3_pontryagin_rule(const Ex3Params& prm)
{
    const double b = prm.b;
    return make_rule([b](double s, const Vec& x) -> Vec { return Vec::Constant(1, ex3_pontryagin(s, x[0], b)); });
}

//---------------------------------------------------------------------------//
// Cooperative k-firm market
//---------------------------------------------------------------------------//

/// dX = [(A X) .* X - u] ds + sigma0 X dB with one Brownian factor.
inline SdeSpec pareto_sde(const ParetoParams& prm)
{
    SdeSpec sde;
    sde.k = prm.k;
    sde.m = 1;
    const Mat a = prm.a_matrix;
    const double sigma0 = prm.sigma0;
    sde.drift = [a](double, const Vec& x, const Vec& u) -> Vec { return (a * x).cwiseProduct(x) - u; };
    sde.diffusion = [sigma0](double, const Vec& x, const Vec&) -> Mat { return sigma0 * x; };
    return sde;
}

/// Pontryagin Pareto rule for every firm, bounded to [0, u_max].
inline FeedbackRule pareto_pontryagin_rule(const ParetoParams& prm, double u_max)
{
    return make_rule([prm, u_max](double s, const Vec& x) -> Vec {
        Vec u(x.size());
        for (std::size_t r = 0; r < prm.k; ++r) {
            u[static_cast<Eigen::Index>(r)] = pareto_pontryagin(s, x, r, prm, u_max);
        }
        return u;
    });
}

}  // namespace pathctl::models
