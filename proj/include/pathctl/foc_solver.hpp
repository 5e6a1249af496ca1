#pragma once

// The f-function of the Wick-rotated action and the first-order condition
//
//     f_u * (f_xx)^2 = 2 * f_x * f_xu
//
// whose root in u is the feedback strategy, plus the Merton-Garman
// counterparts (bivariate f and the Hamiltonian operator in log
// coordinates).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "pathctl/errors.hpp"
#include "pathctl/sde_core.hpp"

namespace pathctl {

//---------------------------------------------------------------------------//
// GFunction
//---------------------------------------------------------------------------//

/// Integrating-factor function g(s, X) and the partials entering f.
struct GFunction
{
    enum class Mode { analytic, finite_difference };

    using ScalarFn = std::function<double(double s, const Vec& x)>;
    using GradFn = std::function<Vec(double s, const Vec& x)>;
    using HessFn = std::function<Mat(double s, const Vec& x)>;

    ScalarFn value;
    ScalarFn d_s;
    GradFn d_x;
    HessFn d_xx;
    Mode mode = Mode::analytic;

    static GFunction analytic(ScalarFn value, ScalarFn d_s, GradFn d_x, HessFn d_xx)
    {
        return {std::move(value), std::move(d_s), std::move(d_x), std::move(d_xx), Mode::analytic};
    }

    /// Partials by central differences with h = rel_step * max(1, |.|).
    static GFunction finite_difference(ScalarFn value, double rel_step = 1e-5)
    {
        GFunction g;
        g.mode = Mode::finite_difference;
        g.value = value;
        g.d_s = [value, rel_step](double s, const Vec& x) {
            const double h = rel_step * std::max(1.0, std::abs(s));
            return (value(s + h, x) - value(s - h, x)) / (2.0 * h);
        };
        g.d_x = [value, rel_step](double s, const Vec& x) {
            Vec grad(x.size());
            for (Eigen::Index i = 0; i < x.size(); ++i) {
                const double h = rel_step * std::max(1.0, std::abs(x[i]));
                Vec xp = x, xm = x;
                xp[i] += h;
                xm[i] -= h;
                grad[i] = (value(s, xp) - value(s, xm)) / (2.0 * h);
            }
            return grad;
        };
        g.d_xx = [value, rel_step](double s, const Vec& x) {
            const Eigen::Index k = x.size();
            Mat hess(k, k);
            const double f0 = value(s, x);
            for (Eigen::Index i = 0; i < k; ++i) {
                const double hi = rel_step * std::max(1.0, std::abs(x[i]));
                Vec xp = x, xm = x;
                xp[i] += hi;
                xm[i] -= hi;
                hess(i, i) = (value(s, xp) - 2.0 * f0 + value(s, xm)) / (hi * hi);
                for (Eigen::Index j = 0; j < i; ++j) {
                    const double hj = rel_step * std::max(1.0, std::abs(x[j]));
                    Vec pp = x, pm = x, mp = x, mm = x;
                    pp[i] += hi; pp[j] += hj;
                    pm[i] += hi; pm[j] -= hj;
                    mp[i] -= hi; mp[j] += hj;
                    mm[i] -= hi; mm[j] -= hj;
                    hess(i, j) = hess(j, i)
                        = (value(s, pp) - value(s, pm) - value(s, mp) + value(s, mm)) / (4.0 * hi * hj);
                }
            }
            return hess;
        };
        return g;
    }

    /// g == 0 on a k-dimensional state.
    static GFunction zero(std::size_t k)
    {
        const auto dim = static_cast<Eigen::Index>(k);
        return analytic([](double, const Vec&) { return 0.0; },
                        [](double, const Vec&) { return 0.0; },
                        [dim](double, const Vec&) -> Vec { return Vec::Zero(dim); },
                        [dim](double, const Vec&) -> Mat { return Mat::Zero(dim, dim); });
    }
};

//---------------------------------------------------------------------------//
// ProblemSpec / FValue
//---------------------------------------------------------------------------//

/// f and the partials used by the first-order condition.
struct FValue
{
    double f = 0.0;
    double f_u = 0.0;
    double f_x = 0.0;
    double f_xx = 0.0;
    double f_xu = 0.0;
};

/// Discounted profit pi(s, X, u), dynamics and integrating factor.
struct ProblemSpec
{
    using ProfitFn = std::function<double(double s, const Vec& x, const Vec& u)>;
    using PartialsFn = std::function<FValue(double s, double x, double u)>;

    ProfitFn profit;
    SdeSpec sde;
    GFunction g;
    double zeta = 0.0;
    /// Closed-form partials of f for scalar problems; central differences
    /// are used when empty.
    PartialsFn analytic_partials;
    /// Relative step for the finite-difference partials of f.
    double rel_step = 1e-5;
};

/// f = pi + g + g_s + mu . grad g + 1/2 tr(sigma sigma' Hess g), evaluated
/// for arbitrary (k, m). The simulator's domain guard is not applied: f is
/// evaluated at the given (X, u).
inline double f_value(const ProblemSpec& spec, double s, const Vec& x, const Vec& u)
{
    const Vec mu = spec.sde.drift(s, x, u);
    const Mat sigma = spec.sde.diffusion(s, x, u);
    const double f = spec.profit(s, x, u) + spec.g.value(s, x) + spec.g.d_s(s, x)
        + mu.dot(spec.g.d_x(s, x)) + 0.5 * (sigma * sigma.transpose()).cwiseProduct(spec.g.d_xx(s, x)).sum();
    if (!std::isfinite(f)) {
        throw DomainError("f is not finite at s = " + std::to_string(s) + ", X = " + format_vector(x));
    }
    return f;
}

namespace detail {

inline double f_scalar(const ProblemSpec& spec, double s, double x, double u)
{
    return f_value(spec, s, Vec::Constant(1, x), Vec::Constant(1, u));
}

}  // namespace detail

/// f and its partials at a scalar (X, u). Requires k == 1 and a scalar
/// control.
inline FValue compute_f(const ProblemSpec& spec, double s, double x, double u)
{
    if (spec.sde.k != 1) {
        throw InvalidArgument("compute_f needs a scalar state");
    }
    if (spec.analytic_partials) {
        FValue v = spec.analytic_partials(s, x, u);
        v.f = detail::f_scalar(spec, s, x, u);
        if (!std::isfinite(v.f_u) || !std::isfinite(v.f_x) || !std::isfinite(v.f_xx)
            || !std::isfinite(v.f_xu)) {
            throw DomainError("non-finite partials of f");
        }
        return v;
    }

    const double hx = spec.rel_step * std::max(1.0, std::abs(x));
    const double hu = spec.rel_step * std::max(1.0, std::abs(u));
    auto f = [&](double xx, double uu) { return detail::f_scalar(spec, s, xx, uu); };

    FValue v;
    v.f = f(x, u);
    const double f_xp = f(x + hx, u);
    const double f_xm = f(x - hx, u);
    v.f_x = (f_xp - f_xm) / (2.0 * hx);
    v.f_xx = (f_xp - 2.0 * v.f + f_xm) / (hx * hx);
    v.f_u = (f(x, u + hu) - f(x, u - hu)) / (2.0 * hu);
    v.f_xu = (f(x + hx, u + hu) - f(x + hx, u - hu) - f(x - hx, u + hu) + f(x - hx, u - hu))
        / (4.0 * hx * hu);
    return v;
}

/// Residual of the first-order condition together with the magnitude of
/// its two sides, used as the tolerance scale.
struct FocResidual
{
    double residual = 0.0;
    double scale = 0.0;
};

inline FocResidual foc_residual_terms(const FValue& v)
{
    const double lhs = v.f_u * v.f_xx * v.f_xx;
    const double rhs = 2.0 * v.f_x * v.f_xu;
    return {lhs - rhs, std::abs(lhs) + std::abs(rhs)};
}

/// f_u (f_xx)^2 - 2 f_x f_xu, the product form (no division by f_xx).
inline double foc_residual(const ProblemSpec& spec, double s, double x, double u)
{
    return foc_residual_terms(compute_f(spec, s, x, u)).residual;
}

//---------------------------------------------------------------------------//
// solve_foc
//---------------------------------------------------------------------------//

struct Bracket
{
    double lo;
    double hi;
};

/// Root of the first-order condition inside `bracket`: locate a sign change
/// (end points, else a 64-point scan), bisect, then refine with safeguarded
/// secant steps. Converged when |residual| <= tol * (1 + scale) or the
/// bracket has shrunk to a few ulps.
inline double solve_foc(const ProblemSpec& spec, double s, double x, Bracket bracket, double tol = 1e-10)
{
    if (!(bracket.lo < bracket.hi)) {
        throw InvalidArgument("bracket must satisfy lo < hi");
    }
    auto eval = [&](double u) { return foc_residual_terms(compute_f(spec, s, x, u)); };
    auto converged = [&](const FocResidual& r) { return std::abs(r.residual) <= tol * (1.0 + r.scale); };

    double lo = bracket.lo;
    double hi = bracket.hi;
    FocResidual r_lo = eval(lo);
    FocResidual r_hi = eval(hi);
    // An exact zero counts as a root only where the condition is not
    // identically zero over the sampled points.
    if (r_lo.residual == 0.0 && r_hi.residual != 0.0) return lo;
    if (r_hi.residual == 0.0 && r_lo.residual != 0.0) return hi;

    if (std::signbit(r_lo.residual) == std::signbit(r_hi.residual) || r_lo.residual == 0.0) {
        constexpr int kScan = 64;
        bool found = false;
        bool any_nonzero = r_lo.residual != 0.0 || r_hi.residual != 0.0;
        std::optional<double> first_zero;
        if (r_lo.residual == 0.0) first_zero = lo;
        double prev_u = bracket.lo;
        FocResidual prev = r_lo;
        for (int i = 1; i < kScan; ++i) {
            const double u = bracket.lo + (bracket.hi - bracket.lo) * i / (kScan - 1);
            const FocResidual cur = eval(u);
            if (cur.residual == 0.0) {
                if (!first_zero) first_zero = u;
            } else {
                any_nonzero = true;
            }
            if (prev.residual != 0.0 && cur.residual != 0.0
                && std::signbit(prev.residual) != std::signbit(cur.residual)) {
                lo = prev_u;
                hi = u;
                r_lo = prev;
                r_hi = cur;
                found = true;
                break;
            }
            prev_u = u;
            prev = cur;
        }
        if (!found) {
            if (first_zero && any_nonzero) return *first_zero;
            throw NumericalError("no sign change in bracket");
        }
    }

    constexpr int kMaxIterations = 200;
    int iter = 0;
    // Bisection until the bracket is small relative to its location.
    while (iter < kMaxIterations && (hi - lo) > 1e-6 * (1.0 + std::abs(lo) + std::abs(hi))) {
        ++iter;
        const double mid = 0.5 * (lo + hi);
        const FocResidual r_mid = eval(mid);
        if (converged(r_mid)) return mid;
        if (std::signbit(r_mid.residual) == std::signbit(r_lo.residual)) {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
            r_hi = r_mid;
        }
    }
    // Secant refinement inside the bracket; a bisection step follows any
    // secant step that failed to halve the bracket.
    auto update = [&](double u, const FocResidual& r) {
        if (std::signbit(r.residual) == std::signbit(r_lo.residual)) {
            lo = u;
            r_lo = r;
        } else {
            hi = u;
            r_hi = r;
        }
    };
    while (iter < kMaxIterations) {
        ++iter;
        const double width = hi - lo;
        if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(lo), std::abs(hi))
            || width <= std::numeric_limits<double>::min()) {
            return std::abs(r_lo.residual) < std::abs(r_hi.residual) ? lo : hi;
        }
        double next = lo - r_lo.residual * width / (r_hi.residual - r_lo.residual);
        if (!(next > lo && next < hi)) {
            next = 0.5 * (lo + hi);
        }
        const FocResidual r_next = eval(next);
        if (converged(r_next)) return next;
        update(next, r_next);
        if (hi - lo > 0.5 * width) {
            const double mid = 0.5 * (lo + hi);
            const FocResidual r_mid = eval(mid);
            if (converged(r_mid)) return mid;
            update(mid, r_mid);
        }
    }
    throw NumericalError("max iterations");
}

//---------------------------------------------------------------------------//
// Merton-Garman
//---------------------------------------------------------------------------//

/// Constant coefficients of the price/variance dynamics
/// dK = mu1 K ds + sigma1 K dB1,  dV = mu2 V ds + sigma2 V dB2.
struct MgParams
{
    double mu1 = 0.0;
    double mu2 = 0.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
    double rho = 0.0;
    std::function<double(double s, double k, double v, double u)> profit;
};

/// Bivariate integrating factor g(s, K, V) with the partials used by mgh_f.
struct BivariateG
{
    std::function<double(double, double, double)> value;
    std::function<double(double, double, double)> d_s;
    std::function<double(double, double, double)> d_k;
    std::function<double(double, double, double)> d_v;
    std::function<double(double, double, double)> d_kk;
    std::function<double(double, double, double)> d_kv;
    std::function<double(double, double, double)> d_vv;

    static BivariateG zero()
    {
        auto z = [](double, double, double) { return 0.0; };
        return {z, z, z, z, z, z, z};
    }
};

/// f = pi + g + g_s + K mu1 g_K + V mu2 g_V + 1/2 K^2 sigma1^2 g_KK
///       + K rho sigma1^3 g_KV + 1/2 V^2 sigma2^2 g_VV
inline double mgh_f(double s, double k, double v, double u, const MgParams& p, const BivariateG& g)
{
    if (!(k > 0.0) || !(v > 0.0)) {
        throw DomainError("Merton-Garman f needs K > 0 and V > 0");
    }
    const double profit = p.profit ? p.profit(s, k, v, u) : 0.0;
    const double f = profit + g.value(s, k, v) + g.d_s(s, k, v) + k * p.mu1 * g.d_k(s, k, v)
        + v * p.mu2 * g.d_v(s, k, v) + 0.5 * k * k * p.sigma1 * p.sigma1 * g.d_kk(s, k, v)
        + k * p.rho * p.sigma1 * p.sigma1 * p.sigma1 * g.d_kv(s, k, v)
        + 0.5 * v * v * p.sigma2 * p.sigma2 * g.d_vv(s, k, v);
    if (!std::isfinite(f)) {
        throw DomainError("Merton-Garman f is not finite");
    }
    return f;
}

/// Psi_s = exp(-s f) I for an autonomous f.
inline double mgh_transition(double s, double f, double initial)
{
    return std::exp(-s * f) * initial;
}

/// Coefficients of the Merton-Garman Hamiltonian in (a, b) = (ln K, ln V).
struct MghParams
{
    double r = 0.0;
    double mu2 = 0.0;
    double beta = 0.0;
    double sigma2 = 0.0;
    double alpha = 1.0;
    double gamma = 0.0;
};

/// Values on a uniform (a, b) grid, a-major: values[i * nb + j] at
/// (a0 + i da, b0 + j db).
struct GridFunction2D
{
    double a0 = 0.0;
    double da = 1.0;
    std::size_t na = 0;
    double b0 = 0.0;
    double db = 1.0;
    std::size_t nb = 0;
    std::vector<double> values;

    double a(std::size_t i) const { return a0 + static_cast<double>(i) * da; }
    double b(std::size_t j) const { return b0 + static_cast<double>(j) * db; }
    double& at(std::size_t i, std::size_t j) { return values[i * nb + j]; }
    double at(std::size_t i, std::size_t j) const { return values[i * nb + j]; }

    template <class F>
    static GridFunction2D sample(double a0, double a1, std::size_t na, double b0, double b1,
                                 std::size_t nb, F&& fn)
    {
        if (na < 2 || nb < 2) {
            throw InvalidArgument("grid needs at least two nodes per axis");
        }
        GridFunction2D g{a0, (a1 - a0) / static_cast<double>(na - 1), na,
                         b0, (b1 - b0) / static_cast<double>(nb - 1), nb, {}};
        g.values.resize(na * nb);
        for (std::size_t i = 0; i < na; ++i) {
            for (std::size_t j = 0; j < nb; ++j) {
                g.at(i, j) = fn(g.a(i), g.b(j));
            }
        }
        return g;
    }
};

/// Analytic coefficients of H_MG at log-variance b.
struct MghCoefficients
{
    double identity;   // r
    double d_a;        // -(r - e^b / 2)
    double d_b;        // -(mu2 - beta e^{-b} - sigma2^2/2 e^{2b(alpha-1)})
    double d_aa;       // -e^b / 2
    double d_ab;       // -gamma sigma2 e^{b(alpha - 1/2)}
    double d_bb;       // -sigma2^2 e^{2b(alpha-1)}
};

inline MghCoefficients mgh_coefficients(double b, const MghParams& p)
{
    const double eb = std::exp(b);
    const double e2 = std::exp(2.0 * b * (p.alpha - 1.0));
    return {p.r,
            -(p.r - 0.5 * eb),
            -(p.mu2 - p.beta * std::exp(-b) - 0.5 * p.sigma2 * p.sigma2 * e2),
            -0.5 * eb,
            -p.gamma * p.sigma2 * std::exp(b * (p.alpha - 0.5)),
            -p.sigma2 * p.sigma2 * e2};
}

/// Central-difference application of H_MG on interior nodes; boundary
/// nodes are copied through unchanged.
inline GridFunction2D mgh_operator_apply(const GridFunction2D& c, const MghParams& p)
{
    if (c.na < 3 || c.nb < 3) {
        throw InvalidArgument("Merton-Garman operator needs at least a 3x3 grid");
    }
    if (c.values.size() != c.na * c.nb) {
        throw InvalidArgument("grid values do not match grid shape");
    }
    GridFunction2D out = c;
    const double inv_2da = 1.0 / (2.0 * c.da);
    const double inv_2db = 1.0 / (2.0 * c.db);
    const double inv_da2 = 1.0 / (c.da * c.da);
    const double inv_db2 = 1.0 / (c.db * c.db);
    const double inv_4dadb = 1.0 / (4.0 * c.da * c.db);
    for (std::size_t j = 1; j + 1 < c.nb; ++j) {
        const MghCoefficients k = mgh_coefficients(c.b(j), p);
        for (std::size_t i = 1; i + 1 < c.na; ++i) {
            const double center = c.at(i, j);
            const double ca = (c.at(i + 1, j) - c.at(i - 1, j)) * inv_2da;
            const double cb = (c.at(i, j + 1) - c.at(i, j - 1)) * inv_2db;
            const double caa = (c.at(i + 1, j) - 2.0 * center + c.at(i - 1, j)) * inv_da2;
            const double cbb = (c.at(i, j + 1) - 2.0 * center + c.at(i, j - 1)) * inv_db2;
            const double cab = (c.at(i + 1, j + 1) - c.at(i + 1, j - 1) - c.at(i - 1, j + 1)
                                + c.at(i - 1, j - 1)) * inv_4dadb;
            out.at(i, j) = k.identity * center + k.d_a * ca + k.d_b * cb + k.d_aa * caa
                + k.d_ab * cab + k.d_bb * cbb;
        }
    }
    return out;
}

}  // namespace pathctl
