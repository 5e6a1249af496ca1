#pragma once

// Closed-form feedback rules for the worked examples: the path-integral
// ("quantum") rules obtained from the first-order condition, and the
// Pontryagin/HJB benchmark rules with the ODEs their value functions need.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "pathctl/errors.hpp"
#include "pathctl/sde_core.hpp"

namespace pathctl {

//---------------------------------------------------------------------------//
// Walrasian firm, linear market dynamics dX = (aX - u) ds + sqrt(sigma u) dB
//---------------------------------------------------------------------------//

struct WalrasianQuantumParams
{
    double p = 1.0;
    double c = 1.0;
    double zeta = 0.2;
    double a = 0.3;
    double lambda_star = 0.0;

    void validate() const
    {
        if (!(p > 0.0)) throw InvalidArgument("p must be positive");
        if (!(c > 0.0)) throw InvalidArgument("c must be positive");
        if (!(zeta > 0.0 && zeta <= 1.0)) throw InvalidArgument("zeta must lie in (0, 1]");
        if (!(a > 0.0)) throw InvalidArgument("a must be positive");
        if (!(lambda_star >= 0.0)) throw InvalidArgument("lambda_star must be nonnegative");
    }
};

enum class Branch { plus, minus };

inline const char* to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

/// Discriminant of the quadratic behind the Walrasian rule; negative means
/// no real strategy at (s, X).
inline double walrasian_discriminant(double s, double x, const WalrasianQuantumParams& prm)
{
    const double e = std::exp(-prm.zeta * s);
    const double ea = std::exp(-prm.a * s);
    const double big_a = prm.c * x * e + prm.lambda_star * ea;
    if (big_a == 0.0) {
        throw DomainError("Walrasian rule: A = c X e^{-zeta s} + lambda* e^{-a s} vanished");
    }
    const double big_b = prm.lambda_star * ea / big_a;
    const double d = prm.p - x / big_a;
    return e * e * d * d - e * (2.0 * prm.p * x * e / big_a + big_b);
}

/// phi = -1/(c e^{-zeta s}) [ e^{-zeta s}(p - X/A) +- sqrt(disc) ];
/// std::nullopt when the discriminant is negative.
inline std::optional<double> walrasian_quantum(double s, double x, const WalrasianQuantumParams& prm,
                                               Branch branch = Branch::minus)
{
    if (!(x > 0.0)) {
        throw InvalidArgument("Walrasian rule needs X > 0");
    }
    const double e = std::exp(-prm.zeta * s);
    const double big_a = prm.c * x * e + prm.lambda_star * std::exp(-prm.a * s);
    const double disc = walrasian_discriminant(s, x, prm);
    if (disc < 0.0) {
        return std::nullopt;
    }
    const double root = std::sqrt(disc);
    const double lead = e * (prm.p - x / big_a);
    const double sign = branch == Branch::plus ? 1.0 : -1.0;
    return -(lead + sign * root) / (prm.c * e);
}

//---------------------------------------------------------------------------//
// Walrasian consumer-goods firm: cubic rule vs. Pontryagin 2bX/3
//---------------------------------------------------------------------------//

/// Parameters of the cubic example with revenue R(X) = p X^2.
struct Ex3Params
{
    double b = 0.4;
    double c = 0.8;
    double zeta = 0.2;
    double lambda_star = 0.6;
    double p = 1.0;

    void validate() const
    {
        if (!(b > 0.0)) throw InvalidArgument("b must be positive");
        if (!(c > 0.0)) throw InvalidArgument("c must be positive");
        if (!(zeta > 0.0 && zeta <= 1.0)) throw InvalidArgument("zeta must lie in (0, 1]");
        if (!(p > 0.0)) throw InvalidArgument("p must be positive");
    }
};

/// B0 u^3 + B1 u^2 + B2 u + B3 = 0.
struct CubicCoefficients
{
    double b0 = 0.0;
    double b1 = 0.0;
    double b2 = 0.0;
    double b3 = 0.0;

    double operator()(double u) const { return ((b0 * u + b1) * u + b2) * u + b3; }
    double max_abs() const
    {
        return std::max({std::abs(b0), std::abs(b1), std::abs(b2), std::abs(b3)});
    }
};

inline CubicCoefficients ex3_cubic_coeffs(double s, double x, const Ex3Params& prm)
{
    if (!(x > 0.0)) {
        throw InvalidArgument("cubic rule needs X > 0");
    }
    const double e = std::exp(-prm.zeta * s);
    const double r1 = 2.0 * prm.p * x;  // R'(X)
    const double r2 = 2.0 * prm.p;      // R''(X)
    const double ls = prm.lambda_star;
    CubicCoefficients out;
    out.b0 = 4.0 * prm.c * prm.c * e;
    out.b1 = 4.0 * (prm.c * x) * (prm.c * x) * r2 * e * e;
    out.b2 = 4.0 * prm.c
        * (ls * x * std::exp(-(prm.b + prm.zeta) * s) - r1 * e - ls * std::exp(-prm.b * s));
    out.b3 = ls * ls * r2 * std::exp(-2.0 * prm.b * s);
    return out;
}

/// Cardano's intermediates D1, D2, D3 and the discriminant
/// D2^2 + (D3 - D1^2)^3.
struct CardanoTerms
{
    double d1;
    double d2;
    double d3;
    double discriminant;
};

inline CardanoTerms cardano_terms(const CubicCoefficients& k)
{
    if (k.b0 == 0.0) {
        throw InvalidArgument("not cubic");
    }
    const double d1 = -k.b1 / (3.0 * k.b0);
    const double d2 = d1 * d1 * d1 + (k.b1 * k.b2 - 3.0 * k.b0 * k.b3) / (6.0 * k.b0 * k.b0);
    const double d3 = k.b2 / (3.0 * k.b0);
    const double q = d3 - d1 * d1;
    return {d1, d2, d3, d2 * d2 + q * q * q};
}

namespace detail {

inline double polish_cubic_root(const CubicCoefficients& k, double r)
{
    for (int it = 0; it < 3; ++it) {
        const double f = k(r);
        const double df = (3.0 * k.b0 * r + 2.0 * k.b1) * r + k.b2;
        if (f == 0.0 || df == 0.0 || !std::isfinite(df)) {
            break;
        }
        const double next = r - f / df;
        if (!std::isfinite(next) || std::abs(k(next)) >= std::abs(f)) {
            break;
        }
        r = next;
    }
    return r;
}

}  // namespace detail

/// Real roots of the cubic, ascending. For a nonnegative discriminant the
/// single real root D1 + cbrt(D2 + sqrt(disc)) + cbrt(D2 - sqrt(disc)) is
/// returned (the second cube root evaluated as -q / first to avoid
/// cancellation); otherwise all three roots by the trigonometric method.
/// Each root gets up to three guarded Newton steps on the cubic itself.
inline std::vector<double> cardano_real_roots(const CubicCoefficients& k)
{
    const CardanoTerms t = cardano_terms(k);
    const double q = t.d3 - t.d1 * t.d1;
    std::vector<double> roots;
    if (t.discriminant >= 0.0) {
        const double sq = std::sqrt(t.discriminant);
        const double big = std::cbrt(t.d2 + std::copysign(sq, t.d2));
        const double small = big != 0.0 ? -q / big : 0.0;
        roots.push_back(detail::polish_cubic_root(k, t.d1 + big + small));
    } else {
        // q < 0 here.
        const double rad = std::sqrt(-q);
        const double cos_arg = std::clamp(t.d2 / (rad * rad * rad), -1.0, 1.0);
        const double theta = std::acos(cos_arg);
        for (int j = 0; j < 3; ++j) {
            const double r = 2.0 * rad * std::cos((theta + 2.0 * std::numbers::pi * j) / 3.0) + t.d1;
            roots.push_back(detail::polish_cubic_root(k, r));
        }
        std::sort(roots.begin(), roots.end());
    }
    return roots;
}

/// Smallest nonnegative root; when none is nonnegative, the root of
/// smallest magnitude.
inline double select_cubic_root(const std::vector<double>& roots)
{
    if (roots.empty()) {
        throw InvalidArgument("no roots to select from");
    }
    std::optional<double> best_nonneg;
    double best_abs = roots.front();
    for (double r : roots) {
        if (r >= 0.0 && (!best_nonneg || r < *best_nonneg)) best_nonneg = r;
        if (std::abs(r) < std::abs(best_abs)) best_abs = r;
    }
    return best_nonneg ? *best_nonneg : best_abs;
}

/// Pontryagin rule 2bX/3 (the nonzero branch).
inline double ex3_pontryagin(double /*s*/, double x, double b) { return 2.0 * b * x / 3.0; }

//---------------------------------------------------------------------------//
// Cooperative Pareto firms
//---------------------------------------------------------------------------//

struct ParetoParams
{
    std::size_t k = 2;
    Vec alpha;
    double p = 1.0;
    double c = 0.8;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double zeta = 0.2;
    double lambda_star = 0.0;
    Mat a_matrix;
    double sigma0 = 0.0;

    void validate() const
    {
        if (k < 1) throw InvalidArgument("k must be at least 1");
        if (static_cast<std::size_t>(alpha.size()) != k) throw InvalidArgument("alpha must have k entries");
        for (Eigen::Index i = 0; i < alpha.size(); ++i) {
            if (!(alpha[i] >= 0.0 && alpha[i] <= 1.0)) throw InvalidArgument("alpha entries must lie in [0, 1]");
        }
        if (std::abs(alpha.sum() - 1.0) > 1e-12) {
            throw InvalidArgument("alpha sums to " + std::to_string(alpha.sum()) + ", expected 1");
        }
        if (static_cast<std::size_t>(a_matrix.rows()) != k || static_cast<std::size_t>(a_matrix.cols()) != k) {
            throw InvalidArgument("interaction matrix must be k x k");
        }
        if ((a_matrix - a_matrix.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
            throw InvalidArgument("interaction matrix must be symmetric");
        }
    }

    /// X_rho + omega1 * sum_{other} X.
    double coupled_output(const Vec& x, std::size_t rho) const
    {
        return x[static_cast<Eigen::Index>(rho)] + omega1 * (x.sum() - x[static_cast<Eigen::Index>(rho)]);
    }
};

/// exp{ 1/2 tr(sigma' sigma) s - sigma B(s) }, with sigma B(s) given as a
/// realized scalar.
inline double integrating_factor(double s, double trace_sigma_sq, double sigma_b)
{
    return std::exp(0.5 * trace_sigma_sq * s - sigma_b);
}

/// Quantum Pareto rule for firm rho:
/// [e^{-zeta s} sum_rho p alpha_rho (X_rho + omega1 sum_other X) - lambda* E(s)]
///   / (2 c alpha_rho X_rho e^{-zeta s}).
/// The one-factor diffusion sigma0 X gives tr(sigma' sigma) = k sigma0^2.
inline double pareto_quantum(double s, const Vec& x, std::size_t rho, const ParetoParams& prm,
                             double sigma_b)
{
    if (rho >= prm.k || static_cast<std::size_t>(x.size()) != prm.k) {
        throw InvalidArgument("firm index or state dimension mismatch");
    }
    const double e = std::exp(-prm.zeta * s);
    const auto r = static_cast<Eigen::Index>(rho);
    const double denom = 2.0 * prm.c * prm.alpha[r] * x[r] * e;
    if (denom == 0.0) {
        throw DomainError("Pareto quantum rule: c alpha_rho X_rho e^{-zeta s} = 0");
    }
    double revenue = 0.0;
    for (std::size_t j = 0; j < prm.k; ++j) {
        revenue += prm.p * prm.alpha[static_cast<Eigen::Index>(j)] * prm.coupled_output(x, j);
    }
    const double trace = static_cast<double>(prm.k) * prm.sigma0 * prm.sigma0;
    return (e * revenue - prm.lambda_star * integrating_factor(s, trace, sigma_b)) / denom;
}

/// Pontryagin Pareto rule for firm rho, truncated below at 0 and, when
/// given, above at u_max.
inline double pareto_pontryagin(double /*s*/, const Vec& x, std::size_t rho, const ParetoParams& prm,
                                std::optional<double> u_max = std::nullopt)
{
    if (rho >= prm.k || static_cast<std::size_t>(x.size()) != prm.k) {
        throw InvalidArgument("firm index or state dimension mismatch");
    }
    const auto r = static_cast<Eigen::Index>(rho);
    const double denom = 2.0 * prm.c * x[r];
    if (denom == 0.0) {
        throw DomainError("Pareto Pontryagin rule: c X_rho = 0");
    }
    const double quad = x.dot(prm.a_matrix * x);
    double u = ((prm.p * prm.alpha[r] - 1.0) * prm.coupled_output(x, rho) + 2.0 * prm.c * x[r] * quad) / denom;
    u = std::max(0.0, u);
    if (u_max) {
        u = std::min(*u_max, u);
    }
    return u;
}

//---------------------------------------------------------------------------//
// Two-player resource extraction
//---------------------------------------------------------------------------//

struct ResourceParams
{
    double a = 1.0;
    double b = 0.1;
    double c1 = 1.0;
    double c2 = 1.0;
    double k1 = 1.0;
    double k2 = 1.0;
    double alpha10 = 1.0;
    double zeta = 0.2;
    Vec sigma_row = Vec::Zero(1);
    double lambda_star = 0.0;

    double trace_sigma_sq() const { return sigma_row.squaredNorm(); }

    void validate() const
    {
        for (double v : {a, b, c1, c2, k1, k2}) {
            if (!(v > 0.0)) throw InvalidArgument("resource parameters a, b, c1, c2, k1, k2 must be positive");
        }
        if (!(alpha10 >= 0.0)) throw InvalidArgument("alpha10 must be nonnegative");
    }
};

/// Player rule [k e^{-zeta s} / (2 [lambda* E(s) + e^{-zeta s} c X^{1/2}])]^{2/3},
/// with k = k1, c = c1 for player 1 and k = alpha10 k2, c = c2 for player 2.
inline double resource_quantum(double s, double x, int player, const ResourceParams& prm, double sigma_b)
{
    if (player != 1 && player != 2) {
        throw InvalidArgument("player must be 1 or 2");
    }
    const double e = std::exp(-prm.zeta * s);
    const double weight = player == 1 ? prm.k1 : prm.alpha10 * prm.k2;
    const double cost = player == 1 ? prm.c1 : prm.c2;
    const double denom = 2.0
        * (prm.lambda_star * integrating_factor(s, prm.trace_sigma_sq(), sigma_b)
           + e * cost * std::sqrt(std::max(x, 0.0)));
    if (denom == 0.0) {
        throw DomainError("resource rule denominator vanished");
    }
    return std::cbrt(std::pow(weight * e / denom, 2.0));
}

//---------------------------------------------------------------------------//
// Renewable resource with k firms, feedback Nash
//---------------------------------------------------------------------------//

struct NashParams
{
    std::size_t k = 2;
    double a = 1.0;
    double b = 0.1;
    double c = 0.8;
    double zeta = 0.2;
    double sigma_sq = 0.0;  // sigma' sigma
    double lambda_star = 0.0;

    void validate() const
    {
        if (k < 1) throw InvalidArgument("k must be at least 1");
        if (!(c > 0.0)) throw InvalidArgument("c must be positive");
        if (!(sigma_sq >= 0.0)) throw InvalidArgument("sigma' sigma must be nonnegative");
    }
};

/// A(s), B(s) on a time grid.
struct OdeSolution
{
    TimeGrid grid = TimeGrid::from_steps(1.0, 1);
    std::vector<double> a_values;
    std::vector<double> b_values;

    /// Linear interpolation of A at time s.
    double a_at(double s) const { return interpolate(a_values, s); }
    double b_at(double s) const { return interpolate(b_values, s); }

  private:
    double interpolate(const std::vector<double>& v, double s) const
    {
        if (s < -1e-12 || s > grid.t_end() * (1.0 + 1e-12)) {
            throw InvalidArgument("s outside the ODE solution grid");
        }
        const double pos = std::clamp(s / grid.dt(), 0.0, static_cast<double>(grid.n_steps()));
        const auto i = std::min(static_cast<std::size_t>(pos), grid.n_steps() - 1);
        const double w = pos - static_cast<double>(i);
        return (1.0 - w) * v[i] + w * v[i + 1];
    }
};

namespace detail {

template <class Rhs>
OdeSolution integrate_rk4(const TimeGrid& grid, double a0, double b0, Rhs&& rhs)
{
    OdeSolution sol;
    sol.grid = grid;
    sol.a_values.reserve(grid.n_steps() + 1);
    sol.b_values.reserve(grid.n_steps() + 1);
    double a = a0;
    double b = b0;
    sol.a_values.push_back(a);
    sol.b_values.push_back(b);
    const double h = grid.dt();
    for (std::size_t n = 0; n < grid.n_steps(); ++n) {
        const double s = grid.time(n);
        const auto k1 = rhs(s, a, b);
        const auto k2 = rhs(s + 0.5 * h, a + 0.5 * h * k1[0], b + 0.5 * h * k1[1]);
        const auto k3 = rhs(s + 0.5 * h, a + 0.5 * h * k2[0], b + 0.5 * h * k2[1]);
        const auto k4 = rhs(s + h, a + h * k3[0], b + h * k3[1]);
        a += h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
        b += h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
        if (!std::isfinite(a) || !std::isfinite(b)) {
            throw NumericalError("A/B ODE diverged at s = " + std::to_string(grid.time(n + 1)));
        }
        sol.a_values.push_back(a);
        sol.b_values.push_back(b);
    }
    return sol;
}

inline double checked_denominator(double value, double initial_sign, double s)
{
    if (std::abs(value) < 1e-12 || std::signbit(value) != std::signbit(initial_sign)) {
        throw NumericalError("ODE denominator passes through zero at s = " + std::to_string(s));
    }
    return value;
}

}  // namespace detail

/// Resource-extraction value-function ODEs (forward from s = 0):
///   A' = [zeta + sigma'sigma/8 + b/2] A - k1 / (4 [c1 + A/2])
///        - alpha10 k2 / (4 [c2 + A/(2 alpha10)])
///   B' = zeta B - a A / 2
/// The discount rate zeta plays the role of the interest rate.
inline OdeSolution solve_AB_odes(const ResourceParams& prm, const TimeGrid& grid, double a0 = 0.0,
                                 double b0 = 0.0)
{
    if (!(prm.alpha10 > 0.0)) {
        throw InvalidArgument("alpha10 must be positive for the A/B ODEs");
    }
    const double sign1 = prm.c1 + 0.5 * a0;
    const double sign2 = prm.c2 + a0 / (2.0 * prm.alpha10);
    const double growth = prm.zeta + prm.trace_sigma_sq() / 8.0 + 0.5 * prm.b;
    return detail::integrate_rk4(grid, a0, b0, [&](double s, double a, double b) {
        const double d1 = detail::checked_denominator(prm.c1 + 0.5 * a, sign1, s);
        const double d2 = detail::checked_denominator(prm.c2 + a / (2.0 * prm.alpha10), sign2, s);
        return std::array<double, 2>{growth * a - prm.k1 / (4.0 * d1) - prm.alpha10 * prm.k2 / (4.0 * d2),
                                     prm.zeta * b - 0.5 * prm.a * a};
    });
}

/// Feedback-Nash value-function ODEs (forward from s = 0):
///   A' = [zeta + sigma'sigma/8 - b/2] A - (2k-1)/(2k^2) [c + A/2]^{-1}
///        + c (2k-1)^2/(4k^3) [c + A/2]^{-2} + (2k-1)^2 A / (8k^2 [c + A/2]^2)
///   B' = zeta B - a A / 2
inline OdeSolution solve_AB_odes(const NashParams& prm, const TimeGrid& grid, double a0 = 0.0,
                                 double b0 = 0.0)
{
    const double k = static_cast<double>(prm.k);
    const double m = 2.0 * k - 1.0;
    const double sign = prm.c + 0.5 * a0;
    const double growth = prm.zeta + prm.sigma_sq / 8.0 - 0.5 * prm.b;
    return detail::integrate_rk4(grid, a0, b0, [&](double s, double a, double b) {
        const double d = detail::checked_denominator(prm.c + 0.5 * a, sign, s);
        const double da = growth * a - m / (2.0 * k * k) / d + prm.c * m * m / (4.0 * k * k * k) / (d * d)
            + m * m * a / (8.0 * k * k * d * d);
        return std::array<double, 2>{da, prm.zeta * b - 0.5 * prm.a * a};
    });
}

/// Quantum Nash rule
/// 2 e^{zeta s} S^{3/2} [ e^{-zeta s}(S^{-1/2} - c / X^{1/2}) - lambda* E(s) ],
/// S = sum of the other firms' strategies.
inline double nash_quantum(double s, double x, double u_others_sum, const NashParams& prm, double sigma_b)
{
    if (!(u_others_sum > 0.0)) {
        throw InvalidArgument("sum of other firms' strategies must be positive");
    }
    if (!(x > 0.0)) {
        throw InvalidArgument("Nash rule needs X > 0");
    }
    const double e = std::exp(-prm.zeta * s);
    const double bracket = e * (1.0 / std::sqrt(u_others_sum) - prm.c / std::sqrt(x))
        - prm.lambda_star * integrating_factor(s, prm.sigma_sq, sigma_b);
    return 2.0 / e * std::pow(u_others_sum, 1.5) * bracket;
}

struct FixedPointResult
{
    double u = 0.0;
    int iterations = 0;
};

/// Symmetric self-consistent quantum Nash strategy: damped iteration
/// u <- (1 - w) u + w phi(s, X, (k - 1) u), w = 0.5, tol 1e-10, 500 steps.
inline FixedPointResult nash_symmetric_fixed_point(double s, double x, const NashParams& prm, double sigma_b,
                                                   double u0 = 1.0, double damping = 0.5,
                                                   double tol = 1e-10, int max_iter = 500)
{
    if (prm.k < 2) {
        throw InvalidArgument("symmetric Nash fixed point needs k >= 2");
    }
    const double others = static_cast<double>(prm.k - 1);
    double u = u0;
    for (int it = 1; it <= max_iter; ++it) {
        if (!(u > 0.0)) {
            throw NumericalError("Nash fixed-point iteration left the region u > 0");
        }
        const double next = (1.0 - damping) * u + damping * nash_quantum(s, x, others * u, prm, sigma_b);
        if (std::abs(next - u) <= tol * std::max(1.0, std::abs(u))) {
            return {next, it};
        }
        u = next;
    }
    throw NumericalError("Nash fixed-point iteration did not converge");
}

/// Pontryagin feedback Nash rule with all k firms sharing the value
/// function V = e^{-zeta s}[A(s) X^{1/2} + B(s)], so that
/// grad V = e^{-zeta s} A(s) / (2 X^{1/2}).
inline double nash_pontryagin(double s, double x, const NashParams& prm, const OdeSolution& ode)
{
    if (!(x > 0.0)) {
        throw InvalidArgument("Nash rule needs X > 0");
    }
    const double k = static_cast<double>(prm.k);
    const double grad_v = std::exp(-prm.zeta * s) * ode.a_at(s) * 0.5 / std::sqrt(x);
    const double term = prm.c + std::exp(prm.zeta * s) * grad_v * std::sqrt(x);
    double sum = 0.0;
    for (std::size_t q = 0; q < prm.k; ++q) {
        sum += term;
    }
    if (sum == 0.0) {
        throw DomainError("Nash Pontryagin rule denominator vanished");
    }
    const double m = 2.0 * k - 1.0;
    return x * m * m / (2.0 * sum) * (sum - (k - 1.5) * term);
}

/// Pontryagin cooperative rules of the resource example, with
/// W = e^{-zeta s}[A(s) X^{1/2} + B(s)] from solve_AB_odes.
inline double resource_pontryagin(double s, double x, int player, const ResourceParams& prm,
                                  const OdeSolution& ode)
{
    if (!(x > 0.0)) {
        throw InvalidArgument("resource rule needs X > 0");
    }
    const double e = std::exp(-prm.zeta * s);
    const double grad_w = e * ode.a_at(s) * 0.5 / std::sqrt(x);
    const double coupling = e * std::sqrt(x) * grad_w;
    double denom = 0.0;
    double weight = 0.0;
    if (player == 1) {
        denom = prm.c1 + coupling;
        weight = prm.k1;
    } else if (player == 2) {
        denom = prm.c2 + coupling / prm.alpha10;
        weight = prm.k2;
    } else {
        throw InvalidArgument("player must be 1 or 2");
    }
    if (denom == 0.0) {
        throw DomainError("resource Pontryagin rule denominator vanished");
    }
    return weight * x / (4.0 * denom * denom);
}

}  // namespace pathctl
