#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <Eigen/Eigenvalues>

#include "pathctl/foc_solver.hpp"
#include "pathctl/models.hpp"
#include "pathctl/strategies.hpp"

using namespace pathctl;
using Big = boost::multiprecision::cpp_dec_float_50;

namespace {

// Real eigenvalues of the companion matrix, ascending.
std::vector<double> companion_roots(const CubicCoefficients& k)
{
    Eigen::Matrix3d comp = Eigen::Matrix3d::Zero();
    comp(0, 0) = -k.b1 / k.b0;
    comp(0, 1) = -k.b2 / k.b0;
    comp(0, 2) = -k.b3 / k.b0;
    comp(1, 0) = 1.0;
    comp(2, 1) = 1.0;
    const Eigen::Vector3cd ev = comp.eigenvalues();
    std::vector<double> out;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(ev[i].imag()) < 1e-7 * std::max(1.0, std::abs(ev[i]))) out.push_back(ev[i].real());
    }
    std::sort(out.begin(), out.end());
    return out;
}

ParetoParams table3()
{
    ParetoParams p;
    p.k = 3;
    p.alpha = Vec::Constant(3, 1.0 / 3.0);
    p.p = 1.0;
    p.c = 0.8;
    p.omega1 = 0.3;
    p.omega2 = 0.2;
    p.zeta = 0.2;
    p.lambda_star = 0.0;
    p.a_matrix = Mat{{0.15, 0.05, 0.02}, {0.05, 0.12, 0.04}, {0.02, 0.04, 0.10}};
    p.sigma0 = 0.25;
    return p;
}

}  // namespace

//---------------------------------------------------------------------------//
// Walrasian closed form
//---------------------------------------------------------------------------//

TEST(WalrasianQuantum, ReferenceValuesWithoutPenalty)
{
    const WalrasianQuantumParams q{1.0, 10.0, 0.2, 0.3, 0.0};
    // A = c X, B = 0: phi = -(1/c)[(p - X/A) +- sqrt((p - X/A)^2 - 2 p X / A)].
    const Big lead = Big(1) - Big(1) / Big(10);
    const Big root = sqrt(lead * lead - Big(2) / Big(10));
    const double minus = (-(lead - root) / Big(10)).convert_to<double>();
    const double plus = (-(lead + root) / Big(10)).convert_to<double>();
    EXPECT_NEAR(walrasian_quantum(0.0, 1.0, q, Branch::minus).value(), minus, 1e-16);
    EXPECT_NEAR(walrasian_quantum(0.0, 1.0, q, Branch::plus).value(), plus, 1e-16);
    EXPECT_NEAR(minus, -0.011898, 1e-6);
    EXPECT_NEAR(plus, -0.168102, 1e-6);
    EXPECT_EQ(walrasian_quantum(0.0, 1.0, q).value(), walrasian_quantum(0.0, 1.0, q, Branch::minus).value());
}

TEST(WalrasianQuantum, GeneralPointMatchesHighPrecision)
{
    const WalrasianQuantumParams q{1.0, 10.0, 0.4, 0.25, 0.02};
    const double s = 0.7, x = 1.1;
    const Big bs(s), bx(x), p(1.0), c(10.0), z(0.4), a(0.25), l(0.02);
    const Big e = exp(-z * bs);
    const Big A = c * bx * e + l * exp(-a * bs);
    const Big B = l * exp(-a * bs) / A;
    const Big lead = e * (p - bx / A);
    const Big disc = e * e * (p - bx / A) * (p - bx / A) - e * (Big(2) * p * bx * e / A + B);
    ASSERT_GT(disc, 0);
    const double minus = (-(lead - sqrt(disc)) / (c * e)).convert_to<double>();
    EXPECT_NEAR(walrasian_quantum(s, x, q, Branch::minus).value(), minus, 1e-14);
}

TEST(WalrasianQuantum, NegativeDiscriminantIsNoRealRoot)
{
    const WalrasianQuantumParams q{1.0, 0.8, 0.2, 0.3, 0.0};
    EXPECT_LT(walrasian_discriminant(0.0, 1.0, q), 0.0);
    EXPECT_FALSE(walrasian_quantum(0.0, 1.0, q, Branch::minus).has_value());
    EXPECT_FALSE(walrasian_quantum(0.0, 1.0, q, Branch::plus).has_value());
}

TEST(WalrasianQuantum, TableOneParametersHaveNoRealRootOnTheUnitDomain)
{
    const WalrasianQuantumParams q{1.0, 0.8, 0.2, 0.3, 0.6};
    for (int i = 0; i <= 20; ++i) {
        for (int j = 0; j <= 30; ++j) {
            const double s = i / 20.0, x = 0.5 + 1.5 * j / 30.0;
            EXPECT_FALSE(walrasian_quantum(s, x, q).has_value()) << s << " " << x;
        }
    }
}

TEST(WalrasianQuantum, RequiresPositiveState)
{
    const WalrasianQuantumParams q{};
    EXPECT_THROW(walrasian_quantum(0.0, 0.0, q), InvalidArgument);
}

// With lambda* = 0 the closed form yields u = (e(p - 1/(c e)) +- sqrt(.)) ...
// while the stationary points of the printed f are p/c and (p - 2e^{zeta s})/c
// (see test_foc_solver). The closed form is therefore not a root of the
// first-order condition; this pins that down.
TEST(WalrasianQuantum, DiffersFromFirstOrderConditionRoots)
{
    models::WalrasianModel m;
    m.rule = {1.0, 10.0, 0.2, 0.3, 0.0};
    const auto spec = models::walrasian_problem(m);
    const double u = walrasian_quantum(0.0, 1.0, m.rule, Branch::minus).value();
    const auto r = foc_residual_terms(compute_f(spec, 0.0, 1.0, u));
    EXPECT_GT(std::abs(r.residual), 0.1 * (1.0 + r.scale));
}

//---------------------------------------------------------------------------//
// Cubic rule
//---------------------------------------------------------------------------//

TEST(Ex3Cubic, NoPenaltyAtOrigin)
{
    Ex3Params p;
    p.lambda_star = 0.0;
    const auto k = ex3_cubic_coeffs(0.0, 1.3, p);
    EXPECT_DOUBLE_EQ(k.b2, -4.0 * p.c * 2.0 * p.p * 1.3);
    EXPECT_DOUBLE_EQ(k.b3, 0.0);
}

TEST(Ex3Cubic, TableTwoCoefficients)
{
    const Ex3Params p;  // b = 0.4, c = 0.8, zeta = 0.2, lambda* = 0.6, p = 1
    for (double s : {0.0, 0.35, 1.0}) {
        for (double x : {1.0, 0.6, 1.7}) {
            const Big bs(s), bx(x), b(0.4), c(0.8), z(0.2), l(0.6), pp(1.0);
            const Big r1 = 2 * pp * bx, r2 = 2 * pp;
            const Big b0 = 4 * c * c * exp(-z * bs);
            const Big b1 = 4 * (c * bx) * (c * bx) * r2 * exp(-2 * z * bs);
            const Big b2 = 4 * c * (l * bx * exp(-(b + z) * bs) - r1 * exp(-z * bs) - l * exp(-b * bs));
            const Big b3 = l * l * r2 * exp(-2 * b * bs);
            const auto k = ex3_cubic_coeffs(s, x, p);
            EXPECT_NEAR(k.b0, b0.convert_to<double>(), 1e-14);
            EXPECT_NEAR(k.b1, b1.convert_to<double>(), 1e-14);
            EXPECT_NEAR(k.b2, b2.convert_to<double>(), 1e-14);
            EXPECT_NEAR(k.b3, b3.convert_to<double>(), 1e-14);
            EXPECT_GT(k.b0, 0.0);
        }
    }
    const auto k = ex3_cubic_coeffs(0.0, 1.0, p);
    EXPECT_NEAR(k.b0, 2.56, 1e-14);
    EXPECT_NEAR(k.b1, 5.12, 1e-14);
    EXPECT_NEAR(k.b2, -6.4, 1e-14);
    EXPECT_NEAR(k.b3, 0.72, 1e-14);
}

TEST(Cardano, PerfectCube)
{
    const auto r = cardano_real_roots({1.0, 0.0, 0.0, -8.0});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], 2.0, 1e-15);
}

TEST(Cardano, ThreeRealRoots)
{
    const CubicCoefficients k{1.0, -6.0, 11.0, -6.0};
    EXPECT_LT(cardano_terms(k).discriminant, 0.0);
    const auto r = cardano_real_roots(k);
    const auto oracle = companion_roots(k);
    ASSERT_EQ(r.size(), 3u);
    ASSERT_EQ(oracle.size(), 3u);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(r[i], i + 1.0, 1e-12);
        EXPECT_NEAR(r[i], oracle[i], 1e-9);
    }
}

TEST(Cardano, NotCubic)
{
    try {
        cardano_real_roots({0.0, 1.0, 2.0, 3.0});
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_STREQ(e.what(), "not cubic");
    }
}

TEST(Cardano, NegativeCubeRootArgument)
{
    // u^3 + 8 = 0 has the single real root -2.
    const auto r = cardano_real_roots({1.0, 0.0, 0.0, 8.0});
    ASSERT_EQ(r.size(), 1u);
    EXPECT_NEAR(r[0], -2.0, 1e-15);
}

TEST(Cardano, RandomCoefficientsSatisfyPolynomial)
{
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int i = 0; i < 2000; ++i) {
        CubicCoefficients k{d(gen), d(gen), d(gen), d(gen)};
        if (std::abs(k.b0) < 1e-3) continue;
        const auto roots = cardano_real_roots(k);
        for (double r : roots) {
            const double scale = k.max_abs() * std::max(1.0, std::pow(std::abs(r), 3));
            EXPECT_LE(std::abs(k(r)), 1e-9 * scale) << i;
        }
        const auto oracle = companion_roots(k);
        if (cardano_terms(k).discriminant >= 0.0 && oracle.size() == 1) {
            EXPECT_NEAR(roots[0], oracle[0], 1e-9 * std::max(1.0, std::abs(oracle[0])));
        }
    }
}

TEST(Cardano, RootSelection)
{
    EXPECT_EQ(select_cubic_root({-2.0, 0.5, 3.0}), 0.5);
    EXPECT_EQ(select_cubic_root({-2.0, 0.0, 3.0}), 0.0);
    EXPECT_EQ(select_cubic_root({-2.0, -0.25, -3.0}), -0.25);
    EXPECT_EQ(select_cubic_root({4.0}), 4.0);
    EXPECT_THROW(select_cubic_root({}), InvalidArgument);
}

TEST(Ex3Pontryagin, LinearRule)
{
    EXPECT_NEAR(ex3_pontryagin(0.0, 1.0, 0.4), 0.26666666666666666, 1e-16);
    EXPECT_EQ(ex3_pontryagin(0.0, 0.0, 0.4), 0.0);
    // V_x = (4/3) b c X^2 e^{-zeta s} solves b X V_x - 3/(4cX) V_x^2 e^{zeta s} = 0.
    const double b = 0.4, c = 0.8, z = 0.2;
    for (double s : {0.0, 0.5}) {
        for (double x : {0.5, 1.5}) {
            const double vx = 4.0 / 3.0 * b * c * x * x * std::exp(-z * s);
            EXPECT_NEAR(b * x * vx - 3.0 / (4.0 * c * x) * vx * vx * std::exp(z * s), 0.0, 1e-14);
        }
    }
}

//---------------------------------------------------------------------------//
// Pareto
//---------------------------------------------------------------------------//

TEST(ParetoParams, Validation)
{
    auto p = table3();
    EXPECT_NO_THROW(p.validate());
    p.alpha[0] = 0.5;
    try {
        p.validate();
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("1.16"), std::string::npos);
    }
    p = table3();
    p.a_matrix(0, 1) = 0.06;
    EXPECT_THROW(p.validate(), InvalidArgument);
}

TEST(ParetoQuantum, SingleFirmIsHalfPriceOverCost)
{
    ParetoParams p;
    p.k = 1;
    p.alpha = Vec::Ones(1);
    p.a_matrix = Mat::Zero(1, 1);
    p.p = 1.3;
    p.c = 0.7;
    p.omega1 = 5.0;
    for (double x : {0.3, 1.0, 4.0}) {
        EXPECT_NEAR(pareto_quantum(0.4, Vec::Constant(1, x), 0, p, 0.0), 1.3 / 1.4, 1e-15);
    }
}

TEST(ParetoQuantum, TableThreeAtUnitState)
{
    auto p = table3();
    p.lambda_star = 0.6;
    const Vec x = Vec::Ones(3);
    for (std::size_t r = 0; r < 3; ++r) {
        // numerator: e^0 sum_rho p/3 (1 + 0.3 * 2) - 0.6 E(0); E(0) = exp(0) = 1.
        const Big num = Big(3) * (Big(1) / 3) * (Big(1) + Big(0.3) * 2) - Big(0.6);
        const Big den = Big(2) * Big(0.8) * (Big(1) / 3);
        EXPECT_NEAR(pareto_quantum(0.0, x, r, p, 0.0), (num / den).convert_to<double>(), 1e-14);
    }
}

TEST(ParetoQuantum, ScaleInvariantWithoutPenalty)
{
    const auto p = table3();
    std::mt19937_64 gen(4);
    std::uniform_real_distribution<double> d(0.2, 3.0);
    for (int i = 0; i < 100; ++i) {
        const Vec x{{d(gen), d(gen), d(gen)}};
        const double kappa = d(gen);
        for (std::size_t r = 0; r < 3; ++r) {
            const double a = pareto_quantum(0.3, x, r, p, 0.1);
            const double b = pareto_quantum(0.3, kappa * x, r, p, 0.1);
            EXPECT_NEAR(a, b, 1e-12 * std::abs(a));
        }
    }
}

TEST(ParetoQuantum, ZeroDenominator)
{
    const auto p = table3();
    EXPECT_THROW(pareto_quantum(0.0, Vec{{0.0, 1.0, 1.0}}, 0, p, 0.0), DomainError);
}

TEST(ParetoPontryagin, QuadraticFormAndClamp)
{
    const auto p = table3();
    const Vec x = Vec::Ones(3);
    // X'AX sums the printed entries: 0.15+0.12+0.10 + 2(0.05+0.02+0.04).
    const double quad = 0.15 + 0.12 + 0.10 + 2.0 * (0.05 + 0.02 + 0.04);
    EXPECT_NEAR(x.dot(p.a_matrix * x), 0.59, 1e-15);
    EXPECT_NEAR(quad, 0.59, 1e-15);
    const double raw = ((1.0 / 3.0 - 1.0) * 1.6 + 2.0 * 0.8 * quad) / (2.0 * 0.8);
    EXPECT_NEAR(pareto_pontryagin(0.0, x, 1, p), std::max(0.0, raw), 1e-15);
    EXPECT_NEAR(pareto_pontryagin(0.0, x, 1, p, 0.1), std::min(0.1, std::max(0.0, raw)), 1e-15);
}

TEST(ParetoPontryagin, ZeroWhenPriceWeightIsOneAndNoInteraction)
{
    ParetoParams p;
    p.k = 2;
    p.alpha = Vec::Constant(2, 0.5);
    p.p = 2.0;
    p.a_matrix = Mat::Zero(2, 2);
    EXPECT_EQ(pareto_pontryagin(0.0, Vec{{1.0, 2.0}}, 0, p), 0.0);
}

TEST(ParetoPontryagin, NegativeValuesClampToZero)
{
    ParetoParams p;
    p.k = 2;
    p.alpha = Vec::Constant(2, 0.5);
    p.p = 1.0;
    p.a_matrix = Mat::Zero(2, 2);
    EXPECT_EQ(pareto_pontryagin(0.0, Vec{{1.0, 2.0}}, 0, p), 0.0);
}

// The k = 1 quantum Pareto rule makes d f / d u vanish where
// f = e^{-zeta s}(p X u - c X u^2) + lambda* E [...] - lambda* E u.
TEST(ParetoQuantum, StationaryForSingleFirm)
{
    ParetoParams p;
    p.k = 1;
    p.alpha = Vec::Ones(1);
    p.a_matrix = Mat::Zero(1, 1);
    p.lambda_star = 0.3;
    p.sigma0 = 0.25;
    const double s = 0.4, x = 1.7, sb = 0.2;
    const double e = std::exp(-p.zeta * s);
    const double big_e = std::exp(0.5 * p.sigma0 * p.sigma0 * s - sb);
    const double u = pareto_quantum(s, Vec::Constant(1, x), 0, p, sb);
    EXPECT_NEAR(e * (p.p * x - 2.0 * p.c * x * u) - p.lambda_star * big_e, 0.0, 1e-14);
}

//---------------------------------------------------------------------------//
// Resource extraction
//---------------------------------------------------------------------------//

TEST(ResourceQuantum, ReferenceValues)
{
    ResourceParams p;
    p.k1 = 2.0;
    p.c1 = 1.0;
    EXPECT_NEAR(resource_quantum(0.0, 1.0, 1, p, 0.0), 1.0, 1e-15);
    for (double x : {0.3, 2.0}) {
        EXPECT_NEAR(resource_quantum(0.0, x, 1, p, 0.0), std::pow(2.0 / (2.0 * std::sqrt(x)), 2.0 / 3.0), 1e-14);
    }
}

TEST(ResourceQuantum, GenericParameters)
{
    ResourceParams p;
    p.k1 = 1.4;
    p.k2 = 0.9;
    p.c1 = 0.6;
    p.c2 = 1.1;
    p.alpha10 = 0.7;
    p.zeta = 0.15;
    p.lambda_star = 0.2;
    p.sigma_row = Vec{{0.3, 0.1}};
    const double s = 0.6, x = 1.9, sb = -0.05;
    for (int player : {1, 2}) {
        const Big w = player == 1 ? Big(1.4) : Big(0.7) * Big(0.9);
        const Big c = player == 1 ? Big(0.6) : Big(1.1);
        const Big e = exp(-Big(0.15) * Big(s));
        const Big big_e = exp(Big(0.5) * (Big(0.3) * Big(0.3) + Big(0.1) * Big(0.1)) * Big(s) - Big(sb));
        const Big base = w * e / (2 * (Big(0.2) * big_e + e * c * sqrt(Big(x))));
        const double expect = exp(log(base) * 2 / 3).convert_to<double>();
        EXPECT_NEAR(resource_quantum(s, x, player, p, sb), expect, 1e-14);
    }
    EXPECT_THROW(resource_quantum(s, x, 3, p, sb), InvalidArgument);
}

//---------------------------------------------------------------------------//
// A/B ODEs
//---------------------------------------------------------------------------//

TEST(AbOdes, ExponentialBWhenAIsZero)
{
    ResourceParams p;
    p.k1 = 0.0;
    p.k2 = 0.0;
    p.zeta = 0.2;
    const auto sol = solve_AB_odes(p, TimeGrid::from_dt(1.0, 0.01), 0.0, 1.5);
    EXPECT_EQ(sol.a_values.back(), 0.0);
    EXPECT_NEAR(sol.b_values.back() / (1.5 * std::exp(0.2)), 1.0, 1e-6);
    EXPECT_EQ(sol.a_values.size(), 101u);
}

TEST(AbOdes, ConstantBWithoutDiscountOrGrowth)
{
    NashParams p;
    p.zeta = 0.0;
    p.a = 0.0;
    const auto sol = solve_AB_odes(p, TimeGrid::from_dt(1.0, 0.01), 0.0, 2.0);
    for (double b : sol.b_values) EXPECT_EQ(b, 2.0);
}

TEST(AbOdes, FourthOrderSelfConvergence)
{
    NashParams p;
    p.k = 3;
    p.a = 1.0;
    p.b = 0.4;
    p.c = 0.8;
    p.zeta = 0.2;
    p.sigma_sq = 0.09;
    auto end = [&](double dt) {
        const auto s = solve_AB_odes(p, TimeGrid::from_dt(1.0, dt), 0.5, 0.1);
        return std::pair{s.a_values.back(), s.b_values.back()};
    };
    const auto ref = end(0.001);
    const auto c1 = end(0.1), c2 = end(0.05), c3 = end(0.025);
    const double r1 = std::abs(c1.first - ref.first) / std::abs(c2.first - ref.first);
    const double r2 = std::abs(c2.first - ref.first) / std::abs(c3.first - ref.first);
    EXPECT_GE(r1, 10.0);
    EXPECT_LE(r1, 22.0);
    EXPECT_GE(r2, 10.0);
    EXPECT_LE(r2, 22.0);
    // dt/10 reference agreement.
    const auto fine = end(0.0025);
    const auto finer = end(0.00025);
    EXPECT_NEAR(fine.first, finer.first, 1e-8 * std::abs(finer.first));
    EXPECT_NEAR(fine.second, finer.second, 1e-8 * std::abs(finer.second));
}

TEST(AbOdes, DenominatorCrossingReportsTime)
{
    NashParams p;
    p.c = 0.05;
    p.k = 2;
    // A large negative start drives c + A/2 through zero.
    try {
        solve_AB_odes(p, TimeGrid::from_dt(1.0, 0.01), -0.09, 0.0);
        FAIL();
    } catch (const NumericalError& e) {
        EXPECT_NE(std::string(e.what()).find("s = "), std::string::npos);
    }
}

//---------------------------------------------------------------------------//
// Nash
//---------------------------------------------------------------------------//

TEST(NashQuantum, ReferenceValues)
{
    NashParams p;
    p.c = 1.0;
    EXPECT_NEAR(nash_quantum(0.0, 1.0, 1.0, p, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(nash_quantum(0.0, 1e16, 1.0, p, 0.0), 2.0, 1e-7);
    EXPECT_THROW(nash_quantum(0.0, 1.0, 0.0, p, 0.0), InvalidArgument);
}

TEST(NashQuantum, SymmetricFixedPoint)
{
    NashParams p;
    p.k = 3;
    p.c = 0.8;
    const auto fp = nash_symmetric_fixed_point(0.0, 1.0, p, 0.0);
    EXPECT_NEAR(fp.u, nash_quantum(0.0, 1.0, 2.0 * fp.u, p, 0.0), 1e-9);
    EXPECT_NEAR(fp.u, std::pow(3.0 / (2.0 * 0.8 * std::pow(2.0, 1.5)), 2.0), 1e-9);
}

// The quantum Nash rule makes
// e^{-zeta s}[S^{-1/2} - phi S^{-3/2}/2 - c / X^{1/2}] - lambda* E = 0
// with the others' sum held at S.
TEST(NashQuantum, SatisfiesStationarityInOwnControl)
{
    NashParams p;
    p.k = 4;
    p.c = 0.3;
    p.zeta = 0.2;
    p.lambda_star = 0.05;
    p.sigma_sq = 0.04;
    const double s = 0.5, x = 2.0, S = 0.7, sb = 0.1;
    const double phi = nash_quantum(s, x, S, p, sb);
    const double e = std::exp(-p.zeta * s);
    const double big_e = std::exp(0.5 * p.sigma_sq * s - sb);
    const double lhs = e * (1.0 / std::sqrt(S) - 0.5 * phi * std::pow(S, -1.5) - p.c / std::sqrt(x)) - p.lambda_star * big_e;
    EXPECT_NEAR(lhs, 0.0, 1e-14);
}

TEST(NashPontryagin, SingleFirmCollapse)
{
    NashParams p;
    p.k = 1;
    const auto ode = solve_AB_odes(p, TimeGrid::from_dt(1.0, 0.01), 0.3, 0.0);
    for (double x : {0.5, 1.0, 2.5}) {
        EXPECT_NEAR(nash_pontryagin(0.4, x, p, ode), 0.75 * x, 1e-14);
    }
}

TEST(NashPontryagin, ZeroGradientAndDeterminism)
{
    NashParams p;
    p.k = 3;
    OdeSolution ode;
    ode.grid = TimeGrid::from_dt(1.0, 0.5);
    ode.a_values = {0.0, 0.0, 0.0};
    ode.b_values = {0.0, 0.0, 0.0};
    const double u = nash_pontryagin(0.2, 1.3, p, ode);
    EXPECT_NEAR(u, 1.3 * 25.0 / (2.0 * 3.0 * p.c) * (3.0 * p.c - 1.5 * p.c), 1e-14);
    EXPECT_EQ(u, nash_pontryagin(0.2, 1.3, p, ode));
}

TEST(OdeSolution, Interpolation)
{
    OdeSolution ode;
    ode.grid = TimeGrid::from_dt(1.0, 0.5);
    ode.a_values = {0.0, 1.0, 3.0};
    ode.b_values = {0.0, 0.0, 0.0};
    EXPECT_DOUBLE_EQ(ode.a_at(0.25), 0.5);
    EXPECT_DOUBLE_EQ(ode.a_at(1.0), 3.0);
    EXPECT_THROW(ode.a_at(1.5), InvalidArgument);
}
