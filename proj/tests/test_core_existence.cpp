#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "frontlab/existence.hpp"
#include "frontlab/verify.hpp"

using namespace frontlab;

namespace {

SystemParams unit1() { return SystemParams(1, 0.05, {1.0}, {1.0}); }

Coupling cubic(double alpha, double kappa) {
    Coupling f(1);
    f.alpha[0] = alpha;
    f.higher = {kappa};
    return f;
}

}  // namespace

TEST(Coupling, Evaluation) {
    Coupling z(2);
    EXPECT_EQ(eval_coupling(z, {0.3, -0.7}), 0.0);
    Coupling f(1);
    f.gamma = 1;
    f.alpha[0] = 2;
    EXPECT_DOUBLE_EQ(eval_coupling(f, {3.0}), 7.0);
    EXPECT_DOUBLE_EQ(eval_coupling(cubic(2, -1), {0.5}), 0.875);
}

TEST(Coupling, GradientMatchesFiniteDifference) {
    Coupling f = cubic(2, -1);
    f.beta[0] = 0.4;
    double v = 0.5, h = 1e-6;
    double fd = (eval_coupling(f, {v + h}) - eval_coupling(f, {v - h})) / (2 * h);
    EXPECT_NEAR(coupling_gradient(f, {v})[0], fd, 1e-8);
    EXPECT_NEAR(coupling_gradient(f, {v})[0], 2 + 2 * 0.4 * 0.5 - 3 * 0.25, 1e-15);

    Coupling q(3);
    q.alpha = {1, 2, 3};
    q.beta[0] = 1;
    auto g = coupling_gradient(q, {0.3, 0.1, 0.2});
    EXPECT_NEAR(g[0], 1.6, 1e-15);
    EXPECT_EQ(g[1], 2);
    EXPECT_EQ(g[2], 3);
}

TEST(Coupling, RejectsDimensionMismatch) {
    Coupling f(2);
    EXPECT_THROW(eval_coupling(f, {1.0}), DomainError);
    Coupling h(2);
    h.higher = {1.0};
    EXPECT_THROW(h.validate(2), DomainError);
}

TEST(SystemParams, Validation) {
    EXPECT_THROW(SystemParams(1, 0.0, {1.0}, {1.0}), DomainError);
    EXPECT_THROW(SystemParams(2, 0.1, {1.0}, {1.0, 1.0}), DomainError);
    EXPECT_THROW(SystemParams(1, 0.1, {-1.0}, {1.0}), DomainError);
    EXPECT_EQ(double_factorial(5), 15);
    EXPECT_EQ(double_factorial(6), 48);
}

TEST(PowerSeries, ProductIsCommutativeAndAssociative) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    auto rnd = [&] {
        PowerSeries s(20);
        for (int k = 0; k <= 20; ++k) s[k] = u(rng);
        return s;
    };
    for (int t = 0; t < 20; ++t) {
        auto a = rnd(), b = rnd(), c = rnd();
        auto ab = a * b, ba = b * a, l = (a * b) * c, r = a * (b * c);
        for (int k = 0; k <= 20; ++k) {
            EXPECT_NEAR(ab[k], ba[k], 1e-12 * (1 + std::abs(ab[k])));
            EXPECT_NEAR(l[k], r[k], 1e-12 * (1 + std::abs(l[k])));
        }
    }
}

TEST(Vstar, SeriesMatchesBinomialExpansion) {
    PowerSeries s = series_vstar(unit1(), 0, 5);
    EXPECT_EQ(s[0], 0);
    EXPECT_NEAR(s[1], 0.5, 1e-15);
    EXPECT_NEAR(s[3], -0.0625, 1e-15);
    EXPECT_NEAR(s[5], 0.01171875, 1e-15);
    SystemParams p(2, 0.1, {0.7, 2.0}, {1.3, 0.4});
    for (int j = 0; j < 2; ++j) {
        PowerSeries q = series_vstar(p, j, 9);
        for (int k = 0; k <= 9; k += 2) EXPECT_EQ(q[k], 0.0);
    }
}

TEST(Gamma0, DecoupledRoot) {
    Coupling f(1);
    f.gamma = 0.1;
    SystemParams p = unit1();
    EXPECT_NEAR(gamma0(p, f, 0.3), 0.1 - sqrt2 / 3 * 0.3, 1e-15);
    EXPECT_DOUBLE_EQ(gamma0(p, f, 0.0), 0.1);
    auto r = gamma0_roots(p, f, -5, 5);
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_NEAR(r.roots[0].c, 3 * sqrt2 * 0.1 / 2, 1e-12);
}

TEST(Gamma0, ZeroCouplingHasSimpleRootAtZero) {
    auto r = gamma0_roots(unit1(), Coupling(1), -3, 3);
    ASSERT_EQ(r.roots.size(), 1u);
    EXPECT_NEAR(r.roots[0].c, 0, 1e-14);
    EXPECT_EQ(r.roots[0].multiplicity, 1);
}

TEST(Gamma0, CuspRoots) {
    auto r = gamma0_roots(unit1(), sets::cusp(), -10, 10);
    ASSERT_EQ(r.roots.size(), 3u);
    EXPECT_NEAR(r.roots[0].c, -reference::cusp_speed, 1e-9);
    EXPECT_NEAR(r.roots[1].c, 0, 1e-12);
    EXPECT_NEAR(r.roots[2].c, reference::cusp_speed, 1e-9);
    for (auto& x : r.roots) EXPECT_EQ(x.multiplicity, 1);
}

TEST(Gamma0, PitchforkRootHasMultiplicityThree) {
    auto r = gamma0_roots(sets::three_component(0.05, 1.4), sets::pitchfork(), -0.5, 0.5);
    bool found = false;
    for (auto& x : r.roots)
        if (std::abs(x.c) < 1e-6) {
            found = true;
            EXPECT_EQ(x.multiplicity, 3);
        }
    EXPECT_TRUE(found);
}

TEST(Gamma0, TaylorCoefficientsForScalarCoupling) {
    Coupling f(1);
    f.gamma = 0.3;
    f.alpha[0] = 1.7;
    f.beta[0] = -0.4;
    f.higher = {0.9, 1.3};  // kappa, rho
    PowerSeries t = gamma0_taylor(unit1(), f, 4);
    EXPECT_NEAR(t[0], 0.3, 1e-15);
    EXPECT_NEAR(t[1], 1.7 / 2 - sqrt2 / 3, 1e-15);
    EXPECT_NEAR(t[2], -0.4 / 4, 1e-15);
    EXPECT_NEAR(t[3], (2 * 0.9 - 1.7) / 16, 1e-15);
    EXPECT_NEAR(t[4], (1.3 + 0.4) / 16, 1e-15);
}

TEST(Gamma0, TaylorAtOffsetMatchesFiniteDifferences) {
    auto p = sets::three_component();
    auto f = sets::transcritical();
    f.gamma = 0.01;
    double c0 = 0.37, h = 1e-4;
    PowerSeries t = gamma0_taylor_at(p, f, c0, 3);
    EXPECT_NEAR(t[0], gamma0(p, f, c0), 1e-15);
    EXPECT_NEAR(t[1], (gamma0(p, f, c0 + h) - gamma0(p, f, c0 - h)) / (2 * h), 1e-8);
    EXPECT_NEAR(t[1], gamma0_dc(p, f, c0), 1e-13);
}

TEST(Gamma0, OddForAffineCouplings) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3, 3), pos(0.2, 3);
    for (int t = 0; t < 50; ++t) {
        SystemParams p(3, 0.05, {pos(rng), pos(rng), pos(rng)}, {pos(rng), pos(rng), pos(rng)});
        Coupling f(3);
        f.alpha = {u(rng), u(rng), u(rng)};
        double c = u(rng);
        EXPECT_NEAR(gamma0(p, f, -c), -gamma0(p, f, c), 1e-14);
    }
}

TEST(Gamma0, ParameterSetOrders) {
    PowerSeries t = gamma0_taylor(sets::three_component(), sets::transcritical(), 3);
    EXPECT_LE(std::abs(t[0]), 1e-12);
    EXPECT_LE(std::abs(t[1]), 1e-12);
    EXPECT_GT(std::abs(t[2]), 1e-6);
    PowerSeries o = gamma0_taylor(sets::three_component(), sets::opt(), 8);
    for (int k = 0; k < 7; ++k) EXPECT_LE(std::abs(o[k]), 1e-12) << k;
    EXPECT_GT(std::abs(o[7]), 1e-6);
}

TEST(FrontProfile, StationaryAndVieta) {
    SystemParams p(2, 0.05, {1.0, 2.0}, {1.0, 1.5});
    auto fp = front_profile(p, Coupling(2), 0.0);
    for (int j = 0; j < 2; ++j) {
        EXPECT_EQ(fp.v_star[j], 0.0);
        EXPECT_NEAR(fp.lambda_plus[j], 1 / p.d[j], 1e-15);
        EXPECT_NEAR(fp.v(j, 2.0), 1 - std::exp(-2.0 / p.d[j]), 1e-15);
        EXPECT_NEAR(fp.v(j, -2.0), -1 + std::exp(-2.0 / p.d[j]), 1e-15);
    }
    auto moving = front_profile(p, Coupling(2), 1.3);
    for (int j = 0; j < 2; ++j)
        EXPECT_NEAR(moving.lambda_plus[j] * moving.lambda_minus[j], -1 / (p.d[j] * p.d[j]), 1e-14);
    EXPECT_GT(vstar(p, 0, 1e6), 1 - 1e-9);
}

TEST(FoldCurves, NoFoldsBelowCriticalSlope) {
    // dGamma0/dc = alpha V*'(c) - sqrt2/3 and V*' <= 1/2, so no folds for alpha < 2 sqrt2/3
    auto curves = fold_curves(unit1(), Coupling(1), ParamId::parse("alpha1"), ParamId::parse("gamma"),
                              FoldBox{-1, 0.9, -1, 1, 100, 100});
    EXPECT_TRUE(curves.empty());
    for (double c : {-2.0, -0.5, 0.0, 0.5, 2.0}) EXPECT_NEAR(gamma0_dc(unit1(), Coupling(1), c), -kAC, 1e-15);
}

TEST(FoldCurves, CuspMeetsAtCriticalPoint) {
    Coupling tmpl = cubic(2, -1);
    auto curves = fold_curves(unit1(), tmpl, ParamId::parse("alpha1"), ParamId::parse("gamma"),
                              FoldBox{0.5, 3.5, -1, 1, 400, 400});
    ASSERT_EQ(curves.size(), 2u);
    double ac = 2 * sqrt2 / 3;
    for (auto& poly : curves) {
        // each branch ends at the cusp point (alpha, gamma) = (2 sqrt2/3, 0)
        double best = 1e9;
        for (auto& pt : poly) best = std::min(best, std::hypot(pt.x - ac, pt.y));
        EXPECT_LT(best, 1e-3);
        for (auto& pt : poly) {
            Coupling f = tmpl;
            f.alpha[0] = pt.x;
            f.gamma = pt.y;
            EXPECT_NEAR(gamma0(unit1(), f, pt.c), 0, 1e-9);
            EXPECT_NEAR(gamma0_dc(unit1(), f, pt.c), 0, 1e-9);
        }
    }
}

TEST(ParamId, ParseAndRoundTrip) {
    EXPECT_EQ(ParamId::parse("gamma").name(), "gamma");
    EXPECT_EQ(ParamId::parse("alpha2").name(), "alpha2");
    EXPECT_EQ(ParamId::parse("beta3").index, 2);
    EXPECT_THROW(ParamId::parse("alpha0"), DomainError);
    EXPECT_THROW(ParamId::parse("delta1"), DomainError);
    EXPECT_THROW(ParamId::parse("alpha4").check(3), DomainError);
}
