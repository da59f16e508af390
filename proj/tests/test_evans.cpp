#include <gtest/gtest.h>

#include <cmath>

#include "frontlab/designer.hpp"
#include "frontlab/evans.hpp"
#include "frontlab/verify.hpp"

using namespace frontlab;

namespace {

SystemParams unit1() { return SystemParams(1, 0.05, {1.0}, {1.0}); }

Coupling linear1(double a) {
    Coupling f(1);
    f.alpha[0] = a;
    return f;
}

}  // namespace

TEST(Evans, UncoupledIsIdentity) {
    EvansContext ctx(SystemParams(2, 0.05, {1.0, 2.0}, {1.0, 0.5}), Coupling(2), 0.7);
    for (cplx z : {cplx(0.3, 0), cplx(-0.1, 2), cplx(5, -1)}) EXPECT_LT(std::abs(evans_eval(ctx, z) - z), 1e-15);
}

TEST(Evans, VanishesAtOriginAndKnownValue) {
    EvansContext ctx(unit1(), linear1(1.0));
    EXPECT_LT(std::abs(evans_eval(ctx, 0.0)), 1e-15);
    // z = 16, z0 = 4: 3 + 3 sqrt2 (1/4 - 1/2)
    EXPECT_NEAR(evans_eval(ctx, 3.0).real(), 3 - 3 * sqrt2 / 4, 1e-14);
    EvansContext moving(sets::three_component(), sets::opt(), 0.4);
    EXPECT_LT(std::abs(evans_eval(moving, 0.0)), 1e-14);
}

TEST(Evans, ConjugationSymmetry) {
    EvansContext ctx(sets::three_component(), sets::opt(), 0.2);
    for (cplx z : {cplx(0.1, 0.3), cplx(-0.2, 1.5), cplx(2, -4)})
        EXPECT_LT(std::abs(evans_eval(ctx, std::conj(z)) - std::conj(evans_eval(ctx, z))), 1e-13);
}

TEST(Evans, DerivativeMatchesFiniteDifference) {
    EvansContext ctx(sets::three_component(), sets::transcritical(), 0.3);
    cplx z(0.2, 0.4), h(1e-6, 0);
    cplx fd = (evans_eval(ctx, z + h) - evans_eval(ctx, z - h)) / (2.0 * h);
    EXPECT_LT(std::abs(fd - evans_derivative(ctx, z)), 1e-8);
}

TEST(Evans, RejectsBranchCut) {
    EvansContext ctx(unit1(), linear1(1.0));
    EXPECT_DOUBLE_EQ(ctx.rightmost_branch_point(), -1.0);
    EXPECT_THROW(evans_eval(ctx, cplx(-2, 0)), DomainError);
    EXPECT_NO_THROW(evans_eval(ctx, cplx(-2, 0.1)));
}

TEST(Evans, TaylorMatchesBinomialSeries) {
    // (1 + lambda)^(-1/2) - 1 = -lambda/2 + 3 lambda^2/8 - 5 lambda^3/16
    PowerSeries t = evans_taylor_c0(unit1(), linear1(1.0), 3);
    double k = 1.5 * sqrt2;
    EXPECT_EQ(t[0], 0.0);
    EXPECT_NEAR(t[1], 1 - k / 2, 1e-15);
    EXPECT_NEAR(t[2], k * 3 / 8, 1e-15);
    EXPECT_NEAR(t[3], -k * 5 / 16, 1e-15);
    EvansContext ctx(unit1(), linear1(1.0));
    PowerSeries t8 = evans_taylor_c0(unit1(), linear1(1.0), 30);
    EXPECT_NEAR(t8.eval(0.1), evans_eval(ctx, 0.1).real(), 1e-14);
}

TEST(Evans, Bounds) {
    EXPECT_DOUBLE_EQ(evans_root_bound(EvansContext(SystemParams(1, 0.05, {2.0}, {1.0}), Coupling(1))), 1.0);
    EXPECT_NEAR(evans_root_bound(EvansContext(unit1(), linear1(1.0))), 3 * sqrt2, 1e-14);
    EXPECT_DOUBLE_EQ(essential_spectrum_bound(SystemParams(2, 0.1, {1.0, 4.0}, {1.0, 1.0})), -0.0025);
}

TEST(Evans, UncoupledRootIsOrigin) {
    auto rs = evans_roots(EvansContext(unit1(), Coupling(1)), Box{-1, 1, -1, 1});
    ASSERT_EQ(rs.roots.size(), 1u);
    EXPECT_LT(std::abs(rs.roots[0].z), 1e-12);
    EXPECT_EQ(rs.roots[0].multiplicity, 1);
    EXPECT_EQ(rs.winding_total, 1);
}

TEST(Evans, DoubleRootSplitsUnderPerturbation) {
    // alpha = 2 sqrt2/3 makes lambda = 0 a double root for tau = d = 1
    double a0 = 2 * sqrt2 / 3, da = 1e-3;
    EvansContext base(unit1(), linear1(a0));
    EXPECT_EQ(evans_winding_disk(base, 0.0, 0.05), 2);
    EvansContext ctx(unit1(), linear1(a0 + da));
    auto rs = evans_roots(ctx, Box{-0.05, 0.05, -0.05, 0.05}, 1e-10);
    ASSERT_EQ(rs.roots.size(), 2u);
    PowerSeries t = evans_taylor_c0(unit1(), linear1(a0 + da), 3);
    double predicted = -t[1] / t[2];
    auto near0 = std::abs(rs.roots[0].z) < std::abs(rs.roots[1].z) ? rs.roots[0].z : rs.roots[1].z;
    auto moved = near0 == rs.roots[0].z ? rs.roots[1].z : rs.roots[0].z;
    EXPECT_LT(std::abs(near0), 1e-12);
    EXPECT_LT(std::abs(moved - predicted), 5 * da * da);
    EXPECT_GT(moved.real(), 0);
}

TEST(Evans, OptHasFourfoldZero) {
    EvansContext ctx(sets::three_component(), sets::opt());
    EXPECT_EQ(evans_winding_disk(ctx, 0.0, 0.05), 4);
    PowerSeries t = evans_taylor_c0(sets::three_component(), sets::opt(), 5);
    for (int k = 1; k <= 3; ++k) EXPECT_LT(std::abs(t[k]), 1e-14);
    EXPECT_GT(std::abs(t[4]), 1.0);
}
