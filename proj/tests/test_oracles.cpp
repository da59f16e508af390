// Independent recomputation of the frozen reference constants.
#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "frontlab/verify.hpp"

using namespace frontlab;

TEST(Oracle, EvansRootsClosedForm) {
    // N = 1, tau = d = 1: E_0 = lambda + 2r(1/s - 1), s = sqrt(1 + lambda), so s^2 + s - 2r = 0
    for (int k = 0; k < 3; ++k) {
        double r = reference::e0_ratio[k];
        double s = (-1 + std::sqrt(1 + 8 * r)) / 2;
        EXPECT_NEAR(s * s - 1, reference::e0_root[k], 1e-15);
        Coupling f(1);
        f.alpha[0] = r * 2 * sqrt2 / 3;
        EvansContext ctx(SystemParams(1, 0.05, {1.0}, {1.0}), f);
        EXPECT_LT(std::abs(evans_eval(ctx, reference::e0_root[k])), 1e-14);
    }
}

TEST(Oracle, CuspSpeedByBisection) {
    auto g = [](double c) {
        double v = c / std::sqrt(4 + c * c);
        return 2 * v - v * v * v - std::sqrt(2.0) / 3 * c;
    };
    double lo = 1, hi = 4;
    ASSERT_LT(g(lo) * g(hi), 0);
    for (int i = 0; i < 200; ++i) {
        double m = 0.5 * (lo + hi);
        ((g(m) > 0) == (g(lo) > 0) ? lo : hi) = m;
    }
    EXPECT_NEAR(0.5 * (lo + hi), reference::cusp_speed, 1e-14);
}

TEST(Oracle, SaddleFocusByCardano) {
    double s = std::sqrt(1.25), nu0 = -1 / s, nu2 = -0.5 / s;
    double z = std::sqrt(-nu0);
    EXPECT_NEAR(z, reference::sf_point, 1e-15);
    // lambda^3 - nu2 lambda - 2z = 0 in depressed form t^3 + p t + q
    double p = -nu2, q = -2 * z;
    double disc = q * q / 4 + p * p * p / 27;
    ASSERT_GT(disc, 0);
    double real = std::cbrt(-q / 2 + std::sqrt(disc)) + std::cbrt(-q / 2 - std::sqrt(disc));
    EXPECT_NEAR(real, reference::sf_real, 1e-14);
    EXPECT_NEAR(-real / 2, reference::sf_pair_re, 1e-14);
    EXPECT_NEAR(std::sqrt(3 * real * real / 4 + p), reference::sf_pair_im, 1e-14);
}

TEST(Oracle, OptCouplingIsClosedForm) {
    auto f = sets::opt();
    EXPECT_NEAR(f.alpha[0], 578 * sqrt2 / 315, 1e-15);
    EXPECT_NEAR(f.alpha[1], -289 / (90 * sqrt2), 1e-15);
    EXPECT_NEAR(f.alpha[2], 3125 / (2142 * sqrt2), 1e-15);
}
