#include <gtest/gtest.h>

#include <cmath>

#include "frontlab/designer.hpp"
#include "frontlab/verify.hpp"

using namespace frontlab;

TEST(Vandermonde, ClosedFormExamples) {
    auto x = vandermonde_solve({1, 2, 3}, 6);
    EXPECT_NEAR(x[0], 18, 1e-13);
    EXPECT_NEAR(x[1], -18, 1e-13);
    EXPECT_NEAR(x[2], 6, 1e-13);
    auto y = vandermonde_solve({1, 2}, 2);
    EXPECT_NEAR(y[0], 4, 1e-14);
    EXPECT_NEAR(y[1], -2, 1e-14);
    EXPECT_EQ(vandermonde_solve({3.7}, 1.5)[0], 1.5);
    EXPECT_THROW(vandermonde_solve({1, 1}, 1), DomainError);
    EXPECT_THROW(vandermonde_solve({}, 1), DomainError);
}

TEST(Vandermonde, SatisfiesMomentEquations) {
    std::vector<double> m{0.6, 1.3, 2.2, 3.1};
    auto x = vandermonde_solve(m, 2.5);
    for (int i = 0; i < 4; ++i) {
        double s = 0;
        for (int k = 0; k < 4; ++k) s += std::pow(m[k], i) * x[k];
        EXPECT_NEAR(s, i == 0 ? 2.5 : 0.0, 1e-11);
    }
}

TEST(Designer, EvansDesignReproducesOpt) {
    auto alpha = design_evans_degeneracy(sets::three_component(), 3);
    auto opt = sets::opt();
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(alpha[j], opt.alpha[j], 1e-13);
}

TEST(Designer, PartialEvansDesignKeepsFixedEntries) {
    auto p = sets::three_component();
    std::vector<double> fixed{0, 0, 0.5};
    auto alpha = design_evans_degeneracy(p, 2, fixed);
    EXPECT_EQ(alpha[2], 0.5);
    Coupling f(3);
    f.alpha = alpha;
    PowerSeries t = evans_taylor_c0(p, f, 3);
    EXPECT_LT(std::abs(t[1]), 1e-13);
    EXPECT_LT(std::abs(t[2]), 1e-13);
    EXPECT_GT(std::abs(t[3]), 1e-6);
}

TEST(Designer, EvansMultiplicityLimit) {
    SystemParams p(2, 0.05, {1.0, 2.0}, {1.0, 1.5});
    try {
        design_evans_degeneracy(p, 3);
        FAIL() << "expected DomainError";
    } catch (const DomainError& e) {
        EXPECT_NE(std::string(e.what()).find("N+1"), std::string::npos);
    }
    EXPECT_THROW(design_evans_degeneracy(SystemParams(2, 0.05, {1.0, 1.0}, {1.0, 2.0}), 2), DomainError);
}

TEST(Designer, GammaDegeneracyOrders) {
    auto p = sets::three_component();
    for (int m = 0; m <= 7; ++m) {
        Design d = design_gamma_degeneracy(p, m);
        PowerSeries t = gamma0_taylor(p, d.coupling, m + 1);
        for (int k = 0; k < m; ++k) EXPECT_LT(std::abs(t[k]), 1e-10) << "m=" << m << " k=" << k;
        EXPECT_GT(std::abs(t[m]), 1e-10) << "m=" << m;
    }
    EXPECT_THROW(design_gamma_degeneracy(p, 8), DomainError);
}

TEST(Designer, SimultaneousDesign) {
    Design d = design_simultaneous({1.0, 1.5, 1.7}, 1.0);
    EXPECT_TRUE(d.singular_limit_only);
    EXPECT_NEAR(d.params.tau[1], 2.25, 1e-15);
    EXPECT_NEAR(d.params.tau[2], 2.89, 1e-15);
    auto opt = sets::opt();
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(d.coupling.alpha[j], opt.alpha[j], 1e-13);
    PowerSeries g = gamma0_taylor(d.params, d.coupling, 7);
    for (int k = 0; k < 7; ++k) EXPECT_LT(std::abs(g[k]), 1e-12);
    PowerSeries e = evans_taylor_c0(d.params, d.coupling, 4);
    for (int k = 1; k < 4; ++k) EXPECT_LT(std::abs(e[k]), 1e-12);
    EXPECT_THROW(design_simultaneous({1.0, 1.0}, 1.0), DomainError);
}

TEST(Designer, ImprintRoundTrip) {
    SystemParams p(1, 0.05, {0.7}, {1.3});
    std::vector<double> target{0.01, -0.2, 0.3, 0.05, -0.4, 0.02};
    Coupling f = imprint_scalar_singularity(p, target);
    PowerSeries t = gamma0_taylor(p, f, 5);
    for (int k = 0; k <= 5; ++k) EXPECT_NEAR(t[k], target[k], 1e-12) << k;
    // tau/(2d) = sqrt2/3 leaves the linear order uncontrollable
    SystemParams bad(1, 0.05, {2 * sqrt2 / 3}, {1.0});
    EXPECT_THROW(imprint_scalar_singularity(bad, target), DomainError);
    EXPECT_THROW(imprint_scalar_singularity(sets::three_component(), target), DomainError);
}

TEST(Designer, UnfoldingVanishesAtBasePoint) {
    auto p = sets::three_component();
    auto a = linear_unfolding_map(p, {0, 0, 0});
    for (double x : a) EXPECT_LT(std::abs(x), 1e-12);
    for (auto z : weierstrass_roots({0, 0, 0})) EXPECT_LT(std::abs(z), 1e-12);
}

TEST(Designer, WeierstrassRootsTrackEvansRoots) {
    auto p = sets::three_component();
    auto base = design_evans_degeneracy(p, 3);
    std::vector<double> da{2e-4, -1e-4, 1.5e-4};
    auto a = linear_unfolding_map(p, da);
    auto pred = weierstrass_roots(a);
    Coupling f(3);
    for (int j = 0; j < 3; ++j) f.alpha[j] = base[j] + da[j];
    auto rs = evans_roots(EvansContext(p, f), Box{-0.1, 0.1, -0.1, 0.1}, 1e-12);
    ASSERT_EQ(rs.roots.size(), 4u);
    double scale = 0;
    for (auto z : pred) scale = std::max(scale, std::abs(z));
    for (auto z : pred) {
        double best = 1e9;
        for (auto& r : rs.roots) best = std::min(best, std::abs(r.z - z));
        EXPECT_LT(best, 0.5 * scale);
    }
}

TEST(Designer, WeierstrassCubicRoots) {
    // lambda^3 - 2: a = (2, 0, 0)
    auto r = weierstrass_roots({2, 0, 0});
    ASSERT_EQ(r.size(), 3u);
    for (auto z : r) EXPECT_NEAR(std::abs(z), std::cbrt(2.0), 1e-13);
}
