#include <gtest/gtest.h>

#include <cmath>

#include "frontlab/speed_ode.hpp"
#include "frontlab/verify.hpp"

using namespace frontlab;

TEST(Integrator, ExponentialDecay) {
    VectorField f = [](double, const State& y, State& dy) { dy[0] = -y[0]; };
    auto tr = integrate(f, {1.0}, 0, 3);
    EXPECT_NEAR(tr.y.back()[0], std::exp(-3.0), 1e-8);
    EXPECT_DOUBLE_EQ(tr.t.back(), 3.0);
}

TEST(Integrator, ZeroFieldKeepsState) {
    VectorField f = [](double, const State&, State& dy) { std::fill(dy.begin(), dy.end(), 0.0); };
    auto tr = integrate(f, {0.3, -2.0}, 0, 10);
    EXPECT_EQ(tr.y.back()[0], 0.3);
    EXPECT_EQ(tr.y.back()[1], -2.0);
}

TEST(Integrator, HarmonicEnergyDrift) {
    VectorField f = [](double, const State& y, State& dy) {
        dy[0] = y[1];
        dy[1] = -y[0];
    };
    IntegrateOptions io;
    io.rtol = io.atol = 1e-11;
    auto tr = integrate(f, {1.0, 0.0}, 0, 100, io);
    double drift = 0;
    for (auto& y : tr.y) drift = std::max(drift, std::abs(y[0] * y[0] + y[1] * y[1] - 1));
    EXPECT_LT(drift, 1e-8);
    EXPECT_NEAR(tr.y.back()[0], std::cos(100.0), 1e-8);
}

TEST(Integrator, DenseOutputMatchesSolution) {
    VectorField f = [](double, const State& y, State& dy) { dy[0] = -y[0]; };
    double worst = 0;
    integrate(f, {1.0}, 0, 2, {}, [&](const DenseStep& st) {
        double t = st.t0 + 0.37 * st.h;
        worst = std::max(worst, std::abs(st.eval(t)[0] - std::exp(-t)));
        return false;
    });
    EXPECT_LT(worst, 1e-8);
}

TEST(SpeedOde, EquilibriaAndClassification) {
    // z''' = -1 + z^2: equilibria z = +-1, characteristic polynomials lambda^3 -+ 2
    auto nf = ScaledNF::from_normal_form(-1, 0, 0, 1, false);
    auto eq = equilibria_and_classification(nf);
    ASSERT_EQ(eq.size(), 2u);
    EXPECT_DOUBLE_EQ(eq[0].point[0], -1);
    EXPECT_DOUBLE_EQ(eq[1].point[0], 1);
    EXPECT_EQ(eq[0].type, "saddle-focus(2u,1s)");
    EXPECT_EQ(eq[1].type, "saddle-focus(1u,2s)");
    double r = std::cbrt(2.0);
    EXPECT_NEAR(eq[1].eigenvalues[0].real(), r, 1e-12);
    EXPECT_NEAR(eq[1].eigenvalues[1].real(), -r / 2, 1e-12);
    EXPECT_NEAR(std::abs(eq[1].eigenvalues[1].imag()), r * std::sqrt(3.0) / 2, 1e-12);
    EXPECT_EQ(classify({{-1, 0}, {-2, 0}}), "sink");
    EXPECT_EQ(classify({{1, 0}, {0, 0}}), "nonhyperbolic");
    EXPECT_EQ(classify({{1, 0}, {-2, 0}}), "saddle");
}

TEST(SpeedOde, ShootingGuards) {
    EXPECT_THROW(shilnikov_shoot(ScaledNF::from_normal_form(1, -0.5, 0, 1), -1, 1, 5), DomainError);
    EXPECT_THROW(shilnikov_shoot(ScaledNF::from_normal_form(-1, 0.5, 0, 1), -1, 1, 5), DomainError);
    EXPECT_THROW(shilnikov_shoot(ScaledNF::from_normal_form(-1, -0.5, 0, 1), -1, 1, 1), DomainError);
    EXPECT_THROW(ScaledNF::from_normal_form(0, 0, 0, 1), DomainError);
}

TEST(SpeedOde, ShootTraceIsComplete) {
    auto nf = ScaledNF::from_normal_form(-1, -0.5, 0, 1);
    auto res = shilnikov_shoot(nf, -0.2, 0.2, 3);
    ASSERT_EQ(res.trace.size(), 3u);
    std::string why;
    EXPECT_TRUE(shoot_contract(res, 3, ShootOptions{}.tol, why)) << why;
}

TEST(SpeedOde, LyapunovExponents) {
    LinearizedSystem lin{2, [](double, const State& y, State& dy) {
                             dy[0] = -y[0];
                             dy[1] = -2 * y[1];
                         },
                         [](const State&) {
                             Eigen::MatrixXd j = Eigen::MatrixXd::Zero(2, 2);
                             j(0, 0) = -1;
                             j(1, 1) = -2;
                             return j;
                         }};
    EXPECT_NEAR(lyapunov_max(lin, {1.0, 1.0}, 50, 1), -1, 0.05);
    LinearizedSystem zero{2, [](double, const State&, State& dy) { dy[0] = dy[1] = 0; },
                          [](const State&) { return Eigen::MatrixXd(Eigen::MatrixXd::Zero(2, 2)); }};
    EXPECT_NEAR(lyapunov_max(zero, {0.0, 0.0}, 20, 1), 0, 1e-12);
}

TEST(SpeedOde, ScalarFieldStability) {
    SpeedODE o(1, 0, {-1.0}, {0.0}, 1.0);
    auto eq = equilibria_and_classification(o);
    ASSERT_EQ(eq.size(), 1u);
    EXPECT_EQ(eq[0].type, "sink");
    EXPECT_NEAR(lyapunov_max(linearized(o), {0.5}, 30, 1), -1, 0.05);
    EXPECT_THROW(SpeedODE(2, 0, {1.0}, {0.0, 0.0}, 1.0), DomainError);
}

TEST(SpeedOde, BuiltFromAnalysis) {
    auto p = sets::three_component();
    double h = 0.7;
    auto o = build_from_analysis(p, sets::transcritical(), 3, h);
    EXPECT_NEAR(o.a_quad[0], h / 4, 1e-13);
    EXPECT_NEAR(o.a0, 0, 1e-14);
    for (double a : o.a_lin) EXPECT_LT(std::abs(a), 1e-12);
    EXPECT_EQ(o.a_quad[1], 0.0);
    EXPECT_THROW(build_from_analysis(p, sets::opt(), 4, h), DomainError);
    EXPECT_THROW(build_from_analysis(p, sets::opt(), 3, 0.0), DomainError);
    EXPECT_GT(natural_scale(p), 0);
}

TEST(SpeedOde, UnscaledMatchesNormalForm) {
    auto nf = ScaledNF::from_normal_form(-1, -0.5, 0.2, 1.3);
    nf.delta = 0.4;
    nf.a12 = 0.7;
    auto o = nf.unscaled(1.0);
    EXPECT_NEAR(o.a0, std::pow(0.4, 6) * nf.nu0, 1e-15);
    EXPECT_NEAR(o.a_lin[1], 0.16 * nf.nu[1], 1e-15);
    EXPECT_EQ(o.a_quad[0], 1.3);
    EXPECT_EQ(o.a_quad[1], 0.7);
}
