#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>

#include "frontlab/pde_solve.hpp"

using namespace frontlab;

namespace {

PdeModel model(double eps, double L, double h, Coupling f, double tau = 1, double d = 1) {
    SystemParams p(1, eps, {tau}, {d});
    return PdeModel{p, f, Grid(L, Grid::nodes_for(L, h), eps)};
}

}  // namespace

TEST(Grid, SpacingAndGuard) {
    Grid g(10, Grid::nodes_for(10, 0.05), 0.2);
    EXPECT_EQ(g.n % 2, 1);
    EXPECT_LE(g.h, 0.05 + 1e-15);
    EXPECT_EQ(g.x[(g.n - 1) / 2], 0.0);
    EXPECT_THROW(Grid(20, 11, 0.05), DomainError);
    Grid coarse(20, 11, 0.05, true);
    EXPECT_EQ(coarse.warnings.size(), 1u);
    EXPECT_THROW(Grid(1, 2), DomainError);
}

TEST(Pde, ThomasMatchesDenseSolve) {
    const int n = 9;
    double a = 0.3, b = 0.2, h = 0.1;
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) w[i] = std::sin(1.0 + i);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i) {
        // mirror closure w_{-1} = w_1, w_n = w_{n-2}
        int lo = i == 0 ? 1 : i - 1, hi = i == n - 1 ? n - 2 : i + 1;
        A(i, i) += 2 * a / (h * h);
        A(i, lo) += -a / (h * h) + b / (2 * h);
        A(i, hi) += -a / (h * h) - b / (2 * h);
    }
    Eigen::VectorXd rhs = Eigen::Map<Eigen::VectorXd>(w.data(), n);
    Eigen::VectorXd ref = A.partialPivLu().solve(rhs);
    detail::solve_implicit(a, b, h, w);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(w[i], ref[i], 1e-13);
}

TEST(Pde, HomogeneousStateIsFixed) {
    auto m = model(0.2, 5, 0.05, Coupling(1));
    PdeState s;
    s.u.assign(m.grid.n, 1.0);
    s.v.assign(1, std::vector<double>(m.grid.n, 1.0));
    for (auto scheme : {Scheme::IMEX1, Scheme::Strang}) {
        PdeState out = step(m, s, 0.1, StepOptions{scheme, 0});
        for (int i = 0; i < m.grid.n; ++i) {
            EXPECT_NEAR(out.u[i], 1.0, 1e-15);
            EXPECT_NEAR(out.v[0][i], 1.0, 1e-15);
        }
    }
    EXPECT_THROW(step(m, s, 0.0), DomainError);
}

TEST(Pde, AllenCahnFrontDoesNotDrift) {
    auto m = model(0.2, 10, 0.05, Coupling(1));
    auto st = state_from_profile(m, front_profile(m.params, m.coupling, 0.0));
    SimOptions so;
    so.output_stride = 50;
    auto sim = simulate(m, st, 20, so);
    EXPECT_FALSE(sim.aborted);
    EXPECT_LT(std::abs(sim.series.back().position), 1e-3);
    EXPECT_LT(std::abs(sim.series.back().speed), 1e-4);
    EXPECT_TRUE(sim.series.back().trapped);
}

TEST(Pde, InitialStateMustHaveOneFront) {
    auto m = model(0.2, 5, 0.05, Coupling(1));
    PdeState s;
    s.u.assign(m.grid.n, 1.0);
    s.v.assign(1, std::vector<double>(m.grid.n, 1.0));
    EXPECT_THROW(simulate(m, s, 1), DomainError);
}

TEST(Pde, StationaryFrontIsTanh) {
    auto m = model(0.1, 5, 0.0125, Coupling(1));
    auto sol = solve_stationary_front(m, state_from_profile(m, front_profile(m.params, m.coupling, 0.0)));
    ASSERT_TRUE(sol.converged);
    double err = 0;
    for (int i = 0; i < m.grid.n; ++i)
        err = std::max(err, std::abs(sol.state.u[i] - std::tanh(m.grid.x[i] / (sqrt2 * 0.1))));
    EXPECT_LT(err, 1e-3);
    EXPECT_EQ(sol.c, 0.0);
}

TEST(Pde, UncoupledTravellingSolveFindsZeroSpeed) {
    auto m = model(0.2, 10, 0.05, Coupling(1));
    auto sol = solve_travelling_front(m, state_from_profile(m, front_profile(m.params, m.coupling, 0.3)), 0.3);
    ASSERT_TRUE(sol.converged);
    EXPECT_LT(std::abs(sol.c), 1e-8);
}

TEST(Pde, DecoupledTravellingSpeed) {
    Coupling f(1);
    f.gamma = 0.1;
    auto m = model(0.2, 10, 0.05, f);
    double pred = 3 * sqrt2 * f.gamma / 2;
    auto sol = solve_travelling_front(m, state_from_profile(m, front_profile(m.params, f, pred)), pred);
    ASSERT_TRUE(sol.converged);
    EXPECT_NEAR(sol.c, pred, 0.05 * pred);
    EXPECT_NEAR(sol.lab_speed(0.2), 0.04 * sol.c, 1e-15);
}

TEST(Pde, SlowBandEdgeInSpectrum) {
    // with F = 0 the slow block decouples; its Neumann constant mode sits at -eps^2/tau
    auto m = model(0.2, 5, 0.05, Coupling(1), 2.0);
    auto sol = solve_stationary_front(m, state_from_profile(m, front_profile(m.params, m.coupling, 0.0)));
    ASSERT_TRUE(sol.converged);
    auto sp = linearization_spectrum(m, sol);
    ASSERT_TRUE(sp.translation());
    EXPECT_LT(std::abs(sp.translation()->value), 1e-8);
    auto lead = sp.leading_nontrivial();
    ASSERT_TRUE(lead);
    EXPECT_NEAR(lead->value.real(), essential_spectrum_bound(m.params), 1e-9);
}

TEST(Pde, PerturbationModes) {
    auto m = model(0.2, 5, 0.05, Coupling(1));
    auto s = state_from_profile(m, front_profile(m.params, m.coupling, 0.0));
    auto base = s;
    Perturbation pb;
    pb.mode = "bump";
    pb.amplitude = 0.1;
    apply_perturbation(m, s, pb);
    int mid = (m.grid.n - 1) / 2;
    EXPECT_NEAR(s.u[mid] - base.u[mid], 0.1, 1e-15);
    pb.mode = "wiggle";
    EXPECT_THROW(apply_perturbation(m, s, pb), DomainError);
}
