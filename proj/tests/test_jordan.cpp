#include <gtest/gtest.h>

#include <cmath>

#include "frontlab/jordan.hpp"
#include "frontlab/verify.hpp"

using namespace frontlab;

TEST(Rational, Arithmetic) {
    Rational a(1, 2), b(1, 3);
    EXPECT_EQ(a + b, Rational(5, 6));
    EXPECT_EQ(a - b, Rational(1, 6));
    EXPECT_EQ(a * b, Rational(1, 6));
    EXPECT_EQ(a / b, Rational(3, 2));
    EXPECT_EQ(Rational(4, -6), Rational(-2, 3));
    EXPECT_EQ(Rational(6, 3).str(), "2");
    EXPECT_EQ(Rational(-2, 3).str(), "-2/3");
    EXPECT_THROW(a / Rational(0), std::domain_error);
    EXPECT_THROW(Rational(INT64_MAX) * Rational(4), std::overflow_error);
}

TEST(Jordan, LowOrderCoefficients) {
    EXPECT_EQ(jordan_coeff(0, 0), Rational(1));
    // j = 2: (1/3)(1 + x + x^2/3)... check against the closed form directly
    EXPECT_EQ(jordan_coeff(2, 0), Rational(1));
    EXPECT_EQ(jordan_coeff(2, 1), Rational(1));
    EXPECT_EQ(jordan_coeff(2, 2), Rational(1, 3));
    EXPECT_EQ(jordan_coeff(1, 0), Rational(1));
    EXPECT_EQ(jordan_coeff(1, 1), Rational(1));
    EXPECT_EQ(jordan_coeff(4, 4), Rational(1, 105));
    for (int j = 1; j <= 8; ++j) {
        auto rec = jordan_coeffs_by_recurrence(j);
        for (int i = 0; i <= j; ++i) EXPECT_EQ(rec[i], jordan_coeff(j, i)) << j << "," << i;
        EXPECT_EQ(rec[j], Rational(1, double_factorial(2 * j - 1)));
    }
}

TEST(Jordan, ParityAndPrefactor) {
    for (int j = 0; j <= 5; ++j) {
        auto jp = jordan_poly(j, 2.0, 1.5);
        for (double x : {0.3, 1.7, 4.0}) EXPECT_DOUBLE_EQ(jp.minus(-x), jp.plus(x));
        double pre = (j % 2 ? -1.0 : 1.0) * double(double_factorial(2 * j - 1)) / double(double_factorial(2 * j)) *
                     std::pow(2.0, j);
        EXPECT_NEAR(jp.prefactor(), pre, 1e-15);
    }
}

TEST(Jordan, ChainOdeHolds) {
    for (double tau : {0.5, 1.0, 2.89}) {
        for (int k = 1; k <= 5; ++k) {
            auto vk = jordan_poly(k, tau, 1.0), vkm1 = jordan_poly(k - 1, tau, 1.0);
            auto rep = verify_chain_ode(vk, &vkm1);
            EXPECT_LT(rep.max_residual, 1e-7) << tau << "," << k;
            EXPECT_LT(rep.value_mismatch, 1e-15);
            EXPECT_LT(rep.derivative_mismatch, 1e-14);
        }
    }
}

TEST(Jordan, FirstChainProfile) {
    auto p = sets::three_component();
    auto cp = chain_profile(p, sets::opt(), 1, 3);
    EXPECT_NEAR(cp.eval(0.0).u.real(), p.epsilon / (3 * sqrt2), 1e-15);
    for (int j = 0; j < 3; ++j)
        EXPECT_NEAR(cp.eval(0.0).v[j].real(), -0.5 * p.tau[j] / p.d[j], 1e-14);
    auto cp2 = chain_profile(p, sets::opt(), 2, 3);
    EXPECT_EQ(cp2.fast_value, 0.0);
    EXPECT_THROW(chain_profile(p, sets::transcritical(), 4, 3), DomainError);
    Coupling bad(3);
    bad.alpha = {1, 1, 1};
    EXPECT_THROW(chain_profile(p, bad, 1, 3), DomainError);
}

TEST(Jordan, ZeroOrderEigenfunction) {
    auto cp = eigenfunction_c0(SystemParams(1, 0.05, {1.0}, {1.0}), Coupling(1), 0.0);
    EXPECT_NEAR(cp.eval(0.0).u.real(), sqrt2 / (2 * 0.05), 1e-12);
    EXPECT_NEAR(cp.eval(0.0).v[0].real(), 1.0, 1e-15);
    EXPECT_NEAR(cp.eval(2.0).v[0].real(), std::exp(-2.0), 1e-15);
    EXPECT_THROW(eigenfunction_c0(SystemParams(1, 0.05, {1.0}, {1.0}), Coupling(1), -2.0), DomainError);
}
