#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontlab/core.hpp"
#include "frontlab/evans.hpp"

namespace frontlab {

/// Exact rational number with 128-bit intermediates; overflow is detected, not wrapped.
class Rational {
public:
    Rational(std::int64_t n = 0, std::int64_t d = 1) { set(n, d); }

    std::int64_t num() const { return n_; }
    std::int64_t den() const { return d_; }
    double to_double() const { return double(n_) / double(d_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(__int128(a.n_) * b.d_ + __int128(b.n_) * a.d_, __int128(a.d_) * b.d_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(__int128(a.n_) * b.d_ - __int128(b.n_) * a.d_, __int128(a.d_) * b.d_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(__int128(a.n_) * b.n_, __int128(a.d_) * b.d_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.n_ == 0) throw std::domain_error("rational division by zero");
        return make(__int128(a.n_) * b.d_, __int128(a.d_) * b.n_);
    }
    friend bool operator==(const Rational& a, const Rational& b) { return a.n_ == b.n_ && a.d_ == b.d_; }
    std::string str() const { return d_ == 1 ? std::to_string(n_) : std::to_string(n_) + "/" + std::to_string(d_); }

private:
    struct Raw {};
    Rational(Raw, std::int64_t n, std::int64_t d) : n_(n), d_(d) {}

    std::int64_t n_ = 0, d_ = 1;

    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Rational make(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        const __int128 lim = __int128(INT64_MAX);
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
        return Rational(Raw{}, std::int64_t(n), std::int64_t(d));
    }
    void set(std::int64_t n, std::int64_t d) { *this = make(n, d); }
};

inline std::int64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

inline std::int64_t factorial(int n) {
    std::int64_t r = 1;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

/// Closed-form polynomial coefficient a_j^i = (2^i / i!) C(2j-i, j) / C(2j, j).
inline Rational jordan_coeff(int j, int i) {
    return Rational(std::int64_t(1) << i, factorial(i)) * Rational(binomial(2 * j - i, j), binomial(2 * j, j));
}

/// Coefficients obtained from the recurrences only: top coefficient 1/(2j-1)!!, then downward,
/// closing with the symmetry condition a_j^0 = a_j^1.
inline std::vector<Rational> jordan_coeffs_by_recurrence(int j) {
    std::vector<Rational> prev{Rational(1)};
    for (int jj = 1; jj <= j; ++jj) {
        std::vector<Rational> a(jj + 1);
        a[jj] = Rational(1, double_factorial(2 * jj - 1));
        Rational f(2 * jj, 2 * jj - 1);
        for (int i = jj - 2; i >= 0; --i) {
            // (2j/(2j-1)) a_{j-1}^i = 2(i+1) a_j^{i+1} - (i+1)(i+2) a_j^{i+2}
            Rational rhs = f * prev[i] + Rational((i + 1) * (i + 2)) * a[i + 2];
            a[i + 1] = rhs / Rational(2 * (i + 1));
        }
        a[0] = a[1];
        prev = a;
    }
    return prev;
}

/// v^j_+(x) = C_j e^{-x} / d * sum_i a_j^i x^i on x >= 0, and v^j_-(x) = v^j_+(-x).
struct JordanPolynomial {
    int j = 0;
    double tau = 1, d = 1;
    Rational prefactor_rational{1};  // (-1)^j (2j-1)!!/(2j)!!
    std::vector<Rational> coeffs;

    double prefactor() const { return prefactor_rational.to_double() * std::pow(tau, j); }

    double poly(double x) const {
        double s = 0;
        for (int i = int(coeffs.size()) - 1; i >= 0; --i) s = s * x + coeffs[i].to_double();
        return s;
    }
    double dpoly(double x) const {
        double s = 0;
        for (int i = int(coeffs.size()) - 1; i >= 1; --i) s = s * x + i * coeffs[i].to_double();
        return s;
    }
    double plus(double x) const { return prefactor() * std::exp(-x) / d * poly(x); }
    double plus_dx(double x) const { return prefactor() * std::exp(-x) / d * (dpoly(x) - poly(x)); }
    double minus(double x) const { return plus(-x); }
    double minus_dx(double x) const { return -plus_dx(-x); }
    /// Value on the fast field (the common value at x = 0).
    double plateau() const { return prefactor() / d; }
};

inline JordanPolynomial jordan_poly(int j, double tau, double d) {
    if (j < 0) throw DomainError("chain index must be non-negative");
    JordanPolynomial jp;
    jp.j = j;
    jp.tau = tau;
    jp.d = d;
    jp.prefactor_rational = Rational(j % 2 ? -1 : 1) * Rational(double_factorial(2 * j - 1), double_factorial(2 * j));
    for (int i = 0; i <= j; ++i) jp.coeffs.push_back(jordan_coeff(j, i));
    auto rec = jordan_coeffs_by_recurrence(j);
    for (int i = 0; i <= j; ++i)
        if (!(rec[i] == jp.coeffs[i])) throw std::logic_error("closed form and recurrence disagree");
    return jp;
}

struct ChainSample {
    std::complex<double> u;
    std::vector<std::complex<double>> v;
};

/// Leading-order (generalised) eigenfunction of the stationary front, piecewise in y.
struct ChainProfile {
    int k = 0;
    double epsilon = 0.05;
    std::complex<double> lambda = 0.0;
    std::vector<double> tau, d;
    Coupling coupling;
    double fast_value = 0;  // K_k for k >= 1
    std::vector<JordanPolynomial> polys;  // one per slow component, for k >= 1

    std::complex<double> h(int j) const { return d[j] * std::sqrt(tau[j] * lambda + 1.0); }

    std::complex<double> slow(int j, double y) const {
        double w = std::sqrt(epsilon);
        if (k == 0) {
            auto hj = h(j);
            if (std::abs(y) <= w) return 1.0 / hj;
            return std::exp(-hj * std::abs(y) / (d[j] * d[j])) / hj;
        }
        const auto& jp = polys[j];
        if (std::abs(y) <= w) return jp.plateau();
        return y > 0 ? jp.plus(y / d[j]) : jp.minus(y / d[j]);
    }

    /// Stationary front slow profile used in the U-component of the slow fields.
    static double front_v(double y, double dj) { return y >= 0 ? 1 - std::exp(-y / dj) : -1 + std::exp(y / dj); }

    ChainSample eval(double y) const {
        ChainSample s;
        int n = int(tau.size());
        for (int j = 0; j < n; ++j) s.v.push_back(slow(j, y));
        double w = std::sqrt(epsilon);
        if (k == 0) {
            if (std::abs(y) <= w) {
                double ch = std::cosh(y / (sqrt2 * epsilon));
                s.u = sqrt2 / (2 * epsilon) / (ch * ch);
            } else {
                s.u = 0.0;
            }
            return s;
        }
        if (std::abs(y) <= w) {
            s.u = fast_value;
            return s;
        }
        std::complex<double> acc = 0;
        for (int j = 0; j < n; ++j) {
            double g = coupling.alpha[j] + coupling_nl_partial(coupling, j, front_v(y, d[j]));
            acc += g * s.v[j];
        }
        s.u = -0.5 * epsilon * acc;
        return s;
    }

    /// Limit y -> 0 of the slow-field U-expression (uses the plateau values).
    double slow_u_limit_at_interface() const {
        if (k == 0) return 0.0;
        double acc = 0;
        for (size_t j = 0; j < tau.size(); ++j)
            acc += (coupling.alpha[j] + coupling_nl_partial(coupling, int(j), 0.0)) * polys[j].plateau();
        return -0.5 * epsilon * acc;
    }
};

inline ChainProfile eigenfunction_c0(const SystemParams& p, const Coupling& f, std::complex<double> lambda) {
    for (int j = 0; j < p.n_slow; ++j) {
        auto z = p.tau[j] * lambda + 1.0;
        if (z.imag() == 0 && z.real() <= 0) throw DomainError("lambda lies on a branch cut of h_j");
    }
    ChainProfile cp;
    cp.k = 0;
    cp.epsilon = p.epsilon;
    cp.lambda = lambda;
    cp.tau = p.tau;
    cp.d = p.d;
    cp.coupling = f;
    return cp;
}

inline ChainProfile chain_profile(const SystemParams& p, const Coupling& f, int k, int ell) {
    if (k < 0 || k > ell) throw DomainError("need 0 <= k <= ell");
    f.validate(p.n_slow);
    if (k == 0) return eigenfunction_c0(p, f, 0.0);
    PowerSeries t = evans_taylor_c0(p, f, k);
    for (int order = 1; order <= k; ++order)
        if (std::abs(t[order]) > 1e-8)
            throw DomainError("solvability condition violated at order lambda^" + std::to_string(order));
    ChainProfile cp;
    cp.k = k;
    cp.epsilon = p.epsilon;
    cp.tau = p.tau;
    cp.d = p.d;
    cp.coupling = f;
    cp.fast_value = (k == 1) ? p.epsilon / (3 * sqrt2) : 0.0;
    for (int j = 0; j < p.n_slow; ++j) cp.polys.push_back(jordan_poly(k, p.tau[j], p.d[j]));
    return cp;
}

struct ChainOdeReport {
    double max_residual = 0;
    double value_mismatch = 0;
    double derivative_mismatch = 0;
};

/// Residual of v_k'' = v_k + tau v_{k-1} on x in [0, extent] by fourth-order differences.
inline ChainOdeReport verify_chain_ode(const JordanPolynomial& vk, const JordanPolynomial* vkm1, double step = 0.005,
                                       double extent = 15.0) {
    ChainOdeReport r;
    int n = int(std::lround(extent / step));
    for (int i = 0; i <= n; ++i) {
        double x = i * step;
        double fd = (-vk.plus(x + 2 * step) + 16 * vk.plus(x + step) - 30 * vk.plus(x) + 16 * vk.plus(x - step) -
                     vk.plus(x - 2 * step)) /
                    (12 * step * step);
        double rhs = vk.plus(x) + (vkm1 ? vk.tau * vkm1->plus(x) : 0.0);
        r.max_residual = std::max(r.max_residual, std::abs(fd - rhs));
    }
    r.value_mismatch = std::abs(vk.plus(0) - vk.minus(0));
    r.derivative_mismatch = std::abs(vk.plus_dx(0) - vk.minus_dx(0));
    return r;
}

}  // namespace frontlab
