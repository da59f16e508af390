#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace frontlab {

/// Raised when inputs violate a documented precondition.
class DomainError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double sqrt2 = std::numbers::sqrt2;
/// Speed coefficient of the bare Allen-Cahn front, sqrt(2)/3.
inline constexpr double kAC = std::numbers::sqrt2 / 3.0;

/// n!! for n >= -1 (with (-1)!! = 0!! = 1).
inline std::int64_t double_factorial(int n) {
    std::int64_t r = 1;
    for (int k = n; k > 1; k -= 2) r *= k;
    return r;
}

/// (2k-1)!!/(2k)!! evaluated in floating point without overflow.
inline double dfact_ratio(int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= double(2 * i - 1) / double(2 * i);
    return r;
}

/// Structural parameters of the slow-fast system.
struct SystemParams {
    int n_slow = 1;
    double epsilon = 0.05;
    std::vector<double> tau{1.0};
    std::vector<double> d{1.0};

    SystemParams() = default;
    SystemParams(int n, double eps, std::vector<double> t, std::vector<double> dd)
        : n_slow(n), epsilon(eps), tau(std::move(t)), d(std::move(dd)) {
        validate();
    }

    void validate() const {
        if (n_slow < 1) throw DomainError("n_slow must be >= 1");
        if (!(epsilon > 0)) throw DomainError("epsilon must be positive");
        if (int(tau.size()) != n_slow || int(d.size()) != n_slow)
            throw DomainError("tau and d must have n_slow entries");
        for (int j = 0; j < n_slow; ++j) {
            if (!(tau[j] > 0)) throw DomainError("tau entries must be positive");
            if (!(d[j] > 0)) throw DomainError("d entries must be positive");
        }
    }

    double ratio(int j) const { return tau[j] / d[j]; }
    double tau_min() const { return *std::min_element(tau.begin(), tau.end()); }
    double tau_max() const { return *std::max_element(tau.begin(), tau.end()); }

    static bool distinct(const std::vector<double>& v) {
        double scale = 0;
        for (double x : v) scale = std::max(scale, std::abs(x));
        for (size_t i = 0; i < v.size(); ++i)
            for (size_t k = i + 1; k < v.size(); ++k)
                if (std::abs(v[i] - v[k]) <= 1e-10 * scale) return false;
        return true;
    }
    bool pairwise_distinct_tau() const { return distinct(tau); }
    bool pairwise_distinct_ratio() const {
        std::vector<double> r(n_slow);
        for (int j = 0; j < n_slow; ++j) r[j] = ratio(j);
        return distinct(r);
    }
};

/// Coupling F(V) = gamma + sum alpha_j V_j + sum beta_j V_j^2 (+ higher V_1^k for N = 1).
struct Coupling {
    double gamma = 0;
    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> higher;  // higher[i] multiplies V_1^(i+3)

    Coupling() = default;
    explicit Coupling(int n) : alpha(n, 0.0), beta(n, 0.0) {}

    int n() const { return int(alpha.size()); }

    void validate(int n_slow) const {
        if (int(alpha.size()) != n_slow || int(beta.size()) != n_slow)
            throw DomainError("alpha and beta must have n_slow entries");
        if (!higher.empty() && n_slow != 1)
            throw DomainError("higher-order coupling terms require n_slow = 1");
    }

    /// Polynomial degree in V (at least 1 so that the linear part is always represented).
    int degree() const {
        int deg = 1;
        for (double b : beta)
            if (b != 0) deg = 2;
        for (size_t i = 0; i < higher.size(); ++i)
            if (higher[i] != 0) deg = int(i) + 3;
        return deg;
    }

    /// Sum of absolute coefficients; bounds |F(V)| on the unit cube.
    double abs_sum() const {
        double s = std::abs(gamma);
        for (double a : alpha) s += std::abs(a);
        for (double b : beta) s += std::abs(b);
        for (double h : higher) s += std::abs(h);
        return s;
    }

    /// Coefficients of V_j^k for the univariate piece in component j (index k = 0 is the constant).
    std::vector<double> univariate(int j) const {
        std::vector<double> c{j == 0 ? gamma : 0.0, alpha[j], beta[j]};
        if (j == 0)
            for (double h : higher) c.push_back(h);
        return c;
    }
};

inline void check_dim(const Coupling& f, const std::vector<double>& v) {
    if (int(v.size()) != f.n()) throw DomainError("dimension mismatch between coupling and state");
}

inline double eval_coupling(const Coupling& f, const std::vector<double>& v) {
    check_dim(f, v);
    double s = f.gamma;
    for (int j = 0; j < f.n(); ++j) s += f.alpha[j] * v[j] + f.beta[j] * v[j] * v[j];
    if (!f.higher.empty()) {
        double p = v[0] * v[0] * v[0];
        for (double h : f.higher) {
            s += h * p;
            p *= v[0];
        }
    }
    return s;
}

/// Nonlinear part's partial derivative in component j (no linear term).
inline double coupling_nl_partial(const Coupling& f, int j, double vj) {
    double g = 2 * f.beta[j] * vj;
    if (j == 0 && !f.higher.empty()) {
        double p = vj * vj;
        for (size_t i = 0; i < f.higher.size(); ++i) {
            g += double(i + 3) * f.higher[i] * p;
            p *= vj;
        }
    }
    return g;
}

inline std::vector<double> coupling_gradient(const Coupling& f, const std::vector<double>& v) {
    check_dim(f, v);
    std::vector<double> g(f.n());
    for (int j = 0; j < f.n(); ++j) g[j] = f.alpha[j] + coupling_nl_partial(f, j, v[j]);
    return g;
}

/// Diagonal of the Hessian (the coupling has no cross terms).
inline std::vector<double> coupling_hessian_diag(const Coupling& f, const std::vector<double>& v) {
    check_dim(f, v);
    std::vector<double> hd(f.n());
    for (int j = 0; j < f.n(); ++j) {
        double g = 2 * f.beta[j];
        if (j == 0 && !f.higher.empty()) {
            double p = v[0];
            for (size_t i = 0; i < f.higher.size(); ++i) {
                g += double((i + 3) * (i + 2)) * f.higher[i] * p;
                p *= v[0];
            }
        }
        hd[j] = g;
    }
    return hd;
}

/// Truncated Taylor series c_0 + c_1 x + ... + c_M x^M.
class PowerSeries {
public:
    PowerSeries() : c_(1, 0.0) {}
    explicit PowerSeries(int order) : c_(order + 1, 0.0) {}
    PowerSeries(std::vector<double> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.push_back(0.0);
    }

    static PowerSeries constant(double a, int order) {
        PowerSeries s(order);
        s.c_[0] = a;
        return s;
    }
    /// The series a + x.
    static PowerSeries variable(int order, double a = 0.0) {
        PowerSeries s(order);
        s.c_[0] = a;
        if (order >= 1) s.c_[1] = 1.0;
        return s;
    }

    int order() const { return int(c_.size()) - 1; }
    double operator[](int k) const { return k < int(c_.size()) ? c_[k] : 0.0; }
    double& operator[](int k) { return c_.at(k); }
    const std::vector<double>& coeffs() const { return c_; }

    PowerSeries operator+(const PowerSeries& o) const {
        PowerSeries r(std::min(order(), o.order()));
        for (int k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] + o.c_[k];
        return r;
    }
    PowerSeries operator-(const PowerSeries& o) const {
        PowerSeries r(std::min(order(), o.order()));
        for (int k = 0; k <= r.order(); ++k) r.c_[k] = c_[k] - o.c_[k];
        return r;
    }
    PowerSeries operator*(double a) const {
        PowerSeries r = *this;
        for (double& x : r.c_) x *= a;
        return r;
    }
    PowerSeries operator*(const PowerSeries& o) const {
        int m = std::min(order(), o.order());
        PowerSeries r(m);
        for (int i = 0; i <= m; ++i) {
            if (c_[i] == 0) continue;
            for (int k = 0; i + k <= m; ++k) r.c_[i + k] += c_[i] * o.c_[k];
        }
        return r;
    }
    PowerSeries& operator+=(const PowerSeries& o) { return *this = *this + o; }

    PowerSeries add_constant(double a) const {
        PowerSeries r = *this;
        r.c_[0] += a;
        return r;
    }

    /// 1/f, requires f(0) != 0.
    PowerSeries reciprocal() const {
        if (c_[0] == 0) throw DomainError("reciprocal of a series with zero constant term");
        PowerSeries r(order());
        r.c_[0] = 1.0 / c_[0];
        for (int k = 1; k <= order(); ++k) {
            double s = 0;
            for (int i = 1; i <= k; ++i) s += c_[i] * r.c_[k - i];
            r.c_[k] = -s / c_[0];
        }
        return r;
    }

    /// f^p for real p, requires f(0) > 0.
    PowerSeries pow(double p) const {
        if (!(c_[0] > 0)) throw DomainError("real power of a series needs a positive constant term");
        // g = f^p satisfies f g' = p f' g.
        int m = order();
        PowerSeries g(m);
        g.c_[0] = std::pow(c_[0], p);
        for (int k = 1; k <= m; ++k) {
            double s = 0;
            for (int i = 1; i <= k; ++i) s += (p * i - (k - i)) * c_[i] * g.c_[k - i];
            g.c_[k] = s / (k * c_[0]);
        }
        return g;
    }
    PowerSeries sqrt() const { return pow(0.5); }

    /// p(this) for polynomial coefficients p_0..p_K (Horner).
    PowerSeries apply_polynomial(const std::vector<double>& p) const {
        PowerSeries r = constant(0.0, order());
        for (int k = int(p.size()) - 1; k >= 0; --k) r = (r * *this).add_constant(p[k]);
        return r;
    }

    /// f(g) for inner series g with g(0) = 0.
    PowerSeries compose(const PowerSeries& g) const {
        if (g[0] != 0) throw DomainError("compose requires an inner series with zero constant term");
        PowerSeries r = constant(0.0, g.order());
        for (int k = order(); k >= 0; --k) r = (r * g).add_constant(c_[k]);
        return r;
    }

    PowerSeries derivative() const {
        PowerSeries r(std::max(0, order() - 1));
        for (int k = 1; k <= order(); ++k) r.c_[k - 1] = k * c_[k];
        return r;
    }

    double eval(double x) const {
        double s = 0;
        for (int k = order(); k >= 0; --k) s = s * x + c_[k];
        return s;
    }

private:
    std::vector<double> c_;
};

inline constexpr int kDefaultSeriesOrder = 12;

}  // namespace frontlab
