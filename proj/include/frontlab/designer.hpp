#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/core.hpp"
#include "frontlab/evans.hpp"
#include "frontlab/existence.hpp"

namespace frontlab {

/// Solves sum_k m_k^(i-1) x_k = b delta_{i1} in closed form.
inline std::vector<double> vandermonde_solve(const std::vector<double>& nodes, double b) {
    size_t n = nodes.size();
    if (n == 0) throw DomainError("vandermonde_solve needs at least one node");
    double scale = 0;
    for (double m : nodes) scale = std::max(scale, std::abs(m));
    for (size_t i = 0; i < n; ++i)
        for (size_t k = i + 1; k < n; ++k)
            if (std::abs(nodes[i] - nodes[k]) <= 1e-10 * scale)
                throw DomainError("near-coincident Vandermonde nodes (gap " +
                                  std::to_string(std::abs(nodes[i] - nodes[k])) + ")");
    std::vector<double> x(n);
    for (size_t i = 0; i < n; ++i) {
        double prod = b;
        for (size_t k = 0; k < n; ++k)
            if (k != i) prod *= nodes[k] / (nodes[k] - nodes[i]);
        x[i] = prod;
    }
    return x;
}

/// Outcome of a design: coupling plus diagnostics.
struct Design {
    SystemParams params;
    Coupling coupling;
    bool singular_limit_only = false;
    std::vector<std::string> warnings;
};

namespace detail {

inline void condition_guard(const Eigen::MatrixXd& a, std::vector<std::string>& warnings) {
    if (a.rows() == 0) return;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    auto s = svd.singularValues();
    double cond = s(0) / s(s.size() - 1);
    if (!(cond < 1e8)) warnings.push_back("generalized Vandermonde condition number " + std::to_string(cond));
}

}  // namespace detail

/// Linear coefficients giving a zero root of multiplicity ell+1 for the stationary Evans function.
/// Components beyond ell are held at `fixed` (defaults to the ell = N closed form).
inline std::vector<double> design_evans_degeneracy(const SystemParams& p, int ell,
                                                   std::optional<std::vector<double>> fixed = std::nullopt,
                                                   std::vector<std::string>* warnings = nullptr) {
    int n = p.n_slow;
    if (ell < 1 || ell > n)
        throw DomainError("zero-root multiplicity ell+1 must satisfy 1 <= ell <= N (maximum multiplicity N+1 = " +
                          std::to_string(n + 1) + ")");
    if (!p.pairwise_distinct_tau()) throw DomainError("tau values are not pairwise distinct");
    // x_j = alpha_j tau_j / d_j solves sum x_j tau_j^(k-1) = (2 sqrt2/3, 0, ...)
    std::vector<double> x = vandermonde_solve(p.tau, 2 * sqrt2 / 3);
    std::vector<double> full(n);
    for (int j = 0; j < n; ++j) full[j] = x[j] * p.d[j] / p.tau[j];
    if (ell == n) return full;
    std::vector<double> alpha = fixed ? *fixed : full;
    if (int(alpha.size()) != n) throw DomainError("fixed alpha vector has wrong length");
    Eigen::MatrixXd a(ell, ell);
    Eigen::VectorXd rhs(ell);
    for (int k = 1; k <= ell; ++k) {
        double r = (k == 1) ? 2 * sqrt2 / 3 : 0.0;
        for (int j = ell; j < n; ++j) r -= std::pow(p.tau[j], k) / p.d[j] * alpha[j];
        rhs(k - 1) = r;
        for (int j = 0; j < ell; ++j) a(k - 1, j) = std::pow(p.tau[j], k) / p.d[j];
    }
    std::vector<std::string> w;
    detail::condition_guard(a, warnings ? *warnings : w);
    Eigen::VectorXd sol = a.fullPivLu().solve(rhs);
    for (int j = 0; j < ell; ++j) alpha[j] = sol(j);
    return alpha;
}

/// Coupling with Gamma_0 = O(c^m) at c = 0 and a nonvanishing order-m coefficient.
///
/// Odd orders fix alpha (the first floor(m/2) entries are solved, the rest keep their
/// zero-root design values), even orders fix beta (beta_1 = 1, later entries solved).
inline Design design_gamma_degeneracy(const SystemParams& p, int m) {
    int n = p.n_slow;
    if (m < 0) throw DomainError("order must be non-negative");
    if (m > 2 * n + 1)
        throw DomainError("existence degeneracy of order " + std::to_string(m) + " exceeds the maximum 2N+1 = " +
                          std::to_string(2 * n + 1));
    if (!p.pairwise_distinct_ratio()) throw DomainError("tau_j/d_j ratios are not pairwise distinct");
    Design out{p, Coupling(n)};
    Coupling& f = out.coupling;
    if (m == 0) {
        f.gamma = 1.0;
    } else if (m >= 2) {
        std::vector<double> r(n), r2(n);
        for (int j = 0; j < n; ++j) {
            r[j] = p.ratio(j);
            r2[j] = r[j] * r[j];
        }
        int n_odd = m / 2, n_even = (m - 1) / 2;
        // default alpha: zero-root design if possible, else the maximal existence design
        std::vector<double> alpha;
        if (p.pairwise_distinct_tau()) {
            alpha = design_evans_degeneracy(p, n);
        } else {
            auto x = vandermonde_solve(r2, 2 * sqrt2 / 3);
            for (int j = 0; j < n; ++j) alpha.push_back(x[j] / r[j]);
        }
        auto solve_odd = [&](std::vector<double> a) {
            if (n_odd == n) {
                auto x = vandermonde_solve(r2, 2 * sqrt2 / 3);
                for (int j = 0; j < n; ++j) a[j] = x[j] / r[j];
            } else if (n_odd > 0) {
                Eigen::MatrixXd m_(n_odd, n_odd);
                Eigen::VectorXd rhs(n_odd);
                for (int k = 1; k <= n_odd; ++k) {
                    double rr = (k == 1) ? 2 * sqrt2 / 3 : 0.0;
                    for (int j = n_odd; j < n; ++j) rr -= std::pow(r[j], 2 * k - 1) * a[j];
                    rhs(k - 1) = rr;
                    for (int j = 0; j < n_odd; ++j) m_(k - 1, j) = std::pow(r[j], 2 * k - 1);
                }
                detail::condition_guard(m_, out.warnings);
                Eigen::VectorXd s = m_.fullPivLu().solve(rhs);
                for (int j = 0; j < n_odd; ++j) a[j] = s(j);
            }
            return a;
        };
        alpha = solve_odd(alpha);
        if (m % 2 && n_odd < n) {
            // the default free entries can cancel order m as well (tau_j proportional to d_j^2)
            Coupling probe(n);
            probe.alpha = alpha;
            if (!(std::abs(gamma0_taylor(p, probe, m)[m]) > 1e-10)) {
                std::vector<double> zero(n, 0.0);
                alpha = solve_odd(zero);
                out.warnings.push_back("free alpha entries reset to zero: the zero-root design also cancels order " +
                                       std::to_string(m));
            }
        }
        f.alpha = alpha;
        // beta: sum beta_j r_j^(2k) = 0 for k = 1..n_even
        if (n_even < n) {
            bool done = false;
            for (int lead = 0; lead + n_even < n && !done; ++lead) {
                std::vector<double> beta(n, 0.0);
                beta[lead] = 1.0;
                if (n_even == 0) {
                    f.beta = beta;
                    done = true;
                    break;
                }
                Eigen::MatrixXd a(n_even, n_even);
                Eigen::VectorXd rhs(n_even);
                for (int k = 1; k <= n_even; ++k) {
                    rhs(k - 1) = -std::pow(r[lead], 2 * k);
                    for (int i = 0; i < n_even; ++i) a(k - 1, i) = std::pow(r[lead + 1 + i], 2 * k);
                }
                Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
                if (!lu.isInvertible()) continue;
                detail::condition_guard(a, out.warnings);
                Eigen::VectorXd s = lu.solve(rhs);
                for (int i = 0; i < n_even; ++i) beta[lead + 1 + i] = s(i);
                f.beta = beta;
                done = true;
            }
            if (!done) throw DomainError("no admissible normalisation of the quadratic null space");
        }
    }
    PowerSeries t = gamma0_taylor(p, f, m + 1);
    if (!(std::abs(t[m]) > 1e-10))
        throw DomainError("designed coupling has an unexpectedly vanishing order-" + std::to_string(m) +
                          " coefficient");
    return out;
}

/// Simultaneous maximal existence and zero-root degeneracy via tau_j = tau_1 d_j^2/d_1^2.
inline Design design_simultaneous(const std::vector<double>& d, double tau1, double epsilon = 0.05) {
    int n = int(d.size());
    if (n < 1) throw DomainError("need at least one slow component");
    if (!(tau1 > 0)) throw DomainError("tau1 must be positive");
    std::vector<double> d2(n);
    for (int j = 0; j < n; ++j) d2[j] = d[j] * d[j];
    if (!SystemParams::distinct(d2)) throw DomainError("d values must be pairwise distinct");
    std::vector<double> tau(n);
    for (int j = 0; j < n; ++j) tau[j] = tau1 * d2[j] / d2[0];
    Design out{SystemParams(n, epsilon, tau, d), Coupling(n)};
    auto x = vandermonde_solve(d2, 2 * sqrt2 / 3);
    for (int j = 0; j < n; ++j) out.coupling.alpha[j] = x[j] * d2[0] / (tau1 * d[j]);
    out.singular_limit_only = true;
    return out;
}

/// Univariate coupling (N = 1) whose Gamma_0 Taylor coefficients equal the target.
inline Coupling imprint_scalar_singularity(const SystemParams& p, const std::vector<double>& target) {
    if (p.n_slow != 1) throw DomainError("imprinting requires n_slow = 1");
    if (target.empty()) throw DomainError("empty target");
    double r = p.tau[0] / (2 * p.d[0]);
    if (std::abs(r - kAC) < 1e-10)
        throw DomainError("tau_1/(2 d_1) equals sqrt(2)/3: the linear order is not controllable; vary tau_1 as well");
    int order = int(target.size()) - 1;
    PowerSeries s = series_vstar(p, 0, std::max(order, 1));
    std::vector<PowerSeries> powers{PowerSeries::constant(1.0, s.order())};
    for (int k = 1; k <= order; ++k) powers.push_back(powers.back() * s);
    std::vector<double> coef(order + 1, 0.0);
    for (int k = 0; k <= order; ++k) {
        double rhs = target[k] + (k == 1 ? kAC : 0.0);
        for (int i = 0; i < k; ++i) rhs -= coef[i] * powers[i][k];
        coef[k] = rhs / powers[k][k];
    }
    Coupling f(1);
    f.gamma = coef[0];
    if (order >= 1) f.alpha[0] = coef[1];
    if (order >= 2) f.beta[0] = coef[2];
    for (int k = 3; k <= order; ++k) f.higher.push_back(coef[k]);
    return f;
}

/// Coefficients e_0..e_{count-1} of E_0(lambda)/lambda at c = 0.
inline std::vector<double> evans_reduced_coefficients(const SystemParams& p, const std::vector<double>& alpha,
                                                      int count) {
    Coupling f(p.n_slow);
    f.alpha = alpha;
    PowerSeries t = evans_taylor_c0(p, f, count);
    std::vector<double> e(count);
    for (int i = 0; i < count; ++i) e[i] = t[i + 1];
    return e;
}

/// Weierstrass coefficients (a_1..a_n) of lambda^n - a_n lambda^(n-1) - ... - a_1 for the
/// perturbed small Evans roots, with the triangular factor frozen at the degenerate base point.
inline std::vector<double> weierstrass_from_alpha(const SystemParams& p, const std::vector<double>& base_alpha,
                                                  const std::vector<double>& alpha, int n) {
    auto eb = evans_reduced_coefficients(p, base_alpha, 2 * n);
    auto e = evans_reduced_coefficients(p, alpha, n);
    if (std::abs(eb[n]) < 1e-10) throw DomainError("degenerate base point: leading coefficient e_N vanishes");
    // e_i = -sum_{k<=i} a_{k+1} b_{i-k}, b_i = eb[n+i]
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) {
        double s = -e[i];
        for (int k = 0; k < i; ++k) s -= a[k] * eb[n + i - k];
        a[i] = s / eb[n];
    }
    return a;
}

inline std::vector<double> linear_unfolding_map(const SystemParams& p, const std::vector<double>& delta_alpha) {
    int n = p.n_slow;
    if (int(delta_alpha.size()) != n) throw DomainError("perturbation has wrong length");
    auto base = design_evans_degeneracy(p, n);
    std::vector<double> alpha(n);
    for (int j = 0; j < n; ++j) alpha[j] = base[j] + delta_alpha[j];
    return weierstrass_from_alpha(p, base, alpha, n);
}

/// Roots of lambda^n - a_n lambda^(n-1) - ... - a_1.
inline std::vector<std::complex<double>> weierstrass_roots(const std::vector<double>& a) {
    int n = int(a.size());
    if (n == 0) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) comp(i, i + 1) = 1.0;
    for (int k = 0; k < n; ++k) comp(n - 1, k) = a[k];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<std::complex<double>> r;
    for (int i = 0; i < n; ++i) r.push_back(es.eigenvalues()(i));
    return r;
}

}  // namespace frontlab
