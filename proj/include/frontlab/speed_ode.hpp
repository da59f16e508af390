#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/designer.hpp"
#include "frontlab/existence.hpp"
#include "frontlab/ode.hpp"
#include "frontlab/parallel.hpp"

namespace frontlab {

/// c_k' = eps^2 c_{k+1} (k < N'), c_N'' = eps^2 (a0 + sum a_j c_j + c_1 sum a1_j c_j).
struct SpeedODE {
    int n_prime = 1;
    double a0 = 0;
    std::vector<double> a_lin{0.0};
    std::vector<double> a_quad{0.0};
    double epsilon = 1.0;
    std::vector<std::string> provenance;  // "analysis" or "default" per coefficient group

    SpeedODE() = default;
    SpeedODE(int n, double a0_, std::vector<double> lin, std::vector<double> quad, double eps)
        : n_prime(n), a0(a0_), a_lin(std::move(lin)), a_quad(std::move(quad)), epsilon(eps) {
        if (n < 1 || int(a_lin.size()) != n || int(a_quad.size()) != n)
            throw DomainError("speed ODE coefficient vectors must have length n_prime");
    }

    int dim() const { return n_prime; }

    double g(const State& c) const {
        double s = a0, q = 0;
        for (int j = 0; j < n_prime; ++j) {
            s += a_lin[j] * c[j];
            q += a_quad[j] * c[j];
        }
        return s + c[0] * q;
    }
    void rhs(const State& c, State& dc) const {
        double e2 = epsilon * epsilon;
        for (int k = 0; k + 1 < n_prime; ++k) dc[k] = e2 * c[k + 1];
        dc[n_prime - 1] = e2 * g(c);
    }
    Eigen::MatrixXd jacobian(const State& c) const {
        double e2 = epsilon * epsilon;
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n_prime, n_prime);
        for (int k = 0; k + 1 < n_prime; ++k) j(k, k + 1) = e2;
        double q = 0;
        for (int m = 0; m < n_prime; ++m) q += a_quad[m] * c[m];
        for (int m = 0; m < n_prime; ++m) j(n_prime - 1, m) = e2 * (a_lin[m] + a_quad[m] * c[0]);
        j(n_prime - 1, 0) += e2 * q;
        return j;
    }
    VectorField field() const {
        return [this](double, const State& y, State& dy) { rhs(y, dy); };
    }
};

/// z1' = z2, z2' = z3, z3' = nu0 + nu . z + a11 z1^2 + a12 delta z1 z2.
struct ScaledNF {
    double nu0 = 0;
    std::array<double, 3> nu{0, 0, 0};
    double a11 = 1, a12 = 0, delta = 0;

    /// Normal form with (constant, z2, z3) coefficients (lbar, mbar, nbar), optionally scaled to unit norm.
    static ScaledNF from_normal_form(double lbar, double mbar, double nbar, double a11, bool normalize = true) {
        ScaledNF nf;
        double s = normalize ? std::sqrt(lbar * lbar + mbar * mbar + nbar * nbar) : 1.0;
        if (s == 0) throw DomainError("cannot normalize a zero coefficient vector");
        nf.nu0 = lbar / s;
        nf.nu = {0, mbar / s, nbar / s};
        nf.a11 = a11;
        return nf;
    }

    int dim() const { return 3; }
    void rhs(const State& z, State& dz) const {
        dz[0] = z[1];
        dz[1] = z[2];
        dz[2] = nu0 + nu[0] * z[0] + nu[1] * z[1] + nu[2] * z[2] + a11 * z[0] * z[0] + a12 * delta * z[0] * z[1];
    }
    Eigen::MatrixXd jacobian(const State& z) const {
        Eigen::MatrixXd j = Eigen::MatrixXd::Zero(3, 3);
        j(0, 1) = 1;
        j(1, 2) = 1;
        j(2, 0) = nu[0] + 2 * a11 * z[0] + a12 * delta * z[1];
        j(2, 1) = nu[1] + a12 * delta * z[0];
        j(2, 2) = nu[2];
        return j;
    }
    VectorField field() const {
        return [this](double, const State& y, State& dy) { rhs(y, dy); };
    }
    /// Constant and z2-coefficient after shifting the linear z1 term away.
    std::pair<double, double> shifted_lambda_mu() const {
        if (a11 == 0) return {nu0, nu[1]};
        double s = -nu[0] / (2 * a11);
        return {nu0 + nu[0] * s + a11 * s * s, nu[1] + a12 * delta * s};
    }
    /// Equivalent speed ODE with the scaling c_k = delta^(N'+k-1) z_k, T = eps^2 delta t.
    SpeedODE unscaled(double eps) const {
        double d = delta;
        SpeedODE o(3, std::pow(d, 6) * nu0, {std::pow(d, 3) * nu[0], d * d * nu[1], d * nu[2]},
                   {a11, a12, 0.0}, eps);
        return o;
    }
};

/// Scale making the linear coefficient of the speed ODE equal h times that of Gamma_0.
inline double natural_scale(const SystemParams& p, int n_prime = -1) {
    int n = n_prime < 0 ? p.n_slow : n_prime;
    auto base = design_evans_degeneracy(p, n);
    auto eb = evans_reduced_coefficients(p, base, 2 * n);
    return 3.0 / (sqrt2 * eb[n]);
}

/// Leading-order speed ODE near a zero-root degeneracy.
inline SpeedODE build_from_analysis(const SystemParams& p, const Coupling& f, int n_prime, double h) {
    if (n_prime < 1 || n_prime > p.n_slow) throw DomainError("n_prime must satisfy 1 <= n_prime <= N");
    if (h == 0 || !std::isfinite(h)) throw DomainError("scale h must be finite and non-zero");
    f.validate(p.n_slow);
    std::optional<std::vector<double>> fixed;
    if (n_prime < p.n_slow) fixed = f.alpha;
    auto base = design_evans_degeneracy(p, n_prime, fixed);
    auto a_lin = weierstrass_from_alpha(p, base, f.alpha, n_prime);
    PowerSeries t = gamma0_taylor(p, f, 2);
    std::vector<double> quad(n_prime, 0.0);
    quad[0] = h * t[2];
    SpeedODE o(n_prime, h * t[0], a_lin, quad, p.epsilon);
    o.provenance = {"a0:analysis", "a_lin:analysis", "a11:analysis", "a1j(j>=2):default"};
    return o;
}

struct Equilibrium {
    State point;
    std::vector<std::complex<double>> eigenvalues;
    std::string type;
};

inline std::string classify(const std::vector<std::complex<double>>& ev, double tol = 1e-12) {
    int u = 0, s = 0;
    double scale = 0;
    for (auto& z : ev) scale = std::max(scale, std::abs(z));
    double thr = tol * std::max(1.0, scale);
    bool complex_stable = false, complex_unstable = false;
    for (auto& z : ev) {
        if (z.real() > thr) {
            ++u;
            if (std::abs(z.imag()) > thr) complex_unstable = true;
        } else if (z.real() < -thr) {
            ++s;
            if (std::abs(z.imag()) > thr) complex_stable = true;
        } else {
            return "nonhyperbolic";
        }
    }
    int n = int(ev.size());
    if (s == n) return "sink";
    if (u == n) return "source";
    if (n == 3 && u == 1 && s == 2 && complex_stable) return "saddle-focus(1u,2s)";
    if (n == 3 && u == 2 && s == 1 && complex_unstable) return "saddle-focus(2u,1s)";
    return "saddle";
}

inline std::vector<std::complex<double>> eigenvalues_of(const Eigen::MatrixXd& j) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(j, false);
    std::vector<std::complex<double>> ev;
    for (int i = 0; i < j.rows(); ++i) ev.push_back(es.eigenvalues()(i));
    std::sort(ev.begin(), ev.end(), [](auto& a, auto& b) {
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
    });
    return ev;
}

namespace detail {

inline std::vector<double> real_quadratic_roots(double c0, double c1, double c2) {
    std::vector<double> r;
    if (c2 == 0) {
        if (c1 != 0) r.push_back(-c0 / c1);
        return r;
    }
    double disc = c1 * c1 - 4 * c2 * c0;
    if (disc < 0) return r;
    double sq = std::sqrt(disc);
    double q = -0.5 * (c1 + std::copysign(sq, c1));
    if (q != 0) {
        r.push_back(q / c2);
        r.push_back(c0 / q);
    } else {
        r.push_back(0.0);
        r.push_back(0.0);
    }
    for (double& x : r) x += 0.0;  // no negative zero in reports
    std::sort(r.begin(), r.end());
    if (disc == 0) r.resize(1);
    return r;
}

}  // namespace detail

inline std::vector<Equilibrium> equilibria_and_classification(const SpeedODE& o) {
    std::vector<Equilibrium> out;
    for (double c : detail::real_quadratic_roots(o.a0, o.a_lin[0], o.a_quad[0])) {
        State pt(o.n_prime, 0.0);
        pt[0] = c;
        auto ev = eigenvalues_of(o.jacobian(pt));
        out.push_back({pt, ev, classify(ev)});
    }
    return out;
}

inline std::vector<Equilibrium> equilibria_and_classification(const ScaledNF& nf) {
    std::vector<Equilibrium> out;
    for (double z : detail::real_quadratic_roots(nf.nu0, nf.nu[0], nf.a11)) {
        State pt{z, 0, 0};
        auto ev = eigenvalues_of(nf.jacobian(pt));
        out.push_back({pt, ev, classify(ev)});
    }
    return out;
}

struct ShootSample {
    double nu3;
    bool valid = false;
    double miss = std::numeric_limits<double>::quiet_NaN();
    std::string status;
};

struct HomoclinicCandidate {
    double nu3;
    double miss;
    double saddle_quantity;
    double refined_miss;  // re-evaluated with a tighter integrator tolerance
};

/// Sign change of the miss functional that did not bisect to a zero.
struct RejectedBracket {
    double nu_lo, nu_hi;
    std::string reason;
};

struct ShootResult {
    std::vector<HomoclinicCandidate> candidates;
    std::vector<ShootSample> trace;
    std::vector<RejectedBracket> rejected;
};

struct ShootOptions {
    double tol = 1e-6;
    double seed = 1e-6;
    double integrator_tol = 1e-11;
    double t_max = 400;
    int seed_sign = 0;  // 0: branch heading toward the other equilibrium
};

/// Signed miss of the unstable manifold of the saddle-focus(1u,2s) equilibrium.
inline ShootSample shoot_once(ScaledNF nf, double nu3, const ShootOptions& opt) {
    nf.nu[2] = nu3;
    ShootSample s;
    s.nu3 = nu3;
    auto eq = equilibria_and_classification(nf);
    const Equilibrium* p = nullptr;
    const Equilibrium* q = nullptr;
    for (auto& e : eq)
        if (e.type == "saddle-focus(1u,2s)") p = &e;
    for (auto& e : eq)
        if (&e != p) q = &e;
    if (!p || !q) {
        s.status = "no saddle-focus(1u,2s) pair";
        return s;
    }
    Eigen::MatrixXd jac = nf.jacobian(p->point);
    Eigen::EigenSolver<Eigen::MatrixXd> es(jac);
    int iu = 0;
    for (int i = 1; i < 3; ++i)
        if (es.eigenvalues()(i).real() > es.eigenvalues()(iu).real()) iu = i;
    Eigen::Vector3d vu = es.eigenvectors().col(iu).real().normalized();
    Eigen::Matrix3cd vinv = es.eigenvectors().inverse();
    Eigen::Vector3d pz(p->point[0], p->point[1], p->point[2]);
    Eigen::Vector3d qz(q->point[0], q->point[1], q->point[2]);
    Eigen::Vector3d normal = (pz - qz).normalized();
    Eigen::Vector3d mid = 0.5 * (pz + qz);
    int sign = opt.seed_sign;
    if (sign == 0) sign = vu.dot(qz - pz) > 0 ? 1 : -1;
    State y0(3);
    for (int i = 0; i < 3; ++i) y0[i] = pz(i) + sign * opt.seed * vu(i);
    double radius = 10 * std::max(1.0, std::abs(p->point[0]));
    auto side = [&](const State& y) { return (Eigen::Vector3d(y[0], y[1], y[2]) - mid).dot(normal); };
    auto unstable_coord = [&](const State& y) {
        Eigen::Vector3cd dz(y[0] - pz(0), y[1] - pz(1), y[2] - pz(2));
        return (vinv.row(iu) * dz)(0).real();
    };
    int crossings = 0;
    double best = std::numeric_limits<double>::infinity(), best_u = 0;
    bool escaped = false;
    IntegrateOptions io;
    io.rtol = io.atol = opt.integrator_tol;
    io.record = false;
    io.blowup = 1e6;
    auto observer = [&](const DenseStep& st) {
        State y1 = st.eval(st.t0 + st.h);
        Eigen::Vector3d z(y1[0], y1[1], y1[2]);
        if ((z - pz).norm() > radius && (z - qz).norm() > radius) {
            escaped = true;
            return true;
        }
        double s0 = side(st.y0), s1 = side(y1);
        if ((s0 > 0 && s1 <= 0) || (s0 < 0 && s1 >= 0)) ++crossings;
        if (crossings >= 3) return true;  // heading back toward the other equilibrium
        if (crossings == 2) {
            // closest approach to P after the return; sample the step densely
            for (int m = 1; m <= 8; ++m) {
                State ym = st.eval(st.t0 + st.h * m / 8.0);
                double dist = (Eigen::Vector3d(ym[0], ym[1], ym[2]) - pz).norm();
                if (dist < best) {
                    best = dist;
                    best_u = unstable_coord(ym);
                }
            }
            if ((z - pz).norm() > 3 * best + 0.5 * (pz - qz).norm()) return true;
        }
        return false;
    };
    auto tr = integrate(nf.field(), y0, 0.0, opt.t_max, io, observer);
    if (escaped && crossings < 2) {
        s.status = "escaped before returning";
        return s;
    }
    if (crossings < 2) {
        s.status = tr.blew_up ? "blow-up" : "no return within time horizon";
        return s;
    }
    s.valid = true;
    s.miss = best_u;
    s.status = "ok";
    return s;
}

inline double saddle_quantity(const ScaledNF& nf) {
    for (auto& e : equilibria_and_classification(nf)) {
        if (e.type != "saddle-focus(1u,2s)") continue;
        double ru = 0, rs = 0;
        for (auto& z : e.eigenvalues) {
            if (z.real() > 0) ru = z.real();
            else if (std::abs(z.imag()) > 0) rs = z.real();
        }
        return -rs / ru;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

/// Sweep the z3-coefficient and bisect sign changes of the miss functional.
inline ShootResult shilnikov_shoot(const ScaledNF& nf, double nu_min, double nu_max, int steps,
                                   const ShootOptions& opt = {}) {
    auto [lbar, mbar] = nf.shifted_lambda_mu();
    if (!(nf.a11 * lbar < 0))
        throw DomainError("necessary condition a11*lambda_bar < 0 violated (no saddle-focus pair)");
    if (!(mbar < 0)) throw DomainError("necessary condition mu_bar < 0 violated");
    if (steps < 2) throw DomainError("need at least two sweep points");
    ShootResult res;
    std::vector<double> grid(steps);
    for (int i = 0; i < steps; ++i) grid[i] = nu_min + (nu_max - nu_min) * i / (steps - 1);
    res.trace = parallel_map<ShootSample>(steps, [&](int i) { return shoot_once(nf, grid[i], opt); });
    for (int i = 0; i + 1 < steps; ++i) {
        const auto& a = res.trace[i];
        const auto& b = res.trace[i + 1];
        if (!a.valid || !b.valid || a.miss * b.miss > 0) continue;
        double lo = a.nu3, hi = b.nu3, mlo = a.miss;
        ShootSample mid = a;
        for (int it = 0; it < 60; ++it) {
            mid = shoot_once(nf, 0.5 * (lo + hi), opt);
            if (!mid.valid) break;
            if (std::abs(mid.miss) < opt.tol && hi - lo < 1e-10) break;
            if ((mid.miss > 0) == (mlo > 0)) {
                lo = mid.nu3;
                mlo = mid.miss;
            } else {
                hi = mid.nu3;
            }
            if (hi - lo < 1e-13) break;
        }
        if (!mid.valid) {
            res.rejected.push_back({a.nu3, b.nu3, "invalid shot inside the bracket: " + mid.status});
            continue;
        }
        if (!(std::abs(mid.miss) < opt.tol)) {
            res.rejected.push_back({lo, hi, "jump in the miss functional (|miss| = " + std::to_string(std::abs(mid.miss)) + " at the bracket)"});
            continue;
        }
        ShootOptions fine = opt;
        fine.integrator_tol = opt.integrator_tol / 10;
        auto chk = shoot_once(nf, mid.nu3, fine);
        ScaledNF at = nf;
        at.nu[2] = mid.nu3;
        res.candidates.push_back({mid.nu3, mid.miss, saddle_quantity(at), chk.valid ? chk.miss : NAN});
    }
    return res;
}

struct LinearizedSystem {
    int n;
    VectorField f;
    std::function<Eigen::MatrixXd(const State&)> jac;
};

/// Largest Lyapunov exponent by tangent integration with periodic renormalisation.
inline double lyapunov_max(const LinearizedSystem& sys, State y0, double t_end, double renorm_interval,
                           double tol = 1e-10) {
    int n = sys.n;
    State y(2 * n);
    for (int i = 0; i < n; ++i) {
        y[i] = y0[i];
        y[n + i] = 1 + 0.1 * i;
    }
    double n0 = 0;
    for (int i = 0; i < n; ++i) n0 += y[n + i] * y[n + i];
    for (int i = 0; i < n; ++i) y[n + i] /= std::sqrt(n0);
    VectorField aug = [&](double t, const State& s, State& ds) {
        State x(s.begin(), s.begin() + n), fx(n);
        sys.f(t, x, fx);
        Eigen::MatrixXd j = sys.jac(x);
        for (int i = 0; i < n; ++i) {
            ds[i] = fx[i];
            double acc = 0;
            for (int k = 0; k < n; ++k) acc += j(i, k) * s[n + k];
            ds[n + i] = acc;
        }
    };
    IntegrateOptions io;
    io.rtol = io.atol = tol;
    io.record = false;
    double sum = 0, t = 0;
    while (t < t_end - 1e-12) {
        double t1 = std::min(t_end, t + renorm_interval);
        auto tr = integrate(aug, y, t, t1, io);
        if (tr.blew_up) throw DomainError("trajectory blew up during Lyapunov estimation");
        y = tr.y.back();
        double nrm = 0;
        for (int i = 0; i < n; ++i) nrm += y[n + i] * y[n + i];
        nrm = std::sqrt(nrm);
        if (nrm == 0) return -std::numeric_limits<double>::infinity();
        sum += std::log(nrm);
        for (int i = 0; i < n; ++i) y[n + i] /= nrm;
        t = t1;
    }
    return sum / t_end;
}

inline LinearizedSystem linearized(const SpeedODE& o) {
    return {o.n_prime, o.field(), [&o](const State& c) { return o.jacobian(c); }};
}
inline LinearizedSystem linearized(const ScaledNF& nf) {
    return {3, nf.field(), [&nf](const State& z) { return nf.jacobian(z); }};
}

}  // namespace frontlab
