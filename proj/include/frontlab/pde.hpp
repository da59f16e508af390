#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/core.hpp"
#include "frontlab/existence.hpp"
#include "frontlab/jordan.hpp"

namespace frontlab {

/// Uniform grid on [-L, L] with homogeneous Neumann boundaries.
struct Grid {
    double L = 20;
    int n = 1001;
    double h = 0.04;
    std::vector<double> x;
    std::vector<std::string> warnings;

    Grid() = default;
    Grid(double half_length, int nodes, double epsilon = 0, bool allow_coarse = false) : L(half_length), n(nodes) {
        if (n < 3) throw DomainError("grid needs at least 3 nodes");
        if (!(L > 0)) throw DomainError("domain half length must be positive");
        h = 2 * L / (n - 1);
        if (epsilon > 0 && h > epsilon / 2) {
            std::string msg = "grid spacing " + std::to_string(h) + " exceeds epsilon/2 = " + std::to_string(epsilon / 2);
            if (!allow_coarse) throw DomainError(msg);
            warnings.push_back(msg);
        }
        x.resize(n);
        for (int i = 0; i < n; ++i) x[i] = -L + h * i;
        x[(n - 1) / 2] = (n % 2) ? 0.0 : x[(n - 1) / 2];
    }

    /// Smallest odd node count with spacing at most hmax.
    static int nodes_for(double half_length, double hmax) {
        int n = int(std::ceil(2 * half_length / hmax)) + 1;
        return n % 2 ? n : n + 1;
    }
};

struct PdeModel {
    SystemParams params;
    Coupling coupling;
    Grid grid;

    int fields() const { return params.n_slow + 1; }
};

struct PdeState {
    double t = 0;
    std::vector<double> u;
    std::vector<std::vector<double>> v;
};

namespace detail {

/// Solves (I - a*Lap - b*D1) w = rhs with the Neumann mirror closure (Thomas algorithm).
inline void solve_implicit(double a, double b, double h, std::vector<double>& w) {
    int n = int(w.size());
    double l = -a / (h * h) + b / (2 * h);  // coefficient of w_{i-1}
    double u = -a / (h * h) - b / (2 * h);  // coefficient of w_{i+1}
    double dg = 1 + 2 * a / (h * h);
    std::vector<double> cp(n), dp(n);
    // row 0: dg w0 - 2a/h^2 w1 (advection vanishes by symmetry)
    double c0 = -2 * a / (h * h);
    cp[0] = c0 / dg;
    dp[0] = w[0] / dg;
    for (int i = 1; i < n; ++i) {
        double li = (i == n - 1) ? -2 * a / (h * h) : l;
        double ui = (i == n - 1) ? 0.0 : u;
        double m = dg - li * cp[i - 1];
        cp[i] = ui / m;
        dp[i] = (w[i] - li * dp[i - 1]) / m;
    }
    w[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) w[i] = dp[i] - cp[i] * w[i + 1];
}

inline void laplacian(const std::vector<double>& w, double h, std::vector<double>& out) {
    int n = int(w.size());
    out.resize(n);
    double ih2 = 1 / (h * h);
    out[0] = 2 * (w[1] - w[0]) * ih2;
    out[n - 1] = 2 * (w[n - 2] - w[n - 1]) * ih2;
    for (int i = 1; i + 1 < n; ++i) out[i] = (w[i + 1] - 2 * w[i] + w[i - 1]) * ih2;
}

inline void gradient(const std::vector<double>& w, double h, std::vector<double>& out) {
    int n = int(w.size());
    out.assign(n, 0.0);
    for (int i = 1; i + 1 < n; ++i) out[i] = (w[i + 1] - w[i - 1]) / (2 * h);
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace detail

/// Reaction terms: U - U^3 - eps F(V) and eps^2 (U - V_j) / tau_j.
inline void reaction(const PdeModel& m, const PdeState& s, std::vector<double>& ru, std::vector<std::vector<double>>& rv) {
    const auto& p = m.params;
    int n = m.grid.n, ns = p.n_slow;
    double eps = p.epsilon, e2 = eps * eps;
    ru.resize(n);
    rv.assign(ns, std::vector<double>(n));
    std::vector<double> vv(ns);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < ns; ++j) vv[j] = s.v[j][i];
        double u = s.u[i];
        ru[i] = u - u * u * u - eps * eval_coupling(m.coupling, vv);
        for (int j = 0; j < ns; ++j) rv[j][i] = e2 * (u - vv[j]) / p.tau[j];
    }
}

enum class Scheme { IMEX1, Strang };

struct StepOptions {
    Scheme scheme = Scheme::IMEX1;
    double advection = 0;  // comoving-frame speed s (lab units)
};

inline double max_stable_dt(const SystemParams& p) {
    return 0.5 / std::max(2.0, p.epsilon * p.epsilon / p.tau_min());
}

namespace detail {

inline void imex_substep(const PdeModel& m, PdeState& s, double dt, const StepOptions& o) {
    const auto& p = m.params;
    double e2 = p.epsilon * p.epsilon, h = m.grid.h;
    std::vector<double> ru;
    std::vector<std::vector<double>> rv;
    if (o.scheme == Scheme::IMEX1) {
        reaction(m, s, ru, rv);
        for (size_t i = 0; i < s.u.size(); ++i) s.u[i] += dt * ru[i];
        solve_implicit(dt * e2, dt * o.advection, h, s.u);
        for (int j = 0; j < p.n_slow; ++j) {
            for (size_t i = 0; i < s.u.size(); ++i) s.v[j][i] += dt * rv[j][i];
            solve_implicit(dt * e2 * p.d[j] * p.d[j] / p.tau[j], dt * o.advection, h, s.v[j]);
        }
        return;
    }
    // Strang: half reaction (Heun), Crank-Nicolson transport, half reaction
    auto half_reaction = [&](double tau) {
        std::vector<double> ru1, ru2;
        std::vector<std::vector<double>> rv1, rv2;
        reaction(m, s, ru1, rv1);
        PdeState pr = s;
        for (size_t i = 0; i < s.u.size(); ++i) pr.u[i] += tau * ru1[i];
        for (int j = 0; j < p.n_slow; ++j)
            for (size_t i = 0; i < s.u.size(); ++i) pr.v[j][i] += tau * rv1[j][i];
        reaction(m, pr, ru2, rv2);
        for (size_t i = 0; i < s.u.size(); ++i) s.u[i] += 0.5 * tau * (ru1[i] + ru2[i]);
        for (int j = 0; j < p.n_slow; ++j)
            for (size_t i = 0; i < s.u.size(); ++i) s.v[j][i] += 0.5 * tau * (rv1[j][i] + rv2[j][i]);
    };
    auto cn = [&](std::vector<double>& w, double dcoef) {
        std::vector<double> lap, grd;
        laplacian(w, h, lap);
        gradient(w, h, grd);
        for (size_t i = 0; i < w.size(); ++i) w[i] += 0.5 * dt * (dcoef * lap[i] + o.advection * grd[i]);
        solve_implicit(0.5 * dt * dcoef, 0.5 * dt * o.advection, h, w);
    };
    half_reaction(0.5 * dt);
    cn(s.u, e2);
    for (int j = 0; j < p.n_slow; ++j) cn(s.v[j], e2 * p.d[j] * p.d[j] / p.tau[j]);
    half_reaction(0.5 * dt);
}

}  // namespace detail

/// Advances by dt, splitting into substeps when dt exceeds the explicit-reaction limit.
inline PdeState step(const PdeModel& m, const PdeState& s, double dt, const StepOptions& o = {}) {
    if (!(dt > 0)) throw DomainError("dt must be positive");
    double lim = max_stable_dt(m.params);
    int sub = std::max(1, int(std::ceil(dt / lim - 1e-12)));
    PdeState out = s;
    for (int k = 0; k < sub; ++k) detail::imex_substep(m, out, dt / sub, o);
    out.t = s.t + dt;
    return out;
}

/// Linear interpolation of the sign changes of U; returns all crossings.
inline std::vector<double> zero_crossings(const Grid& g, const std::vector<double>& u) {
    std::vector<double> z;
    for (int i = 0; i + 1 < g.n; ++i) {
        if (u[i] == 0) z.push_back(g.x[i]);
        else if (u[i] * u[i + 1] < 0) z.push_back(g.x[i] - u[i] * (g.x[i + 1] - g.x[i]) / (u[i + 1] - u[i]));
    }
    if (u[g.n - 1] == 0) z.push_back(g.x[g.n - 1]);
    return z;
}

/// Samples the leading-order front profile (centre x0) on the grid; U uses the tanh layer everywhere.
inline PdeState state_from_profile(const PdeModel& m, const FrontProfile& fp, double x0 = 0) {
    PdeState s;
    int n = m.grid.n;
    s.u.resize(n);
    s.v.assign(m.params.n_slow, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        double y = m.grid.x[i] - x0;
        s.u[i] = std::tanh(y / (sqrt2 * m.params.epsilon));
        for (int j = 0; j < m.params.n_slow; ++j) s.v[j][i] = fp.v(j, y);
    }
    return s;
}

struct Perturbation {
    std::string mode = "none";  // none | bump | chain
    double amplitude = 0;
    double width = 1;
    double center = 0;
    int k = 1;  // chain index
};

inline void apply_perturbation(const PdeModel& m, PdeState& s, const Perturbation& pert) {
    if (pert.mode == "none" || pert.amplitude == 0) return;
    const auto& p = m.params;
    if (pert.mode == "bump") {
        for (int i = 0; i < m.grid.n; ++i) {
            double y = (m.grid.x[i] - pert.center) / pert.width;
            s.u[i] += pert.amplitude * std::exp(-y * y);
        }
        return;
    }
    if (pert.mode == "chain") {
        // slow-field shape of the k-th chain element, used as a direction only
        for (int j = 0; j < p.n_slow; ++j) {
            JordanPolynomial jp = jordan_poly(pert.k, p.tau[j], p.d[j]);
            for (int i = 0; i < m.grid.n; ++i) {
                double x = (m.grid.x[i] - pert.center) / p.d[j];
                s.v[j][i] += pert.amplitude * (x >= 0 ? jp.plus(x) : jp.minus(x));
            }
        }
        return;
    }
    throw DomainError("unknown perturbation mode: " + pert.mode);
}

struct SimSample {
    double t, position, speed, umin, umax, vmin, vmax;
    bool trapped;
};

struct SimOptions {
    double dt = 0.01;
    int output_stride = 100;
    bool freeze = true;
    double trap_radius = 1.5;
    StepOptions step{};
};

struct SimResult {
    std::vector<SimSample> series;
    PdeState final_state;
    double shift = 0;  // accumulated frame displacement
    bool aborted = false;
    std::string message;
    std::vector<std::string> diagnostics;
};

/// Time integration with instantaneous-speed extraction by projecting the step increment on U_x.
inline SimResult simulate(const PdeModel& m, const PdeState& initial, double t_end, const SimOptions& o = {}) {
    const Grid& g = m.grid;
    auto zc = zero_crossings(g, initial.u);
    if (zc.size() != 1) throw DomainError("initial U must have exactly one sign change");
    SimResult r;
    PdeState s = initial;
    double margin = 2 * std::sqrt(m.params.epsilon);
    long nsteps = long(std::ceil(t_end / o.dt - 1e-9));
    std::vector<double> ux;
    bool trap_flag_reported = false;
    auto record = [&](double speed) {
        SimSample smp{s.t, 0, speed, 1e300, -1e300, 1e300, -1e300, true};
        auto z = zero_crossings(g, s.u);
        smp.position = (z.empty() ? NAN : z[0]) + r.shift;
        for (double u : s.u) {
            smp.umin = std::min(smp.umin, u);
            smp.umax = std::max(smp.umax, u);
        }
        for (auto& vj : s.v)
            for (double v : vj) {
                smp.vmin = std::min(smp.vmin, v);
                smp.vmax = std::max(smp.vmax, v);
            }
        double bound = std::max({-smp.umin, smp.umax, -smp.vmin, smp.vmax});
        smp.trapped = bound <= o.trap_radius;
        if (!smp.trapped && !trap_flag_reported) {
            r.diagnostics.push_back("state left the trapping box at t = " + std::to_string(s.t));
            trap_flag_reported = true;
        }
        r.series.push_back(smp);
    };
    double speed = 0;
    record(0.0);
    for (long k = 1; k <= nsteps; ++k) {
        double dt = std::min(o.dt, t_end - s.t);
        if (dt <= 0) break;
        detail::gradient(s.u, g.h, ux);
        double nrm = detail::dot(ux, ux);
        PdeState pred = step(m, s, dt, o.step);
        std::vector<double> du(g.n);
        for (int i = 0; i < g.n; ++i) du[i] = (pred.u[i] - s.u[i]) / dt;
        // lab-frame speed: U_t = -speed * U_x for a translating profile
        speed = nrm > 0 ? -detail::dot(ux, du) / nrm : 0.0;
        if (o.freeze) {
            StepOptions so = o.step;
            so.advection = speed;
            s = step(m, s, dt, so);
            r.shift += speed * dt;
        } else {
            s = pred;
        }
        auto z = zero_crossings(g, s.u);
        if (z.empty() || z.front() < -g.L + margin || z.back() > g.L - margin) {
            record(speed);
            r.aborted = true;
            r.message = "front reached the boundary layer at t = " + std::to_string(s.t);
            break;
        }
        if (k % o.output_stride == 0 || k == nsteps) record(speed);
    }
    r.final_state = s;
    return r;
}

}  // namespace frontlab
