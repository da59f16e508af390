#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "frontlab/core.hpp"

namespace frontlab {

/// Plateau value of slow component j for speed c.
inline double vstar(const SystemParams& p, int j, double c) {
    double t = p.tau[j], dj = p.d[j];
    return c * t / std::sqrt(4 * dj * dj + c * c * t * t);
}

inline std::vector<double> vstar(const SystemParams& p, double c) {
    std::vector<double> v(p.n_slow);
    for (int j = 0; j < p.n_slow; ++j) v[j] = vstar(p, j, c);
    return v;
}

inline double vstar_dc(const SystemParams& p, int j, double c) {
    double t = p.tau[j], dj = p.d[j];
    double q = 4 * dj * dj + c * c * t * t;
    return 4 * dj * dj * t / (q * std::sqrt(q));
}

/// Taylor series of V*_j around c0 in the offset h = c - c0.
inline PowerSeries vstar_series_at(const SystemParams& p, int j, double c0, int order) {
    double t = p.tau[j], dj = p.d[j];
    PowerSeries x = PowerSeries::variable(order, c0);
    PowerSeries q = (x * x * (t * t)).add_constant(4 * dj * dj);
    return x * t * q.pow(-0.5);
}

inline PowerSeries series_vstar(const SystemParams& p, int j, int order = kDefaultSeriesOrder) {
    if (j < 0 || j >= p.n_slow) throw DomainError("slow component index out of range");
    PowerSeries s = vstar_series_at(p, j, 0.0, order);
    s[0] = 0.0;
    for (int k = 0; k <= order; k += 2) s[k] = 0.0;  // exact oddness
    return s;
}

inline double gamma0(const SystemParams& p, const Coupling& f, double c) {
    return eval_coupling(f, vstar(p, c)) - kAC * c;
}

inline double gamma0_dc(const SystemParams& p, const Coupling& f, double c) {
    auto v = vstar(p, c);
    auto g = coupling_gradient(f, v);
    double s = -kAC;
    for (int j = 0; j < p.n_slow; ++j) s += g[j] * vstar_dc(p, j, c);
    return s;
}

/// Taylor series of Gamma_0 around c0.
inline PowerSeries gamma0_taylor_at(const SystemParams& p, const Coupling& f, double c0, int order) {
    f.validate(p.n_slow);
    PowerSeries r = PowerSeries::constant(0.0, order);
    for (int j = 0; j < p.n_slow; ++j) {
        PowerSeries s = vstar_series_at(p, j, c0, order);
        r += s.apply_polynomial(f.univariate(j));
    }
    r[0] -= kAC * c0;
    if (order >= 1) r[1] -= kAC;
    return r;
}

inline PowerSeries gamma0_taylor(const SystemParams& p, const Coupling& f, int order = kDefaultSeriesOrder) {
    f.validate(p.n_slow);
    PowerSeries r = PowerSeries::constant(0.0, order);
    for (int j = 0; j < p.n_slow; ++j) {
        PowerSeries s = series_vstar(p, j, order);
        r += PowerSeries(f.univariate(j)).compose(s);
    }
    if (order >= 1) r[1] -= kAC;
    return r;
}

struct GammaRoot {
    double c;
    int multiplicity;
};

struct GammaRootResult {
    std::vector<GammaRoot> roots;
    double lo, hi;
    double value_lo, value_hi;
};

/// Radius guaranteed to contain a root: the coupling is bounded on the plateau cube.
inline double default_root_radius(const Coupling& f) { return 3 * f.abs_sum() * 3 / sqrt2 + 1; }

namespace detail {

inline double coupling_scale(const Coupling& f) { return 1.0 + f.abs_sum(); }

inline int multiplicity_cap(const SystemParams& p, const Coupling& f) {
    return std::max(2 * p.n_slow + 1, f.degree() + 1);
}

/// Try to certify a root of multiplicity m near c0 by Newton on the (m-1)-th Taylor coefficient.
inline std::optional<double> certify_multiple(const SystemParams& p, const Coupling& f, double c0, int m,
                                              double tol, double radius) {
    double c = c0;
    int order = m + 1;
    for (int it = 0; it < 60; ++it) {
        PowerSeries t = gamma0_taylor_at(p, f, c, order);
        if (m == 1) {
            double g = t[0], dg = t[1];
            if (dg == 0) break;
            double step = g / dg;
            c -= step;
            if (std::abs(step) < 1e-15 * (1 + std::abs(c))) break;
        } else {
            double g = t[m - 1], dg = m * t[m];
            if (dg == 0) break;
            double step = g / dg;
            c -= step;
            if (std::abs(step) < 1e-15 * (1 + std::abs(c))) break;
        }
        if (std::abs(c - c0) > radius) return std::nullopt;
    }
    PowerSeries t = gamma0_taylor_at(p, f, c, order);
    double thr = 1e-8 * coupling_scale(f);
    if (std::abs(t[0]) > tol) return std::nullopt;
    for (int k = 1; k < m; ++k)
        if (std::abs(t[k]) > thr) return std::nullopt;
    return c;
}

inline int refine_root(const SystemParams& p, const Coupling& f, double& c, double tol, double radius) {
    int cap = multiplicity_cap(p, f);
    for (int m = cap; m >= 1; --m) {
        auto r = certify_multiple(p, f, c, m, tol, radius);
        if (r) {
            c = *r;
            return m;
        }
    }
    return 0;
}

}  // namespace detail

/// Real roots of Gamma_0 in [lo, hi], ascending, with multiplicity estimates.
inline GammaRootResult gamma0_roots(const SystemParams& p, const Coupling& f, double lo, double hi,
                                    double tol = 1e-12, double scan_step = 0.05) {
    if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("search interval must be bounded");
    if (!(tol > 0)) throw DomainError("tol must be positive");
    GammaRootResult out{{}, lo, hi, gamma0(p, f, lo), gamma0(p, f, hi)};
    int n = std::max(2, int(std::ceil((hi - lo) / scan_step)));
    std::vector<double> xs(n + 1), gs(n + 1);
    for (int i = 0; i <= n; ++i) {
        xs[i] = (i == n) ? hi : lo + (hi - lo) * double(i) / n;
        gs[i] = gamma0(p, f, xs[i]);
    }
    double h = (hi - lo) / n;
    std::vector<GammaRoot> found;
    auto add = [&](double c, int m) {
        for (auto& r : found)
            if (std::abs(r.c - c) < 1e-6 * (1 + std::abs(c))) {
                r.multiplicity = std::max(r.multiplicity, m);
                return;
            }
        found.push_back({c, m});
    };
    for (int i = 0; i < n; ++i) {
        double a = xs[i], b = xs[i + 1], ga = gs[i], gb = gs[i + 1];
        if (ga == 0) {
            double c = a;
            int m = detail::refine_root(p, f, c, tol, h);
            add(c, std::max(1, m));
            continue;
        }
        if (ga * gb > 0) continue;
        if (gb == 0) continue;  // handled at next node
        // bisection to a tight bracket, then Newton polish and multiplicity certification
        for (int it = 0; it < 200 && (b - a) > 1e-15 * (1 + std::abs(a)); ++it) {
            double m = 0.5 * (a + b), gm = gamma0(p, f, m);
            if (gm == 0) {
                a = b = m;
                break;
            }
            if ((gm > 0) == (ga > 0)) {
                a = m;
                ga = gm;
            } else {
                b = m;
            }
        }
        double c = 0.5 * (a + b);
        int m = detail::refine_root(p, f, c, tol, h);
        add(c, std::max(1, m));
    }
    if (gs[n] == 0) add(xs[n], 1);
    // even multiplicity: local minima of |Gamma_0| without a sign change
    for (int i = 1; i < n; ++i) {
        double a = std::abs(gs[i - 1]), b = std::abs(gs[i]), cc = std::abs(gs[i + 1]);
        if (!(b <= a && b <= cc)) continue;
        if (gs[i - 1] * gs[i] <= 0 || gs[i] * gs[i + 1] <= 0) continue;
        double c = xs[i];
        // minimise |Gamma_0| by Newton on the derivative
        for (int it = 0; it < 60; ++it) {
            PowerSeries t = gamma0_taylor_at(p, f, c, 3);
            if (t[2] == 0) break;
            double step = t[1] / (2 * t[2]);
            c -= step;
            if (std::abs(c - xs[i]) > 2 * h) break;
            if (std::abs(step) < 1e-15 * (1 + std::abs(c))) break;
        }
        if (std::abs(c - xs[i]) > 2 * h) continue;
        int m = detail::refine_root(p, f, c, tol, h);
        if (m >= 2) add(c, m);
    }
    std::sort(found.begin(), found.end(), [](auto& x, auto& y) { return x.c < y.c; });
    out.roots = found;
    return out;
}

inline GammaRootResult gamma0_roots(const SystemParams& p, const Coupling& f, double tol = 1e-12) {
    double r = default_root_radius(f);
    return gamma0_roots(p, f, -r, r, tol);
}

/// Leading-order front profile in the stretched variable y.
struct FrontProfile {
    double c = 0;
    double epsilon = 0.05;
    std::vector<double> v_star, lambda_plus, lambda_minus;
    bool residual_warning = false;

    double u(double y) const {
        double w = std::sqrt(epsilon);
        if (y < -w) return -1.0;
        if (y > w) return 1.0;
        return std::tanh(y / (sqrt2 * epsilon));
    }
    double v(int j, double y) const {
        double w = std::sqrt(epsilon);
        if (y < -w) return (v_star[j] + 1) * std::exp(lambda_plus[j] * y) - 1;
        if (y > w) return (v_star[j] - 1) * std::exp(lambda_minus[j] * y) + 1;
        return v_star[j];
    }
};

inline FrontProfile front_profile(const SystemParams& p, const Coupling& f, double c, double tol = 1e-8) {
    FrontProfile fp;
    fp.c = c;
    fp.epsilon = p.epsilon;
    fp.v_star = vstar(p, c);
    for (int j = 0; j < p.n_slow; ++j) {
        double t = p.tau[j], dj = p.d[j];
        double root = std::sqrt(4 * dj * dj + c * c * t * t);
        fp.lambda_plus.push_back((-c * t + root) / (2 * dj * dj));
        fp.lambda_minus.push_back((-c * t - root) / (2 * dj * dj));
    }
    fp.residual_warning = std::abs(gamma0(p, f, c)) > tol;
    return fp;
}

/// Identifies one coupling coefficient: gamma, alpha_j or beta_j.
struct ParamId {
    enum Kind { Gamma, Alpha, Beta } kind = Gamma;
    int index = 0;

    static ParamId parse(const std::string& s) {
        if (s == "gamma") return {Gamma, 0};
        auto num = [&](size_t pos) {
            try {
                size_t used = 0;
                int k = std::stoi(s.substr(pos), &used);
                if (used != s.size() - pos || k < 1) throw DomainError("");
                return k - 1;
            } catch (...) {
                throw DomainError("bad parameter name: " + s);
            }
        };
        if (s.rfind("alpha", 0) == 0) return {Alpha, num(5)};
        if (s.rfind("beta", 0) == 0) return {Beta, num(4)};
        throw DomainError("unknown parameter name: " + s);
    }
    std::string name() const {
        if (kind == Gamma) return "gamma";
        return (kind == Alpha ? "alpha" : "beta") + std::to_string(index + 1);
    }
    void check(int n) const {
        if (kind != Gamma && (index < 0 || index >= n)) throw DomainError("parameter index out of range: " + name());
    }
    double get(const Coupling& f) const {
        return kind == Gamma ? f.gamma : kind == Alpha ? f.alpha.at(index) : f.beta.at(index);
    }
    void set(Coupling& f, double x) const {
        if (kind == Gamma) f.gamma = x;
        else if (kind == Alpha) f.alpha.at(index) = x;
        else f.beta.at(index) = x;
    }
    /// d Gamma_0 / d(param) and its c-derivative at speed c.
    std::pair<double, double> basis(const SystemParams& p, double c) const {
        if (kind == Gamma) return {1.0, 0.0};
        double v = vstar(p, index, c), dv = vstar_dc(p, index, c);
        if (kind == Alpha) return {v, dv};
        return {v * v, 2 * v * dv};
    }
};

struct FoldPoint {
    double x, y, c;
};
using FoldPolyline = std::vector<FoldPoint>;

struct FoldBox {
    double xmin, xmax, ymin, ymax;
    int nx = 200, ny = 200;
};

/// Fold set {Gamma_0 = 0, dGamma_0/dc = 0} in a two-parameter plane, traced in c.
///
/// Gamma_0 is affine in every coupling coefficient, so for fixed c the fold conditions
/// are a 2x2 linear system in the plane coordinates; Newton therefore converges in one step.
inline std::vector<FoldPolyline> fold_curves(const SystemParams& p, const Coupling& tmpl, ParamId px, ParamId py,
                                             const FoldBox& box, double tol = 1e-10) {
    px.check(p.n_slow);
    py.check(p.n_slow);
    if (px.kind == py.kind && px.index == py.index) throw DomainError("plane parameters must differ");
    double rmax = 0;
    for (int j = 0; j < p.n_slow; ++j) rmax = std::max(rmax, p.d[j] / p.tau[j]);
    double cmax = 60 * rmax;
    double res = std::hypot(box.xmax - box.xmin, box.ymax - box.ymin) / std::max(box.nx, box.ny);

    auto solve = [&](double c, double& x, double& y) -> bool {
        Coupling f = tmpl;
        x = px.get(f);
        y = py.get(f);
        for (int it = 0; it < 4; ++it) {
            px.set(f, x);
            py.set(f, y);
            double g = gamma0(p, f, c), gd = gamma0_dc(p, f, c);
            auto [a, ad] = px.basis(p, c);
            auto [b, bd] = py.basis(p, c);
            double det = a * bd - b * ad;
            if (std::abs(det) < 1e-14) return false;
            double dx = (g * bd - b * gd) / det, dy = (a * gd - g * ad) / det;
            x -= dx;
            y -= dy;
            if (std::abs(dx) + std::abs(dy) < tol * (1 + std::abs(x) + std::abs(y))) break;
        }
        return std::isfinite(x) && std::isfinite(y);
    };
    auto inside = [&](double x, double y) {
        return x >= box.xmin && x <= box.xmax && y >= box.ymin && y <= box.ymax;
    };

    std::vector<FoldPolyline> out;
    FoldPolyline cur;
    auto flush = [&] {
        if (cur.size() >= 2) out.push_back(cur);
        cur.clear();
    };
    double c = -cmax, dc = cmax * 1e-4;
    double x0, y0;
    bool have_prev = solve(c, x0, y0);
    double pdx = 0, pdy = 0;
    if (have_prev && inside(x0, y0)) cur.push_back({x0, y0, c});
    while (c < cmax) {
        double cn = std::min(cmax, c + dc), x1, y1;
        bool ok = solve(cn, x1, y1);
        if (ok && have_prev) {
            double dist = std::hypot(x1 - x0, y1 - y0);
            bool in0 = inside(x0, y0), in1 = inside(x1, y1);
            if ((in0 || in1) && dist > res && dc > 1e-12 * cmax) {
                dc *= 0.5;
                continue;
            }
            if (in1) {
                double sx = x1 - x0, sy = y1 - y0;
                if (!cur.empty() && sx * pdx + sy * pdy < 0) {  // cusp of the projection
                    FoldPoint last = cur.back();
                    flush();
                    cur.push_back(last);
                }
                if (!in0) flush();
                cur.push_back({x1, y1, cn});
                if (dist > 0) {
                    pdx = sx;
                    pdy = sy;
                }
            } else {
                flush();
            }
            if (dist < 0.25 * res) dc = std::min(dc * 2, cmax * 1e-2);
        } else if (!ok) {
            flush();
        }
        have_prev = ok;
        x0 = x1;
        y0 = y1;
        c = cn;
    }
    flush();
    return out;
}

}  // namespace frontlab
