#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "frontlab/core.hpp"
#include "frontlab/existence.hpp"

namespace frontlab {

using cplx = std::complex<double>;

struct EvansContext {
    SystemParams params;
    Coupling coupling;
    double c = 0;
    std::vector<double> grad;           // dF/dV_j at V*(c)
    std::vector<double> branch_points;  // real, one per slow component

    EvansContext(const SystemParams& p, const Coupling& f, double speed = 0.0)
        : params(p), coupling(f), c(speed) {
        f.validate(p.n_slow);
        grad = coupling_gradient(f, vstar(p, c));
        for (int j = 0; j < p.n_slow; ++j) {
            double t = p.tau[j], dj = p.d[j];
            branch_points.push_back(-1.0 / t - c * c * t / (4 * dj * dj));
        }
    }

    double rightmost_branch_point() const {
        return *std::max_element(branch_points.begin(), branch_points.end());
    }
    /// Distance of lambda from the union of the cuts (rays to the left on the real axis).
    double cut_distance(cplx lambda) const {
        double best = 1e300;
        for (double b : branch_points) {
            double dist = lambda.real() <= b ? std::abs(lambda.imag()) : std::abs(lambda - cplx(b, 0));
            best = std::min(best, dist);
        }
        return best;
    }
};

inline cplx evans_eval(const EvansContext& ctx, cplx lambda) {
    if (ctx.cut_distance(lambda) <= 1e-12) throw DomainError("Evans evaluation on a branch cut");
    const auto& p = ctx.params;
    cplx s = lambda;
    double k = 3 * sqrt2;
    for (int j = 0; j < p.n_slow; ++j) {
        double t = p.tau[j], dj = p.d[j];
        cplx z = ctx.c * ctx.c * t * t + 4 * dj * dj * (lambda * t + 1.0);
        double z0 = 4 * dj * dj + ctx.c * ctx.c * t * t;
        s += k * ctx.grad[j] * (1.0 / std::sqrt(z) - 1.0 / std::sqrt(z0));
    }
    return s;
}

inline cplx evans_derivative(const EvansContext& ctx, cplx lambda) {
    const auto& p = ctx.params;
    cplx s = 1.0;
    double k = 3 * sqrt2;
    for (int j = 0; j < p.n_slow; ++j) {
        double t = p.tau[j], dj = p.d[j];
        cplx z = ctx.c * ctx.c * t * t + 4 * dj * dj * (lambda * t + 1.0);
        s += k * ctx.grad[j] * (-0.5) * 4 * dj * dj * t / (z * std::sqrt(z));
    }
    return s;
}

/// Taylor series of the stationary (c = 0) Evans function at lambda = 0.
inline PowerSeries evans_taylor_c0(const SystemParams& p, const Coupling& f, int order = kDefaultSeriesOrder) {
    f.validate(p.n_slow);
    PowerSeries r(order);
    if (order >= 1) r[1] = 1.0;
    double k = 1.5 * sqrt2;
    for (int j = 0; j < p.n_slow; ++j) {
        // (1 + tau lambda)^(-1/2) - 1
        double tk = 1.0;
        for (int m = 1; m <= order; ++m) {
            tk *= p.tau[j];
            double b = (m % 2 ? -1.0 : 1.0) * dfact_ratio(m) * tk;
            r[m] += k * f.alpha[j] / p.d[j] * b;
        }
    }
    return r;
}

inline double evans_root_bound(const EvansContext& ctx) {
    double s = 0;
    for (int j = 0; j < ctx.params.n_slow; ++j) s += 1.5 * sqrt2 * std::abs(ctx.coupling.alpha[j]) / ctx.params.d[j];
    return 2 * std::max(s, 1.0 / ctx.params.tau_min());
}

inline double essential_spectrum_bound(const SystemParams& p) {
    return -p.epsilon * p.epsilon / p.tau_max();
}

struct Box {
    double xmin, xmax, ymin, ymax;
    double diameter() const { return std::hypot(xmax - xmin, ymax - ymin); }
    bool contains(cplx z) const {
        return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin && z.imag() <= ymax;
    }
};

struct EvansRoot {
    cplx z;
    int multiplicity;
};

struct RootSet {
    std::vector<EvansRoot> roots;
    Box contour{};
    int winding_total = 0;
    std::vector<std::string> notes;
};

class WindingError : public DomainError {
public:
    using DomainError::DomainError;
};

namespace detail {

/// Accumulated argument change of fn along the segment a -> b (phase steps kept below pi/2).
inline double phase_change(const std::function<cplx(cplx)>& fn, cplx a, cplx b, int base = 16) {
    double total = 0;
    cplx za = a;
    cplx fa = fn(za);
    for (int i = 1; i <= base; ++i) {
        cplx zb = a + (b - a) * (double(i) / base);
        cplx fb = fn(zb);
        // adaptive refinement on this sub-segment
        std::vector<std::pair<cplx, cplx>> stack{{zb, fb}};
        cplx zc = za, fc = fa;
        int guard = 0;
        while (!stack.empty()) {
            auto [zt, ft] = stack.back();
            double d = std::arg(ft / fc);
            if (std::abs(d) > std::numbers::pi / 2 || std::abs(ft) == 0 || std::abs(fc) == 0) {
                if (++guard > 200000 || std::abs(zt - zc) < 1e-14 * (1 + std::abs(zc)))
                    throw WindingError("winding computation failed: zero of the Evans function on the contour");
                cplx zm = 0.5 * (zc + zt);
                stack.push_back({zm, fn(zm)});
                continue;
            }
            total += d;
            zc = zt;
            fc = ft;
            stack.pop_back();
        }
        za = zb;
        fa = fb;
    }
    return total;
}

inline int winding_on_polygon(const std::function<cplx(cplx)>& fn, const std::vector<cplx>& verts) {
    double total = 0;
    for (size_t i = 0; i < verts.size(); ++i) total += phase_change(fn, verts[i], verts[(i + 1) % verts.size()]);
    return int(std::lround(total / (2 * std::numbers::pi)));
}

inline int winding_box(const std::function<cplx(cplx)>& fn, const Box& b) {
    return winding_on_polygon(fn, {{b.xmin, b.ymin}, {b.xmax, b.ymin}, {b.xmax, b.ymax}, {b.xmin, b.ymax}});
}

}  // namespace detail

/// Winding number of E_0 around a circle; the circle must avoid the cuts.
inline int evans_winding_disk(const EvansContext& ctx, cplx center, double radius, int nseg = 64) {
    if (ctx.cut_distance(center) <= radius) throw DomainError("disk intersects a branch cut");
    auto fn = [&](cplx z) { return evans_eval(ctx, z); };
    std::vector<cplx> pts;
    for (int i = 0; i < nseg; ++i) pts.push_back(center + std::polar(radius, 2 * std::numbers::pi * i / nseg));
    // polygon inscribed in the circle; the gap is negligible for roots well inside
    return detail::winding_on_polygon(fn, pts);
}

/// Argument-principle root location on a rectangle, excluding a thin strip around the cuts.
inline RootSet evans_roots(const EvansContext& ctx, const Box& region, double tol = 1e-8, int max_depth = 40) {
    RootSet out;
    out.contour = region;
    const double eta = 1e-6;
    auto fn = [&](cplx z) { return evans_eval(ctx, z); };
    double bp = ctx.rightmost_branch_point();

    std::vector<Box> pieces;
    bool crosses_axis = region.ymin < eta && region.ymax > -eta;
    if (crosses_axis && region.xmin < bp + eta) {
        if (region.ymax > eta) pieces.push_back({region.xmin, region.xmax, eta, region.ymax});
        if (region.ymin < -eta) pieces.push_back({region.xmin, region.xmax, region.ymin, -eta});
        if (region.xmax > bp + eta)
            pieces.push_back({std::max(region.xmin, bp + eta), region.xmax, std::max(region.ymin, -eta),
                              std::min(region.ymax, eta)});
        out.notes.push_back("contour split to avoid branch cuts; roots within 1e-6 of a cut are not counted");
    } else {
        pieces.push_back(region);
    }

    auto polish = [&](cplx z, const Box& b) {
        cplx x = z;
        for (int it = 0; it < 60; ++it) {
            cplx f = evans_eval(ctx, x);
            if (std::abs(f) <= 1e-13) break;
            cplx step = f / evans_derivative(ctx, x);
            cplx xn = x - step;
            if (!b.contains(xn) || ctx.cut_distance(xn) <= 1e-12) break;
            x = xn;
            if (std::abs(step) < 1e-16 * (1 + std::abs(x))) break;
        }
        return x;
    };

    std::function<void(const Box&, int, int)> search = [&](const Box& b, int w, int depth) {
        if (w == 0) return;
        if (w == 1) {
            cplx z0(0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax));
            cplx z = polish(z0, b);
            if (std::abs(evans_eval(ctx, z)) > 1e-12 && b.diameter() > tol) {
                // Newton left the box or stalled: keep subdividing
            } else {
                out.roots.push_back({z, 1});
                return;
            }
        }
        if (b.diameter() < tol) {
            out.roots.push_back({cplx(0.5 * (b.xmin + b.xmax), 0.5 * (b.ymin + b.ymax)), w});
            return;
        }
        if (depth >= max_depth)
            throw WindingError("maximum subdivision depth reached in box [" + std::to_string(b.xmin) + "," +
                               std::to_string(b.xmax) + "]x[" + std::to_string(b.ymin) + "," +
                               std::to_string(b.ymax) + "]");
        // asymmetric split keeps symmetric roots (e.g. on the real axis) off the new edges
        double xm = b.xmin + (0.5 + 0.0137) * (b.xmax - b.xmin);
        double ym = b.ymin + (0.5 - 0.0119) * (b.ymax - b.ymin);
        Box kids[4] = {{b.xmin, xm, b.ymin, ym}, {xm, b.xmax, b.ymin, ym}, {b.xmin, xm, ym, b.ymax}, {xm, b.xmax, ym, b.ymax}};
        int ws[4], sum = 0;
        for (int i = 0; i < 4; ++i) {
            ws[i] = detail::winding_box(fn, kids[i]);
            sum += ws[i];
        }
        if (sum != w)
            throw WindingError("winding inconsistency while subdividing box [" + std::to_string(b.xmin) + "," +
                               std::to_string(b.xmax) + "]x[" + std::to_string(b.ymin) + "," +
                               std::to_string(b.ymax) + "]");
        for (int i = 0; i < 4; ++i) search(kids[i], ws[i], depth + 1);
    };

    for (const Box& b : pieces) {
        int w = detail::winding_box(fn, b);
        out.winding_total += w;
        search(b, w, 0);
    }
    std::sort(out.roots.begin(), out.roots.end(), [](const EvansRoot& a, const EvansRoot& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    return out;
}

}  // namespace frontlab
