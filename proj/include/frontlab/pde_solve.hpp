#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frontlab/existence.hpp"
#include "frontlab/pde.hpp"

namespace frontlab {

// Unknowns are interleaved per node: index i*(N+1) + comp, comp 0 = U, comp j+1 = V_j.
// Row scaling: U rows carry the original equation, V rows are divided by eps^2.

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

inline Vec pack(const PdeState& s) {
    int n = int(s.u.size()), nf = int(s.v.size()) + 1;
    Vec w(n * nf);
    for (int i = 0; i < n; ++i) {
        w[i * nf] = s.u[i];
        for (int j = 0; j + 1 < nf; ++j) w[i * nf + j + 1] = s.v[j][i];
    }
    return w;
}

inline PdeState unpack(const Vec& w, int nf, double t = 0) {
    int n = int(w.size()) / nf;
    PdeState s;
    s.t = t;
    s.u.resize(n);
    s.v.assign(nf - 1, std::vector<double>(n));
    for (int i = 0; i < n; ++i) {
        s.u[i] = w[i * nf];
        for (int j = 0; j + 1 < nf; ++j) s.v[j][i] = w[i * nf + j + 1];
    }
    return s;
}

/// Steady residual in the frame moving with lab speed eps^2 c, and optionally its Jacobian.
inline Vec front_residual(const PdeModel& m, const Vec& w, double c, SpMat* jac = nullptr) {
    const auto& p = m.params;
    int n = m.grid.n, nf = m.fields(), ns = p.n_slow;
    double h = m.grid.h, ih2 = 1 / (h * h), i2h = 1 / (2 * h);
    double eps = p.epsilon, e2 = eps * eps;
    Vec r(n * nf);
    std::vector<Eigen::Triplet<double>> tr;
    if (jac) tr.reserve(size_t(n) * nf * 5);
    std::vector<double> vv(ns);
    auto id = [nf](int i, int comp) { return i * nf + comp; };
    auto lap_coeffs = [&](int i, int& il, int& ir, double& cl, double& cm, double& cr) {
        il = i - 1;
        ir = i + 1;
        cl = ih2;
        cr = ih2;
        cm = -2 * ih2;
        if (i == 0) {
            il = 1;  // mirror: both neighbours are node 1
            cl = 0;
            cr = 2 * ih2;
        } else if (i == n - 1) {
            ir = n - 2;
            cr = 0;
            cl = 2 * ih2;
        }
    };
    for (int i = 0; i < n; ++i) {
        int il, ir;
        double cl, cm, cr;
        lap_coeffs(i, il, ir, cl, cm, cr);
        bool interior = i > 0 && i < n - 1;
        for (int j = 0; j < ns; ++j) vv[j] = w[id(i, j + 1)];
        double u = w[id(i, 0)];
        double lapu = cl * w[id(il, 0)] + cm * u + cr * w[id(ir, 0)];
        double du = interior ? (w[id(i + 1, 0)] - w[id(i - 1, 0)]) * i2h : 0.0;
        r[id(i, 0)] = e2 * lapu + u - u * u * u - eps * eval_coupling(m.coupling, vv) + e2 * c * du;
        if (jac) {
            int row = id(i, 0);
            if (cl != 0) tr.emplace_back(row, id(il, 0), e2 * cl);
            if (cr != 0) tr.emplace_back(row, id(ir, 0), e2 * cr);
            tr.emplace_back(row, id(i, 0), e2 * cm + 1 - 3 * u * u);
            if (interior && c != 0) {
                tr.emplace_back(row, id(i + 1, 0), e2 * c * i2h);
                tr.emplace_back(row, id(i - 1, 0), -e2 * c * i2h);
            }
            auto g = coupling_gradient(m.coupling, vv);
            for (int j = 0; j < ns; ++j) tr.emplace_back(row, id(i, j + 1), -eps * g[j]);
        }
        for (int j = 0; j < ns; ++j) {
            int comp = j + 1;
            double d2 = p.d[j] * p.d[j], tj = p.tau[j];
            double v = w[id(i, comp)];
            double lapv = cl * w[id(il, comp)] + cm * v + cr * w[id(ir, comp)];
            double dv = interior ? (w[id(i + 1, comp)] - w[id(i - 1, comp)]) * i2h : 0.0;
            r[id(i, comp)] = d2 * lapv + (u - v) + c * tj * dv;
            if (jac) {
                int row = id(i, comp);
                if (cl != 0) tr.emplace_back(row, id(il, comp), d2 * cl);
                if (cr != 0) tr.emplace_back(row, id(ir, comp), d2 * cr);
                tr.emplace_back(row, id(i, comp), d2 * cm - 1);
                tr.emplace_back(row, id(i, 0), 1.0);
                if (interior && c != 0) {
                    tr.emplace_back(row, id(i + 1, comp), c * tj * i2h);
                    tr.emplace_back(row, id(i - 1, comp), -c * tj * i2h);
                }
            }
        }
    }
    if (jac) {
        jac->resize(n * nf, n * nf);
        jac->setFromTriplets(tr.begin(), tr.end());
    }
    return r;
}

/// Derivative of the residual in c (the advection terms).
inline Vec residual_dc(const PdeModel& m, const Vec& w) {
    int n = m.grid.n, nf = m.fields();
    Vec r = Vec::Zero(n * nf);
    double e2 = m.params.epsilon * m.params.epsilon, i2h = 1 / (2 * m.grid.h);
    for (int i = 1; i + 1 < n; ++i)
        for (int comp = 0; comp < nf; ++comp) {
            double dw = (w[(i + 1) * nf + comp] - w[(i - 1) * nf + comp]) * i2h;
            r[i * nf + comp] = comp == 0 ? e2 * dw : m.params.tau[comp - 1] * dw;
        }
    return r;
}

/// Derivative of the residual in one coupling coefficient (the coupling is affine in each).
inline Vec residual_dparam(const PdeModel& m, const Vec& w, const ParamId& pid) {
    int n = m.grid.n, nf = m.fields();
    Vec r = Vec::Zero(n * nf);
    double eps = m.params.epsilon;
    for (int i = 0; i < n; ++i) {
        double b = 1.0;
        if (pid.kind != ParamId::Gamma) {
            double v = w[i * nf + pid.index + 1];
            b = pid.kind == ParamId::Alpha ? v : v * v;
        }
        r[i * nf] = -eps * b;
    }
    return r;
}

/// Phase condition U(0) = 0 by linear interpolation between the two nodes bracketing x = 0.
struct Phase {
    int i0 = 0;
    double w0 = 1, w1 = 0;

    explicit Phase(const Grid& g) {
        i0 = std::clamp(int(std::floor((0 - g.x[0]) / g.h)), 0, g.n - 2);
        double t = (0 - g.x[i0]) / g.h;
        if (t < 1e-12) {
            w0 = 1;
            w1 = 0;
        } else {
            w0 = 1 - t;
            w1 = t;
        }
    }
    double eval(const Vec& w, int nf) const { return w0 * w[i0 * nf] + w1 * w[(i0 + 1) * nf]; }
    int nearest() const { return w1 > 0.5 ? i0 + 1 : i0; }
};

struct FrontSolution {
    PdeState state;
    double c = 0;  // slow units; lab speed is eps^2 c
    double residual = 0;  // sup-norm of the full steady residual
    int iterations = 0;
    bool converged = false;
    std::vector<std::string> diagnostics;

    double lab_speed(double eps) const { return eps * eps * c; }
};

struct NewtonOptions {
    double tol = 1e-10;
    int max_iter = 40;
};

namespace detail {

inline SpMat with_border(const SpMat& a, const std::vector<std::pair<int, Vec>>& cols,
                         const std::vector<std::pair<int, Vec>>& rows, const std::vector<Eigen::Triplet<double>>& extra,
                         int size) {
    std::vector<Eigen::Triplet<double>> tr;
    tr.reserve(a.nonZeros() + 2 * size);
    for (int k = 0; k < a.outerSize(); ++k)
        for (SpMat::InnerIterator it(a, k); it; ++it) tr.emplace_back(it.row(), it.col(), it.value());
    for (auto& [col, v] : cols)
        for (int i = 0; i < v.size(); ++i)
            if (v[i] != 0) tr.emplace_back(i, col, v[i]);
    for (auto& [row, v] : rows)
        for (int i = 0; i < v.size(); ++i)
            if (v[i] != 0) tr.emplace_back(row, i, v[i]);
    tr.insert(tr.end(), extra.begin(), extra.end());
    SpMat out(size, size);
    out.setFromTriplets(tr.begin(), tr.end());
    return out;
}

inline double sup(const Vec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace detail

/// Damped Newton for a stationary front; the U equation at the node nearest x = 0 is traded for U(0) = 0.
inline FrontSolution solve_stationary_front(const PdeModel& m, const PdeState& guess, const NewtonOptions& o = {}) {
    int nf = m.fields();
    Phase ph(m.grid);
    int traded = ph.nearest() * nf;
    Vec w = pack(guess);
    FrontSolution sol;
    auto system = [&](const Vec& x, SpMat* J) {
        Vec r = front_residual(m, x, 0.0, J);
        r[traded] = ph.eval(x, nf);
        if (J) {
            J->prune([&](Eigen::Index row, Eigen::Index, double) { return row != traded; });
            J->coeffRef(traded, ph.i0 * nf) = ph.w0;
            if (ph.w1 != 0) J->coeffRef(traded, (ph.i0 + 1) * nf) = ph.w1;
            J->makeCompressed();
        }
        return r;
    };
    Vec best = w;
    double best_norm = 1e300;
    for (int it = 0; it <= o.max_iter; ++it) {
        SpMat J;
        Vec r = system(w, &J);
        double nr = detail::sup(r);
        if (nr < best_norm) {
            best_norm = nr;
            best = w;
        }
        sol.iterations = it;
        if (nr <= o.tol) {
            sol.converged = true;
            break;
        }
        if (it == o.max_iter) break;
        Eigen::SparseLU<SpMat> lu;
        lu.compute(J);
        if (lu.info() != Eigen::Success) {
            sol.diagnostics.push_back("singular Jacobian at iteration " + std::to_string(it));
            break;
        }
        Vec dx = lu.solve(r);
        double lam = 1;
        bool accepted = false;
        for (int k = 0; k < 12; ++k) {
            Vec trial = w - lam * dx;
            if (detail::sup(system(trial, nullptr)) < (1 - 1e-4 * lam) * nr || nr < 1e-8) {
                w = trial;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted) {
            sol.diagnostics.push_back("Newton stagnated at iteration " + std::to_string(it));
            break;
        }
    }
    if (!sol.converged) w = best;
    sol.state = unpack(w, nf);
    sol.residual = detail::sup(front_residual(m, w, 0.0));
    sol.c = 0;
    return sol;
}

namespace detail {

/// Newton on (W, c) with the phase condition; c is held fixed when `fix_c` is set.
inline FrontSolution travelling_newton(const PdeModel& m, Vec w, double c, bool fix_c, const NewtonOptions& o) {
    int nf = m.fields(), nw = int(w.size());
    Phase ph(m.grid);
    FrontSolution sol;
    auto system = [&](const Vec& x, double cc, SpMat* J) {
        Vec r(nw + 1);
        r.head(nw) = front_residual(m, x, cc, J);
        r[nw] = ph.eval(x, nf);
        return r;
    };
    Vec bestw = w;
    double bestc = c, best_norm = 1e300;
    for (int it = 0; it <= o.max_iter; ++it) {
        SpMat J;
        Vec r = system(w, c, &J);
        if (fix_c) r[nw] = 0;
        double nr = sup(r);
        if (nr < best_norm) {
            best_norm = nr;
            bestw = w;
            bestc = c;
        }
        sol.iterations = it;
        if (nr <= o.tol) {
            sol.converged = true;
            break;
        }
        if (it == o.max_iter) break;
        Vec rc = residual_dc(m, w);
        Vec prow = Vec::Zero(nw);
        prow[ph.i0 * nf] = ph.w0;
        if (ph.w1 != 0) prow[(ph.i0 + 1) * nf] = ph.w1;
        SpMat A = fix_c ? with_border(J, {}, {}, {{nw, nw, 1.0}}, nw + 1)
                        : with_border(J, {{nw, rc}}, {{nw, prow}}, {}, nw + 1);
        Eigen::SparseLU<SpMat> lu;
        lu.compute(A);
        if (lu.info() != Eigen::Success) {
            sol.diagnostics.push_back("singular bordered Jacobian at iteration " + std::to_string(it));
            break;
        }
        Vec dx = lu.solve(r);
        double lam = 1;
        bool accepted = false;
        for (int k = 0; k < 12; ++k) {
            Vec tw = w - lam * dx.head(nw);
            double tc = fix_c ? c : c - lam * dx[nw];
            Vec tr = system(tw, tc, nullptr);
            if (fix_c) tr[nw] = 0;
            if (sup(tr) < (1 - 1e-4 * lam) * nr || nr < 1e-8) {
                w = tw;
                c = tc;
                accepted = true;
                break;
            }
            lam *= 0.5;
        }
        if (!accepted) {
            sol.diagnostics.push_back("Newton stagnated at iteration " + std::to_string(it));
            break;
        }
    }
    if (!sol.converged) {
        w = bestw;
        c = bestc;
    }
    sol.state = unpack(w, nf);
    sol.c = c;
    sol.residual = sup(front_residual(m, w, c));
    return sol;
}

}  // namespace detail

/// Extended Newton in (profile, c) closed by the phase condition.
inline FrontSolution solve_travelling_front(const PdeModel& m, const PdeState& guess, double guess_c,
                                            const NewtonOptions& o = {}) {
    return detail::travelling_newton(m, pack(guess), guess_c, false, o);
}

/// Steady profile in the frame moving with a prescribed slow-unit speed c (no phase condition).
inline FrontSolution solve_front_at_speed(const PdeModel& m, const PdeState& guess, double c,
                                          const NewtonOptions& o = {}) {
    return detail::travelling_newton(m, pack(guess), c, true, o);
}

// ---------------------------------------------------------------------------------------------
// Linearization spectrum

struct SpectrumOptions {
    int count = 8;
    int dense_threshold = 600;  // total unknowns
    double shift = 0;  // 0: automatic, small positive multiple of eps^2
    int krylov_dim = 80;
    int max_restarts = 30;
    double tol = 1e-9;
};

struct Eigenpair {
    std::complex<double> value;
    bool translation = false;
    bool converged = true;
};

struct SpectrumResult {
    std::vector<Eigenpair> eigen;  // sorted by real part, descending
    std::string method;
    std::vector<std::string> notes;

    std::optional<Eigenpair> translation() const {
        for (auto& e : eigen)
            if (e.translation) return e;
        return std::nullopt;
    }
    /// Leading eigenvalue that is not the translation mode.
    std::optional<Eigenpair> leading_nontrivial() const {
        for (auto& e : eigen)
            if (!e.translation) return e;
        return std::nullopt;
    }
};

namespace detail {

/// Mass weights: 1 for U, tau_j / eps^2 for the rescaled V rows.
inline Vec mass_diag(const PdeModel& m) {
    int n = m.grid.n, nf = m.fields();
    Vec d(n * nf);
    double e2 = m.params.epsilon * m.params.epsilon;
    for (int i = 0; i < n; ++i) {
        d[i * nf] = 1;
        for (int j = 0; j < m.params.n_slow; ++j) d[i * nf + j + 1] = m.params.tau[j] / e2;
    }
    return d;
}

inline Vec translation_direction(const PdeModel& m, const Vec& w) {
    int n = m.grid.n, nf = m.fields();
    Vec t = Vec::Zero(w.size());
    for (int i = 1; i + 1 < n; ++i)
        for (int comp = 0; comp < nf; ++comp) t[i * nf + comp] = (w[(i + 1) * nf + comp] - w[(i - 1) * nf + comp]);
    return t.normalized();
}

inline double overlap(const Eigen::VectorXcd& x, const Vec& t) {
    double nx = x.norm();
    return nx > 0 ? std::abs(x.dot(t.cast<std::complex<double>>())) / nx : 0.0;
}

/// Marks the real eigenvalue nearest zero among those whose eigenvector is aligned with W'.
template <class Pairs>
void tag_translation(std::vector<Eigenpair>& ev, const Pairs& pairs, const Vec& tdir) {
    int best = -1;
    for (size_t i = 0; i < ev.size(); ++i) {
        auto z = ev[i].value;
        if (std::abs(z.imag()) > 1e-12 * (1 + std::abs(z)) || overlap(pairs[i].second, tdir) < 0.9) continue;
        if (best < 0 || std::abs(z) < std::abs(ev[best].value)) best = int(i);
    }
    if (best >= 0) ev[best].translation = true;
}

}  // namespace detail

namespace detail {

struct RitzPair {
    std::complex<double> value;
    Eigen::VectorXcd vector;
    bool converged;
};

/// Shift-invert Arnoldi with explicit restarts on (J - sigma M)^{-1} M; returns the `want` Ritz pairs nearest sigma.
inline std::vector<RitzPair> arnoldi_near(const SpMat& J, const Vec& md, double sigma, int want,
                                          const SpectrumOptions& o, std::vector<std::string>& notes) {
    int n = int(J.rows());
    SpMat S = J;
    for (int i = 0; i < n; ++i) S.coeffRef(i, i) -= sigma * md[i];
    S.makeCompressed();
    Eigen::SparseLU<SpMat> lu;
    lu.compute(S);
    if (lu.info() != Eigen::Success) throw DomainError("shifted Jacobian is singular");
    auto op = [&](const Vec& x) -> Vec { return lu.solve(Vec(md.cwiseProduct(x))); };
    int mdim = std::min(o.krylov_dim, n - 1);
    std::mt19937 rng(12345);
    std::normal_distribution<double> nd;
    Vec start(n);
    for (int i = 0; i < n; ++i) start[i] = nd(rng);
    std::vector<RitzPair> out;
    for (int restart = 0; restart <= o.max_restarts; ++restart) {
        Eigen::MatrixXd Q(n, mdim + 1);
        Eigen::MatrixXd H = Eigen::MatrixXd::Zero(mdim + 1, mdim);
        Q.col(0) = start.normalized();
        int built = mdim;
        for (int k = 0; k < mdim; ++k) {
            Vec z = op(Q.col(k));
            for (int pass = 0; pass < 2; ++pass) {
                Vec hcol = Q.leftCols(k + 1).transpose() * z;
                z -= Q.leftCols(k + 1) * hcol;
                H.col(k).head(k + 1) += hcol;
            }
            H(k + 1, k) = z.norm();
            if (H(k + 1, k) < 1e-14) {
                built = k + 1;
                break;
            }
            Q.col(k + 1) = z / H(k + 1, k);
        }
        Eigen::EigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(H.topLeftCorner(built, built)));
        std::vector<int> order(built);
        for (int i = 0; i < built; ++i) order[i] = i;
        // largest |theta| are nearest the shift
        std::sort(order.begin(), order.end(),
                  [&](int x, int y) { return std::abs(es.eigenvalues()[x]) > std::abs(es.eigenvalues()[y]); });
        out.clear();
        bool all = true;
        Vec next = Vec::Zero(n);
        for (int q = 0; q < std::min(want, built); ++q) {
            std::complex<double> th = es.eigenvalues()[order[q]];
            Eigen::VectorXcd y = es.eigenvectors().col(order[q]);
            double resid = built < mdim ? 0.0 : std::abs(H(built, built - 1) * y[built - 1]) / std::abs(th);
            Eigen::VectorXcd x = Q.leftCols(built).cast<std::complex<double>>() * y;
            bool ok = resid < o.tol;
            out.push_back({sigma + 1.0 / th, x, ok});
            if (!ok) all = false;
            next += x.real() + x.imag();
        }
        if (all) break;
        if (restart == o.max_restarts) {
            notes.push_back("Arnoldi did not converge all eigenvalues near shift " + std::to_string(sigma));
            break;
        }
        start = next;
    }
    return out;
}

}  // namespace detail

/// Leading eigenvalues of J x = lambda M x at a steady front (lab time units).
/// Large systems use shift-invert Arnoldi near zero plus a shift walked to the right until it clears the
/// rightmost eigenvalue found, so unstable modes are not hidden behind the dense cluster near the essential band.
inline SpectrumResult linearization_spectrum(const PdeModel& m, const FrontSolution& sol, const SpectrumOptions& o = {}) {
    Vec w = pack(sol.state);
    SpMat J;
    front_residual(m, w, sol.c, &J);
    Vec md = detail::mass_diag(m);
    Vec tdir = detail::translation_direction(m, w);
    int n = int(w.size());
    SpectrumResult res;
    std::vector<detail::RitzPair> pairs;
    if (n <= o.dense_threshold) {
        res.method = "dense";
        Eigen::MatrixXd A = Eigen::MatrixXd(J);
        for (int i = 0; i < n; ++i) A.row(i) /= md[i];
        Eigen::EigenSolver<Eigen::MatrixXd> es(A);
        for (int i = 0; i < n; ++i) pairs.push_back({es.eigenvalues()[i], es.eigenvectors().col(i), true});
    } else {
        res.method = "shift-invert Arnoldi";
        double e2 = m.params.epsilon * m.params.epsilon;
        double sigma0 = o.shift != 0 ? o.shift : 0.01 * e2;
        auto add = [&](const std::vector<detail::RitzPair>& found) {
            for (auto& rp : found) {
                if (!rp.converged) continue;
                bool dup = false;
                for (auto& q : pairs)
                    if (std::abs(q.value - rp.value) <= 1e-7 * std::max(std::abs(rp.value), e2)) dup = true;
                if (!dup) pairs.push_back(rp);
            }
        };
        add(detail::arnoldi_near(J, md, sigma0, o.count, o, res.notes));
        double sigma = 0.5 * e2;
        for (int probe = 0; probe < 8; ++probe) {
            auto found = detail::arnoldi_near(J, md, sigma, std::max(4, o.count / 2), o, res.notes);
            add(found);
            double right = -1e300;
            for (auto& rp : found)
                if (rp.converged) right = std::max(right, rp.value.real());
            if (right < 0.5 * sigma) break;
            sigma = 2 * right + 0.1 * e2;
        }
    }
    std::vector<Eigenpair> all;
    for (auto& pr : pairs) all.push_back(Eigenpair{pr.value, false, pr.converged});
    std::vector<std::pair<std::complex<double>, Eigen::VectorXcd>> vecs;
    for (auto& pr : pairs) vecs.push_back({pr.value, pr.vector});
    detail::tag_translation(all, vecs, tdir);
    std::sort(all.begin(), all.end(), [](auto& a, auto& b) { return a.value.real() > b.value.real(); });
    if (int(all.size()) > o.count) all.resize(o.count);
    res.eigen = all;
    return res;
}

// ---------------------------------------------------------------------------------------------
// Pseudo-arclength continuation

enum class PointTag { None, Fold, Hopf };

inline std::string tag_name(PointTag t) {
    return t == PointTag::Fold ? "fold" : t == PointTag::Hopf ? "hopf" : "none";
}

struct BranchPoint {
    double param = 0;
    double c = 0;  // slow units
    double arclength = 0;
    std::vector<std::complex<double>> eigenvalues;  // translation mode removed
    bool stable = false;
    PointTag tag = PointTag::None;
    int snapshot = -1;  // index into Branch::snapshots, -1 if not stored
};

struct ContinuationOptions {
    double ds = 0.02;
    double ds_min = 1e-5;
    double ds_max = 0.2;
    int max_points = 200;
    int eigen_count = 8;
    bool spectra = true;
    int snapshot_stride = 0;  // 0: none
    int direction = 1;  // initial sign of d(param)
    NewtonOptions newton{1e-9, 10};
};

struct Branch {
    std::vector<BranchPoint> points;
    std::vector<PdeState> snapshots;
    bool truncated = false;
    std::string message;
};

namespace detail {

inline int unstable_complex(const std::vector<std::complex<double>>& ev) {
    int k = 0;
    for (auto& z : ev)
        if (z.real() > 0 && std::abs(z.imag()) > 1e-10) ++k;
    return k;
}

inline int unstable_real(const std::vector<std::complex<double>>& ev) {
    int k = 0;
    for (auto& z : ev)
        if (z.real() > 0 && std::abs(z.imag()) <= 1e-10) ++k;
    return k;
}

/// A complex pair crossed the imaginary axis: the unstable complex count changes while the real one does not.
inline bool hopf_between(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
    return unstable_complex(a) != unstable_complex(b) && unstable_real(a) == unstable_real(b);
}

}  // namespace detail

/// Follows travelling fronts in (profile, c, param) starting from a converged solution.
inline Branch continue_branch(PdeModel m, const FrontSolution& start, const ParamId& pid, double pmin, double pmax,
                              const ContinuationOptions& o = {}) {
    pid.check(m.params.n_slow);
    int nf = m.fields();
    Vec w = pack(start.state);
    int nw = int(w.size());
    double wt = 1.0 / m.grid.n;
    Phase ph(m.grid);
    Vec prow = Vec::Zero(nw);
    prow[ph.i0 * nf] = ph.w0;
    if (ph.w1 != 0) prow[(ph.i0 + 1) * nf] = ph.w1;
    auto ip = [&](const Vec& a, const Vec& b) {
        return wt * a.head(nw).dot(b.head(nw)) + a[nw] * b[nw] + a[nw + 1] * b[nw + 1];
    };
    auto residual = [&](const Vec& X, SpMat* J) {
        Coupling f = m.coupling;
        pid.set(f, X[nw + 1]);
        PdeModel mm = m;
        mm.coupling = f;
        Vec r(nw + 1);
        r.head(nw) = front_residual(mm, X.head(nw), X[nw], J);
        r[nw] = ph.eval(X.head(nw), nf);
        return r;
    };
    Branch br;
    Vec X(nw + 2);
    X.head(nw) = w;
    X[nw] = start.c;
    X[nw + 1] = pid.get(m.coupling);

    // initial tangent: (W, c) derivative for a unit parameter change
    Vec T(nw + 2);
    {
        SpMat J;
        residual(X, &J);
        Vec rc = residual_dc(m, w);
        SpMat A = detail::with_border(J, {{nw, rc}}, {{nw, prow}}, {}, nw + 1);
        Eigen::SparseLU<SpMat> lu(A);
        if (lu.info() != Eigen::Success) throw DomainError("singular Jacobian at the starting point");
        Vec rhs = Vec::Zero(nw + 1);
        rhs.head(nw) = -residual_dparam(m, w, pid);
        Vec dx = lu.solve(rhs);
        T.head(nw + 1) = dx;
        T[nw + 1] = 1;
        T *= o.direction / std::sqrt(ip(T, T));
    }

    auto record = [&](const Vec& Xp, double s) {
        BranchPoint bp;
        bp.param = Xp[nw + 1];
        bp.c = Xp[nw];
        bp.arclength = s;
        if (o.spectra) {
            PdeModel mm = m;
            pid.set(mm.coupling, bp.param);
            FrontSolution fs;
            fs.state = unpack(Xp.head(nw), nf);
            fs.c = bp.c;
            SpectrumOptions so;
            so.count = o.eigen_count + 1;
            auto spec = linearization_spectrum(mm, fs, so);
            for (auto& e : spec.eigen)
                if (!e.translation && int(bp.eigenvalues.size()) < o.eigen_count) bp.eigenvalues.push_back(e.value);
            bp.stable = true;
            for (auto& z : bp.eigenvalues)
                if (z.real() > 1e-12) bp.stable = false;
        }
        if (o.snapshot_stride > 0 && br.points.size() % size_t(o.snapshot_stride) == 0) {
            bp.snapshot = int(br.snapshots.size());
            br.snapshots.push_back(unpack(Xp.head(nw), nf));
        }
        br.points.push_back(bp);
    };

    double s = 0, ds = o.ds;
    record(X, 0);
    while (int(br.points.size()) < o.max_points) {
        bool ok = false;
        Vec Xn;
        int iters = 0;
        while (!ok) {
            Vec Xp = X + ds * T;
            Xn = Xp;
            for (iters = 0; iters < o.newton.max_iter; ++iters) {
                SpMat J;
                Vec r = residual(Xn, &J);
                Vec full(nw + 2);
                full.head(nw + 1) = r;
                full[nw + 1] = ip(T, Vec(Xn - Xp));
                if (detail::sup(full) <= o.newton.tol) {
                    ok = true;
                    break;
                }
                Coupling f = m.coupling;
                pid.set(f, Xn[nw + 1]);
                PdeModel mm = m;
                mm.coupling = f;
                Vec rc = residual_dc(mm, Xn.head(nw));
                Vec rp = residual_dparam(mm, Xn.head(nw), pid);
                Vec arow(nw + 2);
                arow.head(nw) = wt * T.head(nw);
                arow[nw] = T[nw];
                arow[nw + 1] = T[nw + 1];
                Vec rc_ext = Vec::Zero(nw + 2), rp_ext = Vec::Zero(nw + 2);
                rc_ext.head(nw) = rc;
                rp_ext.head(nw) = rp;
                rc_ext[nw + 1] = arow[nw];
                rp_ext[nw + 1] = arow[nw + 1];
                Vec prow_ext = Vec::Zero(nw + 2);
                prow_ext.head(nw) = prow;
                Vec arow_w = Vec::Zero(nw + 2);
                arow_w.head(nw) = arow.head(nw);
                SpMat A = detail::with_border(J, {{nw, rc_ext}, {nw + 1, rp_ext}}, {{nw, prow_ext}, {nw + 1, arow_w}}, {},
                                      nw + 2);
                Eigen::SparseLU<SpMat> lu(A);
                if (lu.info() != Eigen::Success) break;
                Vec dx = lu.solve(full);
                if (!dx.allFinite()) break;
                Xn -= dx;
            }
            if (!ok) {
                ds *= 0.5;
                if (std::abs(ds) < o.ds_min) {
                    br.truncated = true;
                    br.message = "corrector failed at minimum step size";
                    return br;
                }
            }
        }
        Vec Tn = Xn - X;
        Tn /= std::sqrt(ip(Tn, Tn));
        bool fold = Tn[nw + 1] * T[nw + 1] < 0;
        s += ds;
        X = Xn;
        T = Tn;
        auto prev_ev = br.points.back().eigenvalues;
        record(X, s);
        auto& bp = br.points.back();
        if (fold) bp.tag = PointTag::Fold;
        else if (o.spectra && detail::hopf_between(prev_ev, bp.eigenvalues)) bp.tag = PointTag::Hopf;
        if (iters <= 3) ds = std::min(ds * 1.3, o.ds_max);
        if (X[nw + 1] < pmin || X[nw + 1] > pmax) {
            br.message = "parameter left the continuation window";
            break;
        }
    }
    if (br.message.empty()) br.message = "maximum number of points reached";
    return br;
}

}  // namespace frontlab
