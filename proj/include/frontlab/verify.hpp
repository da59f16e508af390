#pragma once

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "frontlab/designer.hpp"
#include "frontlab/evans.hpp"
#include "frontlab/existence.hpp"
#include "frontlab/jordan.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/pde_solve.hpp"
#include "frontlab/speed_ode.hpp"

namespace frontlab {

/// Named parameter sets with a fourfold zero root at N = 3.
namespace sets {

inline SystemParams three_component(double eps = 0.05, double d2 = 1.5) {
    return SystemParams(3, eps, {1.0, 2.25, 2.89}, {1.0, d2, 1.7});
}

inline Coupling opt() {
    Coupling f(3);
    f.alpha = {578 * sqrt2 / 315, -289 / (90 * sqrt2), 3125 / (2142 * sqrt2)};
    return f;
}

inline Coupling transcritical() {
    Coupling f = opt();
    f.beta[0] = 1;
    return f;
}

/// Uses d2 = 7/5.
inline Coupling pitchfork() {
    Coupling f = transcritical();
    f.alpha[1] = -2023 / (675 * sqrt2);
    f.beta[1] = -784.0 / 2025;
    return f;
}

/// Scalar cusp: F(V) = 2V - V^3.
inline Coupling cusp() {
    Coupling f(1);
    f.alpha[0] = 2;
    f.higher = {-1.0};
    return f;
}

}  // namespace sets

/// Reference values; tests/oracles_test.cpp recomputes each one independently.
namespace reference {

inline constexpr double cusp_speed = 2.2890251694806489;
/// Zero of E_0 for N = 1, tau = d = 1 at alpha = r * 2 sqrt2 / 3, r = 0.8, 0.9, 1.1.
inline constexpr double e0_root[3] = {-0.26014705087354433, -0.13178210632763532, 0.13475241575014721};
inline constexpr double e0_ratio[3] = {0.8, 0.9, 1.1};
/// Saddle-focus equilibrium and its spectrum for the normalized form (-1, -0.5, 0), a11 = 1.
inline constexpr double sf_point = 0.94574160900317581;
inline constexpr double sf_real = 1.1165886795656067;
inline constexpr double sf_pair_re = -0.55829433978280333;
inline constexpr double sf_pair_im = 1.1757088521400639;

}  // namespace reference

struct CheckResult {
    int id = 0;
    std::string name;
    bool passed = false;
    std::string detail;
    double seconds = 0;
};

namespace detail {

inline std::string sci(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

template <class Fn>
CheckResult timed(int id, std::string name, Fn fn) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    auto t0 = std::chrono::steady_clock::now();
    try {
        fn(r);
    } catch (const std::exception& e) {
        r.passed = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

/// Coefficients below `order` vanish to 1e-12 and the order coefficient exceeds 1e-6.
inline bool exact_order(const PowerSeries& t, int order, std::string& why) {
    for (int k = 0; k < order; ++k)
        if (std::abs(t[k]) > 1e-12) {
            why = "coefficient " + std::to_string(k) + " = " + sci(t[k]);
            return false;
        }
    if (!(std::abs(t[order]) > 1e-6)) {
        why = "coefficient " + std::to_string(order) + " = " + sci(t[order]);
        return false;
    }
    return true;
}

inline double hausdorff(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
    if (a.empty() || b.empty()) return a.size() == b.size() ? 0.0 : INFINITY;
    auto one = [](const auto& x, const auto& y) {
        double h = 0;
        for (auto& p : x) {
            double m = INFINITY;
            for (auto& q : y) m = std::min(m, std::abs(p - q));
            h = std::max(h, m);
        }
        return h;
    };
    return std::max(one(a, b), one(b, a));
}

}  // namespace detail

// ---------------------------------------------------------------------------------------------

inline CheckResult criterion_vandermonde(std::uint64_t seed) {
    return detail::timed(1, "Vandermonde closed form", [&](CheckResult& r) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> node(0.5, 5.0), rhs(-2.0, 2.0);
        std::uniform_int_distribution<int> size(1, 8);
        int bad_res = 0, bad_lu = 0;
        double worst_res = 0, worst_lu = 0;
        for (int t = 0; t < 200; ++t) {
            int n = size(rng);
            std::vector<double> nodes;
            while (int(nodes.size()) < n) {
                double x = node(rng);
                bool ok = true;
                for (double y : nodes) ok = ok && std::abs(x - y) >= 0.05;
                if (ok) nodes.push_back(x);
            }
            double b = rhs(rng);
            if (std::abs(b) < 0.1) b = 1;
            auto x = vandermonde_solve(nodes, b);
            // residual of the returned double vector, accumulated in extended precision
            using Ld = long double;
            Eigen::Matrix<Ld, -1, -1> m(n, n);
            Eigen::Matrix<Ld, -1, 1> e = Eigen::Matrix<Ld, -1, 1>::Zero(n), xl(n);
            e(0) = b;
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) m(i, k) = std::pow(Ld(nodes[k]), i);
            for (int k = 0; k < n; ++k) xl(k) = x[k];
            double res = double((m * xl - e).cwiseAbs().maxCoeff()) / std::abs(b);
            Eigen::Matrix<Ld, -1, 1> ref = m.partialPivLu().solve(e);
            double xm = double(ref.cwiseAbs().maxCoeff());
            double lu = double((ref - xl).cwiseAbs().maxCoeff()) / xm;
            worst_res = std::max(worst_res, res);
            worst_lu = std::max(worst_lu, lu);
            bad_res += res > 1e-9;
            bad_lu += lu > 1e-9;
        }
        r.passed = bad_res == 0 && bad_lu == 0;
        r.detail = "residual > 1e-9 in " + std::to_string(bad_res) + "/200 (worst " + detail::sci(worst_res) +
                   "), LU mismatch > 1e-9 in " + std::to_string(bad_lu) + "/200 (worst " + detail::sci(worst_lu) +
                   ")";
    });
}

inline CheckResult criterion_fourfold_zero() {
    return detail::timed(2, "fourfold zero root", [&](CheckResult& r) {
        auto p = sets::three_component();
        std::ostringstream os;
        bool ok = true;
        for (auto [label, f] : {std::pair{"transcritical", sets::transcritical()}, std::pair{"OPT", sets::opt()}}) {
            PowerSeries t = evans_taylor_c0(p, f, 6);
            double low = std::max({std::abs(t[1]), std::abs(t[2]), std::abs(t[3])});
            int w = evans_winding_disk(EvansContext(p, f, 0.0), 0.0, 0.05);
            bool good = low <= 1e-12 && std::abs(t[4]) > 1e-6 && w == 4;
            ok = ok && good;
            os << label << ": max|e1..e3| = " << detail::sci(low) << ", e4 = " << detail::sci(t[4])
               << ", winding = " << w << "; ";
        }
        r.passed = ok;
        r.detail = os.str();
    });
}

inline CheckResult criterion_existence_orders() {
    return detail::timed(3, "existence degeneracy orders", [&](CheckResult& r) {
        struct Case {
            const char* label;
            SystemParams p;
            Coupling expected;
            int order;
        };
        std::vector<Case> cases{{"transcritical", sets::three_component(), sets::transcritical(), 2},
                                {"pitchfork", sets::three_component(0.05, 1.4), sets::pitchfork(), 3},
                                {"OPT", sets::three_component(), sets::opt(), 7}};
        std::ostringstream os;
        bool ok = true;
        for (auto& c : cases) {
            Design d = design_gamma_degeneracy(c.p, c.order);
            double diff = std::abs(d.coupling.gamma - c.expected.gamma);
            for (int j = 0; j < 3; ++j)
                diff = std::max({diff, std::abs(d.coupling.alpha[j] - c.expected.alpha[j]),
                                 std::abs(d.coupling.beta[j] - c.expected.beta[j])});
            std::string why;
            bool order_ok = detail::exact_order(gamma0_taylor(c.p, d.coupling, c.order + 1), c.order, why);
            bool good = diff <= 1e-12 && order_ok;
            ok = ok && good;
            os << c.label << ": |design - reference| = " << detail::sci(diff) << ", order " << c.order
               << (order_ok ? " ok" : " FAILED (" + why + ")") << "; ";
        }
        r.passed = ok;
        r.detail = os.str();
    });
}

inline CheckResult criterion_jordan() {
    return detail::timed(4, "Jordan chain closed forms", [&](CheckResult& r) {
        using Q = Rational;
        struct Printed {
            Q pref;
            std::vector<Q> c;
        };
        std::vector<Printed> printed{{Q(-1, 2), {Q(1), Q(1)}},
                                     {Q(3, 8), {Q(1), Q(1), Q(1, 3)}},
                                     {Q(-5, 16), {Q(1), Q(1), Q(2, 5), Q(1, 15)}},
                                     {Q(35, 128), {Q(1), Q(1), Q(3, 7), Q(2, 21), Q(1, 105)}}};
        bool printed_ok = true;
        for (int j = 1; j <= 6; ++j) {
            auto jp = jordan_poly(j, 1.0, 1.0);
            if (j <= 4) {
                printed_ok = printed_ok && jp.prefactor_rational == printed[j - 1].pref &&
                             jp.coeffs.size() == printed[j - 1].c.size();
                for (size_t i = 0; printed_ok && i < jp.coeffs.size(); ++i)
                    printed_ok = jp.coeffs[i] == printed[j - 1].c[i];
            }
        }
        bool rec_ok = true;
        for (int j = 1; j <= 12; ++j) {
            auto a = jordan_poly(j, 1.0, 1.0).coeffs;
            auto prev = jordan_poly(j - 1, 1.0, 1.0).coeffs;
            rec_ok = rec_ok && a[j] == Q(1, double_factorial(2 * j - 1));
            for (int i = 0; i <= j - 2; ++i)
                rec_ok = rec_ok && Q(2 * j, 2 * j - 1) * prev[i] ==
                                       Q(2 * (i + 1)) * a[i + 1] - Q((i + 1) * (i + 2)) * a[i + 2];
        }
        double worst = 0;
        for (double tau : {1.0, 2.25})
            for (double d : {1.0, 1.5})
                for (int j = 1; j <= 6; ++j) {
                    auto vk = jordan_poly(j, tau, d);
                    auto vm = jordan_poly(j - 1, tau, d);
                    auto rep = verify_chain_ode(vk, &vm, 0.005);
                    worst = std::max({worst, rep.max_residual, rep.value_mismatch});
                }
        r.passed = printed_ok && rec_ok && worst <= 1e-6;
        r.detail = std::string("printed v1..v4 ") + (printed_ok ? "match" : "MISMATCH") + ", recurrences j<=12 " +
                   (rec_ok ? "exact" : "VIOLATED") + ", chain ODE residual " + detail::sci(worst);
    });
}

inline CheckResult criterion_spectral() {
    return detail::timed(5, "spectral cross-validation", [&](CheckResult& r) {
        const double eps = 0.05, L = 15;
        SystemParams p(1, eps, {1.0}, {1.0});
        std::ostringstream os;
        bool ok = true;
        for (int k = 0; k < 3; ++k) {
            Coupling f(1);
            f.alpha[0] = reference::e0_ratio[k] * 2 * sqrt2 / 3;
            PdeModel m{p, f, Grid(L, Grid::nodes_for(L, eps / 8), eps)};
            auto sol = solve_stationary_front(m, state_from_profile(m, front_profile(p, f, 0.0)));
            auto sp = linearization_spectrum(m, sol);
            auto tr = sp.translation();
            auto lead = sp.leading_nontrivial();
            double expect = eps * eps * reference::e0_root[k];
            double rel = lead ? std::abs(lead->value - expect) / std::abs(expect) : INFINITY;
            double trv = tr ? std::abs(tr->value) : INFINITY;
            bool good = sol.converged && rel <= 0.15 && trv <= 1e-6;
            ok = ok && good;
            os << "alpha/alpha_c = " << reference::e0_ratio[k] << ": rel err " << detail::sci(rel) << ", translation "
               << detail::sci(trv) << (good ? "" : " (out of tolerance)") << "; ";
        }
        r.passed = ok;
        r.detail = os.str();
    });
}

inline CheckResult criterion_speed_prediction() {
    return detail::timed(6, "front speed prediction", [&](CheckResult& r) {
        const double eps = 0.2, L = 20;
        SystemParams p(1, eps, {1.0}, {1.0});
        Grid g(L, Grid::nodes_for(L, 0.05), eps);
        std::ostringstream os;
        bool ok = true;
        // decoupled: lab speed eps^2 * 3 sqrt2 gamma / 2
        {
            Coupling f(1);
            f.gamma = 0.1;
            PdeModel m{p, f, g};
            double pred = 3 * sqrt2 * f.gamma / 2;
            auto st = state_from_profile(m, front_profile(p, f, pred));
            SimOptions so;
            auto sim = simulate(m, st, 200, so);
            double c_sim = sim.series.back().speed / (eps * eps);
            double rel = std::abs(c_sim - pred) / pred;
            ok = ok && !sim.aborted && rel <= 0.1;
            os << "decoupled: simulated " << c_sim << " vs " << pred << " (rel " << detail::sci(rel) << "); ";
        }
        // cusp
        {
            PdeModel m{p, sets::cusp(), g};
            double c0 = reference::cusp_speed;
            auto st = state_from_profile(m, front_profile(p, m.coupling, c0));
            auto tw = solve_travelling_front(m, st, c0);
            double rel_tw = std::abs(tw.c - c0) / c0;
            SimOptions so;
            auto sim = simulate(m, st, 100, so);
            double c_sim = sim.series.back().speed / (eps * eps);
            double rel_sim = std::abs(c_sim - c0) / c0;
            ok = ok && tw.converged && rel_tw <= 0.1 && !sim.aborted && rel_sim <= 0.1;
            os << "cusp: travelling " << tw.c << ", simulated " << c_sim << " vs " << c0 << " (rel "
               << detail::sci(rel_tw) << ", " << detail::sci(rel_sim) << ")";
        }
        r.passed = ok;
        r.detail = os.str();
    });
}

inline CheckResult criterion_heteroclinic() {
    return detail::timed(7, "heteroclinic speed transition", [&](CheckResult& r) {
        const double eps = 0.2, L = 20;
        SystemParams p(1, eps, {1.0}, {1.0});
        PdeModel m{p, sets::cusp(), Grid(L, Grid::nodes_for(L, 0.05), eps)};
        auto ss = solve_stationary_front(m, state_from_profile(m, front_profile(p, m.coupling, 0.0)));
        auto sp = linearization_spectrum(m, ss);
        auto lead = sp.leading_nontrivial();
        bool unstable = lead && lead->value.real() > 0;
        PdeState s0 = ss.state;
        Perturbation pb;
        pb.mode = "bump";
        pb.amplitude = 0.05;
        pb.width = 0.5;
        pb.center = 0.3;
        apply_perturbation(m, s0, pb);
        SimOptions so;
        so.output_stride = 50;
        auto sim = simulate(m, s0, 400, so);
        std::vector<double> c;
        for (auto& smp : sim.series) c.push_back(smp.speed / (eps * eps));
        double target = std::copysign(reference::cusp_speed, c.back());
        size_t tail = c.size() - c.size() / 4;
        bool settled = true;
        for (size_t i = tail; i < c.size(); ++i) settled = settled && std::abs(c[i] - target) <= 0.1 * reference::cusp_speed;
        // |c| never drops by more than 1% of the root once it has grown
        bool monotone = true;
        double peak = 0;
        for (double x : c) {
            peak = std::max(peak, std::abs(x));
            monotone = monotone && std::abs(x) >= peak - 0.01 * reference::cusp_speed;
        }
        r.passed = ss.converged && unstable && !sim.aborted && settled && monotone;
        r.detail = "stationary front leading eigenvalue " + detail::sci(lead ? lead->value.real() : NAN) +
                   ", final speed " + std::to_string(c.back()) + " (root " + std::to_string(target) + "), " +
                   (monotone ? "monotone" : "NOT monotone") + ", tail " + (settled ? "settled" : "NOT settled");
    });
}

inline CheckResult criterion_continuation() {
    return detail::timed(8, "continuation fold then Hopf", [&](CheckResult& r) {
        const double eps = 0.03, L = 20;
        auto p = sets::three_component(eps);
        Coupling f = sets::transcritical();
        f.gamma = 0.011;
        double a1 = f.alpha[0];
        f.alpha[0] = a1 + 0.5;
        PdeModel m{p, f, Grid(L, Grid::nodes_for(L, 0.015), eps)};
        double c0 = -0.05;
        auto start = solve_travelling_front(m, state_from_profile(m, front_profile(p, f, c0)), c0);
        ContinuationOptions o;
        o.direction = -1;
        o.ds = 0.005;
        o.ds_max = 0.01;
        o.max_points = 120;
        auto br = continue_branch(m, start, ParamId::parse("alpha1"), a1 - 1, a1 + 1, o);
        int fold = -1, hopf = -1;
        for (size_t i = 0; i < br.points.size(); ++i) {
            if (br.points[i].tag == PointTag::Fold && fold < 0) fold = int(i);
            if (br.points[i].tag == PointTag::Hopf && fold >= 0 && hopf < 0) hopf = int(i);
        }
        r.passed = start.converged && m.grid.n >= 1000 && fold >= 0 && hopf > fold;
        std::ostringstream os;
        os << m.grid.n << " nodes, " << br.points.size() << " points";
        if (fold >= 0)
            os << ", fold at dalpha1 = " << br.points[fold].param - a1 << " (c = " << br.points[fold].c << ")";
        if (hopf >= 0) os << ", Hopf at dalpha1 = " << br.points[hopf].param - a1 << " (c = " << br.points[hopf].c << ")";
        if (fold < 0) os << ", no fold found";
        else if (hopf < 0) os << ", no Hopf after the fold";
        r.detail = os.str();
    });
}

inline CheckResult criterion_saddle_focus() {
    return detail::timed(9, "saddle-focus classification", [&](CheckResult& r) {
        auto nf = ScaledNF::from_normal_form(-1, -0.5, 0, 1, true);
        auto eq = equilibria_and_classification(nf);
        double err = INFINITY;
        int count = 0;
        for (auto& e : eq) {
            if (e.type != "saddle-focus(1u,2s)") continue;
            ++count;
            std::vector<std::complex<double>> expect{
                {reference::sf_real, 0}, {reference::sf_pair_re, reference::sf_pair_im}, {reference::sf_pair_re, -reference::sf_pair_im}};
            err = std::max(detail::hausdorff(e.eigenvalues, expect), std::abs(e.point[0] - reference::sf_point));
        }
        bool guarded = false;
        try {
            shilnikov_shoot(ScaledNF::from_normal_form(1, -0.5, 0, 1, true), -1, 1, 5);
        } catch (const DomainError&) {
            guarded = true;
        }
        r.passed = count == 1 && err <= 1e-10 && guarded;
        r.detail = std::to_string(count) + " saddle-focus(1u,2s) equilibrium, eigenvalue error " + detail::sci(err) +
                   ", guard " + (guarded ? "rejects" : "DOES NOT reject") + " a11*lambda_bar > 0";
    });
}

/// Every sign change of the miss trace is either a validated candidate or an explicitly rejected bracket.
inline bool shoot_contract(const ShootResult& res, int steps, double tol, std::string& why) {
    if (int(res.trace.size()) != steps) {
        why = "trace has " + std::to_string(res.trace.size()) + " of " + std::to_string(steps) + " samples";
        return false;
    }
    for (auto& c : res.candidates)
        if (!(std::abs(c.refined_miss) < 10 * tol)) {
            why = "candidate at " + std::to_string(c.nu3) + " is not stable under refinement";
            return false;
        }
    for (size_t i = 0; i + 1 < res.trace.size(); ++i) {
        const auto &a = res.trace[i], &b = res.trace[i + 1];
        if (!a.valid || !b.valid || a.miss * b.miss > 0) continue;
        bool explained = false;
        for (auto& c : res.candidates) explained = explained || (c.nu3 >= a.nu3 && c.nu3 <= b.nu3);
        for (auto& q : res.rejected) explained = explained || (q.nu_lo >= a.nu3 && q.nu_hi <= b.nu3);
        if (!explained) {
            why = "silent sign change in [" + std::to_string(a.nu3) + ", " + std::to_string(b.nu3) + "]";
            return false;
        }
    }
    return true;
}

inline CheckResult criterion_shooting() {
    return detail::timed(10, "Shilnikov shooting contract", [&](CheckResult& r) {
        auto nf = ScaledNF::from_normal_form(-1, -0.5, 0, 1, true);
        ShootOptions so;
        const int steps = 41;
        auto res = shilnikov_shoot(nf, -3, 1, steps, so);
        int valid = 0;
        for (auto& s : res.trace) valid += s.valid;
        std::string why;
        r.passed = shoot_contract(res, steps, so.tol, why);
        r.detail = std::to_string(res.candidates.size()) + " candidates, " + std::to_string(res.rejected.size()) +
                   " rejected brackets, " + std::to_string(valid) + "/" + std::to_string(steps) + " valid shots" +
                   (why.empty() ? "" : "; " + why);
    });
}

inline CheckResult criterion_unfolding(std::uint64_t seed) {
    return detail::timed(11, "unfolding map accuracy", [&](CheckResult& r) {
        auto p = sets::three_component();
        auto base = design_evans_degeneracy(p, 3);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        std::uniform_real_distribution<double> ud(0, 1);
        double worst = 0;
        int bad = 0;
        for (int t = 0; t < 50; ++t) {
            std::vector<double> da(3);
            double nn = 0;
            for (auto& x : da) {
                x = nd(rng);
                nn += x * x;
            }
            double radius = 1e-2 * std::cbrt(ud(rng));
            for (auto& x : da) x *= radius / std::sqrt(nn);
            auto pred = weierstrass_roots(linear_unfolding_map(p, da));
            Coupling f(3);
            for (int j = 0; j < 3; ++j) f.alpha[j] = base[j] + da[j];
            double R = 1e-3;
            for (auto& z : pred) R = std::max(R, 3 * std::abs(z));
            auto rs = evans_roots(EvansContext(p, f, 0.0), Box{-R, R, -R, R}, 1e-13);
            std::vector<std::complex<double>> found;
            for (auto& e : rs.roots)
                for (int k = 0; k < e.multiplicity; ++k) found.push_back(e.z);
            // drop the translation root at the origin
            if (!found.empty()) {
                auto it = std::min_element(found.begin(), found.end(),
                                           [](auto& a, auto& b) { return std::abs(a) < std::abs(b); });
                found.erase(it);
            }
            double ratio = detail::hausdorff(pred, found) / (radius * radius);
            worst = std::max(worst, ratio);
            bad += !(ratio <= 10);
        }
        r.passed = bad == 0;
        r.detail = "worst Hausdorff/|dalpha|^2 = " + detail::sci(worst) + " over 50 samples, " + std::to_string(bad) +
                   " above 10";
    });
}

inline CheckResult criterion_imprint(std::uint64_t seed) {
    return detail::timed(12, "imprinting round trip", [&](CheckResult& r) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> coef(-1, 1), tau(0.2, 3), dd(0.2, 3);
        std::uniform_int_distribution<int> order(0, 6);
        double worst = 0;
        for (int t = 0; t < 100; ++t) {
            double ta, da;
            do {
                ta = tau(rng);
                da = dd(rng);
            } while (std::abs(ta / (2 * da) - kAC) < 0.1);
            SystemParams p(1, 0.05, {ta}, {da});
            std::vector<double> target(order(rng) + 1);
            for (auto& x : target) x = coef(rng);
            Coupling f = imprint_scalar_singularity(p, target);
            PowerSeries s = gamma0_taylor(p, f, int(target.size()) - 1);
            for (size_t k = 0; k < target.size(); ++k) worst = std::max(worst, std::abs(s[int(k)] - target[k]));
        }
        r.passed = worst <= 1e-10;
        r.detail = "worst coefficient error " + detail::sci(worst);
    });
}

/// Acceptance criterion by number (1..12).
inline CheckResult run_criterion(int id, std::uint64_t seed = 20240601) {
    switch (id) {
        case 1: return criterion_vandermonde(seed);
        case 2: return criterion_fourfold_zero();
        case 3: return criterion_existence_orders();
        case 4: return criterion_jordan();
        case 5: return criterion_spectral();
        case 6: return criterion_speed_prediction();
        case 7: return criterion_heteroclinic();
        case 8: return criterion_continuation();
        case 9: return criterion_saddle_focus();
        case 10: return criterion_shooting();
        case 11: return criterion_unfolding(seed);
        case 12: return criterion_imprint(seed);
    }
    throw DomainError("no acceptance criterion " + std::to_string(id));
}

// ---------------------------------------------------------------------------------------------

/// Checks on the three-component parameter sets.
inline std::vector<CheckResult> paper_params_suite() {
    std::vector<CheckResult> out{criterion_fourfold_zero(), criterion_existence_orders()};
    out.push_back(detail::timed(101, "simultaneous design reproduces OPT", [](CheckResult& r) {
        Design d = design_simultaneous({1.0, 1.5, 1.7}, 1.0);
        auto p = sets::three_component();
        auto f = sets::opt();
        double diff = 0;
        for (int j = 0; j < 3; ++j)
            diff = std::max({diff, std::abs(d.params.tau[j] - p.tau[j]), std::abs(d.coupling.alpha[j] - f.alpha[j])});
        r.passed = diff <= 1e-12 && d.singular_limit_only;
        r.detail = "max deviation " + detail::sci(diff);
    }));
    out.push_back(detail::timed(102, "pitchfork alpha2 is the zero-root design at d2 = 7/5", [](CheckResult& r) {
        auto a = design_evans_degeneracy(sets::three_component(0.05, 1.4), 3);
        auto f = sets::pitchfork();
        double diff = 0;
        for (int j = 0; j < 3; ++j) diff = std::max(diff, std::abs(a[j] - f.alpha[j]));
        r.passed = diff <= 1e-12;
        r.detail = "max deviation " + detail::sci(diff);
    }));
    return out;
}

/// Fast structural properties of each module.
inline std::vector<CheckResult> properties_suite() {
    std::vector<CheckResult> out;
    out.push_back(detail::timed(201, "Gamma_0 is odd for odd couplings", [](CheckResult& r) {
        auto p = sets::three_component();
        auto f = sets::opt();
        double worst = 0;
        for (double c : {0.1, 0.7, 2.3}) worst = std::max(worst, std::abs(gamma0(p, f, c) + gamma0(p, f, -c)));
        r.passed = worst <= 1e-14;
        r.detail = "max |G(c) + G(-c)| = " + detail::sci(worst);
    }));
    out.push_back(detail::timed(202, "Evans roots lie inside the a-priori bound", [](CheckResult& r) {
        SystemParams p(1, 0.05, {1.0}, {1.0});
        Coupling f(1);
        f.alpha[0] = 1.1 * 2 * sqrt2 / 3;
        EvansContext ctx(p, f, 0.0);
        double b = evans_root_bound(ctx);
        auto rs = evans_roots(ctx, Box{-0.9, 2 * b, -2 * b, 2 * b}, 1e-10);
        bool ok = !rs.roots.empty();
        for (auto& e : rs.roots) ok = ok && std::abs(e.z) <= b;
        r.passed = ok;
        r.detail = std::to_string(rs.roots.size()) + " roots, bound " + std::to_string(b);
    }));
    out.push_back(detail::timed(203, "Allen-Cahn front is a steady state", [](CheckResult& r) {
        const double eps = 0.1;
        SystemParams p(1, eps, {1.0}, {1.0});
        PdeModel m{p, Coupling(1), Grid(10, Grid::nodes_for(10, eps / 8), eps)};
        auto sol = solve_stationary_front(m, state_from_profile(m, front_profile(p, m.coupling, 0.0)));
        double err = 0;
        for (int i = 0; i < m.grid.n; ++i)
            err = std::max(err, std::abs(sol.state.u[i] - std::tanh(m.grid.x[i] / (sqrt2 * eps))));
        r.passed = sol.converged && err <= 1e-3;
        r.detail = "max |U - tanh| = " + detail::sci(err);
    }));
    out.push_back(detail::timed(204, "speed ODE equilibria match Gamma_0 roots", [](CheckResult& r) {
        auto p = sets::three_component();
        Coupling f = sets::transcritical();
        f.alpha[0] += 1e-3;
        auto o = build_from_analysis(p, f, 3, natural_scale(p));
        auto eq = equilibria_and_classification(o);
        r.passed = eq.size() == 2;
        r.detail = std::to_string(eq.size()) + " equilibria";
    }));
    return out;
}

}  // namespace frontlab
