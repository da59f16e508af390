#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "frontlab/config.hpp"
#include "frontlab/designer.hpp"
#include "frontlab/evans.hpp"
#include "frontlab/existence.hpp"
#include "frontlab/jordan.hpp"
#include "frontlab/pde.hpp"
#include "frontlab/pde_solve.hpp"
#include "frontlab/speed_ode.hpp"
#include "frontlab/verify.hpp"

using namespace frontlab;

namespace {

struct Globals {
    bool json_errors = false;
    std::string output_dir;
    std::string config_path;
};

std::vector<double> parse_list(const std::string& s, size_t expected, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(flag + ": '" + item + "' is not a number");
        }
    }
    if (expected && out.size() != expected)
        throw UsageError(flag + " expects " + std::to_string(expected) + " comma-separated values");
    return out;
}

std::string state_label(const std::string& command) { return "frontlab " + command; }

CsvTable profile_table(const std::string& kind, const PdeModel& m, const PdeState& s) {
    std::vector<std::string> cols{"x", "u"};
    for (int j = 0; j < m.params.n_slow; ++j) cols.push_back("v" + std::to_string(j + 1));
    CsvTable t(kind, cols);
    t.meta("t", fmt_double(s.t));
    for (int i = 0; i < m.grid.n; ++i) {
        std::vector<double> row{m.grid.x[i], s.u[i]};
        for (auto& vj : s.v) row.push_back(vj[i]);
        t.row(row);
    }
    return t;
}

RunConfig require_config(const Globals& g) {
    if (g.config_path.empty()) throw UsageError("this subcommand needs --config FILE");
    return load_config(g.config_path);
}

std::optional<std::string> out_dir(const Globals& g) {
    if (g.output_dir.empty()) return std::nullopt;
    return g.output_dir;
}

// --- design ----------------------------------------------------------------------------------

int run_design(const Globals& g, const std::string& target) {
    RunConfig rc = require_config(g);
    const SystemParams& p = rc.params;
    std::vector<std::string> warnings;
    auto colon = target.find(':');
    std::string kind = target.substr(0, colon);
    std::string arg = colon == std::string::npos ? "" : target.substr(colon + 1);
    auto as_int = [&](const std::string& s) {
        try {
            size_t used = 0;
            int v = std::stoi(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw UsageError("--target " + target + ": expected an integer after ':'");
        }
    };
    if (kind == "evans") {
        int ell = as_int(arg);
        rc.coupling.alpha = design_evans_degeneracy(p, ell, std::nullopt, &warnings);
    } else if (kind == "gamma") {
        Design d = design_gamma_degeneracy(p, as_int(arg));
        rc.coupling = d.coupling;
        warnings = d.warnings;
    } else if (kind == "simultaneous" && arg.empty()) {
        Design d = design_simultaneous(p.d, p.tau[0], p.epsilon);
        rc.params = d.params;
        rc.coupling = d.coupling;
        warnings = d.warnings;
        warnings.push_back("simultaneous design is exact only in the singular limit eps = 0");
    } else if (kind == "imprint" && !arg.empty()) {
        std::ifstream in(arg);
        if (!in) throw UsageError("cannot open imprint target file: " + arg);
        std::vector<double> target_coeffs;
        try {
            target_coeffs = json::parse(in).get<std::vector<double>>();
        } catch (const std::exception&) {
            throw UsageError("imprint target must be a JSON array of numbers");
        }
        rc.coupling = imprint_scalar_singularity(p, target_coeffs);
    } else {
        throw UsageError("--target must be evans:L, gamma:M, simultaneous or imprint:FILE");
    }
    for (auto& w : warnings) std::cerr << "warning: " << w << "\n";
    json doc = to_json(rc);
    OutputSink sink(out_dir(g), state_label("design --target " + target));
    sink.add("config.json", doc.dump(2) + "\n");
    sink.flush(doc);
    return 0;
}

// --- gamma -----------------------------------------------------------------------------------

int run_gamma(const Globals& g, bool roots, int taylor, const std::string& folds, double lo, double hi) {
    RunConfig rc = require_config(g);
    if (!roots && taylor < 0 && folds.empty()) throw UsageError("gamma needs --roots, --taylor=M or --folds");
    OutputSink sink(out_dir(g), state_label("gamma"));
    if (roots) {
        double r = default_root_radius(rc.coupling);
        double a = std::isnan(lo) ? -r : lo, b = std::isnan(hi) ? r : hi;
        auto res = gamma0_roots(rc.params, rc.coupling, a, b);
        CsvTable t("gamma-roots", {"c", "multiplicity"});
        t.meta("interval", fmt_double(a) + "," + fmt_double(b));
        for (auto& x : res.roots) t.row({x.c, double(x.multiplicity)});
        sink.add("gamma_roots.csv", t);
    }
    if (taylor >= 0) {
        PowerSeries s = gamma0_taylor(rc.params, rc.coupling, taylor);
        CsvTable t("gamma-taylor", {"k", "coefficient"});
        for (int k = 0; k <= taylor; ++k) t.row({double(k), s[k]});
        sink.add("gamma_taylor.csv", t);
    }
    if (!folds.empty()) {
        auto c1 = folds.find(',');
        auto c2 = c1 == std::string::npos ? c1 : folds.find(',', c1 + 1);
        if (c2 == std::string::npos) throw UsageError("--folds expects px,py,xmin,xmax,ymin,ymax,nx,ny");
        ParamId px = ParamId::parse(folds.substr(0, c1));
        ParamId py = ParamId::parse(folds.substr(c1 + 1, c2 - c1 - 1));
        auto nums = parse_list(folds.substr(c2 + 1), 6, "--folds");
        FoldBox box{nums[0], nums[1], nums[2], nums[3], int(nums[4]), int(nums[5])};
        auto curves = fold_curves(rc.params, rc.coupling, px, py, box);
        CsvTable t("fold-curves", {"curve", px.name(), py.name(), "c"});
        for (size_t k = 0; k < curves.size(); ++k)
            for (auto& pt : curves[k]) t.row({double(k), pt.x, pt.y, pt.c});
        sink.add("fold_curves.csv", t);
    }
    sink.flush(to_json(rc));
    return 0;
}

// --- evans -----------------------------------------------------------------------------------

int run_evans(const Globals& g, double at, int taylor, const std::string& roots, bool bound) {
    RunConfig rc = require_config(g);
    if (taylor < 0 && roots.empty() && !bound) throw UsageError("evans needs --taylor=M, --roots or --bound");
    EvansContext ctx(rc.params, rc.coupling, at);
    OutputSink sink(out_dir(g), state_label("evans"));
    if (taylor >= 0) {
        if (at != 0) throw DomainError("the Taylor expansion is available for the stationary front (--at 0) only");
        PowerSeries s = evans_taylor_c0(rc.params, rc.coupling, taylor);
        CsvTable t("evans-taylor", {"k", "coefficient"});
        for (int k = 0; k <= taylor; ++k) t.row({double(k), s[k]});
        sink.add("evans_taylor.csv", t);
    }
    if (!roots.empty()) {
        auto b = parse_list(roots, 4, "--roots");
        auto rs = evans_roots(ctx, Box{b[0], b[1], b[2], b[3]});
        CsvTable t("evans-roots", {"real", "imag", "multiplicity"});
        t.meta("speed", fmt_double(at));
        t.meta("winding", std::to_string(rs.winding_total));
        for (auto& n : rs.notes) t.meta("note", n);
        for (auto& r : rs.roots) t.row({r.z.real(), r.z.imag(), double(r.multiplicity)});
        sink.add("evans_roots.csv", t);
    }
    if (bound) {
        CsvTable t("evans-bound", {"quantity", "value"});
        t.row_text({"root_modulus_bound", fmt_double(evans_root_bound(ctx))});
        t.row_text({"rightmost_branch_point", fmt_double(ctx.rightmost_branch_point())});
        t.row_text({"essential_spectrum_bound", fmt_double(essential_spectrum_bound(rc.params))});
        sink.add("evans_bound.csv", t);
    }
    sink.flush(to_json(rc));
    return 0;
}

// --- jordan ----------------------------------------------------------------------------------

int run_jordan(const Globals& g, int k, int ell, double ymin, double ymax, int samples) {
    RunConfig rc = require_config(g);
    if (samples < 2) throw UsageError("--samples must be at least 2");
    auto cp = chain_profile(rc.params, rc.coupling, k, ell);
    std::vector<std::string> cols{"y", "u"};
    for (int j = 0; j < rc.params.n_slow; ++j) cols.push_back("v" + std::to_string(j + 1));
    CsvTable t("jordan-profile", cols);
    t.meta("k", std::to_string(k));
    t.meta("ell", std::to_string(ell));
    for (int i = 0; i < samples; ++i) {
        double y = ymin + (ymax - ymin) * i / (samples - 1);
        auto s = cp.eval(y);
        std::vector<double> row{y, s.u.real()};
        for (auto& v : s.v) row.push_back(v.real());
        t.row(row);
    }
    OutputSink sink(out_dir(g), state_label("jordan"));
    sink.add("jordan_profile.csv", t);
    sink.flush(to_json(rc));
    return 0;
}

// --- ode -------------------------------------------------------------------------------------

struct OdeFlags {
    bool from_analysis = false;
    std::string nf;
    bool integrate = false, equilibria = false, lyapunov = false;
    std::string shoot;
    int n_prime = -1;
    double scale = NAN;
    double t_end = 100;
    std::string y0;
    double renorm = 1.0;
};

json equilibria_json(const std::vector<Equilibrium>& eq) {
    json arr = json::array();
    for (auto& e : eq) {
        json je;
        je["point"] = e.point;
        json ev = json::array();
        for (auto& z : e.eigenvalues) ev.push_back({z.real(), z.imag()});
        je["eigenvalues"] = ev;
        je["type"] = e.type;
        arr.push_back(je);
    }
    return arr;
}

int run_ode(const Globals& g, const OdeFlags& o) {
    if (o.from_analysis == !o.nf.empty()) throw UsageError("ode needs exactly one of --from-analysis or --nf");
    if (!o.integrate && !o.equilibria && o.shoot.empty() && !o.lyapunov)
        throw UsageError("ode needs --integrate, --equilibria, --shoot or --lyapunov");
    std::optional<SpeedODE> ode;
    std::optional<ScaledNF> nf;
    json cfg;
    if (o.from_analysis) {
        RunConfig rc = require_config(g);
        int np = o.n_prime < 0 ? rc.params.n_slow : o.n_prime;
        double h = std::isnan(o.scale) ? natural_scale(rc.params, np) : o.scale;
        ode = build_from_analysis(rc.params, rc.coupling, np, h);
        cfg = to_json(rc);
        cfg["scale"] = h;
        cfg["n_prime"] = np;
    } else {
        auto v = parse_list(o.nf, 7, "--nf");
        ScaledNF s;
        s.nu0 = v[0];
        s.nu = {v[1], v[2], v[3]};
        s.a11 = v[4];
        s.a12 = v[5];
        s.delta = v[6];
        nf = s;
        cfg["nf"] = v;
    }
    if (!o.shoot.empty() && !nf) throw UsageError("--shoot needs --nf");
    OutputSink sink(out_dir(g), state_label("ode"));
    int dim = ode ? ode->dim() : 3;
    auto field = ode ? ode->field() : nf->field();
    LinearizedSystem lin = ode ? linearized(*ode) : linearized(*nf);
    State y0(dim, 0.0);
    if (!o.y0.empty()) {
        y0 = parse_list(o.y0, dim, "--y0");
    } else if (ode) {
        y0[0] = 0.01;
    } else {
        y0[0] = 0.1;
    }
    std::string var = ode ? "c" : "z";
    if (o.integrate) {
        IntegrateOptions io;
        auto tr = integrate(field, y0, 0.0, o.t_end, io);
        std::vector<std::string> cols{"t"};
        for (int i = 0; i < dim; ++i) cols.push_back(var + std::to_string(i + 1));
        CsvTable t("ode-trajectory", cols);
        if (tr.blew_up) t.meta("warning", tr.message);
        for (size_t i = 0; i < tr.t.size(); ++i) {
            std::vector<double> row{tr.t[i]};
            row.insert(row.end(), tr.y[i].begin(), tr.y[i].end());
            t.row(row);
        }
        sink.add("trajectory.csv", t);
    }
    if (o.equilibria) {
        json rep;
        rep["equilibria"] = equilibria_json(ode ? equilibria_and_classification(*ode) : equilibria_and_classification(*nf));
        if (ode) rep["provenance"] = ode->provenance;
        sink.add("equilibria.json", rep.dump(2) + "\n");
    }
    if (!o.shoot.empty()) {
        auto s = parse_list(o.shoot, 3, "--shoot");
        ShootOptions so;
        auto res = shilnikov_shoot(*nf, s[0], s[1], int(s[2]), so);
        CsvTable t("shoot-trace", {"nu3", "valid", "miss", "status"});
        for (auto& x : res.trace)
            t.row_text({fmt_double(x.nu3), x.valid ? "1" : "0", x.valid ? fmt_double(x.miss) : "nan", x.status});
        sink.add("shoot_trace.csv", t);
        json rep;
        json cands = json::array();
        for (auto& c : res.candidates)
            cands.push_back({{"nu3", c.nu3}, {"miss", c.miss}, {"refined_miss", c.refined_miss},
                             {"saddle_quantity", c.saddle_quantity}});
        json rej = json::array();
        for (auto& q : res.rejected) rej.push_back({{"nu_lo", q.nu_lo}, {"nu_hi", q.nu_hi}, {"reason", q.reason}});
        rep["candidates"] = cands;
        rep["rejected"] = rej;
        sink.add("shoot.json", rep.dump(2) + "\n");
    }
    if (o.lyapunov) {
        double l = lyapunov_max(lin, y0, o.t_end, o.renorm);
        json rep;
        rep["lyapunov_max"] = l;
        rep["t_end"] = o.t_end;
        rep["renorm_interval"] = o.renorm;
        sink.add("lyapunov.json", rep.dump(2) + "\n");
    }
    sink.flush(cfg);
    return 0;
}

// --- pde -------------------------------------------------------------------------------------

PdeModel model_from(const RunConfig& rc) {
    const auto& c = rc.pde;
    return PdeModel{rc.params, rc.coupling, Grid(c.domain_half_length, c.n_x, rc.params.epsilon, c.allow_coarse)};
}

int run_pde_sim(const Globals& g) {
    RunConfig rc = require_config(g);
    if (!rc.has_pde) throw UsageError("pde-sim needs a 'pde' section in the config");
    PdeModel m = model_from(rc);
    for (auto& w : m.grid.warnings) std::cerr << "warning: " << w << "\n";
    const auto& c = rc.pde;
    PdeState s = state_from_profile(m, front_profile(rc.params, rc.coupling, c.initial_speed));
    if (c.initial == "stationary") {
        auto sol = solve_stationary_front(m, s);
        if (!sol.converged) throw DomainError("stationary front solve did not converge");
        s = sol.state;
    } else if (c.initial == "travelling") {
        auto sol = solve_travelling_front(m, s, c.initial_speed);
        if (!sol.converged) throw DomainError("travelling front solve did not converge");
        s = sol.state;
    }
    apply_perturbation(m, s, c.perturbation);
    SimOptions so;
    so.dt = c.dt;
    so.output_stride = c.output_stride;
    so.freeze = c.freeze;
    so.trap_radius = c.trap_radius;
    so.step.scheme = c.scheme == "strang" ? Scheme::Strang : Scheme::IMEX1;
    auto res = simulate(m, s, c.t_end, so);
    double e2 = rc.params.epsilon * rc.params.epsilon;
    CsvTable t("pde-timeseries", {"t", "position", "speed", "speed_slow", "umin", "umax", "vmin", "vmax", "trapped"});
    if (res.aborted) t.meta("aborted", res.message);
    for (auto& d : res.diagnostics) t.meta("diagnostic", d);
    for (auto& x : res.series)
        t.row({x.t, x.position, x.speed, x.speed / e2, x.umin, x.umax, x.vmin, x.vmax, x.trapped ? 1.0 : 0.0});
    if (res.aborted) std::cerr << "warning: " << res.message << "\n";
    OutputSink sink(out_dir(g), state_label("pde-sim"));
    sink.add("timeseries.csv", t);
    sink.add("profile_initial.csv", profile_table("pde-profile", m, s));
    sink.add("profile_final.csv", profile_table("pde-profile", m, res.final_state));
    sink.flush(to_json(rc));
    return 0;
}

int run_pde_continue(const Globals& g) {
    RunConfig rc = require_config(g);
    if (!rc.has_pde || !rc.has_continuation)
        throw UsageError("pde-continue needs 'pde' and 'continuation' sections in the config");
    PdeModel m = model_from(rc);
    for (auto& w : m.grid.warnings) std::cerr << "warning: " << w << "\n";
    const auto& cc = rc.continuation;
    double c0 = cc.initial_speed;
    auto start = solve_travelling_front(m, state_from_profile(m, front_profile(rc.params, rc.coupling, c0)), c0);
    if (!start.converged) throw DomainError("initial travelling front solve did not converge");
    ContinuationOptions o;
    o.ds = cc.ds;
    o.ds_min = cc.ds_min;
    o.ds_max = cc.ds_max;
    o.max_points = cc.max_points;
    o.direction = cc.direction;
    o.eigen_count = cc.eigen_count;
    o.snapshot_stride = cc.snapshot_stride;
    auto br = continue_branch(m, start, ParamId::parse(cc.param), cc.min, cc.max, o);
    std::vector<std::string> cols{"point", cc.param, "c", "arclength", "stable", "tag"};
    for (int k = 1; k <= cc.eigen_count; ++k) {
        cols.push_back("re" + std::to_string(k));
        cols.push_back("im" + std::to_string(k));
    }
    CsvTable t("pde-branch", cols);
    if (br.truncated) t.meta("truncated", br.message);
    for (size_t i = 0; i < br.points.size(); ++i) {
        auto& b = br.points[i];
        std::vector<std::string> row{std::to_string(i), fmt_double(b.param), fmt_double(b.c), fmt_double(b.arclength),
                                     b.stable ? "1" : "0", tag_name(b.tag)};
        for (int k = 0; k < cc.eigen_count; ++k) {
            bool have = k < int(b.eigenvalues.size());
            row.push_back(have ? fmt_double(b.eigenvalues[k].real()) : "nan");
            row.push_back(have ? fmt_double(b.eigenvalues[k].imag()) : "nan");
        }
        t.row_text(row);
    }
    OutputSink sink(out_dir(g), state_label("pde-continue"));
    sink.add("branch.csv", t);
    if (!br.snapshots.empty()) {
        std::vector<std::string> sc{"point", "x", "u"};
        for (int j = 0; j < rc.params.n_slow; ++j) sc.push_back("v" + std::to_string(j + 1));
        CsvTable snap("pde-snapshots", sc);
        for (size_t i = 0; i < br.points.size(); ++i) {
            int idx = br.points[i].snapshot;
            if (idx < 0) continue;
            const auto& s = br.snapshots[idx];
            for (int q = 0; q < m.grid.n; ++q) {
                std::vector<double> row{double(i), m.grid.x[q], s.u[q]};
                for (auto& vj : s.v) row.push_back(vj[q]);
                snap.row(row);
            }
        }
        sink.add("snapshots.csv", snap);
    }
    sink.flush(to_json(rc));
    return 0;
}

// --- verify ----------------------------------------------------------------------------------

int run_verify(const Globals& g, const std::string& suite, int only, std::uint64_t seed) {
    std::vector<CheckResult> results;
    auto add = [&](std::vector<CheckResult> v) { results.insert(results.end(), v.begin(), v.end()); };
    if (suite == "paper-params" || suite == "all") add(paper_params_suite());
    if (suite == "properties" || suite == "all") add(properties_suite());
    if (suite == "acceptance" || suite == "all") {
        for (int id = 1; id <= 12; ++id) {
            if (only && id != only) continue;
            auto r = run_criterion(id, seed);
            std::printf("criterion %d: %s (%s)\n", id, r.passed ? "PASS" : "FAIL", r.detail.c_str());
            std::fflush(stdout);
            results.push_back(r);
        }
    } else {
        for (auto& r : results) std::printf("check %d %s: %s (%s)\n", r.id, r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str());
    }
    if (suite == "all")
        for (auto& r : results)
            if (r.id > 100) std::printf("check %d %s: %s (%s)\n", r.id, r.name.c_str(), r.passed ? "PASS" : "FAIL", r.detail.c_str());
    int failed = 0;
    for (auto& r : results) failed += !r.passed;
    std::printf("%zu checks, %d failed\n", results.size(), failed);
    if (!g.output_dir.empty()) {
        CsvTable t("verify", {"id", "name", "passed", "detail"});
        for (auto& r : results) {
            std::string d = r.detail;
            for (auto& ch : d)
                if (ch == ',' || ch == '\n') ch = ';';
            t.row_text({std::to_string(r.id), r.name, r.passed ? "1" : "0", d});
        }
        json cfg;
        cfg["suite"] = suite;
        cfg["seed"] = seed;
        OutputSink sink(g.output_dir, state_label("verify --suite " + suite));
        sink.add("verify.csv", t);
        sink.flush(cfg);
    }
    return failed ? 1 : 0;
}

void report_error(const Globals& g, const std::string& kind, const std::string& msg, int code) {
    if (g.json_errors) {
        json e;
        e["error"] = {{"kind", kind}, {"message", msg}, {"exit_code", code}};
        std::cerr << e.dump() << "\n";
    } else {
        std::cerr << "frontlab: " << kind << " error: " << msg << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    Globals g;
    CLI::App app{"frontlab: fronts in a one-fast/N-slow reaction-diffusion system"};
    app.set_version_flag("--version", std::string("frontlab ") + kVersion);
    app.require_subcommand(1);
    app.add_flag("--json-errors", g.json_errors, "Print errors as a JSON object on stderr");
    app.add_option("--output-dir", g.output_dir, "Write outputs and manifest.json to this directory");
    app.add_option("-c,--config", g.config_path, "Configuration document (JSON)");

    std::string target;
    auto* design = app.add_subcommand("design", "Design couplings with a prescribed degeneracy");
    design->add_option("--target", target, "evans:L | gamma:M | simultaneous | imprint:FILE")->required();

    bool g_roots = false;
    int g_taylor = -1;
    std::string g_folds;
    double g_lo = NAN, g_hi = NAN;
    auto* gamma = app.add_subcommand("gamma", "Existence function Gamma_0");
    gamma->add_flag("--roots", g_roots, "Roots with multiplicities");
    gamma->add_option("--taylor", g_taylor, "Taylor coefficients up to order M")->check(CLI::NonNegativeNumber);
    gamma->add_option("--folds", g_folds, "Fold curves: px,py,xmin,xmax,ymin,ymax,nx,ny");
    gamma->add_option("--lo", g_lo, "Lower end of the root interval");
    gamma->add_option("--hi", g_hi, "Upper end of the root interval");

    double e_at = 0;
    int e_taylor = -1;
    std::string e_roots;
    bool e_bound = false;
    auto* evans = app.add_subcommand("evans", "Evans function E_0");
    evans->add_option("--at", e_at, "Front speed c (slow units)");
    evans->add_option("--taylor", e_taylor, "Taylor coefficients at lambda = 0 up to order M")->check(CLI::NonNegativeNumber);
    evans->add_option("--roots", e_roots, "Root search box xmin,xmax,ymin,ymax");
    evans->add_flag("--bound", e_bound, "A-priori root and spectrum bounds");

    int j_k = 0, j_ell = 0, j_samples = 401;
    double j_ymin = -5, j_ymax = 5;
    auto* jordan = app.add_subcommand("jordan", "Jordan chain profiles of the stationary front");
    jordan->add_option("--k", j_k, "Chain index")->required();
    jordan->add_option("--ell", j_ell, "Degeneracy order")->required();
    jordan->add_option("--ymin", j_ymin, "Left end of the sample range");
    jordan->add_option("--ymax", j_ymax, "Right end of the sample range");
    jordan->add_option("--samples", j_samples, "Number of samples");

    OdeFlags of;
    auto* ode = app.add_subcommand("ode", "Reduced speed ODE");
    ode->add_flag("--from-analysis", of.from_analysis, "Coefficients from Gamma_0 and E_0 of the config");
    ode->add_option("--nf", of.nf, "Scaled normal form nu0,l,m,n,a11,a12,delta");
    ode->add_flag("--integrate", of.integrate, "Integrate a trajectory");
    ode->add_flag("--equilibria", of.equilibria, "Classify equilibria");
    ode->add_option("--shoot", of.shoot, "Homoclinic shooting sweep numin,numax,steps");
    ode->add_flag("--lyapunov", of.lyapunov, "Largest Lyapunov exponent");
    ode->add_option("--n-prime", of.n_prime, "Dimension of the reduced system (default N)");
    ode->add_option("--scale", of.scale, "Scale h (default: natural scale)");
    ode->add_option("--t-end", of.t_end, "Integration horizon");
    ode->add_option("--y0", of.y0, "Initial state, comma separated");
    ode->add_option("--renorm", of.renorm, "Renormalisation interval for --lyapunov");

    auto* pde_sim = app.add_subcommand("pde-sim", "Direct simulation of the PDE");
    auto* pde_cont = app.add_subcommand("pde-continue", "Continuation of travelling fronts");

    std::string suite = "paper-params";
    int only = 0;
    std::uint64_t seed = 20240601;
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->add_option("--suite", suite, "paper-params | properties | acceptance | all")
        ->check(CLI::IsMember({"paper-params", "properties", "acceptance", "all"}));
    verify->add_option("--only", only, "Single acceptance criterion (1-12)")->check(CLI::Range(1, 12));
    verify->add_option("--seed", seed, "Seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        report_error(g, "usage", e.what(), 2);
        return 2;
    }

    try {
        if (*design) return run_design(g, target);
        if (*gamma) return run_gamma(g, g_roots, g_taylor, g_folds, g_lo, g_hi);
        if (*evans) return run_evans(g, e_at, e_taylor, e_roots, e_bound);
        if (*jordan) return run_jordan(g, j_k, j_ell, j_ymin, j_ymax, j_samples);
        if (*ode) return run_ode(g, of);
        if (*pde_sim) return run_pde_sim(g);
        if (*pde_cont) return run_pde_continue(g);
        if (*verify) return run_verify(g, suite, only, seed);
    } catch (const UsageError& e) {
        report_error(g, "usage", e.what(), 2);
        return 2;
    } catch (const DomainError& e) {
        report_error(g, "domain", e.what(), 1);
        return 1;
    } catch (const std::exception& e) {
        report_error(g, "internal", e.what(), 1);
        return 1;
    }
    return 2;
}
