#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "frontlab/core.hpp"
#include "frontlab/existence.hpp"
#include "frontlab/pde.hpp"

namespace frontlab {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kFormatTag = "# frontlab v1";

/// Malformed input (bad flag, unknown key, wrong type): reported as a usage error.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

struct PdeConfig {
    double domain_half_length = 20;
    int n_x = 0;  // 0: smallest odd count with h <= eps/2
    double dt = 0;  // 0: 1e-2 * min(1, tau_min)
    double t_end = 100;
    int output_stride = 100;
    std::string scheme = "imex1";
    bool freeze = true;
    bool allow_coarse = false;
    double trap_radius = 1.5;
    std::string initial = "profile";  // profile | stationary | travelling
    double initial_speed = 0;  // slow units, used by the profile seed and the travelling solve
    Perturbation perturbation;
};

struct ContinuationConfig {
    std::string param = "alpha1";
    double min = -1e300, max = 1e300;
    double ds = 0.01, ds_min = 1e-5, ds_max = 0.05;
    int max_points = 100;
    int direction = 1;
    int eigen_count = 8;
    double initial_speed = 0;
    int snapshot_stride = 0;
};

struct RunConfig {
    SystemParams params;
    Coupling coupling{1};
    std::uint64_t seed = 0;
    PdeConfig pde;
    ContinuationConfig continuation;
    bool has_pde = false, has_continuation = false;
};

namespace detail {

inline void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw UsageError(where + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw UsageError("unknown key '" + it.key() + "' in " + where);
}

template <class T>
T get_as(const json& j, const std::string& key, const std::string& where) {
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw UsageError("key '" + key + "' in " + where + " has the wrong type");
    }
}

template <class T>
void read_opt(const json& j, const std::string& key, T& out, const std::string& where) {
    if (j.contains(key)) out = get_as<T>(j, key, where);
}

}  // namespace detail

inline json params_to_json(const SystemParams& p, const Coupling& f) {
    json j;
    j["n_slow"] = p.n_slow;
    j["epsilon"] = p.epsilon;
    j["tau"] = p.tau;
    j["d"] = p.d;
    j["gamma"] = f.gamma;
    j["alpha"] = f.alpha;
    j["beta"] = f.beta;
    j["higher"] = f.higher;
    return j;
}

inline json pde_to_json(const PdeConfig& c) {
    json j;
    j["domain_half_length"] = c.domain_half_length;
    j["n_x"] = c.n_x;
    j["dt"] = c.dt;
    j["t_end"] = c.t_end;
    j["output_stride"] = c.output_stride;
    j["scheme"] = c.scheme;
    j["freeze"] = c.freeze;
    j["allow_coarse"] = c.allow_coarse;
    j["trap_radius"] = c.trap_radius;
    j["initial"] = c.initial;
    j["initial_speed"] = c.initial_speed;
    json pj;
    pj["mode"] = c.perturbation.mode;
    pj["amplitude"] = c.perturbation.amplitude;
    pj["width"] = c.perturbation.width;
    pj["center"] = c.perturbation.center;
    pj["k"] = c.perturbation.k;
    j["perturbation"] = pj;
    return j;
}

inline json continuation_to_json(const ContinuationConfig& c) {
    json j;
    j["param"] = c.param;
    j["min"] = c.min;
    j["max"] = c.max;
    j["ds"] = c.ds;
    j["ds_min"] = c.ds_min;
    j["ds_max"] = c.ds_max;
    j["max_points"] = c.max_points;
    j["direction"] = c.direction;
    j["eigen_count"] = c.eigen_count;
    j["initial_speed"] = c.initial_speed;
    j["snapshot_stride"] = c.snapshot_stride;
    return j;
}

inline json to_json(const RunConfig& rc) {
    json j = params_to_json(rc.params, rc.coupling);
    j["seed"] = rc.seed;
    if (rc.has_pde) j["pde"] = pde_to_json(rc.pde);
    if (rc.has_continuation) j["continuation"] = continuation_to_json(rc.continuation);
    return j;
}

/// Strict parse: unknown keys and wrong types are usage errors; parameter preconditions are domain errors.
inline RunConfig parse_config(const json& j) {
    using namespace detail;
    reject_unknown(j, {"n_slow", "epsilon", "tau", "d", "gamma", "alpha", "beta", "higher", "seed", "pde", "continuation"},
                   "config");
    for (const char* k : {"n_slow", "epsilon", "tau", "d"})
        if (!j.contains(k)) throw UsageError(std::string("missing required key '") + k + "'");
    RunConfig rc;
    rc.params.n_slow = get_as<int>(j, "n_slow", "config");
    rc.params.epsilon = get_as<double>(j, "epsilon", "config");
    rc.params.tau = get_as<std::vector<double>>(j, "tau", "config");
    rc.params.d = get_as<std::vector<double>>(j, "d", "config");
    rc.params.validate();
    int n = rc.params.n_slow;
    rc.coupling = Coupling(n);
    read_opt(j, "gamma", rc.coupling.gamma, "config");
    read_opt(j, "alpha", rc.coupling.alpha, "config");
    read_opt(j, "beta", rc.coupling.beta, "config");
    read_opt(j, "higher", rc.coupling.higher, "config");
    read_opt(j, "seed", rc.seed, "config");
    rc.coupling.validate(n);
    if (j.contains("pde")) {
        const json& p = j.at("pde");
        reject_unknown(p,
                       {"domain_half_length", "n_x", "dt", "t_end", "output_stride", "scheme", "freeze",
                        "allow_coarse", "trap_radius", "initial", "initial_speed", "perturbation"},
                       "pde");
        auto& c = rc.pde;
        read_opt(p, "domain_half_length", c.domain_half_length, "pde");
        read_opt(p, "n_x", c.n_x, "pde");
        read_opt(p, "dt", c.dt, "pde");
        read_opt(p, "t_end", c.t_end, "pde");
        read_opt(p, "output_stride", c.output_stride, "pde");
        read_opt(p, "scheme", c.scheme, "pde");
        read_opt(p, "freeze", c.freeze, "pde");
        read_opt(p, "allow_coarse", c.allow_coarse, "pde");
        read_opt(p, "trap_radius", c.trap_radius, "pde");
        read_opt(p, "initial", c.initial, "pde");
        read_opt(p, "initial_speed", c.initial_speed, "pde");
        if (p.contains("perturbation")) {
            const json& q = p.at("perturbation");
            reject_unknown(q, {"mode", "amplitude", "width", "center", "k"}, "pde.perturbation");
            read_opt(q, "mode", c.perturbation.mode, "pde.perturbation");
            read_opt(q, "amplitude", c.perturbation.amplitude, "pde.perturbation");
            read_opt(q, "width", c.perturbation.width, "pde.perturbation");
            read_opt(q, "center", c.perturbation.center, "pde.perturbation");
            read_opt(q, "k", c.perturbation.k, "pde.perturbation");
        }
        if (c.scheme != "imex1" && c.scheme != "strang") throw UsageError("pde.scheme must be 'imex1' or 'strang'");
        if (c.initial != "profile" && c.initial != "stationary" && c.initial != "travelling")
            throw UsageError("pde.initial must be 'profile', 'stationary' or 'travelling'");
        if (c.perturbation.mode != "none" && c.perturbation.mode != "bump" && c.perturbation.mode != "chain")
            throw UsageError("pde.perturbation.mode must be 'none', 'bump' or 'chain'");
        if (c.output_stride < 1) throw DomainError("pde.output_stride must be >= 1");
        if (!(c.trap_radius > 1)) throw DomainError("pde.trap_radius must exceed 1");
        if (c.n_x == 0) c.n_x = Grid::nodes_for(c.domain_half_length, rc.params.epsilon / 2);
        if (c.dt == 0) c.dt = 1e-2 * std::min(1.0, rc.params.tau_min());
        rc.has_pde = true;
    }
    if (j.contains("continuation")) {
        const json& q = j.at("continuation");
        reject_unknown(q,
                       {"param", "min", "max", "ds", "ds_min", "ds_max", "max_points", "direction", "eigen_count",
                        "initial_speed", "snapshot_stride"},
                       "continuation");
        auto& c = rc.continuation;
        read_opt(q, "param", c.param, "continuation");
        read_opt(q, "min", c.min, "continuation");
        read_opt(q, "max", c.max, "continuation");
        read_opt(q, "ds", c.ds, "continuation");
        read_opt(q, "ds_min", c.ds_min, "continuation");
        read_opt(q, "ds_max", c.ds_max, "continuation");
        read_opt(q, "max_points", c.max_points, "continuation");
        read_opt(q, "direction", c.direction, "continuation");
        read_opt(q, "eigen_count", c.eigen_count, "continuation");
        read_opt(q, "initial_speed", c.initial_speed, "continuation");
        read_opt(q, "snapshot_stride", c.snapshot_stride, "continuation");
        if (c.direction != 1 && c.direction != -1) throw UsageError("continuation.direction must be 1 or -1");
        ParamId::parse(c.param).check(rc.params.n_slow);
        rc.has_continuation = true;
    }
    return rc;
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(j);
}

/// Shortest decimal representation that round-trips (17 significant digits at most).
inline std::string fmt_double(double x) {
    if (x == 0) return "0";
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) break;
    }
    return buf;
}

/// CSV table with a versioned '#' header block.
class CsvTable {
public:
    CsvTable(std::string kind, std::vector<std::string> columns) : kind_(std::move(kind)), cols_(std::move(columns)) {}

    void meta(const std::string& key, const std::string& value) { meta_.push_back(key + ": " + value); }
    void row(const std::vector<double>& values) {
        std::vector<std::string> s;
        for (double v : values) s.push_back(fmt_double(v));
        row_text(s);
    }
    void row_text(const std::vector<std::string>& values) {
        if (values.size() != cols_.size()) throw std::logic_error("CSV row width mismatch");
        rows_.push_back(values);
    }
    std::string str() const {
        std::ostringstream os;
        os << kFormatTag << "\n# kind: " << kind_ << "\n";
        for (auto& m : meta_) os << "# " << m << "\n";
        for (size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cols_[i];
        os << "\n";
        for (auto& r : rows_) {
            for (size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
            os << "\n";
        }
        return os.str();
    }
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
    std::vector<std::string> cols_;
    std::vector<std::string> meta_;
    std::vector<std::vector<std::string>> rows_;
};

/// Collects output files; writes them to a directory with a manifest, or streams them to stdout.
class OutputSink {
public:
    OutputSink(std::optional<std::string> dir, std::string command) : dir_(std::move(dir)), command_(std::move(command)) {}

    void add(const std::string& name, const std::string& content) { files_.push_back({name, content}); }
    void add(const std::string& name, const CsvTable& t) { add(name, t.str()); }

    void flush(const json& resolved_config, std::FILE* out = stdout) {
        if (!dir_) {
            for (size_t i = 0; i < files_.size(); ++i) {
                if (files_.size() > 1) std::fprintf(out, "%s== %s ==\n", i ? "\n" : "", files_[i].first.c_str());
                std::fputs(files_[i].second.c_str(), out);
            }
            return;
        }
        namespace fs = std::filesystem;
        fs::create_directories(*dir_);
        json manifest;
        manifest["tool"] = "frontlab";
        manifest["version"] = kVersion;
        manifest["format"] = "frontlab v1";
        manifest["command"] = command_;
        manifest["config"] = resolved_config;
        json names = json::array();
        for (auto& [name, content] : files_) {
            std::ofstream f(fs::path(*dir_) / name, std::ios::binary);
            f << content;
            names.push_back(name);
        }
        manifest["outputs"] = names;
        std::ofstream mf(fs::path(*dir_) / "manifest.json", std::ios::binary);
        mf << manifest.dump(2) << "\n";
    }

private:
    std::optional<std::string> dir_;
    std::string command_;
    std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace frontlab
