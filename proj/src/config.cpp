#include "boltz/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "boltz/csv.hpp"
#include "boltz/error.hpp"

#ifndef BOLTZ_VERSION
#define BOLTZ_VERSION "unknown"
#endif

namespace boltz {

const char* version_string() { return BOLTZ_VERSION; }

SolverKind parse_solver(const std::string& s) {
    if (s == "homog") return SolverKind::homog;
    if (s == "inhomog") return SolverKind::inhomog;
    if (s == "dsmc") return SolverKind::dsmc;
    throw ConfigError("unknown solver '" + s + "' (expected homog, inhomog or dsmc)");
}

const char* to_string(SolverKind k) {
    switch (k) {
        case SolverKind::homog: return "homog";
        case SolverKind::inhomog: return "inhomog";
        case SolverKind::dsmc: return "dsmc";
    }
    return "?";
}

Profile parse_profile(const std::string& s) {
    if (s == "desk") return Profile::desk;
    if (s == "paper") return Profile::paper;
    throw ConfigError("unknown profile '" + s + "' (expected desk or paper)");
}

const char* to_string(Profile p) { return p == Profile::desk ? "desk" : "paper"; }

RunConfig profile_defaults(Profile p) {
    RunConfig c;
    c.profile = p;
    if (p == Profile::paper) {
        c.n_v = 64;
        c.n_x = 64;
        c.runs = 1000;
    }
    return c;
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& v, const char* what) {
    throw ConfigError("key '" + key + "': '" + v + "' is not " + what);
}

long long to_int(const std::string& key, const std::string& v) {
    long long x = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v, "an integer");
    return x;
}

double to_double(const std::string& key, const std::string& v) {
    double x = 0.0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v, "a number");
    return x;
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_value(key, v, "a boolean");
}

Vec3 to_vec3(const std::string& key, const std::string& v) {
    Vec3 out{0.0, 0.0, 0.0};
    std::stringstream ss(v);
    std::string cell;
    int i = 0;
    while (std::getline(ss, cell, ',')) {
        if (i == 3) bad_value(key, v, "a list of at most three numbers");
        out[i++] = to_double(key, trim(cell));
    }
    if (i == 0) bad_value(key, v, "a list of numbers");
    return out;
}

std::string vec3_str(const Vec3& v) {
    return format_double(v[0]) + "," + format_double(v[1]) + "," + format_double(v[2]);
}

struct Key {
    const char* name;
    std::function<void(RunConfig&, const std::string&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define INT_KEY(name, field)                                                                                   \
    Key {                                                                                                      \
        name, [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_int(k, v); },       \
            [](const RunConfig& c) { return std::to_string(c.field); }                                        \
    }
#define DBL_KEY(name, field)                                                                                   \
    Key {                                                                                                      \
        name, [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_double(k, v); },    \
            [](const RunConfig& c) { return format_double(c.field); }                                         \
    }
#define BOOL_KEY(name, field)                                                                                  \
    Key {                                                                                                      \
        name, [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_bool(k, v); },      \
            [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }                        \
    }
#define STR_KEY(name, field)                                                                                   \
    Key {                                                                                                      \
        name, [](RunConfig& c, const std::string&, const std::string& v) { c.field = v; },                    \
            [](const RunConfig& c) { return c.field; }                                                        \
    }
#define VEC_KEY(name, field)                                                                                   \
    Key {                                                                                                      \
        name, [](RunConfig& c, const std::string& k, const std::string& v) { c.field = to_vec3(k, v); },      \
            [](const RunConfig& c) { return vec3_str(c.field); }                                              \
    }

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        Key{"run.solver", [](RunConfig& c, const std::string&, const std::string& v) { c.solver = parse_solver(v); },
            [](const RunConfig& c) { return std::string(to_string(c.solver)); }},
        Key{"run.profile", [](RunConfig& c, const std::string&, const std::string& v) { c.profile = parse_profile(v); },
            [](const RunConfig& c) { return std::string(to_string(c.profile)); }},
        Key{"run.seed",
            [](RunConfig& c, const std::string& k, const std::string& v) {
                const long long s = to_int(k, v);
                if (s < 0) bad_value(k, v, "a nonnegative integer");
                c.seed = static_cast<std::uint64_t>(s);
            },
            [](const RunConfig& c) { return std::to_string(c.seed); }},
        STR_KEY("run.out_dir", out_dir),
        STR_KEY("run.cache_dir", cache_dir),
        DBL_KEY("run.dt", dt),
        DBL_KEY("run.t_end", t_end),
        INT_KEY("run.output_every", output_every),
        INT_KEY("grid.d", d),
        INT_KEY("grid.n_v", n_v),
        DBL_KEY("grid.T_dom", T_dom),
        INT_KEY("grid.n_x", n_x),
        DBL_KEY("grid.L", L),
        Key{"method.kind", [](RunConfig& c, const std::string&, const std::string& v) { c.method = parse_method(v); },
            [](const RunConfig& c) { return std::string(to_string(c.method)); }},
        INT_KEY("method.M1", M1),
        INT_KEY("method.M2", M2),
        DBL_KEY("kernel.gamma", kernel.gamma),
        DBL_KEY("kernel.C", kernel.C),
        DBL_KEY("kernel.knudsen", knudsen),
        Key{"ic.kind",
            [](RunConfig& c, const std::string& k, const std::string& v) {
                try {
                    c.ic.kind = parse_ic_kind(v);
                } catch (const std::invalid_argument&) {
                    bad_value(k, v, "a known initial condition");
                }
            },
            [](const RunConfig& c) { return std::string(to_string(c.ic.kind)); }},
        DBL_KEY("ic.t0", ic.t0),
        DBL_KEY("ic.rho", ic.rho),
        DBL_KEY("ic.T", ic.T),
        VEC_KEY("ic.u", ic.u),
        VEC_KEY("ic.v0", ic.v0),
        DBL_KEY("ic.sigma", ic.sigma),
        DBL_KEY("ic.radius", ic.radius),
        DBL_KEY("ic.mollify_width", ic.mollify_width),
        DBL_KEY("ic.A0", ic.A0),
        DBL_KEY("ic.v_th", ic.v_th),
        Key{"dsmc.N_p",
            [](RunConfig& c, const std::string& k, const std::string& v) {
                const long long n = to_int(k, v);
                if (n < 0) bad_value(k, v, "a nonnegative integer");
                c.N_p = static_cast<std::size_t>(n);
            },
            [](const RunConfig& c) { return std::to_string(c.N_p); }},
        INT_KEY("dsmc.runs", runs),
        BOOL_KEY("dsmc.check_conservation", check_conservation),
        BOOL_KEY("output.bkw_reference", bkw_reference),
        BOOL_KEY("output.snapshot", snapshot),
        INT_KEY("output.cell_output_every", cell_output_every),
    };
    return table;
}

#undef INT_KEY
#undef DBL_KEY
#undef BOOL_KEY
#undef STR_KEY
#undef VEC_KEY

}  // namespace

std::map<std::string, std::string> parse_ini(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = origin + ":" + std::to_string(lineno) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + "malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) throw ConfigError(where + "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(where + "expected key = value");
        if (section.empty()) throw ConfigError(where + "key outside of a [section]");
        const std::string key = section + "." + trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) throw ConfigError(where + "empty value for '" + key + "'");
        if (!kv.emplace(key, value).second) throw ConfigError(where + "duplicate key '" + key + "'");
    }
    return kv;
}

void apply_settings(RunConfig& cfg, const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) {
        auto it = std::find_if(keys().begin(), keys().end(), [&](const Key& key) { return k == key.name; });
        if (it == keys().end()) throw ConfigError("unknown key '" + k + "'");
        it->set(cfg, k, v);
    }
    // solver-dependent defaults for keys the file leaves out
    if (!kv.count("kernel.gamma") && !kv.count("kernel.C")) {
        if (cfg.solver == SolverKind::inhomog)
            cfg.kernel = {0.0, 1.5};
        else
            cfg.kernel = cfg.d == 3 ? hard_spheres_3d() : maxwell_2d();
    }
    if (cfg.solver == SolverKind::inhomog) {
        if (!kv.count("grid.T_dom")) cfg.T_dom = 9.0;
        if (!kv.count("ic.kind")) cfg.ic.kind = IcKind::ini1;
        if (cfg.ic.kind == IcKind::ini2 && !kv.count("ic.v0")) cfg.ic.v0 = {0.5, 0.5, 0.0};
        if (!kv.count("run.dt")) cfg.dt = 0.0;
        if (!kv.count("run.output_every")) cfg.output_every = 1;
    }
    if (cfg.solver == SolverKind::dsmc && !kv.count("grid.d")) {
        cfg.d = 3;
        if (!kv.count("kernel.gamma") && !kv.count("kernel.C")) cfg.kernel = hard_spheres_3d();
    }
}

void validate(const RunConfig& c) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (c.d != 2 && c.d != 3) fail("grid.d must be 2 or 3");
    if (c.kernel.gamma < 0.0 || c.kernel.gamma > 1.0 || !(c.kernel.C > 0.0))
        fail("kernel needs gamma in [0, 1] and C > 0");
    if (!(c.t_end > 0.0)) fail("run.t_end must be positive");
    if (c.output_every < 1) fail("run.output_every must be at least 1");
    if (c.solver != SolverKind::dsmc) {
        if (c.n_v < 8 || c.n_v % 2) fail("grid.n_v must be even and at least 8");
        if (!(c.T_dom > 0.0)) fail("grid.T_dom must be positive");
        if (c.method == Method::fast && (c.M1 < 2 || c.M2 < 2)) fail("fast method needs method.M1, method.M2 >= 2");
    }
    switch (c.solver) {
        case SolverKind::homog:
            if (!(c.dt > 0.0) || c.t_end < c.dt) fail("homog needs 0 < run.dt <= run.t_end");
            if (is_inhomogeneous(c.ic.kind)) fail("homog needs a homogeneous initial condition");
            if (c.bkw_reference && (c.ic.kind != IcKind::bkw2d || c.d != 2))
                fail("output.bkw_reference needs ic.kind = bkw2d in d = 2");
            break;
        case SolverKind::inhomog:
            if (c.d != 2) fail("inhomog solves the 1D-x / 2D-v problem; grid.d must be 2");
            if (c.n_x < 2 || !(c.L > 0.0)) fail("inhomog needs grid.n_x >= 2 and grid.L > 0");
            if (!is_inhomogeneous(c.ic.kind)) fail("inhomog needs ic.kind = ini1 or ini2");
            if (c.method != Method::fast) fail("inhomog uses the fast collision method");
            if (!(c.knudsen > 0.0)) fail("kernel.knudsen must be positive");
            if (c.dt < 0.0) fail("run.dt must be nonnegative (0 picks the CFL step)");
            if (c.cell_output_every < 0) fail("output.cell_output_every must be nonnegative");
            break;
        case SolverKind::dsmc:
            if (!(c.dt > 0.0) || c.t_end < c.dt) fail("dsmc needs 0 < run.dt <= run.t_end");
            if (c.runs < 1 || c.N_p < 2) fail("dsmc needs dsmc.runs >= 1 and dsmc.N_p >= 2");
            if (is_inhomogeneous(c.ic.kind)) fail("dsmc needs a homogeneous initial condition");
            break;
    }
}

RunConfig load_config(const std::string& path, const std::string& profile_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    auto kv = parse_ini(buf.str(), path);
    Profile p = Profile::desk;
    if (auto it = kv.find("run.profile"); it != kv.end()) p = parse_profile(it->second);
    if (!profile_override.empty()) {
        p = parse_profile(profile_override);
        kv.erase("run.profile");
    }
    RunConfig cfg = profile_defaults(p);
    apply_settings(cfg, kv);
    return cfg;
}

RunConfig resolve_config(const std::string& path, const std::string& solver, const std::string& profile_override) {
    std::map<std::string, std::string> kv;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot read config file '" + path + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        kv = parse_ini(buf.str(), path);
    }
    if (auto it = kv.find("run.solver"); it != kv.end() && it->second != solver)
        throw ConfigError("config file is for solver '" + it->second + "', not '" + solver + "'");
    kv["run.solver"] = solver;
    Profile p = Profile::desk;
    if (auto it = kv.find("run.profile"); it != kv.end()) p = parse_profile(it->second);
    if (!profile_override.empty()) {
        p = parse_profile(profile_override);
        kv.erase("run.profile");
    }
    RunConfig cfg = profile_defaults(p);
    apply_settings(cfg, kv);
    return cfg;
}

std::vector<std::pair<std::string, std::string>> resolved_settings(const RunConfig& cfg) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& k : keys()) out.emplace_back(k.name, k.get(cfg));
    return out;
}

void write_run_meta(const RunConfig& cfg, const std::string& dir, const std::string& command) {
    ensure_directory(dir);
    const std::string path = join_path(dir, "run_meta");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << "code_version = " << version_string() << '\n';
    out << "command = " << command << '\n';
    out << "rk2_variant = midpoint\n";
    for (const auto& [k, v] : resolved_settings(cfg)) out << k << " = " << v << '\n';
}

HomogeneousConfig to_homogeneous(const RunConfig& c) {
    HomogeneousConfig h;
    h.d = c.d;
    h.n = c.n_v;
    h.T = c.T_dom;
    h.method = c.method;
    h.M1 = c.M1;
    h.M2 = c.M2;
    h.kernel = c.kernel;
    h.dt = c.dt;
    h.t_end = c.t_end;
    h.ic = c.ic;
    h.output_every = c.output_every;
    h.bkw_reference = c.bkw_reference;
    h.cache_dir = c.cache_dir;
    h.out_dir = c.out_dir;
    h.snapshot = c.snapshot;
    return h;
}

InhomogeneousConfig to_inhomogeneous(const RunConfig& c) {
    InhomogeneousConfig h;
    h.d = c.d;
    h.n = c.n_v;
    h.T = c.T_dom;
    h.nx = c.n_x;
    h.L = c.L;
    h.M1 = c.M1;
    h.M2 = c.M2;
    h.kernel = c.kernel;
    h.knudsen = c.knudsen;
    h.dt = c.dt;
    h.t_end = c.t_end;
    h.ic = c.ic;
    h.output_every = c.output_every;
    h.cell_output_every = c.cell_output_every;
    h.cache_dir = c.cache_dir;
    h.out_dir = c.out_dir;
    h.snapshot = c.snapshot;
    return h;
}

DsmcConfig to_dsmc(const RunConfig& c) {
    DsmcConfig h;
    h.d = c.d;
    h.kernel = c.kernel;
    h.ic = c.ic;
    h.Np = c.N_p;
    h.runs = c.runs;
    h.dt = c.dt;
    h.t_end = c.t_end;
    h.output_every = c.output_every;
    h.seed = c.seed;
    h.check_conservation = c.check_conservation;
    h.out_dir = c.out_dir;
    return h;
}

}  // namespace boltz
