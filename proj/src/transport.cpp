#include "boltz/transport.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "boltz/cache.hpp"
#include "boltz/csv.hpp"
#include "boltz/error.hpp"
#include "boltz/integrator.hpp"

namespace boltz {

double van_leer(double a, double b) {
    const double p = a * b;
    return p > 0.0 ? 2.0 * p / (a + b) : 0.0;
}

void transport_rhs(const PhaseSpaceField& field, std::vector<double>& out) {
    const std::size_t N = field.cell_size();
    const int nx = field.xgrid.nx;
    const double inv_dx = 1.0 / field.xgrid.dx();
    const auto& f = field.f;
    out.assign(f.size(), 0.0);

    std::vector<double> v1(N);
    for (std::size_t j = 0; j < N; ++j) v1[j] = field.vgrid.velocity(j)[0];

    std::vector<double> slope(f.size());
    for (int c = 0; c < nx; ++c) {
        const double* fm = field.cell((c + nx - 1) % nx);
        const double* f0 = field.cell(c);
        const double* fp = field.cell((c + 1) % nx);
        double* s = slope.data() + c * N;
        for (std::size_t j = 0; j < N; ++j) s[j] = van_leer(f0[j] - fm[j], fp[j] - f0[j]);
    }
    // flux through the right face of cell c, telescoped into c and c+1
    std::vector<double> flux(N);
    for (int c = 0; c < nx; ++c) {
        const int cp = (c + 1) % nx;
        const double* fl = field.cell(c);
        const double* fr = field.cell(cp);
        const double* sl = slope.data() + c * N;
        const double* sr = slope.data() + cp * N;
        for (std::size_t j = 0; j < N; ++j) {
            const double face = v1[j] > 0.0 ? fl[j] + 0.5 * sl[j] : fr[j] - 0.5 * sr[j];
            flux[j] = v1[j] * face * inv_dx;
        }
        double* oc = out.data() + c * N;
        double* op = out.data() + cp * N;
        for (std::size_t j = 0; j < N; ++j) {
            oc[j] -= flux[j];
            op[j] += flux[j];
        }
    }
}

ConservedTotals conserved_totals(const PhaseSpaceField& field) {
    ConservedTotals s;
    const std::size_t N = field.cell_size();
    const int d = field.vgrid.d;
    for (int c = 0; c < field.xgrid.nx; ++c) {
        const double* fc = field.cell(c);
        for (std::size_t j = 0; j < N; ++j) {
            const auto v = field.vgrid.velocity(j);
            double v2 = 0.0;
            for (int a = 0; a < d; ++a) {
                s.momentum[a] += v[a] * fc[j];
                v2 += v[a] * v[a];
            }
            s.mass += fc[j];
            s.energy += 0.5 * v2 * fc[j];
        }
    }
    const double w = field.vgrid.cell_volume() * field.xgrid.dx();
    s.mass *= w;
    s.energy *= w;
    for (auto& p : s.momentum) p *= w;
    return s;
}

namespace {

void check_config(const InhomogeneousConfig& cfg) {
    if (!is_inhomogeneous(cfg.ic.kind)) throw ConfigError("inhomogeneous run needs ic ini1 or ini2");
    if (!(cfg.knudsen > 0.0)) throw ConfigError("knudsen factor must be positive");
    if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (cfg.output_every < 1) throw ConfigError("output_every must be at least 1");
    if (cfg.cell_output_every < 0) throw ConfigError("cell_output_every must be nonnegative");
    if (cfg.M1 < 2 || cfg.M2 < 2) throw ConfigError("fast method needs M1, M2 >= 2");
}

std::string snapshot_meta(const PhaseSpaceField& field, double t) {
    std::ostringstream os;
    os << "d=" << field.vgrid.d << " n_v=" << field.vgrid.n << " T_dom=" << format_double(field.vgrid.T)
       << " n_x=" << field.xgrid.nx << " L=" << format_double(field.xgrid.L)
       << " knudsen=" << format_double(field.knudsen) << " t=" << format_double(t);
    return os.str();
}

}  // namespace

double checked_time_step(const InhomogeneousConfig& cfg) {
    check_config(cfg);
    const auto xg = build_spatial_grid(cfg.nx, cfg.L);
    if (!(cfg.T > 0.0)) throw ConfigError("T_dom must be positive");
    if (!(cfg.cfl > 0.0) || cfg.cfl > 0.9) throw ConfigError("cfl must lie in (0, 0.9]");
    const double limit = 0.9 * xg.dx() / cfg.T;
    const double dt = cfg.dt > 0.0 ? cfg.dt : cfg.cfl * xg.dx() / cfg.T;
    if (dt > limit * (1.0 + 1e-12))
        throw ConfigError("CFL violation: dt = " + format_double(dt) + " exceeds 0.9 dx / T_dom = " +
                          format_double(limit));
    if (cfg.collisions) {
        // loss frequency bound C |S^{d-1}| rho_max (2 T_dom)^gamma / Kn; RK2 is stable for dt nu <= 2
        const double sphere = cfg.d == 2 ? 2.0 * std::numbers::pi : 4.0 * std::numbers::pi;
        const double rho_max = 1.0 + std::abs(cfg.ic.A0);
        const double nu = cfg.kernel.C * sphere * rho_max * std::pow(2.0 * cfg.T, cfg.kernel.gamma) / cfg.knudsen;
        if (dt * nu > 1.0)
            throw ConfigError("collision stability: dt * nu = " + format_double(dt * nu) +
                              " exceeds 1; reduce dt or raise the knudsen factor");
    }
    return dt;
}

InhomogeneousResult run_inhomogeneous(const InhomogeneousConfig& cfg) {
    const double dt_max = checked_time_step(cfg);
    const auto vg = build_grid(cfg.d, cfg.n, cfg.T);
    const auto xg = build_spatial_grid(cfg.nx, cfg.L);
    validate_kernel(cfg.kernel);

    // round the step count up so the final time is hit exactly
    const long long steps = static_cast<long long>(std::ceil(cfg.t_end / dt_max - 1e-9));
    const double dt = cfg.t_end / static_cast<double>(steps);

    PhaseSpaceField field{vg, xg, cfg.knudsen, sample_initial(cfg.ic, vg, &xg)};

    std::unique_ptr<FastCollision> coll;
    if (cfg.collisions) {
        const double R = truncation_for_domain(cfg.T, Representation::carleman).R;
        auto tables = std::make_shared<FastKernelTables>(
            cached_fast_decomposition(cfg.cache_dir, vg, cfg.kernel, R, cfg.M1, cfg.M2));
        coll = std::make_unique<FastCollision>(std::move(tables));
    }
    const std::size_t N = vg.size();
    std::vector<double> q(N);
    auto rhs = [&](const std::vector<double>& f, std::vector<double>& out) {
        PhaseSpaceField view{vg, xg, cfg.knudsen, {}};
        view.f = f;
        transport_rhs(view, out);
        if (!coll) return;
        for (int c = 0; c < xg.nx; ++c) {
            coll->apply_nodal(f.data() + c * N, q.data(), 1.0 / cfg.knudsen);
            double* oc = out.data() + c * N;
            for (std::size_t j = 0; j < N; ++j) oc[j] += q[j];
        }
    };

    std::unique_ptr<CsvWriter> ecsv, ccsv;
    if (!cfg.out_dir.empty()) {
        ensure_directory(cfg.out_dir);
        ecsv = std::make_unique<CsvWriter>(
            join_path(cfg.out_dir, "entropy.csv"),
            std::vector<std::string>{"t", "H_l", "H_g", "hydro_part", "neg_node_count", "ckp_bound", "mass", "energy"});
        ecsv->comment("relative entropies int f log(f/M); f <= 0 nodes contribute 0 and are counted");
        if (cfg.cell_output_every > 0) {
            std::vector<std::string> h{"t", "x", "rho"};
            for (int a = 0; a < cfg.d; ++a) h.push_back("u" + std::to_string(a + 1));
            h.push_back("T");
            ccsv = std::make_unique<CsvWriter>(join_path(cfg.out_dir, "moments-by-cell.csv"), h);
        }
    }

    InhomogeneousResult res;
    res.dt = dt;
    auto record = [&](double t) {
        EntropySample s;
        s.t = t;
        s.e = relative_entropies(field.f, vg, xg);
        s.totals = conserved_totals(field);
        if (ecsv)
            ecsv->row({t, s.e.H_l, s.e.H_g, s.e.hydro, static_cast<double>(s.e.negative_nodes), s.e.ckp_bound,
                       s.totals.mass, s.totals.energy});
        res.series.push_back(s);
    };
    auto record_cells = [&](double t) {
        if (!ccsv) return;
        const auto cm = cell_moments(field.f, vg, xg);
        for (int c = 0; c < xg.nx; ++c) {
            std::vector<double> r{t, xg.x(c), cm.rho[c]};
            for (int a = 0; a < cfg.d; ++a) r.push_back(cm.u[c][a]);
            r.push_back(cm.T[c]);
            ccsv->row(r);
        }
    };

    record(0.0);
    record_cells(0.0);
    for (long long s = 1; s <= steps; ++s) {
        rk2_step(field.f, rhs, dt);
        const double t = s * dt;
        for (double x : field.f)
            if (!std::isfinite(x)) throw NumericalError("non-finite solution at t = " + std::to_string(t));
        if (s % cfg.output_every == 0 || s == steps) record(t);
        if (cfg.cell_output_every > 0 && (s % cfg.cell_output_every == 0 || s == steps)) record_cells(t);
    }
    res.steps = static_cast<std::size_t>(steps);
    if (cfg.snapshot && !cfg.out_dir.empty())
        write_phase_snapshot(field, cfg.t_end, join_path(cfg.out_dir, "snapshot_final.csv"));
    res.final_field = std::move(field);
    return res;
}

void write_phase_snapshot(const PhaseSpaceField& field, double t, const std::string& path) {
    std::vector<std::string> h{"x"};
    for (int a = 0; a < field.vgrid.d; ++a) h.push_back("v" + std::to_string(a + 1));
    h.push_back("f");
    CsvWriter w(path, h);
    w.comment(snapshot_meta(field, t));
    const std::size_t N = field.cell_size();
    for (int c = 0; c < field.xgrid.nx; ++c)
        for (std::size_t j = 0; j < N; ++j) {
            const auto v = field.vgrid.velocity(j);
            std::vector<double> r{field.xgrid.x(c)};
            r.insert(r.end(), v.begin(), v.begin() + field.vgrid.d);
            r.push_back(field.cell(c)[j]);
            w.row(r);
        }
}

PhaseSpaceField read_phase_snapshot(const std::string& path, double* t) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open snapshot '" + path + "'");
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    if (line.rfind("# ", 0) != 0) throw ConfigError("snapshot '" + path + "' lacks its metadata line");
    std::map<std::string, std::string> meta;
    std::istringstream ls(line.substr(2));
    std::string tok;
    while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq != std::string::npos) meta[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto need = [&](const char* k) {
        auto it = meta.find(k);
        if (it == meta.end()) throw ConfigError(std::string("snapshot metadata lacks ") + k);
        return it->second;
    };
    PhaseSpaceField field;
    field.vgrid = build_grid(std::stoi(need("d")), std::stoi(need("n_v")), std::stod(need("T_dom")));
    field.xgrid = build_spatial_grid(std::stoi(need("n_x")), std::stod(need("L")));
    field.knudsen = std::stod(need("knudsen"));
    if (t) *t = std::stod(need("t"));
    const auto table = read_csv(path);
    const std::size_t total = field.vgrid.size() * static_cast<std::size_t>(field.xgrid.nx);
    if (table.rows.size() != total) throw ConfigError("snapshot '" + path + "' has the wrong number of rows");
    const int col = table.column("f");
    field.f.resize(total);
    for (std::size_t i = 0; i < total; ++i) field.f[i] = table.rows[i][col];
    return field;
}

}  // namespace boltz
