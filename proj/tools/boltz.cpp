// Command-line driver: homogeneous, inhomogeneous and DSMC runs, the BKW
// accuracy table and the oscillation fit of entropy series.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <sstream>

#include "boltz/analysis.hpp"
#include "boltz/config.hpp"
#include "boltz/csv.hpp"
#include "boltz/dsmc.hpp"
#include "boltz/error.hpp"
#include "boltz/integrator.hpp"
#include "boltz/transport.hpp"

using namespace boltz;

namespace {

struct Common {
    std::string config;
    std::string out_dir;
    std::string profile;
    long long seed = -1;
};

std::string command_line(int argc, char** argv) {
    std::ostringstream os;
    for (int i = 0; i < argc; ++i) os << (i ? " " : "") << argv[i];
    return os.str();
}

RunConfig prepare(const Common& o, const char* solver) {
    RunConfig cfg = resolve_config(o.config, solver, o.profile);
    if (!o.out_dir.empty()) cfg.out_dir = o.out_dir;
    if (o.seed >= 0) cfg.seed = static_cast<std::uint64_t>(o.seed);
    validate(cfg);
    return cfg;
}

int run_homog(const RunConfig& cfg) {
    const auto r = run_homogeneous(to_homogeneous(cfg));
    const auto& m = r.series.back().m;
    std::printf("homog %s d=%d n_v=%d T_dom=%g: %zu steps, t=%g\n", to_string(cfg.method), cfg.d, cfg.n_v, cfg.T_dom,
                r.steps, r.series.back().t);
    std::printf("  rho=%.12g T=%.12g M4=%.8g H=%.10g negative_nodes=%zu\n", m.rho, m.T, m.M[4], m.H, m.negative_nodes);
    std::printf("  max per-step change of f^_0: %.3e\n", r.max_fhat0_change);
    if (cfg.bkw_reference) std::printf("  E1=%.5e E2=%.5e Einf=%.5e\n", r.series.back().E1, r.series.back().E2, r.series.back().Einf);
    std::printf("  output: %s\n", cfg.out_dir.c_str());
    return 0;
}

void print_fit(const OscillationFit& f, double L, int d) {
    if (!f.ok) {
        std::printf("  no oscillation fit: %s\n", f.diagnostic.c_str());
        return;
    }
    const auto p = predict_linearized(d, L);
    std::printf("  peaks=%d period=%.5g period/L=%.5g 2pi/period=%.5g alpha=%.5g -alpha*L^2=%.5g residual=%.3g\n",
                f.peaks, f.period, f.period / L, f.angular_frequency(), f.alpha, -f.alpha * L * L, f.residual);
    std::printf("  linearized period=%.5g period/L=%.5g\n", p.period, p.period_over_L);
}

int run_inhomog(const RunConfig& cfg) {
    const auto ic = to_inhomogeneous(cfg);
    const auto r = run_inhomogeneous(ic);
    const auto& a = r.series.front();
    const auto& b = r.series.back();
    std::printf("inhomog %s L=%g n_x=%d n_v=%d T_dom=%g: %zu steps of dt=%g\n", to_string(cfg.ic.kind), cfg.L, cfg.n_x,
                cfg.n_v, cfg.T_dom, r.steps, r.dt);
    std::printf("  final H_l=%.6e H_g=%.6e; relative mass drift %.3e, energy drift %.3e\n", b.e.H_l, b.e.H_g,
                (b.totals.mass - a.totals.mass) / a.totals.mass, (b.totals.energy - a.totals.energy) / a.totals.energy);
    std::vector<double> t, H;
    for (const auto& s : r.series) {
        t.push_back(s.t);
        H.push_back(s.e.H_l);
    }
    if (b.e.H_l > 0.0 && a.e.H_g > 0.0) print_fit(fit_oscillation(t, H, decay_window(t, H, cfg.L / 4.0)), cfg.L, cfg.d);
    std::printf("  output: %s\n", cfg.out_dir.c_str());
    return 0;
}

int run_dsmc_cmd(const RunConfig& cfg) {
    const auto est = run_dsmc(to_dsmc(cfg));
    std::printf("dsmc d=%d N_p=%zu runs=%d dt=%g\n", cfg.d, cfg.N_p, cfg.runs, cfg.dt);
    const std::size_t last = est.times.size() - 1;
    for (std::size_t o = 0; o < est.names.size(); ++o)
        std::printf("  %s(t=%g) = %.6g +- %.3g\n", est.names[o].c_str(), est.times[last], est.mean[last][o],
                    est.stderr_[last][o]);
    if (!est.has_stderr) std::printf("  single run: no standard error\n");
    std::printf("  output: %s\n", cfg.out_dir.c_str());
    return 0;
}

int run_verify(const std::string& profile, const std::string& out_dir, const std::string& cache_dir,
               const std::string& cmd) {
    const Profile p = parse_profile(profile.empty() ? "desk" : profile);
    auto cases = bkw_table_cases(p == Profile::paper);
    std::unique_ptr<CsvWriter> csv;
    if (!out_dir.empty()) {
        ensure_directory(out_dir);
        csv = std::make_unique<CsvWriter>(join_path(out_dir, "verify_bkw.csv"),
                                          std::vector<std::string>{"method", "M", "n_v", "T_dom", "E1", "reference_E1",
                                                                   "factor", "pass", "seconds"});
        RunConfig meta = profile_defaults(p);
        meta.out_dir = out_dir;
        meta.cache_dir = cache_dir;
        meta.ic.kind = IcKind::bkw2d;
        meta.bkw_reference = true;
        write_run_meta(meta, out_dir, cmd);
    }
    int failures = 0;
    std::printf("%-10s %3s %4s %6s %12s %12s %7s %s\n", "method", "M", "n_v", "T_dom", "E1(t=1)", "table", "ratio",
                "result");
    for (auto& c : cases) {
        run_bkw_case(c, cache_dir);
        const bool ok = c.pass();
        failures += !ok;
        std::printf("%-10s %3d %4d %6g %12.4e %12.4e %7.3f %s\n", to_string(c.method), c.M, c.n, c.T, c.E1,
                    c.reference_E1, c.E1 / c.reference_E1, ok ? "PASS" : "FAIL");
        if (csv)
            csv->row_cells({to_string(c.method), std::to_string(c.M), std::to_string(c.n), format_double(c.T),
                            format_double(c.E1), format_double(c.reference_E1), format_double(c.factor),
                            ok ? "1" : "0", format_double(c.seconds)});
    }
    std::printf("%s: %d of %zu cases outside the tolerance band\n", failures ? "FAIL" : "PASS", failures, cases.size());
    return failures ? 4 : 0;
}

int run_analyze(const std::string& file, double L, int d, const std::string& column, double t_min, double t_max,
                double decades, double eta, double lambda) {
    const auto table = read_csv(file);
    const int ct = table.column("t");
    const int ch = table.column(column);
    if (ct < 0 || ch < 0) throw ConfigError("'" + file + "' lacks a 't' or '" + column + "' column");
    std::vector<double> t, H;
    for (const auto& r : table.rows) {
        t.push_back(r[ct]);
        H.push_back(r[ch]);
    }
    if (t.empty()) throw ConfigError("'" + file + "' has no data rows");
    FitOptions opt = decay_window(t, H, std::isnan(t_min) ? L / 4.0 : t_min, decades);
    if (!std::isnan(t_max)) opt.t_max = t_max;
    std::printf("fit window [%g, %g] on column %s\n", opt.t_min, opt.t_max, column.c_str());
    const auto fit = fit_oscillation(t, H, opt);
    print_fit(fit, L, d);
    if (!std::isnan(eta) || !std::isnan(lambda)) {
        if (std::isnan(eta) || std::isnan(lambda)) throw ConfigError("give both --eta and --lambda");
        const auto p = predict_linearized(d, L, eta, lambda);
        std::printf("  R =");
        for (double r : p.R) std::printf(" %.6g", r);
        std::printf("; dominant damping %.6g\n", *p.dominant_damping);
    }
    return fit.ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral and DSMC solvers for the Boltzmann equation"};
    app.set_version_flag("--version", std::string(version_string()));
    app.require_subcommand(1);
    app.fallthrough();
    Common o;
    app.add_option("--config", o.config, "key = value config file with [section] headers");
    app.add_option("--out-dir", o.out_dir, "output directory");
    app.add_option("--profile", o.profile, "desk or paper");
    app.add_option("--seed", o.seed, "RNG seed (dsmc)");

    auto* homog = app.add_subcommand("homog", "space-homogeneous spectral run");
    auto* inhomog = app.add_subcommand("inhomog", "1D-x / 2D-v torus run with per-cell fast collisions");
    auto* dsmc = app.add_subcommand("dsmc", "Nanbu-Babovsky particle runs");
    auto* verify = app.add_subcommand("verify-bkw", "BKW accuracy table at t = 1");
    std::string cache_dir;
    verify->add_option("--cache-dir", cache_dir, "kernel-mode cache directory");

    auto* analyze = app.add_subcommand("analyze", "oscillation fit of an entropy CSV");
    std::string file, column = "H_l";
    double L = 0.0, t_min = NAN, t_max = NAN, decades = 5.0, eta = NAN, lambda = NAN;
    int d = 2;
    analyze->add_option("file", file, "entropy.csv")->required();
    analyze->add_option("--L", L, "box length")->required();
    analyze->add_option("--d", d, "velocity dimension");
    analyze->add_option("--column", column, "series to fit");
    analyze->add_option("--t-min", t_min, "window start (default L/4)");
    analyze->add_option("--t-max", t_max, "window end (default: decay by --decades)");
    analyze->add_option("--decades", decades, "decay that ends the default window");
    analyze->add_option("--eta", eta, "viscosity for the damping coefficients");
    analyze->add_option("--lambda", lambda, "heat conductivity for the damping coefficients");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::string cmd = command_line(argc, argv);
    try {
        if (*homog) {
            auto cfg = prepare(o, "homog");
            write_run_meta(cfg, cfg.out_dir, cmd);
            return run_homog(cfg);
        }
        if (*inhomog) {
            auto cfg = prepare(o, "inhomog");
            write_run_meta(cfg, cfg.out_dir, cmd);
            return run_inhomog(cfg);
        }
        if (*dsmc) {
            auto cfg = prepare(o, "dsmc");
            write_run_meta(cfg, cfg.out_dir, cmd);
            return run_dsmc_cmd(cfg);
        }
        if (*verify) return run_verify(o.profile, o.out_dir, cache_dir, cmd);
        if (*analyze) return run_analyze(file, L, d, column, t_min, t_max, decades, eta, lambda);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
