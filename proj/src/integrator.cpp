#include "boltz/integrator.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "boltz/cache.hpp"
#include "boltz/csv.hpp"
#include "boltz/error.hpp"

namespace boltz {

FastOperator::FastOperator(std::shared_ptr<const FastKernelTables> t)
    : coll_(t), transform_(t->grid, coll_.backend()) {}

void FastOperator::rhs(const SpectralField& f, SpectralField& q) { q = transform_.forward(coll_.apply(f)); }

Method parse_method(const std::string& s) {
    if (s == "classical") return Method::classical;
    if (s == "fast") return Method::fast;
    throw ConfigError("unknown method '" + s + "' (expected classical or fast)");
}

const char* to_string(Method m) { return m == Method::classical ? "classical" : "fast"; }

std::unique_ptr<HomogeneousOperator> make_operator(const HomogeneousConfig& cfg) {
    const auto grid = build_grid(cfg.d, cfg.n, cfg.T);
    validate_kernel(cfg.kernel);
    if (cfg.method == Method::classical) {
        const double R = truncation_for_domain(cfg.T, Representation::classical).R;
        auto t = std::make_shared<ClassicalModesTable>(cached_classical_modes(cfg.cache_dir, grid, cfg.kernel, R));
        return std::make_unique<ClassicalOperator>(std::move(t));
    }
    const double R = truncation_for_domain(cfg.T, Representation::carleman).R;
    auto t = std::make_shared<FastKernelTables>(
        cached_fast_decomposition(cfg.cache_dir, grid, cfg.kernel, R, cfg.M1, cfg.M2));
    return std::make_unique<FastOperator>(std::move(t));
}

HomogeneousResult run_homogeneous(const HomogeneousConfig& cfg) {
    auto op = make_operator(cfg);
    return run_homogeneous(cfg, *op);
}

namespace {

void check_run(const HomogeneousConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(cfg.t_end >= cfg.dt)) throw ConfigError("t_end must be at least dt");
    if (cfg.output_every < 1) throw ConfigError("output_every must be at least 1");
    if (is_inhomogeneous(cfg.ic.kind)) throw ConfigError("homogeneous run with an inhomogeneous initial condition");
    if (cfg.bkw_reference && cfg.ic.kind != IcKind::bkw2d) throw ConfigError("BKW reference needs the bkw2d datum");
}

std::vector<std::string> moments_header(int d) {
    std::vector<std::string> h{"t", "rho"};
    for (int a = 0; a < d; ++a) h.push_back("u" + std::to_string(a + 1));
    h.push_back("T");
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) h.push_back("P" + std::to_string(a + 1) + std::to_string(b + 1));
    for (const char* k : {"M4", "M5", "M6", "M8"}) h.push_back(k);
    h.push_back("H_flogf");
    for (const char* k : {"M4_rel", "M5_rel", "M6_rel", "M8_rel"}) h.push_back(k);
    h.push_back("neg_node_count");
    return h;
}

std::vector<double> moments_row(double t, const MomentSet& m, const MomentSet& m0, int d) {
    std::vector<double> r{t, m.rho};
    for (int a = 0; a < d; ++a) r.push_back(m.u[a]);
    r.push_back(m.T);
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) r.push_back(m.P[a][b]);
    for (int k : {4, 5, 6, 8}) r.push_back(m.M[k]);
    r.push_back(m.H);
    for (int k : {4, 5, 6, 8}) r.push_back(m.M[k] / m0.M[k]);
    r.push_back(static_cast<double>(m.negative_nodes));
    return r;
}

bool all_finite(const SpectralField& f) {
    for (const auto& z : f.c)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
}

}  // namespace

HomogeneousResult run_homogeneous(const HomogeneousConfig& cfg, HomogeneousOperator& op) {
    check_run(cfg);
    const auto grid = build_grid(cfg.d, cfg.n, cfg.T);
    SpectralTransform tr(grid);
    const long long steps = std::max(1LL, std::llround(cfg.t_end / cfg.dt));
    const double dt = cfg.t_end / static_cast<double>(steps);

    std::vector<double> f0 = sample_initial(cfg.ic, grid);
    SpectralField fh = tr.forward(f0);

    std::unique_ptr<CsvWriter> mcsv, ecsv;
    if (!cfg.out_dir.empty()) {
        ensure_directory(cfg.out_dir);
        mcsv = std::make_unique<CsvWriter>(join_path(cfg.out_dir, "moments.csv"), moments_header(grid.d));
        mcsv->comment("H_flogf = sum f log f dv over f > 0; physical entropy is its negative");
        if (cfg.bkw_reference)
            ecsv = std::make_unique<CsvWriter>(join_path(cfg.out_dir, "errors.csv"),
                                               std::vector<std::string>{"t", "E1", "E2", "Einf"});
    }

    HomogeneousResult res;
    MomentSet m0;
    auto record = [&](double t) {
        auto vals = tr.inverse(fh);
        for (double x : vals)
            if (!std::isfinite(x)) throw NumericalError("non-finite solution at t = " + std::to_string(t));
        TimeSample s;
        s.t = t;
        s.m = moments(vals, grid);
        s.fhat0 = fh.c[0].real();
        if (res.series.empty()) m0 = s.m;
        if (cfg.bkw_reference) {
            std::vector<double> ref(grid.size());
            for (std::size_t i = 0; i < ref.size(); ++i) ref[i] = bkw_2d(cfg.ic.t0 + t, grid.velocity(i));
            s.E1 = error_norm(vals, ref, Norm::L1);
            s.E2 = error_norm(vals, ref, Norm::L2);
            s.Einf = error_norm(vals, ref, Norm::Linf);
            if (ecsv) ecsv->row({t, s.E1, s.E2, s.Einf});
        }
        if (mcsv) mcsv->row(moments_row(t, s.m, m0, grid.d));
        res.series.push_back(s);
        return vals;
    };

    record(0.0);
    auto rhs = [&](const SpectralField& f, SpectralField& q) { op.rhs(f, q); };
    for (long long s = 1; s <= steps; ++s) {
        const cplx before = fh.c[0];
        rk2_step(fh, rhs, dt);
        const double t = s * dt;
        if (!all_finite(fh)) throw NumericalError("non-finite solution at t = " + std::to_string(t));
        const double change = std::abs(fh.c[0] - before) / std::abs(before);
        res.max_fhat0_change = std::max(res.max_fhat0_change, change);
        if (s % cfg.output_every == 0 || s == steps) {
            auto vals = record(t);
            if (s == steps) res.final_values = std::move(vals);
        }
    }
    res.steps = static_cast<std::size_t>(steps);

    if (cfg.snapshot && !cfg.out_dir.empty()) {
        std::vector<std::string> h;
        for (int a = 0; a < grid.d; ++a) h.push_back("v" + std::to_string(a + 1));
        h.push_back("f");
        CsvWriter snap(join_path(cfg.out_dir, "snapshot_final.csv"), h);
        snap.comment("d=" + std::to_string(grid.d) + " n_v=" + std::to_string(grid.n) + " T_dom=" +
                     format_double(grid.T) + " t=" + format_double(cfg.t_end));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const auto v = grid.velocity(i);
            std::vector<double> r(v.begin(), v.begin() + grid.d);
            r.push_back(res.final_values[i]);
            snap.row(r);
        }
    }
    return res;
}

double calibrate_bkw_constant(HomogeneousOperator& unit_op, const VelocityGrid& grid, double t) {
    if (grid.d != 2) throw std::invalid_argument("BKW calibration is two-dimensional");
    SpectralTransform tr(grid);
    std::vector<double> f(grid.size()), dfdt(grid.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        f[i] = bkw_2d(t, grid.velocity(i));
        dfdt[i] = bkw_2d_dt(t, grid.velocity(i));
    }
    SpectralField q;
    unit_op.rhs(tr.forward(f), q);
    const auto qn = tr.inverse(q);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < qn.size(); ++i) {
        num += qn[i] * dfdt[i];
        den += qn[i] * qn[i];
    }
    if (!(den > 0.0)) throw NumericalError("BKW calibration: collision operator vanishes");
    return num / den;
}

std::vector<BkwCase> bkw_table_cases(bool extended) {
    struct Row {
        int n;
        double T, factor;
        double ref[4];  // classical, M = 4, 6, 8
    };
    std::vector<Row> rows = {{8, 4.0, 2.0, {0.02013, 0.02778, 0.02129, 0.02112}},
                             {16, 5.0, 2.0, {0.00204, 0.00329, 0.00238, 0.00224}}};
    if (extended) rows.push_back({32, 7.0, 3.0, {1.405e-5, 2.228e-5, 1.861e-5, 1.772e-5}});
    std::vector<BkwCase> out;
    for (const auto& r : rows)
        for (int j = 0; j < 4; ++j) {
            BkwCase c;
            c.method = j == 0 ? Method::classical : Method::fast;
            c.M = j == 0 ? 0 : 2 + 2 * j;
            c.n = r.n;
            c.T = r.T;
            c.reference_E1 = r.ref[j];
            c.factor = r.factor;
            out.push_back(c);
        }
    return out;
}

void run_bkw_case(BkwCase& c, const std::string& cache_dir) {
    HomogeneousConfig h;
    h.d = 2;
    h.n = c.n;
    h.T = c.T;
    h.method = c.method;
    h.M1 = h.M2 = std::max(c.M, 2);
    h.kernel = maxwell_2d();
    h.dt = 0.01;
    h.t_end = 1.0;
    h.ic.kind = IcKind::bkw2d;
    h.bkw_reference = true;
    h.output_every = 100;
    h.cache_dir = cache_dir;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = run_homogeneous(h);
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.E1 = r.series.back().E1;
}

}  // namespace boltz
