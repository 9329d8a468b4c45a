#include "boltz/dsmc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "boltz/csv.hpp"
#include "boltz/error.hpp"

namespace boltz {

using std::numbers::pi;

std::mt19937_64 make_stream(std::uint64_t seed, int run) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(run), 0x9e3779b9u};
    return std::mt19937_64(seq);
}

namespace {

void unit_vector(std::mt19937_64& rng, int d, double* out) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    if (d == 2) {
        const double th = 2.0 * pi * U(rng);
        out[0] = std::cos(th);
        out[1] = std::sin(th);
        return;
    }
    const double mu = 2.0 * U(rng) - 1.0;
    const double ph = 2.0 * pi * U(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    out[0] = s * std::cos(ph);
    out[1] = s * std::sin(ph);
    out[2] = mu;
}

double sphere_area(int d) { return d == 2 ? 2.0 * pi : 4.0 * pi; }

}  // namespace

ParticleEnsemble sample_particles(const InitialCondition& ic, int d, std::size_t Np, const VHSKernel& kernel,
                                  std::uint64_t seed, int run) {
    if (d != 2 && d != 3) throw std::invalid_argument("sample_particles: d must be 2 or 3");
    if (Np < 2) throw std::invalid_argument("sample_particles: need at least two particles");
    if (is_inhomogeneous(ic.kind)) throw std::invalid_argument("sample_particles: initial condition is inhomogeneous");
    validate_kernel(kernel);
    ParticleEnsemble e;
    e.d = d;
    e.kernel = kernel;
    e.seed = seed;
    e.run = run;
    e.rng = make_stream(seed, run);
    e.v.resize(Np * d);
    std::normal_distribution<double> N01(0.0, 1.0);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    auto& rng = e.rng;
    switch (ic.kind) {
        case IcKind::maxwellian: {
            if (!(ic.rho > 0.0) || !(ic.T > 0.0)) throw std::invalid_argument("sample_particles: maxwellian needs rho, T > 0");
            e.rho = ic.rho;
            const double s = std::sqrt(ic.T);
            for (std::size_t i = 0; i < Np; ++i)
                for (int a = 0; a < d; ++a) e.v[i * d + a] = ic.u[a] + s * N01(rng);
            break;
        }
        case IcKind::bi_gaussian: {
            if (!(ic.sigma > 0.0)) throw std::invalid_argument("sample_particles: bi_gaussian needs sigma > 0");
            for (std::size_t i = 0; i < Np; ++i) {
                const double sgn = U(rng) < 0.5 ? 1.0 : -1.0;
                for (int a = 0; a < d; ++a) e.v[i * d + a] = sgn * ic.v0[a] + ic.sigma * N01(rng);
            }
            break;
        }
        case IcKind::ball_indicator: {
            if (!(ic.radius > 0.0)) throw std::invalid_argument("sample_particles: ball needs a positive radius");
            for (std::size_t i = 0; i < Np; ++i) {
                double r2;
                do {
                    r2 = 0.0;
                    for (int a = 0; a < d; ++a) {
                        e.v[i * d + a] = ic.radius * (2.0 * U(rng) - 1.0);
                        r2 += e.v[i * d + a] * e.v[i * d + a];
                    }
                } while (r2 > ic.radius * ic.radius);
            }
            break;
        }
        case IcKind::bkw2d: {
            if (d != 2) throw std::invalid_argument("sample_particles: bkw2d is two-dimensional");
            // |v|^2 is a mixture of Gamma(1, 2S) and Gamma(2, 2S)
            const double S = bkw_shape(ic.t0);
            const double w1 = (2.0 * S - 1.0) / S;
            std::gamma_distribution<double> G1(1.0, 2.0 * S), G2(2.0, 2.0 * S);
            for (std::size_t i = 0; i < Np; ++i) {
                const double q = U(rng) < w1 ? G1(rng) : G2(rng);
                double n[3];
                unit_vector(rng, 2, n);
                e.v[i * 2] = std::sqrt(q) * n[0];
                e.v[i * 2 + 1] = std::sqrt(q) * n[1];
            }
            break;
        }
        default: throw std::invalid_argument("sample_particles: unsupported initial condition");
    }
    return e;
}

EnsembleTotals ensemble_totals(const ParticleEnsemble& ens) {
    EnsembleTotals t;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double* p = ens.particle(i);
        for (int a = 0; a < ens.d; ++a) {
            t.momentum[a] += p[a];
            t.energy += 0.5 * p[a] * p[a];
        }
    }
    return t;
}

CollisionStats collide_step(ParticleEnsemble& ens, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("collide_step: dt must be positive");
    const int d = ens.d;
    const std::size_t Np = ens.size();
    CollisionStats st;
    double vmax = 0.0;
    for (std::size_t i = 0; i < Np; ++i) {
        double s = 0.0;
        for (int a = 0; a < d; ++a) s += ens.particle(i)[a] * ens.particle(i)[a];
        vmax = std::max(vmax, std::sqrt(s));
    }
    const double gamma = ens.kernel.gamma;
    const double gmax = 2.0 * vmax;
    const double pmax = sphere_area(d) * ens.kernel.C * ens.rho * std::pow(gmax, gamma) * dt;
    st.max_probability = pmax;
    if (pmax > 1.0)
        throw NumericalError("DSMC collision probability " + std::to_string(pmax) + " exceeds 1; use a smaller dt");

    std::vector<std::size_t> perm(Np);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), ens.rng);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (std::size_t k = 0; k + 1 < Np; k += 2) {
        if (U(ens.rng) >= pmax) continue;
        ++st.candidates;
        double* p = ens.particle(perm[k]);
        double* q = ens.particle(perm[k + 1]);
        double g[3], c[3], g2 = 0.0;
        for (int a = 0; a < d; ++a) {
            g[a] = p[a] - q[a];
            c[a] = 0.5 * (p[a] + q[a]);
            g2 += g[a] * g[a];
        }
        const double gn = std::sqrt(g2);
        if (gamma > 0.0 && U(ens.rng) >= std::pow(gn / gmax, gamma)) continue;
        ++st.collisions;
        double n[3];
        unit_vector(ens.rng, d, n);
        double e0 = 0.0, e1 = 0.0, scale = 0.0, mdef = 0.0;
        for (int a = 0; a < d; ++a) e0 += p[a] * p[a] + q[a] * q[a];
        for (int a = 0; a < d; ++a) {
            const double before = p[a] + q[a];
            scale += std::abs(p[a]) + std::abs(q[a]);
            p[a] = c[a] + 0.5 * gn * n[a];
            q[a] = c[a] - 0.5 * gn * n[a];
            mdef = std::max(mdef, std::abs(p[a] + q[a] - before));
            e1 += p[a] * p[a] + q[a] * q[a];
        }
        if (scale > 0.0) st.momentum_defect = std::max(st.momentum_defect, mdef / scale);
        if (e0 > 0.0) st.energy_defect = std::max(st.energy_defect, std::abs(e1 - e0) / e0);
    }
    return st;
}

std::vector<std::string> dsmc_observables(int d) {
    std::vector<std::string> n{"T"};
    for (int a = 0; a < d; ++a) n.push_back("T" + std::to_string(a + 1));
    n.push_back("P12");
    n.push_back("M4");
    n.push_back("M6");
    n.push_back("M8");
    return n;
}

std::vector<double> ensemble_observables(const ParticleEnsemble& ens) {
    const int d = ens.d;
    const double Np = static_cast<double>(ens.size());
    double u[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < ens.size(); ++i)
        for (int a = 0; a < d; ++a) u[a] += ens.particle(i)[a];
    for (int a = 0; a < d; ++a) u[a] /= Np;
    double Tc[3] = {0.0, 0.0, 0.0}, p12 = 0.0, m4 = 0.0, m6 = 0.0, m8 = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        const double* p = ens.particle(i);
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) {
            Tc[a] += (p[a] - u[a]) * (p[a] - u[a]);
            r2 += p[a] * p[a];
        }
        p12 += (p[0] - u[0]) * (p[1] - u[1]);
        m4 += r2 * r2;
        m6 += r2 * r2 * r2;
        m8 += r2 * r2 * r2 * r2;
    }
    std::vector<double> out;
    double T = 0.0;
    for (int a = 0; a < d; ++a) T += Tc[a];
    out.push_back(T / (d * Np));
    for (int a = 0; a < d; ++a) out.push_back(Tc[a] / Np);
    out.push_back(ens.rho * p12 / Np);
    out.push_back(ens.rho * m4 / Np);
    out.push_back(ens.rho * m6 / Np);
    out.push_back(ens.rho * m8 / Np);
    return out;
}

int EstimatedMoments::index(const std::string& name) const {
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<int>(i);
    return -1;
}

EstimatedMoments estimate_moments(const std::vector<std::vector<std::vector<double>>>& samples,
                                  const std::vector<double>& times, const std::vector<std::string>& names,
                                  std::size_t Np) {
    if (samples.empty()) throw std::invalid_argument("estimate_moments: no runs");
    EstimatedMoments m;
    m.names = names;
    m.times = times;
    m.runs = static_cast<int>(samples.size());
    m.Np = Np;
    m.has_stderr = samples.size() >= 2;
    const std::size_t nt = times.size(), no = names.size();
    m.mean.assign(nt, std::vector<double>(no, 0.0));
    m.stderr_.assign(nt, std::vector<double>(no, std::numeric_limits<double>::quiet_NaN()));
    for (const auto& run : samples)
        if (run.size() != nt) throw std::invalid_argument("estimate_moments: runs have different lengths");
    const double R = static_cast<double>(samples.size());
    for (std::size_t ti = 0; ti < nt; ++ti)
        for (std::size_t o = 0; o < no; ++o) {
            double s = 0.0;
            for (const auto& run : samples) s += run[ti][o];
            const double mean = s / R;
            m.mean[ti][o] = mean;
            if (m.has_stderr) {
                double v = 0.0;
                for (const auto& run : samples) v += (run[ti][o] - mean) * (run[ti][o] - mean);
                m.stderr_[ti][o] = std::sqrt(v / (R - 1.0) / R);
            }
        }
    return m;
}

EstimatedMoments run_dsmc(const DsmcConfig& cfg) {
    if (cfg.runs < 1) throw ConfigError("dsmc needs at least one run");
    if (!(cfg.dt > 0.0) || !(cfg.t_end >= cfg.dt)) throw ConfigError("dsmc needs 0 < dt <= t_end");
    if (cfg.output_every < 1) throw ConfigError("output_every must be at least 1");
    const long long steps = std::llround(cfg.t_end / cfg.dt);
    const double dt = cfg.t_end / static_cast<double>(steps);
    const auto names = dsmc_observables(cfg.d);
    std::vector<double> times;
    std::vector<std::vector<std::vector<double>>> samples;
    for (int r = 0; r < cfg.runs; ++r) {
        auto ens = sample_particles(cfg.ic, cfg.d, cfg.Np, cfg.kernel, cfg.seed, r);
        std::vector<std::vector<double>> series;
        if (r == 0) times.push_back(0.0);
        series.push_back(ensemble_observables(ens));
        for (long long s = 1; s <= steps; ++s) {
            EnsembleTotals before;
            if (cfg.check_conservation) before = ensemble_totals(ens);
            const auto st = collide_step(ens, dt);
            if (cfg.check_conservation) {
                const auto after = ensemble_totals(ens);
                double dp = 0.0;
                for (int a = 0; a < cfg.d; ++a) dp = std::max(dp, std::abs(after.momentum[a] - before.momentum[a]));
                const double scale = std::sqrt(2.0 * before.energy * static_cast<double>(ens.size()));
                if (st.momentum_defect > 1e-12 || st.energy_defect > 1e-12 || dp > 1e-12 * scale ||
                    std::abs(after.energy - before.energy) > 1e-12 * before.energy)
                    throw NumericalError("DSMC collision broke conservation at step " + std::to_string(s));
            }
            if (s % cfg.output_every == 0 || s == steps) {
                if (r == 0) times.push_back(s * dt);
                series.push_back(ensemble_observables(ens));
            }
        }
        samples.push_back(std::move(series));
    }
    auto est = estimate_moments(samples, times, names, cfg.Np);
    if (!cfg.out_dir.empty()) {
        ensure_directory(cfg.out_dir);
        CsvWriter w(join_path(cfg.out_dir, "dsmc_moments.csv"),
                    {"t", "observable", "mean", "stderr", "N_runs", "N_p"});
        for (std::size_t ti = 0; ti < times.size(); ++ti)
            for (std::size_t o = 0; o < names.size(); ++o)
                w.row_cells({format_double(times[ti]), names[o], format_double(est.mean[ti][o]),
                             est.has_stderr ? format_double(est.stderr_[ti][o]) : "nan", std::to_string(est.runs),
                             std::to_string(cfg.Np)});
    }
    return est;
}

}  // namespace boltz
