#include "boltz/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "boltz/error.hpp"

namespace boltz {

MomentSet moments(const std::vector<double>& f, const VelocityGrid& grid) {
    if (f.size() != grid.size()) throw std::invalid_argument("moments: field does not match grid");
    return moments(f.data(), grid);
}

MomentSet moments(const double* f, const VelocityGrid& g) {
    MomentSet m;
    const std::size_t N = g.size();
    const int d = g.d;
    const double w = g.cell_volume();
    double mom[3] = {0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) {
        const auto v = g.velocity(i);
        const double fi = f[i];
        m.rho += fi;
        for (int a = 0; a < d; ++a) mom[a] += v[a] * fi;
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += v[a] * v[a];
        const double r = std::sqrt(r2);
        double p = 1.0;
        for (int k = 0; k <= 8; ++k) {
            m.M[k] += p * fi;
            p *= r;
        }
        if (fi > 0.0)
            m.H += fi * std::log(fi);
        else if (fi < 0.0)
            ++m.negative_nodes;
    }
    m.rho *= w;
    m.H *= w;
    for (auto& x : m.M) x *= w;
    if (!(m.rho > 0.0)) {
        m.degenerate = true;
        return m;
    }
    for (int a = 0; a < d; ++a) m.u[a] = mom[a] * w / m.rho;
    for (std::size_t i = 0; i < N; ++i) {
        const auto v = g.velocity(i);
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) m.P[a][b] += (v[a] - m.u[a]) * (v[b] - m.u[b]) * f[i];
    }
    double tr = 0.0;
    for (int a = 0; a < d; ++a)
        for (int b = a; b < d; ++b) {
            m.P[a][b] *= w;
            m.P[b][a] = m.P[a][b];
        }
    for (int a = 0; a < d; ++a) tr += m.P[a][a];
    m.T = tr / (d * m.rho);
    return m;
}

double error_norm(const std::vector<double>& f, const std::vector<double>& g, Norm p) {
    if (f.size() != g.size()) throw std::invalid_argument("error_norm: grids differ");
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double e = std::abs(f[i] - g[i]);
        const double r = std::abs(g[i]);
        switch (p) {
            case Norm::L1: num += e; den += r; break;
            case Norm::L2: num += e * e; den += r * r; break;
            case Norm::Linf: num = std::max(num, e); den = std::max(den, r); break;
        }
    }
    if (!(den > 0.0)) throw std::invalid_argument("error_norm: reference has zero norm");
    return p == Norm::L2 ? std::sqrt(num / den) : num / den;
}

CellMoments cell_moments(const std::vector<double>& f, const VelocityGrid& g, const SpatialGrid& xg) {
    const std::size_t N = g.size();
    if (f.size() != N * static_cast<std::size_t>(xg.nx)) throw std::invalid_argument("cell_moments: field does not match grids");
    CellMoments out;
    out.rho.resize(xg.nx);
    out.T.resize(xg.nx);
    out.u.resize(xg.nx);
    for (int c = 0; c < xg.nx; ++c) {
        auto m = moments(f.data() + c * N, g);
        if (m.degenerate) throw NumericalError("vanishing local density in cell " + std::to_string(c));
        out.rho[c] = m.rho;
        out.T[c] = m.T;
        out.u[c] = m.u;
    }
    return out;
}

EntropyPair relative_entropies(const std::vector<double>& f, const VelocityGrid& g, const SpatialGrid& xg) {
    const std::size_t N = g.size();
    const int d = g.d;
    const double w = g.cell_volume();
    const double dx = xg.dx();
    auto cm = cell_moments(f, g, xg);

    EntropyPair e;
    double rho_g = 0.0;
    std::array<double, 3> mom{0.0, 0.0, 0.0};
    for (int c = 0; c < xg.nx; ++c) {
        rho_g += cm.rho[c];
        for (int a = 0; a < d; ++a) mom[a] += cm.rho[c] * cm.u[c][a];
    }
    std::array<double, 3> u_g{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) u_g[a] = mom[a] / rho_g;
    double energy = 0.0;
    for (int c = 0; c < xg.nx; ++c) {
        double du = 0.0;
        for (int a = 0; a < d; ++a) du += (cm.u[c][a] - u_g[a]) * (cm.u[c][a] - u_g[a]);
        energy += cm.rho[c] * (d * cm.T[c] + du);
    }
    const double T_g = energy / (d * rho_g);
    rho_g /= xg.nx;  // per unit length
    e.mass = rho_g * xg.L;

    const double log_norm_g = std::log(rho_g) - 0.5 * d * std::log(2.0 * std::numbers::pi * T_g);
    double Hl = 0.0, Hg = 0.0, l1 = 0.0;
    for (int c = 0; c < xg.nx; ++c) {
        const double log_norm_l = std::log(cm.rho[c]) - 0.5 * d * std::log(2.0 * std::numbers::pi * cm.T[c]);
        const double* fc = f.data() + c * N;
        for (std::size_t i = 0; i < N; ++i) {
            const auto v = g.velocity(i);
            double ql = 0.0, qg = 0.0;
            for (int a = 0; a < d; ++a) {
                ql += (v[a] - cm.u[c][a]) * (v[a] - cm.u[c][a]);
                qg += (v[a] - u_g[a]) * (v[a] - u_g[a]);
            }
            const double logMl = log_norm_l - ql / (2.0 * cm.T[c]);
            const double logMg = log_norm_g - qg / (2.0 * T_g);
            const double fi = fc[i];
            l1 += std::abs(fi - std::exp(logMg));
            if (fi > 0.0) {
                const double lf = std::log(fi);
                Hl += fi * (lf - logMl);
                Hg += fi * (lf - logMg);
            } else if (fi < 0.0) {
                ++e.negative_nodes;
            }
        }
        double du = 0.0;
        for (int a = 0; a < d; ++a) du += (cm.u[c][a] - u_g[a]) * (cm.u[c][a] - u_g[a]);
        const double r = cm.rho[c];
        e.hydro += r * std::log(r / rho_g) - 0.5 * d * r * std::log(cm.T[c] / T_g) - 0.5 * d * r +
                   r * (d * cm.T[c] + du) / (2.0 * T_g);
    }
    e.H_l = Hl * w * dx;
    e.H_g = Hg * w * dx;
    e.hydro *= dx;
    l1 *= w * dx;
    e.ckp_bound = l1 * l1 / (2.0 * e.mass);
    return e;
}

}  // namespace boltz
