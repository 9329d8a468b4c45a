#include "boltz/classical.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "boltz/error.hpp"

namespace boltz {

using std::numbers::pi;

ModeVariants::ModeVariants(const VelocityGrid& g) : variants_(g.size()) {
    const int h = g.n / 2;
    for (std::size_t idx = 0; idx < g.size(); ++idx) {
        auto k = g.wavenumber(idx);
        std::vector<std::array<int, 3>> out{k};
        for (int a = 0; a < g.d; ++a) {
            if (k[a] != -h) continue;
            std::size_t cur = out.size();
            for (std::size_t j = 0; j < cur; ++j) {
                auto v = out[j];
                v[a] = h;
                out.push_back(v);
            }
        }
        variants_[idx] = std::move(out);
    }
}

std::vector<int> reachable_norms(int d, int n) {
    std::vector<char> seen(static_cast<std::size_t>(d) * n * n + 1, 0);
    if (d == 2) {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b) seen[a * a + b * b] = 1;
    } else {
        for (int a = 0; a <= n; ++a)
            for (int b = 0; b <= n; ++b)
                for (int c = 0; c <= n; ++c) seen[a * a + b * b + c * c] = 1;
    }
    std::vector<int> out;
    for (std::size_t i = 0; i < seen.size(); ++i)
        if (seen[i]) out.push_back(static_cast<int>(i));
    return out;
}

double ClassicalModesTable::entry(int a2, int b2) const {
    int ia = norm_index[a2];
    int ib = norm_index[b2];
    return F[static_cast<std::size_t>(ia) * rows() + ib];
}

namespace {

inline int sqnorm(const std::array<int, 3>& a, const std::array<int, 3>& b, int sign, int d) {
    int s = 0;
    for (int i = 0; i < d; ++i) {
        int c = a[i] + sign * b[i];
        s += c * c;
    }
    return s;
}

double averaged_beta(const ClassicalModesTable& t, const ModeVariants& mv, std::size_t li, std::size_t mi) {
    const auto& vl = mv.of(li);
    const auto& vm = mv.of(mi);
    double s = 0.0;
    for (const auto& a : vl)
        for (const auto& b : vm) s += t.entry(sqnorm(a, b, 1, t.grid.d), sqnorm(a, b, -1, t.grid.d));
    return s / static_cast<double>(vl.size() * vm.size());
}

struct RadialRule {
    std::vector<double> r, w;
};

RadialRule composite_gauss(double R, int panels) {
    using Q = boost::math::quadrature::gauss<double, 20>;
    const auto& x = Q::abscissa();
    const auto& wt = Q::weights();
    RadialRule rule;
    const double h = R / panels;
    for (int p = 0; p < panels; ++p) {
        const double c = (p + 0.5) * h;
        for (std::size_t j = 0; j < x.size(); ++j) {
            // 20 points: abscissae are strictly positive, use both signs
            rule.r.push_back(c + 0.5 * h * x[j]);
            rule.w.push_back(0.5 * h * wt[j]);
            rule.r.push_back(c - 0.5 * h * x[j]);
            rule.w.push_back(0.5 * h * wt[j]);
        }
    }
    return rule;
}

std::vector<double> table_for_rule(const VelocityGrid& g, const VHSKernel& k, const std::vector<int>& norms,
                                   const RadialRule& rule) {
    const std::size_t nn = norms.size();
    const std::size_t J = rule.r.size();
    std::vector<double> A(nn * J);
    for (std::size_t ia = 0; ia < nn; ++ia) {
        const double q = std::sqrt(static_cast<double>(norms[ia]));
        for (std::size_t j = 0; j < J; ++j)
            A[ia * J + j] = sphere_fourier(g.d, pi * rule.r[j] * q / (2.0 * g.T));
    }
    std::vector<double> wr(J);
    for (std::size_t j = 0; j < J; ++j) wr[j] = k.C * rule.w[j] * std::pow(rule.r[j], k.gamma + g.d - 1);
    std::vector<double> F(nn * nn);
    std::vector<double> row(J);
    for (std::size_t ia = 0; ia < nn; ++ia) {
        for (std::size_t j = 0; j < J; ++j) row[j] = A[ia * J + j] * wr[j];
        for (std::size_t ib = ia; ib < nn; ++ib) {
            const double* b = &A[ib * J];
            double s = 0.0;
            for (std::size_t j = 0; j < J; ++j) s += row[j] * b[j];
            F[ia * nn + ib] = s;
            F[ib * nn + ia] = s;
        }
    }
    return F;
}

}  // namespace

double ClassicalModesTable::beta(std::size_t li, std::size_t mi) const {
    ModeVariants mv(grid);
    return averaged_beta(*this, mv, li, mi);
}

void finalize_classical_table(ClassicalModesTable& t) {
    const auto& g = t.grid;
    t.norms = reachable_norms(g.d, g.n);
    t.norm_index.assign(static_cast<std::size_t>(g.d) * g.n * g.n + 1, -1);
    for (std::size_t i = 0; i < t.norms.size(); ++i) t.norm_index[t.norms[i]] = static_cast<int>(i);
    if (t.F.size() != t.norms.size() * t.norms.size()) throw std::invalid_argument("classical table has wrong size");
    ModeVariants mv(g);
    t.diag.resize(g.size());
    for (std::size_t m = 0; m < g.size(); ++m) t.diag[m] = averaged_beta(t, mv, m, m);
}

ClassicalModesTable compute_classical_modes(const VelocityGrid& grid, const VHSKernel& kernel, double R,
                                            double tol) {
    validate_kernel(kernel);
    if (!(R > 0.0)) throw std::invalid_argument("truncation radius R must be positive");
    ClassicalModesTable t;
    t.grid = grid;
    t.kernel = kernel;
    t.R = R;
    auto norms = reachable_norms(grid.d, grid.n);

    int panels = 2;
    auto prev = table_for_rule(grid, kernel, norms, composite_gauss(R, panels));
    for (;;) {
        if (panels >= 1024) {
            std::size_t worst = 0;
            auto cur = table_for_rule(grid, kernel, norms, composite_gauss(R, panels));
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (std::abs(cur[i] - prev[i]) > std::abs(cur[worst] - prev[worst])) worst = i;
            std::ostringstream os;
            os << "kernel-mode quadrature did not converge; worst class |l+m|^2=" << norms[worst / norms.size()]
               << ", |l-m|^2=" << norms[worst % norms.size()];
            throw NumericalError(os.str());
        }
        panels *= 2;
        auto cur = table_for_rule(grid, kernel, norms, composite_gauss(R, panels));
        double scale = 0.0, diff = 0.0;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            scale = std::max(scale, std::abs(cur[i]));
            diff = std::max(diff, std::abs(cur[i] - prev[i]));
        }
        prev = std::move(cur);
        if (diff <= tol * scale) break;
    }
    t.radial_panels = panels;
    t.F = std::move(prev);
    finalize_classical_table(t);
    return t;
}

namespace {

template <class Beta>
SpectralField apply_pairs(const VelocityGrid& g, const SpectralField& f, Convolution conv, const Beta& beta,
                          const std::vector<double>& diag) {
    if (!(f.grid == g) || f.c.size() != g.size()) throw std::invalid_argument("collision: spectral field does not match table grid");
    const std::size_t N = g.size();
    const int n = g.n;
    const int h = n / 2;
    const int d = g.d;
    std::vector<std::array<int, 3>> k(N);
    for (std::size_t i = 0; i < N; ++i) k[i] = g.wavenumber(i);

    SpectralField out{g, cvec(N, cplx(0.0, 0.0))};
    for (std::size_t li = 0; li < N; ++li) {
        const cplx fl = f.c[li];
        if (fl == cplx(0.0, 0.0)) continue;
        for (std::size_t mi = 0; mi < N; ++mi) {
            const cplx fm = f.c[mi];
            if (fm == cplx(0.0, 0.0)) continue;
            std::size_t target = 0;
            bool inside = true;
            for (int a = 0; a < d; ++a) {
                int s = k[li][a] + k[mi][a];
                if (conv == Convolution::truncated) {
                    if (s < -h || s >= h) {
                        inside = false;
                        break;
                    }
                } else {
                    s = ((s + h) % n + n) % n - h;
                }
                target = target * n + static_cast<std::size_t>(s < 0 ? s + n : s);
            }
            if (!inside) continue;
            out.c[target] += (beta(li, mi) - diag[mi]) * (fl * fm);
        }
    }
    return out;
}

}  // namespace

SpectralField apply_classical(const ClassicalModesTable& t, const SpectralField& f, Convolution conv) {
    const auto& g = t.grid;
    ModeVariants mv(g);
    std::vector<char> nyq(g.size());
    std::vector<std::array<int, 3>> k(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        nyq[i] = g.has_nyquist(i) ? 1 : 0;
        k[i] = g.wavenumber(i);
    }
    auto beta = [&](std::size_t li, std::size_t mi) {
        if (!nyq[li] && !nyq[mi]) return t.entry(sqnorm(k[li], k[mi], 1, g.d), sqnorm(k[li], k[mi], -1, g.d));
        return averaged_beta(t, mv, li, mi);
    };
    return apply_pairs(g, f, conv, beta, t.diag);
}

SpectralField apply_dense(const DenseModesTable& t, const SpectralField& f, Convolution conv) {
    auto beta = [&](std::size_t li, std::size_t mi) { return t.beta(li, mi); };
    return apply_pairs(t.grid, f, conv, beta, t.diag);
}

}  // namespace boltz
