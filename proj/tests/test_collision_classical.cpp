#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "boltz/classical.hpp"
#include "boltz/diagnostics.hpp"
#include "boltz/integrator.hpp"
#include "boltz/reference.hpp"

using namespace boltz;
using std::numbers::pi;

namespace {

// Independent oracle for the 2D classical kernel modes:
// beta(l, m) = C int_0^R r^{1+gamma} (2 pi)^2 J0(xi r |l+m| / 2) J0(xi r |l-m| / 2) dr, xi = pi / T.
double beta_oracle_2d(const VelocityGrid& g, const VHSKernel& k, double R, const std::array<int, 3>& l,
                      const std::array<int, 3>& m) {
    const double a = std::hypot(l[0] + m[0], l[1] + m[1]);
    const double b = std::hypot(l[0] - m[0], l[1] - m[1]);
    const double xi = pi / g.T;
    auto f = [&](double r) {
        return std::pow(r, 1.0 + k.gamma) * std::cyl_bessel_j(0.0, 0.5 * xi * r * a) *
               std::cyl_bessel_j(0.0, 0.5 * xi * r * b);
    };
    double s = 0.0;
    const int panels = 64;
    for (int p = 0; p < panels; ++p)
        s += boost::math::quadrature::gauss<double, 30>::integrate(f, R * p / panels, R * (p + 1) / panels);
    return k.C * 4.0 * pi * pi * s;
}

SpectralField random_hermitian(const VelocityGrid& g, std::uint64_t seed, bool zero_nyquist) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> f(g.size());
    for (auto& x : f) x = nd(rng);
    SpectralTransform tr(g);
    auto fh = tr.forward(f);
    if (zero_nyquist)
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.has_nyquist(i)) fh.c[i] = 0.0;
    return fh;
}

std::size_t index_of(const VelocityGrid& g, const std::array<int, 3>& k) {
    std::array<int, 3> ix{0, 0, 0};
    for (int a = 0; a < g.d; ++a) ix[a] = g.index_of_mode(k[a]);
    return g.ravel(ix);
}

const ClassicalModesTable& table_n8() {
    static const auto t = [] {
        const auto g = build_grid(2, 8, 4.0);
        return compute_classical_modes(g, maxwell_2d(), truncation_for_domain(4.0, Representation::classical).R);
    }();
    return t;
}

}  // namespace

TEST_CASE("beta(0,0) equals C |S^1| |B_R| for a constant kernel") {
    const auto& t = table_n8();
    const double R = t.R;
    CHECK(t.beta(0, 0) == doctest::Approx(maxwell_2d().C * 2.0 * pi * pi * R * R).epsilon(1e-10));
}

TEST_CASE("kernel modes match the Bessel oracle and are symmetric on random pairs") {
    const auto& t = table_n8();
    const auto& g = t.grid;
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> k(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        std::array<int, 3> l{k(rng), k(rng), 0}, m{k(rng), k(rng), 0};
        const auto li = index_of(g, l), mi = index_of(g, m);
        const double ref = beta_oracle_2d(g, t.kernel, t.R, l, m);
        const double scale = t.beta(0, 0);
        CHECK(std::abs(t.beta(li, mi) - ref) < 1e-10 * scale);
        CHECK(std::abs(t.beta(mi, li) - ref) < 1e-10 * scale);
    }
}

TEST_CASE("kernel modes depend only on |l+m| and |l-m|") {
    const auto& t = table_n8();
    const auto& g = t.grid;
    const double a = t.beta(index_of(g, {1, 2, 0}), index_of(g, {3, -1, 0}));
    const double b = t.beta(index_of(g, {2, 3, 0}), index_of(g, {-1, 1, 0}));
    const double c = t.beta(index_of(g, {-3, 1, 0}), index_of(g, {-1, -2, 0}));
    CHECK(std::abs(a - b) < 1e-10 * std::abs(t.beta(0, 0)));
    CHECK(std::abs(a - c) < 1e-10 * std::abs(t.beta(0, 0)));
}

TEST_CASE("apply_classical equals a brute-force triple loop with oracle kernel modes") {
    const auto& t = table_n8();
    const auto& g = t.grid;
    const auto fh = random_hermitian(g, 11, true);
    const auto q = apply_classical(t, fh);

    const int h = g.n / 2;
    std::map<std::pair<int, int>, double> cache;
    auto beta = [&](const std::array<int, 3>& l, const std::array<int, 3>& m) {
        const int a = (l[0] + m[0]) * (l[0] + m[0]) + (l[1] + m[1]) * (l[1] + m[1]);
        const int b = (l[0] - m[0]) * (l[0] - m[0]) + (l[1] - m[1]) * (l[1] - m[1]);
        auto it = cache.find({a, b});
        if (it != cache.end()) return it->second;
        return cache[{a, b}] = beta_oracle_2d(g, t.kernel, t.R, l, m);
    };
    double worst = 0.0, scale = 0.0;
    for (int k0 = -h; k0 < h; ++k0)
        for (int k1 = -h; k1 < h; ++k1) {
            cplx s = 0.0;
            for (int l0 = -h; l0 < h; ++l0)
                for (int l1 = -h; l1 < h; ++l1) {
                    const std::array<int, 3> l{l0, l1, 0}, m{k0 - l0, k1 - l1, 0};
                    if (m[0] < -h || m[0] >= h || m[1] < -h || m[1] >= h) continue;
                    s += (beta(l, m) - beta(m, m)) * fh.c[index_of(g, l)] * fh.c[index_of(g, m)];
                }
            const cplx got = q.c[index_of(g, {k0, k1, 0})];
            worst = std::max(worst, std::abs(got - s));
            scale = std::max(scale, std::abs(s));
        }
    CHECK(worst < 1e-10 * scale);
}

TEST_CASE("mass cancellation, bilinearity at zero and Hermitian output") {
    const auto& t = table_n8();
    const auto& g = t.grid;
    double max_beta = 0.0;
    for (double x : t.F) max_beta = std::max(max_beta, std::abs(x));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (auto conv : {Convolution::truncated, Convolution::periodic}) {
            // the truncated box is asymmetric, so mirrored pairs exist only without Nyquist modes
            const auto fh = random_hermitian(g, seed, conv == Convolution::truncated);
            double max_f = 0.0;
            for (const auto& z : fh.c) max_f = std::max(max_f, std::abs(z));
            const auto q = apply_classical(t, fh, conv);
            CHECK(std::abs(q.c[0]) < 1e-14 * max_f * max_f * max_beta);
            double qmax = 0.0;
            for (const auto& z : q.c) qmax = std::max(qmax, std::abs(z));
            for (std::size_t k = 0; k < g.size(); ++k) {
                // a truncated sum reaches -n/2 but never its mirror +n/2
                if (conv == Convolution::truncated && g.has_nyquist(k)) continue;
                auto ix = g.unravel(k);
                for (int a = 0; a < g.d; ++a) ix[a] = (g.n - ix[a]) % g.n;
                CHECK(std::abs(q.c[g.ravel(ix)] - std::conj(q.c[k])) < 1e-12 * qmax);
            }
        }
    }
    SpectralField zero{g, cvec(g.size(), cplx(0.0))};
    const auto q = apply_classical(t, zero);
    for (const auto& z : q.c) CHECK(z == cplx(0.0));
}

TEST_CASE("mismatched grids are rejected") {
    const auto& t = table_n8();
    const auto other = build_grid(2, 8, 5.0);
    SpectralField f{other, cvec(other.size(), cplx(0.0))};
    CHECK_THROWS_AS(apply_classical(t, f), std::invalid_argument);
}

TEST_CASE("Maxwellian is annihilated at n_v = 32") {
    const auto g = build_grid(2, 32, 8.0);
    const auto t = compute_classical_modes(g, maxwell_2d(), truncation_for_domain(8.0, Representation::classical).R);
    InitialCondition ic;
    ic.kind = IcKind::maxwellian;
    SpectralTransform tr(g);
    const auto q = apply_classical(t, tr.forward(sample_initial(ic, g)));
    double worst = 0.0;
    for (const auto& z : q.c) worst = std::max(worst, std::abs(z));
    CHECK(worst <= 1e-6);
}

TEST_CASE("BKW energy variation over [0, 1] at n_v = 32 stays below 1e-4") {
    HomogeneousConfig h;
    h.n = 32;
    h.T = 7.0;
    h.method = Method::classical;
    h.ic.kind = IcKind::bkw2d;
    h.dt = 0.01;
    h.t_end = 1.0;
    h.output_every = 5;
    const auto r = run_homogeneous(h);
    const double e0 = r.series.front().m.M[2];
    double worst = 0.0;
    for (const auto& s : r.series) worst = std::max(worst, std::abs(s.m.M[2] - e0) / e0);
    MESSAGE("classical BKW relative energy variation " << worst);
    CHECK(worst <= 1e-4);
}
