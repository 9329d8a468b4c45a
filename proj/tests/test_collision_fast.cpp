#include <doctest.h>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "boltz/classical.hpp"
#include "boltz/fast.hpp"
#include "boltz/integrator.hpp"
#include "boltz/kernel.hpp"
#include "boltz/reference.hpp"

using namespace boltz;
using std::numbers::pi;

namespace {

double phi3_closed(double R, double s) {
    auto sinc = [](double x) { return x == 0.0 ? 1.0 : std::sin(x) / x; };
    return R * R * (2.0 * sinc(R * s) - sinc(R * s / 2.0) * sinc(R * s / 2.0));
}

double psi3_closed(double R, double s) {
    if (s == 0.0) return pi * R * R;
    return 2.0 * pi * R * std::cyl_bessel_j(1.0, R * std::abs(s)) / std::abs(s);
}

double adaptive(const std::function<double(double)>& f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-15);
}

std::size_t index_of(const VelocityGrid& g, const std::array<int, 3>& k) {
    std::array<int, 3> ix{0, 0, 0};
    for (int a = 0; a < g.d; ++a) ix[a] = g.index_of_mode(k[a]);
    return g.ravel(ix);
}

double rel_l1(const std::vector<double>& a, const std::vector<double>& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::abs(a[i] - b[i]);
        den += std::abs(b[i]);
    }
    return num / den;
}

}  // namespace

TEST_CASE("phi3 closed form, values and quadrature oracle") {
    CHECK(phi3(1.7, 0.0) == doctest::Approx(1.7 * 1.7).epsilon(1e-15));
    CHECK(phi3(1.0, pi) == doctest::Approx(-4.0 / (pi * pi)).epsilon(1e-12));
    CHECK(std::abs(phi3(2.0, 1e-7) - 4.0) < 1e-12);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> uR(0.1, 5.0), us(-20.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double R = uR(rng), s = us(rng);
        const double ref = 2.0 * adaptive([&](double r) { return r * std::cos(r * s); }, 0.0, R);
        CHECK(std::abs(phi3(R, s) - ref) < 1e-10 * R * R);
        CHECK(phi3(R, s) == doctest::Approx(phi3(R, -s)).epsilon(1e-15));
    }
}

TEST_CASE("phi2 values and quadrature oracle") {
    CHECK(phi2(1.3, 0.0) == doctest::Approx(2.6).epsilon(1e-15));
    CHECK(std::abs(phi2(1.0, pi)) < 1e-15);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> uR(0.1, 5.0), us(-20.0, 20.0);
    for (int i = 0; i < 100; ++i) {
        const double R = uR(rng), s = us(rng);
        const double ref = 2.0 * adaptive([&](double r) { return std::cos(r * s); }, 0.0, R);
        CHECK(std::abs(phi2(R, s) - ref) < 1e-12 * R);
    }
}

TEST_CASE("psi3: value at zero, evenness, refinement and Bessel oracles") {
    CHECK(psi3(1.5, 0.0) == doctest::Approx(pi * 2.25).epsilon(1e-14));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> uR(0.5, 12.0), us(-15.0, 15.0);
    for (int i = 0; i < 100; ++i) {
        const double R = uR(rng), s = us(rng);
        CHECK(psi3(R, s) == doctest::Approx(psi3(R, -s)).epsilon(1e-14));
        CHECK(std::abs(psi3(R, s) - psi3_closed(R, s)) < 1e-10 * pi * R * R);
    }
    // 10^6-node trapezoid of the defining theta integral
    const int m = 1000000;
    double s = 0.5 * (phi3_closed(1.0, 2.0) + phi3_closed(1.0, -2.0));
    for (int j = 1; j < m; ++j) s += phi3_closed(1.0, 2.0 * std::cos(j * pi / m));
    CHECK(std::abs(psi3(1.0, 2.0) - s * pi / m) < 1e-8);
}

TEST_CASE("sphere_fourier matches Bessel and sinc closed forms") {
    for (double a : {0.0, 0.3, 2.0, 7.5, 31.0}) {
        CHECK(sphere_fourier(2, a) == doctest::Approx(2.0 * pi * std::cyl_bessel_j(0.0, a)).epsilon(1e-11));
        CHECK(sphere_fourier(3, a) == doctest::Approx(4.0 * pi * (a == 0.0 ? 1.0 : std::sin(a) / a)).epsilon(1e-11));
    }
}

TEST_CASE("decoupling assumption is enforced") {
    const auto g2 = build_grid(2, 8, 4.0);
    CHECK_THROWS_AS(build_fast_decomposition(g2, hard_spheres_3d(), 1.0, 4, 4), std::invalid_argument);
    const auto g3 = build_grid(3, 8, 4.0);
    CHECK_THROWS_AS(build_fast_decomposition(g3, maxwell_2d(), 1.0, 4, 4), std::invalid_argument);
}

TEST_CASE("tables are real, finite and even under l -> -l, m -> -m") {
    const auto g = build_grid(2, 64, 8.0);
    const double R = truncation_for_domain(8.0, Representation::carleman).R;
    const auto t = build_fast_decomposition(g, maxwell_2d(), R, 4, 4);
    for (std::size_t p = 0; p < t.directions(); ++p)
        for (std::size_t i = 0; i < g.size(); ++i) {
            REQUIRE(std::isfinite(t.alpha[p][i]));
            REQUIRE(std::isfinite(t.alphap[p][i]));
        }
    const auto g3 = build_grid(3, 8, 4.0);
    const auto t3 = build_fast_decomposition(g3, hard_spheres_3d(), truncation_for_domain(4.0, Representation::carleman).R, 4, 4);
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> k(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        std::array<int, 3> l{k(rng), k(rng), k(rng)}, m{k(rng), k(rng), k(rng)};
        std::array<int, 3> ln{-l[0], -l[1], -l[2]}, mn{-m[0], -m[1], -m[2]};
        const double a = reconstruct_beta(t3, index_of(g3, l), index_of(g3, m));
        const double b = reconstruct_beta(t3, index_of(g3, ln), index_of(g3, mn));
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("3D hard-sphere reconstruction converges in M towards a direct angular quadrature") {
    const auto g = build_grid(3, 8, 4.0);
    const double R = truncation_for_domain(4.0, Representation::carleman).R;
    const std::array<int, 3> l{1, 0, 0}, m{0, 1, 0};
    const double xi = pi / g.T;
    // (B^f / 2) int_{S^2} phi3(xi l.e) psi3(xi |m_perp|) de with Gauss in cos(theta), trapezoid in phi
    using G = boost::math::quadrature::gauss<double, 40>;
    auto integrand_phi = [&](double c) {
        const double st = std::sqrt(1.0 - c * c);
        const int np = 256;
        double s = 0.0;
        for (int j = 0; j < np; ++j) {
            const double ph = 2.0 * pi * j / np;
            const std::array<double, 3> e{st * std::cos(ph), st * std::sin(ph), c};
            const double le = l[0] * e[0] + l[1] * e[1] + l[2] * e[2];
            const double me = m[0] * e[0] + m[1] * e[1] + m[2] * e[2];
            const double mp = std::sqrt(std::max(0.0, 1.0 - me * me));
            s += phi3_closed(R, xi * le) * psi3_closed(R, xi * mp);
        }
        return s * 2.0 * pi / np;
    };
    double ref = 0.0;
    for (int p = 0; p < 8; ++p) ref += G::integrate(integrand_phi, -1.0 + p * 0.25, -0.75 + p * 0.25);
    ref *= 0.5 * carleman_constant(3, hard_spheres_3d());

    double prev_gap = 1e300;
    std::vector<double> values;
    for (int M : {4, 8, 16, 32}) {
        const auto t = build_fast_decomposition(g, hard_spheres_3d(), R, M, M);
        values.push_back(reconstruct_beta(t, index_of(g, l), index_of(g, m)));
    }
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        const double gap = std::abs(values[i] - values[i + 1]);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(std::abs(values.back() - ref) < 1e-2 * std::abs(ref));
    CHECK(std::abs(values.back() - ref) < std::abs(values.front() - ref));
}

TEST_CASE("reconstruction depends on |l|, |m| and |l.m| only") {
    const auto g = build_grid(2, 16, 5.0);
    const double R = truncation_for_domain(5.0, Representation::carleman).R;
    const auto t = build_fast_decomposition(g, maxwell_2d(), R, 64, 64);
    auto beta = [&](std::array<int, 3> l, std::array<int, 3> m) {
        return reconstruct_beta(t, index_of(g, l), index_of(g, m));
    };
    // |l| = |m| = 5 with l.m = 0 and l.m = 15, pairs not related by a lattice symmetry
    const double x0 = beta({3, 4, 0}, {4, -3, 0}), y0 = beta({5, 0, 0}, {0, 5, 0});
    const double x1 = beta({5, 0, 0}, {3, 4, 0}), y1 = beta({4, 3, 0}, {0, 5, 0});
    const double scale = std::abs(beta({0, 0, 0}, {0, 0, 0}));
    CHECK(std::abs(x0 - y0) < 1e-10 * scale);
    CHECK(std::abs(x1 - y1) < 1e-10 * scale);
    // sign of l.m does not matter
    CHECK(std::abs(beta({3, 4, 0}, {-3, 4, 0}) - beta({3, 4, 0}, {3, -4, 0})) < 1e-10 * scale);
}

TEST_CASE("fast and dense Carleman operators agree as M grows") {
    const auto g = build_grid(2, 16, 5.0);
    const double R = truncation_for_domain(5.0, Representation::carleman).R;
    const auto dense = compute_carleman_modes(g, maxwell_2d(), R);
    InitialCondition ic;
    ic.kind = IcKind::bkw2d;
    SpectralTransform tr(g);
    const auto fh = tr.forward(sample_initial(ic, g));
    const auto ref = tr.inverse(apply_dense(dense, fh, Convolution::periodic));
    double prev = 1e300;
    for (int M : {4, 8, 16}) {
        FastCollision fc(std::make_shared<FastKernelTables>(build_fast_decomposition(g, maxwell_2d(), R, M, M)));
        const double diff = rel_l1(fc.apply(fh), ref);
        MESSAGE("M = " << M << ": relative L1 difference " << diff);
        CHECK(diff < prev);
        prev = diff;
    }
    CHECK(prev <= 1e-3);
}

TEST_CASE("mass conservation, evenness and transform count") {
    const auto g = build_grid(2, 32, 8.0);
    const double R = truncation_for_domain(8.0, Representation::carleman).R;
    FastCollision fc(std::make_shared<FastKernelTables>(build_fast_decomposition(g, maxwell_2d(), R, 6, 6)));
    InitialCondition ic;
    ic.kind = IcKind::bi_gaussian;
    // v -> -v maps node i to node (n - i) mod n per axis; the edge row -T is its
    // own mirror, so symmetrize the samples first
    auto mirror = [&](std::size_t i) {
        auto ix = g.unravel(i);
        for (int a = 0; a < 2; ++a) ix[a] = (g.n - ix[a]) % g.n;
        return g.ravel(ix);
    };
    const auto raw = sample_initial(ic, g);
    std::vector<double> even(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) even[i] = 0.5 * (raw[i] + raw[mirror(i)]);
    // angle tables at a Nyquist mode -n/2 cannot also serve its mirror +n/2, so
    // evenness is exact only for data without Nyquist content
    SpectralTransform tr(g);
    auto fh = tr.forward(even);
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.has_nyquist(i)) fh.c[i] = 0.0;
    const auto f = tr.inverse(fh);
    std::vector<double> q(g.size());
    fc.apply_nodal(f.data(), q.data());
    CHECK(fc.inverse_transforms() == 7u);
    double mass = 0.0, scale = 0.0;
    for (double x : q) {
        mass += x;
        scale += std::abs(x);
    }
    CHECK(std::abs(mass) < 1e-12 * scale);
    double qmax = 0.0;
    for (double x : q) qmax = std::max(qmax, std::abs(x));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(q[i] - q[mirror(i)]) < 1e-12 * qmax);
}

TEST_CASE("well-resolved Maxwellian is annihilated at n_v = 32") {
    const auto g = build_grid(2, 32, 8.0);
    const double R = truncation_for_domain(8.0, Representation::carleman).R;
    FastCollision fc(std::make_shared<FastKernelTables>(build_fast_decomposition(g, maxwell_2d(), R, 8, 8)));
    InitialCondition ic;
    ic.kind = IcKind::maxwellian;
    const auto f = sample_initial(ic, g);
    std::vector<double> q(g.size());
    fc.apply_nodal(f.data(), q.data());
    double worst = 0.0;
    for (double x : q) worst = std::max(worst, std::abs(x));
    CHECK(worst <= 1e-6);
}

TEST_CASE("cost scaling: doubling n_v at fixed M costs at most 5x") {
    auto time_apply = [](int n) {
        const auto g = build_grid(2, n, 8.0);
        const double R = truncation_for_domain(8.0, Representation::carleman).R;
        FastCollision fc(std::make_shared<FastKernelTables>(build_fast_decomposition(g, maxwell_2d(), R, 4, 4)));
        InitialCondition ic;
        ic.kind = IcKind::maxwellian;
        const auto f = sample_initial(ic, g);
        std::vector<double> q(g.size());
        fc.apply_nodal(f.data(), q.data());
        double best = 1e300;
        for (int rep = 0; rep < 9; ++rep) {
            const auto t0 = std::chrono::steady_clock::now();
            for (int k = 0; k < 200; ++k) fc.apply_nodal(f.data(), q.data());
            best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        }
        return best;
    };
    const double t32 = time_apply(32), t64 = time_apply(64);
    MESSAGE("apply time n=32 " << t32 / 200 << " s, n=64 " << t64 / 200 << " s, ratio " << t64 / t32);
    CHECK(t64 <= 5.0 * t32);
}

TEST_CASE("BKW energy drift of the fast method is within 10x of the classical drift") {
    auto drift = [](Method m) {
        HomogeneousConfig h;
        h.n = 32;
        h.T = 7.0;
        h.method = m;
        h.M1 = h.M2 = 8;
        h.ic.kind = IcKind::bkw2d;
        h.dt = 0.01;
        h.t_end = 1.0;
        h.output_every = 5;
        const auto r = run_homogeneous(h);
        const double e0 = r.series.front().m.M[2];
        double worst = 0.0;
        for (const auto& s : r.series) worst = std::max(worst, std::abs(s.m.M[2] - e0) / e0);
        return worst;
    };
    const double c = drift(Method::classical), f = drift(Method::fast);
    MESSAGE("energy drift classical " << c << ", fast " << f);
    CHECK(f <= 10.0 * std::max(c, 1e-15));
}
