#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "boltz/fft.hpp"
#include "boltz/grid.hpp"

using namespace boltz;

namespace {

std::vector<double> random_field(const VelocityGrid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> f(g.size());
    for (auto& x : f) x = u(rng);
    return f;
}

// Direct O(N^2) evaluation of f^_k = (1/n^d) sum_j f(v_j) e^{-i pi k.v_j / T}.
cplx direct_coefficient(const VelocityGrid& g, const std::vector<double>& f, std::size_t kidx) {
    const auto k = g.wavenumber(kidx);
    cplx s = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto v = g.velocity(j);
        double ph = 0.0;
        for (int a = 0; a < g.d; ++a) ph += k[a] * v[a];
        s += f[j] * std::polar(1.0, -std::numbers::pi * ph / g.T);
    }
    return s / static_cast<double>(g.size());
}

}  // namespace

TEST_CASE("build_grid spacing, size and preconditions") {
    const auto g = build_grid(2, 8, 4.0);
    CHECK(g.dv == doctest::Approx(1.0));
    CHECK(g.size() == 64u);
    CHECK(g.node(0) == doctest::Approx(-4.0));
    const auto g3 = build_grid(3, 32, 15.0);
    CHECK(g3.size() == 32768u);
    CHECK(g3.dv == doctest::Approx(30.0 / 32.0));
    CHECK_THROWS_AS(build_grid(2, 7, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(4, 8, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(2, 8, -1.0), std::invalid_argument);
}

TEST_CASE("ravel and unravel are inverse; modes follow FFT order") {
    const auto g = build_grid(3, 8, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(g.ravel(g.unravel(i)) == i);
    CHECK(g.mode(0) == 0);
    CHECK(g.mode(3) == 3);
    CHECK(g.mode(4) == -4);
    CHECK(g.mode(7) == -1);
    for (int k = -4; k < 4; ++k) CHECK(g.mode(g.index_of_mode(k)) == k);
}

TEST_CASE("constant field has only the zero mode") {
    const auto g = build_grid(2, 16, 3.0);
    SpectralTransform tr(g);
    const auto fh = tr.forward(std::vector<double>(g.size(), 2.5));
    CHECK(fh.c[0].real() == doctest::Approx(2.5).epsilon(1e-15));
    for (std::size_t k = 1; k < g.size(); ++k) CHECK(std::abs(fh.c[k]) < 1e-14);
}

TEST_CASE("single cosine maps onto the two first modes") {
    for (int d : {2, 3}) {
        const auto g = build_grid(d, 8, 5.0);
        SpectralTransform tr(g);
        std::vector<double> f(g.size());
        for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::cos(std::numbers::pi * g.velocity(i)[0] / g.T);
        const auto fh = tr.forward(f);
        std::array<int, 3> kp{1, 0, 0}, km{g.n - 1, 0, 0};
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto ix = g.unravel(i);
            const bool hit = (ix == kp) || (ix == km);
            CHECK(std::abs(fh.c[i] - cplx(hit ? 0.5 : 0.0)) < 1e-14);
        }
    }
}

TEST_CASE("forward transform matches a direct sum") {
    const auto g = build_grid(2, 8, 2.7);
    SpectralTransform tr(g);
    const auto f = random_field(g, 3);
    const auto fh = tr.forward(f);
    for (std::size_t k = 0; k < g.size(); ++k) CHECK(std::abs(fh.c[k] - direct_coefficient(g, f, k)) < 1e-13);
}

TEST_CASE("round trip, Hermitian symmetry, Parseval and linearity on random fields") {
    for (int d : {2, 3})
        for (int n : {8, 16}) {
            const auto g = build_grid(d, n, 3.0 + n / 8.0);
            SpectralTransform tr(g);
            for (std::uint64_t seed = 1; seed <= 3; ++seed) {
                const auto f = random_field(g, seed);
                const auto h = random_field(g, seed + 100);
                const auto fh = tr.forward(f);
                const auto back = tr.inverse(fh);
                double err = 0.0, p_modes = 0.0, p_nodes = 0.0;
                for (std::size_t i = 0; i < f.size(); ++i) {
                    err = std::max(err, std::abs(back[i] - f[i]));
                    p_nodes += f[i] * f[i];
                }
                CHECK(err < 1e-13);
                for (std::size_t k = 0; k < g.size(); ++k) {
                    p_modes += std::norm(fh.c[k]);
                    auto ix = g.unravel(k);
                    for (int a = 0; a < d; ++a) ix[a] = (n - ix[a]) % n;
                    CHECK(std::abs(fh.c[g.ravel(ix)] - std::conj(fh.c[k])) < 1e-13);
                }
                const double scale = std::pow(g.dv / (2.0 * g.T), d);
                CHECK(p_modes == doctest::Approx(scale * p_nodes).epsilon(1e-12));

                std::vector<double> comb(f.size());
                for (std::size_t i = 0; i < f.size(); ++i) comb[i] = 1.5 * f[i] - 0.25 * h[i];
                const auto ch = tr.forward(comb);
                const auto hh = tr.forward(h);
                for (std::size_t k = 0; k < g.size(); ++k)
                    CHECK(std::abs(ch.c[k] - (1.5 * fh.c[k] - 0.25 * hh.c[k])) < 1e-14);
            }
        }
}

TEST_CASE("dealias_params: classical and Carleman truncation") {
    const auto c = dealias_params(1.0, Representation::classical);
    CHECK(c.R == doctest::Approx(2.0));
    CHECK(c.T_min == doctest::Approx(2.2071).epsilon(1e-4));
    const auto k = dealias_params(1.0, Representation::carleman);
    CHECK(k.R == doctest::Approx(1.41421).epsilon(1e-5));
    CHECK_THROWS_AS(dealias_params(0.0, Representation::classical), std::invalid_argument);
    CHECK_THROWS_AS(dealias_params(-1.0, Representation::carleman), std::invalid_argument);
    const auto t = truncation_for_domain(8.0, Representation::classical);
    CHECK(t.T_min == doctest::Approx(8.0).epsilon(1e-14));
}
