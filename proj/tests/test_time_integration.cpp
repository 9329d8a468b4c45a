#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "boltz/csv.hpp"
#include "boltz/error.hpp"
#include "boltz/integrator.hpp"

using namespace boltz;

namespace {

double linear_error(double dt) {
    const double lambda = -1.3, t_end = 1.0;
    std::vector<double> f{1.0, -0.5};
    auto rhs = [&](const std::vector<double>& x, std::vector<double>& k) {
        for (std::size_t i = 0; i < x.size(); ++i) k[i] = lambda * x[i];
    };
    const int steps = static_cast<int>(std::lround(t_end / dt));
    for (int s = 0; s < steps; ++s) rk2_step(f, rhs, dt);
    return std::abs(f[0] - std::exp(lambda * t_end)) + std::abs(f[1] + 0.5 * std::exp(lambda * t_end));
}

std::string temp_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("boltz_test_" + name);
    std::filesystem::remove_all(p);
    return p.string();
}

}  // namespace

TEST_CASE("rk2 with a zero right-hand side is the identity") {
    std::vector<double> f{0.3, -1.0, 2.0};
    const auto before = f;
    rk2_step(f, [](const std::vector<double>&, std::vector<double>& k) { std::fill(k.begin(), k.end(), 0.0); }, 0.1);
    CHECK(f == before);
}

TEST_CASE("rk2 is second order on the linear test equation") {
    for (double dt : {0.1, 0.05, 0.025}) {
        const double order = std::log2(linear_error(dt) / linear_error(dt / 2.0));
        CHECK(order >= 1.9);
        CHECK(order <= 2.1);
    }
}

TEST_CASE("rk2 midpoint step matches its closed form for one step") {
    const double lambda = 0.7, dt = 0.2;
    std::vector<double> f{1.0};
    rk2_step(f, [&](const std::vector<double>& x, std::vector<double>& k) { k[0] = lambda * x[0]; }, dt);
    const double z = lambda * dt;
    CHECK(f[0] == doctest::Approx(1.0 + z + z * z / 2.0).epsilon(1e-15));
}

TEST_CASE("zero mode is conserved to 1e-14 per step on both solver paths") {
    for (auto m : {Method::classical, Method::fast}) {
        HomogeneousConfig h;
        h.n = 16;
        h.T = 5.0;
        h.method = m;
        h.ic.kind = IcKind::bkw2d;
        h.dt = 0.01;
        h.t_end = 1.0;
        h.output_every = 100;
        const auto r = run_homogeneous(h);
        CHECK(r.steps == 100u);
        CHECK(r.max_fhat0_change <= 1e-14);
    }
}

TEST_CASE("run_homogeneous is deterministic and writes the CSV schemas") {
    HomogeneousConfig h;
    h.n = 16;
    h.T = 5.0;
    h.method = Method::fast;
    h.ic.kind = IcKind::bkw2d;
    h.bkw_reference = true;
    h.dt = 0.05;
    h.t_end = 0.5;
    h.output_every = 2;
    h.snapshot = true;
    h.out_dir = temp_dir("homog");
    const auto a = run_homogeneous(h);
    const auto moments = read_csv(h.out_dir + "/moments.csv");
    CHECK(moments.column("t") == 0);
    CHECK(moments.column("rho") >= 0);
    CHECK(moments.column("P12") >= 0);
    CHECK(moments.column("H_flogf") >= 0);
    CHECK(moments.column("neg_node_count") >= 0);
    CHECK(moments.rows.size() == a.series.size());
    const auto errors = read_csv(h.out_dir + "/errors.csv");
    CHECK(errors.column("E1") == 1);
    CHECK(errors.rows.back()[1] == doctest::Approx(a.series.back().E1));
    CHECK(std::filesystem::exists(h.out_dir + "/snapshot_final.csv"));
    h.out_dir.clear();
    h.snapshot = false;
    const auto b = run_homogeneous(h);
    REQUIRE(a.final_values.size() == b.final_values.size());
    for (std::size_t i = 0; i < a.final_values.size(); ++i) REQUIRE(a.final_values[i] == b.final_values[i]);
    std::filesystem::remove_all(temp_dir("homog"));
}

TEST_CASE("run_homogeneous rejects bad settings and reports non-finite states") {
    HomogeneousConfig h;
    h.n = 8;
    h.T = 4.0;
    h.dt = 0.0;
    CHECK_THROWS_AS(run_homogeneous(h), ConfigError);
    h.dt = 0.1;
    h.ic.kind = IcKind::ini1;
    CHECK_THROWS_AS(run_homogeneous(h), ConfigError);
    h.ic.kind = IcKind::maxwellian;
    h.bkw_reference = true;
    CHECK_THROWS_AS(run_homogeneous(h), ConfigError);

    struct Blowup final : HomogeneousOperator {
        void rhs(const SpectralField& f, SpectralField& q) override {
            q = f;
            for (auto& z : q.c) z *= 1e300;
        }
        const char* name() const override { return "blowup"; }
    } op;
    h.bkw_reference = false;
    h.t_end = 1.0;
    CHECK_THROWS_AS(run_homogeneous(h, op), NumericalError);
}

TEST_CASE("BKW at n_v = 8 and 16 lands in the tabulated error band") {
    for (auto& c : bkw_table_cases(false)) {
        if (!(c.method == Method::classical || c.M == 8)) continue;
        run_bkw_case(c);
        MESSAGE(std::string(to_string(c.method)) << " M=" << c.M << " n_v=" << c.n << ": E1 " << c.E1 << " (table " << c.reference_E1
                                    << ")");
        CHECK(c.pass());
    }
}

TEST_CASE("BKW error curve: E1(0.1) > E1(1) at n_v = 16 and 32") {
    for (int n : {16, 32}) {
        HomogeneousConfig h;
        h.n = n;
        h.T = n == 16 ? 5.0 : 7.0;
        h.method = Method::classical;
        h.ic.kind = IcKind::bkw2d;
        h.bkw_reference = true;
        h.dt = 0.01;
        h.t_end = 1.0;
        h.output_every = 5;
        const auto r = run_homogeneous(h);
        std::size_t peak = 0;
        for (std::size_t i = 0; i < r.series.size(); ++i)
            if (r.series[i].E1 > r.series[peak].E1) peak = i;
        REQUIRE(r.series[2].t == doctest::Approx(0.1));
        MESSAGE("n_v=" << n << ": E1(0.1)=" << r.series[2].E1 << ", max " << r.series[peak].E1 << " at t="
                       << r.series[peak].t << ", E1(1)=" << r.series.back().E1);
        CHECK(r.series[peak].E1 > r.series.front().E1);
        CHECK(r.series[2].E1 > r.series.back().E1);
    }
}

TEST_CASE("BKW error curve over [0, 6]: rises to an interior maximum, then decreases") {
    for (int n : {16, 32}) {
        HomogeneousConfig h;
        h.n = n;
        h.T = n == 16 ? 5.0 : 7.0;
        h.method = Method::classical;
        h.ic.kind = IcKind::bkw2d;
        h.bkw_reference = true;
        h.dt = 0.01;
        h.t_end = 6.0;
        h.output_every = 25;
        const auto r = run_homogeneous(h);
        std::size_t peak = 0;
        for (std::size_t i = 0; i < r.series.size(); ++i)
            if (r.series[i].E1 > r.series[peak].E1) peak = i;
        MESSAGE("n_v=" << n << ": maximum E1 " << r.series[peak].E1 << " at t=" << r.series[peak].t);
        CHECK(peak > 0);
        CHECK(r.series[peak].t < 3.0);
        // decreasing for at least two time units after the maximum
        for (std::size_t i = peak + 1; i < r.series.size() && r.series[i].t <= r.series[peak].t + 2.0; ++i)
            CHECK(r.series[i].E1 < r.series[i - 1].E1);
    }
}

TEST_CASE("classical BKW error drops by at least 50 from n_v = 16 to 32") {
    BkwCase a, b;
    a.method = b.method = Method::classical;
    a.n = 16;
    a.T = 5.0;
    b.n = 32;
    b.T = 7.0;
    run_bkw_case(a);
    run_bkw_case(b);
    MESSAGE("E1 ratio " << a.E1 / b.E1);
    CHECK(a.E1 / b.E1 >= 50.0);
}
