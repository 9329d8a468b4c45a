#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "boltz/classical.hpp"
#include "boltz/diagnostics.hpp"
#include "boltz/fast.hpp"
#include "boltz/fft.hpp"
#include "boltz/kernel.hpp"
#include "boltz/reference.hpp"

namespace boltz {

inline void axpy(std::vector<double>& y, double a, const std::vector<double>& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}
inline void axpy(SpectralField& y, double a, const SpectralField& x) {
    for (std::size_t i = 0; i < y.c.size(); ++i) y.c[i] += a * x.c[i];
}


// Midpoint RK2: f += dt * Q(f + dt/2 Q(f)).
template <class State, class Rhs>
void rk2_step(State& f, Rhs&& rhs, double dt) {
    State k(f);
    rhs(f, k);
    State half(f);
    axpy(half, 0.5 * dt, k);
    rhs(half, k);
    axpy(f, dt, k);
}

// Spectral right-hand side of the homogeneous equation.
class HomogeneousOperator {
public:
    virtual ~HomogeneousOperator() = default;
    virtual void rhs(const SpectralField& f, SpectralField& q) = 0;
    virtual const char* name() const = 0;
};

class ClassicalOperator final : public HomogeneousOperator {
public:
    ClassicalOperator(std::shared_ptr<const ClassicalModesTable> t, Convolution conv = Convolution::truncated)
        : table_(std::move(t)), conv_(conv) {}
    void rhs(const SpectralField& f, SpectralField& q) override { q = apply_classical(*table_, f, conv_); }
    const char* name() const override { return "classical"; }

private:
    std::shared_ptr<const ClassicalModesTable> table_;
    Convolution conv_;
};

class FastOperator final : public HomogeneousOperator {
public:
    explicit FastOperator(std::shared_ptr<const FastKernelTables> t);
    void rhs(const SpectralField& f, SpectralField& q) override;
    const char* name() const override { return "fast"; }
    FastCollision& collision() { return coll_; }

private:
    FastCollision coll_;
    SpectralTransform transform_;
};

enum class Method { classical, fast };
Method parse_method(const std::string& s);
const char* to_string(Method m);

struct HomogeneousConfig {
    int d = 2;
    int n = 32;
    double T = 8.0;
    Method method = Method::fast;
    int M1 = 4, M2 = 4;
    VHSKernel kernel = maxwell_2d();
    double dt = 0.01;
    double t_end = 1.0;
    InitialCondition ic;
    int output_every = 10;
    bool bkw_reference = false;      // record E_p against the exact BKW solution
    std::string cache_dir;           // kernel-mode cache, empty disables
    std::string out_dir;             // CSV output, empty disables
    bool snapshot = false;           // write final nodal values
};

struct TimeSample {
    double t = 0.0;
    MomentSet m;
    double fhat0 = 0.0;
    double E1 = -1.0, E2 = -1.0, Einf = -1.0;  // negative when no reference
};

struct HomogeneousResult {
    std::vector<TimeSample> series;
    std::vector<double> final_values;
    double max_fhat0_change = 0.0;  // largest per-step relative change of f^_0
    std::size_t steps = 0;
};

std::unique_ptr<HomogeneousOperator> make_operator(const HomogeneousConfig& cfg);
HomogeneousResult run_homogeneous(const HomogeneousConfig& cfg);
// Same, with a caller-supplied operator (tables already built).
HomogeneousResult run_homogeneous(const HomogeneousConfig& cfg, HomogeneousOperator& op);

// Least-squares C such that C * Q_1(f) matches the exact BKW time derivative
// at time t, where Q_1 is the operator built with unit kernel constant.
double calibrate_bkw_constant(HomogeneousOperator& unit_op, const VelocityGrid& grid, double t);

// One cell of the BKW accuracy table at t = 1 (dt = 0.01).
struct BkwCase {
    Method method = Method::classical;
    int M = 0;          // fast method angle count, 0 for classical
    int n = 8;
    double T = 4.0;
    double reference_E1 = 0.0;
    double factor = 2.0;  // accepted ratio either way
    double E1 = 0.0;
    double seconds = 0.0;
    bool pass() const { return E1 <= factor * reference_E1 && E1 >= reference_E1 / factor; }
};

// Classical and fast M = 4, 6, 8 at n_v = 8 (T_dom = 4) and 16 (T_dom = 5);
// extended adds n_v = 32 (T_dom = 7) with a factor-3 band.
std::vector<BkwCase> bkw_table_cases(bool extended);
void run_bkw_case(BkwCase& c, const std::string& cache_dir = "");

}  // namespace boltz
