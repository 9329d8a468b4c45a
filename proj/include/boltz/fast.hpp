#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include "boltz/classical.hpp"
#include "boltz/fft.hpp"
#include "boltz/grid.hpp"
#include "boltz/kernel.hpp"

namespace boltz {

// Directions on the half circle (d=2: theta_p = p pi/M) or half sphere
// (d=3: theta_p = p pi/M1, phi_q = q pi/M2) with uniform weights.
struct AngleSet {
    int d = 2;
    int M1 = 0;
    int M2 = 0;
    std::vector<std::array<double, 3>> e;
    std::vector<double> theta;
    double weight = 0.0;  // pi/M (d=2) or pi^2/(M1 M2) (d=3)
};

AngleSet make_angle_set(int d, int M1, int M2);

// beta(l, m) ~ weight * sum_p alpha_p(l) alpha'_p(m). Directions whose
// spherical measure vanishes (theta = 0 in 3D) are dropped.
struct FastKernelTables {
    VelocityGrid grid;
    VHSKernel kernel;
    double R = 0.0;
    int M1 = 0;
    int M2 = 0;
    double weight = 0.0;  // angular weight times the Carleman constant
    std::vector<std::vector<double>> alpha;
    std::vector<std::vector<double>> alphap;
    std::vector<double> diag;  // sum_p alpha_p(m) alpha'_p(m), without weight

    std::size_t directions() const { return alpha.size(); }
};

FastKernelTables build_fast_decomposition(const VelocityGrid& grid, const VHSKernel& kernel, double R, int M1,
                                          int M2);

// weight * (sum_p alpha_p(l) alpha'_p(m)); diagonal entries use the same sum.
double reconstruct_beta(const FastKernelTables& t, std::size_t li, std::size_t mi);

// Carleman kernel modes with the angular integral done by adaptive
// quadrature instead of the uniform angle set. Dense N x N table.
DenseModesTable compute_carleman_modes(const VelocityGrid& grid, const VHSKernel& kernel, double R,
                                       double tol = 1e-12);

// Evaluates the fast collision operator on nodal values. Holds private FFT
// buffers, so one instance per concurrent worker.
class FastCollision {
public:
    FastCollision(std::shared_ptr<const FastKernelTables> tables, std::shared_ptr<const FftBackend> backend = nullptr);

    // q(v_j) for nodal values f(v_j); scale multiplies the whole output.
    void apply_nodal(const double* f, double* q, double scale = 1.0);
    // Spectral input, nodal output.
    std::vector<double> apply(const SpectralField& f);

    const FastKernelTables& tables() const { return *tables_; }
    std::shared_ptr<const FftBackend> backend() const { return backend_; }
    std::size_t inverse_transforms() const { return inverse_count_; }
    std::size_t forward_transforms() const { return forward_count_; }

private:
    std::shared_ptr<const FastKernelTables> tables_;
    std::shared_ptr<const FftBackend> backend_;
    SpectralTransform transform_;
    cvec F_, buf_;
    std::vector<double> acc_;
    std::size_t inverse_count_ = 0;
    std::size_t forward_count_ = 0;
};

}  // namespace boltz
