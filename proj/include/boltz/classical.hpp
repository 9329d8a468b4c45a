#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "boltz/fft.hpp"
#include "boltz/grid.hpp"
#include "boltz/kernel.hpp"

namespace boltz {

// Sign variants of a mode: every component equal to -n/2 may also be read as
// +n/2. Kernel modes are averaged over these so tables are even on the torus.
class ModeVariants {
public:
    explicit ModeVariants(const VelocityGrid& g);
    const std::vector<std::array<int, 3>>& of(std::size_t idx) const { return variants_[idx]; }

private:
    std::vector<std::vector<std::array<int, 3>>> variants_;
};

// Kernel modes of the sigma-representation. beta depends on (l, m) only
// through |l+m|^2 and |l-m|^2 and is symmetric in those two arguments, so a
// compact square table over reachable squared norms replaces the N^2d array.
struct ClassicalModesTable {
    VelocityGrid grid;
    VHSKernel kernel;
    double R = 0.0;
    int radial_panels = 0;
    std::vector<int> norm_index;   // |q|^2 -> row, -1 if unreachable
    std::vector<int> norms;        // row -> |q|^2
    std::vector<double> F;         // rows x rows, symmetric
    std::vector<double> diag;      // beta(m, m) per mode

    std::size_t rows() const { return norms.size(); }
    double entry(int a2, int b2) const;
    double beta(std::size_t li, std::size_t mi) const;
};

// Squared norms of integer vectors with components in [-n, n].
std::vector<int> reachable_norms(int d, int n);

// Nested quadrature: composite Gauss-Legendre in r (panels doubled until the
// table moves by less than tol relative) times an angular rule for the sphere.
ClassicalModesTable compute_classical_modes(const VelocityGrid& grid, const VHSKernel& kernel, double R,
                                            double tol = 1e-8);

// Fill norm_index, norms and diag from grid and F (used after loading F).
void finalize_classical_table(ClassicalModesTable& t);

// Full pair table beta(l, m) over all mode pairs plus its diagonal.
struct DenseModesTable {
    VelocityGrid grid;
    std::vector<double> values;  // N x N, row l, column m
    std::vector<double> diag;

    double beta(std::size_t li, std::size_t mi) const { return values[li * grid.size() + mi]; }
};

enum class Convolution {
    truncated,  // pairs with l + m inside the mode box (Galerkin truncation)
    periodic    // l + m wrapped onto the torus of modes
};

// Q^_k = sum_{l+m=k} (beta(l,m) - beta(m,m)) f^_l f^_m, O(N^{2d}).
SpectralField apply_classical(const ClassicalModesTable& t, const SpectralField& f,
                              Convolution conv = Convolution::truncated);
SpectralField apply_dense(const DenseModesTable& t, const SpectralField& f, Convolution conv);

}  // namespace boltz
