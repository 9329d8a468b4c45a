#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "boltz/grid.hpp"

namespace boltz {

struct MomentSet {
    double rho = 0.0;
    std::array<double, 3> u{0.0, 0.0, 0.0};
    double T = 0.0;
    std::array<std::array<double, 3>, 3> P{};  // int (v-u)_i (v-u)_j f
    std::array<double, 9> M{};                  // M[k] = sum |v|^k f dv^d, k = 0..8
    double H = 0.0;                             // sum f log f dv^d over f > 0
    std::size_t negative_nodes = 0;
    bool degenerate = false;  // rho <= 0: u, T, P undefined
};

MomentSet moments(const std::vector<double>& f, const VelocityGrid& grid);
MomentSet moments(const double* f, const VelocityGrid& grid);

enum class Norm { L1, L2, Linf };

// Relative discrete error (sum |f - g|^p / sum |g|^p)^{1/p}; Linf uses max ratio.
double error_norm(const std::vector<double>& f_num, const std::vector<double>& f_ref, Norm p);

struct EntropyPair {
    double H_l = 0.0;
    double H_g = 0.0;
    double hydro = 0.0;  // int [rho log(rho/rho_g) - (d/2) rho log(T/T_g)] dx
    double ckp_bound = 0.0;  // ||f - M_g||_{L1}^2 / (2 mass)
    std::size_t negative_nodes = 0;
    double mass = 0.0;
};

// Local Maxwellians from per-cell moments; the global Maxwellian from the
// moments of the whole phase-space field per unit length.
EntropyPair relative_entropies(const std::vector<double>& f, const VelocityGrid& grid, const SpatialGrid& xgrid);

// Per-cell density, mean velocity and temperature.
struct CellMoments {
    std::vector<double> rho, T;
    std::vector<std::array<double, 3>> u;
};
CellMoments cell_moments(const std::vector<double>& f, const VelocityGrid& grid, const SpatialGrid& xgrid);

}  // namespace boltz
