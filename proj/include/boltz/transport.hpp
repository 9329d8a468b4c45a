#pragma once

#include <memory>
#include <string>
#include <vector>

#include "boltz/diagnostics.hpp"
#include "boltz/fast.hpp"
#include "boltz/grid.hpp"
#include "boltz/kernel.hpp"
#include "boltz/reference.hpp"

namespace boltz {

// f(x, v) on a periodic x-grid; cell-major, cell c occupies [c N, (c+1) N).
struct PhaseSpaceField {
    VelocityGrid vgrid;
    SpatialGrid xgrid;
    double knudsen = 1.0;
    std::vector<double> f;

    std::size_t cell_size() const { return vgrid.size(); }
    const double* cell(int c) const { return f.data() + c * vgrid.size(); }
    double* cell(int c) { return f.data() + c * vgrid.size(); }
};

// van Leer limited slope from the two one-sided differences.
double van_leer(double a, double b);

// -v_1 d/dx f by upwind fluxes on a van Leer limited linear reconstruction.
// out has the layout of field.f.
void transport_rhs(const PhaseSpaceField& field, std::vector<double>& out);

struct ConservedTotals {
    double mass = 0.0;
    std::array<double, 3> momentum{0.0, 0.0, 0.0};
    double energy = 0.0;  // int |v|^2/2 f
};
ConservedTotals conserved_totals(const PhaseSpaceField& field);

struct InhomogeneousConfig {
    int d = 2;
    int n = 32;
    double T = 9.0;
    int nx = 32;
    double L = 6.283185307179586;
    int M1 = 4, M2 = 4;
    VHSKernel kernel{0.0, 1.5};
    double knudsen = 1.0;
    double dt = 0.0;     // 0 picks cfl * dx / T
    double cfl = 0.9;
    double t_end = 10.0;
    InitialCondition ic;
    int output_every = 1;     // entropy.csv cadence in steps
    int cell_output_every = 0;  // moments-by-cell.csv cadence, 0 disables
    std::string cache_dir;
    std::string out_dir;
    bool snapshot = false;
    bool collisions = true;   // off gives free transport
};

struct EntropySample {
    double t = 0.0;
    EntropyPair e;
    ConservedTotals totals;
};

struct InhomogeneousResult {
    std::vector<EntropySample> series;
    PhaseSpaceField final_field;
    double dt = 0.0;
    std::size_t steps = 0;
};

// Startup checks: CFL dt <= 0.9 dx / T_dom and the collision stability bound.
// Throws ConfigError on violation.
double checked_time_step(const InhomogeneousConfig& cfg);

InhomogeneousResult run_inhomogeneous(const InhomogeneousConfig& cfg);

// Full phase-space snapshot: a '#' metadata line, then x, v components, f.
void write_phase_snapshot(const PhaseSpaceField& field, double t, const std::string& path);
PhaseSpaceField read_phase_snapshot(const std::string& path, double* t = nullptr);

}  // namespace boltz
