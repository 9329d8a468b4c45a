#pragma once

#include <array>
#include <cstddef>

namespace boltz {

// Uniform periodic velocity grid on [-T, T)^d. Nodes v_i = -T + i*dv.
// Arrays over the grid are row-major with the first axis slowest; the same
// flat index addresses Fourier modes in FFT order (index i <-> k = i or i - n).
struct VelocityGrid {
    int d = 0;
    int n = 0;
    double T = 0.0;
    double dv = 0.0;

    std::size_t size() const;
    double cell_volume() const;
    double node(int i) const { return -T + i * dv; }
    int mode(int i) const { return i < n / 2 ? i : i - n; }
    int index_of_mode(int k) const { return k >= 0 ? k : k + n; }

    std::array<int, 3> unravel(std::size_t idx) const;
    std::size_t ravel(const std::array<int, 3>& i) const;
    std::array<double, 3> velocity(std::size_t idx) const;
    std::array<int, 3> wavenumber(std::size_t idx) const;
    // True when some component of the mode sits on -n/2.
    bool has_nyquist(std::size_t idx) const;

    bool operator==(const VelocityGrid& o) const = default;
};

VelocityGrid build_grid(int d, int n, double T);

// Periodic cells on [0, L); values live at cell centres x_i = (i + 1/2) dx.
struct SpatialGrid {
    int nx = 0;
    double L = 0.0;

    double dx() const { return L / nx; }
    double x(int i) const { return (i + 0.5) * dx(); }
    bool operator==(const SpatialGrid& o) const = default;
};

SpatialGrid build_spatial_grid(int nx, double L);

enum class Representation { classical, carleman };

const char* to_string(Representation r);

struct TruncationParams {
    double S = 0.0;
    double R = 0.0;
    double T_min = 0.0;
    Representation rep = Representation::classical;
};

TruncationParams dealias_params(double S, Representation rep);

// Largest support radius S that a box of half-length T admits.
double support_for_domain(double T);

// dealias_params(support_for_domain(T), rep).
TruncationParams truncation_for_domain(double T, Representation rep);

}  // namespace boltz
