#pragma once

#include <array>
#include <string>
#include <vector>

#include "boltz/grid.hpp"

namespace boltz {

using Vec3 = std::array<double, 3>;

double bkw_shape(double t);  // S(t) = 1 - exp(-t/8)/2
double bkw_2d(double t, const Vec3& v);
double bkw_2d_dt(double t, const Vec3& v);

// rho (2 pi T)^{-d/2} exp(-|v - u|^2 / 2T)
double maxwellian(double rho, const Vec3& u, double T, const Vec3& v, int d);

enum class IcKind { bkw2d, maxwellian, bi_gaussian, ball_indicator, ini1, ini2 };

IcKind parse_ic_kind(const std::string& s);
const char* to_string(IcKind k);
bool is_inhomogeneous(IcKind k);

struct InitialCondition {
    IcKind kind = IcKind::maxwellian;
    double t0 = 0.0;                  // bkw2d: start time
    double rho = 1.0, T = 1.0;        // maxwellian
    Vec3 u{0.0, 0.0, 0.0};            // maxwellian
    Vec3 v0{1.0, 2.0, 0.0};           // bi_gaussian and ini2 bump offset
    double sigma = 1.0;               // bi_gaussian width
    double radius = 1.0;              // ball_indicator
    double mollify_width = 0.0;       // ball_indicator; 0 means 2 dv
    double A0 = 0.1;                  // ini1, ini2
    double v_th = 0.8660254037844386; // ini2, sqrt(3)/2
};

// Nodal values on the velocity grid for homogeneous kinds.
std::vector<double> sample_initial(const InitialCondition& ic, const VelocityGrid& grid);

// Phase-space values, cell-major (cell i occupies [i N, (i+1) N)).
std::vector<double> sample_initial(const InitialCondition& ic, const VelocityGrid& grid, const SpatialGrid* xgrid);

// Indicator of |v| <= r convolved with an isotropic Gaussian of width w.
double mollified_ball(double r, double w, const Vec3& v, int d);

}  // namespace boltz
