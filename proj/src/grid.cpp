#include "boltz/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace boltz {

std::size_t VelocityGrid::size() const {
    std::size_t s = 1;
    for (int a = 0; a < d; ++a) s *= static_cast<std::size_t>(n);
    return s;
}

double VelocityGrid::cell_volume() const { return std::pow(dv, d); }

std::array<int, 3> VelocityGrid::unravel(std::size_t idx) const {
    std::array<int, 3> out{0, 0, 0};
    for (int a = d - 1; a >= 0; --a) {
        out[a] = static_cast<int>(idx % n);
        idx /= n;
    }
    return out;
}

std::size_t VelocityGrid::ravel(const std::array<int, 3>& i) const {
    std::size_t idx = 0;
    for (int a = 0; a < d; ++a) idx = idx * n + static_cast<std::size_t>(i[a]);
    return idx;
}

std::array<double, 3> VelocityGrid::velocity(std::size_t idx) const {
    auto i = unravel(idx);
    std::array<double, 3> v{0.0, 0.0, 0.0};
    for (int a = 0; a < d; ++a) v[a] = node(i[a]);
    return v;
}

std::array<int, 3> VelocityGrid::wavenumber(std::size_t idx) const {
    auto i = unravel(idx);
    std::array<int, 3> k{0, 0, 0};
    for (int a = 0; a < d; ++a) k[a] = mode(i[a]);
    return k;
}

bool VelocityGrid::has_nyquist(std::size_t idx) const {
    auto i = unravel(idx);
    for (int a = 0; a < d; ++a)
        if (i[a] == n / 2) return true;
    return false;
}

VelocityGrid build_grid(int d, int n, double T) {
    if (d != 2 && d != 3) throw std::invalid_argument("grid dimension must be 2 or 3, got " + std::to_string(d));
    if (n < 8 || n % 2 != 0) throw std::invalid_argument("n_v must be even and >= 8, got " + std::to_string(n));
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T_dom must be positive");
    VelocityGrid g;
    g.d = d;
    g.n = n;
    g.T = T;
    g.dv = 2.0 * T / n;
    return g;
}

SpatialGrid build_spatial_grid(int nx, double L) {
    if (nx < 2) throw std::invalid_argument("n_x must be at least 2");
    if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("box length L must be positive");
    return {nx, L};
}

const char* to_string(Representation r) {
    return r == Representation::classical ? "classical" : "carleman";
}

TruncationParams dealias_params(double S, Representation rep) {
    if (!(S > 0.0) || !std::isfinite(S)) throw std::invalid_argument("support radius S must be positive");
    TruncationParams p;
    p.S = S;
    p.rep = rep;
    p.R = rep == Representation::classical ? 2.0 * S : std::sqrt(2.0) * S;
    p.T_min = (3.0 + std::sqrt(2.0)) * S / 2.0;
    return p;
}

double support_for_domain(double T) { return 2.0 * T / (3.0 + std::sqrt(2.0)); }

TruncationParams truncation_for_domain(double T, Representation rep) {
    return dealias_params(support_for_domain(T), rep);
}

}  // namespace boltz
