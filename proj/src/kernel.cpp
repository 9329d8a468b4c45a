#include "boltz/kernel.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace boltz {

using std::numbers::pi;

VHSKernel maxwell_2d() { return {0.0, 1.0 / (2.0 * pi)}; }
VHSKernel hard_spheres_3d() { return {1.0, 1.0 / (4.0 * pi)}; }

void validate_kernel(const VHSKernel& k) {
    if (!(k.gamma >= 0.0 && k.gamma <= 1.0)) throw std::invalid_argument("kernel gamma must lie in [0, 1]");
    if (!(k.C > 0.0) || !std::isfinite(k.C)) throw std::invalid_argument("kernel constant C must be positive");
}

double carleman_constant(int d, const VHSKernel& k) {
    validate_kernel(k);
    if (std::abs(k.gamma - (d - 2)) > 1e-14)
        throw std::invalid_argument(
            "fast method needs a decoupled kernel: B(|g|)|g|^{2-d} must be constant, i.e. gamma = d - 2 (got gamma = " +
            std::to_string(k.gamma) + ", d = " + std::to_string(d) + ")");
    return std::ldexp(k.C, d - 1);
}

double sinc(double x) {
    if (std::abs(x) < 1e-4) {
        double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0 - x2 * x2 * x2 / 5040.0;
    }
    return std::sin(x) / x;
}

double phi2(double R, double s) { return 2.0 * R * sinc(R * s); }

double phi3(double R, double s) {
    double h = sinc(0.5 * R * s);
    return R * R * (2.0 * sinc(R * s) - h * h);
}

double psi3(double R, double s) {
    // phi3(R, s cos theta) is smooth and 2 pi periodic in theta, so the
    // trapezoid rule converges geometrically once the node count passes R|s|
    const double x = R * std::abs(s);
    const int m = 48 + 4 * static_cast<int>(std::ceil(x / 2.0));
    double sum = 0.0;
    for (int j = 0; j < m; ++j) sum += phi3(R, s * std::cos(2.0 * pi * j / m));
    return pi * sum / m;
}

double sphere_fourier(int d, double a) {
    a = std::abs(a);
    if (d == 2) {
        // periodic trapezoid, spectrally accurate once nodes exceed a + 40
        int m = 32 + 4 * static_cast<int>(std::ceil(a / 4.0)) + 16;
        double s = 0.0;
        for (int j = 0; j < m; ++j) s += std::cos(a * std::cos(2.0 * pi * j / m));
        return 2.0 * pi * s / m;
    }
    if (d == 3) {
        // composite Gauss-Legendre in mu, panels scale with the oscillation count
        using Q = boost::math::quadrature::gauss<double, 20>;
        const int panels = 1 + static_cast<int>(std::ceil(a / 8.0));
        const double h = 1.0 / panels;
        double s = 0.0;
        for (int p = 0; p < panels; ++p)
            s += Q::integrate([a](double mu) { return std::cos(a * mu); }, p * h, (p + 1) * h);
        return 4.0 * pi * s;
    }
    throw std::invalid_argument("sphere_fourier: d must be 2 or 3");
}

}  // namespace boltz
