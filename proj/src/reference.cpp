#include "boltz/reference.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boltz {

using std::numbers::pi;

namespace {

double sq(const Vec3& v, int d) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += v[a] * v[a];
    return s;
}

double gaussian(const Vec3& v, const Vec3& c, double s2, int d) {
    double q = 0.0;
    for (int a = 0; a < d; ++a) q += (v[a] - c[a]) * (v[a] - c[a]);
    return std::exp(-q / (2.0 * s2)) / std::pow(2.0 * pi * s2, 0.5 * d);
}

}  // namespace

double bkw_shape(double t) { return 1.0 - 0.5 * std::exp(-t / 8.0); }

double bkw_2d(double t, const Vec3& v) {
    const double S = bkw_shape(t);
    const double q = v[0] * v[0] + v[1] * v[1];
    return std::exp(-q / (2.0 * S)) / (2.0 * pi * S * S) * (2.0 * S - 1.0 + (1.0 - S) * q / (2.0 * S));
}

double bkw_2d_dt(double t, const Vec3& v) {
    const double S = bkw_shape(t);
    const double dS = std::exp(-t / 8.0) / 16.0;
    const double q = v[0] * v[0] + v[1] * v[1];
    const double E = std::exp(-q / (2.0 * S)) / (2.0 * pi);
    const double P = 2.0 * S - 1.0 + q / (2.0 * S) - 0.5 * q;
    const double dP = 2.0 - q / (2.0 * S * S);
    const double dE_over_E = q / (2.0 * S * S);
    // f = E P / S^2
    const double df = E * ((dE_over_E - 2.0 / S) * P + dP) / (S * S);
    return df * dS;
}

double maxwellian(double rho, const Vec3& u, double T, const Vec3& v, int d) {
    if (!(T > 0.0)) throw std::invalid_argument("maxwellian: temperature must be positive");
    if (rho == 0.0) return 0.0;
    return rho * gaussian(v, u, T, d);
}

IcKind parse_ic_kind(const std::string& s) {
    if (s == "bkw2d") return IcKind::bkw2d;
    if (s == "maxwellian") return IcKind::maxwellian;
    if (s == "bi_gaussian") return IcKind::bi_gaussian;
    if (s == "ball_indicator") return IcKind::ball_indicator;
    if (s == "ini1") return IcKind::ini1;
    if (s == "ini2") return IcKind::ini2;
    throw std::invalid_argument("unknown initial condition kind '" + s + "'");
}

const char* to_string(IcKind k) {
    switch (k) {
        case IcKind::bkw2d: return "bkw2d";
        case IcKind::maxwellian: return "maxwellian";
        case IcKind::bi_gaussian: return "bi_gaussian";
        case IcKind::ball_indicator: return "ball_indicator";
        case IcKind::ini1: return "ini1";
        case IcKind::ini2: return "ini2";
    }
    return "?";
}

bool is_inhomogeneous(IcKind k) { return k == IcKind::ini1 || k == IcKind::ini2; }

double mollified_ball(double r, double w, const Vec3& v, int d) {
    if (!(r > 0.0) || !(w > 0.0)) throw std::invalid_argument("mollified_ball: radius and width must be positive");
    const double rho = std::sqrt(sq(v, d));
    if (rho > r + 12.0 * w) return 0.0;
    using Q = boost::math::quadrature::gauss<double, 20>;
    const auto& xs = Q::abscissa();
    const auto& ws = Q::weights();
    // radial Gauss panels resolve the Gaussian edge; angular trapezoid is periodic
    const int panels = 4 + static_cast<int>(std::ceil(2.0 * r / w));
    const int m = 64 + static_cast<int>(std::ceil(4.0 * rho * r / (w * w)));
    const double h = r / panels;
    const double w2 = w * w;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double c = (p + 0.5) * h;
        for (std::size_t j = 0; j < xs.size(); ++j)
            for (int sgn = -1; sgn <= 1; sgn += 2) {
                const double s = c + sgn * 0.5 * h * xs[j];
                const double ws_ = 0.5 * h * ws[j];
                double ang = 0.0;
                if (d == 2) {
                    // v along x without loss of generality
                    for (int k = 0; k < m; ++k) {
                        double th = 2.0 * pi * k / m;
                        double q = rho * rho + s * s - 2.0 * rho * s * std::cos(th);
                        ang += std::exp(-q / (2.0 * w2));
                    }
                    ang *= 2.0 * pi / m * s;
                } else {
                    // polar axis along v: integrate over mu = cos(angle) exactly
                    const double a = rho * s / w2;
                    const double base = std::exp(-(rho - s) * (rho - s) / (2.0 * w2));
                    double mu_int;  // int_{-1}^{1} exp(a (mu - 1)) d mu
                    if (a < 1e-8) {
                        mu_int = 2.0;
                    } else {
                        mu_int = -std::expm1(-2.0 * a) / a;
                    }
                    ang = 2.0 * pi * s * s * base * mu_int;
                }
                total += ws_ * ang;
            }
    }
    return total / std::pow(2.0 * pi * w2, 0.5 * d);
}

std::vector<double> sample_initial(const InitialCondition& ic, const VelocityGrid& g) {
    if (is_inhomogeneous(ic.kind))
        throw std::invalid_argument(std::string("initial condition '") + to_string(ic.kind) + "' needs an x-grid");
    const std::size_t N = g.size();
    std::vector<double> f(N);
    const int d = g.d;
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3 v = g.velocity(i);
        switch (ic.kind) {
            case IcKind::bkw2d:
                if (d != 2) throw std::invalid_argument("bkw2d is a two-dimensional solution");
                f[i] = bkw_2d(ic.t0, v);
                break;
            case IcKind::maxwellian: f[i] = maxwellian(ic.rho, ic.u, ic.T, v, d); break;
            case IcKind::bi_gaussian: {
                Vec3 m{-ic.v0[0], -ic.v0[1], -ic.v0[2]};
                const double s2 = ic.sigma * ic.sigma;
                f[i] = 0.5 * (gaussian(v, ic.v0, s2, d) + gaussian(v, m, s2, d));
                break;
            }
            case IcKind::ball_indicator: {
                const double w = ic.mollify_width > 0.0 ? ic.mollify_width : 2.0 * g.dv;
                f[i] = mollified_ball(ic.radius, w, v, d);
                break;
            }
            default: break;
        }
    }
    if (ic.kind == IcKind::ball_indicator) {
        double mass = 0.0;
        for (double x : f) mass += x;
        mass *= g.cell_volume();
        if (!(mass > 0.0)) throw std::invalid_argument("ball_indicator: datum has no mass on this grid");
        for (double& x : f) x /= mass;
    }
    return f;
}

std::vector<double> sample_initial(const InitialCondition& ic, const VelocityGrid& g, const SpatialGrid* xg) {
    if (!is_inhomogeneous(ic.kind)) {
        if (xg) throw std::invalid_argument(std::string("initial condition '") + to_string(ic.kind) + "' is homogeneous");
        return sample_initial(ic, g);
    }
    if (!xg) throw std::invalid_argument(std::string("initial condition '") + to_string(ic.kind) + "' needs an x-grid");
    const std::size_t N = g.size();
    std::vector<double> vel(N);
    const int d = g.d;
    for (std::size_t i = 0; i < N; ++i) {
        const Vec3 v = g.velocity(i);
        if (ic.kind == IcKind::ini1) {
            vel[i] = maxwellian(1.0, {0.0, 0.0, 0.0}, 1.0, v, d);
        } else {
            Vec3 m{-ic.v0[0], -ic.v0[1], -ic.v0[2]};
            const double s2 = ic.v_th * ic.v_th;
            vel[i] = 0.5 * (gaussian(v, ic.v0, s2, d) + gaussian(v, m, s2, d));
        }
    }
    const double k0 = 2.0 * pi / xg->L;
    std::vector<double> f(N * static_cast<std::size_t>(xg->nx));
    for (int c = 0; c < xg->nx; ++c) {
        const double a = 1.0 + ic.A0 * std::cos(k0 * xg->x(c));
        for (std::size_t i = 0; i < N; ++i) f[c * N + i] = a * vel[i];
    }
    return f;
}

}  // namespace boltz
