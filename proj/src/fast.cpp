#include "boltz/fast.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "boltz/error.hpp"

namespace boltz {

using std::numbers::pi;

AngleSet make_angle_set(int d, int M1, int M2) {
    AngleSet a;
    a.d = d;
    a.M1 = M1;
    a.M2 = M2;
    if (M1 < 2 || (d == 3 && M2 < 2)) throw std::invalid_argument("angle set needs M1, M2 >= 2");
    if (d == 2) {
        a.weight = pi / M1;
        for (int p = 0; p < M1; ++p) {
            double th = p * pi / M1;
            a.theta.push_back(th);
            a.e.push_back({std::cos(th), std::sin(th), 0.0});
        }
    } else if (d == 3) {
        a.weight = pi * pi / (static_cast<double>(M1) * M2);
        for (int p = 0; p < M1; ++p)
            for (int q = 0; q < M2; ++q) {
                double th = p * pi / M1, ph = q * pi / M2;
                a.theta.push_back(th);
                a.e.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
            }
    } else {
        throw std::invalid_argument("angle set: d must be 2 or 3");
    }
    return a;
}

namespace {

double dot(const std::array<int, 3>& k, const std::array<double, 3>& e, int d) {
    double s = 0.0;
    for (int a = 0; a < d; ++a) s += k[a] * e[a];
    return s;
}

double perp_norm(const std::array<int, 3>& k, const std::array<double, 3>& e) {
    double ke = k[0] * e[0] + k[1] * e[1] + k[2] * e[2];
    double s = 0.0;
    for (int a = 0; a < 3; ++a) {
        double c = k[a] - ke * e[a];
        s += c * c;
    }
    return std::sqrt(s);
}

// alpha-type factor for direction e (the line through y)
double line_factor(int d, double R, double scale, const std::array<int, 3>& k, const std::array<double, 3>& e) {
    double s = scale * dot(k, e, d);
    return d == 2 ? phi2(R, s) : phi3(R, s);
}

// alpha'-type factor: d=2 line along e_perp, d=3 disc orthogonal to e
double plane_factor(int d, double R, double scale, const std::array<int, 3>& k, const std::array<double, 3>& e) {
    if (d == 2) {
        std::array<double, 3> ep{-e[1], e[0], 0.0};
        return phi2(R, scale * dot(k, ep, 2));
    }
    return psi3(R, scale * perp_norm(k, e));
}

}  // namespace

FastKernelTables build_fast_decomposition(const VelocityGrid& grid, const VHSKernel& kernel, double R, int M1,
                                          int M2) {
    const double Bf = carleman_constant(grid.d, kernel);
    if (!(R > 0.0)) throw std::invalid_argument("truncation radius R must be positive");
    if (grid.d == 2) M2 = M1;
    AngleSet as = make_angle_set(grid.d, M1, M2);
    FastKernelTables t;
    t.grid = grid;
    t.kernel = kernel;
    t.R = R;
    t.M1 = M1;
    t.M2 = M2;
    t.weight = Bf * as.weight;

    const std::size_t N = grid.size();
    const double scale = pi / grid.T;
    ModeVariants mv(grid);
    for (std::size_t p = 0; p < as.e.size(); ++p) {
        const double jac = grid.d == 3 ? std::sin(as.theta[p]) : 1.0;
        if (jac < 1e-14) continue;
        std::vector<double> a(N), b(N);
        for (std::size_t i = 0; i < N; ++i) {
            const auto& vars = mv.of(i);
            double sa = 0.0, sb = 0.0;
            for (const auto& k : vars) {
                sa += line_factor(grid.d, R, scale, k, as.e[p]);
                sb += plane_factor(grid.d, R, scale, k, as.e[p]);
            }
            a[i] = sa / vars.size();
            b[i] = jac * sb / vars.size();
        }
        t.alpha.push_back(std::move(a));
        t.alphap.push_back(std::move(b));
    }
    t.diag.assign(N, 0.0);
    for (std::size_t p = 0; p < t.alpha.size(); ++p)
        for (std::size_t i = 0; i < N; ++i) t.diag[i] += t.alpha[p][i] * t.alphap[p][i];
    return t;
}

double reconstruct_beta(const FastKernelTables& t, std::size_t li, std::size_t mi) {
    double s = 0.0;
    for (std::size_t p = 0; p < t.alpha.size(); ++p) s += t.alpha[p][li] * t.alphap[p][mi];
    return t.weight * s;
}

namespace {

// Angular integral of the Carleman modes for one pair of integer modes.
double carleman_pair(int d, double R, double T, const std::array<int, 3>& l, const std::array<int, 3>& m,
                     double tol) {
    const double scale = pi / T;
    if (d == 2) {
        // integrand is pi-periodic in theta: trapezoid converges geometrically
        auto rule = [&](int M) {
            double s = 0.0;
            for (int j = 0; j < M; ++j) {
                double th = j * pi / M;
                std::array<double, 3> e{std::cos(th), std::sin(th), 0.0};
                s += line_factor(2, R, scale, l, e) * plane_factor(2, R, scale, m, e);
            }
            return s * pi / M;
        };
        const double ref = pi * 4.0 * R * R;
        int M = 16;
        double prev = rule(M);
        for (; M < (1 << 16); M *= 2) {
            double cur = rule(2 * M);
            if (std::abs(cur - prev) <= tol * ref) return cur;
            prev = cur;
        }
        throw NumericalError("Carleman angular quadrature did not converge");
    }
    // d=3: (1/2) over the full sphere; periodic in phi on [0, 2 pi), Gauss in cos(theta)
    auto rule = [&](int M) {
        double s = 0.0;
        // midpoint in theta avoids the poles and converges fast for smooth integrands
        for (int i = 0; i < M; ++i) {
            double th = (i + 0.5) * pi / M;
            double st = std::sin(th);
            for (int j = 0; j < 2 * M; ++j) {
                double ph = j * pi / M;
                std::array<double, 3> e{st * std::cos(ph), st * std::sin(ph), std::cos(th)};
                s += st * line_factor(3, R, scale, l, e) * plane_factor(3, R, scale, m, e);
            }
        }
        return 0.5 * s * (pi / M) * (pi / M);
    };
    const double ref = 2.0 * pi * R * R * pi * R * R;
    int M = 16;
    double prev = rule(M);
    for (; M <= 512; M *= 2) {
        double cur = rule(2 * M);
        if (std::abs(cur - prev) <= tol * ref) return cur;
        prev = cur;
    }
    throw NumericalError("Carleman angular quadrature did not converge");
}

}  // namespace

DenseModesTable compute_carleman_modes(const VelocityGrid& grid, const VHSKernel& kernel, double R, double tol) {
    const double Bf = carleman_constant(grid.d, kernel);
    const std::size_t N = grid.size();
    ModeVariants mv(grid);
    DenseModesTable t;
    t.grid = grid;
    t.values.assign(N * N, 0.0);
    for (std::size_t li = 0; li < N; ++li)
        for (std::size_t mi = 0; mi < N; ++mi) {
            const auto& vl = mv.of(li);
            const auto& vm = mv.of(mi);
            double s = 0.0;
            for (const auto& a : vl)
                for (const auto& b : vm) s += carleman_pair(grid.d, R, grid.T, a, b, tol);
            t.values[li * N + mi] = Bf * s / static_cast<double>(vl.size() * vm.size());
        }
    t.diag.resize(N);
    for (std::size_t m = 0; m < N; ++m) t.diag[m] = t.values[m * N + m];
    return t;
}

FastCollision::FastCollision(std::shared_ptr<const FastKernelTables> tables, std::shared_ptr<const FftBackend> backend)
    : tables_(std::move(tables)),
      backend_(backend ? std::move(backend) : make_fftw_backend(tables_->grid.d, tables_->grid.n)),
      transform_(tables_->grid, backend_) {
    const std::size_t N = tables_->grid.size();
    F_.resize(N);
    buf_.resize(N);
    acc_.resize(N);
}

void FastCollision::apply_nodal(const double* f, double* q, double scale) {
    const auto& t = *tables_;
    const std::size_t N = t.grid.size();
    const double invN = 1.0 / static_cast<double>(N);
    for (std::size_t i = 0; i < N; ++i) F_[i] = cplx(f[i] * invN, 0.0);
    backend_->forward(F_.data(), F_.data());
    ++forward_count_;
    std::fill(acc_.begin(), acc_.end(), 0.0);
    // alpha and alpha' act on the same real field, so both products are
    // recovered from one complex transform: Re and Im of ifft((a + i b) F).
    for (std::size_t p = 0; p < t.alpha.size(); ++p) {
        const double* a = t.alpha[p].data();
        const double* b = t.alphap[p].data();
        for (std::size_t i = 0; i < N; ++i) buf_[i] = cplx(a[i], b[i]) * F_[i];
        backend_->backward(buf_.data(), buf_.data());
        ++inverse_count_;
        for (std::size_t i = 0; i < N; ++i) acc_[i] += buf_[i].real() * buf_[i].imag();
    }
    for (std::size_t i = 0; i < N; ++i) buf_[i] = t.diag[i] * F_[i];
    backend_->backward(buf_.data(), buf_.data());
    ++inverse_count_;
    const double w = scale * t.weight;
    for (std::size_t i = 0; i < N; ++i) q[i] = w * (acc_[i] - buf_[i].real() * f[i]);
}

std::vector<double> FastCollision::apply(const SpectralField& f) {
    auto values = transform_.inverse(f);
    ++inverse_count_;
    std::vector<double> q(values.size());
    apply_nodal(values.data(), q.data());
    return q;
}

}  // namespace boltz
