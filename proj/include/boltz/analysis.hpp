#pragma once

#include <optional>
#include <string>
#include <vector>

namespace boltz {

struct OscillationFit {
    bool ok = false;
    std::string diagnostic;  // why no fit was produced
    double period = 0.0;     // mean spacing of successive maxima
    double alpha = 0.0;      // decay rate of H, 1/time (negative when damped)
    double alpha_detrend = 0.0;  // slope of the linear fit of log H
    double residual = 0.0;   // rms misfit of log H at the peaks about the envelope line
    int peaks = 0;
    std::vector<double> peak_times;
    double angular_frequency() const { return period > 0.0 ? 6.283185307179586 / period : 0.0; }
};

struct FitOptions {
    double t_min = -1e300;
    double t_max = 1e300;
    int neighbourhood = 2;  // a maximum must dominate this many samples on each side
    // Maxima whose topographic prominence in the residual is below this
    // fraction of the largest prominence are shoulders, not oscillation peaks.
    double min_relative_prominence = 0.25;
    // Absolute floor on the prominence in log H; below it the residual is round-off.
    double min_prominence = 1e-8;
};

// log H is detrended by linear least squares; maxima of the residual give the
// period; alpha is refined by a least-squares line through log H at the peaks.
// Needs H > 0 on the window and at least three maxima.
// Window [t_start, t_end] where t_end is the first time after the maximum of
// H at which H has fallen by the given number of decades below that maximum
// (the last sample if it never does). Keeps the fit above the noise floor.
FitOptions decay_window(const std::vector<double>& t, const std::vector<double>& H, double t_start,
                        double decades = 5.0);

OscillationFit fit_oscillation(const std::vector<double>& t, const std::vector<double>& H,
                               const FitOptions& opt = {});

struct LinearizedPrediction {
    double kappa = 0.0;          // 2 pi / L
    double period = 0.0;         // 2 pi / (sqrt(1 + 2/d) kappa) = L / sqrt(1 + 2/d)
    double period_over_L = 0.0;
    std::vector<double> R;       // R_1 .. R_{d+2}, present when eta and lambda are given
    std::optional<double> dominant_damping;  // kappa^2 max_j R_j
};

LinearizedPrediction predict_linearized(int d, double L, std::optional<double> eta = std::nullopt,
                                        std::optional<double> lambda = std::nullopt);

}  // namespace boltz
