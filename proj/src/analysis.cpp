#include "boltz/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace boltz {

namespace {

struct Line {
    double intercept = 0.0, slope = 0.0;
};

Line least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    Line l;
    l.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    l.intercept = my - l.slope * mx;
    return l;
}

// Height above the higher of the two lowest points reached on either side
// before the series rises above r[i]. A side that runs into the end of the
// window is ignored, so edge peaks are not penalized by truncation.
double prominence(const std::vector<double>& r, std::size_t i) {
    double left = r[i], right = r[i];
    std::size_t j = i;
    while (j > 0 && r[j - 1] <= r[i]) left = std::min(left, r[--j]);
    const bool left_open = j == 0;
    j = i;
    while (j + 1 < r.size() && r[j + 1] <= r[i]) right = std::min(right, r[++j]);
    const bool right_open = j + 1 == r.size();
    double base;
    if (left_open && right_open)
        base = std::min(left, right);
    else if (left_open)
        base = right;
    else if (right_open)
        base = left;
    else
        base = std::max(left, right);
    return r[i] - base;
}

}  // namespace

FitOptions decay_window(const std::vector<double>& t, const std::vector<double>& H, double t_start,
                        double decades) {
    if (t.size() != H.size() || t.empty()) throw std::invalid_argument("decay_window: bad series");
    FitOptions o;
    o.t_min = t_start;
    o.t_max = t.back();
    std::size_t imax = 0;
    for (std::size_t i = 0; i < H.size(); ++i)
        if (t[i] >= t_start && (H[i] > H[imax] || t[imax] < t_start)) imax = i;
    const double level = H[imax] * std::pow(10.0, -decades);
    for (std::size_t i = imax; i < H.size(); ++i)
        if (H[i] < level) {
            o.t_max = t[i];
            break;
        }
    return o;
}

OscillationFit fit_oscillation(const std::vector<double>& t_all, const std::vector<double>& H_all,
                               const FitOptions& opt) {
    if (t_all.size() != H_all.size()) throw std::invalid_argument("fit_oscillation: t and H differ in length");
    if (opt.neighbourhood < 1) throw std::invalid_argument("fit_oscillation: neighbourhood must be positive");
    OscillationFit fit;
    std::vector<double> t, y;
    for (std::size_t i = 0; i < t_all.size(); ++i) {
        if (t_all[i] < opt.t_min || t_all[i] > opt.t_max) continue;
        if (!(H_all[i] > 0.0) || !std::isfinite(H_all[i])) {
            fit.diagnostic = "H is not positive at t = " + std::to_string(t_all[i]);
            return fit;
        }
        t.push_back(t_all[i]);
        y.push_back(std::log(H_all[i]));
    }
    const int k = opt.neighbourhood;
    if (t.size() < static_cast<std::size_t>(2 * k + 3)) {
        fit.diagnostic = "too few samples in the window";
        return fit;
    }
    const Line trend = least_squares(t, y);
    fit.alpha_detrend = trend.slope;
    std::vector<double> r(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) r[i] = y[i] - trend.intercept - trend.slope * t[i];

    std::vector<std::size_t> cand;
    std::vector<double> prom;
    for (std::size_t i = k; i + k < r.size(); ++i) {
        bool is_max = true;
        for (int j = 1; j <= k && is_max; ++j) is_max = r[i] > r[i - j] && r[i] >= r[i + j];
        if (!is_max) continue;
        cand.push_back(i);
        prom.push_back(prominence(r, i));
    }
    const double top = prom.empty() ? 0.0 : *std::max_element(prom.begin(), prom.end());
    if (top < opt.min_prominence) {
        fit.diagnostic = "no oscillation above the round-off floor of log H";
        return fit;
    }

    std::vector<double> pt, py;
    for (std::size_t c = 0; c < cand.size(); ++c) {
        if (prom[c] < opt.min_relative_prominence * top) continue;
        const std::size_t i = cand[c];
        // parabola through three samples, nonuniform spacing allowed
        const double t0 = t[i - 1], t1 = t[i], t2 = t[i + 1];
        const double d1 = (r[i] - r[i - 1]) / (t1 - t0), d2 = (r[i + 1] - r[i]) / (t2 - t1);
        const double curv = (d2 - d1) / (t2 - t0);
        double tp = t1, dy = 0.0;
        if (curv < 0.0) {
            const double slope_mid = (d1 * (t2 - t1) + d2 * (t1 - t0)) / (t2 - t0);
            const double h = std::clamp(-slope_mid / (2.0 * curv), t0 - t1, t2 - t1);
            tp = t1 + h;
            dy = slope_mid * h + curv * h * h;
        }
        pt.push_back(tp);
        py.push_back(y[i] + dy + trend.slope * (tp - t1));
    }
    fit.peaks = static_cast<int>(pt.size());
    fit.peak_times = pt;
    if (pt.size() < 3) {
        fit.diagnostic = "found " + std::to_string(pt.size()) + " maxima, need at least 3";
        return fit;
    }
    fit.period = (pt.back() - pt.front()) / static_cast<double>(pt.size() - 1);
    const Line env = least_squares(pt, py);
    fit.alpha = env.slope;
    double ss = 0.0;
    for (std::size_t i = 0; i < pt.size(); ++i) {
        const double e = py[i] - env.intercept - env.slope * pt[i];
        ss += e * e;
    }
    fit.residual = std::sqrt(ss / static_cast<double>(pt.size()));
    fit.ok = std::isfinite(fit.residual) && fit.period > 0.0;
    if (!fit.ok) fit.diagnostic = "degenerate fit";
    return fit;
}

LinearizedPrediction predict_linearized(int d, double L, std::optional<double> eta, std::optional<double> lambda) {
    if (d < 2) throw std::invalid_argument("predict_linearized: d must be at least 2");
    if (!(L > 0.0)) throw std::invalid_argument("predict_linearized: L must be positive");
    if (eta.has_value() != lambda.has_value())
        throw std::invalid_argument("predict_linearized: give both eta and lambda or neither");
    LinearizedPrediction p;
    p.kappa = 2.0 * std::numbers::pi / L;
    const double c = std::sqrt(1.0 + 2.0 / d);
    p.period = L / c;
    p.period_over_L = 1.0 / c;
    if (eta) {
        const double e = *eta, l = *lambda;
        if (!(e > 0.0) || !(l > 0.0)) throw std::invalid_argument("predict_linearized: eta and lambda must be positive");
        const double r12 = -l / (d + 2) - 0.5 * e;
        p.R = {r12, r12};
        for (int j = 3; j <= d + 1; ++j) p.R.push_back(-e * d / (2.0 * (d - 1)));
        p.R.push_back(-l * d / (d + 2));
        p.dominant_damping = p.kappa * p.kappa * *std::max_element(p.R.begin(), p.R.end());
    }
    return p;
}

}  // namespace boltz
