#pragma once

// Turns entropy series into the phenomena of interest: entropy drops, the
// first-drop-vs-transparency scan, logarithmic growth fits, and finite-window
// saturation estimates.

#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwalk/line_walk.hpp"
#include "spinwalk/series.hpp"

namespace spinwalk {

struct SeriesTooShort : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegenerateWindow : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kDropTol = 1e-12;

/// Steps tau where S(tau+1) < S(tau) - tol, sorted. An empty result
/// certifies monotonicity at the given tolerance.
inline std::vector<int> detect_drops(const EntropySeries& s, double tol = kDropTol) {
    if (s.values.size() < 2) throw SeriesTooShort("detect_drops needs at least 2 values");
    std::vector<int> drops;
    for (std::size_t tau = 0; tau + 1 < s.values.size(); ++tau)
        if (s.values[tau + 1] < s.values[tau] - tol) drops.push_back(static_cast<int>(tau));
    return drops;
}

/// First drop step of the all-spins line walk per transparency, or nullopt
/// when the series has no drop within the run. Keyed and ordered by T.
inline std::map<double, std::optional<int>> first_drop_scan(const std::vector<double>& T_values,
                                                            int steps = 60) {
    std::map<double, std::optional<int>> out;
    for (double T : T_values) {
        const auto drops = detect_drops(run_line(T, SpinWindow::all(), steps));
        out[T] = drops.empty() ? std::optional<int>{} : std::optional<int>{drops.front()};
    }
    return out;
}

struct LogGrowthFit {
    double a = 0.0;  // slope of S(tau) ~ a ln(tau) + b
    double b = 0.0;
    double r_squared = 0.0;
};

/// Least-squares fit of S(tau) against ln(tau) over tau in [tau_min, tau_max].
/// A constant series has no explainable variance and reports r_squared = 0.
inline LogGrowthFit log_growth_fit(const EntropySeries& s, int tau_min, int tau_max) {
    if (tau_min < 1 || tau_max < tau_min ||
        static_cast<std::size_t>(tau_max) >= s.values.size())
        throw DegenerateWindow("log_growth_fit window outside series");
    const int n = tau_max - tau_min + 1;
    if (n < 3) throw DegenerateWindow("log_growth_fit needs at least 3 points");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int tau = tau_min; tau <= tau_max; ++tau) {
        const double x = std::log(static_cast<double>(tau));
        const double y = s.values[static_cast<std::size_t>(tau)];
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double varx = sxx - sx * sx / n;
    const double vary = syy - sy * sy / n;
    const double covxy = sxy - sx * sy / n;
    LogGrowthFit fit;
    if (varx <= 0.0) throw DegenerateWindow("log_growth_fit: no spread in ln(tau)");
    fit.a = covxy / varx;
    fit.b = (sy - fit.a * sx) / n;
    // a spread below accumulation round-off means a constant series: r^2 := 0
    const bool degenerate = vary <= 1e-12 * std::max(1.0, syy);
    fit.r_squared = degenerate ? 0.0 : (covxy * covxy) / (varx * vary);
    return fit;
}

/// Long-time entropy limit of a finite spin window: once the particle has
/// left the window, only which side it escaped to remains recorded, so
/// S_inf = -(P_L ln P_L + P_R ln P_R).
struct SaturationEstimate {
    double P_L = 0.0;
    double P_R = 0.0;
    double S_inf_predicted = 0.0;
    double S_inf_observed = 0.0;

    double difference() const { return std::abs(S_inf_observed - S_inf_predicted); }
};

/// Tail mean of the series against the prediction from the run's left/right
/// escape weights (normalized; the residual in-window weight decays with 1/tau).
inline SaturationEstimate estimate_saturation(const EntropySeries& s, double tail_fraction,
                                              double left_weight, double right_weight) {
    if (s.values.size() < 2) throw SeriesTooShort("estimate_saturation needs at least 2 values");
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0))
        throw std::invalid_argument("tail_fraction must lie in (0, 1]");
    const double total = left_weight + right_weight;
    if (total <= 0.0) throw std::invalid_argument("estimate_saturation: empty side weights");
    SaturationEstimate est;
    est.P_L = left_weight / total;
    est.P_R = right_weight / total;
    auto plogp = [](double p) { return p > 0.0 ? p * std::log(p) : 0.0; };
    est.S_inf_predicted = -(plogp(est.P_L) + plogp(est.P_R));
    auto tail = static_cast<std::size_t>(
        std::ceil(tail_fraction * static_cast<double>(s.values.size())));
    tail = std::max<std::size_t>(tail, 1);
    double sum = 0.0;
    for (std::size_t k = s.values.size() - tail; k < s.values.size(); ++k) sum += s.values[k];
    est.S_inf_observed = sum / static_cast<double>(tail);
    return est;
}

inline SaturationEstimate estimate_saturation(const EntropySeries& s, double tail_fraction,
                                              const SideWeights& weights) {
    return estimate_saturation(s, tail_fraction, weights.left, weights.right);
}

struct MonotonicityReport {
    bool monotone = true;
    std::vector<int> violations;
};

/// Pass/fail wrapper over detect_drops for the acceptance checks.
inline MonotonicityReport monotonicity_report(const EntropySeries& s, double tol = kDropTol) {
    MonotonicityReport report;
    report.violations = detect_drops(s, tol);
    report.monotone = report.violations.empty();
    return report;
}

}  // namespace spinwalk
