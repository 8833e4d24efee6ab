#pragma once

// Sliding-window least-squares fit of RSS (dBm) against 10 log10(d).
// The fitted line doubles as a smoother for the decision pipeline.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "handoff/channel.hpp"
#include "handoff/error.hpp"

namespace handoff {

struct EstimatorConfig {
    int window_len = 50;
    int min_samples = 10;

    void validate() const {
        if (min_samples < 2) throw ConfigError("estimator.min_samples must be >= 2");
        if (window_len < min_samples)
            throw ConfigError("estimator.window_len must be >= estimator.min_samples");
    }

    friend bool operator==(const EstimatorConfig&, const EstimatorConfig&) = default;
};

struct RssPoint {
    double distance_m = 0.0;
    double rss_dbm = 0.0;
};

struct PathLossFit {
    double gamma_hat = 0.0;
    double p_ref_hat_dbm = 0.0;
    double fitted_rss_dbm = 0.0;
    double residual_rms_db = 0.0;
};

struct EstimatedPoint {
    double distance_m = 0.0;
    double raw_rss_dbm = 0.0;
    double estimated_rss_dbm = 0.0;
};

namespace detail {

inline constexpr double kMinRegressorVariance = 1e-12;

inline double log_regressor(double distance_m) { return 10.0 * std::log10(distance_m); }

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

// A sample with its regressor u = 10 log10(d) already evaluated.
struct RegressorPoint {
    double u = 0.0;
    double y = 0.0;
};

inline std::vector<RegressorPoint> to_regressors(std::span<const RssPoint> samples) {
    std::vector<RegressorPoint> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back({log_regressor(s.distance_m), s.rss_dbm});
    return out;
}

// Centered two-pass OLS; nullopt when the regressor variance is degenerate.
inline std::optional<LineFit> ols(std::span<const RegressorPoint> samples) {
    const auto n = static_cast<double>(samples.size());
    double u_mean = 0.0, y_mean = 0.0;
    for (const auto& s : samples) {
        u_mean += s.u;
        y_mean += s.y;
    }
    u_mean /= n;
    y_mean /= n;

    double suu = 0.0, suy = 0.0;
    for (const auto& s : samples) {
        const double du = s.u - u_mean;
        suu += du * du;
        suy += du * (s.y - y_mean);
    }
    if (suu / n < kMinRegressorVariance) return std::nullopt;

    LineFit fit;
    fit.slope = suy / suu;
    fit.intercept = y_mean - fit.slope * u_mean;
    double sse = 0.0;
    for (const auto& s : samples) {
        const double r = s.y - (fit.intercept + fit.slope * s.u);
        sse += r * r;
    }
    fit.residual_rms = std::sqrt(sse / n);
    return fit;
}

inline PathLossFit to_path_loss(const LineFit& line, double d_query) {
    PathLossFit fit;
    fit.gamma_hat = -line.slope;
    fit.p_ref_hat_dbm = line.intercept;
    fit.fitted_rss_dbm = fit.p_ref_hat_dbm - 10.0 * fit.gamma_hat * std::log10(d_query);
    fit.residual_rms_db = line.residual_rms;
    return fit;
}

}  // namespace detail

/// Fits rss = p_ref - 10 gamma log10(d) over `samples` and evaluates the
/// model at `d_query`.
inline PathLossFit fit_window(std::span<const RssPoint> samples, double d_query,
                              const EstimatorConfig& config = {}) {
    config.validate();
    if (samples.size() < static_cast<std::size_t>(config.min_samples))
        throw NotEnoughSamples("fit_window: " + std::to_string(samples.size()) +
                               " samples, need " + std::to_string(config.min_samples));
    for (const auto& s : samples)
        if (!(s.distance_m >= kMinDistanceM) || !std::isfinite(s.rss_dbm))
            throw Error("fit_window: distances must be >= 1 m and rss finite");

    const auto line = detail::ols(detail::to_regressors(samples));
    if (!line) throw DegenerateRegressor("fit_window: all sample distances are identical");
    return detail::to_path_loss(*line, std::max(d_query, kMinDistanceM));
}

/// Smooths a trace with a trailing window. Indices before min_samples - 1
/// pass the raw value through; a degenerate window reuses the previous fit.
inline std::vector<EstimatedPoint> estimate_stream(std::span<const SignalSample> trace,
                                                   const EstimatorConfig& config) {
    config.validate();
    if (trace.empty()) throw Error("estimate_stream: empty trace");

    std::vector<RssPoint> points;
    points.reserve(trace.size());
    for (const auto& s : trace) points.push_back({s.distance_m, s.rss_dbm});
    const auto regressors = detail::to_regressors(points);

    const auto window = static_cast<std::size_t>(config.window_len);
    const auto warmup = static_cast<std::size_t>(config.min_samples - 1);

    std::vector<EstimatedPoint> out;
    out.reserve(trace.size());
    std::optional<detail::LineFit> last;
    for (std::size_t i = 0; i < points.size(); ++i) {
        EstimatedPoint p{points[i].distance_m, points[i].rss_dbm, points[i].rss_dbm};
        if (i >= warmup) {
            const std::size_t begin = i + 1 > window ? i + 1 - window : 0;
            if (auto line = detail::ols(std::span(regressors).subspan(begin, i + 1 - begin)))
                last = line;
            if (last)
                p.estimated_rss_dbm = detail::to_path_loss(*last, points[i].distance_m).fitted_rss_dbm;
        }
        out.push_back(p);
    }
    return out;
}

}  // namespace handoff
