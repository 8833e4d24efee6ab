#pragma once

// Received-signal-strength generation: log-distance path loss, log-normal
// shadowing (optionally spatially correlated) and Rayleigh power fading.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "handoff/error.hpp"
#include "handoff/rng.hpp"

namespace handoff {

struct PropagationParams {
    double p_ref_dbm = -5.0;      ///< power at the 1 m reference distance
    double gamma = 3.0;           ///< path-loss exponent, [2, 6]
    double shadow_sigma_db = 8.0;
    double shadow_decorr_m = 20.0;  ///< 0 gives i.i.d. shadowing
    bool rayleigh_enabled = true;
    bool shadowing_enabled = true;

    void validate() const {
        if (!std::isfinite(p_ref_dbm)) throw ConfigError("propagation.p_ref_dbm must be finite");
        if (!(gamma >= 2.0 && gamma <= 6.0))
            throw ConfigError("propagation.gamma must lie in [2, 6]");
        if (!(shadow_sigma_db >= 0.0) || !std::isfinite(shadow_sigma_db))
            throw ConfigError("propagation.shadow_sigma_db must be >= 0");
        if (!(shadow_decorr_m >= 0.0) || !std::isfinite(shadow_decorr_m))
            throw ConfigError("propagation.shadow_decorr_m must be >= 0");
    }

    friend bool operator==(const PropagationParams&, const PropagationParams&) = default;
};

struct SignalSample {
    double distance_m = 0.0;
    double rss_dbm = 0.0;
    double path_loss_dbm = 0.0;  ///< deterministic mean RSS
    double shadow_db = 0.0;
    double fading_db = 0.0;
};

inline constexpr double kMinDistanceM = 1.0;

/// Mean RSS in dBm, p_ref - 10 gamma log10(d), with d clamped to 1 m.
inline double mean_rss(double distance_m, const PropagationParams& params) {
    if (!std::isfinite(distance_m)) throw Error("mean_rss: distance must be finite");
    const double d = std::max(distance_m, kMinDistanceM);
    return params.p_ref_dbm - 10.0 * params.gamma * std::log10(d);
}

/// Draws one sample at `distance_m`. When `prev_shadow_db` is set and the
/// decorrelation distance is positive, the shadowing term follows the
/// Gudmundson AR(1) recursion over a spatial step of `step_m`.
template <class Engine>
SignalSample sample_rss(double distance_m, const PropagationParams& params, Engine& engine,
                        std::optional<double> prev_shadow_db = std::nullopt,
                        double step_m = 0.0) {
    SignalSample s;
    s.distance_m = std::max(distance_m, kMinDistanceM);
    s.path_loss_dbm = mean_rss(distance_m, params);

    if (params.shadowing_enabled && params.shadow_sigma_db > 0.0) {
        std::normal_distribution<double> normal(0.0, params.shadow_sigma_db);
        const double innovation = normal(engine);
        if (prev_shadow_db && params.shadow_decorr_m > 0.0) {
            const double rho = std::exp(-std::abs(step_m) / params.shadow_decorr_m);
            s.shadow_db = rho * *prev_shadow_db + std::sqrt(1.0 - rho * rho) * innovation;
        } else {
            s.shadow_db = innovation;
        }
    }

    if (params.rayleigh_enabled) {
        std::exponential_distribution<double> power_gain(1.0);
        const double g = std::max(power_gain(engine), std::numeric_limits<double>::min());
        s.fading_db = 10.0 * std::log10(g);
    }

    s.rss_dbm = s.path_loss_dbm + s.shadow_db + s.fading_db;
    return s;
}

/// One sample per trajectory position, measured from a base station at
/// `bs_position_m` on the same line. Shadowing correlation is threaded
/// through consecutive positions.
inline std::vector<SignalSample> generate_trace(std::span<const double> trajectory_m,
                                                double bs_position_m,
                                                const PropagationParams& params,
                                                const RngStream& rng) {
    if (trajectory_m.empty()) throw Error("generate_trace: empty trajectory");
    params.validate();

    auto engine = rng.engine();
    std::vector<SignalSample> trace;
    trace.reserve(trajectory_m.size());
    std::optional<double> prev_shadow;
    for (std::size_t i = 0; i < trajectory_m.size(); ++i) {
        const double step = i == 0 ? 0.0 : trajectory_m[i] - trajectory_m[i - 1];
        const double d = std::abs(trajectory_m[i] - bs_position_m);
        trace.push_back(sample_rss(d, params, engine, prev_shadow, step));
        prev_shadow = trace.back().shadow_db;
    }
    return trace;
}

}  // namespace handoff
