#pragma once

// Straight-line trajectory from BS1 to BS2 with per-sample estimation and
// decision, immediate role swap on handoff, and Monte Carlo aggregation.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <thread>
#include <vector>

#include "handoff/channel.hpp"
#include "handoff/decision.hpp"
#include "handoff/estimator.hpp"
#include "handoff/neuralnet.hpp"
#include "handoff/rng.hpp"

namespace handoff {

struct ScenarioConfig {
    double cell_radius_m = 500.0;
    double bs_separation_m = 1000.0;
    double sample_step_m = 1.0;
    TrafficIntensity ti_serving{0.5};
    TrafficIntensity ti_target{0.5};
    PropagationParams propagation;
    EstimatorConfig estimator;
    DecisionConfig decision;
    bool use_estimated_rss = true;
    int n_runs = 100;
    std::uint64_t master_seed = 1;
    int threads = 1;  ///< 0 = hardware concurrency

    void validate() const {
        if (!(cell_radius_m > 0.0)) throw ConfigError("scenario.cell_radius_m must be > 0");
        if (!(bs_separation_m > 2.0 * kMinDistanceM))
            throw ConfigError("scenario.bs_separation_m must exceed 2 m");
        if (!(sample_step_m > 0.0)) throw ConfigError("scenario.sample_step_m must be > 0");
        if (n_runs < 1) throw ConfigError("scenario.n_runs must be >= 1");
        if (threads < 0) throw ConfigError("scenario.threads must be >= 0");
        propagation.validate();
        estimator.validate();
        decision.validate();
    }
};

struct TraceEntry {
    double distance_m = 0.0;  ///< from BS1
    double rss_serving_dbm = 0.0;
    double rss_target_dbm = 0.0;
    HandoffDecision decision;
    int serving_bs = 0;  ///< serving BS at decision time, 0 = BS1

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct RunResult {
    std::optional<double> first_handoff_distance_m;
    int handoff_count = 0;
    int fluctuation_count = 0;
    std::vector<TraceEntry> decision_trace;

    friend bool operator==(const RunResult&, const RunResult&) = default;
};

struct MonteCarloResult {
    double avg_handoff_count = 0.0;
    std::optional<double> avg_first_handoff_distance_m;  ///< over runs with a handoff
    std::vector<RunResult> runs;
};

struct SweepRow {
    double hysteresis_db = 0.0;
    double threshold_dbm = 0.0;
    TrafficIntensity ti_serving;
    TrafficIntensity ti_target;
    double avg_handoff_count = 0.0;
    std::optional<double> avg_first_handoff_distance_m;
    int runs = 0;
};

using SweepResult = std::vector<SweepRow>;

enum class TiGroup { Group1, Group2, Group3 };

/// Figure grouping of (serving, target) TI levels:
/// Group1 = L/L, M/M, H/H, L/M; Group2 = H/L, H/M, M/L; Group3 = L/H, M/H.
inline TiGroup group_of(TiLevel serving, TiLevel target) {
    const int s = static_cast<int>(serving);
    const int t = static_cast<int>(target);
    if (s == t || (serving == TiLevel::Low && target == TiLevel::Medium)) return TiGroup::Group1;
    if (target == TiLevel::High) return TiGroup::Group3;
    return TiGroup::Group2;
}

/// Positions from 1 m off BS1 to 1 m before BS2.
inline std::vector<double> trajectory(const ScenarioConfig& scenario) {
    std::vector<double> pos;
    const double end = scenario.bs_separation_m - kMinDistanceM;
    for (std::size_t k = 0;; ++k) {
        const double p = kMinDistanceM + static_cast<double>(k) * scenario.sample_step_m;
        if (p > end + 1e-9) break;
        pos.push_back(p);
    }
    return pos;
}

namespace detail {

inline std::vector<double> decision_input(const std::vector<SignalSample>& trace,
                                          const ScenarioConfig& scenario) {
    std::vector<double> out;
    out.reserve(trace.size());
    if (scenario.use_estimated_rss) {
        for (const auto& p : estimate_stream(trace, scenario.estimator)) out.push_back(p.estimated_rss_dbm);
    } else {
        for (const auto& s : trace) out.push_back(s.rss_dbm);
    }
    return out;
}

}  // namespace detail

/// One trajectory. Both links are generated and smoothed independently of
/// the decisions; the serving role starts at BS1 and swaps on each handoff.
/// ti_serving / ti_target follow the roles, not the physical stations.
inline RunResult run_once(const ScenarioConfig& scenario, const NetworkWeights& net,
                          std::uint64_t run_index) {
    scenario.validate();
    const auto positions = trajectory(scenario);
    const std::array<std::vector<double>, 2> rss{
        detail::decision_input(generate_trace(positions, 0.0, scenario.propagation,
                                              link_stream(scenario.master_seed, run_index, 0)),
                               scenario),
        detail::decision_input(generate_trace(positions, scenario.bs_separation_m, scenario.propagation,
                                              link_stream(scenario.master_seed, run_index, 1)),
                               scenario)};

    RunResult result;
    result.decision_trace.reserve(positions.size());
    int serving = 0;
    for (std::size_t k = 0; k < positions.size(); ++k) {
        TraceEntry e;
        e.distance_m = positions[k];
        e.serving_bs = serving;
        e.rss_serving_dbm = rss[serving][k];
        e.rss_target_dbm = rss[1 - serving][k];
        e.decision = decide(e.rss_serving_dbm, e.rss_target_dbm, scenario.ti_serving, scenario.ti_target,
                            net, scenario.decision);
        if (e.decision.is_handoff()) {
            ++result.handoff_count;
            if (!result.first_handoff_distance_m) result.first_handoff_distance_m = e.distance_m;
            serving = 1 - serving;
        }
        if (!result.decision_trace.empty() &&
            result.decision_trace.back().decision.outcome != e.decision.outcome)
            ++result.fluctuation_count;
        result.decision_trace.push_back(e);
    }
    return result;
}

/// Runs are independent; results are stored by index and summed in index
/// order, so the outcome does not depend on the thread count.
inline MonteCarloResult run_monte_carlo(const ScenarioConfig& scenario, const NetworkWeights& net) {
    scenario.validate();
    const auto n = static_cast<std::size_t>(scenario.n_runs);
    MonteCarloResult mc;
    mc.runs.resize(n);

    std::size_t workers = scenario.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                                : static_cast<std::size_t>(scenario.threads);
    workers = std::min(workers, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) mc.runs[i] = run_once(scenario, net, i);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < n; i += workers) mc.runs[i] = run_once(scenario, net, i);
            });
    }

    double count_sum = 0.0, dist_sum = 0.0;
    int with_handoff = 0;
    for (const auto& r : mc.runs) {
        count_sum += r.handoff_count;
        if (r.first_handoff_distance_m) {
            dist_sum += *r.first_handoff_distance_m;
            ++with_handoff;
        }
    }
    mc.avg_handoff_count = count_sum / static_cast<double>(n);
    if (with_handoff > 0) mc.avg_first_handoff_distance_m = dist_sum / with_handoff;
    return mc;
}

/// Cartesian product of hysteresis x threshold. Every cell reuses the
/// scenario's master seed (common random numbers).
inline SweepResult sweep(const ScenarioConfig& scenario, const NetworkWeights& net,
                         const std::vector<double>& hysteresis_db, const std::vector<double>& threshold_dbm) {
    if (hysteresis_db.empty() || threshold_dbm.empty())
        throw ConfigError("sweep: hysteresis and threshold lists must be non-empty");
    SweepResult rows;
    for (double h : hysteresis_db) {
        for (double thr : threshold_dbm) {
            ScenarioConfig cell = scenario;
            cell.decision.hysteresis_db = h;
            cell.decision.threshold_dbm = thr;
            const auto mc = run_monte_carlo(cell, net);
            rows.push_back({h, thr, scenario.ti_serving, scenario.ti_target, mc.avg_handoff_count,
                            mc.avg_first_handoff_distance_m, scenario.n_runs});
        }
    }
    return rows;
}

}  // namespace handoff
