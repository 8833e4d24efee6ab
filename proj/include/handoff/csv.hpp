#pragma once

// Plot-ready CSV. Numbers use the shortest round-trip form with '.' as the
// decimal separator regardless of locale; absent values are empty fields.

#include <charconv>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "handoff/channel.hpp"
#include "handoff/decision.hpp"
#include "handoff/estimator.hpp"
#include "handoff/simulator.hpp"

namespace handoff::csv {

inline std::string num(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline std::string num(std::optional<double> v) { return v ? num(*v) : std::string(); }

inline void write_signal_traces(std::ostream& os, std::span<const SignalSample> serving,
                                std::span<const SignalSample> target) {
    os << "distance_m,rss_serving_dbm,rss_target_dbm\n";
    for (std::size_t i = 0; i < serving.size() && i < target.size(); ++i)
        os << num(serving[i].distance_m) << ',' << num(serving[i].rss_dbm) << ',' << num(target[i].rss_dbm)
           << '\n';
}

inline void write_estimated_trace(std::ostream& os, std::span<const EstimatedPoint> points) {
    os << "distance_m,rss_raw_dbm,rss_est_dbm\n";
    for (const auto& p : points)
        os << num(p.distance_m) << ',' << num(p.raw_rss_dbm) << ',' << num(p.estimated_rss_dbm) << '\n';
}

inline void write_decision_trace(std::ostream& os, const RunResult& run) {
    os << "distance_m,rss_s_est,rss_t_est,decision,serving_bs\n";
    for (const auto& e : run.decision_trace)
        os << num(e.distance_m) << ',' << num(e.rss_serving_dbm) << ',' << num(e.rss_target_dbm) << ','
           << to_string(e.decision.outcome) << ',' << e.serving_bs + 1 << '\n';
}

inline void write_run_summary(std::ostream& os, const MonteCarloResult& mc) {
    os << "run,handoff_count,first_ho_m,fluctuation_count\n";
    for (std::size_t i = 0; i < mc.runs.size(); ++i) {
        const auto& r = mc.runs[i];
        os << i << ',' << r.handoff_count << ',' << num(r.first_handoff_distance_m) << ','
           << r.fluctuation_count << '\n';
    }
}

inline void write_sweep(std::ostream& os, const SweepResult& rows) {
    os << "hysteresis_db,threshold_dbm,ti_s,ti_t,avg_handoffs,avg_first_ho_m,runs\n";
    for (const auto& r : rows)
        os << num(r.hysteresis_db) << ',' << num(r.threshold_dbm) << ',' << num(r.ti_serving.value()) << ','
           << num(r.ti_target.value()) << ',' << num(r.avg_handoff_count) << ','
           << num(r.avg_first_handoff_distance_m) << ',' << r.runs << '\n';
}

}  // namespace handoff::csv
