#pragma once

// Handoff policy: level quantization, network input encoding, the reference
// decision table, the threshold/hysteresis gate and the gated pipeline.

#include <array>
#include <cmath>
#include <string_view>
#include <vector>

#include "handoff/error.hpp"
#include "handoff/neuralnet.hpp"

namespace handoff {

enum class RssLevel { Low, High };
enum class TiLevel { Low, Medium, High };
enum class GateMode { Full, HysteresisOnly, None };
enum class Outcome { NoHandoff, Handoff };
enum class Provenance { GateBlocked, NetworkDecided };

/// Offered load per channel, in Erlang.
class TrafficIntensity {
public:
    TrafficIntensity() = default;
    explicit TrafficIntensity(double erlang_per_channel) : value_(erlang_per_channel) {
        if (!std::isfinite(value_) || value_ < 0.0)
            throw Error("traffic intensity must be finite and >= 0");
    }
    double value() const noexcept { return value_; }

    friend bool operator==(const TrafficIntensity&, const TrafficIntensity&) = default;

private:
    double value_ = 0.0;
};

struct DecisionConfig {
    double threshold_dbm = -85.0;
    double hysteresis_db = 5.0;
    double ti_low_bound = 0.66;
    double ti_high_bound = 0.76;
    GateMode gate_mode = GateMode::Full;

    void validate() const {
        if (!std::isfinite(threshold_dbm)) throw ConfigError("decision.threshold_dbm must be finite");
        if (!(hysteresis_db >= 0.0) || !std::isfinite(hysteresis_db))
            throw ConfigError("decision.hysteresis_db must be >= 0");
        if (!(ti_low_bound < ti_high_bound))
            throw ConfigError("decision.ti_low_bound must be < decision.ti_high_bound");
    }

    friend bool operator==(const DecisionConfig&, const DecisionConfig&) = default;
};

struct HandoffDecision {
    Outcome outcome = Outcome::NoHandoff;
    Provenance provenance = Provenance::NetworkDecided;

    bool is_handoff() const noexcept { return outcome == Outcome::Handoff; }
    friend bool operator==(const HandoffDecision&, const HandoffDecision&) = default;
};

struct LevelTuple {
    RssLevel rss_serving;
    RssLevel rss_target;
    TiLevel ti_serving;
    TiLevel ti_target;

    friend bool operator==(const LevelTuple&, const LevelTuple&) = default;
};

inline RssLevel quantize_rss(double rss_dbm, const DecisionConfig& config = {}) {
    if (!std::isfinite(rss_dbm)) throw Error("quantize_rss: non-finite rss");
    return rss_dbm <= config.threshold_dbm ? RssLevel::Low : RssLevel::High;
}

/// Both band edges belong to Medium.
inline TiLevel quantize_ti(TrafficIntensity ti, const DecisionConfig& config = {}) {
    if (ti.value() < config.ti_low_bound) return TiLevel::Low;
    if (ti.value() > config.ti_high_bound) return TiLevel::High;
    return TiLevel::Medium;
}

inline double level_code(RssLevel l) { return l == RssLevel::Low ? -1.0 : 1.0; }

inline double level_code(TiLevel l) {
    switch (l) {
        case TiLevel::Low: return -1.0;
        case TiLevel::Medium: return 0.0;
        case TiLevel::High: return 1.0;
    }
    return 0.0;
}

inline InputVector encode(const LevelTuple& l) {
    return {level_code(l.rss_serving), level_code(l.rss_target), level_code(l.ti_serving),
            level_code(l.ti_target), 1.0};
}

namespace detail {

constexpr bool H = true;
constexpr bool N = false;

// [target TI][serving TI], one block per (serving RSS, target RSS).
using TableBlock = std::array<std::array<bool, 3>, 3>;

constexpr TableBlock kServingLowTargetLow{{{N, H, H}, {N, N, H}, {N, N, N}}};
constexpr TableBlock kServingHighTargetHigh{{{N, H, H}, {N, N, H}, {N, N, N}}};
constexpr TableBlock kServingLowTargetHigh{{{H, H, H}, {H, H, H}, {N, N, H}}};
constexpr TableBlock kServingHighTargetLow{{{N, N, H}, {N, N, H}, {N, N, N}}};

}  // namespace detail

/// Reference policy table. Rows are indexed by target TI, columns by serving TI.
inline HandoffDecision table_oracle(const LevelTuple& l) {
    const detail::TableBlock* block = nullptr;
    if (l.rss_serving == RssLevel::Low)
        block = l.rss_target == RssLevel::Low ? &detail::kServingLowTargetLow
                                              : &detail::kServingLowTargetHigh;
    else
        block = l.rss_target == RssLevel::High ? &detail::kServingHighTargetHigh
                                               : &detail::kServingHighTargetLow;
    const bool ho = (*block)[static_cast<int>(l.ti_target)][static_cast<int>(l.ti_serving)];
    return {ho ? Outcome::Handoff : Outcome::NoHandoff, Provenance::NetworkDecided};
}

inline std::vector<LevelTuple> all_level_tuples() {
    std::vector<LevelTuple> out;
    for (auto rs : {RssLevel::Low, RssLevel::High})
        for (auto rt : {RssLevel::Low, RssLevel::High})
            for (auto ts : {TiLevel::Low, TiLevel::Medium, TiLevel::High})
                for (auto tt : {TiLevel::Low, TiLevel::Medium, TiLevel::High})
                    out.push_back({rs, rt, ts, tt});
    return out;
}

/// The 36 table rows as training samples.
inline std::vector<TrainingSample> canonical_dataset() {
    std::vector<TrainingSample> out;
    for (const auto& l : all_level_tuples())
        out.push_back({encode(l), table_oracle(l).is_handoff() ? 1.0 : -1.0});
    return out;
}

inline bool gate(double rss_serving_dbm, double rss_target_dbm, const DecisionConfig& config) {
    const bool margin = rss_target_dbm - rss_serving_dbm >= config.hysteresis_db;
    switch (config.gate_mode) {
        case GateMode::Full: return rss_serving_dbm < config.threshold_dbm && margin;
        case GateMode::HysteresisOnly: return margin;
        case GateMode::None: return true;
    }
    return true;
}

/// Everything the pipeline looked at, for reporting.
struct DecisionDetail {
    HandoffDecision decision;
    bool gate_passed = false;
    LevelTuple levels{};
    double network_output = 0.0;
};

inline DecisionDetail explain(double rss_serving_dbm, double rss_target_dbm, TrafficIntensity ti_serving,
                              TrafficIntensity ti_target, const NetworkWeights& net,
                              const DecisionConfig& config) {
    DecisionDetail d;
    d.levels = {quantize_rss(rss_serving_dbm, config), quantize_rss(rss_target_dbm, config),
                quantize_ti(ti_serving, config), quantize_ti(ti_target, config)};
    d.network_output = forward(net, encode(d.levels)).y;
    d.gate_passed = gate(rss_serving_dbm, rss_target_dbm, config);
    if (!d.gate_passed)
        d.decision = {Outcome::NoHandoff, Provenance::GateBlocked};
    else
        d.decision = {classify(d.network_output) > 0 ? Outcome::Handoff : Outcome::NoHandoff,
                      Provenance::NetworkDecided};
    return d;
}

inline HandoffDecision decide(double rss_serving_dbm, double rss_target_dbm, TrafficIntensity ti_serving,
                              TrafficIntensity ti_target, const NetworkWeights& net,
                              const DecisionConfig& config) {
    return explain(rss_serving_dbm, rss_target_dbm, ti_serving, ti_target, net, config).decision;
}

// Names used in config files, CSV and CLI output.

inline std::string_view to_string(RssLevel l) { return l == RssLevel::Low ? "L" : "H"; }

inline std::string_view to_string(TiLevel l) {
    switch (l) {
        case TiLevel::Low: return "L";
        case TiLevel::Medium: return "M";
        case TiLevel::High: return "H";
    }
    return "?";
}

inline std::string_view to_string(Outcome o) { return o == Outcome::Handoff ? "Handoff" : "NoHandoff"; }

inline std::string_view to_string(Provenance p) {
    return p == Provenance::GateBlocked ? "GateBlocked" : "NetworkDecided";
}

inline std::string_view to_string(GateMode m) {
    switch (m) {
        case GateMode::Full: return "full";
        case GateMode::HysteresisOnly: return "hysteresis_only";
        case GateMode::None: return "none";
    }
    return "?";
}

inline GateMode gate_mode_from_string(std::string_view s) {
    if (s == "full") return GateMode::Full;
    if (s == "hysteresis_only") return GateMode::HysteresisOnly;
    if (s == "none") return GateMode::None;
    throw ConfigError("decision.gate_mode must be one of full, hysteresis_only, none");
}

}  // namespace handoff
