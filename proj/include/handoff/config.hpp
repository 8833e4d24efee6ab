#pragma once

// Scenario JSON: sections propagation, estimator, decision, scenario,
// training. Every key is optional; unknown keys are rejected by name.

#include <fstream>
#include <set>
#include <string>

#include <nlohmann/json.hpp>

#include "handoff/error.hpp"
#include "handoff/neuralnet.hpp"
#include "handoff/simulator.hpp"

namespace handoff {

struct AppConfig {
    ScenarioConfig scenario;  ///< also carries propagation, estimator and decision
    TrainConfig training;
};

namespace detail {

class Section {
public:
    Section(const nlohmann::json& root, std::string name) : name_(std::move(name)) {
        if (!root.contains(name_)) return;
        node_ = &root.at(name_);
        if (!node_->is_object()) throw ConfigError("config: section '" + name_ + "' must be an object");
    }

    bool has(const std::string& key) const { return node_ && node_->contains(key); }

    template <class T>
    void read(const std::string& key, T& out) {
        seen_.insert(key);
        if (!has(key)) return;
        try {
            out = node_->at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw ConfigError("config: " + name_ + "." + key + " has the wrong type");
        }
    }

    void reject_unknown() const {
        if (!node_) return;
        for (const auto& [key, _] : node_->items())
            if (!seen_.contains(key)) throw ConfigError("config: unknown key '" + name_ + "." + key + "'");
    }

private:
    std::string name_;
    const nlohmann::json* node_ = nullptr;
    std::set<std::string> seen_;
};

}  // namespace detail

inline AppConfig config_from_json(const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    for (const auto& [key, _] : root.items())
        if (key != "propagation" && key != "estimator" && key != "decision" && key != "scenario" &&
            key != "training")
            throw ConfigError("config: unknown section '" + key + "'");

    AppConfig cfg;
    auto& sc = cfg.scenario;

    detail::Section prop(root, "propagation");
    prop.read("p_ref_dbm", sc.propagation.p_ref_dbm);
    prop.read("gamma", sc.propagation.gamma);
    prop.read("shadow_sigma_db", sc.propagation.shadow_sigma_db);
    prop.read("shadow_decorr_m", sc.propagation.shadow_decorr_m);
    prop.read("rayleigh_enabled", sc.propagation.rayleigh_enabled);
    prop.read("shadowing_enabled", sc.propagation.shadowing_enabled);
    prop.reject_unknown();

    detail::Section est(root, "estimator");
    est.read("window_len", sc.estimator.window_len);
    est.read("min_samples", sc.estimator.min_samples);
    est.reject_unknown();

    detail::Section dec(root, "decision");
    dec.read("threshold_dbm", sc.decision.threshold_dbm);
    dec.read("hysteresis_db", sc.decision.hysteresis_db);
    dec.read("ti_low_bound", sc.decision.ti_low_bound);
    dec.read("ti_high_bound", sc.decision.ti_high_bound);
    std::string gate = std::string(to_string(sc.decision.gate_mode));
    dec.read("gate_mode", gate);
    sc.decision.gate_mode = gate_mode_from_string(gate);
    dec.reject_unknown();

    detail::Section scen(root, "scenario");
    scen.read("cell_radius_m", sc.cell_radius_m);
    sc.bs_separation_m = 2.0 * sc.cell_radius_m;
    scen.read("bs_separation_m", sc.bs_separation_m);
    scen.read("sample_step_m", sc.sample_step_m);
    double ti_s = sc.ti_serving.value(), ti_t = sc.ti_target.value();
    scen.read("ti_serving", ti_s);
    scen.read("ti_target", ti_t);
    try {
        sc.ti_serving = TrafficIntensity(ti_s);
        sc.ti_target = TrafficIntensity(ti_t);
    } catch (const Error& e) {
        throw ConfigError(std::string("config: scenario: ") + e.what());
    }
    scen.read("use_estimated_rss", sc.use_estimated_rss);
    scen.read("n_runs", sc.n_runs);
    scen.read("master_seed", sc.master_seed);
    scen.read("threads", sc.threads);
    scen.reject_unknown();

    detail::Section tr(root, "training");
    tr.read("learning_rate", cfg.training.learning_rate);
    tr.read("max_epochs", cfg.training.max_epochs);
    tr.read("stop_tolerance", cfg.training.stop_tolerance);
    tr.read("init_range", cfg.training.init_range);
    tr.read("init_seed", cfg.training.init_seed);
    tr.read("shuffle_seed", cfg.training.shuffle_seed);
    tr.reject_unknown();

    sc.validate();
    cfg.training.validate();
    return cfg;
}

inline nlohmann::json config_to_json(const AppConfig& cfg) {
    const auto& sc = cfg.scenario;
    nlohmann::json j;
    j["propagation"] = {{"p_ref_dbm", sc.propagation.p_ref_dbm},
                        {"gamma", sc.propagation.gamma},
                        {"shadow_sigma_db", sc.propagation.shadow_sigma_db},
                        {"shadow_decorr_m", sc.propagation.shadow_decorr_m},
                        {"rayleigh_enabled", sc.propagation.rayleigh_enabled},
                        {"shadowing_enabled", sc.propagation.shadowing_enabled}};
    j["estimator"] = {{"window_len", sc.estimator.window_len}, {"min_samples", sc.estimator.min_samples}};
    j["decision"] = {{"threshold_dbm", sc.decision.threshold_dbm},
                     {"hysteresis_db", sc.decision.hysteresis_db},
                     {"ti_low_bound", sc.decision.ti_low_bound},
                     {"ti_high_bound", sc.decision.ti_high_bound},
                     {"gate_mode", std::string(to_string(sc.decision.gate_mode))}};
    j["scenario"] = {{"cell_radius_m", sc.cell_radius_m},
                     {"bs_separation_m", sc.bs_separation_m},
                     {"sample_step_m", sc.sample_step_m},
                     {"ti_serving", sc.ti_serving.value()},
                     {"ti_target", sc.ti_target.value()},
                     {"use_estimated_rss", sc.use_estimated_rss},
                     {"n_runs", sc.n_runs},
                     {"master_seed", sc.master_seed},
                     {"threads", sc.threads}};
    j["training"] = {{"learning_rate", cfg.training.learning_rate},
                     {"max_epochs", cfg.training.max_epochs},
                     {"stop_tolerance", cfg.training.stop_tolerance},
                     {"init_range", cfg.training.init_range},
                     {"init_seed", cfg.training.init_seed},
                     {"shuffle_seed", cfg.training.shuffle_seed}};
    return j;
}

inline nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("'" + path + "' is not valid JSON: " + e.what());
    }
}

inline AppConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

inline NetworkWeights load_weights(const std::string& path) { return weights_from_json(read_json_file(path)); }

inline void save_weights(const std::string& path, const NetworkWeights& net) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    out << weights_to_json(net).dump(2) << '\n';
    if (!out) throw ConfigError("write to '" + path + "' failed");
}

}  // namespace handoff
