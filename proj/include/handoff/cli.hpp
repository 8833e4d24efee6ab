#pragma once

// Command implementations behind the handoff_cli front end. Each command
// writes human-readable output to `out`, diagnostics to `err`, and returns
// the process exit code.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "handoff/config.hpp"
#include "handoff/csv.hpp"
#include "handoff/decision.hpp"
#include "handoff/error.hpp"
#include "handoff/neuralnet.hpp"
#include "handoff/simulator.hpp"

namespace handoff::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

inline constexpr const char* kSeedEnvVar = "HANDOFF_SEED";

struct CommonOptions {
    std::optional<std::string> config_path;
    std::optional<std::string> weights_path;
    std::optional<std::string> out_path;
    std::optional<std::uint64_t> seed;
    bool dump_config = false;
};

/// Defaults, then the config file, then flags. The seed environment
/// variable only applies to seeds that neither the flag nor the file set.
inline AppConfig resolve_config(const CommonOptions& opts, const char* env_seed = std::getenv(kSeedEnvVar)) {
    nlohmann::json root = nlohmann::json::object();
    if (opts.config_path) root = read_json_file(*opts.config_path);
    AppConfig cfg = config_from_json(root);

    auto file_sets = [&](const char* section, const char* key) {
        return root.contains(section) && root[section].contains(key);
    };

    std::optional<std::uint64_t> env;
    if (env_seed && *env_seed) {
        try {
            std::size_t used = 0;
            env = std::stoull(env_seed, &used);
            if (env_seed[used] != '\0') throw std::invalid_argument("trailing");
        } catch (const std::exception&) {
            throw ConfigError(std::string(kSeedEnvVar) + " must be an unsigned integer");
        }
    }

    auto apply = [&](const char* section, const char* key, std::uint64_t& field) {
        if (opts.seed)
            field = *opts.seed;
        else if (env && !file_sets(section, key))
            field = *env;
    };
    apply("scenario", "master_seed", cfg.scenario.master_seed);
    apply("training", "init_seed", cfg.training.init_seed);
    apply("training", "shuffle_seed", cfg.training.shuffle_seed);
    return cfg;
}

namespace detail {

inline void dump(std::ostream& out, const AppConfig& cfg) { out << config_to_json(cfg).dump(2) << '\n'; }

inline NetworkWeights require_weights(const CommonOptions& opts) {
    if (!opts.weights_path) throw ConfigError("--weights is required");
    return load_weights(*opts.weights_path);
}

template <class Body>
int guarded(std::ostream& err, Body&& body) {
    try {
        return body();
    } catch (const TrainingDidNotConverge& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomain;
    }
}

inline std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path + "'");
    return f;
}

}  // namespace detail

inline int cmd_train(const CommonOptions& opts, std::optional<int> max_epochs, std::ostream& out,
                     std::ostream& err) {
    return detail::guarded(err, [&] {
        AppConfig cfg = resolve_config(opts);
        if (max_epochs) cfg.training.max_epochs = *max_epochs;
        cfg.training.validate();
        if (opts.dump_config) {
            detail::dump(out, cfg);
            return kExitOk;
        }
        const auto path = opts.out_path ? opts.out_path : opts.weights_path;
        if (!path) throw ConfigError("train: --out <weights.json> is required");

        const auto data = canonical_dataset();
        try {
            const auto result = train(data, cfg.training);
            save_weights(*path, result.weights);
            out << "converged: epochs_used=" << result.epochs_used
                << " final_max_error=" << csv::num(result.final_max_error) << '\n'
                << "weights written to " << *path << '\n';
        } catch (const TrainingDidNotConverge& e) {
            out << "not converged: epochs_used=" << e.epochs()
                << " final_max_error=" << csv::num(e.final_max_error()) << '\n';
            throw;
        }
        return kExitOk;
    });
}

struct VerifyRow {
    LevelTuple levels;
    HandoffDecision table;
    int network = -1;
    double y = 0.0;
};

inline std::vector<VerifyRow> verify_rows(const NetworkWeights& net) {
    std::vector<VerifyRow> rows;
    for (const auto& l : all_level_tuples()) {
        const double y = forward(net, encode(l)).y;
        rows.push_back({l, table_oracle(l), classify(y), y});
    }
    return rows;
}

inline int count_agreements(const std::vector<VerifyRow>& rows) {
    int n = 0;
    for (const auto& r : rows) n += (r.network > 0) == r.table.is_handoff();
    return n;
}

inline int cmd_verify(const CommonOptions& opts, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        if (opts.dump_config) {
            detail::dump(out, resolve_config(opts));
            return kExitOk;
        }
        const auto net = detail::require_weights(opts);
        const auto rows = verify_rows(net);
        out << "rss_s rss_t ti_s ti_t  table      network    y\n";
        for (const auto& r : rows) {
            out << "  " << to_string(r.levels.rss_serving) << "     " << to_string(r.levels.rss_target) << "     "
                << to_string(r.levels.ti_serving) << "    " << to_string(r.levels.ti_target) << "    "
                << std::left << std::setw(10) << to_string(r.table.outcome) << ' ' << std::setw(10)
                << (r.network > 0 ? "Handoff" : "NoHandoff") << ' ' << std::right << csv::num(r.y)
                << ((r.network > 0) == r.table.is_handoff() ? "" : "  MISMATCH") << '\n';
        }
        const int agree = count_agreements(rows);
        out << agree << "/" << rows.size() << " agree with the decision table\n";
        return agree == static_cast<int>(rows.size()) ? kExitOk : kExitDomain;
    });
}

struct DecideInputs {
    double rss_serving_dbm = 0.0;
    double rss_target_dbm = 0.0;
    double ti_serving = 0.0;
    double ti_target = 0.0;
};

inline nlohmann::json decision_json(const DecisionDetail& d) {
    return {{"decision", to_string(d.decision.outcome)},
            {"provenance", to_string(d.decision.provenance)},
            {"gate_passed", d.gate_passed},
            {"levels",
             {{"rss_serving", to_string(d.levels.rss_serving)},
              {"rss_target", to_string(d.levels.rss_target)},
              {"ti_serving", to_string(d.levels.ti_serving)},
              {"ti_target", to_string(d.levels.ti_target)}}},
            {"network_output", d.network_output}};
}

inline int cmd_decide(const CommonOptions& opts, const DecideInputs& in, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        const AppConfig cfg = resolve_config(opts);
        if (opts.dump_config) {
            detail::dump(out, cfg);
            return kExitOk;
        }
        const auto net = detail::require_weights(opts);
        TrafficIntensity ti_s, ti_t;
        try {
            ti_s = TrafficIntensity(in.ti_serving);
            ti_t = TrafficIntensity(in.ti_target);
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        if (!std::isfinite(in.rss_serving_dbm) || !std::isfinite(in.rss_target_dbm))
            throw ConfigError("--rss-s and --rss-t must be finite");
        const auto d = explain(in.rss_serving_dbm, in.rss_target_dbm, ti_s, ti_t, net, cfg.scenario.decision);
        out << decision_json(d).dump(2) << '\n';
        return kExitOk;
    });
}

struct SimulateOptions {
    std::optional<std::string> trace_path;      ///< decision trace of run 0
    std::optional<std::string> rss_trace_path;  ///< raw signal traces of run 0
    std::optional<std::string> est_trace_path;  ///< BS1 link smoothing of run 0
    std::optional<int> n_runs;
    std::optional<double> ti_serving;
    std::optional<double> ti_target;
};

inline void apply_overrides(AppConfig& cfg, const SimulateOptions& s) {
    if (s.n_runs) cfg.scenario.n_runs = *s.n_runs;
    try {
        if (s.ti_serving) cfg.scenario.ti_serving = TrafficIntensity(*s.ti_serving);
        if (s.ti_target) cfg.scenario.ti_target = TrafficIntensity(*s.ti_target);
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    cfg.scenario.validate();
}

inline int cmd_simulate(const CommonOptions& opts, const SimulateOptions& sim, std::ostream& out,
                        std::ostream& err) {
    return detail::guarded(err, [&] {
        AppConfig cfg = resolve_config(opts);
        apply_overrides(cfg, sim);
        if (opts.dump_config) {
            detail::dump(out, cfg);
            return kExitOk;
        }
        const auto net = detail::require_weights(opts);
        const auto& sc = cfg.scenario;
        const auto mc = run_monte_carlo(sc, net);

        if (opts.out_path) {
            auto f = detail::open_out(*opts.out_path);
            csv::write_run_summary(f, mc);
        }
        if (sim.trace_path) {
            auto f = detail::open_out(*sim.trace_path);
            csv::write_decision_trace(f, mc.runs.front());
        }
        if (sim.rss_trace_path || sim.est_trace_path) {
            const auto pos = trajectory(sc);
            const auto bs1 = generate_trace(pos, 0.0, sc.propagation, link_stream(sc.master_seed, 0, 0));
            if (sim.rss_trace_path) {
                const auto bs2 = generate_trace(pos, sc.bs_separation_m, sc.propagation,
                                                link_stream(sc.master_seed, 0, 1));
                auto f = detail::open_out(*sim.rss_trace_path);
                csv::write_signal_traces(f, bs1, bs2);
            }
            if (sim.est_trace_path) {
                auto f = detail::open_out(*sim.est_trace_path);
                csv::write_estimated_trace(f, estimate_stream(bs1, sc.estimator));
            }
        }

        const auto ti_s = quantize_ti(sc.ti_serving, sc.decision);
        const auto ti_t = quantize_ti(sc.ti_target, sc.decision);
        out << "ti_pair=" << to_string(ti_s) << "/" << to_string(ti_t) << " runs=" << sc.n_runs
            << " avg_handoffs=" << csv::num(mc.avg_handoff_count)
            << " avg_first_ho_m=" << (mc.avg_first_handoff_distance_m ? csv::num(*mc.avg_first_handoff_distance_m)
                                                                       : std::string("none"))
            << '\n';
        return kExitOk;
    });
}

// Parses a comma-separated list of finite numbers such as "0,2.5,-80".
// An empty list or a malformed element is a usage error.
inline std::vector<double> parse_number_list(const std::string& text, const std::string& what) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size() && !text.empty()) {
        const std::size_t comma = std::min(text.find(',', start), text.size());
        const std::string item = text.substr(start, comma - start);
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
        if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size() || !std::isfinite(v))
            throw ConfigError(what + ": invalid number '" + item + "'");
        values.push_back(v);
        start = comma + 1;
    }
    if (values.empty()) throw ConfigError(what + ": list must be non-empty");
    return values;
}

inline int cmd_sweep(const CommonOptions& opts, const SimulateOptions& sim, const std::vector<double>& hysteresis_db,
                     const std::vector<double>& threshold_dbm, std::ostream& out, std::ostream& err) {
    return detail::guarded(err, [&] {
        AppConfig cfg = resolve_config(opts);
        apply_overrides(cfg, sim);
        if (opts.dump_config) {
            detail::dump(out, cfg);
            return kExitOk;
        }
        if (hysteresis_db.empty() || threshold_dbm.empty())
            throw ConfigError("sweep: --hysteresis and --threshold lists must be non-empty");
        const auto net = detail::require_weights(opts);
        const auto rows = sweep(cfg.scenario, net, hysteresis_db, threshold_dbm);
        if (opts.out_path) {
            auto f = detail::open_out(*opts.out_path);
            csv::write_sweep(f, rows);
        } else {
            csv::write_sweep(out, rows);
        }
        return kExitOk;
    });
}

}  // namespace handoff::cli
