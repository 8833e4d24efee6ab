#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "handoff/cli.hpp"

namespace {

using handoff::cli::CommonOptions;

void add_common(CLI::App* cmd, CommonOptions& opts) {
    cmd->add_option("--config", opts.config_path, "Scenario JSON config");
    cmd->add_option("--weights", opts.weights_path, "Network weights JSON");
    cmd->add_option("--seed", opts.seed, "Seed override (training seeds or Monte Carlo master seed)");
    cmd->add_option("--out", opts.out_path, "Output path");
    cmd->add_flag("--dump-config", opts.dump_config, "Print the effective merged config as JSON and exit");
}

void add_scenario_overrides(CLI::App* cmd, handoff::cli::SimulateOptions& sim) {
    cmd->add_option("--runs", sim.n_runs, "Monte Carlo run count");
    cmd->add_option("--ti-s", sim.ti_serving, "Serving traffic intensity (Erlang/channel)");
    cmd->add_option("--ti-t", sim.ti_target, "Target traffic intensity (Erlang/channel)");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Neural-network handoff decision toolkit"};
    app.require_subcommand(1);

    CommonOptions train_opts, verify_opts, decide_opts, sim_opts, sweep_opts;

    auto* train = app.add_subcommand("train", "Train the network on the decision table and save weights");
    add_common(train, train_opts);
    std::optional<int> max_epochs;
    train->add_option("--max-epochs", max_epochs, "Epoch limit");

    auto* verify = app.add_subcommand("verify", "Check a weights file against all 36 table rows");
    add_common(verify, verify_opts);

    auto* decide = app.add_subcommand("decide", "One-shot gated decision");
    add_common(decide, decide_opts);
    handoff::cli::DecideInputs decide_in;
    decide->add_option("--rss-s", decide_in.rss_serving_dbm, "Serving RSS (dBm)")->required();
    decide->add_option("--rss-t", decide_in.rss_target_dbm, "Target RSS (dBm)")->required();
    decide->add_option("--ti-s", decide_in.ti_serving, "Serving TI (Erlang/channel)")->required();
    decide->add_option("--ti-t", decide_in.ti_target, "Target TI (Erlang/channel)")->required();

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo trajectories; --out gets the per-run summary CSV");
    add_common(simulate, sim_opts);
    handoff::cli::SimulateOptions sim;
    add_scenario_overrides(simulate, sim);
    simulate->add_option("--trace", sim.trace_path, "Decision trace CSV of the first run");
    simulate->add_option("--rss-trace", sim.rss_trace_path, "Raw RSS traces CSV of the first run");
    simulate->add_option("--est-trace", sim.est_trace_path, "BS1 raw vs smoothed RSS CSV of the first run");

    auto* sweep = app.add_subcommand("sweep", "Hysteresis x threshold sweep; writes CSV to --out or stdout");
    add_common(sweep, sweep_opts);
    handoff::cli::SimulateOptions sweep_sim;
    add_scenario_overrides(sweep, sweep_sim);
    std::string hysteresis = "0,2,4,6,8,10";
    std::string thresholds = "-80,-85,-90";
    sweep->add_option("--hysteresis", hysteresis, "Hysteresis margins in dB, comma separated")->capture_default_str();
    sweep->add_option("--threshold", thresholds, "Thresholds in dBm, comma separated")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? handoff::cli::kExitOk : handoff::cli::kExitUsage;
    }

    auto& out = std::cout;
    auto& err = std::cerr;
    if (*train) return handoff::cli::cmd_train(train_opts, max_epochs, out, err);
    if (*verify) return handoff::cli::cmd_verify(verify_opts, out, err);
    if (*decide) return handoff::cli::cmd_decide(decide_opts, decide_in, out, err);
    if (*simulate) return handoff::cli::cmd_simulate(sim_opts, sim, out, err);
    if (*sweep) {
        std::vector<double> hyst_list, thr_list;
        try {
            hyst_list = handoff::cli::parse_number_list(hysteresis, "--hysteresis");
            thr_list = handoff::cli::parse_number_list(thresholds, "--threshold");
        } catch (const handoff::ConfigError& e) {
            err << "error: " << e.what() << '\n';
            return handoff::cli::kExitUsage;
        }
        return handoff::cli::cmd_sweep(sweep_opts, sweep_sim, hyst_list, thr_list, out, err);
    }
    return handoff::cli::kExitUsage;
}
