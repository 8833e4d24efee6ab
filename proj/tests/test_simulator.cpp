#include <cmath>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "handoff/csv.hpp"
#include "handoff/simulator.hpp"
#include "test_support.hpp"

using namespace handoff;
using handoff::testing::deterministic_scenario;
using handoff::testing::table_network;
using handoff::testing::ti_value;

namespace {

// Brute-force oracle: first sampled position where the noiseless serving RSS
// is below threshold and the target leads by the hysteresis margin.
double first_gate_position(const ScenarioConfig& sc) {
    const auto& p = sc.propagation;
    const double D = sc.bs_separation_m;
    for (double x = 1.0; x <= D - 1.0; x += sc.sample_step_m) {
        const double s = p.p_ref_dbm - 10 * p.gamma * std::log10(x);
        const double t = p.p_ref_dbm - 10 * p.gamma * std::log10(D - x);
        if (s < sc.decision.threshold_dbm && t - s >= sc.decision.hysteresis_db) return x;
    }
    return NAN;
}

std::string trace_csv(const RunResult& r) {
    std::ostringstream os;
    csv::write_decision_trace(os, r);
    return os.str();
}

}  // namespace

TEST(GroupOf, FigureGrouping) {
    using enum TiLevel;
    EXPECT_EQ(group_of(Low, Medium), TiGroup::Group1);
    EXPECT_EQ(group_of(Low, Low), TiGroup::Group1);
    EXPECT_EQ(group_of(Medium, Medium), TiGroup::Group1);
    EXPECT_EQ(group_of(High, High), TiGroup::Group1);
    EXPECT_EQ(group_of(Medium, Low), TiGroup::Group2);
    EXPECT_EQ(group_of(High, Low), TiGroup::Group2);
    EXPECT_EQ(group_of(High, Medium), TiGroup::Group2);
    EXPECT_EQ(group_of(Medium, High), TiGroup::Group3);
    EXPECT_EQ(group_of(Low, High), TiGroup::Group3);
}

TEST(Trajectory, OneMetreInsideEachEnd) {
    ScenarioConfig sc;
    const auto pos = trajectory(sc);
    ASSERT_EQ(pos.size(), 999u);
    EXPECT_EQ(pos.front(), 1.0);
    EXPECT_EQ(pos.back(), 999.0);
}

TEST(RunOnce, DeterministicHandoffPositionClosedForm) {
    const auto sc = deterministic_scenario();
    const double h = sc.decision.hysteresis_db, g = sc.propagation.gamma, D = sc.bs_separation_m;
    const double closed = D / (1.0 + std::pow(10.0, -h / (10.0 * g)));
    EXPECT_NEAR(closed, 594.78, 0.01);
    EXPECT_EQ(first_gate_position(sc), 595.0);

    const auto r = run_once(sc, table_network(), 0);
    ASSERT_TRUE(r.first_handoff_distance_m.has_value());
    EXPECT_NEAR(*r.first_handoff_distance_m, closed, sc.sample_step_m);
    EXPECT_EQ(*r.first_handoff_distance_m, first_gate_position(sc));
    EXPECT_EQ(r.handoff_count, 1);
    // target there is above threshold -> High
    EXPECT_GT(mean_rss(D - closed, sc.propagation), -85.0);
}

TEST(RunOnce, GroupThreeNeverHandsOffDeterministically) {
    const auto r = run_once(deterministic_scenario(0.5, 0.9), table_network(), 0);
    EXPECT_EQ(r.handoff_count, 0);
    EXPECT_FALSE(r.first_handoff_distance_m.has_value());
}

TEST(RunOnce, DeterministicForSameSeed) {
    ScenarioConfig sc;
    sc.master_seed = 99;
    EXPECT_EQ(run_once(sc, table_network(), 3), run_once(sc, table_network(), 3));
    EXPECT_NE(run_once(sc, table_network(), 3), run_once(sc, table_network(), 4));
}

TEST(RunOnce, ResultInvariants) {
    ScenarioConfig sc;
    sc.decision.hysteresis_db = 0.0;
    for (std::uint64_t run = 0; run < 30; ++run) {
        const auto r = run_once(sc, table_network(), run);
        int handoffs = 0;
        for (std::size_t k = 0; k < r.decision_trace.size(); ++k) {
            const auto& e = r.decision_trace[k];
            handoffs += e.decision.is_handoff();
            if (e.decision.provenance == Provenance::GateBlocked) {
                EXPECT_FALSE(e.decision.is_handoff());
            }
            if (k + 1 < r.decision_trace.size()) {
                const int next = r.decision_trace[k + 1].serving_bs;
                EXPECT_EQ(next, e.decision.is_handoff() ? 1 - e.serving_bs : e.serving_bs);
            }
        }
        EXPECT_EQ(handoffs, r.handoff_count);
        EXPECT_EQ(r.first_handoff_distance_m.has_value(), r.handoff_count > 0);
        EXPECT_LE(r.fluctuation_count, static_cast<int>(r.decision_trace.size()) - 1);
    }
}

TEST(RunOnce, RoleSwapUsesNewServingStation) {
    ScenarioConfig sc;
    sc.decision.hysteresis_db = 0.0;
    sc.master_seed = 5;
    sc.use_estimated_rss = false;
    const auto positions = trajectory(sc);
    bool saw_swap = false;
    for (std::uint64_t run = 0; run < 20 && !saw_swap; ++run) {
        const auto r = run_once(sc, table_network(), run);
        const auto bs1 = generate_trace(positions, 0.0, sc.propagation, link_stream(sc.master_seed, run, 0));
        const auto bs2 =
            generate_trace(positions, sc.bs_separation_m, sc.propagation, link_stream(sc.master_seed, run, 1));
        for (std::size_t k = 0; k < r.decision_trace.size(); ++k) {
            const auto& e = r.decision_trace[k];
            const auto& serving = e.serving_bs == 0 ? bs1 : bs2;
            const auto& target = e.serving_bs == 0 ? bs2 : bs1;
            EXPECT_EQ(e.rss_serving_dbm, serving[k].rss_dbm);
            EXPECT_EQ(e.rss_target_dbm, target[k].rss_dbm);
            saw_swap |= e.serving_bs == 1;
        }
    }
    EXPECT_TRUE(saw_swap);
}

TEST(RunOnce, WithinGroupTracesAreIdentical) {
    ScenarioConfig sc;
    sc.master_seed = 2024;
    sc.decision.hysteresis_db = 2.0;
    for (std::uint64_t run = 0; run < 10; ++run) {
        std::map<TiGroup, std::string> reference;
        for (auto s : {TiLevel::Low, TiLevel::Medium, TiLevel::High})
            for (auto t : {TiLevel::Low, TiLevel::Medium, TiLevel::High}) {
                sc.ti_serving = TrafficIntensity(ti_value(s));
                sc.ti_target = TrafficIntensity(ti_value(t));
                const auto csv = trace_csv(run_once(sc, table_network(), run));
                const auto [it, inserted] = reference.emplace(group_of(s, t), csv);
                if (!inserted) {
                    EXPECT_EQ(it->second, csv) << to_string(s) << "/" << to_string(t);
                }
            }
    }
}

TEST(MonteCarlo, SingleRunAverages) {
    ScenarioConfig sc;
    sc.n_runs = 1;
    sc.decision.hysteresis_db = 1.0;
    const auto mc = run_monte_carlo(sc, table_network());
    const auto r = run_once(sc, table_network(), 0);
    EXPECT_EQ(mc.avg_handoff_count, r.handoff_count);
    EXPECT_EQ(mc.avg_first_handoff_distance_m, r.first_handoff_distance_m);
}

TEST(MonteCarlo, DeterministicChannelGivesIdenticalRuns) {
    auto sc = deterministic_scenario();
    sc.n_runs = 10;
    const auto mc = run_monte_carlo(sc, table_network());
    for (const auto& r : mc.runs) EXPECT_EQ(r, mc.runs.front());
    EXPECT_EQ(mc.avg_handoff_count, 1.0);
}

TEST(MonteCarlo, ThreadCountDoesNotChangeResults) {
    ScenarioConfig sc;
    sc.n_runs = 40;
    sc.decision.hysteresis_db = 1.0;
    sc.threads = 1;
    const auto serial = run_monte_carlo(sc, table_network());
    sc.threads = 4;
    const auto parallel = run_monte_carlo(sc, table_network());
    EXPECT_EQ(serial.avg_handoff_count, parallel.avg_handoff_count);
    EXPECT_EQ(serial.avg_first_handoff_distance_m, parallel.avg_first_handoff_distance_m);
    EXPECT_EQ(serial.runs, parallel.runs);
}

TEST(MonteCarlo, AverageDistanceOnlyOverRunsWithHandoff) {
    ScenarioConfig sc;
    sc.n_runs = 60;
    sc.decision.hysteresis_db = 8.0;
    const auto mc = run_monte_carlo(sc, table_network());
    double sum = 0.0;
    int n = 0;
    for (const auto& r : mc.runs)
        if (r.first_handoff_distance_m) {
            sum += *r.first_handoff_distance_m;
            ++n;
        }
    ASSERT_GT(n, 0);
    EXPECT_DOUBLE_EQ(*mc.avg_first_handoff_distance_m, sum / n);
}

TEST(MonteCarlo, GroupThreeZeroWithFading) {
    ScenarioConfig sc;
    sc.n_runs = 200;
    sc.ti_serving = TrafficIntensity(0.7);
    sc.ti_target = TrafficIntensity(0.9);
    for (auto mode : {GateMode::Full, GateMode::HysteresisOnly, GateMode::None}) {
        sc.decision.gate_mode = mode;
        EXPECT_EQ(run_monte_carlo(sc, table_network()).avg_handoff_count, 0.0);
    }
}

TEST(Sweep, SingleCellEqualsMonteCarlo) {
    ScenarioConfig sc;
    sc.n_runs = 20;
    const auto rows = sweep(sc, table_network(), {3.0}, {-88.0});
    ASSERT_EQ(rows.size(), 1u);
    sc.decision.hysteresis_db = 3.0;
    sc.decision.threshold_dbm = -88.0;
    const auto mc = run_monte_carlo(sc, table_network());
    EXPECT_EQ(rows[0].avg_handoff_count, mc.avg_handoff_count);
    EXPECT_EQ(rows[0].avg_first_handoff_distance_m, mc.avg_first_handoff_distance_m);
    EXPECT_EQ(rows[0].runs, 20);
}

TEST(Sweep, CartesianProductAndEmptyLists) {
    ScenarioConfig sc;
    sc.n_runs = 2;
    EXPECT_EQ(sweep(sc, table_network(), {0, 2, 4, 6, 8, 10}, {-80, -85, -90}).size(), 18u);
    EXPECT_THROW(sweep(sc, table_network(), {}, {-85}), ConfigError);
    EXPECT_THROW(sweep(sc, table_network(), {5}, {}), ConfigError);
}

TEST(Sweep, HysteresisMonotoneForGroupOne) {
    ScenarioConfig sc;
    sc.n_runs = 100;
    sc.master_seed = 11;
    const auto rows = sweep(sc, table_network(), {0, 2, 4, 6, 8, 10}, {-85});
    for (std::size_t i = 1; i < rows.size(); ++i)
        EXPECT_LE(rows[i].avg_handoff_count, rows[i - 1].avg_handoff_count) << "h=" << rows[i].hysteresis_db;
}

TEST(Sweep, GroupThreeCellsAreZero) {
    ScenarioConfig sc;
    sc.n_runs = 20;
    sc.ti_serving = TrafficIntensity(0.2);
    sc.ti_target = TrafficIntensity(0.95);
    for (const auto& row : sweep(sc, table_network(), {0, 5, 10}, {-80, -85, -90}))
        EXPECT_EQ(row.avg_handoff_count, 0.0);
}
