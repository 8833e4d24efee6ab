#pragma once

// 5-20-1 feedforward network: tanh hidden layer, linear output, no output
// bias. The fifth input is the constant bias +1. Trained by online
// backpropagation on L = 0.5 (y - t)^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "handoff/error.hpp"

namespace handoff {

inline constexpr std::size_t kInputs = 5;
inline constexpr std::size_t kHidden = 20;

using InputVector = std::array<double, kInputs>;
using HiddenVector = std::array<double, kHidden>;

/// Also used as the shape of a gradient.
struct NetworkWeights {
    std::array<std::array<double, kInputs>, kHidden> hidden{};  ///< [unit][input]
    HiddenVector output{};

    bool all_finite() const {
        for (const auto& row : hidden)
            for (double w : row)
                if (!std::isfinite(w)) return false;
        return std::all_of(output.begin(), output.end(), [](double w) { return std::isfinite(w); });
    }

    friend bool operator==(const NetworkWeights&, const NetworkWeights&) = default;
};

struct TrainingSample {
    InputVector x{};
    double target = -1.0;
};

struct TrainConfig {
    double learning_rate = 0.05;
    int max_epochs = 10000;
    double stop_tolerance = 0.2;
    double init_range = 0.5;
    std::uint64_t init_seed = 1;
    std::uint64_t shuffle_seed = 1;

    void validate() const {
        if (!(learning_rate > 0.0)) throw ConfigError("training.learning_rate must be > 0");
        if (max_epochs < 0) throw ConfigError("training.max_epochs must be >= 0");
        if (!(stop_tolerance > 0.0 && stop_tolerance < 2.0))
            throw ConfigError("training.stop_tolerance must lie in (0, 2)");
        if (!(init_range >= 0.0)) throw ConfigError("training.init_range must be >= 0");
    }

    friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct ForwardResult {
    double y = 0.0;
    HiddenVector hidden{};
};

struct TrainResult {
    NetworkWeights weights;
    int epochs_used = 0;
    double final_max_error = 0.0;
    std::vector<double> epoch_mean_loss;  ///< after each epoch
};

/// Uniform weights on [-init_range, +init_range].
inline NetworkWeights init_weights(std::uint64_t seed, double init_range = 0.5) {
    NetworkWeights net;
    if (init_range == 0.0) return net;
    std::mt19937_64 engine(seed);
    std::uniform_real_distribution<double> dist(-init_range, init_range);
    for (auto& row : net.hidden)
        for (double& w : row) w = dist(engine);
    for (double& w : net.output) w = dist(engine);
    return net;
}

inline ForwardResult forward(const NetworkWeights& net, const InputVector& x) {
    for (double v : x)
        if (!std::isfinite(v)) throw Error("forward: non-finite input");
    ForwardResult r;
    for (std::size_t j = 0; j < kHidden; ++j) {
        double a = 0.0;
        for (std::size_t i = 0; i < kInputs; ++i) a += net.hidden[j][i] * x[i];
        r.hidden[j] = std::tanh(a);
        r.y += net.output[j] * r.hidden[j];
    }
    return r;
}

inline double sample_loss(const NetworkWeights& net, const TrainingSample& s) {
    const double e = forward(net, s.x).y - s.target;
    return 0.5 * e * e;
}

/// Analytic gradient of 0.5 (y - t)^2. The tanh derivative is taken from the
/// hidden activation itself: 1 - h^2.
inline NetworkWeights gradient(const NetworkWeights& net, const TrainingSample& s) {
    const auto fw = forward(net, s.x);
    const double err = fw.y - s.target;
    NetworkWeights g;
    for (std::size_t j = 0; j < kHidden; ++j) {
        g.output[j] = err * fw.hidden[j];
        const double delta = err * net.output[j] * (1.0 - fw.hidden[j] * fw.hidden[j]);
        for (std::size_t i = 0; i < kInputs; ++i) g.hidden[j][i] = delta * s.x[i];
    }
    return g;
}

inline double max_abs_error(const NetworkWeights& net, std::span<const TrainingSample> data) {
    double m = 0.0;
    for (const auto& s : data) m = std::max(m, std::abs(forward(net, s.x).y - s.target));
    return m;
}

/// Online gradient descent, reshuffled every epoch. Stops once every sample
/// is within stop_tolerance of its target.
inline TrainResult train(std::span<const TrainingSample> data, const TrainConfig& config) {
    config.validate();
    if (data.empty()) throw Error("train: empty dataset");
    for (const auto& s : data) {
        if (s.x[kInputs - 1] != 1.0) throw Error("train: bias input x5 must be +1");
        if (s.target != 1.0 && s.target != -1.0) throw Error("train: targets must be +1 or -1");
    }

    TrainResult result;
    result.weights = init_weights(config.init_seed, config.init_range);
    auto& net = result.weights;

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 shuffler(config.shuffle_seed);

    result.final_max_error = max_abs_error(net, data);
    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), shuffler);
        for (std::size_t k : order) {
            const auto g = gradient(net, data[k]);
            for (std::size_t j = 0; j < kHidden; ++j) {
                net.output[j] -= config.learning_rate * g.output[j];
                for (std::size_t i = 0; i < kInputs; ++i)
                    net.hidden[j][i] -= config.learning_rate * g.hidden[j][i];
            }
        }

        double loss = 0.0;
        for (const auto& s : data) loss += sample_loss(net, s);
        result.epoch_mean_loss.push_back(loss / static_cast<double>(data.size()));
        result.final_max_error = max_abs_error(net, data);
        result.epochs_used = epoch;
        if (result.final_max_error < config.stop_tolerance) return result;
    }
    throw TrainingDidNotConverge(result.epochs_used, result.final_max_error);
}

/// +1 for handoff, -1 otherwise. An exact zero output counts as no handoff.
inline int classify(double y) { return y > 0.0 ? +1 : -1; }

inline int classify(const NetworkWeights& net, const InputVector& x) {
    return classify(forward(net, x).y);
}

// Weights file: {"hidden": [[5 reals] x 20], "output": [20 reals], "activation": "tanh"}

inline nlohmann::json weights_to_json(const NetworkWeights& net) {
    nlohmann::json j;
    j["hidden"] = net.hidden;
    j["output"] = net.output;
    j["activation"] = "tanh";
    return j;
}

inline NetworkWeights weights_from_json(const nlohmann::json& j) {
    auto fail = [](const std::string& what) { throw ConfigError("weights file: " + what); };
    if (!j.is_object()) fail("expected a JSON object");
    for (const auto& [key, _] : j.items())
        if (key != "hidden" && key != "output" && key != "activation") fail("unknown key '" + key + "'");
    if (j.contains("activation") && j["activation"] != "tanh") fail("activation must be \"tanh\"");
    if (!j.contains("hidden") || !j.contains("output")) fail("missing 'hidden' or 'output'");

    const auto& h = j["hidden"];
    const auto& o = j["output"];
    if (!h.is_array() || h.size() != kHidden) fail("'hidden' must have 20 rows");
    if (!o.is_array() || o.size() != kHidden) fail("'output' must have 20 entries");

    NetworkWeights net;
    for (std::size_t r = 0; r < kHidden; ++r) {
        if (!h[r].is_array() || h[r].size() != kInputs) fail("each 'hidden' row must have 5 entries");
        for (std::size_t c = 0; c < kInputs; ++c) {
            if (!h[r][c].is_number()) fail("non-numeric weight");
            net.hidden[r][c] = h[r][c].get<double>();
        }
        if (!o[r].is_number()) fail("non-numeric weight");
        net.output[r] = o[r].get<double>();
    }
    if (!net.all_finite()) fail("non-finite weight");
    return net;
}

}  // namespace handoff
