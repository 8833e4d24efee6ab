#pragma once

#include <stdexcept>
#include <string>

namespace handoff {

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters, malformed config or weights files.
class ConfigError : public Error {
public:
    using Error::Error;
};

class NotEnoughSamples : public Error {
public:
    using Error::Error;
};

class DegenerateRegressor : public Error {
public:
    using Error::Error;
};

class TrainingDidNotConverge : public Error {
public:
    TrainingDidNotConverge(int epochs, double final_max_error)
        : Error("training did not converge after " + std::to_string(epochs) +
                " epochs (max |y - t| = " + std::to_string(final_max_error) + ")"),
          epochs_(epochs),
          final_max_error_(final_max_error) {}

    int epochs() const noexcept { return epochs_; }
    double final_max_error() const noexcept { return final_max_error_; }

private:
    int epochs_;
    double final_max_error_;
};

}  // namespace handoff
