#pragma once

#include <stdexcept>
#include <string>

namespace vperc {

/// Invalid user-supplied parameter (bad probability, empty window, ...).
struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Fewer than 3 points, or all points collinear; caller retries with a fresh environment.
struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A region query reached outside the window's safe zone.
struct SafeZoneError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An exact enumeration was asked for more cells than k_max allows.
struct CapacityError : std::runtime_error {
    CapacityError(const std::string& msg, int count) : std::runtime_error(msg), cell_count(count) {}
    int cell_count = 0;
};

/// A per-scale estimate had zero successes; carries the offending scale.
struct InsufficientSamplesError : std::runtime_error {
    InsufficientSamplesError(const std::string& msg, double scale_)
        : std::runtime_error(msg), scale(scale_) {}
    double scale = 0;
};

/// Grid search exhausted without meeting the threshold.
struct NotFoundError : std::runtime_error {
    NotFoundError(const std::string& msg, double last_value, double last_std_error)
        : std::runtime_error(msg), last_estimate(last_value), last_estimate_se(last_std_error) {}
    double last_estimate = 0;
    double last_estimate_se = 0;
};

/// Internal control flow: a safe-zone cell carried a window-boundary flag, so the
/// replicate is discarded and counted by the estimator that owns it.
struct ReplicateDiscard : std::runtime_error {
    ReplicateDiscard() : std::runtime_error("replicate discarded: boundary cell in safe zone") {}
};

}  // namespace vperc
