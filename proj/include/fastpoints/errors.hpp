#pragma once

#include <stdexcept>
#include <string>

namespace fastpoints {

// Error taxonomy shared across the library.  The CLI maps these onto exit
// codes: usage_error -> 2, config_error/resolution_error -> 3,
// numeric_error (and subclasses) -> 4.

struct config_error : std::runtime_error {
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A request that cannot be honored at the available grid resolution
// (path too coarse, atom off-grid by more than the tolerance, ...).
struct resolution_error : std::runtime_error {
    explicit resolution_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct usage_error : std::runtime_error {
    explicit usage_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct numeric_error : std::runtime_error {
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Regression cannot be formed (too few levels with positive counts).
struct fit_error : numeric_error {
    explicit fit_error(const std::string& msg) : numeric_error(msg) {}
};

// Discrete measure violates its invariants (coincident atoms, bad weights).
struct degenerate_measure_error : config_error {
    explicit degenerate_measure_error(const std::string& msg) : config_error(msg) {}
};

}  // namespace fastpoints
