#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "fastpoints/drift.hpp"

namespace fastpoints {

enum class PathKind { BM, FBM, DRIFTED };

// A sample path on the dyadic grid of [0, 2] at resolution 2^-level:
// values[k] is the path at t = k * 2^-level, k = 0 .. 2*2^level.
// The horizon is fixed at 2 so every window-based statistic on [0, 1]
// can look ahead without truncation.
struct SamplePath {
    PathKind kind = PathKind::BM;
    double hurst = 0.5;  // meaningful iff kind == FBM
    int level = 0;
    std::uint64_t seed = 0;
    std::vector<double> values;
    std::optional<DriftSpec> drift;  // present iff kind == DRIFTED

    static constexpr double horizon = 2.0;

    double dt() const { return 1.0 / static_cast<double>(std::int64_t{1} << level); }

    std::size_t size() const { return values.size(); }

    // Index of grid time k * 2^-m on this path's finer grid (m <= level).
    std::size_t index_at(int m, std::size_t k) const {
        return k << (level - m);
    }
};

}  // namespace fastpoints
