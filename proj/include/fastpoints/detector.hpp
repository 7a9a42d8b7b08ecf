#pragma once

#include <cstdint>
#include <string>

#include "fastpoints/bitset.hpp"
#include "fastpoints/path.hpp"

namespace fastpoints {

enum class FlagKind { FAST_L, FAST_SUP, ZERO_NEAR, INTERSECT };

// Parameter record carried by every flag set; together with the kind and
// level it fully determines the predicate that produced the flags.
struct FlagParams {
    double a = 0.0;
    double epsilon = 0.0;
    double c = 0.0;
    double theta = 1.0;       // optional slack multiplier on thresholds
    std::string window;       // human-readable window descriptor
};

// One bit per dyadic interval [k*2^-m, (k+1)*2^-m] at a fixed level m.
struct IntervalFlags {
    int level = 0;
    FlagKind flag_kind = FlagKind::FAST_L;
    FlagParams params;
    Bitset flags;  // length exactly 2^level
};

// Threshold a*sqrt(2 h ln(1/h)) separating ordinary from fast increments.
double fast_threshold(double a, double h);

// Flags interval k when the forward increment over the window [t_k, t_k + m*2^-m]
// strictly exceeds a(1+epsilon)*sqrt(m * 2^{-m+1} * ln(2^m/m)).
// Strict > is used on every fast detector: the boundary event has probability
// zero for Brownian inputs, and one uniform convention keeps counts comparable.
IntervalFlags l_flags(const SamplePath& path, int m, double a, double epsilon);

// Flags interval k at level j when the grid maximum of |V(s) - V(t_k)| over
// s in [t_k, t_k + 2^-j] strictly exceeds theta * b * sqrt(2 * 2^-j * j ln 2).
// Requires path.level >= j + 3 (at least eight grid points per window).
IntervalFlags sup_flags(const SamplePath& path, int j, double b, double theta = 1.0);

// Flags interval k when the path value satisfies |V(k*2^-m)| <= theta * c *
// sqrt(m * 2^-m * ln 2), testing the left endpoint only.  whole_interval=true
// switches to the minimum of |V| over the interval's grid points, a
// sensitivity-study mode.
IntervalFlags zero_near_flags(const SamplePath& path, int m, double c,
                              double theta = 1.0, bool whole_interval = false);

// Default near-zero constant max{2*c0, 2*sqrt(2)}, with c0 the estimated
// exponent-1/2 Hoelder coefficient of the path's drift (0 for driftless paths).
double near_zero_c_default(const SamplePath& path);

// Convenience overload using near_zero_c_default(path).
IntervalFlags zero_near_flags(const SamplePath& path, int m);

// Bitwise conjunction of two flag sets at the same level.
IntervalFlags intersect_flags(const IntervalFlags& x, const IntervalFlags& y);

// Number of flagged intervals.
std::int64_t count(const IntervalFlags& flags);

// Exact expectation of count(l_flags) for a pure Brownian path:
//   2^m * 2 * Q(a(1+epsilon) * sqrt(2 ln(2^m/m))).
double expected_l_count(int m, double a, double epsilon);

// Threshold-parameter shift delta_m = c0 / sqrt(2 ln(2^m/m)) that converts an
// exponent-1/2 Hoelder drift bound into the two-sided flag inclusion
//   flags_B(a + delta) subset flags_X(a) subset flags_B(a - delta)
// for X = B - f, deterministically on every path.
double sandwich_shift(double c0, int m);

}  // namespace fastpoints
