#pragma once

#include <cstdint>

#include "fastpoints/path.hpp"

namespace fastpoints {

// Standard Brownian motion on [0, 2]: cumulative sums of 2*2^level
// independent N(0, 2^-level) increments, B(0) = 0.  Increment i uses the
// counter-based normal gaussian(seed, i), so the path is a pure function
// of (seed, level).  1 <= level <= 24.
SamplePath sample_bm(std::uint64_t seed, int level);

// One dyadic refinement step: returns the level N+1 path whose restriction
// to the coarse grid equals the input exactly and whose new midpoints are
// drawn from the bridge conditional law (mean = neighbor average,
// variance = 2^-(N+2)) using gaussian(seed2, midpoint index).
SamplePath refine_bridge(const SamplePath& path, std::uint64_t seed2);

// Fractional Brownian motion on [0, 2] with Hurst index hurst in (0, 1),
// exact circulant embedding of the stationary increment covariance
//   r(k) = (|k+1|^{2H} + |k-1|^{2H} - 2|k|^{2H}) / 2   (grid units),
// scaled so E|B(t+h)-B(t)|^2 = h^{2H} in time units.  If the embedding is
// numerically indefinite the generator falls back to a dense factorization
// (small levels only) and says so on stderr.  1 <= level <= 14.
SamplePath sample_fbm(std::uint64_t seed, double hurst, int level);

// X = B - f evaluated on the grid; kind becomes DRIFTED and the drift is
// carried along for later reference.
SamplePath apply_drift(const SamplePath& path, const DriftSpec& f);

// coin = 0: identical path; coin = 1: all values negated (distribution
// preserved by symmetry).
SamplePath flip_sign(const SamplePath& path, int coin);

// Max over grid pairs s, t in [0, 1] with h_min <= |s-t| <= 1/2 of
// |V(s)-V(t)| / sqrt(|s-t| * ln(1/|s-t|)) — the empirical constant in the
// uniform modulus of continuity over the unit interval.  h_min >= 2^-level.
double modulus_coefficient(const SamplePath& path, double h_min);

}  // namespace fastpoints
