#pragma once

#include <string>
#include <vector>

namespace fastpoints {

enum class Correction { NONE, SQRT_LOG };

// Least-squares summary of log2(count) against level.
struct ScalingFit {
    std::vector<int> levels;       // strictly increasing
    std::vector<double> counts;    // ensemble mean counts, same length
    Correction correction = Correction::NONE;
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    double r_squared = 0.0;
};

// Ordinary least squares of log2(adjusted count) against m.  SQRT_LOG first
// divides each count by sqrt(max(ln(2^m/m), 1)), removing the subpolynomial
// factor carried by the exact flag probability so near-power-laws fit cleaner.
// Requires at least three levels with positive counts; zero-count levels are
// dropped from the regression.
ScalingFit fit_exponent(const std::vector<int>& levels,
                        const std::vector<double>& counts, Correction correction);

// Closed-form dimension value with provenance of the formula that produced
// it.  When condition_ok is false the inputs violated the formula's validity
// condition: value is NaN and formula_id says so — never a silent number.
struct DimResult {
    double value = 0.0;      // in [0, 1] when condition_ok
    std::string formula_id;
    bool condition_ok = true;
};

// Fast-point dimension 1 - a^2 for 0 <= a <= 1.
DimResult dim_fast(double a);

// Fast points on the zero set: max(1/2 - a^2, 0) for 0 < a <= 1.
DimResult dim_fast_zero(double a);

// Middle-interval Cantor set dimension -ln2/ln(gamma) for 0 < gamma < 1/2.
DimResult dim_cantor(double gamma);

// Fast points of a Cantor-drifted path: max(1 - a^2, -ln2/ln(gamma)) for
// 0 <= a <= 1 and 0 < gamma < 1/4.
DimResult dim_fast_cantor_drift(double a, double gamma);

// Fast points of Cantor-type drifted fractional Brownian motion:
// max(1 - a^2, ln2/(ln2 - ln(1-alpha))), valid only when
// alpha > 1 - 2^{1 - 1/hurst}; otherwise the condition-violated result.
DimResult dim_fbm_cantor_drift(double a, double alpha, double hurst);

// Empirical joint flag frequencies for the dyadic intervals of one level.
struct LevelFrequencies {
    int level = 0;
    std::vector<double> freq;  // length 2^level, entries in [0, 1]
};

// Sum over levels j >= i_start and intervals k of 2^{-j*gamma_exp} * freq.
// Monotone nonincreasing in i_start; partial sums of a divergent series are
// reported as-is.
double covering_sum(const std::vector<LevelFrequencies>& ensemble_flags,
                    double gamma_exp, int i_start);

}  // namespace fastpoints
