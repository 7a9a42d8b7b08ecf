#pragma once

#include <cstdint>
#include <vector>

#include "fastpoints/path.hpp"

namespace fastpoints {

// Fixed polynomial factor eta_n = 2n+1 in the counting bound.
constexpr double eta_n(int n) { return 2.0 * n + 1.0; }

// Per-interval nested counts and ensemble variance summary.
// m_n_counts fills per_interval_counts for one path and leaves the variance
// fields NaN; variance_report pools an ensemble and leaves
// per_interval_counts empty (per-path count lists would be n_paths * 2^m
// integers; the pooled moments are what the bound speaks about).
struct CountReport {
    int m = 0;
    int n = 0;
    double a = 0.0;
    double epsilon = 0.0;
    std::vector<std::int64_t> per_interval_counts;  // one per level-m interval
    double p_n_hat = 0.0;       // empirical flag frequency at level n
    double p_n_analytic = 0.0;  // 2 Q(a(1+eps) sqrt(2 ln(2^n/n)))
    double var_hat = 0.0;       // pooled empirical Var(M_n(I))
    double var_bound = 0.0;     // (2n+1) * p_n_analytic * 2^{n-m}
    double var_hat_se = 0.0;    // batch standard error of var_hat
    double var_ratio = 0.0;     // var_hat / var_bound (NaN when vacuous)
    double mean_se = 0.0;       // standard error of the mean count M_n(I)
    std::int64_t n_paths = 0;
};

// Counts, for each level-m dyadic interval I, how many of its level-n
// subintervals are flagged by the fast-increment indicator at (a, epsilon).
CountReport m_n_counts(const SamplePath& path, int m, int n, double a,
                       double epsilon);

// Ensemble of n_paths Brownian paths at level n: empirical variance of
// M_n(I) pooled over intervals, against the analytic bound
// (2n+1) * p_n * 2^{n-m}.  Per-path seeds derive from master_seed; the
// reduction order is fixed, so results do not depend on worker count.
CountReport variance_report(std::uint64_t master_seed, std::int64_t n_paths, int m,
                            int n, double a, double epsilon);

enum class ConditionVerdict { DECREASING_TO_ZERO, DIVERGING, INCONCLUSIVE };

struct DimensionConditionRow {
    int n = 0;
    double value = 0.0;  // 2^{(gamma-1)n} * (2n+1) / p_n
};

struct DimensionConditionTable {
    double gamma_target = 0.0;
    double a = 0.0;
    double epsilon = 0.0;
    std::vector<DimensionConditionRow> rows;
    ConditionVerdict verdict = ConditionVerdict::INCONCLUSIVE;
};

// Evaluates the counting theorem's dimension condition sequence
// 2^{(gamma-1)n} * (2n+1) / p_n over n_range.  Verdict DECREASING_TO_ZERO
// when the tail (final half) is strictly decreasing and the final value is
// below first * 1e-3; DIVERGING when the tail is strictly increasing and the
// final value exceeds first * 1e3; INCONCLUSIVE otherwise.
DimensionConditionTable dimension_condition(double gamma_target, double a,
                                            double epsilon,
                                            const std::vector<int>& n_range);

}  // namespace fastpoints
