#include "fastpoints/limsup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fastpoints/detector.hpp"
#include "fastpoints/errors.hpp"
#include "fastpoints/parallel.hpp"
#include "fastpoints/path_sampler.hpp"
#include "fastpoints/rng.hpp"
#include "fastpoints/stats.hpp"

namespace fastpoints {

namespace {

double p_n_exact(int n, double a, double epsilon) {
    const double lr = static_cast<double>(n) * std::log(2.0) -
                      std::log(static_cast<double>(n));
    return 2.0 * gaussian_tail_q(a * (1.0 + epsilon) * std::sqrt(2.0 * lr));
}

// log2 of p_n, switching to the Mills-ratio asymptotic
// Q(x) ~ exp(-x^2/2) / (x sqrt(2 pi)) once the exact value underflows.
double log2_p_n(int n, double a, double epsilon) {
    const double p = p_n_exact(n, a, epsilon);
    if (p > 0.0) return std::log2(p);
    const double lr = static_cast<double>(n) * std::log(2.0) -
                      std::log(static_cast<double>(n));
    const double x = a * (1.0 + epsilon) * std::sqrt(2.0 * lr);
    const double ln_q =
        -0.5 * x * x - std::log(x * std::sqrt(2.0 * std::numbers::pi));
    return (std::log(2.0) + ln_q) / std::log(2.0);
}

std::vector<std::int64_t> group_counts(const IntervalFlags& flags, int m) {
    const int n = flags.level;
    const std::size_t block = std::size_t{1} << (n - m);
    const std::size_t n_intervals = std::size_t{1} << m;
    std::vector<std::int64_t> counts(n_intervals, 0);
    for (std::size_t k = 0; k < n_intervals; ++k) {
        std::int64_t c = 0;
        for (std::size_t j = 0; j < block; ++j)
            c += flags.flags.test(k * block + j) ? 1 : 0;
        counts[k] = c;
    }
    return counts;
}

}  // namespace

CountReport m_n_counts(const SamplePath& path, int m, int n, double a,
                       double epsilon) {
    if (m < 2 || n < m) throw config_error("m_n_counts: need n >= m >= 2");
    if (path.level < n)
        throw resolution_error("m_n_counts: path coarser than level n");
    const IntervalFlags flags = l_flags(path, n, a, epsilon);
    CountReport report;
    report.m = m;
    report.n = n;
    report.a = a;
    report.epsilon = epsilon;
    report.per_interval_counts = group_counts(flags, m);
    report.p_n_hat =
        static_cast<double>(count(flags)) / std::ldexp(1.0, n);
    report.p_n_analytic = p_n_exact(n, a, epsilon);
    report.var_bound =
        eta_n(n) * report.p_n_analytic * std::ldexp(1.0, n - m);
    report.var_hat = std::numeric_limits<double>::quiet_NaN();
    report.var_hat_se = std::numeric_limits<double>::quiet_NaN();
    report.var_ratio = std::numeric_limits<double>::quiet_NaN();
    report.mean_se = std::numeric_limits<double>::quiet_NaN();
    report.n_paths = 1;
    return report;
}

CountReport variance_report(std::uint64_t master_seed, std::int64_t n_paths, int m,
                            int n, double a, double epsilon) {
    if (n_paths < 200) throw config_error("variance_report: need n_paths >= 200");
    if (m < 2 || n < m) throw config_error("variance_report: need n >= m >= 2");
    const std::size_t n_intervals = std::size_t{1} << m;
    const auto paths = static_cast<std::size_t>(n_paths);

    std::vector<std::vector<std::int64_t>> counts(paths);
    std::vector<std::int64_t> flag_totals(paths, 0);
    parallel_for(paths, [&](std::size_t p) {
        const SamplePath path = sample_bm(derive_seed(master_seed, p), n);
        const IntervalFlags flags = l_flags(path, n, a, epsilon);
        counts[p] = group_counts(flags, m);
        flag_totals[p] = count(flags);
    });

    CountReport report;
    report.m = m;
    report.n = n;
    report.a = a;
    report.epsilon = epsilon;
    report.n_paths = n_paths;
    report.p_n_analytic = p_n_exact(n, a, epsilon);
    report.var_bound = eta_n(n) * report.p_n_analytic * std::ldexp(1.0, n - m);

    std::int64_t flagged = 0;
    for (std::int64_t f : flag_totals) flagged += f;
    report.p_n_hat =
        static_cast<double>(flagged) / (std::ldexp(1.0, n) * static_cast<double>(n_paths));

    // Standard error of the grand mean count: intervals within one path are
    // dependent, so aggregate per path first (paths are independent).
    const auto np = static_cast<double>(n_paths);
    {
        double grand = 0.0;
        for (std::int64_t f : flag_totals)
            grand += static_cast<double>(f) / static_cast<double>(n_intervals);
        grand /= np;
        double ss = 0.0;
        for (std::int64_t f : flag_totals) {
            const double v =
                static_cast<double>(f) / static_cast<double>(n_intervals) - grand;
            ss += v * v;
        }
        report.mean_se = std::sqrt(ss / (np - 1.0) / np);
    }

    // Pooled empirical variance: per-interval sample variance across paths,
    // averaged over the 2^m intervals (every M_n(I) shares one distribution).
    std::vector<double> mean_i(n_intervals, 0.0);
    for (std::size_t p = 0; p < paths; ++p)
        for (std::size_t k = 0; k < n_intervals; ++k)
            mean_i[k] += static_cast<double>(counts[p][k]);
    for (double& v : mean_i) v /= np;
    double pooled = 0.0;
    for (std::size_t k = 0; k < n_intervals; ++k) {
        double ss = 0.0;
        for (std::size_t p = 0; p < paths; ++p) {
            const double d = static_cast<double>(counts[p][k]) - mean_i[k];
            ss += d * d;
        }
        pooled += ss / (np - 1.0);
    }
    report.var_hat = pooled / static_cast<double>(n_intervals);

    // Batch standard error: split the ensemble into 20 path-batches, compute
    // the pooled variance within each, take the spread of batch values.
    const std::size_t n_batches = 20;
    const std::size_t batch = paths / n_batches;
    if (batch >= 2) {
        std::vector<double> batch_vals;
        batch_vals.reserve(n_batches);
        for (std::size_t b = 0; b < n_batches; ++b) {
            const std::size_t lo = b * batch;
            const std::size_t hi = (b + 1 == n_batches) ? paths : lo + batch;
            const auto nb = static_cast<double>(hi - lo);
            double pooled_b = 0.0;
            for (std::size_t k = 0; k < n_intervals; ++k) {
                double mean_b = 0.0;
                for (std::size_t p = lo; p < hi; ++p)
                    mean_b += static_cast<double>(counts[p][k]);
                mean_b /= nb;
                double ss = 0.0;
                for (std::size_t p = lo; p < hi; ++p) {
                    const double d = static_cast<double>(counts[p][k]) - mean_b;
                    ss += d * d;
                }
                pooled_b += ss / (nb - 1.0);
            }
            batch_vals.push_back(pooled_b / static_cast<double>(n_intervals));
        }
        double mean_v = 0.0;
        for (double v : batch_vals) mean_v += v;
        mean_v /= static_cast<double>(batch_vals.size());
        double ss = 0.0;
        for (double v : batch_vals) ss += (v - mean_v) * (v - mean_v);
        const auto nb = static_cast<double>(batch_vals.size());
        report.var_hat_se = std::sqrt(ss / (nb - 1.0) / nb);
    } else {
        report.var_hat_se = std::numeric_limits<double>::quiet_NaN();
    }

    report.var_ratio = report.var_bound > 1e-3
                           ? report.var_hat / report.var_bound
                           : std::numeric_limits<double>::quiet_NaN();
    return report;
}

DimensionConditionTable dimension_condition(double gamma_target, double a,
                                            double epsilon,
                                            const std::vector<int>& n_range) {
    if (!(gamma_target > 0.0 && gamma_target < 1.0))
        throw config_error("dimension_condition: gamma_target must lie in (0, 1)");
    DimensionConditionTable table;
    table.gamma_target = gamma_target;
    table.a = a;
    table.epsilon = epsilon;
    for (int n : n_range) {
        if (n < 2) throw config_error("dimension_condition: n must be >= 2");
        // 2^{(gamma-1)n} * (2n+1) / p_n in log space: p_n underflows long
        // before the sequence stops being informative.
        const double log2_value = (gamma_target - 1.0) * n +
                                  std::log2(eta_n(n)) - log2_p_n(n, a, epsilon);
        table.rows.push_back({n, std::exp2(log2_value)});
    }
    if (table.rows.size() >= 4) {
        const std::size_t tail_start = table.rows.size() / 2;
        bool decreasing = true, increasing = true;
        for (std::size_t i = tail_start + 1; i < table.rows.size(); ++i) {
            if (!(table.rows[i].value < table.rows[i - 1].value)) decreasing = false;
            if (!(table.rows[i].value > table.rows[i - 1].value)) increasing = false;
        }
        const double first = table.rows.front().value;
        const double final = table.rows.back().value;
        if (decreasing && final < first * 1e-3)
            table.verdict = ConditionVerdict::DECREASING_TO_ZERO;
        else if (increasing && final > first * 1e3)
            table.verdict = ConditionVerdict::DIVERGING;
        else
            table.verdict = ConditionVerdict::INCONCLUSIVE;
    }
    return table;
}

}  // namespace fastpoints
