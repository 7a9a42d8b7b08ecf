#include "fastpoints/detector.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fastpoints/drift.hpp"
#include "fastpoints/errors.hpp"
#include "fastpoints/stats.hpp"

namespace fastpoints {

namespace {

// ln(2^m / m) evaluated as m ln2 - ln m so it never overflows 2^m.
double log_ratio(int m) {
    return static_cast<double>(m) * std::log(2.0) - std::log(static_cast<double>(m));
}

std::string describe_window(const char* fmt, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), fmt, value);
    return buf;
}

}  // namespace

double fast_threshold(double a, double h) {
    if (!(a >= 0.0)) throw config_error("fast_threshold: a must be >= 0");
    if (!(h > 0.0 && h < 1.0))
        throw config_error("fast_threshold: h must lie in (0, 1)");
    return a * std::sqrt(2.0 * h * std::log(1.0 / h));
}

IntervalFlags l_flags(const SamplePath& path, int m, double a, double epsilon) {
    if (m < 2) throw config_error("l_flags: m must be >= 2");
    if (path.level < m) throw resolution_error("l_flags: path coarser than level m");
    const int shift = path.level - m;
    const std::size_t stride = std::size_t{1} << shift;
    const std::size_t offset = static_cast<std::size_t>(m) * stride;  // m*2^-m
    const std::size_t n_intervals = std::size_t{1} << m;
    const double threshold =
        a * (1.0 + epsilon) *
        std::sqrt(static_cast<double>(m) * std::ldexp(1.0, -m + 1) * log_ratio(m));

    IntervalFlags out;
    out.level = m;
    out.flag_kind = FlagKind::FAST_L;
    out.params.a = a;
    out.params.epsilon = epsilon;
    out.params.window = describe_window("increment over m*2^-m = %.9g", m * std::ldexp(1.0, -m));
    out.flags = Bitset(n_intervals);
    const double* v = path.values.data();
    for (std::size_t k = 0; k < n_intervals; ++k) {
        const std::size_t i = k * stride;
        if (std::fabs(v[i + offset] - v[i]) > threshold) out.flags.set(k);
    }
    return out;
}

IntervalFlags sup_flags(const SamplePath& path, int j, double b, double theta) {
    if (j < 0) throw config_error("sup_flags: j must be >= 0");
    if (path.level < j + 3)
        throw resolution_error("sup_flags: need path.level >= j + 3");
    const std::size_t stride = std::size_t{1} << (path.level - j);
    const std::size_t n_intervals = std::size_t{1} << j;
    const double h = std::ldexp(1.0, -j);
    const double threshold =
        theta * b * std::sqrt(2.0 * h * static_cast<double>(j) * std::log(2.0));

    IntervalFlags out;
    out.level = j;
    out.flag_kind = FlagKind::FAST_SUP;
    out.params.a = b;
    out.params.theta = theta;
    out.params.window = describe_window("sup over window 2^-j = %.9g", h);
    out.flags = Bitset(n_intervals);
    const double* v = path.values.data();
    for (std::size_t k = 0; k < n_intervals; ++k) {
        const std::size_t i0 = k * stride;
        double big = 0.0;
        for (std::size_t s = 1; s <= stride; ++s)
            big = std::max(big, std::fabs(v[i0 + s] - v[i0]));
        if (big > threshold) out.flags.set(k);
    }
    return out;
}

IntervalFlags zero_near_flags(const SamplePath& path, int m, double c,
                              double theta, bool whole_interval) {
    if (m < 1) throw config_error("zero_near_flags: m must be >= 1");
    if (!(c > 0.0)) throw config_error("zero_near_flags: c must be > 0");
    if (path.level < m)
        throw resolution_error("zero_near_flags: path coarser than level m");
    const std::size_t stride = std::size_t{1} << (path.level - m);
    const std::size_t n_intervals = std::size_t{1} << m;
    const double threshold =
        theta * c * std::sqrt(static_cast<double>(m) * std::ldexp(1.0, -m) * std::log(2.0));

    IntervalFlags out;
    out.level = m;
    out.flag_kind = FlagKind::ZERO_NEAR;
    out.params.c = c;
    out.params.theta = theta;
    out.params.window = whole_interval ? "min |V| over interval grid points"
                                       : "left endpoint value";
    out.flags = Bitset(n_intervals);
    const double* v = path.values.data();
    for (std::size_t k = 0; k < n_intervals; ++k) {
        const std::size_t i0 = k * stride;
        double small = std::fabs(v[i0]);
        if (whole_interval)
            for (std::size_t s = 1; s <= stride; ++s)
                small = std::min(small, std::fabs(v[i0 + s]));
        if (small <= threshold) out.flags.set(k);
    }
    return out;
}

double near_zero_c_default(const SamplePath& path) {
    double c0 = 0.0;
    if (path.drift && !path.drift->is_zero()) {
        const int grid_level = std::min(path.level, 15);
        c0 = holder_coefficient(*path.drift, 0.5, grid_level);
    }
    return std::max(2.0 * c0, 2.0 * std::sqrt(2.0));
}

IntervalFlags zero_near_flags(const SamplePath& path, int m) {
    return zero_near_flags(path, m, near_zero_c_default(path));
}

IntervalFlags intersect_flags(const IntervalFlags& x, const IntervalFlags& y) {
    if (x.level != y.level)
        throw usage_error("intersect_flags: level mismatch");
    IntervalFlags out;
    out.level = x.level;
    out.flag_kind = FlagKind::INTERSECT;
    out.params = x.params;
    out.params.c = y.params.c;
    out.params.window = "intersection";
    out.flags = x.flags & y.flags;
    return out;
}

std::int64_t count(const IntervalFlags& flags) {
    return static_cast<std::int64_t>(flags.flags.count());
}

double expected_l_count(int m, double a, double epsilon) {
    if (m < 2) throw config_error("expected_l_count: m must be >= 2");
    const double x = a * (1.0 + epsilon) * std::sqrt(2.0 * log_ratio(m));
    return std::ldexp(1.0, m) * 2.0 * gaussian_tail_q(x);
}

double sandwich_shift(double c0, int m) {
    if (m < 2) throw config_error("sandwich_shift: m must be >= 2");
    return c0 / std::sqrt(2.0 * log_ratio(m));
}

}  // namespace fastpoints
