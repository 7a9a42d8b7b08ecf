#include "fastpoints/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "fastpoints/errors.hpp"

namespace fastpoints {

namespace {

double corrected(double count, int m, Correction correction) {
    if (correction == Correction::NONE) return count;
    const double lr = static_cast<double>(m) * std::log(2.0) -
                      std::log(static_cast<double>(m));
    return count / std::sqrt(std::max(lr, 1.0));
}

}  // namespace

ScalingFit fit_exponent(const std::vector<int>& levels,
                        const std::vector<double>& counts, Correction correction) {
    if (levels.size() != counts.size())
        throw usage_error("fit_exponent: levels and counts differ in length");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1])
            throw usage_error("fit_exponent: levels must strictly increase");

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!(counts[i] >= 0.0))
            throw usage_error("fit_exponent: counts must be nonnegative");
        if (counts[i] > 0.0) {
            xs.push_back(static_cast<double>(levels[i]));
            ys.push_back(std::log2(corrected(counts[i], levels[i], correction)));
        }
    }
    if (xs.size() < 3) {
        char buf[128];
        std::snprintf(buf, sizeof(buf),
                      "fit_exponent: only %zu of %zu levels have positive counts "
                      "(need 3)",
                      xs.size(), levels.size());
        throw fit_error(buf);
    }

    const auto n = static_cast<double>(xs.size());
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mean_x += xs[i];
        mean_y += ys[i];
    }
    mean_x /= n;
    mean_y /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mean_x;
        const double dy = ys[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    ScalingFit fit;
    fit.levels = levels;
    fit.counts = counts;
    fit.correction = correction;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
        ss_res += r * r;
    }
    fit.stderr_slope =
        xs.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / sxx) : 0.0;
    // Scale floor keeps r^2 meaningful when syy is rounding dust (e.g. all
    // counts identical): a residual that small is a perfect fit, not a bad one.
    const double y_scale = 1.0 + mean_y * mean_y;
    fit.r_squared = syy > n * 1e-24 * y_scale
                        ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0)
                        : 1.0;
    return fit;
}

namespace {

DimResult make_dim(double value, const char* id) {
    DimResult out;
    out.value = std::clamp(value, 0.0, 1.0);
    out.formula_id = id;
    return out;
}

}  // namespace

DimResult dim_fast(double a) {
    if (!(a >= 0.0 && a <= 1.0))
        throw config_error("dim_fast: a must lie in [0, 1]");
    return make_dim(1.0 - a * a, "fast:1-a^2");
}

DimResult dim_fast_zero(double a) {
    if (!(a > 0.0 && a <= 1.0))
        throw config_error("dim_fast_zero: a must lie in (0, 1]");
    return make_dim(std::max(0.5 - a * a, 0.0), "fast-zero:max(1/2-a^2,0)");
}

DimResult dim_cantor(double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw config_error("dim_cantor: gamma must lie in (0, 1/2)");
    return make_dim(-std::log(2.0) / std::log(gamma), "cantor:-ln2/ln(gamma)");
}

DimResult dim_fast_cantor_drift(double a, double gamma) {
    if (!(a >= 0.0 && a <= 1.0))
        throw config_error("dim_fast_cantor_drift: a must lie in [0, 1]");
    if (!(gamma > 0.0 && gamma < 0.25))
        throw config_error("dim_fast_cantor_drift: gamma must lie in (0, 1/4)");
    const double value = std::max(1.0 - a * a, -std::log(2.0) / std::log(gamma));
    return make_dim(value, "fast-cantor-drift:max(1-a^2,-ln2/ln(gamma))");
}

DimResult dim_fbm_cantor_drift(double a, double alpha, double hurst) {
    if (!(a >= 0.0 && a <= 1.0))
        throw config_error("dim_fbm_cantor_drift: a must lie in [0, 1]");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("dim_fbm_cantor_drift: alpha must lie in (0, 1)");
    if (!(hurst > 0.0 && hurst < 1.0))
        throw config_error("dim_fbm_cantor_drift: hurst must lie in (0, 1)");
    const double boundary = 1.0 - std::pow(2.0, 1.0 - 1.0 / hurst);
    if (!(alpha > boundary)) {
        DimResult out;
        out.value = std::nan("");
        out.formula_id = "fbm-cantor-drift:condition-violated";
        out.condition_ok = false;
        return out;
    }
    const double second = std::log(2.0) / (std::log(2.0) - std::log(1.0 - alpha));
    return make_dim(std::max(1.0 - a * a, second),
                    "fbm-cantor-drift:max(1-a^2,ln2/(ln2-ln(1-alpha)))");
}

double covering_sum(const std::vector<LevelFrequencies>& ensemble_flags,
                    double gamma_exp, int i_start) {
    double total = 0.0;
    for (const auto& lf : ensemble_flags) {
        if (lf.level < i_start) continue;
        if (lf.freq.size() != (std::size_t{1} << lf.level))
            throw usage_error("covering_sum: frequency vector length != 2^level");
        const double weight =
            std::pow(2.0, -static_cast<double>(lf.level) * gamma_exp);
        double level_sum = 0.0;
        for (double f : lf.freq) {
            if (!(f >= 0.0 && f <= 1.0))
                throw usage_error("covering_sum: frequency outside [0, 1]");
            level_sum += f;
        }
        total += weight * level_sum;
    }
    return total;
}

}  // namespace fastpoints
