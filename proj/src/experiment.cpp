#include "fastpoints/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "fastpoints/errors.hpp"
#include "fastpoints/limsup.hpp"
#include "fastpoints/measure.hpp"
#include "fastpoints/parallel.hpp"
#include "fastpoints/path_sampler.hpp"
#include "fastpoints/rng.hpp"
#include "fastpoints/scaling.hpp"
#include "fastpoints/stats.hpp"

namespace fastpoints {

namespace {

constexpr std::uint64_t kDefaultSeed = 20260822;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe out;
    if (xs.empty()) return out;
    const auto n = static_cast<double>(xs.size());
    for (double x : xs) out.mean += x;
    out.mean /= n;
    if (xs.size() < 2) return out;
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.se = std::sqrt(ss / (n - 1.0) / n);
    return out;
}

std::vector<int> level_list(const ExperimentConfig& cfg) {
    std::vector<int> levels;
    for (int m = cfg.level_min; m <= cfg.level_max; ++m) levels.push_back(m);
    return levels;
}

ResultRow make_row(const ExperimentConfig& cfg, int level, std::string stat,
                   double value, double se = 0.0,
                   std::optional<double> oracle = std::nullopt) {
    ResultRow row;
    row.preset = cfg.preset;
    row.level = level;
    row.stat = std::move(stat);
    row.value = value;
    row.stderr_value = se;
    row.oracle = oracle;
    row.n_paths = cfg.n_paths;
    row.seed = cfg.master_seed;
    return row;
}

// Exact expectation of the near-zero count on a pure Brownian path:
// P(|B(k 2^-m)| <= c sqrt(m 2^-m ln 2)) summed over k, with the k=0 term 1.
double expected_zero_count(int m, double c) {
    const double x = c * std::sqrt(static_cast<double>(m) * std::ldexp(1.0, -m) *
                                   std::log(2.0));
    double sum = 1.0;
    const std::size_t n = std::size_t{1} << m;
    for (std::size_t k = 1; k < n; ++k) {
        const double sigma = std::sqrt(static_cast<double>(k) * std::ldexp(1.0, -m));
        sum += std::erf(x / (sigma * std::sqrt(2.0)));
    }
    return sum;
}

double p_l_exact(int m, double a, double epsilon) {
    const double lr = static_cast<double>(m) * std::log(2.0) -
                      std::log(static_cast<double>(m));
    return 2.0 * gaussian_tail_q(a * (1.0 + epsilon) * std::sqrt(2.0 * lr));
}

// Ensemble of per-path per-level counts; slot-indexed so the reduction order
// is fixed no matter how many workers computed the slots.
template <typename PerPath>
std::vector<std::vector<double>> ensemble_slots(std::int64_t n_paths,
                                                PerPath&& per_path) {
    std::vector<std::vector<double>> slots(static_cast<std::size_t>(n_paths));
    parallel_for(static_cast<std::size_t>(n_paths),
                 [&](std::size_t p) { slots[p] = per_path(p); });
    return slots;
}

MeanSe column_stats(const std::vector<std::vector<double>>& slots,
                    std::size_t column) {
    std::vector<double> xs;
    xs.reserve(slots.size());
    for (const auto& row : slots) xs.push_back(row.at(column));
    return mean_se(xs);
}

// ---- presets ---------------------------------------------------------------

std::vector<ResultRow> run_orey_taylor(const ExperimentConfig& cfg) {
    const std::vector<int> levels = level_list(cfg);
    const bool driftless = cfg.drift.is_zero();
    auto slots = ensemble_slots(cfg.n_paths, [&](std::size_t p) {
        SamplePath path = sample_bm(derive_seed(cfg.master_seed, p), cfg.level_max);
        if (!driftless) path = apply_drift(path, cfg.drift);
        std::vector<double> counts;
        counts.reserve(levels.size());
        for (int m : levels)
            counts.push_back(
                static_cast<double>(count(l_flags(path, m, cfg.a, cfg.epsilon))));
        return counts;
    });

    std::vector<ResultRow> rows;
    std::vector<double> means;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const MeanSe st = column_stats(slots, i);
        means.push_back(st.mean);
        std::optional<double> oracle;
        if (driftless) oracle = expected_l_count(levels[i], cfg.a, cfg.epsilon);
        rows.push_back(
            make_row(cfg, levels[i], "l_count_mean", st.mean, st.se, oracle));
    }
    if (levels.size() < 3) return rows;  // too few levels for a regression
    const ScalingFit fit = fit_exponent(levels, means, Correction::SQRT_LOG);
    std::optional<double> dim_oracle;
    if (driftless && cfg.a <= 1.0) dim_oracle = dim_fast(cfg.a).value;
    rows.push_back(make_row(cfg, 0, "fit_slope_sqrtlog", fit.slope,
                            fit.stderr_slope, dim_oracle));
    if (driftless) {
        std::vector<double> oracle_counts;
        for (int m : levels)
            oracle_counts.push_back(expected_l_count(m, cfg.a, cfg.epsilon));
        const ScalingFit ofit =
            fit_exponent(levels, oracle_counts, Correction::NONE);
        rows.push_back(make_row(cfg, 0, "oracle_fit_slope_uncorrected", ofit.slope,
                                ofit.stderr_slope, dim_oracle));
    }
    return rows;
}

std::vector<ResultRow> run_zero_intersection(const ExperimentConfig& cfg) {
    const std::vector<int> levels = level_list(cfg);
    const bool driftless = cfg.drift.is_zero();
    const std::size_t n_levels = levels.size();
    auto slots = ensemble_slots(cfg.n_paths, [&](std::size_t p) {
        SamplePath path = sample_bm(derive_seed(cfg.master_seed, p), cfg.level_max);
        if (!driftless) path = apply_drift(path, cfg.drift);
        const double c = near_zero_c_default(path);
        std::vector<double> vals(2 * n_levels, 0.0);
        for (std::size_t i = 0; i < n_levels; ++i) {
            const IntervalFlags zero = zero_near_flags(path, levels[i], c);
            const IntervalFlags fast = l_flags(path, levels[i], cfg.a, cfg.epsilon);
            vals[i] = static_cast<double>(count(zero));
            vals[n_levels + i] =
                static_cast<double>(count(intersect_flags(fast, zero)));
        }
        return vals;
    });

    const double c_default = 2.0 * std::sqrt(2.0);
    std::vector<ResultRow> rows;
    std::vector<double> zero_means, inter_means;
    for (std::size_t i = 0; i < n_levels; ++i) {
        const MeanSe zs = column_stats(slots, i);
        const MeanSe is = column_stats(slots, n_levels + i);
        zero_means.push_back(zs.mean);
        inter_means.push_back(is.mean);
        std::optional<double> zero_oracle, inter_oracle;
        if (driftless) {
            zero_oracle = expected_zero_count(levels[i], c_default);
            inter_oracle =
                *zero_oracle * p_l_exact(levels[i], cfg.a, cfg.epsilon);
        }
        rows.push_back(
            make_row(cfg, levels[i], "zero_count_mean", zs.mean, zs.se, zero_oracle));
        rows.push_back(make_row(cfg, levels[i], "intersect_count_mean", is.mean,
                                is.se, inter_oracle));
    }
    if (n_levels < 3) return rows;
    const ScalingFit zfit = fit_exponent(levels, zero_means, Correction::NONE);
    rows.push_back(make_row(cfg, 0, "zero_fit_slope", zfit.slope, zfit.stderr_slope,
                            driftless ? std::optional<double>(0.5) : std::nullopt));
    std::optional<double> inter_oracle;
    if (driftless && cfg.a > 0.0 && cfg.a <= 1.0)
        inter_oracle = dim_fast_zero(cfg.a).value;
    const ScalingFit ifit = fit_exponent(levels, inter_means, Correction::NONE);
    rows.push_back(make_row(cfg, 0, "intersect_fit_slope", ifit.slope,
                            ifit.stderr_slope, inter_oracle));
    return rows;
}

std::vector<ResultRow> run_drifted_fast(const ExperimentConfig& cfg,
                                        std::optional<double> dim_target,
                                        const char* target_stat) {
    const std::vector<int> levels = level_list(cfg);
    auto slots = ensemble_slots(cfg.n_paths, [&](std::size_t p) {
        SamplePath path = apply_drift(
            sample_bm(derive_seed(cfg.master_seed, p), cfg.level_max), cfg.drift);
        std::vector<double> counts;
        counts.reserve(levels.size());
        for (int m : levels)
            counts.push_back(
                static_cast<double>(count(l_flags(path, m, cfg.a, cfg.epsilon))));
        return counts;
    });
    std::vector<ResultRow> rows;
    std::vector<double> means;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const MeanSe st = column_stats(slots, i);
        means.push_back(st.mean);
        rows.push_back(make_row(cfg, levels[i], "l_count_mean", st.mean, st.se));
    }
    if (levels.size() >= 3) {
        const ScalingFit fit = fit_exponent(levels, means, Correction::SQRT_LOG);
        rows.push_back(make_row(cfg, 0, "fit_slope_sqrtlog", fit.slope,
                                fit.stderr_slope, dim_target));
    }
    if (dim_target)
        rows.push_back(make_row(cfg, 0, target_stat, *dim_target));
    return rows;
}

std::vector<ResultRow> run_cantor_drift(const ExperimentConfig& cfg) {
    const DriftSpec::Cantor* cantor = cfg.drift.as_cantor();
    if (cantor == nullptr)
        throw config_error("cantor-drift preset needs a cantor drift");
    std::optional<double> target;
    if (cantor->gamma < 0.25)
        target = dim_fast_cantor_drift(cfg.a, cantor->gamma).value;
    return run_drifted_fast(cfg, target, "dim_formula");
}

std::vector<ResultRow> run_loud_drift(const ExperimentConfig& cfg) {
    const DriftSpec::Loud* loud = cfg.drift.as_loud();
    if (loud == nullptr)
        throw config_error("loud-drift preset needs a loud drift");
    // The asymptotic fast-set dimension is 1 for loud drifts with
    // alpha < 1/2; deeper exponents approach it from below.
    std::optional<double> target;
    if (loud->alpha < 0.5) target = 1.0;
    return run_drifted_fast(cfg, target, "dim_target");
}

std::vector<ResultRow> run_fbm(const ExperimentConfig& cfg) {
    const double hurst = cfg.hurst.value_or(0.5);
    if (cfg.level_max > 14)
        throw config_error("fbm preset: level_max must be <= 14");
    const std::vector<int> levels = level_list(cfg);
    std::vector<int> lag_exponents;  // lag d = 2^e, h = d * 2^-level_max
    for (int e = 0; e + 2 <= cfg.level_max; ++e) lag_exponents.push_back(e);
    const std::size_t n_lags = lag_exponents.size();
    const std::size_t n_levels = levels.size();

    auto slots = ensemble_slots(cfg.n_paths, [&](std::size_t p) {
        const SamplePath path =
            sample_fbm(derive_seed(cfg.master_seed, p), hurst, cfg.level_max);
        std::vector<double> vals(n_lags + n_levels, 0.0);
        const double* v = path.values.data();
        const auto n_values = static_cast<std::int64_t>(path.values.size());
        for (std::size_t li = 0; li < n_lags; ++li) {
            const std::int64_t d = std::int64_t{1} << lag_exponents[li];
            double acc = 0.0;
            for (std::int64_t i = 0; i + d < n_values; ++i) {
                const double diff = v[i + d] - v[i];
                acc += diff * diff;
            }
            vals[li] = acc / static_cast<double>(n_values - d);
        }
        for (std::size_t i = 0; i < n_levels; ++i)
            vals[n_lags + i] =
                static_cast<double>(count(l_flags(path, levels[i], cfg.a, cfg.epsilon)));
        return vals;
    });

    std::vector<ResultRow> rows;
    std::vector<double> log_h, log_msq;
    for (std::size_t li = 0; li < n_lags; ++li) {
        const MeanSe st = column_stats(slots, li);
        const int lag_level = cfg.level_max - lag_exponents[li];
        const double h = std::ldexp(1.0, -lag_level);
        rows.push_back(make_row(cfg, lag_level, "msq_lag", st.mean, st.se,
                                std::pow(h, 2.0 * hurst)));
        log_h.push_back(std::log2(h));
        log_msq.push_back(std::log2(st.mean));
    }
    // Straight OLS on the log-log pairs (lags are not a level sequence).
    if (log_h.size() >= 2) {
        const auto n = static_cast<double>(log_h.size());
        double mx = 0.0, my = 0.0;
        for (std::size_t i = 0; i < log_h.size(); ++i) {
            mx += log_h[i];
            my += log_msq[i];
        }
        mx /= n;
        my /= n;
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < log_h.size(); ++i) {
            sxx += (log_h[i] - mx) * (log_h[i] - mx);
            sxy += (log_h[i] - mx) * (log_msq[i] - my);
        }
        rows.push_back(
            make_row(cfg, 0, "msq_slope", sxy / sxx, 0.0, 2.0 * hurst));
    }
    std::vector<double> fast_means;
    std::size_t positive = 0;
    for (std::size_t i = 0; i < n_levels; ++i) {
        const MeanSe st = column_stats(slots, n_lags + i);
        fast_means.push_back(st.mean);
        if (st.mean > 0.0) ++positive;
        rows.push_back(make_row(cfg, levels[i], "fast_count_mean", st.mean, st.se));
    }
    if (positive >= 3) {  // counts can die out entirely away from hurst = 1/2
        const ScalingFit fit = fit_exponent(levels, fast_means, Correction::NONE);
        std::optional<double> dim_oracle;
        if (std::fabs(hurst - 0.5) < 1e-9 && cfg.a <= 1.0)
            dim_oracle = dim_fast(cfg.a).value;
        rows.push_back(make_row(cfg, 0, "fast_fit_slope", fit.slope,
                                fit.stderr_slope, dim_oracle));
    }
    return rows;
}

std::vector<ResultRow> run_holder_sandwich(const ExperimentConfig& cfg) {
    if (cfg.drift.is_zero())
        throw config_error("holder-sandwich preset needs a nonzero drift");
    const std::vector<int> levels = level_list(cfg);
    const double c0 =
        holder_coefficient(cfg.drift, 0.5, std::min(cfg.level_max, 12));
    auto slots = ensemble_slots(cfg.n_paths, [&](std::size_t p) {
        const SamplePath bm = sample_bm(derive_seed(cfg.master_seed, p), cfg.level_max);
        const SamplePath drifted = apply_drift(bm, cfg.drift);
        std::vector<double> violations(levels.size(), 0.0);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const int m = levels[i];
            const double delta = sandwich_shift(c0, m);
            const IntervalFlags tight =
                l_flags(bm, m, cfg.a + delta, cfg.epsilon);
            const IntervalFlags mid = l_flags(drifted, m, cfg.a, cfg.epsilon);
            const IntervalFlags loose =
                l_flags(bm, m, cfg.a - delta, cfg.epsilon);
            std::int64_t bad = 0;
            for (std::size_t k = 0; k < mid.flags.size(); ++k) {
                if (tight.flags.test(k) && !mid.flags.test(k)) ++bad;
                if (mid.flags.test(k) && !loose.flags.test(k)) ++bad;
            }
            violations[i] = static_cast<double>(bad);
        }
        return violations;
    });
    std::vector<ResultRow> rows;
    rows.push_back(make_row(cfg, 0, "holder_c0", c0));
    for (std::size_t i = 0; i < levels.size(); ++i) {
        double total = 0.0;
        for (const auto& s : slots) total += s[i];
        rows.push_back(
            make_row(cfg, levels[i], "sandwich_violations", total, 0.0, 0.0));
        rows.push_back(
            make_row(cfg, levels[i], "delta_m", sandwich_shift(c0, levels[i])));
    }
    return rows;
}

std::vector<ResultRow> run_covering(const ExperimentConfig& cfg) {
    if (cfg.level_min > cfg.level_max - 3)
        throw config_error(
            "covering preset: needs level_min <= level_max - 3 (sup windows)");
    std::vector<int> j_levels;
    for (int j = cfg.level_min; j <= cfg.level_max - 3; ++j) j_levels.push_back(j);
    const bool driftless = cfg.drift.is_zero();

    std::vector<std::vector<Bitset>> slots(static_cast<std::size_t>(cfg.n_paths));
    parallel_for(static_cast<std::size_t>(cfg.n_paths), [&](std::size_t p) {
        SamplePath path = sample_bm(derive_seed(cfg.master_seed, p), cfg.level_max);
        if (!driftless) path = apply_drift(path, cfg.drift);
        const double c = near_zero_c_default(path);
        std::vector<Bitset> flags;
        flags.reserve(j_levels.size());
        for (int j : j_levels)
            flags.push_back(intersect_flags(sup_flags(path, j, cfg.a),
                                            zero_near_flags(path, j, c))
                                .flags);
        slots[p] = std::move(flags);
    });

    std::vector<LevelFrequencies> ensemble;
    for (std::size_t i = 0; i < j_levels.size(); ++i) {
        LevelFrequencies lf;
        lf.level = j_levels[i];
        lf.freq.assign(std::size_t{1} << j_levels[i], 0.0);
        for (const auto& path_flags : slots)
            for (std::size_t k = 0; k < lf.freq.size(); ++k)
                if (path_flags[i].test(k)) lf.freq[k] += 1.0;
        for (double& f : lf.freq) f /= static_cast<double>(cfg.n_paths);
        ensemble.push_back(std::move(lf));
    }

    const double gamma_exp = std::max(0.5 - cfg.a * cfg.a, 0.0) + 0.2;
    std::vector<ResultRow> rows;
    rows.push_back(make_row(cfg, 0, "covering_gamma_exp", gamma_exp));
    for (int i_start : j_levels)
        rows.push_back(make_row(cfg, i_start, "covering_sum",
                                covering_sum(ensemble, gamma_exp, i_start)));
    return rows;
}

std::vector<ResultRow> run_jlab(const ExperimentConfig& cfg) {
    const int proxy_level = std::min(10, cfg.level_max - 1);
    if (proxy_level < 1)
        throw config_error("jlab preset: level_max too small for a proxy measure");
    const DiscreteMeasure mu = lebesgue_proxy_measure(proxy_level);
    const double h = std::ldexp(1.0, -cfg.level_min);
    const JEstimate est = j_mu_estimate(cfg.master_seed, cfg.n_paths, cfg.level_max,
                                        mu, h, cfg.a, cfg.drift);
    const PzReport pz = paley_zygmund_check(est);

    std::optional<double> ej_oracle;
    if (cfg.drift.is_zero()) {
        double sum = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i)
            sum += mu.w(i) * std::erf(h / std::sqrt(2.0 * mu.t(i)));
        ej_oracle = sum * phi(h, cfg.a);
    }
    std::vector<ResultRow> rows;
    rows.push_back(
        make_row(cfg, cfg.level_min, "j_mean", est.ej, est.stderr_ej, ej_oracle));
    rows.push_back(make_row(cfg, cfg.level_min, "j_second_moment", est.ej2));
    rows.push_back(make_row(cfg, cfg.level_min, "j_p_positive", est.p_positive));
    rows.push_back(make_row(cfg, cfg.level_min, "j_pz_lower", est.pz_lower));
    rows.push_back(make_row(cfg, cfg.level_min, "j_pz_margin", pz.margin,
                            pz.se_margin));
    rows.push_back(make_row(cfg, cfg.level_min, "j_shape_ratio",
                            est.ej / (h * phi(h, cfg.a))));
    return rows;
}

std::vector<ResultRow> run_limsup_variance(const ExperimentConfig& cfg) {
    const CountReport rep =
        variance_report(cfg.master_seed, cfg.n_paths, cfg.level_min, cfg.level_max,
                        cfg.a, cfg.epsilon);
    const double scale = std::ldexp(1.0, rep.n - rep.m);
    std::vector<ResultRow> rows;
    rows.push_back(make_row(cfg, rep.n, "p_n_hat", rep.p_n_hat, 0.0,
                            rep.p_n_analytic));
    rows.push_back(make_row(cfg, rep.n, "mean_m_n", rep.p_n_hat * scale,
                            rep.mean_se, rep.p_n_analytic * scale));
    rows.push_back(make_row(cfg, rep.n, "var_hat", rep.var_hat, rep.var_hat_se));
    rows.push_back(make_row(cfg, rep.n, "var_bound", rep.var_bound));
    if (std::isfinite(rep.var_ratio))
        rows.push_back(make_row(cfg, rep.n, "var_ratio", rep.var_ratio));
    else
        rows.push_back(make_row(cfg, rep.n, "var_ratio_vacuous", 1.0));

    std::vector<int> n_range;
    for (int n = 50; n <= 600; n += 10) n_range.push_back(n);
    for (double gamma : {0.70, 0.90}) {
        const DimensionConditionTable table =
            dimension_condition(gamma, cfg.a, cfg.epsilon, n_range);
        double code = 0.0;
        if (table.verdict == ConditionVerdict::DECREASING_TO_ZERO) code = 1.0;
        if (table.verdict == ConditionVerdict::DIVERGING) code = 2.0;
        char stat[48];
        std::snprintf(stat, sizeof(stat), "dimcond_verdict_gamma%.2f", gamma);
        rows.push_back(make_row(cfg, 0, stat, code));
    }
    return rows;
}

std::vector<ResultRow> run_dims(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    rows.push_back(make_row(cfg, 0, "dim_fast", dim_fast(cfg.a).value));
    if (cfg.a > 0.0 && cfg.a <= 1.0)
        rows.push_back(make_row(cfg, 0, "dim_fast_zero", dim_fast_zero(cfg.a).value));
    if (const DriftSpec::Cantor* cantor = cfg.drift.as_cantor()) {
        rows.push_back(
            make_row(cfg, 0, "dim_cantor", dim_cantor(cantor->gamma).value));
        if (cantor->gamma < 0.25)
            rows.push_back(make_row(cfg, 0, "dim_fast_cantor_drift",
                                    dim_fast_cantor_drift(cfg.a, cantor->gamma).value));
        if (cfg.hurst) {
            // Middle-piece fraction of the drift's Cantor set.
            const double alpha = 1.0 - 2.0 * cantor->gamma;
            const DimResult r = dim_fbm_cantor_drift(cfg.a, alpha, *cfg.hurst);
            rows.push_back(make_row(cfg, 0, "dim_fbm_cantor_drift_condition_ok",
                                    r.condition_ok ? 1.0 : 0.0));
            if (r.condition_ok)
                rows.push_back(make_row(cfg, 0, "dim_fbm_cantor_drift", r.value));
        }
    }
    return rows;
}

// ---- config plumbing -------------------------------------------------------

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

struct ParsedValues {
    ExperimentConfig cfg;
    int workers = 0;
    bool preset_given = false;
};

using ErrorSink = std::vector<std::string>*;

void record_or_throw(ErrorSink sink, const std::string& message) {
    if (sink != nullptr)
        sink->push_back(message);
    else
        throw usage_error(message);
}

template <typename Fn>
void parse_field(ErrorSink sink, const std::string& key, Fn&& fn) {
    try {
        fn();
    } catch (const std::exception& err) {
        record_or_throw(sink, "key '" + key + "': " + err.what());
    }
}

ParsedValues parse_values(const ConfigText& text, ErrorSink sink) {
    ParsedValues out;
    if (const char* env = std::getenv("FASTPOINTS_SEED"); env != nullptr) {
        parse_field(sink, "FASTPOINTS_SEED", [&] {
            out.cfg.master_seed = std::stoull(env);
        });
    }
    for (const auto& [key, raw] : text) {
        const std::string value = trim(raw);
        if (key == "preset") {
            const auto& names = preset_names();
            if (std::find(names.begin(), names.end(), value) == names.end()) {
                record_or_throw(sink, "unknown preset '" + value + "'");
                continue;
            }
            out.cfg.preset = value;
            out.preset_given = true;
        } else if (key == "seed") {
            parse_field(sink, key, [&] { out.cfg.master_seed = std::stoull(value); });
        } else if (key == "paths") {
            parse_field(sink, key, [&] { out.cfg.n_paths = std::stoll(value); });
        } else if (key == "levels") {
            parse_field(sink, key, [&] {
                const std::size_t colon = value.find(':');
                if (colon == std::string::npos)
                    throw usage_error("expected MIN:MAX");
                out.cfg.level_min = std::stoi(value.substr(0, colon));
                out.cfg.level_max = std::stoi(value.substr(colon + 1));
            });
        } else if (key == "a") {
            parse_field(sink, key, [&] { out.cfg.a = std::stod(value); });
        } else if (key == "epsilon") {
            parse_field(sink, key, [&] { out.cfg.epsilon = std::stod(value); });
        } else if (key == "drift") {
            parse_field(sink, key, [&] { out.cfg.drift = DriftSpec::parse(value); });
        } else if (key == "hurst") {
            parse_field(sink, key, [&] { out.cfg.hurst = std::stod(value); });
        } else if (key == "out") {
            out.cfg.output_path = value;
        } else if (key == "workers") {
            parse_field(sink, key, [&] { out.workers = std::stoi(value); });
        } else {
            record_or_throw(sink, "unknown config key '" + key + "'");
        }
    }
    // Preset-specific drift defaults keep bare invocations meaningful.
    if (out.cfg.drift.is_zero()) {
        if (out.cfg.preset == "cantor-drift" || out.cfg.preset == "dims")
            out.cfg.drift = DriftSpec::cantor(1.0 / 9.0, 24);
        else if (out.cfg.preset == "loud-drift")
            out.cfg.drift = DriftSpec::loud(0.4, 2, 24);
        else if (out.cfg.preset == "holder-sandwich")
            out.cfg.drift = DriftSpec::cantor(0.25, 24);
    }
    return out;
}

std::vector<std::string> invariant_violations(const ExperimentConfig& cfg,
                                              bool preset_given) {
    std::vector<std::string> bad;
    if (!preset_given) bad.push_back("preset is required");
    if (cfg.n_paths < 1) bad.push_back("paths must be >= 1");
    if (cfg.level_min < 2) bad.push_back("levels: minimum level must be >= 2");
    if (cfg.level_min > cfg.level_max)
        bad.push_back("levels: minimum exceeds maximum");
    if (cfg.level_max > 24) bad.push_back("levels: maximum must be <= 24");
    if (!(cfg.a >= 0.0)) bad.push_back("a must be >= 0");
    if (!(cfg.epsilon > -1.0)) bad.push_back("epsilon must be > -1");
    if (cfg.hurst && !(*cfg.hurst > 0.0 && *cfg.hurst < 1.0))
        bad.push_back("hurst must lie in (0, 1)");
    if (cfg.preset == "fbm" && cfg.level_max > 14)
        bad.push_back("fbm preset: level_max must be <= 14");
    if (cfg.preset == "covering" && cfg.level_min > cfg.level_max - 3)
        bad.push_back("covering preset: needs level_min <= level_max - 3");
    if (cfg.preset == "jlab" && cfg.n_paths < 100)
        bad.push_back("jlab preset: needs paths >= 100");
    if (cfg.preset == "limsup-variance" && cfg.n_paths < 200)
        bad.push_back("limsup-variance preset: needs paths >= 200");
    return bad;
}

}  // namespace

ConfigText load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw usage_error("cannot open config file " + path);
    ConfigText text;
    std::string line;
    while (std::getline(in, line)) {
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw usage_error("config line is not key = value: '" + line + "'");
        text.emplace_back(trim(stripped.substr(0, eq)),
                          trim(stripped.substr(eq + 1)));
    }
    return text;
}

void apply_override(ConfigText& text, const std::string& key,
                    const std::string& value) {
    text.emplace_back(key, value);
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {
        "orey-taylor",     "zero-intersection", "cantor-drift", "loud-drift",
        "fbm",             "holder-sandwich",   "covering",     "jlab",
        "limsup-variance", "dims"};
    return names;
}

ExperimentConfig parse_config(const ConfigText& text) {
    ParsedValues parsed = parse_values(text, nullptr);
    const std::vector<std::string> bad =
        invariant_violations(parsed.cfg, parsed.preset_given);
    if (!bad.empty()) throw usage_error("invalid config: " + bad.front());
    if (parsed.workers != 0) set_worker_count(parsed.workers);
    return parsed.cfg;
}

ValidationReport validate_config(const ConfigText& text) {
    ValidationReport report;
    ParsedValues parsed = parse_values(text, &report.violations);
    for (const std::string& v :
         invariant_violations(parsed.cfg, parsed.preset_given))
        report.violations.push_back(v);
    const ExperimentConfig& cfg = parsed.cfg;
    report.notes.push_back("preset = " +
                           (parsed.preset_given ? cfg.preset : "(unset)"));
    report.notes.push_back("seed = " + std::to_string(cfg.master_seed));
    report.notes.push_back("paths = " + std::to_string(cfg.n_paths));
    report.notes.push_back("levels = " + std::to_string(cfg.level_min) + ":" +
                           std::to_string(cfg.level_max));
    report.notes.push_back("a = " + fmt_double(cfg.a));
    report.notes.push_back("epsilon = " + fmt_double(cfg.epsilon));
    report.notes.push_back("drift = " + cfg.drift.describe());
    report.notes.push_back("hurst = " +
                           (cfg.hurst ? fmt_double(*cfg.hurst) : "(unset)"));
    report.notes.push_back("out = " +
                           (cfg.output_path.empty() ? "(stdout)" : cfg.output_path));
    report.ok = report.violations.empty();
    return report;
}

std::vector<ResultRow> run(const ExperimentConfig& cfg) {
    std::vector<ResultRow> rows;
    if (cfg.preset == "orey-taylor")
        rows = run_orey_taylor(cfg);
    else if (cfg.preset == "zero-intersection")
        rows = run_zero_intersection(cfg);
    else if (cfg.preset == "cantor-drift")
        rows = run_cantor_drift(cfg);
    else if (cfg.preset == "loud-drift")
        rows = run_loud_drift(cfg);
    else if (cfg.preset == "fbm")
        rows = run_fbm(cfg);
    else if (cfg.preset == "holder-sandwich")
        rows = run_holder_sandwich(cfg);
    else if (cfg.preset == "covering")
        rows = run_covering(cfg);
    else if (cfg.preset == "jlab")
        rows = run_jlab(cfg);
    else if (cfg.preset == "limsup-variance")
        rows = run_limsup_variance(cfg);
    else if (cfg.preset == "dims")
        rows = run_dims(cfg);
    else
        throw usage_error("unknown preset '" + cfg.preset + "'");

    const std::string csv = rows_to_csv(rows);
    if (cfg.output_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(cfg.output_path, std::ios::binary);
        if (!out) throw config_error("cannot open output file " + cfg.output_path);
        out << csv;
    }
    return rows;
}

std::string rows_to_csv(const std::vector<ResultRow>& rows) {
    std::string csv = "preset,level,stat,value,stderr,oracle,n_paths,seed\n";
    for (const ResultRow& row : rows) {
        if (!std::isfinite(row.value) || !std::isfinite(row.stderr_value) ||
            (row.oracle && !std::isfinite(*row.oracle)))
            throw numeric_error("CSV row '" + row.stat + "' has a nonfinite field");
        csv += row.preset;
        csv += ',';
        csv += std::to_string(row.level);
        csv += ',';
        csv += row.stat;
        csv += ',';
        csv += fmt_double(row.value);
        csv += ',';
        csv += fmt_double(row.stderr_value);
        csv += ',';
        if (row.oracle) csv += fmt_double(*row.oracle);
        csv += ',';
        csv += std::to_string(row.n_paths);
        csv += ',';
        csv += std::to_string(row.seed);
        csv += '\n';
    }
    return csv;
}

std::string flags_to_rle(const IntervalFlags& flags) {
    std::string out;
    char buf[160];
    const char* kind = "FAST_L";
    if (flags.flag_kind == FlagKind::FAST_SUP) kind = "FAST_SUP";
    if (flags.flag_kind == FlagKind::ZERO_NEAR) kind = "ZERO_NEAR";
    if (flags.flag_kind == FlagKind::INTERSECT) kind = "INTERSECT";
    std::snprintf(buf, sizeof(buf),
                  "level=%d kind=%s a=%.17g epsilon=%.17g c=%.17g theta=%.17g runs=",
                  flags.level, kind, flags.params.a, flags.params.epsilon,
                  flags.params.c, flags.params.theta);
    out = buf;
    const std::size_t n = flags.flags.size();
    std::size_t i = 0;
    bool first = true;
    while (i < n) {
        const bool bit = flags.flags.test(i);
        std::size_t j = i;
        while (j < n && flags.flags.test(j) == bit) ++j;
        std::snprintf(buf, sizeof(buf), "%s%d*%zu", first ? "" : ",", bit ? 1 : 0,
                      j - i);
        out += buf;
        first = false;
        i = j;
    }
    return out;
}

IntervalFlags parse_rle_flags(const std::string& text) {
    IntervalFlags flags;
    std::istringstream in(text);
    std::string token;
    std::string runs;
    while (in >> token) {
        const std::size_t eq = token.find('=');
        if (eq == std::string::npos)
            throw usage_error("flag text: expected key=value, got '" + token + "'");
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "level") {
                flags.level = std::stoi(value);
            } else if (key == "kind") {
                if (value == "FAST_L")
                    flags.flag_kind = FlagKind::FAST_L;
                else if (value == "FAST_SUP")
                    flags.flag_kind = FlagKind::FAST_SUP;
                else if (value == "ZERO_NEAR")
                    flags.flag_kind = FlagKind::ZERO_NEAR;
                else if (value == "INTERSECT")
                    flags.flag_kind = FlagKind::INTERSECT;
                else
                    throw usage_error("unknown kind '" + value + "'");
            } else if (key == "a") {
                flags.params.a = std::stod(value);
            } else if (key == "epsilon") {
                flags.params.epsilon = std::stod(value);
            } else if (key == "c") {
                flags.params.c = std::stod(value);
            } else if (key == "theta") {
                flags.params.theta = std::stod(value);
            } else if (key == "runs") {
                runs = value;
            } else {
                throw usage_error("unknown key '" + key + "'");
            }
        } catch (const usage_error&) {
            throw;
        } catch (const std::exception&) {
            throw usage_error("flag text: bad value in '" + token + "'");
        }
    }
    if (flags.level < 0 || flags.level > 30)
        throw usage_error("flag text: level out of range");
    const std::size_t expected = std::size_t{1} << flags.level;
    flags.flags = Bitset(expected);
    std::size_t pos = 0;
    std::istringstream rs(runs);
    std::string run;
    while (std::getline(rs, run, ',')) {
        const std::size_t star = run.find('*');
        if (star == std::string::npos)
            throw usage_error("flag text: run is not BIT*LEN: '" + run + "'");
        int bit = 0;
        std::size_t len = 0;
        try {
            bit = std::stoi(run.substr(0, star));
            len = static_cast<std::size_t>(std::stoull(run.substr(star + 1)));
        } catch (const std::exception&) {
            throw usage_error("flag text: bad run '" + run + "'");
        }
        if (bit != 0 && bit != 1)
            throw usage_error("flag text: run bit must be 0 or 1");
        if (pos + len > expected)
            throw usage_error("flag text: runs exceed 2^level bits");
        if (bit == 1)
            for (std::size_t k = 0; k < len; ++k) flags.flags.set(pos + k);
        pos += len;
    }
    if (pos != expected)
        throw usage_error("flag text: runs cover fewer than 2^level bits");
    return flags;
}

}  // namespace fastpoints
