#include "fastpoints/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "fastpoints/detector.hpp"
#include "fastpoints/errors.hpp"
#include "fastpoints/parallel.hpp"
#include "fastpoints/path_sampler.hpp"
#include "fastpoints/rng.hpp"
#include "fastpoints/stats.hpp"

namespace fastpoints {

namespace {
constexpr double kMassTolerance = 1e-12;
constexpr double kSingleAtomGap = 9.5367431640625e-07;  // 2^-20
}  // namespace

DiscreteMeasure::DiscreteMeasure(std::vector<std::pair<double, double>> atoms,
                                 std::string label)
    : label_(std::move(label)) {
    if (atoms.empty()) throw config_error("DiscreteMeasure: no atoms");
    t_.reserve(atoms.size());
    w_.reserve(atoms.size());
    double sum = 0.0;
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [pos, weight] : atoms) {
        if (!(pos >= 0.0 && pos <= 1.0))
            throw config_error("DiscreteMeasure: atom position outside [0,1]");
        if (!(pos > prev))
            throw config_error("DiscreteMeasure: positions must strictly increase");
        if (!(weight > 0.0))
            throw config_error("DiscreteMeasure: weights must be positive");
        prev = pos;
        t_.push_back(pos);
        w_.push_back(weight);
        sum += weight;
    }
    if (std::fabs(sum - 1.0) > kMassTolerance)
        throw config_error("DiscreteMeasure: total mass differs from 1 beyond 1e-12");
    prefix_.resize(t_.size() + 1, 0.0);
    for (std::size_t i = 0; i < t_.size(); ++i) prefix_[i + 1] = prefix_[i] + w_[i];
}

double DiscreteMeasure::mass_closed(double lo, double hi) const {
    if (hi < lo) return 0.0;
    const auto first = std::lower_bound(t_.begin(), t_.end(), lo) - t_.begin();
    const auto last = std::upper_bound(t_.begin(), t_.end(), hi) - t_.begin();
    return prefix_[static_cast<std::size_t>(last)] -
           prefix_[static_cast<std::size_t>(first)];
}

double DiscreteMeasure::min_gap() const {
    if (t_.size() < 2) return kSingleAtomGap;
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < t_.size(); ++i) gap = std::min(gap, t_[i] - t_[i - 1]);
    return gap;
}

DiscreteMeasure cantor_natural_measure(double gamma, int n) {
    if (n < 0) throw config_error("cantor_natural_measure: n must be >= 0");
    const IntervalList comps = cantor_components(gamma, n);
    const double weight = std::ldexp(1.0, -n);
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(comps.size());
    for (const auto& [lo, hi] : comps) atoms.emplace_back(0.5 * (lo + hi), weight);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "cantor:gamma=%.9g,n=%d", gamma, n);
    return DiscreteMeasure(std::move(atoms), buf);
}

DiscreteMeasure lebesgue_proxy_measure(int level) {
    if (level < 0 || level > 24)
        throw config_error("lebesgue_proxy_measure: level must lie in [0, 24]");
    const std::size_t n = std::size_t{1} << level;
    const double weight = std::ldexp(1.0, -level);
    std::vector<std::pair<double, double>> atoms;
    atoms.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        atoms.emplace_back((static_cast<double>(k) + 0.5) * weight, weight);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "lebesgue:level=%d", level);
    return DiscreteMeasure(std::move(atoms), buf);
}

DiscreteMeasure load_measure(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("load_measure: cannot open " + path);
    std::vector<std::pair<double, double>> atoms;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double pos = 0.0, weight = 0.0;
        if (!(row >> pos >> weight))
            throw config_error("load_measure: malformed line '" + line + "'");
        atoms.emplace_back(pos, weight);
    }
    double sum = 0.0;
    for (const auto& [pos, weight] : atoms) {
        (void)pos;
        sum += weight;
    }
    if (!(sum > 0.0)) throw config_error("load_measure: nonpositive total mass");
    for (auto& [pos, weight] : atoms) {
        (void)pos;
        weight /= sum;
    }
    return DiscreteMeasure(std::move(atoms), path);
}

void save_measure(const DiscreteMeasure& mu, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw config_error("save_measure: cannot open " + path);
    char buf[64];
    for (std::size_t i = 0; i < mu.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", mu.t(i), mu.w(i));
        out << buf;
    }
}

double a_eta(const DiscreteMeasure& mu, double eta, const std::vector<int>& h_levels,
             int t_grid_level) {
    if (!(eta > 0.0)) throw config_error("a_eta: eta must be > 0");
    if (t_grid_level < 1 || t_grid_level > 30)
        throw config_error("a_eta: t_grid_level must lie in [1, 30]");
    const double grid = std::ldexp(1.0, -t_grid_level);
    const double scale = std::ldexp(1.0, t_grid_level);
    double best = 0.0;
    for (int l : h_levels) {
        const double h = std::ldexp(1.0, -l);
        if (h > 0.5) continue;
        const auto k_lo = static_cast<std::int64_t>(std::ceil(h * scale));
        const auto k_hi = static_cast<std::int64_t>(std::floor((1.0 - h) * scale));
        if (k_lo > k_hi) continue;
        // The grid maximum of mass[t-h, t+h] is attained either at the left
        // boundary of the t range or at the first grid t whose window has just
        // gained an atom on the right; window-exit points are added alongside
        // as inexpensive insurance against floating rounding at run edges.
        std::vector<std::int64_t> candidates;
        candidates.reserve(2 * mu.size() + 2);
        candidates.push_back(k_lo);
        candidates.push_back(k_hi);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            candidates.push_back(
                static_cast<std::int64_t>(std::ceil((mu.t(i) - h) * scale)));
            candidates.push_back(
                static_cast<std::int64_t>(std::floor((mu.t(i) + h) * scale)));
        }
        const double inv_heta = std::pow(h, -eta);
        for (std::int64_t k : candidates) {
            if (k < k_lo || k > k_hi) continue;
            const double t = static_cast<double>(k) * grid;
            best = std::max(best, mu.mass_closed(t - h, t + h) * inv_heta);
        }
    }
    return best;
}

namespace {

// Shared supremum search for the singular integrals: candidates for s are 0
// and each atom position minus the measure's minimal gap (the discrete
// integral jumps upward as s approaches an atom from below).
double singular_sup(const DiscreteMeasure& mu, double h, bool tilde) {
    if (!(h > 0.0 && h <= 1.0))
        throw config_error("singular integral: h must lie in (0, 1]");
    const double eps = mu.min_gap();
    const double s_max = tilde ? 1.0 : h;
    std::vector<double> candidates{0.0};
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double s = mu.t(i) - eps;
        if (s >= 0.0 && s <= s_max) candidates.push_back(s);
    }
    const auto& pos = mu.positions();
    double best = 0.0;
    for (double s : candidates) {
        const double cap = tilde ? std::min(s + h, 1.0) : h;
        auto i = static_cast<std::size_t>(
            std::upper_bound(pos.begin(), pos.end(), s) - pos.begin());
        double sum = 0.0;
        for (; i < pos.size() && pos[i] <= cap; ++i)
            sum += mu.w(i) / std::sqrt(pos[i] - s);
        best = std::max(best, sum);
    }
    return best;
}

}  // namespace

double s_h(const DiscreteMeasure& mu, double h) { return singular_sup(mu, h, false); }

double s_tilde_h(const DiscreteMeasure& mu, double h) {
    return singular_sup(mu, h, true);
}

double energy(const DiscreteMeasure& mu, double e) {
    if (!(e >= 0.0)) throw config_error("energy: exponent must be >= 0");
    double sum = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        for (std::size_t j = i + 1; j < mu.size(); ++j) {
            const double gap = mu.t(j) - mu.t(i);
            if (!(gap > 0.0))
                throw degenerate_measure_error("energy: coincident atoms");
            sum += 2.0 * mu.w(i) * mu.w(j) * std::pow(gap, -e);
        }
    }
    return sum;
}

SignSet select_sign_set(const DriftSpec& f, double h, const DiscreteMeasure& mu) {
    double mass_minus = 0.0, mass_plus = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        const double diff = f(mu.t(i) + h) - f(mu.t(i));
        if (diff <= 0.0) mass_minus += mu.w(i);
        if (diff >= 0.0) mass_plus += mu.w(i);
    }
    return mass_minus >= mass_plus ? SignSet::MINUS : SignSet::PLUS;
}

JEstimate j_mu_estimate(std::uint64_t master_seed, std::int64_t n_paths, int level,
                        const DiscreteMeasure& mu, double h, double a,
                        const DriftSpec& f) {
    if (n_paths < 100) throw config_error("j_mu_estimate: need n_paths >= 100");
    if (!(a >= 0.0)) throw config_error("j_mu_estimate: a must be >= 0");
    const double dt = std::ldexp(1.0, -level);
    if (!(h > 0.0 && h < 1.0))
        throw config_error("j_mu_estimate: h must lie in (0, 1)");
    if (h < dt) throw resolution_error("j_mu_estimate: h below grid resolution");
    const auto d = static_cast<std::int64_t>(std::llround(h / dt));
    const double h_snap = static_cast<double>(d) * dt;
    if (d < 1 || std::fabs(h_snap - h) >= h / 8.0)
        throw resolution_error("j_mu_estimate: h does not sit on the level grid");

    const std::size_t n_atoms = mu.size();
    std::vector<std::int64_t> idx(n_atoms);
    std::vector<double> drift_at_atom(n_atoms);
    for (std::size_t i = 0; i < n_atoms; ++i) {
        const auto k = static_cast<std::int64_t>(std::llround(mu.t(i) / dt));
        const double snapped = static_cast<double>(k) * dt;
        if (std::fabs(snapped - mu.t(i)) >= h_snap / 8.0)
            throw resolution_error(
                "j_mu_estimate: atom snap displacement reaches h/8; refuse");
        idx[i] = k;
        drift_at_atom[i] = f(snapped);
    }

    const SignSet dir = select_sign_set(f, h_snap, mu);
    const double sign = dir == SignSet::MINUS ? 1.0 : -1.0;
    const double threshold = fast_threshold(a, h_snap);

    std::vector<double> j_per_path(static_cast<std::size_t>(n_paths), 0.0);
    parallel_for(static_cast<std::size_t>(n_paths), [&](std::size_t p) {
        const std::uint64_t seed = derive_seed(master_seed, p);
        const SamplePath path = sample_bm(seed, level);
        const double* v = path.values.data();
        double acc = 0.0;
        for (std::size_t i = 0; i < n_atoms; ++i) {
            const std::int64_t k = idx[i];
            if (std::fabs(v[k] - drift_at_atom[i]) < h_snap &&
                sign * (v[k + d] - v[k]) > threshold)
                acc += mu.w(i);
        }
        j_per_path[p] = acc;
    });

    JEstimate est;
    est.n_paths = n_paths;
    double positive = 0.0;
    for (double j : j_per_path) {
        est.ej += j;
        est.ej2 += j * j;
        est.ej3 += j * j * j;
        est.ej4 += j * j * j * j;
        if (j > 0.0) positive += 1.0;
    }
    const auto n = static_cast<double>(n_paths);
    est.ej /= n;
    est.ej2 /= n;
    est.ej3 /= n;
    est.ej4 /= n;
    est.p_positive = positive / n;
    est.pz_lower = est.ej2 > 0.0 ? est.ej * est.ej / est.ej2 : 0.0;
    const double var = std::max(0.0, est.ej2 - est.ej * est.ej) * n / (n - 1.0);
    est.stderr_ej = std::sqrt(var / n);
    return est;
}

PzReport paley_zygmund_check(const JEstimate& est) {
    PzReport report;
    if (est.n_paths < 2 || !(est.ej2 > 0.0)) {
        report.inconclusive = true;
        report.note = "degenerate ensemble: no positive second moment";
        return report;
    }
    const auto n = static_cast<double>(est.n_paths);
    const double m1 = est.ej, m2 = est.ej2;
    // Delta method for pz = m1^2/m2 from the sampling covariance of the
    // empirical moments (population-moment plug-ins; adequate at n >= 100).
    const double v11 = (est.ej2 - m1 * m1) / n;
    const double v12 = (est.ej3 - m1 * m2) / n;
    const double v22 = (est.ej4 - m2 * m2) / n;
    const double g1 = 2.0 * m1 / m2;
    const double g2 = -m1 * m1 / (m2 * m2);
    const double var_pz =
        std::max(0.0, g1 * g1 * v11 + 2.0 * g1 * g2 * v12 + g2 * g2 * v22);
    const double var_pp = est.p_positive * (1.0 - est.p_positive) / n;
    report.margin = est.p_positive - est.pz_lower;
    report.se_margin = std::sqrt(var_pz + var_pp);
    report.ok = report.margin >= -3.0 * report.se_margin;
    report.note = report.ok ? "second-moment lower bound respected"
                            : "positivity below second-moment bound";
    return report;
}

}  // namespace fastpoints
