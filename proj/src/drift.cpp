#include "fastpoints/drift.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <sstream>

#include "fastpoints/errors.hpp"

namespace fastpoints {

namespace {

double eval_tabulated(const DriftSpec::Tabulated& tab, double t) {
    const auto& xs = tab.t;
    const auto& ys = tab.v;
    if (t <= xs.front()) return ys.front();
    if (t >= xs.back()) return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), t);
    const std::size_t i = static_cast<std::size_t>(it - xs.begin());
    const double w = (t - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + w * (ys[i] - ys[i - 1]);
}

}  // namespace

DriftSpec DriftSpec::zero() { return DriftSpec{}; }

DriftSpec DriftSpec::linear(double c) {
    if (!std::isfinite(c)) throw config_error("linear drift: c must be finite");
    DriftSpec d;
    d.body_ = Linear{c};
    return d;
}

DriftSpec DriftSpec::cantor(double gamma, int depth) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw config_error("cantor drift: gamma must lie in (0, 1/2)");
    if (depth < 0) throw config_error("cantor drift: depth must be >= 0");
    DriftSpec d;
    d.body_ = Cantor{gamma, depth};
    return d;
}

DriftSpec DriftSpec::loud(double alpha, int big_a, int terms) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw config_error("loud drift: alpha must lie in (0,1)");
    if (big_a < 1) throw config_error("loud drift: A must be >= 1");
    if (terms < 1) throw config_error("loud drift: terms must be >= 1");
    if (!(2.0 * big_a * (1.0 - alpha) > 1.0))
        throw config_error("loud drift: requires 2A(1-alpha) > 1");
    DriftSpec d;
    d.body_ = Loud{alpha, big_a, terms};
    return d;
}

DriftSpec DriftSpec::tabulated(std::vector<double> t, std::vector<double> v) {
    if (t.size() != v.size() || t.size() < 2)
        throw config_error("tabulated drift: need >= 2 (t, value) rows");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1]))
            throw config_error("tabulated drift: t must be strictly increasing");
    for (double x : v)
        if (!std::isfinite(x))
            throw config_error("tabulated drift: values must be finite");
    DriftSpec d;
    d.body_ = Tabulated{std::move(t), std::move(v)};
    return d;
}

DriftSpec DriftSpec::load_tabulated(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("tabulated drift: cannot open " + path);
    std::vector<double> t, v;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        double a, b;
        if (row >> a >> b) {
            t.push_back(a);
            v.push_back(b);
        }
    }
    return tabulated(std::move(t), std::move(v));
}

double DriftSpec::operator()(double t) const {
    return std::visit(
        [t](const auto& d) -> double {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Zero>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, Linear>) {
                return d.c * t;
            } else if constexpr (std::is_same_v<T, Cantor>) {
                return cantor_value(d.gamma, d.depth, t);
            } else if constexpr (std::is_same_v<T, Loud>) {
                return loud_value(d.alpha, d.big_a, d.terms, t);
            } else {
                return eval_tabulated(d, t);
            }
        },
        body_);
}

std::string DriftSpec::describe() const {
    std::ostringstream out;
    std::visit(
        [&out](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, Zero>) {
                out << "zero";
            } else if constexpr (std::is_same_v<T, Linear>) {
                out << "linear:c=" << d.c;
            } else if constexpr (std::is_same_v<T, Cantor>) {
                out << "cantor:gamma=" << d.gamma << ",depth=" << d.depth;
            } else if constexpr (std::is_same_v<T, Loud>) {
                out << "loud:alpha=" << d.alpha << ",A=" << d.big_a
                    << ",terms=" << d.terms;
            } else {
                out << "tab:" << d.t.size() << "pts";
            }
        },
        body_);
    return out.str();
}

DriftSpec DriftSpec::parse(const std::string& text) {
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (kind == "zero") return zero();
    if (kind == "tab" || kind == "tabulated") {
        std::string path = rest;
        if (path.rfind("path=", 0) == 0) path.erase(0, 5);
        if (path.empty()) throw usage_error("drift tab: needs a file path");
        return load_tabulated(path);
    }

    // key=value pairs separated by commas
    double c = 0.0, gamma = 0.0, alpha = 0.0;
    int depth = 20, big_a = 0, terms = 8;
    bool have_c = false, have_gamma = false, have_alpha = false, have_a = false;
    std::istringstream parts(rest);
    std::string kv;
    while (std::getline(parts, kv, ',')) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw usage_error("drift spec: expected key=value, got '" + kv + "'");
        const std::string key = kv.substr(0, eq);
        const std::string val = kv.substr(eq + 1);
        try {
            if (key == "c") {
                c = std::stod(val);
                have_c = true;
            } else if (key == "gamma") {
                gamma = std::stod(val);
                have_gamma = true;
            } else if (key == "depth") {
                depth = std::stoi(val);
            } else if (key == "alpha") {
                alpha = std::stod(val);
                have_alpha = true;
            } else if (key == "A") {
                big_a = std::stoi(val);
                have_a = true;
            } else if (key == "terms") {
                terms = std::stoi(val);
            } else {
                throw usage_error("drift spec: unknown key '" + key + "'");
            }
        } catch (const std::invalid_argument&) {
            throw usage_error("drift spec: bad number in '" + kv + "'");
        }
    }

    if (kind == "linear") {
        if (!have_c) throw usage_error("drift linear: needs c=");
        return linear(c);
    }
    if (kind == "cantor") {
        if (!have_gamma) throw usage_error("drift cantor: needs gamma=");
        return cantor(gamma, depth);
    }
    if (kind == "loud") {
        if (!have_alpha || !have_a)
            throw usage_error("drift loud: needs alpha= and A=");
        return loud(alpha, big_a, terms);
    }
    throw usage_error("unknown drift kind '" + kind + "'");
}

// ---------------------------------------------------------------------------

double cantor_value(double gamma, int depth, double t) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw config_error("cantor_value: gamma must lie in (0, 1/2)");
    if (depth < 0) throw config_error("cantor_value: depth must be >= 0");
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double lo = 0.0, scale = 1.0;  // f = lo + scale * f_rec(t)
    while (depth > 0) {
        if (t < gamma) {
            t /= gamma;
        } else if (t <= 1.0 - gamma) {
            return lo + 0.5 * scale;
        } else {
            t = (t - (1.0 - gamma)) / gamma;
            lo += 0.5 * scale;
        }
        scale *= 0.5;
        --depth;
        if (t <= 0.0) return lo;
        if (t >= 1.0) return lo + scale;
    }
    return lo + scale * t;  // linear interpolation inside deepest components
}

IntervalList cantor_components(double gamma, int n) {
    if (!(gamma > 0.0 && gamma < 0.5))
        throw config_error("cantor_components: gamma must lie in (0, 1/2)");
    if (n < 0) throw config_error("cantor_components: n must be >= 0");
    if (n > 30 || std::pow(gamma, n) < DBL_MIN)
        throw std::range_error("cantor_components: gamma^n underflows at n=" +
                               std::to_string(n));
    IntervalList comps{{0.0, 1.0}};
    for (int g = 0; g < n; ++g) {
        IntervalList next;
        next.reserve(comps.size() * 2);
        for (const auto& [l, r] : comps) {
            const double len = r - l;
            next.emplace_back(l, l + gamma * len);
            next.emplace_back(r - gamma * len, r);
        }
        comps = std::move(next);
    }
    return comps;
}

double loud_value(double alpha, int big_a, int terms, double t) {
    if (!(alpha > 0.0 && alpha < 1.0) || big_a < 1 || terms < 1)
        throw config_error("loud_value: bad parameters");
    if (!(2.0 * big_a * (1.0 - alpha) > 1.0))
        throw config_error("loud_value: requires 2A(1-alpha) > 1");
    if (t < 0.0) throw config_error("loud_value: t must be >= 0");
    double sum = 0.0;
    for (int k = 1; k <= terms; ++k) {
        const double x = std::ldexp(t, 2 * big_a * k);  // 2^{2Ak} t, exact scaling
        const double g0 = std::fabs(x - 2.0 * std::round(0.5 * x));
        sum += std::exp2(-2.0 * big_a * alpha * k) * g0;
    }
    return sum;
}

double holder_coefficient(const DriftSpec& f, double theta, int grid_level) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw config_error("holder_coefficient: theta must lie in (0, 1]");
    if (grid_level < 1 || grid_level > 15)
        throw config_error("holder_coefficient: grid_level must lie in [1, 15]");
    const std::size_t n = (std::size_t{1} << grid_level) + 1;
    const double dt = std::ldexp(1.0, -grid_level);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(static_cast<double>(i) * dt);
    double best = 0.0;
    for (std::size_t d = 1; d < n; ++d) {
        double big = 0.0;
        for (std::size_t i = 0; i + d < n; ++i)
            big = std::max(big, std::fabs(v[i + d] - v[i]));
        best = std::max(best, big / std::pow(static_cast<double>(d) * dt, theta));
    }
    return best;
}

std::optional<double> reverse_holder_witness(const DriftSpec& f, double beta,
                                             double c, double t, double h_max,
                                             int grid_level) {
    if (!(beta > 0.0 && beta < 1.0))
        throw config_error("reverse_holder_witness: beta must lie in (0,1)");
    if (!(c > 0.0)) throw config_error("reverse_holder_witness: c must be > 0");
    if (grid_level < 1 || grid_level > 40)
        throw config_error("reverse_holder_witness: grid_level out of range");
    const double dt = std::ldexp(1.0, -grid_level);
    // Trim the scan so t + h stays inside [0, 1].
    const double reach = std::min(h_max, 1.0 - t);
    const auto jmax = static_cast<long long>(std::floor(reach / dt));
    const double ft = f(t);
    for (long long j = 1; j <= jmax; ++j) {
        const double h = static_cast<double>(j) * dt;
        if (std::fabs(f(t + h) - ft) >= c * std::pow(h, beta)) return h;
    }
    return std::nullopt;
}

SignClass sign_set_indicator(const DriftSpec& f, double h, double t) {
    if (!(h > 0.0)) throw config_error("sign_set_indicator: h must be > 0");
    if (!(t >= 0.0 && t <= 1.0))
        throw config_error("sign_set_indicator: t must lie in [0, 1]");
    const double d = f(t + h) - f(t);
    if (d > 0.0) return SignClass::PLUS;
    if (d < 0.0) return SignClass::MINUS;
    return SignClass::BOTH;
}

}  // namespace fastpoints
