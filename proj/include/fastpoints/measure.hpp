#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fastpoints/drift.hpp"

namespace fastpoints {

// Discrete probability measure on [0,1]: finitely many weighted atoms at
// strictly increasing positions, total mass 1 within 1e-12.  Stands in for
// the atomless Frostman-type measures of the analysis; every supremum-type
// functional computed from it is a grid lower bound and is documented as such.
class DiscreteMeasure {
 public:
    // atoms: (position, weight) pairs, positions in [0,1] strictly increasing,
    // weights > 0 summing to 1 within 1e-12.  Violations -> config error.
    DiscreteMeasure(std::vector<std::pair<double, double>> atoms, std::string label);

    std::size_t size() const { return t_.size(); }
    double t(std::size_t i) const { return t_[i]; }
    double w(std::size_t i) const { return w_[i]; }
    const std::vector<double>& positions() const { return t_; }
    const std::vector<double>& weights() const { return w_; }
    const std::string& label() const { return label_; }

    // Mass of the closed interval [lo, hi].
    double mass_closed(double lo, double hi) const;

    // Smallest gap between adjacent atoms; 2^-20 for a single atom.  Used as
    // the approach-from-below epsilon in the singular-integral suprema.
    double min_gap() const;

 private:
    std::vector<double> t_;
    std::vector<double> w_;
    std::vector<double> prefix_;  // prefix_[i] = sum of w_[0..i)
    std::string label_;
};

// Weight 2^-n at the midpoint of each generation-n Cantor component.
DiscreteMeasure cantor_natural_measure(double gamma, int n);

// Uniform weights 2^-level at cell midpoints (k+1/2)*2^-level: a discrete
// proxy for Lebesgue measure on [0,1].
DiscreteMeasure lebesgue_proxy_measure(int level);

// Two-column text (t w) persistence.  Loading normalizes total mass to 1
// before validating the remaining invariants.
DiscreteMeasure load_measure(const std::string& path);
void save_measure(const DiscreteMeasure& mu, const std::string& path);

// Frostman statistic: max over h = 2^-l (l in h_levels, h <= 1/2) and grid
// t in [h, 1-h] at resolution 2^-t_grid_level of mu[t-h, t+h] / h^eta.
// A lower bound for the continuum supremum at the stated resolution.
double a_eta(const DiscreteMeasure& mu, double eta, const std::vector<int>& h_levels,
             int t_grid_level);

// Singular-kernel integrals sup_s sum_{s < t_i <= cap} w_i / sqrt(t_i - s):
// s_h caps at h with s in [0, h]; s_tilde_h caps at min(s+h, 1) with s in
// [0, 1].  The supremum over s is searched on {0} union {atom - min_gap},
// where the discrete maximizers sit.
double s_h(const DiscreteMeasure& mu, double h);
double s_tilde_h(const DiscreteMeasure& mu, double h);

// Off-diagonal energy sum_{i != j} w_i w_j |t_i - t_j|^{-e}.
double energy(const DiscreteMeasure& mu, double e);

// Direction of the drift-increment event: MINUS when the mu-mass of
// {t : f(t+h) - f(t) <= 0} is at least the mass of {t : f(t+h) - f(t) >= 0},
// ties resolved to MINUS.  The chosen set always carries mass >= 1/2.
enum class SignSet { MINUS, PLUS };
SignSet select_sign_set(const DriftSpec& f, double h, const DiscreteMeasure& mu);

// Ensemble summary of the J functional.
struct JEstimate {
    double ej = 0.0;          // mean of J over paths
    double ej2 = 0.0;         // mean of J^2
    double ej3 = 0.0;         // mean of J^3 (error propagation)
    double ej4 = 0.0;         // mean of J^4 (error propagation)
    double p_positive = 0.0;  // fraction of paths with J > 0
    double pz_lower = 0.0;    // ej^2 / ej2 when ej2 > 0, else 0
    std::int64_t n_paths = 0;
    double stderr_ej = 0.0;   // standard error of the mean of J
};

// Monte Carlo estimate of J = sum_i w_i * [|B(s_i) - f(s_i)| < h] * [K_a],
// where K_a is the one-sided Brownian increment event over [s_i, s_i + h]
// in the direction chosen by select_sign_set (MINUS: increment > threshold;
// PLUS: increment < -threshold).  Atom times and h snap to the level grid;
// any snap displacement must stay below h/8 or the estimate refuses.
JEstimate j_mu_estimate(std::uint64_t master_seed, std::int64_t n_paths, int level,
                        const DiscreteMeasure& mu, double h, double a,
                        const DriftSpec& f);

struct PzReport {
    double margin = 0.0;     // p_positive - pz_lower
    double se_margin = 0.0;  // propagated standard error of the margin
    bool ok = false;         // margin >= -3 * se_margin
    bool inconclusive = false;
    std::string note;
};

// Checks the second-moment positivity bound P(J > 0) >= (EJ)^2 / E(J^2)
// against the ensemble, with the bound's sampling error propagated by the
// delta method from the first four moments.
PzReport paley_zygmund_check(const JEstimate& est);

}  // namespace fastpoints
