#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace fastpoints {

// Ordered disjoint closed subintervals of [0,1].
using Interval = std::pair<double, double>;
using IntervalList = std::vector<Interval>;

// ---------------------------------------------------------------------------
// Deterministic drift functions f : [0,2] -> R subtracted from sample paths.
//
// Variants:
//   Zero                   f = 0
//   Linear(c)              f(t) = c*t
//   Cantor(gamma, depth)   depth-th approximation of the middle-(1-2*gamma)
//                          Cantor function, extended constantly at 1 for t>1
//   Loud(alpha, A, terms)  lacunary triangle-wave series with a pointwise
//                          reverse-Hoelder lower bound; needs 2A(1-alpha) > 1
//   Tabulated              two-column table at strictly increasing dyadic t,
//                          piecewise-linear, clamped outside the table range
// ---------------------------------------------------------------------------

class DriftSpec {
public:
    struct Zero {};
    struct Linear {
        double c;
    };
    struct Cantor {
        double gamma;
        int depth;
    };
    struct Loud {
        double alpha;
        int big_a;
        int terms;
    };
    struct Tabulated {
        std::vector<double> t;
        std::vector<double> v;
    };

    DriftSpec() : body_(Zero{}) {}

    static DriftSpec zero();
    static DriftSpec linear(double c);
    static DriftSpec cantor(double gamma, int depth);        // 0 < gamma < 1/2
    static DriftSpec loud(double alpha, int big_a, int terms);
    static DriftSpec tabulated(std::vector<double> t, std::vector<double> v);

    // Loads a two-column (t, f(t)) text table; '#' starts a comment line.
    static DriftSpec load_tabulated(const std::string& path);

    double operator()(double t) const;

    bool is_zero() const { return std::holds_alternative<Zero>(body_); }
    const Cantor* as_cantor() const { return std::get_if<Cantor>(&body_); }
    const Loud* as_loud() const { return std::get_if<Loud>(&body_); }

    // Short text form, e.g. "cantor:gamma=0.25,depth=20"; parse() inverts it.
    std::string describe() const;
    static DriftSpec parse(const std::string& text);

private:
    std::variant<Zero, Linear, Cantor, Loud, Tabulated> body_;
};

// Depth-th approximation of the middle-(1-2*gamma) Cantor function: the
// recursion halves across the two retained pieces and is linear inside
// generation-depth components; 0 for t<=0 and 1 for t>=1.
double cantor_value(double gamma, int depth, double t);

// The 2^n generation-n components of the middle-(1-2*gamma) Cantor set,
// sorted, each of length gamma^n.
IntervalList cantor_components(double gamma, int n);

// Partial sum of the lacunary triangle-wave series
//   sum_{k=1}^{terms} 2^{-2*A*alpha*k} g0(2^{2*A*k} t),
// g0 the unit triangle wave (0 at even integers, 1 at odd, linear between).
double loud_value(double alpha, int big_a, int terms, double t);

// Max of |f(t)-f(s)| / |t-s|^theta over all distinct grid pairs in [0,1] at
// resolution 2^-grid_level.  A lower bound for the true Hoelder coefficient;
// grid-refinement stability is the caller's evidence that it is close.
double holder_coefficient(const DriftSpec& f, double theta, int grid_level);

// Smallest grid step h = j*2^-grid_level <= h_max with
// |f(t+h)-f(t)| >= c*h^beta, scanning j upward; nullopt if no grid h works.
// The scan is trimmed so t+h never leaves [0,1].
std::optional<double> reverse_holder_witness(const DriftSpec& f, double beta,
                                             double c, double t, double h_max,
                                             int grid_level);

enum class SignClass { PLUS, MINUS, BOTH };

// Sign of the forward difference f(t+h)-f(t): PLUS if strictly positive,
// MINUS if strictly negative, BOTH if exactly zero (t belongs to both
// closed sign sets).
SignClass sign_set_indicator(const DriftSpec& f, double h, double t);

}  // namespace fastpoints
