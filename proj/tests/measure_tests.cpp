#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fastpoints/drift.hpp"
#include "fastpoints/errors.hpp"
#include "fastpoints/measure.hpp"
#include "fastpoints/rng.hpp"
#include "fastpoints/stats.hpp"

using namespace fastpoints;

namespace {

using Atoms = std::vector<std::pair<double, double>>;

std::vector<int> range_levels(int lo, int hi) {
    std::vector<int> out;
    for (int l = lo; l <= hi; ++l) out.push_back(l);
    return out;
}

}  // namespace

TEST_CASE("DiscreteMeasure enforces its invariants") {
    CHECK_NOTHROW(DiscreteMeasure(Atoms{{0.25, 0.5}, {0.75, 0.5}}, "ok"));
    CHECK_THROWS_AS(DiscreteMeasure(Atoms{}, "empty"), config_error);
    CHECK_THROWS_AS(DiscreteMeasure(Atoms{{0.5, 0.5}}, "short mass"),
                    config_error);
    CHECK_THROWS_AS(DiscreteMeasure(Atoms{{0.6, 0.5}, {0.4, 0.5}}, "order"),
                    config_error);
    CHECK_THROWS_AS(DiscreteMeasure(Atoms{{0.4, 1.2}, {0.6, -0.2}}, "sign"),
                    config_error);
    CHECK_THROWS_AS(DiscreteMeasure(Atoms{{0.5, 0.5}, {1.5, 0.5}}, "range"),
                    config_error);

    const DiscreteMeasure mu(Atoms{{0.2, 0.25}, {0.4, 0.25}, {0.9, 0.5}}, "m");
    CHECK(mu.size() == 3);
    CHECK(mu.t(1) == 0.4);
    CHECK(mu.w(2) == 0.5);
    CHECK(mu.mass_closed(0.0, 0.5) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(mu.mass_closed(0.4, 0.4) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mu.mass_closed(0.41, 0.89) == 0.0);
    CHECK(mu.min_gap() == doctest::Approx(0.2).epsilon(1e-15));
}

TEST_CASE("cantor_natural_measure generations and mass") {
    const DiscreteMeasure m0 = cantor_natural_measure(0.3, 0);
    CHECK(m0.size() == 1);
    CHECK(m0.t(0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(m0.w(0) == 1.0);

    const double gamma = 0.3;
    const DiscreteMeasure m1 = cantor_natural_measure(gamma, 1);
    CHECK(m1.size() == 2);
    CHECK(m1.t(0) == doctest::Approx(gamma / 2.0).epsilon(1e-15));
    CHECK(m1.t(1) == doctest::Approx(1.0 - gamma / 2.0).epsilon(1e-15));
    CHECK(m1.w(0) == 0.5);

    const DiscreteMeasure m8 = cantor_natural_measure(0.25, 8);
    CHECK(m8.size() == 256);
    double total = 0.0;
    for (std::size_t i = 0; i < m8.size(); ++i) total += m8.w(i);
    CHECK(total == 1.0);  // 256 * 2^-8, exact in binary

    CHECK_THROWS_AS(cantor_natural_measure(0.25, 40), std::range_error);
    CHECK_THROWS_AS(cantor_natural_measure(0.5, 3), config_error);
}

TEST_CASE("lebesgue_proxy_measure is the uniform cell-midpoint measure") {
    const DiscreteMeasure mu = lebesgue_proxy_measure(6);
    CHECK(mu.size() == 64);
    CHECK(mu.t(0) == doctest::Approx(std::ldexp(1.0, -7)).epsilon(1e-15));
    CHECK(mu.w(0) == std::ldexp(1.0, -6));
    CHECK_THROWS_AS(lebesgue_proxy_measure(25), config_error);
}

TEST_CASE("a_eta on the Lebesgue proxy at eta=1 is about 2") {
    const DiscreteMeasure mu = lebesgue_proxy_measure(10);
    const double a = a_eta(mu, 1.0, range_levels(1, 8), 10);
    CHECK(a >= 1.9);
    CHECK(a <= 2.1);
}

TEST_CASE("a_eta with a single atom is h_min^-eta") {
    const DiscreteMeasure mu(Atoms{{0.5, 1.0}}, "point");
    const double a = a_eta(mu, 0.7, {1, 2, 3}, 6);
    CHECK(a == doctest::Approx(std::pow(8.0, 0.7)).epsilon(1e-12));
}

TEST_CASE("a_eta of the Cantor measure at its dimension is stable") {
    const DiscreteMeasure mu = cantor_natural_measure(0.25, 8);
    const double shallow = a_eta(mu, 0.5, range_levels(1, 8), 14);
    const double deep = a_eta(mu, 0.5, range_levels(1, 12), 14);
    CHECK(deep >= shallow);          // more candidate scales only raise the max
    CHECK(deep <= 2.0 * shallow);    // but the statistic has converged
    CHECK(shallow >= 1.0);
    CHECK(shallow <= 2.0);
}

TEST_CASE("singular integrals on degenerate and uniform measures") {
    const DiscreteMeasure point(Atoms{{1.0, 1.0}}, "end");
    CHECK(s_h(point, 0.5) == 0.0);  // no atoms at or below 1/2
    // From s = 1 - 2^-20 the lone atom contributes 1/sqrt(2^-20) exactly.
    CHECK(s_tilde_h(point, 0.5) == 1024.0);

    const DiscreteMeasure mu = lebesgue_proxy_measure(10);
    const double s = s_h(mu, 0.25);
    CHECK(std::fabs(s - 1.0) <= 0.05);  // Riemann sum of 2*sqrt(h)
    CHECK(s == doctest::Approx(0.981097).epsilon(0.01));

    CHECK_THROWS_AS(s_h(mu, 0.0), config_error);
    CHECK_THROWS_AS(s_tilde_h(mu, 1.5), config_error);
}

TEST_CASE("singular integrals obey the Frostman upper bound") {
    for (double gamma : {0.25, 1.0 / 9.0}) {
        const DiscreteMeasure mu = cantor_natural_measure(gamma, 8);
        for (double eta : {0.55, 0.6}) {
            const double a = a_eta(mu, eta, range_levels(1, 16), 16);
            const double front = 2.0 * std::exp(eta) / (2.0 * eta - 1.0);
            for (int l = 4; l <= 10; ++l) {
                const double h = std::ldexp(1.0, -l);
                const double bound = front * a * std::pow(h, eta - 0.5);
                CHECK(s_h(mu, h) <= bound);
                CHECK(s_tilde_h(mu, h) <= bound);
            }
        }
    }
}

TEST_CASE("energy closed forms and growth") {
    const DiscreteMeasure two(Atoms{{0.0, 0.5}, {1.0, 0.5}}, "pair");
    CHECK(energy(two, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

    const DiscreteMeasure tri(Atoms{{0.1, 0.5}, {0.3, 0.25}, {0.8, 0.25}}, "t");
    CHECK(energy(tri, 0.0) ==
          doctest::Approx(1.0 - (0.25 + 0.0625 + 0.0625)).epsilon(1e-15));

    // e-energy below the carrier dimension stays bounded as the measure
    // refines; successive generations grow by a shrinking factor.
    double prev = energy(cantor_natural_measure(0.25, 4), 0.4);
    const double first = prev;
    for (int n = 5; n <= 8; ++n) {
        const double cur = energy(cantor_natural_measure(0.25, n), 0.4);
        CHECK(cur / prev <= 1.5);
        CHECK(cur >= prev);
        prev = cur;
    }
    CHECK(prev / first < 1.65);

    // Monotone in the exponent when every pairwise gap is <= 1.
    CHECK(energy(tri, 0.3) <= energy(tri, 0.5));
    CHECK(energy(tri, 0.5) <= energy(tri, 0.8));
    CHECK_THROWS_AS(energy(tri, -0.5), config_error);
}

TEST_CASE("gaussian_tail_q values and the Mills sandwich") {
    CHECK(gaussian_tail_q(0.0) == 0.5);
    CHECK(gaussian_tail_q(1.0) ==
          doctest::Approx(0.15865525393145707).epsilon(1e-12));
    const double lhs2 = (2.0 / 5.0) * std::exp(-2.0);
    const double rhs2 = std::sqrt(2.0 * M_PI) * gaussian_tail_q(2.0);
    CHECK(lhs2 == doctest::Approx(0.05413411329464508).epsilon(1e-12));
    CHECK(rhs2 == doctest::Approx(0.05702612399289207).epsilon(1e-12));
    CHECK(lhs2 <= rhs2);

    for (int k = 0; k <= 118; ++k) {
        const double x = 0.1 + 0.05 * k;
        const double core = std::exp(-x * x / 2.0);
        const double mid = std::sqrt(2.0 * M_PI) * gaussian_tail_q(x);
        CHECK(x / (x * x + 1.0) * core <= mid);
        CHECK(mid <= core / x);
    }
}

TEST_CASE("phi values and its explicit lower bound") {
    CHECK(phi(0.3, 0.0) == 0.5);
    CHECK(phi(std::exp(-1.0), 1.0) ==
          doctest::Approx(0.07864960352514258).epsilon(1e-12));

    const double h = std::ldexp(1.0, -8);
    const double a = 0.5;
    const double val = phi(h, a);
    const double lg = std::log(1.0 / h);
    const double bound = std::pow(h, a * a) * a * std::sqrt(lg) /
                         (std::sqrt(M_PI) * (2.0 * a * a * lg + 1.0));
    CHECK(val == doctest::Approx(0.04794548357123273).epsilon(1e-12));
    CHECK(bound == doctest::Approx(0.04402033452201864).epsilon(1e-12));
    CHECK(val >= bound);
    CHECK_THROWS_AS(phi(1.0, 0.5), config_error);
}

TEST_CASE("select_sign_set direction and tie rule") {
    const DiscreteMeasure mu = lebesgue_proxy_measure(5);
    CHECK(select_sign_set(DriftSpec::zero(), 0.25, mu) == SignSet::MINUS);
    CHECK(select_sign_set(DriftSpec::linear(1.0), 0.25, mu) == SignSet::PLUS);
    CHECK(select_sign_set(DriftSpec::linear(-1.0), 0.25, mu) == SignSet::MINUS);
}

TEST_CASE("select_sign_set always keeps at least half the mass") {
    for (int i = 0; i < 100; ++i) {
        DriftSpec f;
        switch (i % 3) {
            case 0: f = DriftSpec::linear(4.0 * uniform(6101, i) - 2.0); break;
            case 1:
                f = DriftSpec::cantor(0.05 + 0.4 * uniform(6102, i), 12);
                break;
            default: f = DriftSpec::loud(0.4, 2, 20); break;
        }
        const double h = 0.01 + 0.48 * uniform(6103, i);
        const DiscreteMeasure mu =
            (i % 2) ? lebesgue_proxy_measure(5)
                    : cantor_natural_measure(0.1 + 0.3 * uniform(6104, i), 5);
        const SignSet side = select_sign_set(f, h, mu);
        double mass = 0.0;
        for (std::size_t q = 0; q < mu.size(); ++q) {
            const double d = f(mu.t(q) + h) - f(mu.t(q));
            if (side == SignSet::MINUS ? d <= 0.0 : d >= 0.0) mass += mu.w(q);
        }
        CHECK(mass >= 0.5 - 1e-12);
    }
}

TEST_CASE("j_mu_estimate matches the closed form for a=0, zero drift") {
    const DiscreteMeasure mu = lebesgue_proxy_measure(8);
    const double h = std::ldexp(1.0, -4);
    const JEstimate est =
        j_mu_estimate(613001, 1000, 12, mu, h, 0.0, DriftSpec::zero());
    // J sums w_i over atoms with |B(s_i)| < h and an (independent) increment
    // in the chosen direction, so E(J) = sum_i w_i P(|B(s_i)| < h) / 2.
    double oracle = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i)
        oracle += mu.w(i) * std::erf(h / std::sqrt(2.0 * mu.t(i))) * 0.5;
    CHECK(est.n_paths == 1000);
    CHECK(std::fabs(est.ej - oracle) <= 3.0 * est.stderr_ej);
    CHECK(est.p_positive > 0.0);
    CHECK(est.pz_lower == doctest::Approx(est.ej * est.ej / est.ej2));
}

TEST_CASE("j_mu_estimate refuses bad resolutions") {
    const DiscreteMeasure mu = lebesgue_proxy_measure(8);
    CHECK_THROWS_AS(
        j_mu_estimate(613002, 100, 12, mu, std::ldexp(1.0, -13), 0.0,
                      DriftSpec::zero()),
        resolution_error);

    // Atom at 1/3 never sits on a dyadic grid: acceptable only while the
    // snap displacement stays below h/8.
    const DiscreteMeasure off(Atoms{{1.0 / 3.0, 1.0}}, "off-grid");
    CHECK_THROWS_AS(j_mu_estimate(613003, 100, 4, off, 0.125, 0.0,
                                  DriftSpec::zero()),
                    resolution_error);
    CHECK_NOTHROW(
        j_mu_estimate(613004, 100, 4, off, 0.25, 0.0, DriftSpec::zero()));
    CHECK_THROWS_AS(
        j_mu_estimate(613005, 50, 12, mu, 0.0625, 0.0, DriftSpec::zero()),
        config_error);  // too few paths
}

TEST_CASE("j_mu_estimate standard error shrinks like 1/sqrt(n)") {
    const DiscreteMeasure mu = lebesgue_proxy_measure(6);
    const JEstimate small =
        j_mu_estimate(613006, 400, 10, mu, std::ldexp(1.0, -6), 0.3,
                      DriftSpec::zero());
    const JEstimate big =
        j_mu_estimate(613006, 1600, 10, mu, std::ldexp(1.0, -6), 0.3,
                      DriftSpec::zero());
    REQUIRE(small.stderr_ej > 0.0);
    const double ratio = big.stderr_ej / small.stderr_ej;
    CHECK(ratio >= 0.35);
    CHECK(ratio <= 0.65);
}

TEST_CASE("paley_zygmund_check on deterministic and two-point laws") {
    JEstimate det;
    det.ej = 0.4;
    det.ej2 = 0.16;
    det.ej3 = 0.064;
    det.ej4 = 0.0256;
    det.p_positive = 1.0;
    det.pz_lower = 1.0;
    det.n_paths = 1000;
    det.stderr_ej = 0.0;
    const PzReport r1 = paley_zygmund_check(det);
    CHECK(!r1.inconclusive);
    CHECK(r1.ok);
    CHECK(r1.margin == doctest::Approx(0.0));

    JEstimate bern;  // J in {0,1}, P(J=1) = 1/4: the bound's equality case
    bern.ej = 0.25;
    bern.ej2 = 0.25;
    bern.ej3 = 0.25;
    bern.ej4 = 0.25;
    bern.p_positive = 0.25;
    bern.pz_lower = 0.25;
    bern.n_paths = 1600;
    bern.stderr_ej = std::sqrt(0.25 * 0.75 / 1600.0);
    const PzReport r2 = paley_zygmund_check(bern);
    CHECK(!r2.inconclusive);
    CHECK(r2.ok);
    CHECK(r2.margin == doctest::Approx(0.0));

    JEstimate dead;  // no path ever saw a positive J
    dead.n_paths = 500;
    const PzReport r3 = paley_zygmund_check(dead);
    CHECK(r3.inconclusive);
}

TEST_CASE("paley_zygmund_check passes on a Monte Carlo ensemble") {
    const DiscreteMeasure mu = lebesgue_proxy_measure(8);
    const JEstimate est =
        j_mu_estimate(613007, 800, 12, mu, std::ldexp(1.0, -8), 0.3,
                      DriftSpec::zero());
    const PzReport report = paley_zygmund_check(est);
    CHECK(!report.inconclusive);
    CHECK(report.ok);
}

TEST_CASE("measure save/load round-trip and normalization") {
    const char* path = "measure_roundtrip_test.txt";
    const DiscreteMeasure mu = cantor_natural_measure(0.25, 3);
    save_measure(mu, path);
    const DiscreteMeasure back = load_measure(path);
    REQUIRE(back.size() == mu.size());
    for (std::size_t i = 0; i < mu.size(); ++i) {
        CHECK(back.t(i) == doctest::Approx(mu.t(i)).epsilon(1e-14));
        CHECK(back.w(i) == doctest::Approx(mu.w(i)).epsilon(1e-14));
    }
    {
        std::ofstream out(path);
        out << "# unnormalized two-point file\n0.25 2\n0.75 2\n";
    }
    const DiscreteMeasure norm = load_measure(path);
    CHECK(norm.w(0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(norm.w(1) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(load_measure("no_such_measure_file.txt"), config_error);
    std::remove(path);
}
