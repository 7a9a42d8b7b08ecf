#include "fastpoints/path_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "fastpoints/errors.hpp"
#include "fastpoints/rng.hpp"
#include "fft.hpp"

namespace fastpoints {

namespace {

constexpr int kMaxBmLevel = 24;
constexpr int kMaxFbmLevel = 14;
constexpr std::size_t kMaxDenseIncrements = 4096;

// Stationary increment covariance of fBm at integer lag k, grid units.
double fgn_covariance(double hurst, std::int64_t k) {
    const double ak = std::fabs(static_cast<double>(k));
    const double twoh = 2.0 * hurst;
    return 0.5 * (std::pow(ak + 1.0, twoh) + std::pow(std::fabs(ak - 1.0), twoh) -
                  2.0 * std::pow(ak, twoh));
}

// Dense-factorization fallback: increments = chol(C) * z.  Only reachable
// when the circulant eigenvalues come out materially negative, which the
// embedding of this covariance is not expected to produce.
std::vector<double> fgn_dense(std::uint64_t seed, double hurst, std::size_t n) {
    if (n > kMaxDenseIncrements)
        throw numeric_error(
            "sample_fbm: circulant embedding indefinite and the dense fallback "
            "ceiling (4096 increments) is exceeded");
    std::vector<double> chol(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = fgn_covariance(hurst, static_cast<std::int64_t>(i) -
                                                 static_cast<std::int64_t>(j));
            for (std::size_t k = 0; k < j; ++k)
                s -= chol[i * n + k] * chol[j * n + k];
            if (i == j) {
                if (s <= 0.0)
                    throw numeric_error("sample_fbm: covariance not positive definite");
                chol[i * n + i] = std::sqrt(s);
            } else {
                chol[i * n + j] = s / chol[j * n + j];
            }
        }
    }
    std::vector<double> inc(n, 0.0);
    std::vector<double> z(n);
    for (std::size_t j = 0; j < n; ++j) z[j] = gaussian(seed, j);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j <= i; ++j) s += chol[i * n + j] * z[j];
        inc[i] = s;
    }
    return inc;
}

// Exact stationary Gaussian increments via circulant embedding: eigenvalues
// of the 2n-circulant built from r, one complex normal per frequency, one
// inverse transform.  Normals are indexed deterministically so the result
// is a pure function of (seed, hurst, level).
std::vector<double> fgn_circulant(std::uint64_t seed, double hurst, std::size_t n) {
    const std::size_t m = 2 * n;
    std::vector<std::complex<double>> eig(m);
    for (std::size_t k = 0; k <= n; ++k)
        eig[k] = fgn_covariance(hurst, static_cast<std::int64_t>(k));
    for (std::size_t k = n + 1; k < m; ++k) eig[k] = eig[m - k];
    detail::fft_forward(eig);

    double max_eig = 0.0, min_eig = 0.0;
    for (const auto& e : eig) {
        max_eig = std::max(max_eig, e.real());
        min_eig = std::min(min_eig, e.real());
    }
    if (min_eig < -1e-8 * std::max(max_eig, 1.0)) {
        std::fprintf(stderr,
                     "sample_fbm: circulant embedding indefinite (min eigenvalue "
                     "%.3e), using dense factorization\n",
                     min_eig);
        return fgn_dense(seed, hurst, n);
    }

    std::vector<std::complex<double>> w(m);
    w[0] = std::sqrt(std::max(eig[0].real(), 0.0)) * gaussian(seed, 0);
    w[n] = std::sqrt(std::max(eig[n].real(), 0.0)) * gaussian(seed, 1);
    for (std::size_t j = 1; j < n; ++j) {
        const double amp = std::sqrt(std::max(eig[j].real(), 0.0) * 0.5);
        const std::complex<double> zj(gaussian(seed, 2 * j),
                                      gaussian(seed, 2 * j + 1));
        w[j] = amp * zj;
        w[m - j] = std::conj(w[j]);
    }
    detail::fft_forward(w);
    const double norm = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<double> inc(n);
    for (std::size_t k = 0; k < n; ++k) inc[k] = w[k].real() * norm;
    return inc;
}

}  // namespace

SamplePath sample_bm(std::uint64_t seed, int level) {
    if (level < 1 || level > kMaxBmLevel)
        throw config_error("sample_bm: level must lie in [1, 24]");
    const std::size_t n = std::size_t{2} << level;  // increments on [0, 2]
    SamplePath p;
    p.kind = PathKind::BM;
    p.level = level;
    p.seed = seed;
    p.values.resize(n + 1);
    const double sigma = std::sqrt(std::ldexp(1.0, -level));
    double acc = 0.0;
    p.values[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += sigma * gaussian(seed, i);
        p.values[i + 1] = acc;
    }
    return p;
}

SamplePath refine_bridge(const SamplePath& path, std::uint64_t seed2) {
    if (path.kind != PathKind::BM)
        throw config_error("refine_bridge: only BM paths refine");
    if (path.level + 1 > kMaxBmLevel)
        throw config_error("refine_bridge: refined level would exceed 24");
    const std::size_t coarse = path.values.size() - 1;  // 2*2^N
    SamplePath fine;
    fine.kind = PathKind::BM;
    fine.level = path.level + 1;
    fine.seed = path.seed;
    fine.values.resize(2 * coarse + 1);
    // Midpoint conditional law: mean = neighbor average, sd = 2^{-(N+2)/2}.
    const double sigma = std::sqrt(std::ldexp(1.0, -(path.level + 2)));
    for (std::size_t i = 0; i < coarse; ++i) {
        fine.values[2 * i] = path.values[i];
        fine.values[2 * i + 1] =
            0.5 * (path.values[i] + path.values[i + 1]) + sigma * gaussian(seed2, i);
    }
    fine.values[2 * coarse] = path.values[coarse];
    return fine;
}

SamplePath sample_fbm(std::uint64_t seed, double hurst, int level) {
    if (!(hurst > 0.0 && hurst < 1.0))
        throw config_error("sample_fbm: hurst must lie in (0, 1)");
    if (level < 1 || level > kMaxFbmLevel)
        throw config_error("sample_fbm: level must lie in [1, 14]");
    const std::size_t n = std::size_t{2} << level;
    const std::vector<double> fgn = fgn_circulant(seed, hurst, n);
    SamplePath p;
    p.kind = PathKind::FBM;
    p.hurst = hurst;
    p.level = level;
    p.seed = seed;
    p.values.resize(n + 1);
    // Grid-unit increments scale by dt^H so E|B(t+h)-B(t)|^2 = h^{2H}.
    const double scale = std::pow(std::ldexp(1.0, -level), hurst);
    double acc = 0.0;
    p.values[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += scale * fgn[i];
        p.values[i + 1] = acc;
    }
    return p;
}

SamplePath apply_drift(const SamplePath& path, const DriftSpec& f) {
    if (path.kind == PathKind::DRIFTED)
        throw config_error("apply_drift: path already carries a drift");
    SamplePath out = path;
    out.kind = PathKind::DRIFTED;
    out.drift = f;
    const double dt = path.dt();
    for (std::size_t k = 0; k < out.values.size(); ++k)
        out.values[k] -= f(static_cast<double>(k) * dt);
    return out;
}

SamplePath flip_sign(const SamplePath& path, int coin) {
    if (path.kind != PathKind::BM)
        throw config_error("flip_sign: only BM paths flip");
    if (coin != 0 && coin != 1)
        throw config_error("flip_sign: coin must be 0 or 1");
    SamplePath out = path;
    if (coin == 1)
        for (double& v : out.values) v = -v;
    return out;
}

double modulus_coefficient(const SamplePath& path, double h_min) {
    const double dt = path.dt();
    if (!(h_min >= dt))
        throw resolution_error("modulus_coefficient: h_min below grid step");
    if (h_min > 0.5)
        throw config_error("modulus_coefficient: no grid pairs in [h_min, 1/2]");
    const double* v = path.values.data();
    double best = 0.0;
    // Aligned dyadic increments over [0, 1]: at scale h = 2^-j the 2^j
    // windows are independent, and max_k |V((k+1)h) - V(kh)| / sqrt(h ln(1/h))
    // tends to the sharp modulus constant sqrt(2) as j grows.
    for (int j = 1; j <= path.level; ++j) {
        const double h = std::ldexp(1.0, -j);
        if (h < h_min - 1e-9 * h_min) break;
        const std::size_t stride = std::size_t{1} << (path.level - j);
        double big = 0.0;
        for (std::size_t k = 0; k < (std::size_t{1} << j); ++k)
            big = std::max(big, std::fabs(v[(k + 1) * stride] - v[k * stride]));
        best = std::max(best, big / std::sqrt(h * j * std::log(2.0)));
    }
    return best;
}

}  // namespace fastpoints
