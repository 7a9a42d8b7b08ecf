#pragma once

#include <cmath>

#include "fastpoints/errors.hpp"

namespace fastpoints {

// Standard normal upper tail Q(x) = P(Z > x), computed through the
// complementary error function for full relative accuracy in both tails.
inline double gaussian_tail_q(double x) {
    return 0.5 * std::erfc(x / std::sqrt(2.0));
}

// Probability that a standard Brownian increment over a window of length h
// clears the fast threshold in one fixed direction:
//   phi(h, a) = Q(a * sqrt(2 ln(1/h))).
inline double phi(double h, double a) {
    if (!(h > 0.0 && h < 1.0))
        throw config_error("phi: h must lie in (0, 1)");
    return gaussian_tail_q(a * std::sqrt(2.0 * std::log(1.0 / h)));
}

}  // namespace fastpoints
