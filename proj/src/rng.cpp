#include "fastpoints/rng.hpp"

#include <cmath>

namespace fastpoints {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWey0 = 0x9E3779B9u;  // golden-ratio Weyl constants
constexpr std::uint32_t kWey1 = 0xBB67AE85u;

// Stream tags keep the gaussian/uniform/seed-derivation counter spaces
// disjoint even for equal (seed, index).
constexpr std::uint32_t kStreamGauss = 0x47415553u;
constexpr std::uint32_t kStreamUnif = 0x554E4946u;
constexpr std::uint32_t kStreamSeed = 0x53454544u;

inline void round_once(std::array<std::uint32_t, 4>& c,
                       std::array<std::uint32_t, 2>& k) {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    c = {static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0],
         static_cast<std::uint32_t>(p1),
         static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1],
         static_cast<std::uint32_t>(p0)};
    k[0] += kWey0;
    k[1] += kWey1;
}

inline std::array<std::uint32_t, 4> block(std::uint64_t key, std::uint64_t index,
                                          std::uint32_t stream) {
    std::array<std::uint32_t, 4> ctr = {
        static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
        stream, 0u};
    return philox4x32(key, ctr);
}

// 53-bit mantissa from two words, mapped into the open interval (0,1).
inline double to_unit_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t{hi} << 32) | lo;
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        std::array<std::uint32_t, 4> ctr) {
    std::array<std::uint32_t, 2> k = {static_cast<std::uint32_t>(key),
                                      static_cast<std::uint32_t>(key >> 32)};
    for (int r = 0; r < 10; ++r) round_once(ctr, k);
    return ctr;
}

double uniform(std::uint64_t seed, std::uint64_t index) {
    const auto x = block(seed, index, kStreamUnif);
    return to_unit_open(x[0], x[1]);
}

double gaussian(std::uint64_t seed, std::uint64_t index) {
    const auto x = block(seed, index, kStreamGauss);
    const double u1 = to_unit_open(x[0], x[1]);
    const double u2 = to_unit_open(x[2], x[3]);
    constexpr double two_pi = 6.283185307179586476925286766559;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    const auto x = block(master, stream, kStreamSeed);
    return (std::uint64_t{x[0]} << 32) | x[1];
}

}  // namespace fastpoints
