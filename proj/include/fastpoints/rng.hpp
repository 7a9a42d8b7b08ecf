#pragma once

#include <array>
#include <cstdint>

namespace fastpoints {

// ---------------------------------------------------------------------------
// Counter-based random numbers.
//
// Every random quantity in the library is a pure function of (seed, index):
// the Philox4x32-10 block cipher keyed by the seed encrypts the index, and
// the 128-bit output block is turned into uniforms or one standard normal.
// There is no generator state, so ensembles can be produced in any order, on
// any number of workers, or refined later, with bit-identical results.
// ---------------------------------------------------------------------------

// Philox4x32-10 block: encrypts a 128-bit counter under a 64-bit key.
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        std::array<std::uint32_t, 4> ctr);

// Uniform double in (0, 1), never exactly 0 or 1.
double uniform(std::uint64_t seed, std::uint64_t index);

// Standard normal via Box-Muller on the (seed, index) block.
double gaussian(std::uint64_t seed, std::uint64_t index);

// Derives an independent child seed, e.g. per-path seeds from a master seed.
// Domain-separated from uniform/gaussian so streams never collide.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace fastpoints
