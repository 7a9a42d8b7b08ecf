#pragma once

#include <complex>
#include <vector>

namespace fastpoints::detail {

// In-place forward DFT (FFTW sign convention, unnormalized).  Power-of-two
// sizes only — the circulant embedding always produces them.  Plans are
// cached per size; planning is serialized, execution is concurrency-safe.
void fft_forward(std::vector<std::complex<double>>& data);

}  // namespace fastpoints::detail
