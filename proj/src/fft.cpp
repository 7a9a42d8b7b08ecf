#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace fastpoints::detail {

namespace {

// FFTW planning is not thread-safe; new-array execution is.  One cached
// in-place plan per size, created under a lock and reused by all workers.
std::mutex plan_mutex;
std::map<std::size_t, fftw_plan>& plan_cache() {
    static std::map<std::size_t, fftw_plan> cache;
    return cache;
}

fftw_plan plan_for(std::size_t n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto& cache = plan_cache();
    const auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    // FFTW_ESTIMATE does not touch the array, so planning on a scratch
    // buffer and executing on caller arrays is valid.
    std::vector<std::complex<double>> scratch(n);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan p = fftw_plan_dft_1d(static_cast<int>(n), ptr, ptr, FFTW_FORWARD,
                                   FFTW_ESTIMATE);
    if (p == nullptr) throw std::runtime_error("fft: planning failed");
    cache.emplace(n, p);
    return p;
}

}  // namespace

void fft_forward(std::vector<std::complex<double>>& data) {
    if (data.empty() || (data.size() & (data.size() - 1)) != 0)
        throw std::invalid_argument("fft_forward: size must be a power of two");
    fftw_plan p = plan_for(data.size());
    auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(p, ptr, ptr);
}

}  // namespace fastpoints::detail
