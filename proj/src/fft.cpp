#include "fermihart/fft.hpp"

#include "fermihart/errors.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace fermihart {

namespace {

// serializes FFTW planner calls
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

} // namespace

FftPlan::FftPlan(std::span<const int> sizes)
    : sizes_(sizes.begin(), sizes.end())
{
    if (sizes_.empty()) {
        throw Error(ErrorCode::InvalidGrid, "FFT needs at least one dimension");
    }
    size_ = 1;
    for (int s : sizes_) {
        if (s < 1) {
            throw Error(ErrorCode::InvalidGrid, "FFT size must be positive");
        }
        size_ *= static_cast<std::size_t>(s);
    }

    std::vector<std::complex<double>> probe(size_);
    auto* buf = reinterpret_cast<fftw_complex*>(probe.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;

    std::lock_guard<std::mutex> lock(planner_mutex());
    forward_plan_ = fftw_plan_dft(static_cast<int>(sizes_.size()), sizes_.data(), buf, buf, FFTW_FORWARD, flags);
    backward_plan_ = fftw_plan_dft(static_cast<int>(sizes_.size()), sizes_.data(), buf, buf, FFTW_BACKWARD, flags);
    if (!forward_plan_ || !backward_plan_) {
        throw Error(ErrorCode::InvalidGrid, "FFTW failed to create a plan");
    }
}

FftPlan::~FftPlan()
{
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward_plan_) {
        fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
    }
    if (backward_plan_) {
        fftw_destroy_plan(static_cast<fftw_plan>(backward_plan_));
    }
}

void FftPlan::forward(std::span<std::complex<double>> data) const
{
    if (data.size() != size_) {
        throw Error(ErrorCode::LengthMismatch, "FFT buffer has wrong length");
    }
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(forward_plan_), buf, buf);
}

void FftPlan::backward(std::span<std::complex<double>> data) const
{
    if (data.size() != size_) {
        throw Error(ErrorCode::LengthMismatch, "FFT buffer has wrong length");
    }
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_execute_dft(static_cast<fftw_plan>(backward_plan_), buf, buf);
}

std::shared_ptr<const FftPlan> FftPlan::shared(std::span<const int> sizes)
{
    static std::mutex cache_mutex;
    static std::map<std::vector<int>, std::shared_ptr<const FftPlan>> cache;

    std::vector<int> key(sizes.begin(), sizes.end());
    std::lock_guard<std::mutex> lock(cache_mutex);
    auto it = cache.find(key);
    if (it != cache.end()) {
        return it->second;
    }
    auto plan = std::make_shared<const FftPlan>(sizes);
    cache.emplace(std::move(key), plan);
    return plan;
}

} // namespace fermihart
