#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fermihart {

/// Unnormalized d-dimensional complex FFT over a row-major grid, backed by FFTW.
///
/// Plans are built with FFTW_ESTIMATE so the transform is bit-reproducible from
/// run to run. Execution is reentrant: callers pass their own buffers and the
/// plan object itself is never mutated after construction.
class FftPlan
{
  public:
    explicit FftPlan(std::span<const int> sizes);
    ~FftPlan();

    FftPlan(const FftPlan&) = delete;
    FftPlan& operator=(const FftPlan&) = delete;

    /// In place, sign -1, no normalization.
    void forward(std::span<std::complex<double>> data) const;
    /// In place, sign +1, no normalization.
    void backward(std::span<std::complex<double>> data) const;

    std::size_t size() const noexcept
    {
        return size_;
    }

    /// Shared plan for a given shape; plans are cached for the process lifetime.
    static std::shared_ptr<const FftPlan> shared(std::span<const int> sizes);

  private:
    std::vector<int> sizes_;
    std::size_t size_ = 0;
    void* forward_plan_ = nullptr;
    void* backward_plan_ = nullptr;
};

} // namespace fermihart
