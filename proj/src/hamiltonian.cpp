#include "fermihart/hamiltonian.hpp"

#include "fermihart/errors.hpp"

#include <algorithm>
#include <numeric>

namespace fermihart {

EffectiveHamiltonian::EffectiveHamiltonian(double c_, RealVector v_, std::shared_ptr<const FourierMultiplier> kinetic_)
    : c(c_)
    , v(std::move(v_))
    , kinetic(std::move(kinetic_))
{
    if (!kinetic) {
        throw Error(ErrorCode::InvalidArgument, "Hamiltonian needs a kinetic operator");
    }
    if (v.size() != kinetic->grid().n) {
        throw Error(ErrorCode::LengthMismatch, "potential length differs from grid size");
    }
}

void EffectiveHamiltonian::apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
                                 std::span<std::complex<double>> scratch) const
{
    const std::size_t n = size();
    if (in.size() != n || out.size() != n || scratch.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "vector length differs from Hamiltonian size");
    }
    if (c != 0.0) {
        std::copy(in.begin(), in.end(), scratch.begin());
        kinetic->apply_inplace(scratch);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = c * scratch[i] + v[i] * in[i];
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = v[i] * in[i];
        }
    }
}

RealVector EffectiveHamiltonian::apply(std::span<const double> x) const
{
    RealVector y = c != 0.0 ? kinetic->apply(x) : RealVector(size(), 0.0);
    for (std::size_t i = 0; i < size(); ++i) {
        y[i] = c * y[i] + v[i] * x[i];
    }
    return y;
}

double EffectiveHamiltonian::mean_potential() const
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

SpectralInterval EffectiveHamiltonian::spectral_bounds(double slack) const
{
    auto [vmin, vmax] = std::minmax_element(v.begin(), v.end());
    const double k_hi = c * kinetic->max_eigenvalue();
    const double k_lo = c * kinetic->min_eigenvalue();
    return {*vmin + std::min({0.0, k_lo, k_hi}) - slack, *vmax + std::max({0.0, k_lo, k_hi}) + slack};
}

EffectiveHamiltonian single_particle_hamiltonian(std::shared_ptr<const FourierMultiplier> kinetic,
                                                 RealVector external_potential)
{
    return EffectiveHamiltonian(1.0, std::move(external_potential), std::move(kinetic));
}

} // namespace fermihart
