#pragma once

#include "fermihart/lattice.hpp"

#include <complex>
#include <memory>
#include <span>

namespace fermihart {

struct SpectralInterval
{
    double lo = 0.0;
    double hi = 0.0;

    double width() const
    {
        return hi - lo;
    }
    bool contains(const SpectralInterval& other) const
    {
        return lo <= other.lo && other.hi <= hi;
    }
};

/// H = c K + diag(v). The density matrix f_beta(H) is never formed; this pair
/// is the whole state.
struct EffectiveHamiltonian
{
    double c = 0.0;
    RealVector v;
    std::shared_ptr<const FourierMultiplier> kinetic;

    EffectiveHamiltonian() = default;
    EffectiveHamiltonian(double c_, RealVector v_, std::shared_ptr<const FourierMultiplier> kinetic_);

    std::size_t size() const noexcept
    {
        return v.size();
    }
    const GridSpec& grid() const
    {
        return kinetic->grid();
    }

    /// out = H in; `scratch` has length n.
    void apply(std::span<const std::complex<double>> in, std::span<std::complex<double>> out,
               std::span<std::complex<double>> scratch) const;
    RealVector apply(std::span<const double> x) const;

    double mean_potential() const;

    /// Rigorous enclosure [min v + min(0, c k_max), max v + max(0, c k_max)] widened by `slack`.
    SpectralInterval spectral_bounds(double slack = 0.1) const;
};

/// C = K + diag(u), the single-particle matrix.
EffectiveHamiltonian single_particle_hamiltonian(std::shared_ptr<const FourierMultiplier> kinetic,
                                                 RealVector external_potential);

} // namespace fermihart
