#pragma once

#include "fermihart/fft.hpp"

#include <complex>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fermihart {

using RealVector = std::vector<double>;
using ComplexVector = std::vector<std::complex<double>>;

/// Periodic box [0,L_1) x ... x [0,L_d) sampled on an odd number of points per side.
///
/// Grid points are stored row-major (last dimension fastest). The dual index set
/// runs over {-l_i, ..., l_i} with l_i = (n_i - 1)/2 in each dimension.
struct GridSpec
{
    int dims = 0;
    std::vector<int> sizes;
    std::vector<double> lengths;

    std::size_t n = 0;            ///< total number of grid points
    double volume = 0.0;          ///< prod L_i
    double volume_element = 0.0;  ///< volume / n

    int half_width(int dim) const
    {
        return (sizes[dim] - 1) / 2;
    }

    /// Multi-index of a flat grid offset.
    std::vector<int> multi_index(std::size_t flat) const;
    std::size_t flat_index(std::span<const int> index) const;

    /// Dual (frequency) multi-index k stored at a flat offset of the FFT layout.
    std::vector<int> frequency(std::size_t flat) const;
    /// Flat FFT-layout offset for a dual multi-index k in the natural range.
    std::size_t frequency_slot(std::span<const int> k) const;

    /// Coordinates x_j = j * L_i / n_i.
    std::vector<double> coordinates(std::size_t flat) const;

    bool operator==(const GridSpec& other) const
    {
        return sizes == other.sizes && lengths == other.lengths;
    }
};

GridSpec make_grid(int dims, std::vector<int> sizes, std::vector<double> lengths);

/// FFT layout maps natural frequency k in {-l..l} to slot k mod n.
inline int fft_frequency(int slot, int size)
{
    return slot <= (size - 1) / 2 ? slot : slot - size;
}

inline int fft_slot(int k, int size)
{
    return k >= 0 ? k : k + size;
}

/// Translation-invariant operator scale * F diag(symbol) F^*, F the unitary DFT.
///
/// The symbol is stored in FFT layout (see fft_frequency); it must be even
/// under k -> -k so the operator maps real vectors to real vectors.
class FourierMultiplier
{
  public:
    FourierMultiplier(GridSpec grid, RealVector symbol, double scale);

    const GridSpec& grid() const noexcept
    {
        return grid_;
    }
    const RealVector& symbol() const noexcept
    {
        return symbol_;
    }
    double scale() const noexcept
    {
        return scale_;
    }
    /// Symbol at a dual multi-index given in natural order.
    double symbol_at(std::span<const int> k) const;

    /// Largest and smallest eigenvalue of the operator (scale * symbol extremes).
    double max_eigenvalue() const;
    double min_eigenvalue() const;

    RealVector apply(std::span<const double> x) const;
    /// Real apply with caller scratch (length n); reentrant.
    void apply(std::span<const double> x, std::span<double> y, std::span<std::complex<double>> scratch) const;
    /// Complex apply in place.
    void apply_inplace(std::span<std::complex<double>> x) const;

    const FftPlan& plan() const noexcept
    {
        return *plan_;
    }

  private:
    GridSpec grid_;
    RealVector symbol_;
    double scale_;
    std::shared_ptr<const FftPlan> plan_;
};

/// K = 1/2 F D F^*, d_k = sum_i (2 pi k_i / L_i)^2.
FourierMultiplier kinetic_multiplier(const GridSpec& grid);

/// Yukawa kernel (1/dV) F diag(alpha^2/(alpha^2 + |2 pi k/L|^2)) F^*.
/// alpha = 0 gives Coulomb with the zero mode removed.
FourierMultiplier yukawa_multiplier(const GridSpec& grid, double alpha, bool remove_zero_mode = false);

/// Free-standing form of FourierMultiplier::apply.
RealVector apply_multiplier(const FourierMultiplier& m, std::span<const double> x);

struct ExternalPotential
{
    RealVector values;          ///< u_j = v_ext(x_j)
    RealVector charge_density;  ///< unit charges at sampled points
    std::size_t charges = 0;
};

/// floor(zeta * volume) unit charges at distinct uniformly sampled grid points;
/// u = -V rho_ext with the Yukawa kernel for `alpha`.
ExternalPotential background_potential(const GridSpec& grid, double zeta, double alpha, std::uint64_t seed);

/// max_p sum_q |V_pq| of the circulant Yukawa kernel.
double interaction_row_norm(const GridSpec& grid, double alpha);
double interaction_row_norm(const FourierMultiplier& v);

} // namespace fermihart
