#pragma once

#include "fermihart/bicgstab.hpp"
#include "fermihart/contour.hpp"

#include <functional>
#include <span>
#include <vector>

namespace fermihart {

struct MatvecStats
{
    int solves = 0;
    int max_iterations = 0;     ///< largest BiCGSTAB count over the shifted solves
    long total_iterations = 0;
    double worst_residual = 0.0;

    void merge(const MatvecStats& other);
};

/// Contour matvecs against one Hamiltonian, reusing solver work vectors
/// across right-hand sides. Not thread-safe; one per thread.
class ContourEngine
{
  public:
    ContourEngine(const EffectiveHamiltonian& h, SolverConfig cfg);

    /// out[e] = F_e(H) z for every expansion e; all expansions must share nodes,
    /// so each node costs one shifted solve no matter how many functions are requested.
    void apply(std::span<const PoleExpansion* const> expansions, std::span<const double> z,
               std::span<RealVector> out, MatvecStats* stats = nullptr);

    RealVector apply(const PoleExpansion& p, std::span<const double> z, MatvecStats* stats = nullptr);

  private:
    const EffectiveHamiltonian& h_;
    ShiftedSolver solver_;
    ComplexVector rhs_, x_;
};

RealVector contour_matvec(const EffectiveHamiltonian& h, const PoleExpansion& p, std::span<const double> z,
                          const SolverConfig& cfg, MatvecStats* stats = nullptr);

/// Several functions of H applied to the same z from one set of solves.
std::vector<RealVector> contour_matvec_multi(const EffectiveHamiltonian& h, std::span<const PoleExpansion> expansions,
                                             std::span<const double> z, const SolverConfig& cfg,
                                             MatvecStats* stats = nullptr);

/// The full sum over both half-planes, solving at every node without folding.
/// Its imaginary part measures how well the conjugate symmetry holds.
ComplexVector contour_matvec_unfolded(const EffectiveHamiltonian& h, const PoleExpansion& p,
                                      std::span<const double> z, const SolverConfig& cfg);

/// Chebyshev coefficients c_0..c_r of f on [lo, hi] (c_0 already halved).
std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, double lo, double hi, int order);

/// sum_j c_j T_j(Hs) z with Hs = (2H - (lo+hi))/(hi - lo), by the three-term recurrence.
RealVector chebyshev_apply(const EffectiveHamiltonian& h, std::span<const double> coeffs, std::span<const double> z,
                           SpectralInterval bounds);

/// f_beta^{1/2}(H) z by a degree-`order` Chebyshev expansion on `bounds`.
RealVector chebyshev_matvec(const EffectiveHamiltonian& h, double beta, int order, std::span<const double> z,
                            SpectralInterval bounds);

} // namespace fermihart
