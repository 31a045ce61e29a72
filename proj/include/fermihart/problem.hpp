#pragma once

#include "fermihart/hamiltonian.hpp"

#include <cstdint>
#include <memory>

namespace fermihart {

/// Static data of a finite-temperature Hartree problem on a periodic grid:
/// C = K + diag(u), the interaction V, beta and mu.
struct HartreeProblem
{
    GridSpec grid;
    std::shared_ptr<const FourierMultiplier> kinetic;
    std::shared_ptr<const FourierMultiplier> interaction;  ///< null means V = 0
    RealVector u;
    double beta = 1.0;
    double mu = 0.0;

    std::size_t size() const noexcept
    {
        return grid.n;
    }

    EffectiveHamiltonian single_particle() const
    {
        return single_particle_hamiltonian(kinetic, u);
    }

    /// V rho, or zeros when there is no interaction.
    RealVector hartree_potential(std::span<const double> rho) const;
    /// 1/2 <rho, V rho>.
    double hartree_energy(std::span<const double> rho) const;

    void validate() const;
};

struct ProblemSpec
{
    GridSpec grid;
    double beta = 10.0;
    double mu = 0.0;
    double alpha = 0.5;
    double zeta = 1.0;
    std::uint64_t potential_seed = 0;
    bool interacting = true;
};

/// Kinetic and Yukawa multipliers plus the random background potential.
std::shared_ptr<const HartreeProblem> make_problem(const ProblemSpec& spec);

} // namespace fermihart
