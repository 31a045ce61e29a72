#include "fermihart/problem.hpp"

#include "fermihart/errors.hpp"

#include <cmath>

namespace fermihart {

RealVector HartreeProblem::hartree_potential(std::span<const double> rho) const
{
    if (rho.size() != size()) {
        throw Error(ErrorCode::LengthMismatch, "density length differs from grid size");
    }
    if (!interaction) {
        return RealVector(size(), 0.0);
    }
    return interaction->apply(rho);
}

double HartreeProblem::hartree_energy(std::span<const double> rho) const
{
    if (!interaction) {
        return 0.0;
    }
    const RealVector vr = hartree_potential(rho);
    double e = 0.0;
    for (std::size_t i = 0; i < vr.size(); ++i) {
        e += rho[i] * vr[i];
    }
    return 0.5 * e;
}

void HartreeProblem::validate() const
{
    if (!kinetic) {
        throw Error(ErrorCode::InvalidArgument, "problem needs a kinetic operator");
    }
    if (!(kinetic->grid() == grid) || (interaction && !(interaction->grid() == grid))) {
        throw Error(ErrorCode::InvalidArgument, "operators live on a different grid");
    }
    if (u.size() != grid.n) {
        throw Error(ErrorCode::LengthMismatch, "external potential length differs from grid size");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorCode::InvalidArgument, "beta must be finite and positive");
    }
}

std::shared_ptr<const HartreeProblem> make_problem(const ProblemSpec& spec)
{
    auto p = std::make_shared<HartreeProblem>();
    p->grid = spec.grid;
    p->kinetic = std::make_shared<FourierMultiplier>(kinetic_multiplier(spec.grid));
    if (spec.interacting) {
        p->interaction = std::make_shared<FourierMultiplier>(yukawa_multiplier(spec.grid, spec.alpha));
    }
    p->u = background_potential(spec.grid, spec.zeta, spec.alpha, spec.potential_seed).values;
    p->beta = spec.beta;
    p->mu = spec.mu;
    p->validate();
    return p;
}

} // namespace fermihart
