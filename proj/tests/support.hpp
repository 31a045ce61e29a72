#pragma once

#include "fermihart/dense.hpp"
#include "fermihart/hamiltonian.hpp"
#include "fermihart/problem.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <memory>
#include <numbers>
#include <random>
#include <vector>

namespace fhtest {

using namespace fermihart;

/// Unitary DFT matrix of a row-major grid, built from the exponentials directly.
inline Eigen::MatrixXcd dft_matrix(const GridSpec& g)
{
    const auto n = static_cast<Eigen::Index>(g.n);
    Eigen::MatrixXcd f(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        const auto ja = g.multi_index(static_cast<std::size_t>(a));
        for (Eigen::Index b = 0; b < n; ++b) {
            const auto kb = g.multi_index(static_cast<std::size_t>(b));
            double phase = 0.0;
            for (int d = 0; d < g.dims; ++d) {
                phase += static_cast<double>(ja[d]) * kb[d] / g.sizes[d];
            }
            f(a, b) = std::polar(1.0 / std::sqrt(static_cast<double>(g.n)), -2.0 * std::numbers::pi * phase);
        }
    }
    return f;
}

/// scale * F^* diag(symbol) F, with the symbol in FFT layout.
inline Eigen::MatrixXd dense_from_symbol(const FourierMultiplier& m)
{
    const Eigen::MatrixXcd f = dft_matrix(m.grid());
    Eigen::VectorXcd d(static_cast<Eigen::Index>(m.grid().n));
    for (std::size_t i = 0; i < m.grid().n; ++i) {
        d(static_cast<Eigen::Index>(i)) = m.symbol()[i];
    }
    const Eigen::MatrixXcd a = f.adjoint() * d.asDiagonal() * f;
    return m.scale() * a.real();
}

inline RealVector gaussian_vector(std::mt19937_64& rng, std::size_t n)
{
    std::normal_distribution<double> nd;
    RealVector x(n);
    for (auto& v : x) {
        v = nd(rng);
    }
    return x;
}

inline Eigen::VectorXd to_eigen(const RealVector& x)
{
    return Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
}

inline double rel_diff(const RealVector& a, const RealVector& b)
{
    return (to_eigen(a) - to_eigen(b)).norm() / std::max(to_eigen(b).norm(), 1e-300);
}

/// H = c K + diag(v) on a 1D grid with v uniform in [lo, hi].
inline EffectiveHamiltonian random_hamiltonian(std::mt19937_64& rng, int n, double length, double c, double lo,
                                               double hi)
{
    const GridSpec g = make_grid(1, {n}, {length});
    auto k = std::make_shared<const FourierMultiplier>(kinetic_multiplier(g));
    std::uniform_real_distribution<double> u(lo, hi);
    RealVector v(static_cast<std::size_t>(n));
    for (auto& x : v) {
        x = u(rng);
    }
    return EffectiveHamiltonian(c, std::move(v), k);
}

inline std::shared_ptr<const HartreeProblem> small_problem(int n, double length, double beta, double mu = 0.0,
                                                           bool interacting = true, std::uint64_t seed = 7,
                                                           double zeta = 1.0)
{
    ProblemSpec s;
    s.grid = make_grid(1, {n}, {length});
    s.beta = beta;
    s.mu = mu;
    s.zeta = zeta;
    s.potential_seed = seed;
    s.interacting = interacting;
    return make_problem(s);
}

} // namespace fhtest
