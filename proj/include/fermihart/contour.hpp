#pragma once

#include "fermihart/hamiltonian.hpp"

#include <complex>
#include <vector>

namespace fermihart {

enum class ContourKind {
    fd,                   ///< f_beta
    sqrt_fd,              ///< f_beta^{1/2}
    fd_log_fd,            ///< f_beta log f_beta
    fd_log_fd_reflected,  ///< (1 - f_beta) log(1 - f_beta), i.e. f log f at -x
};

const char* to_string(ContourKind kind);

/// Rational approximation F(H) ~ sum_i w_i F(s_i) (s_i - H)^{-1} over a closed
/// contour around the spectrum that avoids the cut {iy : |y| >= pi/beta}.
///
/// The contour comes from the Hale-Higham-Trefethen conformal map applied in
/// the variable xi = z^2 + (pi/beta)^2, which sends the cut to (-inf, 0] and
/// folds the spectral interval into [m, M]; pulled back to z it is the
/// dumbbell around [lo, hi]. Nodes come in conjugate pairs, so only the
/// `pole_count()` representatives with Im s > 0 are stored and the matrix
/// function is 2 Re sum_j weights[j] (nodes[j] - H)^{-1}.
struct PoleExpansion
{
    std::vector<std::complex<double>> nodes;         ///< Im > 0 representatives
    std::vector<std::complex<double>> quad_weights;  ///< contour quadrature weights w_j
    std::vector<std::complex<double>> weights;       ///< combined w_j F(s_j)
    double beta = 1.0;
    SpectralInterval interval;
    ContourKind kind = ContourKind::sqrt_fd;

    int pole_count() const noexcept
    {
        return static_cast<int>(nodes.size());
    }

    /// Same nodes, weights recombined for another function; shifted solves can be shared.
    PoleExpansion with_kind(ContourKind other) const;

    /// Full node set (both half-planes), 2 * pole_count() entries.
    std::vector<std::complex<double>> all_nodes() const;
    std::vector<std::complex<double>> all_weights() const;

    /// Scalar rational approximant at real x.
    double evaluate(double x) const;

    bool same_nodes(const PoleExpansion& other) const
    {
        return nodes == other.nodes;
    }
};

/// Evaluate the holomorphic extension selected by `kind` at z.
std::complex<double> contour_function(ContourKind kind, std::complex<double> z, double beta);
/// Real-axis reference value of the same function.
double contour_function_real(ContourKind kind, double x, double beta);

PoleExpansion build_contour(double lam_lo, double lam_hi, double beta, int pole_count, ContourKind kind);
inline PoleExpansion build_contour(SpectralInterval interval, double beta, int pole_count, ContourKind kind)
{
    return build_contour(interval.lo, interval.hi, beta, pole_count, kind);
}

/// Largest |F(x) - approximant(x)| over equispaced points of the interval and of its part near 0.
double scalar_contour_error(const PoleExpansion& p, int samples = 2001);

/// Smallest even pole count in [2, max_poles] whose scalar error on the interval is
/// at most `target`; max_poles when none qualifies.
int select_pole_count(SpectralInterval interval, double beta, double target, ContourKind kind = ContourKind::sqrt_fd,
                      int max_poles = 200);

} // namespace fermihart
