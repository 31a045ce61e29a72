#pragma once

#include "fermihart/hamiltonian.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <functional>

namespace fermihart {

inline constexpr std::size_t default_dense_cutoff = 4096;

enum class DenseFunction { fd, sqrt_fd, fd_log_fd, entropy };

/// Explicit matrix of a Fourier multiplier, built column by column.
Eigen::MatrixXd dense_operator(const FourierMultiplier& m, std::size_t cutoff = default_dense_cutoff);

/// c K + diag(v) as a dense matrix.
Eigen::MatrixXd dense_hamiltonian(const EffectiveHamiltonian& h, std::size_t cutoff = default_dense_cutoff);

/// Symmetric eigendecomposition kept around so several functions of one
/// matrix cost a single factorization.
class DenseEigen
{
  public:
    explicit DenseEigen(const Eigen::MatrixXd& a, std::size_t cutoff = default_dense_cutoff);

    const Eigen::VectorXd& values() const noexcept
    {
        return values_;
    }
    const Eigen::MatrixXd& vectors() const noexcept
    {
        return vectors_;
    }

    /// U f(Lambda) U^T.
    Eigen::MatrixXd apply(const std::function<double(double)>& f) const;
    /// diag(U f(Lambda) U^T) without forming the matrix.
    Eigen::VectorXd diagonal(const std::function<double(double)>& f) const;
    /// sum_i f(lambda_i).
    double trace(const std::function<double(double)>& f) const;

  private:
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;
};

/// The scalar function behind each DenseFunction at inverse temperature beta.
std::function<double(double)> dense_scalar(DenseFunction which, double beta);

/// U f(Lambda) U^T for a symmetric matrix; `entropy` gives
/// X log X + (I - X) log(I - X) with X = f_beta(H) and 0 log 0 = 0.
Eigen::MatrixXd dense_matrix_function(const Eigen::MatrixXd& h, double beta, DenseFunction which,
                                      std::size_t cutoff = default_dense_cutoff);

Eigen::VectorXd dense_spectrum(const Eigen::MatrixXd& h, std::size_t cutoff = default_dense_cutoff);

// Fermi-Dirac entropy geometry on symmetric 0 < X < I.

/// S_FD(X) = Tr[X log X + (I - X) log(I - X)].
double dense_fd_entropy(const Eigen::MatrixXd& x);
/// grad S_FD(X) = log X - log(I - X); X = f_beta(H) maps to -beta H.
Eigen::MatrixXd dense_mirror_map(const Eigen::MatrixXd& x);
/// (I + exp(-Y))^{-1}, the inverse of dense_mirror_map.
Eigen::MatrixXd dense_inverse_mirror_map(const Eigen::MatrixXd& y);
/// D(Y || X) = S_FD(Y) - S_FD(X) - <grad S_FD(X), Y - X>.
double dense_bregman_divergence(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x);

} // namespace fermihart
