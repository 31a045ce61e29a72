#pragma once

#include "fermihart/dense.hpp"
#include "fermihart/errors.hpp"
#include "fermihart/problem.hpp"
#include "fermihart/rng.hpp"

#include <Eigen/Dense>

namespace fermihart {

struct SCFOptions
{
    double mixing = 0.5;  ///< theta in (0, 1]
    double tol = 1e-10;   ///< on ||rho_k - rho_{k-1}||_inf
    int max_iter = 10000;
    std::size_t dense_cutoff = default_dense_cutoff;
};

struct SCFResult
{
    Eigen::MatrixXd X_star;
    RealVector rho_star;
    RealVector potential;       ///< V rho_star
    Eigen::VectorXd eigenvalues;  ///< spectrum of H_star = C + diag(V rho_star) - mu I
    double free_energy = 0.0;   ///< Tr[C X] + 1/2 rho^T V rho + S_FD(X)/beta
    double hartree_energy = 0.0;
    double single_particle_energy = 0.0;
    double entropy = 0.0;
    double electrons = 0.0;
    int iterations = 0;
    double residual = 0.0;      ///< ||diag f(C + diag(V rho) - mu) - rho||_inf
};

/// Carries the best iterate when the mixing loop runs out of iterations.
class SCFNotConverged : public Error
{
  public:
    SCFNotConverged(const std::string& what, SCFResult best)
        : Error(ErrorCode::NotConverged, what)
        , best_(std::move(best))
    {
    }
    const SCFResult& best() const noexcept
    {
        return best_;
    }

  private:
    SCFResult best_;
};

/// Simple mixing on the potential, V_{k+1} = (1 - theta) V_k + theta V rho_k, from V_0 = 0.
SCFResult dense_scf(const HartreeProblem& problem, const SCFOptions& opts = {});

/// Dense free energy F_beta(X) - mu Tr X pieces for X = f_beta(H) given as a spectrum.
struct DenseFreeEnergy
{
    double single_particle = 0.0;
    double hartree = 0.0;
    double entropy = 0.0;
    double electrons = 0.0;
    double free_energy = 0.0;
};
DenseFreeEnergy dense_free_energy(const HartreeProblem& problem, const Eigen::MatrixXd& X);

/// Running gold-standard density diag[sum_s (X^{1/2} z_s)(X^{1/2} z_s)^T] / (N_g t),
/// drawing z_s from the same substreams as the mirror descent run.
class GoldStandard
{
  public:
    GoldStandard(const Eigen::MatrixXd& X_star, int batch_size, Substreams streams);

    /// Adds the batch of iteration index `t` (0-based, as in the run).
    void push();
    long count() const noexcept
    {
        return t_;
    }
    RealVector density() const;

  private:
    Eigen::MatrixXd sqrt_x_;
    int batch_size_;
    Substreams streams_;
    long t_ = 0;
    Eigen::VectorXd sum_;
};

/// One-shot form: the gold-standard density after t iterations.
RealVector gold_standard_density(const Eigen::MatrixXd& X_star, const Substreams& streams, int batch_size, long t);

} // namespace fermihart
