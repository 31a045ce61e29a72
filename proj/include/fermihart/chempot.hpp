#pragma once

#include "fermihart/mirror.hpp"
#include "fermihart/scf.hpp"

#include <functional>
#include <string>
#include <vector>

namespace fermihart {

struct MuBracket
{
    double lo = 0.0;
    double hi = 0.0;
};

/// Interval that must contain the maximizer of g_{N,beta}:
/// [l_min(C) - c_h - log(1/nu)/beta, l_max(C) + c_h + log(1/(1-nu))/beta].
/// beta = +inf drops the temperature terms. The extreme eigenvalues of C
/// come from a dense solve when n <= dense_limit, otherwise from the
/// diagonal/kinetic enclosure.
MuBracket mu_bracket(const EffectiveHamiltonian& c_ham, double beta, double c_h, double nu,
                     std::size_t dense_limit = 512);

/// Result of solving the unconstrained problem at one chemical potential.
struct MuPoint
{
    double objective = 0.0;  ///< min_X F_beta(X) - mu Tr X
    double electrons = 0.0;  ///< Tr X at the minimizer
};

using MuOracle = std::function<MuPoint(double mu)>;

struct MuEvaluation
{
    double mu = 0.0;
    double g = 0.0;          ///< N mu + objective
    double electrons = 0.0;
    bool ok = false;
    std::string error;
};

struct MuScan
{
    double N_target = 0.0;
    double nu = 0.0;
    MuBracket bracket;
    int K = 0;
    std::vector<MuEvaluation> evaluations;
    int best = -1;

    const MuEvaluation& best_evaluation() const;
};

struct MuScanOptions
{
    int K = 64;
    /// Extra passes that rescan [mu_{best-1}, mu_{best+1}] on K+1 points each.
    int refine = 0;
    std::function<void(const std::string&)> warn;
};

/// Grid search for argmax_k g_hat_k = N mu_k + objective(mu_k) over K+1 equispaced points.
/// Failed points are kept with ok = false and excluded from the argmax.
MuScan mu_scan(const MuOracle& oracle, double N_target, std::size_t n, MuBracket bracket, const MuScanOptions& opts);

/// Bisection on the electron count, for oracles where Tr X(mu) is reliably monotone.
double mu_bisect(const MuOracle& oracle, double N_target, MuBracket bracket, double tol = 1e-10, int max_iter = 200);

/// Dense SCF at each mu.
MuOracle dense_mu_oracle(std::shared_ptr<const HartreeProblem> problem, SCFOptions opts = {});

/// Mirror descent at each mu; objective and electron count from tail estimates.
MuOracle stochastic_mu_oracle(std::shared_ptr<const HartreeProblem> problem, RunOptions opts);

} // namespace fermihart
