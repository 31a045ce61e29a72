#include "fermihart/scf.hpp"

#include "fermihart/errors.hpp"
#include "fermihart/holomorphic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fermihart {

namespace {

double xlogx(double x)
{
    return x > 0.0 ? x * std::log(x) : 0.0;
}

double inf_norm_diff(const RealVector& a, const RealVector& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

struct Diagonalized
{
    DenseEigen eig;
    RealVector rho;
};

// X = f_beta(C + diag(w) - mu I), returned through its eigendecomposition and diagonal.
Diagonalized occupy(const Eigen::MatrixXd& c_dense, const RealVector& w, double mu, double beta, std::size_t cutoff)
{
    Eigen::MatrixXd h = c_dense;
    for (Eigen::Index i = 0; i < h.rows(); ++i) {
        h(i, i) += w[i] - mu;
    }
    DenseEigen eig(h, cutoff);
    const Eigen::VectorXd d = eig.diagonal([beta](double x) { return fermi_dirac(x, beta); });
    return {std::move(eig), RealVector(d.data(), d.data() + d.size())};
}

} // namespace

SCFResult dense_scf(const HartreeProblem& problem, const SCFOptions& opts)
{
    problem.validate();
    if (!(opts.mixing > 0.0 && opts.mixing <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "mixing must lie in (0, 1]");
    }
    if (!(opts.tol > 0.0) || opts.max_iter < 1) {
        throw Error(ErrorCode::InvalidArgument, "invalid SCF tolerance or iteration cap");
    }
    const std::size_t n = problem.size();
    const double beta = problem.beta;
    const double mu = problem.mu;
    const Eigen::MatrixXd c_dense = dense_hamiltonian(problem.single_particle(), opts.dense_cutoff);

    RealVector w(n, 0.0);
    RealVector rho_prev;
    RealVector best_w = w;
    double best_change = INFINITY;
    int iterations = 0;
    bool converged = false;

    while (iterations < opts.max_iter) {
        const Diagonalized d = occupy(c_dense, w, mu, beta, opts.dense_cutoff);
        ++iterations;
        const RealVector target = problem.hartree_potential(d.rho);
        const double potential_change = inf_norm_diff(target, w);
        const double change = rho_prev.empty() ? INFINITY : inf_norm_diff(d.rho, rho_prev);
        if (change < best_change) {
            best_change = change;
            best_w = target;
        }
        if (potential_change == 0.0 || change <= opts.tol) {
            converged = true;
            w = target;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = (1.0 - opts.mixing) * w[i] + opts.mixing * target[i];
        }
        rho_prev = d.rho;
    }
    if (!converged) {
        w = best_w;
    }

    // assemble at the fixed point H = C + diag(V rho) - mu I
    const Diagonalized d = occupy(c_dense, w, mu, beta, opts.dense_cutoff);
    SCFResult res;
    res.iterations = iterations;
    res.eigenvalues = d.eig.values();
    res.X_star = d.eig.apply([beta](double x) { return fermi_dirac(x, beta); });
    res.rho_star = d.rho;
    res.potential = problem.hartree_potential(res.rho_star);
    const Diagonalized check = occupy(c_dense, res.potential, mu, beta, opts.dense_cutoff);
    res.residual = inf_norm_diff(check.rho, res.rho_star);

    // Tr[C X] = Tr[H X] - sum_i w_i rho_i + mu Tr X
    double trace_hx = 0.0, entropy = 0.0, electrons = 0.0, w_rho = 0.0;
    for (Eigen::Index i = 0; i < res.eigenvalues.size(); ++i) {
        const double lam = res.eigenvalues[i];
        trace_hx += fermi_dirac(lam, beta) * lam;
        entropy += fermi_dirac_entropy(lam, beta);
    }
    for (std::size_t i = 0; i < n; ++i) {
        electrons += res.rho_star[i];
        w_rho += w[i] * res.rho_star[i];
    }
    res.electrons = electrons;
    res.single_particle_energy = trace_hx - w_rho + mu * electrons;
    res.hartree_energy = problem.hartree_energy(res.rho_star);
    res.entropy = entropy;
    res.free_energy = res.single_particle_energy + res.hartree_energy + entropy / beta;

    if (!converged) {
        throw SCFNotConverged("dense SCF did not reach tol = " + std::to_string(opts.tol) + " in " +
                                  std::to_string(opts.max_iter) + " iterations",
                              std::move(res));
    }
    return res;
}

DenseFreeEnergy dense_free_energy(const HartreeProblem& problem, const Eigen::MatrixXd& X)
{
    const std::size_t n = problem.size();
    if (static_cast<std::size_t>(X.rows()) != n || X.rows() != X.cols()) {
        throw Error(ErrorCode::LengthMismatch, "density matrix shape differs from problem size");
    }
    const Eigen::MatrixXd c_dense = dense_hamiltonian(problem.single_particle(), n);
    DenseFreeEnergy out;
    out.single_particle = (c_dense.cwiseProduct(X)).sum();
    RealVector rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = X(i, i);
        out.electrons += rho[i];
    }
    out.hartree = problem.hartree_energy(rho);
    const Eigen::VectorXd lam = dense_spectrum(X, n);
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        const double x = std::clamp(lam[i], 0.0, 1.0);
        out.entropy += xlogx(x) + xlogx(1.0 - x);
    }
    out.free_energy = out.single_particle + out.hartree + out.entropy / problem.beta;
    return out;
}

GoldStandard::GoldStandard(const Eigen::MatrixXd& X_star, int batch_size, Substreams streams)
    : batch_size_(batch_size)
    , streams_(streams)
    , sum_(Eigen::VectorXd::Zero(X_star.rows()))
{
    if (batch_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "batch size must be at least 1");
    }
    const DenseEigen eig(X_star, static_cast<std::size_t>(X_star.rows()));
    sqrt_x_ = eig.apply([](double x) { return std::sqrt(std::max(x, 0.0)); });
}

void GoldStandard::push()
{
    const std::size_t n = static_cast<std::size_t>(sqrt_x_.rows());
    Eigen::MatrixXd z(n, batch_size_);
    for (int j = 0; j < batch_size_; ++j) {
        const RealVector col = streams_.gaussian(static_cast<std::uint64_t>(t_), static_cast<std::uint64_t>(j), n);
        z.col(j) = Eigen::Map<const Eigen::VectorXd>(col.data(), static_cast<Eigen::Index>(n));
    }
    const Eigen::MatrixXd y = sqrt_x_ * z;
    sum_ += y.array().square().rowwise().sum().matrix();
    ++t_;
}

RealVector GoldStandard::density() const
{
    RealVector out(sum_.size(), 0.0);
    if (t_ == 0) {
        return out;
    }
    const double w = 1.0 / (static_cast<double>(batch_size_) * static_cast<double>(t_));
    for (Eigen::Index i = 0; i < sum_.size(); ++i) {
        out[i] = sum_[i] * w;
    }
    return out;
}

RealVector gold_standard_density(const Eigen::MatrixXd& X_star, const Substreams& streams, int batch_size, long t)
{
    GoldStandard gold(X_star, batch_size, streams);
    for (long s = 0; s < t; ++s) {
        gold.push();
    }
    return gold.density();
}

} // namespace fermihart
