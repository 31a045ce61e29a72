#include "fermihart/dense.hpp"

#include "fermihart/errors.hpp"
#include "fermihart/holomorphic.hpp"

#include <cmath>
#include <string>

namespace fermihart {

namespace {

void check_size(std::size_t n, std::size_t cutoff)
{
    if (n > cutoff) {
        throw Error(ErrorCode::TooLargeForDense,
                    "n = " + std::to_string(n) + " exceeds the dense cutoff " + std::to_string(cutoff));
    }
}

} // namespace

Eigen::MatrixXd dense_operator(const FourierMultiplier& m, std::size_t cutoff)
{
    const std::size_t n = m.grid().n;
    check_size(n, cutoff);
    Eigen::MatrixXd out(n, n);
    RealVector e(n, 0.0), col(n);
    ComplexVector scratch(n);
    for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        m.apply(e, col, scratch);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            out(i, j) = col[i];
        }
    }
    return out;
}

Eigen::MatrixXd dense_hamiltonian(const EffectiveHamiltonian& h, std::size_t cutoff)
{
    const std::size_t n = h.size();
    check_size(n, cutoff);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    if (h.c != 0.0) {
        out = h.c * dense_operator(*h.kinetic, cutoff);
        // symmetrize
        out = 0.5 * (out + out.transpose()).eval();
    }
    for (std::size_t i = 0; i < n; ++i) {
        out(i, i) += h.v[i];
    }
    return out;
}

DenseEigen::DenseEigen(const Eigen::MatrixXd& a, std::size_t cutoff)
{
    check_size(static_cast<std::size_t>(a.rows()), cutoff);
    if (a.rows() != a.cols()) {
        throw Error(ErrorCode::InvalidArgument, "dense eigendecomposition needs a square matrix");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) {
        throw Error(ErrorCode::NotConverged, "symmetric eigendecomposition failed");
    }
    values_ = es.eigenvalues();
    vectors_ = es.eigenvectors();
}

Eigen::MatrixXd DenseEigen::apply(const std::function<double(double)>& f) const
{
    Eigen::VectorXd fl = values_.unaryExpr(f);
    return vectors_ * fl.asDiagonal() * vectors_.transpose();
}

Eigen::VectorXd DenseEigen::diagonal(const std::function<double(double)>& f) const
{
    Eigen::VectorXd fl = values_.unaryExpr(f);
    return vectors_.array().square().matrix() * fl;
}

double DenseEigen::trace(const std::function<double(double)>& f) const
{
    return values_.unaryExpr(f).sum();
}

std::function<double(double)> dense_scalar(DenseFunction which, double beta)
{
    switch (which) {
        case DenseFunction::fd: return [beta](double x) { return fermi_dirac(x, beta); };
        case DenseFunction::sqrt_fd: return [beta](double x) { return sqrt_fermi_dirac(x, beta); };
        case DenseFunction::fd_log_fd: return [beta](double x) { return fermi_dirac_log(x, beta); };
        case DenseFunction::entropy: return [beta](double x) { return fermi_dirac_entropy(x, beta); };
    }
    throw Error(ErrorCode::InvalidArgument, "unknown dense function");
}

Eigen::MatrixXd dense_matrix_function(const Eigen::MatrixXd& h, double beta, DenseFunction which, std::size_t cutoff)
{
    return DenseEigen(h, cutoff).apply(dense_scalar(which, beta));
}

Eigen::VectorXd dense_spectrum(const Eigen::MatrixXd& h, std::size_t cutoff)
{
    check_size(static_cast<std::size_t>(h.rows()), cutoff);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

double dense_fd_entropy(const Eigen::MatrixXd& x)
{
    return DenseEigen(x).trace([](double l) {
        const double a = l > 0.0 ? l * std::log(l) : 0.0;
        const double b = l < 1.0 ? (1.0 - l) * std::log1p(-l) : 0.0;
        return a + b;
    });
}

Eigen::MatrixXd dense_mirror_map(const Eigen::MatrixXd& x)
{
    return DenseEigen(x).apply([](double l) {
        if (!(l > 0.0 && l < 1.0)) {
            throw Error(ErrorCode::InvalidArgument, "mirror map needs 0 < X < I");
        }
        return std::log(l) - std::log1p(-l);
    });
}

Eigen::MatrixXd dense_inverse_mirror_map(const Eigen::MatrixXd& y)
{
    return DenseEigen(y).apply([](double l) { return fermi_dirac(-l, 1.0); });
}

double dense_bregman_divergence(const Eigen::MatrixXd& y, const Eigen::MatrixXd& x)
{
    const Eigen::MatrixXd g = dense_mirror_map(x);
    return dense_fd_entropy(y) - dense_fd_entropy(x) - (g.cwiseProduct(y - x)).sum();
}

} // namespace fermihart
