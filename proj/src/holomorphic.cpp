#include "fermihart/holomorphic.hpp"

#include "fermihart/errors.hpp"

#include <cmath>
#include <numbers>

namespace fermihart {

namespace {

double softplus(double y)
{
    return y > 0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
}

// Kahan's compensated log1p, which carries over to complex arguments.
std::complex<double> log1p_c(std::complex<double> u)
{
    const std::complex<double> w = 1.0 + u;
    if (w == std::complex<double>(1.0, 0.0)) {
        return u;
    }
    return std::log(w) * u / (w - 1.0);
}

void check_cut(std::complex<double> w)
{
    if (w.real() == 0.0 && std::abs(w.imag()) >= std::numbers::pi) {
        throw Error(ErrorCode::OnBranchCut, "argument lies on the branch cut {iy : |y| >= pi/beta}");
    }
}

} // namespace

double fermi_dirac(double x, double beta)
{
    const double y = beta * x;
    if (y > 0) {
        const double e = std::exp(-y);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(y));
}

double sqrt_fermi_dirac(double x, double beta)
{
    const double y = beta * x;
    if (y > 0) {
        const double e = std::exp(-y);
        return std::exp(-0.5 * y) / std::sqrt(1.0 + e);
    }
    return 1.0 / std::sqrt(1.0 + std::exp(y));
}

double fermi_dirac_log(double x, double beta)
{
    const double f = fermi_dirac(x, beta);
    if (f == 0.0) {
        return 0.0;
    }
    return -f * softplus(beta * x);
}

double fermi_dirac_entropy(double x, double beta)
{
    return fermi_dirac_log(x, beta) + fermi_dirac_log(-x, beta);
}

std::complex<double> softplus_continued(std::complex<double> w)
{
    if (w.real() > 0) {
        return w + log1p_c(std::exp(-w));
    }
    return log1p_c(std::exp(w));
}

std::complex<double> eval_h(std::complex<double> z, double beta)
{
    const std::complex<double> w = beta * z;
    check_cut(w);
    return -softplus_continued(w);
}

std::complex<double> eval_g(std::complex<double> z, double beta)
{
    const std::complex<double> w = beta * z;
    check_cut(w);
    return std::exp(-0.5 * softplus_continued(w));
}

std::complex<double> eval_gtilde(std::complex<double> z, double beta)
{
    const std::complex<double> w = beta * z;
    check_cut(w);
    const std::complex<double> l = softplus_continued(w);
    return -l * std::exp(-l);
}

} // namespace fermihart
