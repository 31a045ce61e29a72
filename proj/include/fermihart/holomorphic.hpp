#pragma once

#include <complex>

namespace fermihart {

// Scalar Fermi-Dirac family. f_beta(x) = 1/(1 + exp(beta x)).

double fermi_dirac(double x, double beta);
double sqrt_fermi_dirac(double x, double beta);
/// f log f, with 0 log 0 = 0.
double fermi_dirac_log(double x, double beta);
/// f log f + (1-f) log(1-f), the per-level Fermi-Dirac entropy.
double fermi_dirac_entropy(double x, double beta);

/// log(1 + exp(w)) continued holomorphically off {iy : |y| >= pi}.
///
/// On Re w > 0 this is w + log1p(exp(-w)); the principal branch of
/// log(1 + e^w) agrees with it up to 2 pi i floor((Im w + pi)/(2 pi)).
std::complex<double> softplus_continued(std::complex<double> w);

/// Extension of log f_beta; h_beta(z) = h_1(beta z).
std::complex<double> eval_h(std::complex<double> z, double beta);
/// Extension of f_beta^{1/2}, equal to exp(h/2).
std::complex<double> eval_g(std::complex<double> z, double beta);
/// Extension of f_beta log f_beta.
std::complex<double> eval_gtilde(std::complex<double> z, double beta);

} // namespace fermihart
