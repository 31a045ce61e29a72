#pragma once

#include "fermihart/hamiltonian.hpp"

#include <complex>
#include <span>

namespace fermihart {

struct SolverConfig
{
    double tol = 1e-5;  ///< relative residual ||b - A x|| / ||b||
    int max_iter = 1000;
    bool use_preconditioner = true;

    void validate() const;
};

struct SolveStats
{
    int iterations = 0;
    int restarts = 0;
    double residual = 0.0;  ///< final relative residual
};

/// BiCGSTAB for (s I - H) x = b with the Fourier preconditioner
/// M = s I - c K - mean(v) I.
///
/// Preconditioning is applied on the right, so the recursive residual is the
/// residual of the original system. With the preconditioner on, the product
/// A M^{-1} p collapses to p + (mean(v) - v) * M^{-1} p, which costs one FFT
/// pair per application instead of two.
///
/// The object owns its work vectors; one instance per thread.
class ShiftedSolver
{
  public:
    ShiftedSolver(const EffectiveHamiltonian& h, SolverConfig cfg);

    /// Solves from a zero initial guess into x. Throws SolverError on
    /// divergence (SolverDiverged) or on a second breakdown (Breakdown).
    SolveStats solve(std::complex<double> s, std::span<const std::complex<double>> b,
                     std::span<std::complex<double>> x);

    /// x <- M^{-1} x for shift s.
    void apply_preconditioner(std::complex<double> s, std::span<std::complex<double>> x);
    /// out <- (s I - H) in.
    void apply_shifted(std::complex<double> s, std::span<const std::complex<double>> in,
                       std::span<std::complex<double>> out);

    const SolverConfig& config() const noexcept
    {
        return cfg_;
    }

  private:
    void set_shift(std::complex<double> s);
    // out <- A M^{-1} in, with M^{-1} in stored in hat
    void apply_operator(std::span<const std::complex<double>> in, std::span<std::complex<double>> hat,
                        std::span<std::complex<double>> out);

    const EffectiveHamiltonian& h_;
    SolverConfig cfg_;
    double vbar_;
    std::complex<double> shift_;
    bool shift_ready_ = false;
    ComplexVector inv_symbol_;
    ComplexVector r_, r0_, p_, v_, s_, t_, phat_, shat_, scratch_;
};

ComplexVector solve_shifted(const EffectiveHamiltonian& h, std::complex<double> s,
                            std::span<const std::complex<double>> b, const SolverConfig& cfg,
                            SolveStats* stats = nullptr);

} // namespace fermihart
