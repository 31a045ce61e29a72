#include "fermihart/bicgstab.hpp"

#include "fermihart/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fermihart {

namespace {

using cplx = std::complex<double>;

cplx dot(std::span<const cplx> a, std::span<const cplx> b)
{
    cplx sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sum += std::conj(a[i]) * b[i];
    }
    return sum;
}

double norm(std::span<const cplx> a)
{
    double sum = 0.0;
    for (const auto& x : a) {
        sum += std::norm(x);
    }
    return std::sqrt(sum);
}

} // namespace

void SolverConfig::validate() const
{
    if (!(tol > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "solver tolerance must be positive");
    }
    if (max_iter < 1) {
        throw Error(ErrorCode::InvalidArgument, "solver max_iter must be at least 1");
    }
}

ShiftedSolver::ShiftedSolver(const EffectiveHamiltonian& h, SolverConfig cfg)
    : h_(h)
    , cfg_(cfg)
    , vbar_(h.mean_potential())
{
    cfg_.validate();
    const std::size_t n = h.size();
    for (auto* vec : {&inv_symbol_, &r_, &r0_, &p_, &v_, &s_, &t_, &phat_, &shat_, &scratch_}) {
        vec->assign(n, cplx(0.0));
    }
}

void ShiftedSolver::set_shift(cplx s)
{
    if (shift_ready_ && s == shift_) {
        return;
    }
    const auto& kin = *h_.kinetic;
    const auto& symbol = kin.symbol();
    const double n = static_cast<double>(h_.size());
    const double ck = h_.c * kin.scale();
    for (std::size_t k = 0; k < symbol.size(); ++k) {
        inv_symbol_[k] = 1.0 / ((s - vbar_ - ck * symbol[k]) * n);
    }
    shift_ = s;
    shift_ready_ = true;
}

void ShiftedSolver::apply_preconditioner(cplx s, std::span<cplx> x)
{
    set_shift(s);
    const auto& plan = h_.kinetic->plan();
    plan.forward(x);
    for (std::size_t k = 0; k < x.size(); ++k) {
        x[k] *= inv_symbol_[k];
    }
    plan.backward(x);
}

void ShiftedSolver::apply_shifted(cplx s, std::span<const cplx> in, std::span<cplx> out)
{
    h_.apply(in, out, scratch_);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = s * in[i] - out[i];
    }
}

void ShiftedSolver::apply_operator(std::span<const cplx> in, std::span<cplx> hat, std::span<cplx> out)
{
    std::copy(in.begin(), in.end(), hat.begin());
    if (cfg_.use_preconditioner) {
        apply_preconditioner(shift_, hat);
        const auto& v = h_.v;
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] = in[i] + (vbar_ - v[i]) * hat[i];
        }
    } else {
        apply_shifted(shift_, hat, out);
    }
}

SolveStats ShiftedSolver::solve(cplx s, std::span<const cplx> b, std::span<cplx> x)
{
    const std::size_t n = h_.size();
    if (b.size() != n || x.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "right-hand side length differs from Hamiltonian size");
    }
    std::fill(x.begin(), x.end(), cplx(0.0));
    SolveStats stats;
    const double bnorm = norm(b);
    if (bnorm == 0.0) {
        return stats;
    }
    set_shift(s);
    const double target = cfg_.tol * bnorm;
    constexpr double breakdown_eps = 1e-14;

    std::copy(b.begin(), b.end(), r_.begin());
    double rnorm = bnorm;
    double best = 1.0;

    auto restart = [&] {
        std::copy(r_.begin(), r_.end(), r0_.begin());
        std::fill(p_.begin(), p_.end(), cplx(0.0));
        std::fill(v_.begin(), v_.end(), cplx(0.0));
    };
    restart();
    cplx rho = 1.0, alpha = 1.0, omega = 1.0;
    double r0norm = rnorm;

    auto breakdown = [&](const char* what) {
        if (stats.restarts >= 1) {
            throw SolverError(ErrorCode::Breakdown, std::string("BiCGSTAB breakdown (") + what + ") after restart",
                              best);
        }
        ++stats.restarts;
        // restart from the current iterate with a fresh shadow residual
        apply_shifted(s, x, t_);
        for (std::size_t i = 0; i < n; ++i) {
            r_[i] = b[i] - t_[i];
        }
        rnorm = norm(r_);
        r0norm = rnorm;
        restart();
        rho = alpha = omega = 1.0;
    };

    while (stats.iterations < cfg_.max_iter) {
        if (rnorm <= target) {
            break;
        }
        const cplx rho_new = dot(r0_, r_);
        if (std::abs(rho_new) <= breakdown_eps * r0norm * rnorm) {
            breakdown("rho");
            continue;
        }
        const cplx beta = (rho_new / rho) * (alpha / omega);
        rho = rho_new;
        for (std::size_t i = 0; i < n; ++i) {
            p_[i] = r_[i] + beta * (p_[i] - omega * v_[i]);
        }
        ++stats.iterations;
        apply_operator(p_, phat_, v_);
        const cplx r0v = dot(r0_, v_);
        if (std::abs(r0v) <= breakdown_eps * r0norm * norm(v_)) {
            breakdown("alpha");
            continue;
        }
        alpha = rho / r0v;
        for (std::size_t i = 0; i < n; ++i) {
            s_[i] = r_[i] - alpha * v_[i];
        }
        const double snorm = norm(s_);
        if (snorm <= target) {
            for (std::size_t i = 0; i < n; ++i) {
                x[i] += alpha * phat_[i];
            }
            std::copy(s_.begin(), s_.end(), r_.begin());
            rnorm = snorm;
            break;
        }
        apply_operator(s_, shat_, t_);
        const double tt = std::real(dot(t_, t_));
        omega = tt > 0.0 ? dot(t_, s_) / tt : cplx(0.0);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * phat_[i] + omega * shat_[i];
            r_[i] = s_[i] - omega * t_[i];
        }
        rnorm = norm(r_);
        best = std::min(best, rnorm / bnorm);
        if (rnorm > target && std::abs(omega) == 0.0) {
            breakdown("omega");
        }
    }
    stats.residual = rnorm / bnorm;
    if (rnorm > target) {
        throw SolverError(ErrorCode::SolverDiverged,
                          "BiCGSTAB reached max_iter = " + std::to_string(cfg_.max_iter) +
                              " with relative residual " + std::to_string(stats.residual),
                          stats.residual);
    }
    return stats;
}

ComplexVector solve_shifted(const EffectiveHamiltonian& h, cplx s, std::span<const cplx> b, const SolverConfig& cfg,
                            SolveStats* stats)
{
    ShiftedSolver solver(h, cfg);
    ComplexVector x(h.size());
    const SolveStats st = solver.solve(s, b, x);
    if (stats) {
        *stats = st;
    }
    return x;
}

} // namespace fermihart
