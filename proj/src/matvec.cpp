#include "fermihart/matvec.hpp"

#include "fermihart/errors.hpp"
#include "fermihart/holomorphic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fermihart {

using cplx = std::complex<double>;

void MatvecStats::merge(const MatvecStats& other)
{
    solves += other.solves;
    max_iterations = std::max(max_iterations, other.max_iterations);
    total_iterations += other.total_iterations;
    worst_residual = std::max(worst_residual, other.worst_residual);
}

ContourEngine::ContourEngine(const EffectiveHamiltonian& h, SolverConfig cfg)
    : h_(h)
    , solver_(h, cfg)
    , rhs_(h.size())
    , x_(h.size())
{
}

void ContourEngine::apply(std::span<const PoleExpansion* const> expansions, std::span<const double> z,
                          std::span<RealVector> out, MatvecStats* stats)
{
    const std::size_t n = h_.size();
    if (z.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "vector length differs from Hamiltonian size");
    }
    if (expansions.empty() || out.size() != expansions.size()) {
        throw Error(ErrorCode::InvalidArgument, "need one output per expansion");
    }
    const PoleExpansion& first = *expansions[0];
    for (const auto* e : expansions) {
        if (!e->same_nodes(first)) {
            throw Error(ErrorCode::InvalidArgument, "expansions do not share nodes");
        }
    }
    for (auto& o : out) {
        o.assign(n, 0.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        rhs_[i] = z[i];
    }
    MatvecStats local;
    for (int j = 0; j < first.pole_count(); ++j) {
        // (s - H)^{-1} z; the conjugate node contributes the conjugate, hence 2 Re
        const SolveStats st = solver_.solve(first.nodes[j], rhs_, x_);
        ++local.solves;
        local.max_iterations = std::max(local.max_iterations, st.iterations);
        local.total_iterations += st.iterations;
        local.worst_residual = std::max(local.worst_residual, st.residual);
        for (std::size_t e = 0; e < expansions.size(); ++e) {
            const cplx w = 2.0 * expansions[e]->weights[j];
            auto& o = out[e];
            for (std::size_t i = 0; i < n; ++i) {
                o[i] += w.real() * x_[i].real() - w.imag() * x_[i].imag();
            }
        }
    }
    if (stats) {
        stats->merge(local);
    }
}

RealVector ContourEngine::apply(const PoleExpansion& p, std::span<const double> z, MatvecStats* stats)
{
    const PoleExpansion* ptr = &p;
    RealVector out;
    apply(std::span<const PoleExpansion* const>(&ptr, 1), z, std::span<RealVector>(&out, 1), stats);
    return out;
}

RealVector contour_matvec(const EffectiveHamiltonian& h, const PoleExpansion& p, std::span<const double> z,
                          const SolverConfig& cfg, MatvecStats* stats)
{
    ContourEngine engine(h, cfg);
    return engine.apply(p, z, stats);
}

std::vector<RealVector> contour_matvec_multi(const EffectiveHamiltonian& h, std::span<const PoleExpansion> expansions,
                                             std::span<const double> z, const SolverConfig& cfg, MatvecStats* stats)
{
    std::vector<const PoleExpansion*> ptrs;
    for (const auto& e : expansions) {
        ptrs.push_back(&e);
    }
    std::vector<RealVector> out(expansions.size());
    ContourEngine engine(h, cfg);
    engine.apply(ptrs, z, out, stats);
    return out;
}

ComplexVector contour_matvec_unfolded(const EffectiveHamiltonian& h, const PoleExpansion& p,
                                      std::span<const double> z, const SolverConfig& cfg)
{
    const std::size_t n = h.size();
    if (z.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "vector length differs from Hamiltonian size");
    }
    ShiftedSolver solver(h, cfg);
    ComplexVector rhs(z.begin(), z.end());
    ComplexVector x(n), out(n, cplx(0.0));
    const auto nodes = p.all_nodes();
    const auto weights = p.all_weights();
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        solver.solve(nodes[j], rhs, x);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += weights[j] * x[i];
        }
    }
    return out;
}

std::vector<double> chebyshev_coefficients(const std::function<double(double)>& f, double lo, double hi, int order)
{
    if (order < 0) {
        throw Error(ErrorCode::InvalidArgument, "Chebyshev order must be nonnegative");
    }
    const int m = order + 1;
    std::vector<double> fx(m);
    std::vector<double> theta(m);
    for (int k = 0; k < m; ++k) {
        theta[k] = std::numbers::pi * (k + 0.5) / m;
        fx[k] = f(0.5 * (hi + lo) + 0.5 * (hi - lo) * std::cos(theta[k]));
    }
    std::vector<double> c(m);
    for (int j = 0; j < m; ++j) {
        double sum = 0.0;
        for (int k = 0; k < m; ++k) {
            sum += fx[k] * std::cos(j * theta[k]);
        }
        c[j] = 2.0 * sum / m;
    }
    c[0] *= 0.5;
    return c;
}

RealVector chebyshev_apply(const EffectiveHamiltonian& h, std::span<const double> coeffs, std::span<const double> z,
                           SpectralInterval bounds)
{
    const std::size_t n = h.size();
    if (z.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "vector length differs from Hamiltonian size");
    }
    if (!(bounds.lo < bounds.hi)) {
        throw Error(ErrorCode::InvalidInterval, "Chebyshev bounds need lo < hi");
    }
    RealVector out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = coeffs[0] * z[i];
    }
    if (coeffs.size() == 1) {
        return out;
    }
    const double a = 2.0 / (bounds.hi - bounds.lo);
    const double b = -(bounds.hi + bounds.lo) / (bounds.hi - bounds.lo);

    ComplexVector in_c(n), out_c(n), scratch(n);
    // y <- Hs x
    auto scaled = [&](const RealVector& x, RealVector& y) {
        for (std::size_t i = 0; i < n; ++i) {
            in_c[i] = x[i];
        }
        h.apply(in_c, out_c, scratch);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = a * out_c[i].real() + b * x[i];
        }
    };

    RealVector prev(z.begin(), z.end());
    RealVector curr(n), next(n);
    scaled(prev, curr);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] += coeffs[1] * curr[i];
    }
    for (std::size_t j = 2; j < coeffs.size(); ++j) {
        scaled(curr, next);
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = 2.0 * next[i] - prev[i];
            out[i] += coeffs[j] * next[i];
        }
        std::swap(prev, curr);
        std::swap(curr, next);
    }
    return out;
}

RealVector chebyshev_matvec(const EffectiveHamiltonian& h, double beta, int order, std::span<const double> z,
                            SpectralInterval bounds)
{
    if (z.size() != h.size()) {
        throw Error(ErrorCode::LengthMismatch, "vector length differs from Hamiltonian size");
    }
    if (bounds.lo > bounds.hi) {
        throw Error(ErrorCode::InvalidInterval, "Chebyshev bounds need lo <= hi");
    }
    if (bounds.lo == bounds.hi) {
        // H is a multiple of the identity
        const double f = sqrt_fermi_dirac(bounds.lo, beta);
        RealVector out(z.begin(), z.end());
        for (auto& x : out) {
            x *= f;
        }
        return out;
    }
    const auto coeffs =
        chebyshev_coefficients([beta](double x) { return sqrt_fermi_dirac(x, beta); }, bounds.lo, bounds.hi, order);
    return chebyshev_apply(h, coeffs, z, bounds);
}

} // namespace fermihart
