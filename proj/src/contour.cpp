#include "fermihart/contour.hpp"

#include "fermihart/errors.hpp"
#include "fermihart/holomorphic.hpp"

#include <boost/math/special_functions/jacobi_elliptic.hpp>

#include <algorithm>

#include <cmath>
#include <numbers>

namespace fermihart {

namespace {

using cplx = std::complex<double>;

double agm(double a, double b)
{
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-16 * a; ++i) {
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
    }
    return 0.5 * (a + b);
}

// K(k) = pi / (2 AGM(1, k')), from the complementary modulus.
double complete_elliptic_k(double k_complement)
{
    return std::numbers::pi / (2.0 * agm(1.0, k_complement));
}

struct JacobiTriple
{
    cplx sn, cn, dn;
};

// sn, cn, dn at x + iy by the addition formulas with the real-argument values
// at modulus k (for x) and k' (for y).
JacobiTriple jacobi_complex(double x, double y, double k, double kc)
{
    double c = 0, d = 0, c1 = 0, d1 = 0;
    const double s = boost::math::jacobi_elliptic(k, x, &c, &d);
    const double s1 = boost::math::jacobi_elliptic(kc, y, &c1, &d1);
    const double den = c1 * c1 + k * k * s * s * s1 * s1;
    return {
        cplx(s * d1, c * d * s1 * c1) / den,
        cplx(c * c1, -s * d * s1 * d1) / den,
        cplx(d * c1 * d1, -k * k * s * c * s1) / den,
    };
}

} // namespace

const char* to_string(ContourKind kind)
{
    switch (kind) {
        case ContourKind::fd: return "fd";
        case ContourKind::sqrt_fd: return "sqrt_fd";
        case ContourKind::fd_log_fd: return "fd_log_fd";
        case ContourKind::fd_log_fd_reflected: return "fd_log_fd_reflected";
    }
    return "unknown";
}

cplx contour_function(ContourKind kind, cplx z, double beta)
{
    switch (kind) {
        case ContourKind::fd: return std::exp(eval_h(z, beta));
        case ContourKind::sqrt_fd: return eval_g(z, beta);
        case ContourKind::fd_log_fd: return eval_gtilde(z, beta);
        case ContourKind::fd_log_fd_reflected: return eval_gtilde(-z, beta);
    }
    return {};
}

double contour_function_real(ContourKind kind, double x, double beta)
{
    switch (kind) {
        case ContourKind::fd: return fermi_dirac(x, beta);
        case ContourKind::sqrt_fd: return sqrt_fermi_dirac(x, beta);
        case ContourKind::fd_log_fd: return fermi_dirac_log(x, beta);
        case ContourKind::fd_log_fd_reflected: return fermi_dirac_log(-x, beta);
    }
    return 0.0;
}

PoleExpansion PoleExpansion::with_kind(ContourKind other) const
{
    PoleExpansion out = *this;
    out.kind = other;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        out.weights[j] = quad_weights[j] * contour_function(other, nodes[j], beta);
    }
    return out;
}

std::vector<cplx> PoleExpansion::all_nodes() const
{
    std::vector<cplx> out(nodes);
    for (const auto& s : nodes) {
        out.push_back(std::conj(s));
    }
    return out;
}

std::vector<cplx> PoleExpansion::all_weights() const
{
    std::vector<cplx> out(weights);
    for (const auto& w : weights) {
        out.push_back(std::conj(w));
    }
    return out;
}

double PoleExpansion::evaluate(double x) const
{
    cplx sum = 0.0;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
        sum += weights[j] / (nodes[j] - x);
    }
    return 2.0 * sum.real();
}

PoleExpansion build_contour(double lam_lo, double lam_hi, double beta, int pole_count, ContourKind kind)
{
    if (!(lam_lo < lam_hi) || !std::isfinite(lam_lo) || !std::isfinite(lam_hi)) {
        throw Error(ErrorCode::InvalidInterval, "contour needs lam_lo < lam_hi");
    }
    if (pole_count < 2 || pole_count % 2 != 0) {
        throw Error(ErrorCode::OddPoleCount, "pole count must be even and at least 2");
    }
    if (!(beta > 0.0) || !std::isfinite(beta)) {
        throw Error(ErrorCode::InvalidArgument, "contour needs a finite positive beta");
    }

    const double a = std::numbers::pi / beta;
    const double a2 = a * a;
    const double e_max = std::max(std::abs(lam_lo), std::abs(lam_hi));
    const double e_min = (lam_lo <= 0.0 && lam_hi >= 0.0) ? 0.0 : std::min(std::abs(lam_lo), std::abs(lam_hi));

    // xi = z^2 + a^2 maps the spectrum into [m, M] and the cut onto (-inf, 0]
    const double m = a2 + e_min * e_min;
    const double M = a2 + e_max * e_max;
    const double r = std::sqrt(M / m);
    const double k = (r - 1.0) / (r + 1.0);
    const double kc = 2.0 * std::sqrt(r) / (r + 1.0);
    const double K = complete_elliptic_k(kc);
    const double Kp = complete_elliptic_k(k);
    const double scale = std::sqrt(m * M);

    // trapezoid rule on the line Im t = K'/2 over one real period 4K
    const int count = pole_count;
    const double h = 4.0 * K / count;

    PoleExpansion p;
    p.beta = beta;
    p.interval = {lam_lo, lam_hi};
    p.kind = kind;
    p.nodes.reserve(count);
    p.quad_weights.reserve(count);
    p.weights.reserve(count);

    const cplx two_pi_i(0.0, 2.0 * std::numbers::pi);
    for (int j = 0; j < count; ++j) {
        const double x = -K + (j + 0.5) * h;
        const auto [sn, cn, dn] = jacobi_complex(x, 0.5 * Kp, k, kc);
        const cplx denom = 1.0 / k - sn;
        const cplx xi = scale * (1.0 / k + sn) / denom;
        const cplx dxi = scale * (2.0 / k) * cn * dn / (denom * denom) * h;

        // each xi node stands for the pair +-z; keep the upper half-plane one.
        // clockwise map, leading minus
        cplx z = std::sqrt(xi - a2);
        if (z.imag() < 0.0) {
            z = -z;
        }
        const cplx w = -dxi / (two_pi_i * 2.0 * z);
        p.nodes.push_back(z);
        p.quad_weights.push_back(w);
        p.weights.push_back(w * contour_function(kind, z, beta));
    }
    return p;
}

double scalar_contour_error(const PoleExpansion& p, int samples)
{
    double err = 0.0;
    auto sweep = [&](double lo, double hi) {
        for (int i = 0; i < samples; ++i) {
            const double x = samples == 1 ? lo : lo + (hi - lo) * i / (samples - 1);
            err = std::max(err, std::abs(p.evaluate(x) - contour_function_real(p.kind, x, p.beta)));
        }
    };
    sweep(p.interval.lo, p.interval.hi);
    // second pass on the window |x| <= 40/beta
    const double lo = std::max(p.interval.lo, -40.0 / p.beta);
    const double hi = std::min(p.interval.hi, 40.0 / p.beta);
    if (lo < hi) {
        sweep(lo, hi);
    }
    return err;
}

int select_pole_count(SpectralInterval interval, double beta, double target, ContourKind kind, int max_poles)
{
    for (int np = 2; np < max_poles; np += 2) {
        if (scalar_contour_error(build_contour(interval, beta, np, kind)) <= target) {
            return np;
        }
    }
    return max_poles;
}

} // namespace fermihart
