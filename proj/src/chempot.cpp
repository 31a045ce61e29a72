#include "fermihart/chempot.hpp"

#include "fermihart/errors.hpp"

#include <cmath>
#include <iostream>

namespace fermihart {

MuBracket mu_bracket(const EffectiveHamiltonian& c_ham, double beta, double c_h, double nu, std::size_t dense_limit)
{
    if (!(nu > 0.0 && nu < 1.0)) {
        throw Error(ErrorCode::DegenerateFilling, "filling factor must lie strictly between 0 and 1");
    }
    if (!(beta > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "beta must be positive");
    }
    double lmin = 0.0, lmax = 0.0;
    if (c_ham.size() <= dense_limit) {
        const Eigen::VectorXd ev = dense_spectrum(dense_hamiltonian(c_ham, dense_limit), dense_limit);
        lmin = ev.minCoeff();
        lmax = ev.maxCoeff();
    } else {
        const SpectralInterval b = c_ham.spectral_bounds(0.0);
        lmin = b.lo;
        lmax = b.hi;
    }
    const double t_lo = std::isinf(beta) ? 0.0 : std::log(1.0 / nu) / beta;
    const double t_hi = std::isinf(beta) ? 0.0 : std::log(1.0 / (1.0 - nu)) / beta;
    return {lmin - c_h - t_lo, lmax + c_h + t_hi};
}

const MuEvaluation& MuScan::best_evaluation() const
{
    if (best < 0) {
        throw Error(ErrorCode::NotConverged, "every point of the chemical potential scan failed");
    }
    return evaluations[best];
}

namespace {

void scan_pass(const MuOracle& oracle, double N, double lo, double hi, int K, std::vector<MuEvaluation>& out,
               const std::function<void(const std::string&)>& warn)
{
    for (int k = 0; k <= K; ++k) {
        MuEvaluation e;
        e.mu = K == 0 ? lo : lo + (hi - lo) * static_cast<double>(k) / K;
        try {
            const MuPoint p = oracle(e.mu);
            e.g = N * e.mu + p.objective;
            e.electrons = p.electrons;
            e.ok = std::isfinite(e.g);
            if (!e.ok) {
                e.error = "non-finite objective";
            }
        } catch (const std::exception& ex) {
            e.error = ex.what();
        }
        if (!e.ok) {
            warn("mu-scan: point mu = " + std::to_string(e.mu) + " excluded (" + e.error + ")");
        }
        out.push_back(std::move(e));
    }
}

int argmax(const std::vector<MuEvaluation>& ev, std::size_t from)
{
    int best = -1;
    for (std::size_t i = from; i < ev.size(); ++i) {
        if (ev[i].ok && (best < 0 || ev[i].g > ev[best].g)) {
            best = static_cast<int>(i);
        }
    }
    return best;
}

} // namespace

MuScan mu_scan(const MuOracle& oracle, double N_target, std::size_t n, MuBracket bracket, const MuScanOptions& opts)
{
    if (opts.K < 1 || opts.refine < 0) {
        throw Error(ErrorCode::InvalidArgument, "scan needs K >= 1 and refine >= 0");
    }
    if (!(bracket.lo < bracket.hi)) {
        throw Error(ErrorCode::InvalidInterval, "scan bracket needs lo < hi");
    }
    if (!(N_target >= 0.0 && N_target <= static_cast<double>(n))) {
        throw Error(ErrorCode::InvalidArgument, "target electron number must lie in [0, n]");
    }
    std::function<void(const std::string&)> warn = opts.warn;
    if (!warn) {
        warn = [](const std::string& m) { std::cerr << "warning: " << m << '\n'; };
    }

    MuScan scan;
    scan.N_target = N_target;
    scan.nu = N_target / static_cast<double>(n);
    scan.bracket = bracket;
    scan.K = opts.K;
    scan_pass(oracle, N_target, bracket.lo, bracket.hi, opts.K, scan.evaluations, warn);
    scan.best = argmax(scan.evaluations, 0);

    double lo = bracket.lo, hi = bracket.hi;
    for (int pass = 0; pass < opts.refine && scan.best >= 0; ++pass) {
        const double h = (hi - lo) / opts.K;
        const double center = scan.evaluations[scan.best].mu;
        lo = std::max(bracket.lo, center - h);
        hi = std::min(bracket.hi, center + h);
        scan_pass(oracle, N_target, lo, hi, opts.K, scan.evaluations, warn);
        scan.best = argmax(scan.evaluations, 0);
    }
    return scan;
}

double mu_bisect(const MuOracle& oracle, double N_target, MuBracket bracket, double tol, int max_iter)
{
    double lo = bracket.lo, hi = bracket.hi;
    if (!(lo < hi)) {
        throw Error(ErrorCode::InvalidInterval, "bisection bracket needs lo < hi");
    }
    for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (oracle(mid).electrons < N_target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

MuOracle dense_mu_oracle(std::shared_ptr<const HartreeProblem> problem, SCFOptions opts)
{
    return [problem, opts](double mu) {
        HartreeProblem p = *problem;
        p.mu = mu;
        const SCFResult r = dense_scf(p, opts);
        return MuPoint{r.free_energy - mu * r.electrons, r.electrons};
    };
}

MuOracle stochastic_mu_oracle(std::shared_ptr<const HartreeProblem> problem, RunOptions opts)
{
    return [problem, opts](double mu) {
        auto p = std::make_shared<HartreeProblem>(*problem);
        p->mu = mu;
        MirrorDescent md(p, opts);
        md.run([](const MetricsRecord&) {});
        const ObjectiveEstimate est = md.objective();
        return MuPoint{est.free_energy(p->beta) - mu * est.electrons, est.electrons};
    };
}

} // namespace fermihart
