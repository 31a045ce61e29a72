#include "fermihart/experiments.hpp"

#include "fermihart/errors.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

namespace fermihart {

using nlohmann::json;

namespace {

std::string out_path(const RunConfig& cfg, const std::string& name)
{
    return (std::filesystem::path(cfg.output.directory) / name).string();
}

std::ofstream open_output(const std::string& path)
{
    const auto parent = std::filesystem::path(path).parent_path();
    std::error_code ec;
    if (!parent.empty()) {
        std::filesystem::create_directories(parent, ec);
    }
    std::ofstream out(path);
    if (ec || !out) {
        throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    return out;
}

double relative_error(std::span<const double> a, std::span<const double> ref)
{
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += (a[i] - ref[i]) * (a[i] - ref[i]);
        den += ref[i] * ref[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

json opt_json(const std::optional<double>& x)
{
    return x ? json(*x) : json();
}

std::optional<RealVector> reference_density(const RunConfig& cfg, const HartreeProblem& problem, std::ostream& log)
{
    const std::string stem = out_path(cfg, "scf_density");
    if (std::filesystem::exists(stem + ".bin") && std::filesystem::exists(stem + ".json")) {
        DensityDump d = read_density(stem);
        if (d.grid == problem.grid) {
            log << "reference density read from " << stem << ".bin\n";
            return std::move(d.rho);
        }
        log << "ignoring " << stem << ".bin: grid differs\n";
    }
    log << "computing the dense SCF reference inline\n";
    const SCFResult r = dense_scf(problem, cfg.scf);
    log << "dense SCF: " << r.iterations << " iterations, residual " << r.residual << '\n';
    return r.rho_star;
}

} // namespace

double loglog_slope(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw Error(ErrorCode::InvalidArgument, "slope fit needs at least two matching points");
    }
    double mx = 0.0, my = 0.0;
    const double k = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]) / k;
        my += std::log(y[i]) / k;
    }
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

RunSummary run_experiment(const RunConfig& cfg, std::ostream& log)
{
    auto problem = make_problem(cfg.problem_spec());
    const RunOptions opts = cfg.run_options(*problem);

    std::optional<RealVector> reference;
    if (cfg.run.dense_validation) {
        reference = reference_density(cfg, *problem, log);
    }

    MirrorDescent md(problem, opts, reference);
    RunSummary s;
    s.metrics_path = out_path(cfg, "metrics.csv");
    MetricsWriter writer(s.metrics_path);
    double timed = 0.0;
    long timed_count = 0;
    const long dump_every = cfg.output.density_dump_every;
    const long report = std::max<long>(1, opts.T_max / 10);
    while (auto rec = md.step()) {
        writer.write(*rec);
        s.last = *rec;
        ++s.iterations;
        if (rec->wall_time_matvec_batch) {
            timed += *rec->wall_time_matvec_batch;
            ++timed_count;
        }
        if (dump_every > 0 && rec->t % dump_every == 0) {
            dump_density(md.density(), problem->grid, out_path(cfg, "density_t" + std::to_string(rec->t)));
        }
        if (rec->t % report == 0) {
            log << "t = " << rec->t << "  F/vol = " << rec->free_energy_per_volume;
            if (rec->rel_density_error) {
                log << "  rel density error = " << *rec->rel_density_error;
            }
            log << '\n';
        }
    }
    writer.close();

    if (s.iterations > 0) {
        s.density = md.density();
        s.objective = md.objective();
        dump_density(s.density, problem->grid, out_path(cfg, "density_final"));
    }
    s.rel_density_error = s.last.rel_density_error;
    if (timed_count > 0) {
        s.mean_matvec_seconds = timed / static_cast<double>(timed_count);
    }

    json summary{{"iterations", s.iterations},
                 {"final_t", s.last.t},
                 {"free_energy_per_volume", s.last.free_energy_per_volume},
                 {"electrons_per_volume", s.last.electrons_per_volume},
                 {"rel_density_error", opt_json(s.rel_density_error)},
                 {"mean_wall_time_matvec_batch", opt_json(s.mean_matvec_seconds)},
                 {"n", problem->size()},
                 {"c_h", opts.schedule.c_h}};
    write_sidecar(out_path(cfg, "metrics.json"), config_to_json(cfg), summary);

    if (cfg.validation.max_rel_density_error) {
        if (!s.rel_density_error) {
            throw ValidationFailure("validation.max_rel_density_error needs run.dense_validation");
        }
        if (!(*s.rel_density_error <= *cfg.validation.max_rel_density_error)) {
            throw ValidationFailure("relative density error " + std::to_string(*s.rel_density_error) +
                                    " exceeds " + std::to_string(*cfg.validation.max_rel_density_error));
        }
    }
    return s;
}

SCFResult scf_experiment(const RunConfig& cfg, std::ostream& log)
{
    auto problem = make_problem(cfg.problem_spec());
    const SCFResult r = dense_scf(*problem, cfg.scf);
    log << "dense SCF: " << r.iterations << " iterations, residual " << r.residual << ", F = " << r.free_energy
        << ", N = " << r.electrons << '\n';
    dump_density(r.rho_star, problem->grid, out_path(cfg, "scf_density"));
    json summary{{"iterations", r.iterations},
                 {"residual", r.residual},
                 {"free_energy", r.free_energy},
                 {"free_energy_per_volume", r.free_energy / problem->grid.volume},
                 {"hartree_energy", r.hartree_energy},
                 {"single_particle_energy", r.single_particle_energy},
                 {"entropy", r.entropy},
                 {"electrons", r.electrons}};
    write_sidecar(out_path(cfg, "scf.json"), config_to_json(cfg), summary);
    return r;
}

std::vector<ContourCheckRow> contour_check(const RunConfig& cfg, std::ostream& log)
{
    auto problem = make_problem(cfg.problem_spec());
    const std::size_t n = problem->size();
    EffectiveHamiltonian h = problem->single_particle();
    {
        const Eigen::VectorXd ev = dense_spectrum(dense_hamiltonian(h, cfg.scf.dense_cutoff), cfg.scf.dense_cutoff);
        if (cfg.contour_check.normalize) {
            const double lo = (*cfg.contour_check.normalize)[0], hi = (*cfg.contour_check.normalize)[1];
            const double a = (hi - lo) / (ev.maxCoeff() - ev.minCoeff());
            const double b = lo - a * ev.minCoeff();
            for (auto& x : h.v) {
                x = a * x + b;
            }
            h.c *= a;
        }
    }
    const DenseEigen eig(dense_hamiltonian(h, cfg.scf.dense_cutoff), cfg.scf.dense_cutoff);
    const SpectralInterval interval{eig.values().minCoeff(), eig.values().maxCoeff()};

    std::vector<int> poles = cfg.contour_check.pole_counts;
    if (poles.empty()) {
        for (int p = 4; p <= 40; p += 2) {
            poles.push_back(p);
        }
    }
    std::vector<double> betas = cfg.contour_check.betas;
    if (betas.empty()) {
        betas.push_back(cfg.physics.beta);
    }
    const Substreams streams(cfg.run.seed);
    std::vector<RealVector> zs;
    for (int j = 0; j < cfg.contour_check.samples; ++j) {
        zs.push_back(streams.gaussian(0, static_cast<std::uint64_t>(j), n));
    }
    const SolverConfig solver{cfg.contour_check.tol, cfg.estimator.max_iter, cfg.estimator.preconditioner};

    std::vector<ContourCheckRow> rows;
    for (double beta : betas) {
        const auto g = dense_scalar(DenseFunction::sqrt_fd, beta);
        const Eigen::VectorXd gl = eig.values().unaryExpr([&](double x) { return g(x); });
        std::vector<RealVector> exact;
        for (const auto& z : zs) {
            const Eigen::VectorXd ze = Eigen::Map<const Eigen::VectorXd>(z.data(), static_cast<Eigen::Index>(n));
            const Eigen::VectorXd y = eig.vectors() * (gl.asDiagonal() * (eig.vectors().transpose() * ze));
            exact.emplace_back(y.data(), y.data() + y.size());
        }
        for (int np : poles) {
            const PoleExpansion p = build_contour(interval, beta, np, ContourKind::sqrt_fd);
            ContourEngine engine(h, solver);
            ContourCheckRow row{beta, np, 0.0, 0.0, 0};
            std::vector<double> errs;
            for (std::size_t j = 0; j < zs.size(); ++j) {
                MatvecStats st;
                const RealVector y = engine.apply(p, zs[j], &st);
                errs.push_back(relative_error(y, exact[j]));
                row.max_solver_iterations = std::max(row.max_solver_iterations, st.max_iterations);
            }
            row.median_rel_error = median(errs);
            row.max_rel_error = *std::max_element(errs.begin(), errs.end());
            log << "beta = " << beta << "  N_p = " << np << "  median rel error = " << row.median_rel_error << '\n';
            rows.push_back(row);
        }
    }

    const std::string path = out_path(cfg, "contour_check.csv");
    std::ofstream out = open_output(path);
    out << "beta,N_p,median_rel_error,max_rel_error,max_solver_iterations\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,%.17g,%.17g,%d\n", r.beta, r.N_p, r.median_rel_error,
                      r.max_rel_error, r.max_solver_iterations);
        out << buf;
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }

    if (cfg.validation.max_contour_error) {
        for (double beta : betas) {
            const auto last = std::find_if(rows.rbegin(), rows.rend(), [&](const auto& r) { return r.beta == beta; });
            if (!(last->median_rel_error <= *cfg.validation.max_contour_error)) {
                throw ValidationFailure("contour error " + std::to_string(last->median_rel_error) + " at beta " +
                                        std::to_string(beta) + " exceeds the validation threshold");
            }
        }
    }
    return rows;
}

MuScanSummary mu_scan_experiment(const RunConfig& cfg, std::ostream& log)
{
    auto problem = make_problem(cfg.problem_spec());
    const std::size_t n = problem->size();
    const double N = cfg.mu_scan.N_target.value_or(0.5 * static_cast<double>(n));
    const double nu = N / static_cast<double>(n);
    const double c_h = problem->interaction ? interaction_row_norm(*problem->interaction) : 0.0;
    const MuBracket bracket = mu_bracket(problem->single_particle(), problem->beta, c_h, nu);
    log << "mu bracket [" << bracket.lo << ", " << bracket.hi << "] for N = " << N << '\n';

    MuOracle oracle = cfg.mu_scan.oracle == "dense" ? dense_mu_oracle(problem, cfg.scf)
                                                     : stochastic_mu_oracle(problem, cfg.run_options(*problem));
    MuScanSummary s;
    if (cfg.mu_scan.mode == "bisect") {
        s.best_mu = mu_bisect(oracle, N, bracket);
        const MuPoint p = oracle(s.best_mu);
        s.electrons = p.electrons;
        s.scan.N_target = N;
        s.scan.nu = nu;
        s.scan.bracket = bracket;
        s.scan.evaluations.push_back({s.best_mu, N * s.best_mu + p.objective, p.electrons, true, {}});
        s.scan.best = 0;
    } else {
        MuScanOptions o;
        o.K = cfg.mu_scan.K;
        o.refine = cfg.mu_scan.refine;
        o.warn = [&log](const std::string& m) { log << "warning: " << m << '\n'; };
        s.scan = mu_scan(oracle, N, n, bracket, o);
        const MuEvaluation& best = s.scan.best_evaluation();
        s.best_mu = best.mu;
        s.electrons = best.electrons;
    }
    log << "best mu = " << s.best_mu << ", Tr X = " << s.electrons << '\n';

    const std::string path = out_path(cfg, "mu_scan.csv");
    std::ofstream out = open_output(path);
    out << "mu,g,electrons,ok\n";
    char buf[128];
    for (const auto& e : s.scan.evaluations) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", e.mu, e.g, e.electrons, e.ok ? 1 : 0);
        out << buf;
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
    write_sidecar(out_path(cfg, "mu_scan.json"), config_to_json(cfg),
                  json{{"N_target", N},
                       {"bracket", {bracket.lo, bracket.hi}},
                       {"best_mu", s.best_mu},
                       {"electrons", s.electrons}});
    return s;
}

std::vector<BenchRow> bench_matvec(const RunConfig& cfg, std::ostream& log)
{
    std::vector<BenchRow> rows;
    for (double beta : cfg.bench.betas) {
        RunConfig c = cfg;
        c.physics.beta = beta;
        auto problem = make_problem(c.problem_spec());
        RunOptions o = c.run_options(*problem);
        o.T_max = cfg.bench.repeats;
        o.batch_size = cfg.bench.N_g;
        o.timing_stride = 1;
        o.entropy_every = std::numeric_limits<int>::max();
        o.early_stop = false;
        if (cfg.bench.target_error) {
            const SpectralInterval iv = problem->single_particle().spectral_bounds(o.spectral_slack);
            o.pole_count = select_pole_count(iv, beta, *cfg.bench.target_error);
        }
        MirrorDescent md(problem, o);
        BenchRow row;
        row.n = problem->size();
        row.length = problem->grid.lengths[0];
        row.beta = beta;
        row.N_p = o.pole_count;
        row.N_g = o.batch_size;
        long count = 0;
        while (auto rec = md.step()) {
            row.T_vec += rec->wall_time_matvec_batch.value_or(0.0);
            row.max_solver_iterations = std::max(row.max_solver_iterations, rec->solver_iterations_max);
            ++count;
        }
        row.T_vec /= static_cast<double>(std::max<long>(count, 1));
        log << "n = " << row.n << "  beta = " << beta << "  N_p = " << row.N_p << "  T_vec = " << row.T_vec
            << " s  T_vec/n = " << row.T_vec / static_cast<double>(row.n) << '\n';
        rows.push_back(row);
    }

    const std::string path = out_path(cfg, "bench_matvec.csv");
    std::ofstream out = open_output(path);
    out << "n,L,beta,N_p,N_g,T_vec,T_vec_per_n,max_solver_iterations\n";
    char buf[200];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%d,%d,%.17g,%.17g,%d\n", r.n, r.length, r.beta, r.N_p, r.N_g,
                      r.T_vec, r.T_vec / static_cast<double>(r.n), r.max_solver_iterations);
        out << buf;
    }
    if (!out) {
        throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
    }
    return rows;
}

} // namespace fermihart
