#include "fermihart/experiments.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

using namespace fermihart;

namespace {

enum Exit { ok = 0, config_error = 1, solver_failure = 2, validation_failure = 3 };

struct Globals
{
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<int> threads;
};

RunConfig resolve(const std::string& path, const Globals& g)
{
    RunConfig cfg = load_config(path);
    if (g.seed) {
        cfg.run.seed = *g.seed;
    }
    if (g.out) {
        cfg.output.directory = *g.out;
    }
    if (g.threads) {
        cfg.run.threads = *g.threads;
    }
    if (const char* env = std::getenv("FERMIHART_THREADS")) {
        try {
            cfg.run.threads = std::stoi(env);
        } catch (const std::exception&) {
            throw Error(ErrorCode::ConfigError, std::string("FERMIHART_THREADS is not an integer: ") + env);
        }
    }
    cfg.validate();
    return cfg;
}

int exit_code(const Error& e)
{
    switch (e.code()) {
        case ErrorCode::SolverDiverged:
        case ErrorCode::Breakdown:
        case ErrorCode::NotConverged:
        case ErrorCode::StepTooLarge:
        case ErrorCode::OnBranchCut: return solver_failure;
        default: return config_error;
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Stochastic finite-temperature Hartree solver"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version()));
    Globals g;
    std::uint64_t seed = 0;
    std::string out;
    int threads = 1;
    auto* seed_opt = app.add_option("--seed", seed, "master RNG seed (overrides run.seed)");
    auto* out_opt = app.add_option("--out", out, "output directory (overrides output.directory)");
    auto* threads_opt = app.add_option("--threads", threads, "worker threads; FERMIHART_THREADS wins")
                            ->check(CLI::PositiveNumber);

    std::string config;
    auto add = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("config", config, "JSON config file")->required();
        sub->fallthrough();
        return sub;
    };
    auto* run = add("run", "mirror descent experiment");
    auto* scf = add("scf", "dense SCF ground truth; writes the reference density");
    auto* cc = add("contour-check", "pole-count sweep against the dense oracle");
    auto* mu = add("mu-scan", "chemical potential search");
    auto* bench = add("bench-matvec", "timing of a batch of contour matvecs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }
    if (*seed_opt) {
        g.seed = seed;
    }
    if (*out_opt) {
        g.out = out;
    }
    if (*threads_opt) {
        g.threads = threads;
    }

    try {
        const RunConfig cfg = resolve(config, g);
        if (*run) {
            const RunSummary s = run_experiment(cfg, std::cout);
            std::cout << "wrote " << s.iterations << " records to " << s.metrics_path << '\n';
        } else if (*scf) {
            scf_experiment(cfg, std::cout);
        } else if (*cc) {
            contour_check(cfg, std::cout);
        } else if (*mu) {
            mu_scan_experiment(cfg, std::cout);
        } else if (*bench) {
            bench_matvec(cfg, std::cout);
        }
    } catch (const ValidationFailure& e) {
        std::cerr << "validation failed: " << e.what() << '\n';
        return validation_failure;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return config_error;
    }
    return ok;
}
