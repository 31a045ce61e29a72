#pragma once

#include "fermihart/chempot.hpp"
#include "fermihart/mirror.hpp"
#include "fermihart/scf.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace fermihart {

struct GridConfig
{
    int dims = 1;
    std::vector<int> sizes{101};
    std::vector<double> lengths{100.0};
};

struct PhysicsConfig
{
    double beta = 10.0;
    double mu = 0.0;
    double alpha = 0.5;
    double zeta = 1.0;
    std::uint64_t potential_seed = 0;
    bool interacting = true;
};

struct ScheduleSection
{
    double gamma0 = 1.0;
    double decay_tau = 1000.0;
    std::string kind = "exp_decay";
    bool allow_clamp = false;
    double delta = 0.1;  ///< theoretical schedule only
};

struct EstimatorConfig
{
    int N_g = 20;
    int N_p = 20;
    double tol = 1e-5;
    int max_iter = 1000;
    bool preconditioner = true;
    double spectral_slack = 0.1;
};

struct RunSection
{
    long T_max = 5000;
    std::uint64_t seed = 0;
    std::string init = "cbs";
    bool dense_validation = false;
    int entropy_every = 1;
    bool early_stop = false;
    double early_stop_tol = 1e-6;
    long early_stop_window = 200;
    int threads = 1;
};

struct OutputConfig
{
    std::string directory = "out";
    long density_dump_every = 0;  ///< 0: final density only
};

struct ContourCheckConfig
{
    std::vector<int> pole_counts;  ///< empty: 4, 6, ..., 40
    std::vector<double> betas;     ///< empty: physics.beta
    std::optional<std::vector<double>> normalize;  ///< affine map of spec(C) onto [lo, hi]
    int samples = 10;
    double tol = 1e-13;
};

struct MuScanConfig
{
    std::optional<double> N_target;  ///< default: half filling
    int K = 64;
    int refine = 0;
    std::string oracle = "dense";    ///< dense | stochastic
    std::string mode = "grid";       ///< grid | bisect
};

struct BenchConfig
{
    std::vector<double> betas{0.5, 2.0, 10.0, 40.0};
    int repeats = 3;
    std::optional<double> target_error = 1e-5;  ///< pick N_p per beta; absent: estimator.N_p
    int N_g = 20;
};

struct ValidationConfig
{
    std::optional<double> max_rel_density_error;
    std::optional<double> max_contour_error;
};

struct RunConfig
{
    GridConfig grid;
    PhysicsConfig physics;
    ScheduleSection schedule;
    EstimatorConfig estimator;
    RunSection run;
    OutputConfig output;
    SCFOptions scf;
    ContourCheckConfig contour_check;
    MuScanConfig mu_scan;
    BenchConfig bench;
    ValidationConfig validation;

    /// Throws Error(ConfigError, ...) listing the first violated rule.
    void validate() const;

    GridSpec grid_spec() const;
    ProblemSpec problem_spec() const;
    /// Run options, with the theoretical schedule constants filled in from the problem.
    RunOptions run_options(const HartreeProblem& problem) const;
};

RunConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const RunConfig& cfg);
RunConfig load_config(const std::string& path);

} // namespace fermihart
