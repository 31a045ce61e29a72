#pragma once

#include "fermihart/chempot.hpp"
#include "fermihart/config.hpp"
#include "fermihart/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace fermihart {

/// A run finished but missed a threshold from the `validation` section.
class ValidationFailure : public Error
{
  public:
    explicit ValidationFailure(const std::string& what)
        : Error(ErrorCode::NotConverged, what)
    {
    }
};

struct RunSummary
{
    long iterations = 0;
    MetricsRecord last;
    ObjectiveEstimate objective;
    RealVector density;
    std::optional<double> rel_density_error;
    std::optional<double> mean_matvec_seconds;  ///< average over the timed iterations
    std::string metrics_path;
};

/// Mirror descent as configured. Writes metrics.csv, metrics.json and density dumps
/// under output.directory. With run.dense_validation the reference is read from
/// scf_density.* when it matches the grid and computed inline otherwise.
RunSummary run_experiment(const RunConfig& cfg, std::ostream& log);

/// Dense SCF; writes scf_density.* and scf.json.
SCFResult scf_experiment(const RunConfig& cfg, std::ostream& log);

struct ContourCheckRow
{
    double beta = 0.0;
    int N_p = 0;
    double median_rel_error = 0.0;
    double max_rel_error = 0.0;
    int max_solver_iterations = 0;
};

/// Pole-count sweep of the sqrt-FD contour matvec with H = C (optionally
/// rescaled so its spectrum is [lo, hi]) against the dense oracle, on
/// contour_check.samples Gaussian vectors. Writes contour_check.csv.
std::vector<ContourCheckRow> contour_check(const RunConfig& cfg, std::ostream& log);

struct MuScanSummary
{
    MuScan scan;
    double best_mu = 0.0;
    double electrons = 0.0;
};

/// Chemical potential search; writes mu_scan.csv and mu_scan.json.
MuScanSummary mu_scan_experiment(const RunConfig& cfg, std::ostream& log);

struct BenchRow
{
    std::size_t n = 0;
    double length = 0.0;  ///< L of the first dimension
    double beta = 0.0;
    int N_p = 0;
    int N_g = 0;
    double T_vec = 0.0;   ///< mean seconds per batch of N_g sqrt-FD matvecs
    int max_solver_iterations = 0;
};

/// T_vec for every bench.betas entry: bench.repeats mirror descent iterations
/// from the cbs start, each batch timed. Writes bench_matvec.csv.
std::vector<BenchRow> bench_matvec(const RunConfig& cfg, std::ostream& log);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

} // namespace fermihart
