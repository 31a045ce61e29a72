#pragma once

#include "fermihart/matvec.hpp"
#include "fermihart/problem.hpp"
#include "fermihart/rng.hpp"

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace fermihart {

enum class InitKind { half_identity, cbs };
enum class ScheduleKind { exp_decay, constant, theoretical };

const char* to_string(InitKind kind);
const char* to_string(ScheduleKind kind);
InitKind parse_init_kind(const std::string& s);
ScheduleKind parse_schedule_kind(const std::string& s);

struct ScheduleConfig
{
    double gamma0 = 1.0;
    double decay_tau = 1000.0;
    ScheduleKind kind = ScheduleKind::exp_decay;

    // only read by the theoretical schedule
    long horizon = 5000;       ///< T
    double delta = 0.1;        ///< failure probability
    double c_h = 0.0;          ///< ||V||_inf
    std::size_t m = 1;         ///< number of basis functions
};

/// gamma_t, clamped to at most beta.
double step_size(const ScheduleConfig& sched, long t, double beta);

/// Mean of the snapshots pushed at steps ceil(t/2)..t, t = number pushed.
///
/// Snapshots are stored as sums over blocks of `block` consecutive steps.
/// With block = 1 the window is exact; larger blocks bound memory and round
/// the window start down to the enclosing block boundary.
class TailAverager
{
  public:
    explicit TailAverager(std::size_t n = 0, long block = 1);

    void push(std::span<const double> x);
    long count() const noexcept
    {
        return count_;
    }
    long block() const noexcept
    {
        return block_;
    }
    /// Number of snapshots inside the current window.
    long window_size() const;
    RealVector mean() const;

  private:
    struct Block
    {
        long first = 0;  ///< step index of its first snapshot (1-based)
        long size = 0;
        RealVector sum;
    };
    void trim();

    std::size_t n_ = 0;
    long block_ = 1;
    long count_ = 0;
    std::deque<Block> blocks_;
    RealVector window_sum_;
    long window_count_ = 0;
};

/// Latter-half mean of a scalar history; NaN entries (skipped evaluations) are ignored.
double tail_mean(std::span<const double> history);

struct MDState
{
    std::shared_ptr<const HartreeProblem> problem;
    EffectiveHamiltonian H;
    long t = 0;
    double beta = 1.0;
    double mu = 0.0;
    TailAverager density;
    std::vector<double> single_particle_history;
    std::vector<double> entropy_history;
};

MDState init_state(std::shared_ptr<const HartreeProblem> problem, InitKind init, long tail_block = 1);

struct GradientSample
{
    RealVector rho_hat;                  ///< (1/N_g) sum_j (X^{1/2} z_j)^2
    RealVector g_tilde_diag;             ///< V rho_hat
    int batch_size = 0;
    std::vector<RealVector> z;           ///< the Gaussian vectors
    std::vector<RealVector> sqrtx_z;     ///< X^{1/2} z_j
    std::vector<double> entropy_terms;   ///< z_j^T S(H) z_j when computed alongside
    MatvecStats stats;
    double matvec_seconds = 0.0;
};

struct SampleOptions
{
    int batch_size = 20;
    SolverConfig solver;
    /// Also form z^T [(f log f)(H) + (f log f)(-H)] z from the same solves.
    bool with_entropy = false;
    int threads = 1;
};

/// Draws z_j = streams.gaussian(t, j, n) for j < N_g and applies f^{1/2}(H_t).
GradientSample sample_gradient(const MDState& state, const PoleExpansion& p, const SampleOptions& opts,
                               const Substreams& streams);

/// H <- (1 - gamma/beta) H + (gamma/beta)(C + diag(g_tilde) - mu I).
void md_update(MDState& state, const GradientSample& sample, double gamma);

/// Window mean of the density samples pushed so far.
RealVector tail_average_density(const MDState& state);

struct ObjectiveEstimate
{
    double single_particle = 0.0;  ///< Tr[C X]
    double hartree = 0.0;          ///< 1/2 rho^T V rho
    double entropy = 0.0;          ///< S_FD(X)
    double electrons = 0.0;        ///< Tr[X]

    double free_energy(double beta) const
    {
        return single_particle + hartree + entropy / beta;
    }
};

/// Per-sample single-particle and entropy estimates for this iteration, with
/// the Hartree energy and electron count taken from the tail-averaged density.
/// Reuses sample.entropy_terms when present; otherwise runs the solves for
/// `p_entropy` (an fd_log_fd expansion) on the stored z vectors.
ObjectiveEstimate estimate_objective(const MDState& state, const GradientSample& sample,
                                     const PoleExpansion& p_entropy, const SolverConfig& cfg);

struct MetricsRecord
{
    long t = 0;
    double free_energy_per_volume = 0.0;
    double free_energy_per_basis = 0.0;
    double hartree_energy_per_volume = 0.0;
    double electrons_per_volume = 0.0;
    std::optional<double> rel_density_error;
    double step_gamma = 0.0;
    std::optional<double> wall_time_matvec_batch;
    int solver_iterations_max = 0;

    bool operator==(const MetricsRecord&) const = default;
};

struct RunOptions
{
    long T_max = 5000;
    std::uint64_t seed = 0;
    InitKind init = InitKind::cbs;
    int batch_size = 20;
    int pole_count = 20;
    SolverConfig solver;
    ScheduleConfig schedule;
    int entropy_every = 1;
    double spectral_slack = 0.1;
    int timing_stride = 20;
    bool early_stop = false;
    double early_stop_tol = 1e-6;
    long early_stop_window = 200;
    /// Bytes allowed for density snapshots; decides the tail block size.
    std::size_t tail_memory_budget = std::size_t(512) << 20;
    int threads = 1;
};

/// Stochastic mirror descent driven one iteration at a time.
class MirrorDescent
{
  public:
    MirrorDescent(std::shared_ptr<const HartreeProblem> problem, RunOptions opts,
                  std::optional<RealVector> reference_density = std::nullopt);

    bool done() const;
    /// One full iteration; returns nothing once done().
    std::optional<MetricsRecord> step();
    /// Runs to completion, calling `sink` on each record.
    void run(const std::function<void(const MetricsRecord&)>& sink);
    std::vector<MetricsRecord> run();

    const MDState& state() const noexcept
    {
        return state_;
    }
    const RunOptions& options() const noexcept
    {
        return opts_;
    }
    RealVector density() const;
    /// Tail estimate of every objective term.
    ObjectiveEstimate objective() const;

  private:
    bool converged() const;

    std::shared_ptr<const HartreeProblem> problem_;
    RunOptions opts_;
    std::optional<RealVector> reference_;
    double reference_norm_ = 0.0;
    Substreams streams_;
    MDState state_;
    std::vector<double> free_energy_history_;
    bool stopped_ = false;
};

} // namespace fermihart
