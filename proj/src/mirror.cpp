#include "fermihart/mirror.hpp"

#include "fermihart/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>

namespace fermihart {

namespace {

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

constexpr double nan_value = std::numeric_limits<double>::quiet_NaN();

// batch mean of y^T C y over the stored X^{1/2} z vectors
double single_particle_estimate(const HartreeProblem& problem, const GradientSample& sample)
{
    const std::size_t n = problem.size();
    RealVector ky(n);
    ComplexVector scratch(n);
    double total = 0.0;
    for (const auto& y : sample.sqrtx_z) {
        problem.kinetic->apply(y, ky, scratch);
        double q = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            q += y[i] * (ky[i] + problem.u[i] * y[i]);
        }
        total += q;
    }
    return total / sample.batch_size;
}

} // namespace

const char* to_string(InitKind kind)
{
    return kind == InitKind::cbs ? "cbs" : "half_identity";
}

const char* to_string(ScheduleKind kind)
{
    switch (kind) {
        case ScheduleKind::exp_decay: return "exp_decay";
        case ScheduleKind::constant: return "constant";
        case ScheduleKind::theoretical: return "theoretical";
    }
    return "unknown";
}

InitKind parse_init_kind(const std::string& s)
{
    if (s == "cbs") {
        return InitKind::cbs;
    }
    if (s == "half_identity") {
        return InitKind::half_identity;
    }
    throw Error(ErrorCode::ConfigError, "unknown init kind '" + s + "'");
}

ScheduleKind parse_schedule_kind(const std::string& s)
{
    if (s == "exp_decay") {
        return ScheduleKind::exp_decay;
    }
    if (s == "constant") {
        return ScheduleKind::constant;
    }
    if (s == "theoretical") {
        return ScheduleKind::theoretical;
    }
    throw Error(ErrorCode::ConfigError, "unknown schedule kind '" + s + "'");
}

double step_size(const ScheduleConfig& sched, long t, double beta)
{
    if (t < 0) {
        throw Error(ErrorCode::InvalidArgument, "iteration index must be nonnegative");
    }
    switch (sched.kind) {
        case ScheduleKind::exp_decay:
            return std::min(sched.gamma0 * std::exp(-static_cast<double>(t) / sched.decay_tau), beta);
        case ScheduleKind::constant: return std::min(sched.gamma0, beta);
        case ScheduleKind::theoretical: {
            if (sched.c_h <= 0.0) {
                return beta;
            }
            const double T = static_cast<double>(std::max<long>(sched.horizon, 1));
            const double c = 2.0 * (1.0 + 4.0 * std::log(2.0 * T * static_cast<double>(sched.m) / sched.delta));
            const double eta = 1.0 / (c * sched.c_h * std::sqrt(T));
            return eta * beta / (eta + beta);
        }
    }
    return 0.0;
}

// ---------------------------------------------------------------- tail averaging

TailAverager::TailAverager(std::size_t n, long block)
    : n_(n)
    , block_(std::max<long>(block, 1))
    , window_sum_(n, 0.0)
{
}

void TailAverager::push(std::span<const double> x)
{
    if (x.size() != n_) {
        throw Error(ErrorCode::LengthMismatch, "snapshot length differs from averager size");
    }
    ++count_;
    if (blocks_.empty() || blocks_.back().size == block_) {
        blocks_.push_back(Block{count_, 0, RealVector(n_, 0.0)});
    }
    Block& b = blocks_.back();
    for (std::size_t i = 0; i < n_; ++i) {
        b.sum[i] += x[i];
        window_sum_[i] += x[i];
    }
    ++b.size;
    ++window_count_;
    trim();
}

void TailAverager::trim()
{
    const long start = (count_ + 1) / 2;
    while (!blocks_.empty() && blocks_.front().first + blocks_.front().size - 1 < start) {
        const Block& b = blocks_.front();
        for (std::size_t i = 0; i < n_; ++i) {
            window_sum_[i] -= b.sum[i];
        }
        window_count_ -= b.size;
        blocks_.pop_front();
    }
}

long TailAverager::window_size() const
{
    return window_count_;
}

RealVector TailAverager::mean() const
{
    if (count_ == 0) {
        throw Error(ErrorCode::NoSamplesYet, "no density samples have been recorded");
    }
    if (blocks_.size() == 1) {
        RealVector out(blocks_.front().sum);
        for (auto& x : out) {
            x /= static_cast<double>(window_count_);
        }
        return out;
    }
    RealVector out(window_sum_);
    const double w = 1.0 / static_cast<double>(window_count_);
    for (auto& x : out) {
        x *= w;
    }
    return out;
}

double tail_mean(std::span<const double> history)
{
    const std::size_t t = history.size();
    if (t == 0) {
        return nan_value;
    }
    const std::size_t start = (t + 1) / 2;  // 1-based ceil(t/2)
    double sum = 0.0;
    long count = 0;
    for (std::size_t s = start; s <= t; ++s) {
        const double x = history[s - 1];
        if (!std::isnan(x)) {
            sum += x;
            ++count;
        }
    }
    if (count > 0) {
        return sum / static_cast<double>(count);
    }
    // latest value before the window
    for (std::size_t s = start; s-- > 0;) {
        if (!std::isnan(history[s])) {
            return history[s];
        }
    }
    return nan_value;
}

// ---------------------------------------------------------------- state and update

MDState init_state(std::shared_ptr<const HartreeProblem> problem, InitKind init, long tail_block)
{
    if (!problem) {
        throw Error(ErrorCode::InvalidArgument, "null problem");
    }
    problem->validate();
    MDState s;
    s.problem = problem;
    s.beta = problem->beta;
    s.mu = problem->mu;
    const std::size_t n = problem->size();
    if (init == InitKind::cbs) {
        RealVector v(problem->u);
        for (auto& x : v) {
            x -= problem->mu;
        }
        s.H = EffectiveHamiltonian(1.0, std::move(v), problem->kinetic);
    } else {
        s.H = EffectiveHamiltonian(0.0, RealVector(n, 0.0), problem->kinetic);
    }
    s.density = TailAverager(n, tail_block);
    return s;
}

GradientSample sample_gradient(const MDState& state, const PoleExpansion& p, const SampleOptions& opts,
                               const Substreams& streams)
{
    if (opts.batch_size < 1) {
        throw Error(ErrorCode::InvalidArgument, "batch size must be at least 1");
    }
    const std::size_t n = state.H.size();
    const int ng = opts.batch_size;

    GradientSample out;
    out.batch_size = ng;
    out.z.resize(ng);
    out.sqrtx_z.resize(ng);
    for (int j = 0; j < ng; ++j) {
        out.z[j] = streams.gaussian(static_cast<std::uint64_t>(state.t), static_cast<std::uint64_t>(j), n);
    }

    PoleExpansion sqrt_p = p.with_kind(ContourKind::sqrt_fd);
    PoleExpansion ent_p = p.with_kind(ContourKind::fd_log_fd);
    if (opts.with_entropy) {
        const PoleExpansion refl = p.with_kind(ContourKind::fd_log_fd_reflected);
        for (std::size_t i = 0; i < ent_p.weights.size(); ++i) {
            ent_p.weights[i] += refl.weights[i];
        }
        out.entropy_terms.assign(ng, 0.0);
    }

    std::vector<MatvecStats> stats(ng);
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto t0 = std::chrono::steady_clock::now();

#pragma omp parallel num_threads(std::max(opts.threads, 1))
    {
        ContourEngine engine(state.H, opts.solver);
        const PoleExpansion* exps[2] = {&sqrt_p, &ent_p};
        std::vector<RealVector> res(opts.with_entropy ? 2 : 1);
#pragma omp for schedule(dynamic, 1)
        for (int j = 0; j < ng; ++j) {
            try {
                engine.apply(std::span<const PoleExpansion* const>(exps, res.size()), out.z[j], res, &stats[j]);
                out.sqrtx_z[j] = std::move(res[0]);
                if (opts.with_entropy) {
                    out.entropy_terms[j] = dot(out.z[j], res[1]);
                }
                res.assign(res.size(), RealVector());
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    out.matvec_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    out.rho_hat.assign(n, 0.0);
    for (int j = 0; j < ng; ++j) {
        const auto& y = out.sqrtx_z[j];
        for (std::size_t i = 0; i < n; ++i) {
            out.rho_hat[i] += y[i] * y[i];
        }
        out.stats.merge(stats[j]);
    }
    for (auto& x : out.rho_hat) {
        x /= ng;
    }
    out.g_tilde_diag = state.problem->hartree_potential(out.rho_hat);
    return out;
}

void md_update(MDState& state, const GradientSample& sample, double gamma)
{
    if (!(gamma > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "step size must be positive");
    }
    if (gamma > state.beta) {
        throw Error(ErrorCode::StepTooLarge, "step size exceeds beta");
    }
    const auto& u = state.problem->u;
    const std::size_t n = state.H.size();
    if (sample.rho_hat.size() != n || sample.g_tilde_diag.size() != n) {
        throw Error(ErrorCode::LengthMismatch, "gradient sample length differs from state size");
    }
    const double a = gamma / state.beta;
    state.H.c = (1.0 - a) * state.H.c + a;
    for (std::size_t i = 0; i < n; ++i) {
        state.H.v[i] = (1.0 - a) * state.H.v[i] + a * (u[i] + sample.g_tilde_diag[i] - state.mu);
    }
    state.density.push(sample.rho_hat);
    ++state.t;
}

RealVector tail_average_density(const MDState& state)
{
    return state.density.mean();
}

ObjectiveEstimate estimate_objective(const MDState& state, const GradientSample& sample,
                                     const PoleExpansion& p_entropy, const SolverConfig& cfg)
{
    const auto& problem = *state.problem;
    const int ng = sample.batch_size;
    if (ng < 1 || static_cast<int>(sample.sqrtx_z.size()) != ng) {
        throw Error(ErrorCode::InvalidArgument, "sample does not carry its X^{1/2} z vectors");
    }

    ObjectiveEstimate est;
    est.single_particle = single_particle_estimate(problem, sample);

    if (!sample.entropy_terms.empty()) {
        for (double e : sample.entropy_terms) {
            est.entropy += e;
        }
    } else {
        PoleExpansion ent = p_entropy.with_kind(ContourKind::fd_log_fd);
        const PoleExpansion refl = p_entropy.with_kind(ContourKind::fd_log_fd_reflected);
        for (std::size_t i = 0; i < ent.weights.size(); ++i) {
            ent.weights[i] += refl.weights[i];
        }
        ContourEngine engine(state.H, cfg);
        for (const auto& z : sample.z) {
            est.entropy += dot(z, engine.apply(ent, z));
        }
    }
    est.entropy /= ng;

    const RealVector rho = tail_average_density(state);
    est.hartree = problem.hartree_energy(rho);
    for (double r : rho) {
        est.electrons += r;
    }
    return est;
}

// ---------------------------------------------------------------- driver

MirrorDescent::MirrorDescent(std::shared_ptr<const HartreeProblem> problem, RunOptions opts,
                             std::optional<RealVector> reference_density)
    : problem_(std::move(problem))
    , opts_(opts)
    , reference_(std::move(reference_density))
    , streams_(opts.seed)
{
    if (!problem_) {
        throw Error(ErrorCode::InvalidArgument, "null problem");
    }
    opts_.solver.validate();
    if (opts_.T_max < 0 || opts_.batch_size < 1 || opts_.entropy_every < 1 || opts_.timing_stride < 1) {
        throw Error(ErrorCode::InvalidArgument, "invalid run options");
    }
    const std::size_t n = problem_->size();
    if (reference_) {
        if (reference_->size() != n) {
            throw Error(ErrorCode::LengthMismatch, "reference density length differs from grid size");
        }
        reference_norm_ = std::sqrt(dot(*reference_, *reference_));
    }
    const double bytes = 8.0 * static_cast<double>(n) * (static_cast<double>(opts_.T_max) / 2.0 + 1.0);
    const long block = std::max<long>(1, static_cast<long>(std::ceil(bytes / static_cast<double>(opts_.tail_memory_budget))));
    state_ = init_state(problem_, opts_.init, block);
}

bool MirrorDescent::done() const
{
    return stopped_ || state_.t >= opts_.T_max;
}

RealVector MirrorDescent::density() const
{
    return tail_average_density(state_);
}

ObjectiveEstimate MirrorDescent::objective() const
{
    ObjectiveEstimate est;
    est.single_particle = tail_mean(state_.single_particle_history);
    est.entropy = tail_mean(state_.entropy_history);
    const RealVector rho = density();
    est.hartree = problem_->hartree_energy(rho);
    for (double r : rho) {
        est.electrons += r;
    }
    return est;
}

bool MirrorDescent::converged() const
{
    const long w = opts_.early_stop_window;
    const auto& f = free_energy_history_;
    if (!opts_.early_stop || static_cast<long>(f.size()) < 2 * w) {
        return false;
    }
    const double now = f.back();
    const double before = f[f.size() - 1 - w];
    return std::abs(now - before) <= opts_.early_stop_tol * std::max(std::abs(now), 1e-300);
}

std::optional<MetricsRecord> MirrorDescent::step()
{
    if (done()) {
        return std::nullopt;
    }
    const long t = state_.t;
    const double beta = problem_->beta;
    const double gamma = step_size(opts_.schedule, t, beta);
    const bool with_entropy = t % opts_.entropy_every == 0;

    const PoleExpansion p =
        build_contour(state_.H.spectral_bounds(opts_.spectral_slack), beta, opts_.pole_count, ContourKind::sqrt_fd);
    SampleOptions so;
    so.batch_size = opts_.batch_size;
    so.solver = opts_.solver;
    so.with_entropy = with_entropy;
    so.threads = opts_.threads;
    const GradientSample sample = sample_gradient(state_, p, so, streams_);

    // objective terms of X_t
    ObjectiveEstimate inst;
    inst.single_particle = single_particle_estimate(*problem_, sample);
    if (with_entropy) {
        for (double e : sample.entropy_terms) {
            inst.entropy += e;
        }
        inst.entropy /= sample.batch_size;
    }

    md_update(state_, sample, gamma);
    state_.single_particle_history.push_back(inst.single_particle);
    state_.entropy_history.push_back(with_entropy ? inst.entropy : nan_value);

    const ObjectiveEstimate est = objective();
    const double volume = problem_->grid.volume;
    const double n = static_cast<double>(problem_->size());
    const double f = est.free_energy(beta);
    free_energy_history_.push_back(f);

    MetricsRecord rec;
    rec.t = state_.t;
    rec.free_energy_per_volume = f / volume;
    rec.free_energy_per_basis = f / n;
    rec.hartree_energy_per_volume = est.hartree / volume;
    rec.electrons_per_volume = est.electrons / volume;
    if (reference_) {
        const RealVector rho = density();
        double diff = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i) {
            diff += (rho[i] - (*reference_)[i]) * (rho[i] - (*reference_)[i]);
        }
        rec.rel_density_error = std::sqrt(diff) / reference_norm_;
    }
    rec.step_gamma = gamma;
    if (t % opts_.timing_stride == 0) {
        rec.wall_time_matvec_batch = sample.matvec_seconds;
    }
    rec.solver_iterations_max = sample.stats.max_iterations;

    if (converged()) {
        stopped_ = true;
    }
    return rec;
}

void MirrorDescent::run(const std::function<void(const MetricsRecord&)>& sink)
{
    while (auto rec = step()) {
        sink(*rec);
    }
}

std::vector<MetricsRecord> MirrorDescent::run()
{
    std::vector<MetricsRecord> out;
    run([&](const MetricsRecord& r) { out.push_back(r); });
    return out;
}

} // namespace fermihart
