#include "fermihart/config.hpp"

#include "fermihart/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace fermihart {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& what)
{
    throw Error(ErrorCode::ConfigError, what);
}

/// Reads the fields of one JSON object, rejecting unknown keys and wrong types.
class Section
{
  public:
    Section(const json& root, const std::string& name)
        : name_(name)
    {
        if (!root.contains(name)) {
            return;
        }
        obj_ = &root.at(name);
        if (!obj_->is_object()) {
            fail("section '" + name + "' must be an object");
        }
    }

    template <class T>
    void get(const std::string& key, T& out)
    {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key)) {
            return;
        }
        const json& v = obj_->at(key);
        try {
            if constexpr (std::is_same_v<T, bool>) {
                if (!v.is_boolean()) {
                    throw std::runtime_error("expected a boolean");
                }
            } else if constexpr (std::is_integral_v<T>) {
                if (!v.is_number_integer()) {
                    throw std::runtime_error("expected an integer");
                }
                if constexpr (std::is_unsigned_v<T>) {
                    if (v.is_number_integer() && !v.is_number_unsigned()) {
                        throw std::runtime_error("expected a nonnegative integer");
                    }
                }
            } else if constexpr (std::is_floating_point_v<T>) {
                if (!v.is_number()) {
                    throw std::runtime_error("expected a number");
                }
            }
            out = v.get<T>();
        } catch (const std::exception& e) {
            fail(name_ + "." + key + ": " + e.what());
        }
    }

    template <class T>
    void get(const std::string& key, std::optional<T>& out)
    {
        seen_.insert(key);
        if (!obj_ || !obj_->contains(key) || obj_->at(key).is_null()) {
            return;
        }
        T value{};
        get(key, value);
        out = value;
    }

    void finish() const
    {
        if (!obj_) {
            return;
        }
        for (const auto& [key, _] : obj_->items()) {
            if (!seen_.count(key)) {
                fail("unknown key '" + name_ + "." + key + "'");
            }
        }
    }

  private:
    std::string name_;
    const json* obj_ = nullptr;
    std::set<std::string> seen_;
};

const std::set<std::string> known_sections{"grid",     "physics",       "schedule", "estimator",
                                           "run",      "output",        "scf",      "contour_check",
                                           "mu_scan",  "bench",         "validation"};

} // namespace

RunConfig config_from_json(const json& j)
{
    if (!j.is_object()) {
        fail("config root must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (!known_sections.count(key)) {
            fail("unknown section '" + key + "'");
        }
    }
    RunConfig c;
    {
        Section s(j, "grid");
        s.get("dims", c.grid.dims);
        s.get("sizes", c.grid.sizes);
        s.get("lengths", c.grid.lengths);
        s.finish();
    }
    {
        Section s(j, "physics");
        s.get("beta", c.physics.beta);
        s.get("mu", c.physics.mu);
        s.get("alpha", c.physics.alpha);
        s.get("zeta", c.physics.zeta);
        s.get("potential_seed", c.physics.potential_seed);
        s.get("interacting", c.physics.interacting);
        s.finish();
    }
    {
        Section s(j, "schedule");
        s.get("gamma0", c.schedule.gamma0);
        s.get("decay_tau", c.schedule.decay_tau);
        s.get("kind", c.schedule.kind);
        s.get("allow_clamp", c.schedule.allow_clamp);
        s.get("delta", c.schedule.delta);
        s.finish();
    }
    {
        Section s(j, "estimator");
        s.get("N_g", c.estimator.N_g);
        s.get("N_p", c.estimator.N_p);
        s.get("tol", c.estimator.tol);
        s.get("max_iter", c.estimator.max_iter);
        s.get("preconditioner", c.estimator.preconditioner);
        s.get("spectral_slack", c.estimator.spectral_slack);
        s.finish();
    }
    {
        Section s(j, "run");
        s.get("T_max", c.run.T_max);
        s.get("seed", c.run.seed);
        s.get("init", c.run.init);
        s.get("dense_validation", c.run.dense_validation);
        s.get("entropy_every", c.run.entropy_every);
        s.get("early_stop", c.run.early_stop);
        s.get("early_stop_tol", c.run.early_stop_tol);
        s.get("early_stop_window", c.run.early_stop_window);
        s.get("threads", c.run.threads);
        s.finish();
    }
    {
        Section s(j, "output");
        s.get("directory", c.output.directory);
        s.get("density_dump_every", c.output.density_dump_every);
        s.finish();
    }
    {
        Section s(j, "scf");
        s.get("mixing", c.scf.mixing);
        s.get("tol", c.scf.tol);
        s.get("max_iter", c.scf.max_iter);
        s.finish();
    }
    {
        Section s(j, "contour_check");
        s.get("pole_counts", c.contour_check.pole_counts);
        s.get("betas", c.contour_check.betas);
        s.get("normalize", c.contour_check.normalize);
        s.get("samples", c.contour_check.samples);
        s.get("tol", c.contour_check.tol);
        s.finish();
    }
    {
        Section s(j, "mu_scan");
        s.get("N_target", c.mu_scan.N_target);
        s.get("K", c.mu_scan.K);
        s.get("refine", c.mu_scan.refine);
        s.get("oracle", c.mu_scan.oracle);
        s.get("mode", c.mu_scan.mode);
        s.finish();
    }
    {
        Section s(j, "bench");
        s.get("betas", c.bench.betas);
        s.get("repeats", c.bench.repeats);
        if (j.contains("bench") && j["bench"].contains("target_error") && j["bench"]["target_error"].is_null()) {
            c.bench.target_error.reset();
        }
        s.get("target_error", c.bench.target_error);
        s.get("N_g", c.bench.N_g);
        s.finish();
    }
    {
        Section s(j, "validation");
        s.get("max_rel_density_error", c.validation.max_rel_density_error);
        s.get("max_contour_error", c.validation.max_contour_error);
        s.finish();
    }
    c.validate();
    return c;
}

void RunConfig::validate() const
{
    if (grid.dims < 1 || static_cast<int>(grid.sizes.size()) != grid.dims ||
        static_cast<int>(grid.lengths.size()) != grid.dims) {
        fail("grid.sizes and grid.lengths must each have grid.dims entries");
    }
    for (int s : grid.sizes) {
        if (s < 1 || s % 2 == 0) {
            fail("grid sizes must be odd and positive (got " + std::to_string(s) + ")");
        }
    }
    for (double l : grid.lengths) {
        if (!(l > 0.0)) {
            fail("grid lengths must be positive");
        }
    }
    if (!(physics.beta > 0.0) || !std::isfinite(physics.beta)) {
        fail("physics.beta must be finite and positive");
    }
    if (physics.alpha < 0.0) {
        fail("physics.alpha must be nonnegative");
    }
    if (!(physics.zeta > 0.0)) {
        fail("physics.zeta must be positive");
    }
    try {
        parse_schedule_kind(schedule.kind);
        parse_init_kind(run.init);
    } catch (const Error& e) {
        fail(e.what());
    }
    if (!(schedule.gamma0 > 0.0) || !(schedule.decay_tau > 0.0)) {
        fail("schedule.gamma0 and schedule.decay_tau must be positive");
    }
    if (schedule.kind == "constant" && schedule.gamma0 > physics.beta && !schedule.allow_clamp) {
        fail("schedule.gamma0 exceeds beta under a constant schedule; set schedule.allow_clamp to clamp it");
    }
    if (!(schedule.delta > 0.0 && schedule.delta <= 1.0)) {
        fail("schedule.delta must lie in (0, 1]");
    }
    if (estimator.N_p < 2 || estimator.N_p % 2 != 0) {
        fail("estimator.N_p must be even and at least 2 (got " + std::to_string(estimator.N_p) + ")");
    }
    if (estimator.N_g < 1) {
        fail("estimator.N_g must be at least 1");
    }
    if (!(estimator.tol > 0.0) || estimator.max_iter < 1) {
        fail("estimator.tol must be positive and estimator.max_iter at least 1");
    }
    if (estimator.spectral_slack < 0.0) {
        fail("estimator.spectral_slack must be nonnegative");
    }
    if (run.T_max < 0 || run.entropy_every < 1 || run.threads < 1 || run.early_stop_window < 1) {
        fail("run.T_max >= 0, run.entropy_every >= 1, run.threads >= 1 and run.early_stop_window >= 1 are required");
    }
    if (output.density_dump_every < 0) {
        fail("output.density_dump_every must be nonnegative");
    }
    if (!(scf.mixing > 0.0 && scf.mixing <= 1.0) || !(scf.tol > 0.0) || scf.max_iter < 1) {
        fail("scf.mixing must lie in (0, 1], scf.tol > 0, scf.max_iter >= 1");
    }
    for (int np : contour_check.pole_counts) {
        if (np < 2 || np % 2 != 0) {
            fail("contour_check.pole_counts entries must be even and at least 2");
        }
    }
    for (double b : contour_check.betas) {
        if (!(b > 0.0)) {
            fail("contour_check.betas entries must be positive");
        }
    }
    if (contour_check.normalize &&
        (contour_check.normalize->size() != 2 || !((*contour_check.normalize)[0] < (*contour_check.normalize)[1]))) {
        fail("contour_check.normalize must be [lo, hi] with lo < hi");
    }
    if (contour_check.samples < 1 || !(contour_check.tol > 0.0)) {
        fail("contour_check.samples >= 1 and contour_check.tol > 0 are required");
    }
    if (mu_scan.K < 1 || mu_scan.refine < 0) {
        fail("mu_scan.K >= 1 and mu_scan.refine >= 0 are required");
    }
    if (mu_scan.oracle != "dense" && mu_scan.oracle != "stochastic") {
        fail("mu_scan.oracle must be 'dense' or 'stochastic'");
    }
    if (mu_scan.mode != "grid" && mu_scan.mode != "bisect") {
        fail("mu_scan.mode must be 'grid' or 'bisect'");
    }
    if (bench.repeats < 1 || bench.N_g < 1 || bench.betas.empty()) {
        fail("bench.repeats >= 1, bench.N_g >= 1 and a nonempty bench.betas are required");
    }
}

GridSpec RunConfig::grid_spec() const
{
    return make_grid(grid.dims, grid.sizes, grid.lengths);
}

ProblemSpec RunConfig::problem_spec() const
{
    ProblemSpec p;
    p.grid = grid_spec();
    p.beta = physics.beta;
    p.mu = physics.mu;
    p.alpha = physics.alpha;
    p.zeta = physics.zeta;
    p.potential_seed = physics.potential_seed;
    p.interacting = physics.interacting;
    return p;
}

RunOptions RunConfig::run_options(const HartreeProblem& problem) const
{
    RunOptions o;
    o.T_max = run.T_max;
    o.seed = run.seed;
    o.init = parse_init_kind(run.init);
    o.batch_size = estimator.N_g;
    o.pole_count = estimator.N_p;
    o.solver = SolverConfig{estimator.tol, estimator.max_iter, estimator.preconditioner};
    o.schedule.gamma0 = schedule.gamma0;
    o.schedule.decay_tau = schedule.decay_tau;
    o.schedule.kind = parse_schedule_kind(schedule.kind);
    o.schedule.horizon = std::max<long>(run.T_max, 1);
    o.schedule.delta = schedule.delta;
    o.schedule.m = problem.size();
    o.schedule.c_h = problem.interaction ? interaction_row_norm(*problem.interaction) : 0.0;
    o.entropy_every = run.entropy_every;
    o.spectral_slack = estimator.spectral_slack;
    o.early_stop = run.early_stop;
    o.early_stop_tol = run.early_stop_tol;
    o.early_stop_window = run.early_stop_window;
    o.threads = run.threads;
    return o;
}

json config_to_json(const RunConfig& c)
{
    json j;
    j["grid"] = {{"dims", c.grid.dims}, {"sizes", c.grid.sizes}, {"lengths", c.grid.lengths}};
    j["physics"] = {{"beta", c.physics.beta},   {"mu", c.physics.mu},
                    {"alpha", c.physics.alpha}, {"zeta", c.physics.zeta},
                    {"potential_seed", c.physics.potential_seed}, {"interacting", c.physics.interacting}};
    j["schedule"] = {{"gamma0", c.schedule.gamma0},
                     {"decay_tau", c.schedule.decay_tau},
                     {"kind", c.schedule.kind},
                     {"allow_clamp", c.schedule.allow_clamp},
                     {"delta", c.schedule.delta}};
    j["estimator"] = {{"N_g", c.estimator.N_g},
                      {"N_p", c.estimator.N_p},
                      {"tol", c.estimator.tol},
                      {"max_iter", c.estimator.max_iter},
                      {"preconditioner", c.estimator.preconditioner},
                      {"spectral_slack", c.estimator.spectral_slack}};
    j["run"] = {{"T_max", c.run.T_max},
                {"seed", c.run.seed},
                {"init", c.run.init},
                {"dense_validation", c.run.dense_validation},
                {"entropy_every", c.run.entropy_every},
                {"early_stop", c.run.early_stop},
                {"early_stop_tol", c.run.early_stop_tol},
                {"early_stop_window", c.run.early_stop_window},
                {"threads", c.run.threads}};
    j["output"] = {{"directory", c.output.directory}, {"density_dump_every", c.output.density_dump_every}};
    j["scf"] = {{"mixing", c.scf.mixing}, {"tol", c.scf.tol}, {"max_iter", c.scf.max_iter}};
    j["contour_check"] = {{"pole_counts", c.contour_check.pole_counts},
                          {"betas", c.contour_check.betas},
                          {"normalize", c.contour_check.normalize ? json(*c.contour_check.normalize) : json()},
                          {"samples", c.contour_check.samples},
                          {"tol", c.contour_check.tol}};
    j["mu_scan"] = {{"N_target", c.mu_scan.N_target ? json(*c.mu_scan.N_target) : json()},
                    {"K", c.mu_scan.K},
                    {"refine", c.mu_scan.refine},
                    {"oracle", c.mu_scan.oracle},
                    {"mode", c.mu_scan.mode}};
    j["bench"] = {{"betas", c.bench.betas},
                  {"repeats", c.bench.repeats},
                  {"target_error", c.bench.target_error ? json(*c.bench.target_error) : json()},
                  {"N_g", c.bench.N_g}};
    j["validation"] = {
        {"max_rel_density_error",
         c.validation.max_rel_density_error ? json(*c.validation.max_rel_density_error) : json()},
        {"max_contour_error", c.validation.max_contour_error ? json(*c.validation.max_contour_error) : json()}};
    return j;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        fail("cannot open config file '" + path + "'");
    }
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        fail("config '" + path + "' is not valid JSON: " + e.what());
    }
    return config_from_json(j);
}

} // namespace fermihart
