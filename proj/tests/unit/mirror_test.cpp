#include "../support.hpp"

#include "fermihart/errors.hpp"
#include "fermihart/holomorphic.hpp"
#include "fermihart/mirror.hpp"
#include "fermihart/scf.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace fhtest;

namespace {

GradientSample exact_sample(const HartreeProblem& p, const RealVector& rho)
{
    GradientSample s;
    s.batch_size = 1;
    s.rho_hat = rho;
    s.g_tilde_diag = p.hartree_potential(rho);
    return s;
}

RealVector dense_density(const EffectiveHamiltonian& h, double beta)
{
    const Eigen::VectorXd d = DenseEigen(dense_hamiltonian(h)).diagonal(dense_scalar(DenseFunction::fd, beta));
    return RealVector(d.data(), d.data() + d.size());
}

PoleExpansion contour_for(const MDState& s, int np = 24)
{
    return build_contour(s.H.spectral_bounds(0.1), s.beta, np, ContourKind::sqrt_fd);
}

} // namespace

TEST_CASE("step schedules")
{
    ScheduleConfig s;
    CHECK(step_size(s, 0, 10.0) == 1.0);
    CHECK(step_size(s, 1000, 10.0) == doctest::Approx(std::exp(-1.0)));
    s.gamma0 = 0.5;
    CHECK(step_size(s, 0, 0.5) == 0.5);
    s.gamma0 = 1.0;
    s.kind = ScheduleKind::constant;
    CHECK(step_size(s, 0, 0.5) == 0.5);
    CHECK(step_size(s, 12345, 10.0) == 1.0);
    CHECK_THROWS_AS(step_size(s, -1, 1.0), Error);

    s.kind = ScheduleKind::theoretical;
    s.horizon = 5000;
    s.delta = 0.1;
    s.m = 101;
    s.c_h = 2.5;
    const double c = 2.0 * (1.0 + 4.0 * std::log(2.0 * 5000 * 101 / 0.1));
    const double eta = 1.0 / (c * 2.5 * std::sqrt(5000.0));
    CHECK(step_size(s, 7, 10.0) == doctest::Approx(eta * 10.0 / (eta + 10.0)));
    CHECK(step_size(s, 7, 10.0) == step_size(s, 4000, 10.0));
    s.c_h = 0.0;
    CHECK(step_size(s, 0, 3.0) == 3.0);

    for (ScheduleKind k : {ScheduleKind::exp_decay, ScheduleKind::constant, ScheduleKind::theoretical}) {
        CHECK(parse_schedule_kind(to_string(k)) == k);
    }
    CHECK(parse_init_kind("cbs") == InitKind::cbs);
    CHECK(parse_init_kind("half_identity") == InitKind::half_identity);
    CHECK_THROWS_AS(parse_init_kind("zero"), Error);
}

TEST_CASE("tail averaging window")
{
    TailAverager a(2);
    CHECK_THROWS_AS(a.mean(), Error);
    try {
        a.mean();
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoSamplesYet);
    }
    a.push(std::vector<double>{1.0, 10.0});
    CHECK(a.mean() == std::vector<double>{1.0, 10.0});
    a.push(std::vector<double>{2.0, 20.0});
    a.push(std::vector<double>{3.0, 30.0});
    a.push(std::vector<double>{4.0, 40.0});
    // t = 4 averages steps 2, 3, 4
    CHECK(a.window_size() == 3);
    CHECK(a.mean()[0] == doctest::Approx(3.0));
    CHECK(a.mean()[1] == doctest::Approx(30.0));
    CHECK_THROWS_AS(a.push(std::vector<double>{1.0}), Error);

    TailAverager c(3);
    for (int t = 0; t < 1000; ++t) {
        c.push(std::vector<double>{0.25, -1.5, 7.0});
        const auto m = c.mean();
        CHECK(m[0] == doctest::Approx(0.25).epsilon(1e-14));
        CHECK(m[1] == doctest::Approx(-1.5).epsilon(1e-14));
    }

    // window against a direct recomputation, for exact and blocked storage
    for (long block : {1L, 3L, 7L}) {
        TailAverager b(1, block);
        std::vector<double> xs;
        for (long t = 1; t <= 200; ++t) {
            const double x = std::sin(0.37 * static_cast<double>(t)) + 0.01 * static_cast<double>(t);
            xs.push_back(x);
            b.push(std::vector<double>{x});
            const long start = (t + 1) / 2;
            const long first = block == 1 ? start : ((start - 1) / block) * block + 1;
            double sum = 0.0;
            for (long s = first; s <= t; ++s) {
                sum += xs[static_cast<std::size_t>(s - 1)];
            }
            CHECK(b.window_size() == t - first + 1);
            CHECK(b.mean()[0] == doctest::Approx(sum / static_cast<double>(t - first + 1)).epsilon(1e-12));
        }
    }
}

TEST_CASE("scalar tail mean skips missing entries")
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(std::isnan(tail_mean(std::vector<double>{})));
    CHECK(tail_mean(std::vector<double>{5.0}) == 5.0);
    CHECK(tail_mean(std::vector<double>{1.0, 2.0, 3.0, 4.0}) == doctest::Approx(3.0));
    CHECK(tail_mean(std::vector<double>{1.0, 2.0, nan, 4.0}) == doctest::Approx(3.0));
    CHECK(tail_mean(std::vector<double>{1.0, 2.0, nan, nan}) == 2.0);
}

TEST_CASE("initial states")
{
    const auto p = small_problem(31, 12.0, 2.0, 0.3);
    const MDState half = init_state(p, InitKind::half_identity);
    CHECK(half.H.c == 0.0);
    for (double x : dense_density(half.H, p->beta)) {
        CHECK(x == doctest::Approx(0.5));
    }
    const MDState cbs = init_state(p, InitKind::cbs);
    CHECK(cbs.H.c == 1.0);
    for (std::size_t i = 0; i < p->size(); ++i) {
        CHECK(cbs.H.v[i] == p->u[i] - 0.3);
    }
    const Eigen::VectorXd ev = dense_spectrum(dense_hamiltonian(p->single_particle()));
    double tr = 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        tr += fermi_dirac(ev(i) - 0.3, p->beta);
    }
    double tr0 = 0.0;
    for (double x : dense_density(cbs.H, p->beta)) {
        tr0 += x;
    }
    CHECK(tr0 == doctest::Approx(tr).epsilon(1e-12));
    CHECK(cbs.t == 0);
}

TEST_CASE("Hamiltonian update")
{
    const auto p = small_problem(31, 12.0, 2.0, 0.3);
    MDState s = init_state(p, InitKind::half_identity);
    std::mt19937_64 rng(31);
    RealVector rho(p->size());
    for (auto& x : rho) {
        x = std::abs(gaussian_vector(rng, 1)[0]);
    }
    const GradientSample g = exact_sample(*p, rho);

    CHECK_THROWS_AS(md_update(s, g, 0.0), Error);
    try {
        md_update(s, g, 2.5);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::StepTooLarge);
    }
    CHECK(s.t == 0);

    md_update(s, g, p->beta);
    CHECK(s.H.c == 1.0);
    for (std::size_t i = 0; i < p->size(); ++i) {
        CHECK(s.H.v[i] == doctest::Approx(p->u[i] + g.g_tilde_diag[i] - p->mu).epsilon(1e-15));
    }
    CHECK(s.t == 1);

    const EffectiveHamiltonian before = s.H;
    md_update(s, g, 1e-14);
    for (std::size_t i = 0; i < p->size(); ++i) {
        CHECK(s.H.v[i] == doctest::Approx(before.v[i]).epsilon(1e-12));
    }

    MDState c = init_state(p, InitKind::cbs);
    for (int t = 0; t < 5; ++t) {
        md_update(c, g, 0.3 + 0.1 * t);
        CHECK(c.H.c == 1.0);
    }
    const RealVector avg = tail_average_density(c);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        CHECK(avg[i] == doctest::Approx(rho[i]).epsilon(1e-14));
    }
}

TEST_CASE("gradient samples")
{
    const auto p = small_problem(31, 12.0, 2.0, 0.0, false);
    const MDState s = init_state(p, InitKind::cbs);
    const Substreams streams(5);
    SampleOptions o;
    o.batch_size = 4;
    o.with_entropy = true;
    const GradientSample g = sample_gradient(s, contour_for(s), o, streams);
    CHECK(g.batch_size == 4);
    for (double x : g.g_tilde_diag) {
        CHECK(x == 0.0);
    }
    for (double x : g.rho_hat) {
        CHECK(x >= 0.0);
    }
    CHECK(g.z[2] == streams.gaussian(0, 2, p->size()));
    CHECK(g.entropy_terms.size() == 4);
    CHECK(g.stats.solves == 4 * 24);

    o.threads = 3;
    const GradientSample h = sample_gradient(s, contour_for(s), o, streams);
    CHECK(h.rho_hat == g.rho_hat);
    CHECK(h.entropy_terms == g.entropy_terms);

    o.batch_size = 0;
    CHECK_THROWS_AS(sample_gradient(s, contour_for(s), o, streams), Error);
}

TEST_CASE("density estimate is unbiased and concentrates")
{
    const auto p = small_problem(15, 6.0, 3.0);
    MDState s = init_state(p, InitKind::cbs);
    const RealVector exact = dense_density(s.H, p->beta);
    const PoleExpansion pe = contour_for(s, 40);
    SampleOptions o;
    o.batch_size = 1;
    o.solver = SolverConfig{1e-12, 1000, true};
    const int reps = 4000;
    RealVector mean(p->size(), 0.0);
    double trace_mean = 0.0;
    for (int r = 0; r < reps; ++r) {
        s.t = r;
        const GradientSample g = sample_gradient(s, pe, o, Substreams(77));
        double tr = 0.0;
        for (std::size_t i = 0; i < mean.size(); ++i) {
            mean[i] += g.rho_hat[i] / reps;
            tr += g.rho_hat[i];
        }
        trace_mean += tr / reps;
    }
    // var (X^{1/2} z)_i^2 = 2 X_ii^2
    for (std::size_t i = 0; i < mean.size(); ++i) {
        const double sigma = std::sqrt(2.0) * exact[i] / std::sqrt(static_cast<double>(reps));
        CHECK(std::abs(mean[i] - exact[i]) <= 4.0 * sigma);
    }
    const Eigen::MatrixXd x = dense_matrix_function(dense_hamiltonian(s.H), p->beta, DenseFunction::fd);
    const double tr_exact = x.trace();
    const double tr_sigma = std::sqrt(2.0 * (x * x).trace() / reps);
    CHECK(std::abs(trace_mean - tr_exact) <= 3.0 * tr_sigma);
}

TEST_CASE("objective terms at X = I/2")
{
    const auto p = small_problem(21, 8.0, 2.0, 0.0, false);
    MDState s = init_state(p, InitKind::half_identity);
    const double n = static_cast<double>(p->size());
    SampleOptions o;
    o.batch_size = 200;
    o.with_entropy = true;
    o.solver = SolverConfig{1e-12, 100, true};
    const PoleExpansion pe = build_contour(-0.1, 0.1, p->beta, 30, ContourKind::sqrt_fd);
    const GradientSample g = sample_gradient(s, pe, o, Substreams(3));
    md_update(s, g, 1e-12);
    const ObjectiveEstimate est = estimate_objective(s, g, pe, o.solver);
    // mean -n log 2, sd log 2 sqrt(2n / N_g)
    CHECK(std::abs(est.entropy + n * std::log(2.0)) <= 4.0 * std::log(2.0) * std::sqrt(2.0 * n / 200.0));
    CHECK(est.hartree == 0.0);

    GradientSample bare = g;
    bare.entropy_terms.clear();
    const ObjectiveEstimate again = estimate_objective(s, bare, pe, o.solver);
    CHECK(again.entropy == doctest::Approx(est.entropy).epsilon(1e-9));
}

TEST_CASE("objective estimates against the dense oracle")
{
    const auto p = small_problem(25, 10.0, 2.0, 0.2);
    MDState s = init_state(p, InitKind::cbs);
    const Eigen::MatrixXd h = dense_hamiltonian(s.H);
    const Eigen::MatrixXd x = dense_matrix_function(h, p->beta, DenseFunction::fd);
    const Eigen::MatrixXd c = dense_hamiltonian(p->single_particle());
    const Eigen::MatrixXd ent = dense_matrix_function(h, p->beta, DenseFunction::entropy);
    SampleOptions o;
    o.batch_size = 1;
    o.with_entropy = true;
    o.solver = SolverConfig{1e-12, 1000, true};
    const PoleExpansion pe = contour_for(s, 40);
    const int reps = 2000;
    double sp = 0.0, en = 0.0, sp2 = 0.0, en2 = 0.0;
    for (int r = 0; r < reps; ++r) {
        s.t = r;
        const GradientSample g = sample_gradient(s, pe, o, Substreams(9));
        const Eigen::VectorXd y = to_eigen(g.sqrtx_z[0]);
        const double a = y.dot(c * y);
        sp += a;
        sp2 += a * a;
        en += g.entropy_terms[0];
        en2 += g.entropy_terms[0] * g.entropy_terms[0];
    }
    sp /= reps;
    en /= reps;
    const double sp_sigma = std::sqrt((sp2 / reps - sp * sp) / reps);
    const double en_sigma = std::sqrt((en2 / reps - en * en) / reps);
    CHECK(std::abs(sp - (c * x).trace()) <= 3.0 * sp_sigma);
    CHECK(std::abs(en - ent.trace()) <= 3.0 * en_sigma);
}

TEST_CASE("Hartree gradient by finite differences")
{
    const auto p = small_problem(21, 8.0, 2.0);
    std::mt19937_64 rng(41);
    const Eigen::MatrixXd a = Eigen::MatrixXd::Random(21, 21);
    const Eigen::MatrixXd x = dense_matrix_function(a + a.transpose(), 1.0, DenseFunction::fd);
    Eigen::MatrixXd dx = Eigen::MatrixXd::Random(21, 21);
    dx = 0.5 * (dx + dx.transpose());
    auto energy = [&](const Eigen::MatrixXd& m) {
        const Eigen::VectorXd d = m.diagonal();
        return p->hartree_energy(RealVector(d.data(), d.data() + d.size()));
    };
    const Eigen::VectorXd d = x.diagonal();
    const RealVector grad = p->hartree_potential(RealVector(d.data(), d.data() + d.size()));
    const double eps = 1e-5;
    const double fd = (energy(x + eps * dx) - energy(x - eps * dx)) / (2 * eps);
    const double exact = to_eigen(grad).dot(dx.diagonal());
    CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
}

TEST_CASE("mirror map geometry")
{
    std::mt19937_64 rng(42);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 5 + rep;
        const Eigen::MatrixXd a = Eigen::MatrixXd::Random(n, n);
        const Eigen::MatrixXd x = dense_matrix_function(a + a.transpose(), 1.3, DenseFunction::fd);
        CHECK((dense_inverse_mirror_map(dense_mirror_map(x)) - x).norm() <= 1e-10 * x.norm());
        const Eigen::MatrixXd half = 0.5 * Eigen::MatrixXd::Identity(n, n);
        const double d = dense_bregman_divergence(x, half);
        CHECK(d >= -1e-12);
        CHECK(d <= n * std::log(2.0) + 1e-12);
        CHECK(std::abs(dense_bregman_divergence(x, x)) < 1e-10);
        // the mirror image of f_beta(H) is -beta H
        const Eigen::MatrixXd h = a + a.transpose();
        CHECK((dense_mirror_map(x) + 1.3 * h).norm() <= 1e-9 * h.norm() * 1.3);
    }
    CHECK(dense_fd_entropy(0.5 * Eigen::MatrixXd::Identity(7, 7)) == doctest::Approx(-7 * std::log(2.0)));
    CHECK_THROWS_AS(dense_mirror_map(Eigen::MatrixXd::Identity(3, 3)), Error);
}

TEST_CASE("effective potential stays nonnegative and the trace does not grow")
{
    // (27, 5): entrywise positive kernel
    const auto p = small_problem(27, 5.0, 2.0, 0.5);
    REQUIRE(dense_operator(*p->interaction).minCoeff() >= 0.0);
    RunOptions o;
    o.T_max = 40;
    o.seed = 3;
    o.batch_size = 2;
    o.pole_count = 24;
    o.schedule.gamma0 = 1.5;
    MirrorDescent md(p, o);
    const MDState& s = md.state();
    double tr0 = 0.0;
    for (double x : dense_density(s.H, p->beta)) {
        tr0 += x;
    }
    while (md.step()) {
        for (std::size_t i = 0; i < p->size(); ++i) {
            CHECK(s.H.v[i] - (p->u[i] - p->mu) >= 0.0);
        }
        CHECK(s.H.c == 1.0);
        double tr = 0.0;
        for (double x : dense_density(s.H, p->beta)) {
            tr += x;
        }
        CHECK(tr <= tr0 + 1e-12);
    }
}

TEST_CASE("SCF fixed point is stationary under an exact-gradient update")
{
    const auto p = small_problem(31, 12.0, 4.0, 0.1);
    const SCFResult r = dense_scf(*p, SCFOptions{0.5, 1e-12, 10000});
    MDState s = init_state(p, InitKind::cbs);
    for (std::size_t i = 0; i < p->size(); ++i) {
        s.H.v[i] = p->u[i] + r.potential[i] - p->mu;
    }
    const EffectiveHamiltonian star = s.H;
    const RealVector rho = dense_density(star, p->beta);
    for (double gamma : {0.1, 1.0, 4.0}) {
        s.H = star;
        md_update(s, exact_sample(*p, rho), gamma);
        for (std::size_t i = 0; i < p->size(); ++i) {
            CHECK(std::abs(s.H.v[i] - star.v[i]) <= 1e-10);
        }
    }
}

TEST_CASE("driver")
{
    const auto p = small_problem(31, 12.0, 2.0);
    RunOptions o;
    o.T_max = 0;
    MirrorDescent none(p, o);
    CHECK(none.done());
    CHECK(none.run().empty());
    CHECK(none.state().H.v == init_state(p, InitKind::cbs).H.v);

    o.T_max = 30;
    o.seed = 11;
    o.batch_size = 3;
    o.timing_stride = 7;
    o.entropy_every = 4;
    const RealVector ref = dense_scf(*p).rho_star;
    MirrorDescent a(p, o, ref), b(p, o, ref);
    auto ra = a.run(), rb = b.run();
    REQUIRE(ra.size() == 30);
    for (std::size_t i = 0; i < ra.size(); ++i) {
        CHECK(ra[i].t == static_cast<long>(i) + 1);
        CHECK(ra[i].rel_density_error.has_value());
        CHECK(ra[i].wall_time_matvec_batch.has_value() == (i % 7 == 0));
        ra[i].wall_time_matvec_batch.reset();
        rb[i].wall_time_matvec_batch.reset();
        CHECK(ra[i] == rb[i]);
        CHECK(ra[i].step_gamma == doctest::Approx(std::exp(-static_cast<double>(i) / 1000.0)));
        CHECK(ra[i].free_energy_per_basis * 31.0 == doctest::Approx(ra[i].free_energy_per_volume * 12.0));
    }
    CHECK(a.density() == b.density());

    o.seed = 12;
    MirrorDescent c(p, o);
    const auto rc = c.run();
    CHECK_FALSE(rc.back().rel_density_error.has_value());
    CHECK(rc.back().free_energy_per_volume != ra.back().free_energy_per_volume);

    CHECK_THROWS_AS(MirrorDescent(p, o, RealVector(5)), Error);
}

TEST_CASE("early stop on a flat free energy")
{
    const auto p = small_problem(15, 6.0, 2.0, 0.0, false);
    RunOptions o;
    o.T_max = 400;
    o.batch_size = 2;
    o.early_stop = true;
    o.early_stop_window = 10;
    o.early_stop_tol = 1.0;
    MirrorDescent md(p, o);
    const auto recs = md.run();
    CHECK(recs.size() == 20);
}
