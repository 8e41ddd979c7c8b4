#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rvsm/analysis.hpp"
#include "test_helpers.hpp"

using namespace rvsm;
using rvsm::testing::make_compliant;

namespace {

Trajectory synthetic(const std::vector<double>& lagrangians, const std::vector<double>& norms,
                     const std::vector<double>& grad_norms) {
    Trajectory traj;
    const std::size_t n = std::max({lagrangians.size(), norms.size(), grad_norms.size()});
    for (std::size_t t = 0; t < n; ++t) {
        TrajectoryRecord r;
        r.t = static_cast<int>(t);
        r.lagrangian = t < lagrangians.size() ? lagrangians[t] : 0.0;
        r.theta = r.lagrangian;
        r.norm_w = t < norms.size() ? norms[t] : 1.0;
        r.grad_norm = t < grad_norms.size() ? grad_norms[t] : 0.0;
        traj.records.push_back(std::move(r));
    }
    traj.reason = StopReason::MaxIters;
    return traj;
}

}  // namespace

TEST_CASE("precondition report on the worked example") {
    // theta0 = pi/4 against w*, k = 2, d = 16.
    const ProblemSpec spec(Vec{1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}, 2);
    Vec w0(16, 0.0);
    w0[0] = std::cos(M_PI / 4.0);
    w0[1] = std::sin(M_PI / 4.0);
    auto s = make_compliant(16, 2, 30, PenaltyKind::L1, 0.1, 10, 0.0);
    s.cfg.beta = 0.2;
    s.cfg.eta = 0.1;
    s.cfg.penalty = Penalty(PenaltyKind::L1, 0.02);
    const PreconditionReport rep = check_preconditions(s.cfg, spec, w0, 4.0);

    const double delta = 3.0 * M_PI / 4.0;
    CHECK(rep.delta == doctest::Approx(delta).epsilon(1e-12));
    // Independent arithmetic: delta sin(delta) / (k pi).
    const double bound = delta * std::sin(delta) / (2.0 * M_PI);
    CHECK(rep.beta_bound == doctest::Approx(bound).epsilon(1e-12));
    CHECK(rep.beta_bound == doctest::Approx(0.2652).epsilon(1e-3));
    CHECK(rep.beta_ok);  // 0.2 <= 0.2652
    CHECK(rep.k_ok);
    CHECK(rep.angle_ok);
    CHECK(rep.lambda_ratio_ok);  // 0.1 < 1/4
}

TEST_CASE("boundary cases of the hypotheses") {
    const ProblemSpec spec = ProblemSpec::random(16, 2, 31);
    auto s = make_compliant(16, 2, 31, PenaltyKind::L1, 0.1, 10, 0.0);

    // lambda/beta exactly at 1/sqrt(d) fails the strict inequality.
    s.cfg.beta = 0.05;
    s.cfg.penalty = Penalty(PenaltyKind::L1, 0.05 / std::sqrt(16.0));
    PreconditionReport rep = check_preconditions(s.cfg, spec, s.w0, 4.0);
    CHECK_FALSE(rep.lambda_ratio_ok);

    // eta exactly at 1/(beta+L) passes the non-strict inequality.
    s.cfg.eta = 1.0 / (s.cfg.beta + 4.0);
    rep = check_preconditions(s.cfg, spec, s.w0, 4.0);
    CHECK(rep.eta_ok);
    s.cfg.eta = std::nextafter(rep.eta_bound, 1.0);
    rep = check_preconditions(s.cfg, spec, s.w0, 4.0);
    CHECK_FALSE(rep.eta_ok);
}

TEST_CASE("monotone scan") {
    const Trajectory constant = synthetic({1.0, 1.0, 1.0}, {}, {});
    CHECK(check_monotone(constant, TrajField::Lagrangian).ok);

    const Trajectory rising = synthetic({1.0, 2.0, 3.0}, {}, {});
    const MonotoneReport rep = check_monotone(rising, TrajField::Lagrangian);
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.first_violation.has_value());
    CHECK(*rep.first_violation == 1);
    CHECK(rep.max_increase == doctest::Approx(1.0));

    // Sub-tolerance wiggles do not count.
    const Trajectory wiggle = synthetic({1.0, 1.0 + 1e-13, 1.0 - 1e-13}, {}, {});
    CHECK(check_monotone(wiggle, TrajField::Lagrangian).ok);
}

TEST_CASE("annulus detection") {
    const ProblemSpec spec(Vec{1.0, 0.0}, 2);

    const Trajectory steady = synthetic({}, {1.0, 1.0, 1.0, 1.0}, {});
    const AnnulusReport rep = check_annulus(steady, spec);
    CHECK(rep.T_measured == 0);
    CHECK(rep.M_measured == 0.0);

    const Trajectory settling = synthetic({}, {1.6, 1.3, 1.05, 1.02, 0.98}, {});
    const AnnulusReport rep2 = check_annulus(settling, spec);
    CHECK(rep2.M_measured < 0.1);
    CHECK(rep2.T_measured >= 2);

    const Trajectory collapsing = synthetic({}, {1.0, 0.6, 0.2, 0.0}, {});
    CHECK_THROWS_AS(check_annulus(collapsing, spec), AnnulusViolation);

    const Trajectory exploding = synthetic({}, {1.0, 1.5, 2.5, 3.5}, {});
    CHECK_THROWS_AS(check_annulus(exploding, spec), AnnulusViolation);
}

TEST_CASE("limit report on an unpenalized run") {
    auto s = make_compliant(8, 3, 32, PenaltyKind::L1, 0.0, 50000, 1e-13);
    const Trajectory traj = run_rvsm(s.cfg, s.spec);
    REQUIRE(traj.reason == StopReason::StepTolerance);
    const LimitReport rep = limit_residual(traj, s.spec, s.cfg.penalty, s.cfg.beta);
    CHECK(rep.residual <= 1e-6);
    CHECK(rep.C == doctest::Approx(s.spec.w_star_norm() / norm(rep.w_bar)).epsilon(1e-6));
    CHECK(rep.grad_norm_at_limit <= 1e-8);
    CHECK(rep.error_to_truth <= 1e-4);
}

TEST_CASE("limit report on a penalized compliant run") {
    auto s = make_compliant(16, 4, 33, PenaltyKind::L1, 0.1, 100000, 1e-12);
    const Trajectory traj = run_rvsm(s.cfg, s.spec);
    REQUIRE(traj.reason == StopReason::StepTolerance);
    const LimitReport rep = limit_residual(traj, s.spec, s.cfg.penalty, s.cfg.beta);
    CHECK(rep.residual <= 1e-4 * s.spec.w_star_norm());
    CHECK(rep.theta_bar < s.delta);
    const double denom = 1.0 - 2.0 * s.spec.k() * s.cfg.penalty.lambda * std::sqrt(16.0);
    REQUIRE(denom > 0.0);
    CHECK(rep.C > 0.0);
    CHECK(rep.C < 1.0 / denom);
    CHECK(rep.grad_norm_at_limit <= std::max(1e-8, s.cfg.stop_tol / s.cfg.eta));
}

TEST_CASE("limit report requires convergence") {
    auto s = make_compliant(8, 2, 34, PenaltyKind::L1, 0.1, 5, 0.0);
    const Trajectory traj = run_rvsm(s.cfg, s.spec);
    CHECK(traj.reason == StopReason::MaxIters);
    CHECK_THROWS_AS(limit_residual(traj, s.spec, s.cfg.penalty, s.cfg.beta), NotConverged);
}

TEST_CASE("beta scaling slope is near one") {
    auto s = make_compliant(16, 4, 35, PenaltyKind::L1, 0.1, 200000, 1e-12);
    std::vector<double> betas;
    for (int i = 0; i < 4; ++i) betas.push_back(s.cfg.beta / std::pow(2.0, 3 - i));
    const ScalingReport rep = beta_error_scaling(s.cfg, s.spec, betas);
    CHECK(rep.errors.size() == betas.size());
    CHECK(rep.slope >= 0.8);
    for (std::size_t i = 1; i < rep.errors.size(); ++i) CHECK(rep.errors[i] >= rep.errors[i - 1]);
}

TEST_CASE("beta scaling degenerate inputs") {
    auto s = make_compliant(8, 2, 36, PenaltyKind::L1, 0.0, 30000, 1e-13);
    CHECK_THROWS_AS(beta_error_scaling(s.cfg, s.spec, {0.01}), InvalidRange);
    const ScalingReport rep = beta_error_scaling(s.cfg, s.spec, {s.cfg.beta / 4, s.cfg.beta});
    for (double err : rep.errors) CHECK(err <= 1e-6);  // unpenalized limit is w*
}

TEST_CASE("rate envelope") {
    std::vector<double> flat(10001, 1.0);
    const Trajectory constant = synthetic({}, {}, flat);
    CHECK_FALSE(grad_norm_rate(constant).ok);

    std::vector<double> stationary(2001, 0.0);
    for (int t = 0; t < 5; ++t) stationary[static_cast<std::size_t>(t)] = 1.0;
    const Trajectory early = synthetic({}, {}, stationary);
    const RateReport rep = grad_norm_rate(early);
    CHECK(rep.ok);
    CHECK(rep.c_fit == 0.0);

    const Trajectory tiny = synthetic({}, {}, std::vector<double>(50, 1.0));
    CHECK_THROWS_AS(grad_norm_rate(tiny), InvalidRange);
}

TEST_CASE("rate envelope on a compliant run") {
    auto s = make_compliant(16, 4, 37, PenaltyKind::L1, 0.1, 1500, 0.0);
    const Trajectory traj = run_rvsm(s.cfg, s.spec);
    // stop_tol = 0 can still halt early at an exact fixed point.
    REQUIRE(traj.iterations() >= 1000);
    const RateReport rep = grad_norm_rate(traj);
    CHECK(rep.prefixes.size() == 2);
    CHECK(rep.ok);
}

TEST_CASE("checkers are pure") {
    auto s = make_compliant(8, 2, 38, PenaltyKind::L0, 0.1, 500, 0.0);
    const Trajectory traj = run_rvsm(s.cfg, s.spec);
    const MonotoneReport a = check_monotone(traj, TrajField::Lagrangian);
    const MonotoneReport b = check_monotone(traj, TrajField::Lagrangian);
    CHECK(a.ok == b.ok);
    CHECK(a.max_increase == b.max_increase);
    const AnnulusReport r1 = check_annulus(traj, s.spec);
    const AnnulusReport r2 = check_annulus(traj, s.spec);
    CHECK(r1.T_measured == r2.T_measured);
    CHECK(r1.M_measured == r2.M_measured);
}
