#include "rvsm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rvsm {

PreconditionReport check_preconditions(const RvsmConfig& cfg, const ProblemSpec& spec,
                                       const Vec& w0, double L) {
    PreconditionReport rep;
    rep.L_used = L;
    rep.eta = cfg.eta;
    rep.beta = cfg.beta;

    rep.theta0 = angle(w0, spec.w_star());
    rep.delta = M_PI - rep.theta0;
    rep.angle_ok = rep.delta > 0.0;

    rep.eta_bound = 1.0 / (cfg.beta + L);
    rep.eta_ok = cfg.eta <= rep.eta_bound;
    rep.eta_descent_bound = 2.0 / (cfg.beta + L);
    rep.eta_within_descent_bound = cfg.eta <= rep.eta_descent_bound;

    rep.k_ok = spec.k() >= 2;

    rep.beta_bound = rep.delta * std::sin(rep.delta) / (static_cast<double>(spec.k()) * M_PI);
    rep.beta_ok = cfg.beta <= rep.beta_bound;

    rep.lambda_ratio = cfg.penalty.lambda / cfg.beta;
    rep.lambda_ratio_bound = 1.0 / std::sqrt(static_cast<double>(spec.dim()));
    rep.lambda_ratio_ok = rep.lambda_ratio < rep.lambda_ratio_bound;
    return rep;
}

MonotoneReport check_monotone(const Trajectory& traj, TrajField field) {
    if (traj.records.empty()) throw InvalidRange("check_monotone: empty trajectory");
    constexpr double kTol = 1e-12;
    MonotoneReport rep;
    auto value = [&](const TrajectoryRecord& r) {
        return field == TrajField::Lagrangian ? r.lagrangian : r.theta;
    };
    for (std::size_t i = 1; i < traj.records.size(); ++i) {
        const double inc = value(traj.records[i]) - value(traj.records[i - 1]);
        rep.max_increase = std::max(rep.max_increase, inc);
        if (inc > kTol && rep.ok) {
            rep.ok = false;
            rep.first_violation = static_cast<int>(i);
        }
    }
    return rep;
}

AnnulusReport check_annulus(const Trajectory& traj, const ProblemSpec& spec) {
    if (traj.records.empty()) throw InvalidRange("check_annulus: empty trajectory");
    const double r = spec.w_star_norm();
    const std::size_t n = traj.records.size();
    // Suffix maxima of | ||w_t|| - r |; tail sups are non-increasing in T.
    std::vector<double> tail(n);
    double running = 0.0;
    for (std::size_t i = n; i-- > 0;) {
        running = std::max(running, std::abs(traj.records[i].norm_w - r));
        tail[i] = running;
    }
    const double best = tail[n - 1];
    std::size_t T = 0;
    while (T + 1 < n && tail[T] > best) ++T;
    if (!(best < r)) {
        throw AnnulusViolation("check_annulus: every tail reaches 0 or 2||w*|| (M = " +
                               std::to_string(best) + ", ||w*|| = " + std::to_string(r) + ")");
    }
    return AnnulusReport{static_cast<int>(T), tail[T]};
}

LimitReport limit_residual(const Trajectory& traj, const ProblemSpec& spec, const Penalty& p,
                           double beta) {
    if (traj.records.empty()) throw InvalidRange("limit_residual: empty trajectory");
    if (traj.reason != StopReason::StepTolerance) {
        throw NotConverged("limit_residual: trajectory hit max_iters with step norm " +
                           std::to_string(traj.final_step_norm));
    }
    const TrajectoryRecord& last = traj.back();
    LimitReport rep;
    rep.w_bar = last.w;
    rep.u_bar = last.u;
    rep.theta_bar = angle(last.w, spec.w_star());
    rep.error_to_truth = dist(last.w, spec.w_star());

    Vec fo = grad(last.w, spec);
    for (std::size_t i = 0; i < fo.size(); ++i) fo[i] += beta * (last.w[i] - last.u[i]);
    rep.grad_norm_at_limit = norm(fo);

    // w* - (k pi/(pi - theta)) beta (w - prox(w)) should be C w for some
    // scalar C; fit C and report what is left over.
    const double factor =
        static_cast<double>(spec.k()) * M_PI / (M_PI - rep.theta_bar) * beta;
    const Vec shrunk = prox(p, last.w, beta);
    Vec target(last.w.size());
    for (std::size_t i = 0; i < target.size(); ++i) {
        target[i] = spec.w_star()[i] - factor * (last.w[i] - shrunk[i]);
    }
    const double ww = dot(last.w, last.w);
    rep.C = ww > 0.0 ? dot(target, last.w) / ww : 0.0;
    rep.residual = dist(target, scaled(last.w, rep.C));
    return rep;
}

ScalingReport beta_error_scaling(const RvsmConfig& base_cfg, const ProblemSpec& spec,
                                 const std::vector<double>& betas) {
    if (betas.size() < 2) {
        throw InvalidRange("beta_error_scaling: need at least two betas for a slope");
    }
    const double ratio = base_cfg.penalty.lambda / base_cfg.beta;
    ScalingReport rep;
    rep.betas = betas;
    for (double beta : betas) {
        RvsmConfig cfg = base_cfg;
        cfg.beta = beta;
        cfg.penalty.lambda = ratio * beta;
        const Trajectory traj = run_rvsm(cfg, spec);
        if (traj.reason != StopReason::StepTolerance) {
            throw NotConverged("beta_error_scaling: run at beta = " + std::to_string(beta) +
                               " did not reach the step tolerance");
        }
        rep.errors.push_back(dist(traj.back().w, spec.w_star()));
    }
    // Least-squares slope of log error against log beta.
    const std::size_t n = betas.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        lx[i] = std::log(betas[i]);
        ly[i] = std::log(std::max(rep.errors[i], 1e-300));
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    rep.slope = sxy / sxx;
    return rep;
}

RateReport grad_norm_rate(const Trajectory& traj) {
    const int len = traj.iterations();
    if (len < 100) throw InvalidRange("grad_norm_rate: need at least 100 iterations");
    RateReport rep;
    for (int T : {100, 1000, 10000}) {
        if (T <= len) rep.prefixes.push_back(T);
    }
    double running_min = traj.records[1].grad_norm;
    std::size_t next = 0;
    for (int t = 1; t <= len && next < rep.prefixes.size(); ++t) {
        running_min = std::min(running_min, traj.records[static_cast<std::size_t>(t)].grad_norm);
        if (t == rep.prefixes[next]) {
            rep.prefix_min.push_back(running_min);
            ++next;
        }
    }
    // Envelope constant calibrated at the earliest prefix; the later
    // prefixes must stay below it within 10%. (A two-sided fit would
    // reject runs that converge faster than 1/sqrt(T), which satisfy the
    // rate claim a fortiori.)
    rep.c_fit = rep.prefix_min[0] * std::sqrt(static_cast<double>(rep.prefixes[0]));
    rep.ok = true;
    for (std::size_t i = 0; i < rep.prefixes.size(); ++i) {
        const double lhs = rep.prefix_min[i] * std::sqrt(static_cast<double>(rep.prefixes[i]));
        if (lhs > 1.1 * rep.c_fit) rep.ok = false;
    }
    return rep;
}

}  // namespace rvsm
