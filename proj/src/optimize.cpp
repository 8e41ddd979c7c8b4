#include "rvsm/optimize.hpp"

#include <cmath>
#include <string>

namespace rvsm {

Init Init::explicit_vector(Vec w0) {
    ensure_finite(w0, "Init vector");
    Init init;
    init.w0_ = std::move(w0);
    return init;
}

Init Init::random_sphere(std::uint64_t seed, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw InvalidRange("Init: scale must be finite and > 0");
    }
    Init init;
    init.seed_ = seed;
    init.scale_ = scale;
    return init;
}

Vec Init::make(int d) const {
    if (w0_) {
        if (static_cast<int>(w0_->size()) != d) {
            throw ShapeMismatch("Init: explicit vector has dimension " +
                                std::to_string(w0_->size()) + ", problem wants " +
                                std::to_string(d));
        }
        return *w0_;
    }
    Rng rng(seed_);
    return scaled(sample_unit_sphere(d, rng), scale_);
}

void RvsmConfig::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("rvsm: eta must be > 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("rvsm: beta must be > 0");
    if (max_iters < 1) throw ConfigError("rvsm: max_iters must be >= 1");
    if (!(stop_tol >= 0.0)) throw ConfigError("rvsm: stop_tol must be >= 0");
}

void AdmmConfig::validate() const {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("admm: eta must be > 0");
    if (!(beta > 0.0) || !std::isfinite(beta)) throw ConfigError("admm: beta must be > 0");
    if (max_iters < 1) throw ConfigError("admm: max_iters must be >= 1");
    if (!(stop_tol >= 0.0)) throw ConfigError("admm: stop_tol must be >= 0");
}

double lagrangian(const Vec& w, const Vec& u, const Penalty& p, double beta,
                  const ProblemSpec& spec) {
    if (beta <= 0.0) throw InvalidBeta("lagrangian: beta must be positive");
    const double gap = dist(w, u);
    return loss(w, spec) + penalty_value(p, u) + 0.5 * beta * gap * gap;
}

namespace {

// Rethrow library errors with the iteration stamped on.
template <typename Fn>
auto at_iteration(int t, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const NonFinite&) {
        throw;
    } catch (const Error& e) {
        throw Error(std::string(e.what()) + " (iteration " + std::to_string(t) + ")");
    }
}

TrajectoryRecord make_record(int t, Vec w, Vec u, const Penalty& p, double beta,
                             const ProblemSpec& spec, const Vec* z) {
    TrajectoryRecord rec;
    rec.t = t;
    rec.f = loss(w, spec);
    rec.penalty = penalty_value(p, u);
    rec.theta = angle(w, spec.w_star());
    rec.norm_w = norm(w);
    rec.gap_wu = dist(w, u);
    rec.lagrangian = rec.f + rec.penalty + 0.5 * beta * rec.gap_wu * rec.gap_wu;
    Vec g = grad(w, spec);
    for (std::size_t i = 0; i < g.size(); ++i) {
        g[i] += beta * (w[i] - u[i]);
        if (z) g[i] += (*z)[i];
    }
    rec.grad_norm = norm(g);
    rec.nnz_u = nnz(u);
    if (z) {
        rec.z_norm = norm(*z);
        rec.lagrangian += dot(*z, axpy(w, -1.0, u));
    }
    rec.w = std::move(w);
    rec.u = std::move(u);
    return rec;
}

void check_finite_step(const Vec& w, const Vec& u, int t) {
    if (!all_finite(w) || !all_finite(u)) {
        throw NonFinite("update produced a non-finite iterate", t);
    }
}

}  // namespace

std::pair<Vec, Vec> rvsm_step(const Vec& w, const Vec& u, const RvsmConfig& cfg,
                              const ProblemSpec& spec) {
    if (norm(w) < kNormEps) throw DegenerateVector("rvsm_step: ||w|| below threshold");
    const Vec g = grad(w, spec);
    Vec w_next(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        w_next[i] = w[i] - cfg.eta * g[i] - cfg.eta * cfg.beta * (w[i] - u[i]);
    }
    const Vec& source = cfg.u_update_source == UpdateSource::PreviousW ? w : w_next;
    Vec u_next = prox(cfg.penalty, source, cfg.beta);
    if (!all_finite(w_next) || !all_finite(u_next)) {
        throw NonFinite("rvsm_step produced a non-finite iterate", -1);
    }
    return {std::move(w_next), std::move(u_next)};
}

Trajectory run_rvsm(const RvsmConfig& cfg, const ProblemSpec& spec) {
    cfg.validate();
    Trajectory traj;
    traj.records.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);

    Vec w = cfg.init.make(spec.dim());
    Vec u = at_iteration(0, [&] { return prox(cfg.penalty, w, cfg.beta); });
    traj.records.push_back(
        at_iteration(0, [&] { return make_record(0, w, u, cfg.penalty, cfg.beta, spec, nullptr); }));

    for (int t = 1; t <= cfg.max_iters; ++t) {
        auto [w_next, u_next] = at_iteration(t, [&] { return rvsm_step(w, u, cfg, spec); });
        check_finite_step(w_next, u_next, t);
        const double step_norm = dist(w_next, w);
        w = std::move(w_next);
        u = std::move(u_next);
        traj.records.push_back(at_iteration(
            t, [&] { return make_record(t, w, u, cfg.penalty, cfg.beta, spec, nullptr); }));
        traj.final_step_norm = step_norm;
        if (step_norm <= cfg.stop_tol) {
            traj.reason = StopReason::StepTolerance;
            return traj;
        }
    }
    traj.reason = StopReason::MaxIters;
    return traj;
}

Trajectory run_admm(const AdmmConfig& cfg, const ProblemSpec& spec) {
    cfg.validate();
    Trajectory traj;
    traj.records.reserve(static_cast<std::size_t>(cfg.max_iters) + 1);

    Vec w = cfg.init.make(spec.dim());
    Vec z(w.size(), 0.0);
    Vec u = at_iteration(0, [&] { return prox(cfg.penalty, w, cfg.beta); });
    traj.records.push_back(
        at_iteration(0, [&] { return make_record(0, w, u, cfg.penalty, cfg.beta, spec, &z); }));

    for (int t = 1; t <= cfg.max_iters; ++t) {
        const Vec g = at_iteration(t, [&] { return grad(w, spec); });
        Vec w_next(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
            w_next[i] = w[i] - cfg.eta * (g[i] + z[i] + cfg.beta * (w[i] - u[i]));
        }
        Vec shifted(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) shifted[i] = w_next[i] + z[i] / cfg.beta;
        Vec u_next = at_iteration(t, [&] { return prox(cfg.penalty, shifted, cfg.beta); });
        for (std::size_t i = 0; i < w.size(); ++i) z[i] += cfg.beta * (w_next[i] - u_next[i]);
        check_finite_step(w_next, u_next, t);
        if (!all_finite(z)) throw NonFinite("admm multiplier became non-finite", t);

        const double step_norm = dist(w_next, w);
        w = std::move(w_next);
        u = std::move(u_next);
        traj.records.push_back(at_iteration(
            t, [&] { return make_record(t, w, u, cfg.penalty, cfg.beta, spec, &z); }));
        traj.final_step_norm = step_norm;
        if (step_norm <= cfg.stop_tol) {
            traj.reason = StopReason::StepTolerance;
            return traj;
        }
    }
    traj.reason = StopReason::MaxIters;
    return traj;
}

Trajectory run_gd(double eta, const Vec& init, const ProblemSpec& spec, int max_iters,
                  double stop_tol) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ConfigError("gd: eta must be > 0");
    if (max_iters < 1) throw ConfigError("gd: max_iters must be >= 1");
    if (!(stop_tol >= 0.0)) throw ConfigError("gd: stop_tol must be >= 0");

    Trajectory traj;
    traj.records.reserve(static_cast<std::size_t>(max_iters) + 1);
    Vec w = init;

    auto record = [&](int t) {
        TrajectoryRecord rec;
        rec.t = t;
        rec.f = loss(w, spec);
        rec.penalty = 0.0;
        rec.lagrangian = rec.f;
        rec.theta = angle(w, spec.w_star());
        rec.norm_w = norm(w);
        rec.gap_wu = 0.0;
        rec.grad_norm = norm(grad(w, spec));
        rec.nnz_u = nnz(w);
        rec.w = w;
        rec.u = w;
        return rec;
    };

    traj.records.push_back(at_iteration(0, [&] { return record(0); }));
    for (int t = 1; t <= max_iters; ++t) {
        const Vec g = at_iteration(t, [&] { return grad(w, spec); });
        Vec w_next = axpy(w, -eta, g);
        if (!all_finite(w_next)) throw NonFinite("gd produced a non-finite iterate", t);
        const double step_norm = dist(w_next, w);
        w = std::move(w_next);
        traj.records.push_back(at_iteration(t, [&] { return record(t); }));
        traj.final_step_norm = step_norm;
        if (step_norm <= stop_tol) {
            traj.reason = StopReason::StepTolerance;
            return traj;
        }
    }
    traj.reason = StopReason::MaxIters;
    return traj;
}

double auto_step_size(double beta, double L) {
    if (!(beta >= 0.0) || !(L > 0.0)) {
        throw InvalidRange("auto_step_size: requires beta >= 0 and L > 0");
    }
    return 1.0 / (beta + L);
}

}  // namespace rvsm
