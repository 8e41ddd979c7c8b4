#include "rvsm/certify.hpp"

#include <algorithm>
#include <cmath>

#include "rvsm/empirical.hpp"

namespace rvsm {

SuiteResult certify_prox_impl(const ScalarProx& fn, PenaltyKind kind, int n_scalars,
                              std::uint64_t seed, double tol) {
    SuiteResult res;
    res.name = "prox-vs-grid-oracle [" + to_string(kind) + "]";
    Rng rng(seed);
    const double grid_step = 1e-5;

    auto check_one = [&](const Penalty& p, double w, double beta) {
        const double span = std::abs(w) + 1.0;
        const double oracle = prox_grid_oracle(p, w, beta, -span, span, grid_step);
        const double got = fn(p, w, beta);
        const double err = std::abs(got - oracle);
        ++res.n_checked;
        res.worst = std::max(res.worst, err);
        if (err > tol) ++res.n_failed;
    };

    for (int i = 0; i < n_scalars; ++i) {
        // Draw lambda/beta ratios and magnitudes around the thresholds so
        // both branches of every operator get exercised.
        const double lambda = 0.01 + 0.5 * rng.uniform();
        const double beta = 0.1 + 2.0 * rng.uniform();
        const Penalty p(kind, lambda, 1.0);
        const double w = 3.0 * (2.0 * rng.uniform() - 1.0);
        check_one(p, w, beta);
    }
    // Threshold-boundary inputs, exact and one ulp-ish to each side.
    {
        const double lambda = 0.08, beta = 1.0;
        const Penalty p(kind, lambda, 1.0);
        double thr = 0.0;
        switch (kind) {
            case PenaltyKind::L1: thr = lambda / beta; break;
            case PenaltyKind::L0: thr = std::sqrt(2.0 * lambda / beta); break;
            case PenaltyKind::TL1: thr = std::sqrt(2.0 * lambda / beta); break;
        }
        for (double w : {thr, -thr, thr * (1.0 + 1e-9), thr * (1.0 - 1e-9), 0.0}) {
            check_one(p, w, beta);
        }
    }
    res.pass = res.n_failed == 0;
    return res;
}

SuiteResult certify_prox(PenaltyKind kind, int n_scalars, std::uint64_t seed, double tol) {
    return certify_prox_impl(
        [](const Penalty& p, double w, double beta) { return prox_scalar(p, w, beta); }, kind,
        n_scalars, seed, tol);
}

SuiteResult certify_grad(const std::vector<int>& dims, const std::vector<int>& ks,
                         int points_per_cell, double h, double rel_tol, std::uint64_t seed) {
    SuiteResult res;
    res.name = "grad-vs-finite-difference";
    int cell = 0;
    for (int d : dims) {
        for (int k : ks) {
            Rng rng(Rng::child_seed(seed, static_cast<std::uint64_t>(cell++)));
            const ProblemSpec spec = ProblemSpec::random(d, k, rng.raw());
            for (int i = 0; i < points_per_cell; ++i) {
                // Random direction, norm in [0.5, 2]: clear of the origin
                // where the loss stops being differentiable.
                Vec w = sample_unit_sphere(d, rng);
                const double scale = 0.5 + 1.5 * rng.uniform();
                for (auto& x : w) x *= scale;
                const Vec g = grad(w, spec);
                const Vec fd = finite_diff_grad(w, spec, h);
                const double rel = dist(g, fd) / std::max(norm(g), 1e-12);
                ++res.n_checked;
                res.worst = std::max(res.worst, rel);
                if (rel > rel_tol) ++res.n_failed;
            }
        }
    }
    res.pass = res.n_failed == 0;
    return res;
}

SuiteResult certify_g_closed(const std::vector<int>& dims, int n_instances, long long n_samples,
                             double sigma_gate, std::uint64_t seed) {
    SuiteResult res;
    res.name = "g-closed-vs-monte-carlo";
    for (int i = 0; i < n_instances; ++i) {
        Rng rng(Rng::child_seed(seed, static_cast<std::uint64_t>(i)));
        const int d = dims[static_cast<std::size_t>(i) % dims.size()];
        Vec u = sample_unit_sphere(d, rng);
        Vec v = sample_unit_sphere(d, rng);
        const double su = 0.3 + 1.7 * rng.uniform();
        const double sv = 0.3 + 1.7 * rng.uniform();
        for (auto& x : u) x *= su;
        for (auto& x : v) x *= sv;
        const McEstimate est = empirical_g(u, v, n_samples, rng);
        const double gate = sigma_gate * std::max(est.std_error, 1e-12);
        const double err = std::abs(est.mean - g_closed(u, v));
        ++res.n_checked;
        res.worst = std::max(res.worst, err / gate * sigma_gate);  // in sigmas
        if (err > gate) ++res.n_failed;
    }
    res.pass = res.n_failed == 0;
    return res;
}

SuiteResult certify_loss_mc(const std::vector<int>& dims, const std::vector<int>& ks,
                            int n_instances, long long n_samples, double sigma_gate,
                            std::uint64_t seed) {
    SuiteResult res;
    res.name = "loss-vs-monte-carlo";
    for (int i = 0; i < n_instances; ++i) {
        Rng rng(Rng::child_seed(seed, static_cast<std::uint64_t>(i)));
        const int d = dims[static_cast<std::size_t>(i) % dims.size()];
        const int k = ks[static_cast<std::size_t>(i) % ks.size()];
        const ProblemSpec spec = ProblemSpec::random(d, k, rng.raw());
        Vec w = sample_unit_sphere(d, rng);
        const double sw = 0.3 + 1.7 * rng.uniform();
        for (auto& x : w) x *= sw;
        const McEstimate est = empirical_loss(w, spec, n_samples, rng);
        const double gate = sigma_gate * std::max(est.std_error, 1e-12);
        const double err = std::abs(est.mean - loss(w, spec));
        ++res.n_checked;
        res.worst = std::max(res.worst, err / gate * sigma_gate);
        if (err > gate) ++res.n_failed;
    }
    res.pass = res.n_failed == 0;
    return res;
}

}  // namespace rvsm
