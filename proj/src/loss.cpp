#include "rvsm/loss.hpp"

#include <cmath>
#include <string>

namespace rvsm {

ProblemSpec::ProblemSpec(Vec w_star, int k, bool normalize) : w_star_(std::move(w_star)), k_(k) {
    if (k_ < 1) throw InvalidRange("ProblemSpec: k must be >= 1");
    if (w_star_.empty()) throw ShapeMismatch("ProblemSpec: w_star must have dimension >= 1");
    ensure_finite(w_star_, "ProblemSpec w_star");
    const double n = norm(w_star_);
    if (n < kNormEps) throw DegenerateVector("ProblemSpec: ||w_star|| must be positive");
    if (normalize) {
        for (auto& x : w_star_) x /= n;
        w_star_norm_ = 1.0;
    } else {
        w_star_norm_ = n;
    }
}

ProblemSpec ProblemSpec::random(int d, int k, std::uint64_t seed) {
    Rng rng(seed);
    return ProblemSpec(sample_unit_sphere(d, rng), k);
}

double g_closed(const Vec& u, const Vec& v) {
    const double t = angle(u, v);  // validates both norms
    return norm(u) * norm(v) * (std::sin(t) + (M_PI - t) * std::cos(t)) / (2.0 * M_PI);
}

double loss(const Vec& w, const ProblemSpec& spec) {
    const double nw = norm(w);
    if (nw < kNormEps) throw DegenerateVector("loss: ||w|| below threshold");
    const double r = spec.w_star_norm();
    const double k = static_cast<double>(spec.k());
    const double g = g_closed(w, spec.w_star());
    return (spec.a() * (nw * nw + r * r) - 2.0 * k * g - 2.0 * spec.b() * nw * r) / (k * k);
}

Vec grad(const Vec& w, const ProblemSpec& spec) {
    const double nw = norm(w);
    if (nw < kNormEps) throw DegenerateVector("grad: ||w|| below threshold");
    const double r = spec.w_star_norm();
    const double k = static_cast<double>(spec.k());
    const double t = angle(w, spec.w_star());
    const double ratio = r / nw;
    const double cw = k + (k * k - k) / M_PI - (k / M_PI) * ratio * std::sin(t) -
                      ((k * k - k) / M_PI) * ratio;
    const double cs = (k / M_PI) * (M_PI - t);
    Vec out(w.size());
    const Vec& ws = spec.w_star();
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = (cw * w[i] - cs * ws[i]) / (k * k);
    ensure_finite(out, "grad");
    return out;
}

Vec finite_diff_grad(const Vec& w, const ProblemSpec& spec, double h) {
    if (h <= 0.0) throw InvalidRange("finite_diff_grad: h must be positive");
    if (norm(w) <= 2.0 * h) throw DegenerateVector("finite_diff_grad: ||w|| must exceed 2h");
    Vec out(w.size());
    Vec probe = w;
    for (std::size_t i = 0; i < w.size(); ++i) {
        probe[i] = w[i] + h;
        const double fp = loss(probe, spec);
        probe[i] = w[i] - h;
        const double fm = loss(probe, spec);
        probe[i] = w[i];
        out[i] = (fp - fm) / (2.0 * h);
    }
    return out;
}

std::vector<std::pair<Vec, CriticalKind>> critical_points(const ProblemSpec& spec) {
    std::vector<std::pair<Vec, CriticalKind>> pts;
    if (spec.k() > 1) {
        const double k = static_cast<double>(spec.k());
        const double c = (k * k - k) / (k * k + (M_PI - 1.0) * k);
        pts.emplace_back(Vec(spec.w_star().size(), 0.0), CriticalKind::LocalMax);
        pts.emplace_back(spec.w_star(), CriticalKind::GlobalMin);
        pts.emplace_back(scaled(spec.w_star(), -c), CriticalKind::Saddle);
    } else {
        pts.emplace_back(spec.w_star(), CriticalKind::GlobalMin);
    }
    return pts;
}

double lipschitz_bound(double M, const ProblemSpec& spec) {
    if (M <= 0.0) throw InvalidRadius("lipschitz_bound: M must be positive");
    if (M > spec.w_star_norm()) {
        throw InvalidRadius("lipschitz_bound: M must not exceed ||w_star||");
    }
    return 1.0 + 3.0 * spec.w_star_norm() / M;
}

double measure_lipschitz(const ProblemSpec& spec, double M, int n_pairs, Rng& rng) {
    if (M <= 0.0) throw InvalidRadius("measure_lipschitz: M must be positive");
    const double r = spec.w_star_norm();
    // Orthonormal basis of a random plane containing w*. In one dimension
    // only the line itself is available.
    const Vec e1 = scaled(spec.w_star(), 1.0 / r);
    Vec e2(e1.size(), 0.0);
    if (spec.dim() > 1) {
        for (;;) {
            Vec g = sample_unit_sphere(spec.dim(), rng);
            e2 = axpy(g, -dot(g, e1), e1);
            const double n2 = norm(e2);
            if (n2 > 1e-6) {
                for (auto& x : e2) x /= n2;
                break;
            }
        }
    }
    auto sample_point = [&](void) {
        const double rho = M + (2.0 * r - M) * rng.uniform();
        const double phi = spec.dim() > 1 ? 2.0 * M_PI * rng.uniform() : 0.0;
        return axpy(scaled(e1, rho * std::cos(phi)), rho * std::sin(phi), e2);
    };
    double worst = 0.0;
    for (int i = 0; i < n_pairs; ++i) {
        const Vec w1 = sample_point();
        const Vec w2 = sample_point();
        const double d = dist(w1, w2);
        if (d < 1e-9) continue;
        const double ratio = dist(grad(w1, spec), grad(w2, spec)) / d;
        worst = std::max(worst, ratio);
    }
    return worst;
}

}  // namespace rvsm
