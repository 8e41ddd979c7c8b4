#include "rvsm/empirical.hpp"

#include <cmath>
#include <string>

namespace rvsm {

double net_output(const Vec& x, const Vec& w, int k) {
    if (k < 1) throw InvalidRange("net_output: k must be >= 1");
    const std::size_t d = w.size();
    if (d == 0 || x.size() != d * static_cast<std::size_t>(k)) {
        throw ShapeMismatch("net_output: |x| = " + std::to_string(x.size()) + " but k*d = " +
                            std::to_string(d * static_cast<std::size_t>(k)));
    }
    double s = 0.0;
    for (int patch = 0; patch < k; ++patch) {
        double z = 0.0;
        const std::size_t off = static_cast<std::size_t>(patch) * d;
        for (std::size_t i = 0; i < d; ++i) z += w[i] * x[off + i];
        if (z > 0.0) s += z;
    }
    return s / static_cast<double>(k);
}

McEstimate empirical_g(const Vec& u, const Vec& v, long long n, Rng& rng) {
    if (u.size() != v.size()) {
        throw ShapeMismatch("empirical_g: dimensions " + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()));
    }
    if (n < 2) throw InvalidRange("empirical_g: n must be >= 2");
    RunningStat stat;
    const std::size_t d = u.size();
    for (long long s = 0; s < n; ++s) {
        double zu = 0.0, zv = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double x = rng.gaussian();
            zu += u[i] * x;
            zv += v[i] * x;
        }
        stat.push(std::max(zu, 0.0) * std::max(zv, 0.0));
    }
    return McEstimate{stat.mean(), stat.std_error(), stat.count(), rng.seed()};
}

McEstimate empirical_loss(const Vec& w, const ProblemSpec& spec, long long n, Rng& rng) {
    if (w.size() != spec.w_star().size()) {
        throw ShapeMismatch("empirical_loss: dim(w) = " + std::to_string(w.size()) +
                            " but spec dimension is " + std::to_string(spec.w_star().size()));
    }
    if (n < 2) throw InvalidRange("empirical_loss: n must be >= 2");
    const int k = spec.k();
    const std::size_t d = w.size();
    const Vec& ws = spec.w_star();
    RunningStat stat;
    for (long long s = 0; s < n; ++s) {
        double out_w = 0.0, out_star = 0.0;
        for (int patch = 0; patch < k; ++patch) {
            double zw = 0.0, zs = 0.0;
            for (std::size_t i = 0; i < d; ++i) {
                const double x = rng.gaussian();
                zw += w[i] * x;
                zs += ws[i] * x;
            }
            if (zw > 0.0) out_w += zw;
            if (zs > 0.0) out_star += zs;
        }
        const double diff = (out_w - out_star) / static_cast<double>(k);
        stat.push(diff * diff);
    }
    return McEstimate{stat.mean(), stat.std_error(), stat.count(), rng.seed()};
}

}  // namespace rvsm
