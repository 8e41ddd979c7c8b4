#include "rvsm/vec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rvsm {

double dot(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) {
        throw ShapeMismatch("dot: length " + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dist(const Vec& u, const Vec& v) {
    if (u.size() != v.size()) {
        throw ShapeMismatch("dist: length " + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()));
    }
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double d = u[i] - v[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vec axpy(const Vec& u, double c, const Vec& v) {
    if (u.size() != v.size()) {
        throw ShapeMismatch("axpy: length " + std::to_string(u.size()) + " vs " +
                            std::to_string(v.size()));
    }
    Vec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + c * v[i];
    return out;
}

Vec scaled(const Vec& v, double c) {
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = c * v[i];
    return out;
}

int nnz(const Vec& v) {
    return static_cast<int>(std::count_if(v.begin(), v.end(), [](double x) { return x != 0.0; }));
}

bool all_finite(const Vec& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

void ensure_finite(const Vec& v, const char* what) {
    if (!all_finite(v)) throw NonFinite(std::string(what) + ": non-finite entry", -1);
}

double angle(const Vec& u, const Vec& v) {
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu < kNormEps || nv < kNormEps) {
        throw DegenerateVector("angle: norm below " + std::to_string(kNormEps));
    }
    const double c = std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
    return std::acos(c);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

std::uint64_t Rng::raw() { return engine_(); }

double Rng::uniform() {
    // 53 mantissa bits; +1 keeps the value strictly positive for the log
    // in Box-Muller.
    return static_cast<double>((raw() >> 11) + 1) * 0x1.0p-53;
}

double Rng::gaussian() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
}

std::uint64_t Rng::child_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x51a1c9e3ull));
}

Vec sample_gaussian(int n, Rng& rng) {
    if (n < 1) throw InvalidRange("sample_gaussian: n must be >= 1");
    Vec v(static_cast<std::size_t>(n));
    for (auto& x : v) x = rng.gaussian();
    return v;
}

Vec sample_unit_sphere(int d, Rng& rng) {
    if (d < 1) throw InvalidRange("sample_unit_sphere: d must be >= 1");
    for (;;) {
        Vec g = sample_gaussian(d, rng);
        const double n = norm(g);
        if (n < kNormEps) continue;  // astronomically rare; redraw
        for (auto& x : g) x /= n;
        return g;
    }
}

}  // namespace rvsm
