#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rvsm/errors.hpp"

namespace rvsm {

using Vec = std::vector<double>;

// Norms below this are treated as degenerate: the angle (and the loss
// gradient) is undefined at the origin.
inline constexpr double kNormEps = 1e-12;

double dot(const Vec& u, const Vec& v);
double norm(const Vec& v);
// ||u - v||
double dist(const Vec& u, const Vec& v);
// u + c * v
Vec axpy(const Vec& u, double c, const Vec& v);
Vec scaled(const Vec& v, double c);
int nnz(const Vec& v);
bool all_finite(const Vec& v);
// Throws NonFinite (iteration -1) if any entry is NaN/Inf.
void ensure_finite(const Vec& v, const char* what);

// Angle between u and v in [0, pi]. The cosine is clamped into [-1, 1]
// before acos so rounding cannot produce NaN at 0 or pi.
// Throws DegenerateVector if either norm is below kNormEps.
double angle(const Vec& u, const Vec& v);

// Deterministic random generator. The stream is fixed by construction:
//   * engine: std::mt19937_64 seeded directly with the 64-bit seed
//     (the algorithm and its output sequence are pinned by the C++
//     standard, so identical seeds reproduce bit-exactly everywhere);
//   * uniform(): ((x >> 11) + 1) * 2^-53 where x is the raw 64-bit draw,
//     giving a double in (0, 1];
//   * gaussian(): Box-Muller, z0 = sqrt(-2 ln u1) cos(2 pi u2),
//     z1 = sqrt(-2 ln u1) sin(2 pi u2), with z1 cached for the next call.
// An Rng must not be shared across threads; parallel callers derive
// independent children via child_seed(seed, stream_index).
class Rng {
  public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t raw();   // next engine draw
    double uniform();      // in (0, 1]
    double gaussian();     // standard normal
    std::uint64_t seed() const { return seed_; }

    // Deterministic derivation of an independent child stream
    // (splitmix64 of the parent seed xor a spread stream index).
    static std::uint64_t child_seed(std::uint64_t seed, std::uint64_t stream);

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// n independent N(0,1) entries.
Vec sample_gaussian(int n, Rng& rng);
// Uniform point on the unit sphere in R^d (normalized Gaussian vector).
Vec sample_unit_sphere(int d, Rng& rng);

}  // namespace rvsm
