#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "rvsm/vec.hpp"

namespace rvsm {

// Ground truth and patch count of the no-overlap network. The loss
// constants a = b + k/2 and b = (k^2 - k) / (2 pi) are derived from k on
// demand so they can never go stale.
class ProblemSpec {
  public:
    // Keeps w_star as given unless normalize is set (the default), in which
    // case it is rescaled to unit norm.
    ProblemSpec(Vec w_star, int k, bool normalize = true);

    // w_star drawn uniformly from the unit sphere.
    static ProblemSpec random(int d, int k, std::uint64_t seed);

    const Vec& w_star() const { return w_star_; }
    int k() const { return k_; }
    int dim() const { return static_cast<int>(w_star_.size()); }
    double w_star_norm() const { return w_star_norm_; }

    double b() const {
        const double kk = static_cast<double>(k_);
        return (kk * kk - kk) / (2.0 * M_PI);
    }
    double a() const { return b() + 0.5 * static_cast<double>(k_); }

  private:
    Vec w_star_;
    int k_;
    double w_star_norm_;
};

// Closed-form correlation of two rectified Gaussian projections:
// (1/2pi) ||u|| ||v|| (sin t + (pi - t) cos t), t = angle(u, v).
double g_closed(const Vec& u, const Vec& v);

// Population loss of the no-overlap network,
// (1/k^2) [a (||w||^2 + ||w*||^2) - 2k g(w, w*) - 2b ||w|| ||w*||].
double loss(const Vec& w, const ProblemSpec& spec);

// Exact gradient of the loss (defined for w != 0):
// (1/k^2) [(k + (k^2-k)/pi - (k/pi)(||w*||/||w||) sin t
//           - ((k^2-k)/pi)(||w*||/||w||)) w - (k/pi)(pi - t) w*].
Vec grad(const Vec& w, const ProblemSpec& spec);

// Central-difference gradient of the loss, step h per coordinate.
// Requires ||w|| > 2h so no probe point degenerates.
Vec finite_diff_grad(const Vec& w, const ProblemSpec& spec, double h);

enum class CriticalKind { LocalMax, GlobalMin, Saddle };

// All critical points of the loss: for k > 1 the local max at 0, the
// global min at w*, and the degenerate saddle at
// -((k^2-k)/(k^2+(pi-1)k)) w*; for k = 1 only w*.
std::vector<std::pair<Vec, CriticalKind>> critical_points(const ProblemSpec& spec);

// Lipschitz constant 1 + 3||w*||/M valid for coplanar points with norms
// in [M, ...]; requires 0 < M <= ||w*||.
double lipschitz_bound(double M, const ProblemSpec& spec);

// Measured sup of ||grad(w1)-grad(w2)|| / ||w1-w2|| over random pairs
// coplanar with w*, norms in [M, 2||w*||]. A sampling estimate of the
// constant the coplanar bound caps.
double measure_lipschitz(const ProblemSpec& spec, double M, int n_pairs, Rng& rng);

}  // namespace rvsm
