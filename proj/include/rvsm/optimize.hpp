#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "rvsm/loss.hpp"
#include "rvsm/penalty.hpp"
#include "rvsm/vec.hpp"

namespace rvsm {

// Which iterate feeds the u-update inside one RVSM step. The algorithm's
// pseudo-code thresholds the iterate the step started from (PreviousW);
// CurrentW thresholds the freshly updated iterate instead, which is the
// pairing the descent lemma manipulates.
enum class UpdateSource { PreviousW, CurrentW };

enum class StopReason { StepTolerance, MaxIters };

// Initial iterate: an explicit vector, or a seeded point scale * unit sphere.
class Init {
  public:
    static Init explicit_vector(Vec w0);
    static Init random_sphere(std::uint64_t seed, double scale = 1.0);

    Vec make(int d) const;
    bool is_explicit() const { return w0_.has_value(); }
    std::uint64_t seed() const { return seed_; }
    double scale() const { return scale_; }
    void set_seed(std::uint64_t s) { seed_ = s; }

  private:
    Init() = default;
    std::optional<Vec> w0_;
    std::uint64_t seed_ = 0;
    double scale_ = 1.0;
};

struct RvsmConfig {
    double eta;
    double beta;
    Penalty penalty;
    int max_iters;
    double stop_tol;
    Init init;
    UpdateSource u_update_source = UpdateSource::PreviousW;

    void validate() const;
};

struct AdmmConfig {
    double eta;
    double beta;  // the multiplier weight rho
    Penalty penalty;
    int max_iters;
    double stop_tol;
    Init init;

    void validate() const;
};

struct TrajectoryRecord {
    int t = 0;
    Vec w;
    Vec u;
    double f = 0.0;
    double penalty = 0.0;
    double lagrangian = 0.0;
    double theta = 0.0;      // angle(w, w*)
    double norm_w = 0.0;
    double gap_wu = 0.0;     // ||w - u||
    double grad_norm = 0.0;  // ||grad_w of the Lagrangian||
    int nnz_u = 0;
    double z_norm = 0.0;     // ADMM multiplier norm; 0 for RVSM/GD
};

struct Trajectory {
    std::vector<TrajectoryRecord> records;
    StopReason reason = StopReason::MaxIters;
    double final_step_norm = 0.0;

    const TrajectoryRecord& back() const { return records.back(); }
    // Number of steps taken (records.size() - 1).
    int iterations() const { return static_cast<int>(records.size()) - 1; }
};

// f(w) + lambda P(u) + (beta/2) ||w - u||^2.
double lagrangian(const Vec& w, const Vec& u, const Penalty& p, double beta,
                  const ProblemSpec& spec);

// One RVSM update: w' = w - eta grad(w) - eta beta (w - u), then
// u' = prox(w) or prox(w') per cfg.u_update_source.
std::pair<Vec, Vec> rvsm_step(const Vec& w, const Vec& u, const RvsmConfig& cfg,
                              const ProblemSpec& spec);

// Full RVSM loop: u0 = prox(w0), iterate until the step norm falls to
// stop_tol or the budget runs out. Every iteration is recorded.
Trajectory run_rvsm(const RvsmConfig& cfg, const ProblemSpec& spec);

// ADMM baseline with the practical gradient-step w-update:
//   w' = w - eta (grad(w) + z + beta (w - u))
//   u' = prox(w' + z/beta)
//   z' = z + beta (w' - u')
// The recorded Lagrangian includes the multiplier inner product.
Trajectory run_admm(const AdmmConfig& cfg, const ProblemSpec& spec);

// Plain gradient descent on the population loss (u is recorded as w).
Trajectory run_gd(double eta, const Vec& init, const ProblemSpec& spec, int max_iters,
                  double stop_tol);

// Step size 1/(beta + L) from the convergence theorem; also satisfies the
// weaker descent-lemma bound 2/(beta + L).
double auto_step_size(double beta, double L);

}  // namespace rvsm
