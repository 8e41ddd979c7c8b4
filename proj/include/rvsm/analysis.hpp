#pragma once

#include <optional>
#include <vector>

#include "rvsm/optimize.hpp"

namespace rvsm {

// Theorem hypotheses evaluated at the initialization. delta is defined as
// pi - angle(w0, w*): the largest delta for which the angle hypothesis
// holds, which also makes the beta bound and the target angle sharpest.
struct PreconditionReport {
    bool eta_ok = false;
    bool angle_ok = false;
    bool k_ok = false;
    bool beta_ok = false;
    bool lambda_ratio_ok = false;

    double delta = 0.0;
    double L_used = 0.0;
    double theta0 = 0.0;
    double eta = 0.0;
    double eta_bound = 0.0;           // 1/(beta+L)
    double eta_descent_bound = 0.0;   // 2/(beta+L), the descent-lemma constant
    bool eta_within_descent_bound = false;
    double beta = 0.0;
    double beta_bound = 0.0;          // delta sin(delta) / (k pi)
    double lambda_ratio = 0.0;        // lambda / beta
    double lambda_ratio_bound = 0.0;  // 1/sqrt(d)

    bool all_ok() const { return eta_ok && angle_ok && k_ok && beta_ok && lambda_ratio_ok; }
};

PreconditionReport check_preconditions(const RvsmConfig& cfg, const ProblemSpec& spec,
                                       const Vec& w0, double L);

enum class TrajField { Lagrangian, Angle };

struct MonotoneReport {
    bool ok = true;
    std::optional<int> first_violation;  // index of the first record that rose
    double max_increase = 0.0;
};

// Non-increasing scan with 1e-12 absolute rounding slack.
MonotoneReport check_monotone(const Trajectory& traj, TrajField field);

struct AnnulusReport {
    int T_measured = 0;
    double M_measured = 0.0;
};

// Smallest T whose tail sup of | ||w_t|| - ||w*|| | attains the minimum
// over all tails; that sup is M_measured. Throws AnnulusViolation when
// even the best tail reaches 0 or 2||w*|| (M_measured >= ||w*||).
AnnulusReport check_annulus(const Trajectory& traj, const ProblemSpec& spec);

struct LimitReport {
    Vec w_bar;
    Vec u_bar;
    double theta_bar = 0.0;
    double C = 0.0;
    double residual = 0.0;
    double grad_norm_at_limit = 0.0;  // ||grad f(w) + beta (w - u)||
    double error_to_truth = 0.0;      // ||w_bar - w*||
};

// Fits the scalar C in
//   w* = (k pi / (pi - theta)) beta (w - prox(w)) + C w
// by least squares at the trajectory's limit and reports the residual.
// Requires termination by step tolerance; throws NotConverged otherwise.
LimitReport limit_residual(const Trajectory& traj, const ProblemSpec& spec, const Penalty& p,
                           double beta);

struct ScalingReport {
    double slope = 0.0;
    std::vector<double> betas;
    std::vector<double> errors;  // ||w_bar - w*|| per beta
};

// Runs RVSM once per beta (lambda scaled to hold lambda/beta fixed) and
// regresses log error on log beta. Needs at least two betas.
ScalingReport beta_error_scaling(const RvsmConfig& base_cfg, const ProblemSpec& spec,
                                 const std::vector<double>& betas);

struct RateReport {
    double c_fit = 0.0;
    bool ok = false;
    std::vector<int> prefixes;
    std::vector<double> prefix_min;  // min grad norm within each prefix
};

// Checks the c/sqrt(T) envelope for min_{t<=T} ||grad_w L|| at prefixes
// T in {100, 1000, 10000} (those the trajectory covers). The constant is
// calibrated at the earliest prefix; later prefixes must hold within 10%.
RateReport grad_norm_rate(const Trajectory& traj);

}  // namespace rvsm
