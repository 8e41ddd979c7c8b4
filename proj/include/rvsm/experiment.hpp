#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rvsm/analysis.hpp"
#include "rvsm/certify.hpp"
#include "rvsm/optimize.hpp"

namespace rvsm {

enum class OptimizerKind { Rvsm, Admm, Gd };

std::string to_string(OptimizerKind kind);

// One experiment, as read from a config file. Field defaults match the
// documented JSON schema; validation happens before anything runs.
struct ExperimentConfig {
    std::uint64_t seed = 0;

    // problem
    int d = 0;
    int k = 0;
    std::optional<Vec> w_star;
    std::optional<std::uint64_t> w_star_seed;
    bool normalize_w_star = true;

    // optimizer
    OptimizerKind optimizer = OptimizerKind::Rvsm;
    bool eta_auto = false;
    double eta = 0.0;
    double beta = 0.0;
    int max_iters = 1000;
    double stop_tol = 0.0;
    UpdateSource u_update_source = UpdateSource::PreviousW;

    // penalty
    PenaltyKind penalty_kind = PenaltyKind::L1;
    double lambda = 0.0;
    double tl1_a = 1.0;

    // init
    std::optional<Vec> init_vector;
    std::optional<std::uint64_t> init_seed;
    double init_scale = 1.0;

    // analysis
    bool analysis_preconditions = true;
    bool analysis_monotone = true;
    bool analysis_annulus = true;
    bool analysis_limit = true;
    double lipschitz_M = 0.5;

    // output
    std::string out_dir = ".";
    std::string trajectory_csv = "trajectory.csv";
    std::string precondition_json = "precondition.json";
    std::string limit_json = "limit.json";

    ProblemSpec make_problem() const;
    Penalty make_penalty() const;
    Init make_init() const;
    // Resolves eta (the auto rule is 1/(beta + L) with the coplanar L at
    // lipschitz_M) and returns the L used.
    double resolve_eta(const ProblemSpec& spec, double* L_out);
};

// Parses and validates a config JSON document; rejects unknown keys.
// Overrides are dotted key=value pairs applied before validation.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::string& path,
                             const std::vector<std::string>& overrides = {});

struct RunResult {
    Trajectory traj;
    bool converged = false;
    bool precondition_applicable = false;
    PreconditionReport precondition;
    double L_measured = 0.0;
    MonotoneReport monotone_lagrangian;
    MonotoneReport monotone_angle;
    std::optional<AnnulusReport> annulus;
    std::string annulus_error;
    std::optional<LimitReport> limit;
};

// Runs one experiment and its enabled analysis passes (no file output).
RunResult execute_run(ExperimentConfig cfg);

// 17-significant-digit float formatting used by every CSV/JSON writer so
// reruns are byte-identical.
std::string format_double(double x);

std::string trajectory_csv_text(const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// CLI entry points; return process exit codes (0 ok, 2 not converged,
// 1 error).
int cmd_run(const std::string& config_path, const std::vector<std::string>& overrides);
int cmd_sweep(const std::string& config_path, const std::string& grid_path);
int cmd_certify(bool quick);

}  // namespace rvsm
