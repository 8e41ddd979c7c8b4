#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rvsm/penalty.hpp"
#include "rvsm/loss.hpp"

namespace rvsm {

struct SuiteResult {
    std::string name;
    bool pass = false;
    int n_checked = 0;
    int n_failed = 0;
    double worst = 0.0;  // worst observed discrepancy, in the suite's own units
    std::string detail;
};

using ScalarProx = std::function<double(const Penalty&, double w, double beta)>;

// prox vs the grid oracle on random scalars plus threshold-boundary
// inputs; pass iff every |prox - oracle| <= tol. The prox under test is
// injectable so a deliberately broken operator can be shown to fail.
SuiteResult certify_prox_impl(const ScalarProx& fn, PenaltyKind kind, int n_scalars,
                              std::uint64_t seed, double tol);
SuiteResult certify_prox(PenaltyKind kind, int n_scalars, std::uint64_t seed, double tol);

// grad vs central finite differences at random points for each (d, k);
// pass iff relative error <= rel_tol everywhere.
SuiteResult certify_grad(const std::vector<int>& dims, const std::vector<int>& ks,
                         int points_per_cell, double h, double rel_tol, std::uint64_t seed);

// g_closed vs Monte-Carlo on random pairs; gate is sigma_gate standard
// errors, so it adapts to the sample count.
SuiteResult certify_g_closed(const std::vector<int>& dims, int n_instances, long long n_samples,
                             double sigma_gate, std::uint64_t seed);

// loss vs Monte-Carlo on random (w, spec) draws.
SuiteResult certify_loss_mc(const std::vector<int>& dims, const std::vector<int>& ks,
                            int n_instances, long long n_samples, double sigma_gate,
                            std::uint64_t seed);

}  // namespace rvsm
