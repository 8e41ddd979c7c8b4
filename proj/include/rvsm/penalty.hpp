#pragma once

#include <string>

#include "rvsm/vec.hpp"

namespace rvsm {

enum class PenaltyKind { L1, L0, TL1 };

std::string to_string(PenaltyKind kind);
PenaltyKind penalty_kind_from_string(const std::string& s);

// Sparsity penalty: weight lambda, and for TL1 the shape parameter a
// ((a+1)|x| / (a+|x|), interpolating l0 and l1). lambda = 0 is admitted
// and makes every prox the identity.
struct Penalty {
    PenaltyKind kind;
    double lambda;
    double a;

    Penalty(PenaltyKind kind_, double lambda_, double a_ = 1.0);
};

double penalty_value_scalar(const Penalty& p, double u);
double penalty_value(const Penalty& p, const Vec& u);

// Exact scalar minimizer of lambda P(u) + (beta/2)(w - u)^2.
//   L1:  soft threshold at lambda/beta.
//   L0:  hard threshold at sqrt(2 lambda / beta); exact ties go to 0.
//   TL1: closed-form cubic root candidate compared explicitly against 0
//        (the objective can have two local minima); ties go to 0.
double prox_scalar(const Penalty& p, double w, double beta);

// Component-wise prox. Throws InvalidBeta if beta <= 0.
Vec prox(const Penalty& p, const Vec& w, double beta);

// Brute-force argmin of lambda P(u) + (beta/2)(w - u)^2 over the grid
// [lo, hi] with the given step, followed by a ternary-search refinement
// of the bracketing interval. Ties resolve toward smaller |u|.
double prox_grid_oracle(const Penalty& p, double w_scalar, double beta, double lo, double hi,
                        double step);

}  // namespace rvsm
