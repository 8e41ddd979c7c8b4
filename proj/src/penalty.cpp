#include "rvsm/penalty.hpp"

#include <algorithm>
#include <cmath>

namespace rvsm {

std::string to_string(PenaltyKind kind) {
    switch (kind) {
        case PenaltyKind::L1: return "l1";
        case PenaltyKind::L0: return "l0";
        case PenaltyKind::TL1: return "tl1";
    }
    return "?";
}

PenaltyKind penalty_kind_from_string(const std::string& s) {
    if (s == "l1") return PenaltyKind::L1;
    if (s == "l0") return PenaltyKind::L0;
    if (s == "tl1") return PenaltyKind::TL1;
    throw ConfigError("unknown penalty kind '" + s + "' (expected l1, l0, or tl1)");
}

Penalty::Penalty(PenaltyKind kind_, double lambda_, double a_) : kind(kind_), lambda(lambda_), a(a_) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw InvalidRange("Penalty: lambda must be finite and >= 0");
    }
    if (!(a > 0.0) || !std::isfinite(a)) throw InvalidRange("Penalty: a must be finite and > 0");
}

double penalty_value_scalar(const Penalty& p, double u) {
    switch (p.kind) {
        case PenaltyKind::L1: return p.lambda * std::abs(u);
        case PenaltyKind::L0: return u != 0.0 ? p.lambda : 0.0;
        case PenaltyKind::TL1: return p.lambda * (p.a + 1.0) * std::abs(u) / (p.a + std::abs(u));
    }
    return 0.0;
}

double penalty_value(const Penalty& p, const Vec& u) {
    double s = 0.0;
    for (double x : u) s += penalty_value_scalar(p, x);
    return s;
}

namespace {

double soft_threshold(double w, double t) {
    const double m = std::abs(w) - t;
    return m > 0.0 ? std::copysign(m, w) : 0.0;
}

// Largest real root of the stationarity cubic of the TL1 scalar objective
// h(u) = t (a+1) u / (a+u) + (u-x)^2 / 2 on u > 0, for x > 0:
//   (a+u)^2 (u-x) + t a (a+1) = 0.
// Substituting v = u+a and depressing gives three real roots exactly when
// arg = 1 - 27 t a (a+1) / (2 (a+x)^3) >= -1; the largest is
//   u = (2/3)(a+x) cos(phi/3) - 2a/3 + x/3,  phi = arccos(arg).
// When arg < -1 the objective has no interior critical point and the
// minimizer is 0.
bool tl1_interior_candidate(double x, double t, double a, double* out) {
    const double c = a + x;
    const double arg = 1.0 - 27.0 * t * a * (a + 1.0) / (2.0 * c * c * c);
    if (arg < -1.0) return false;
    const double phi = std::acos(std::min(arg, 1.0));
    const double u = (2.0 / 3.0) * c * std::cos(phi / 3.0) - 2.0 * a / 3.0 + x / 3.0;
    if (!(u > 0.0)) return false;
    *out = std::min(u, x);  // shrinkage: the minimizer never overshoots x
    return true;
}

double tl1_objective(double u, double x, double t, double a) {
    return t * (a + 1.0) * u / (a + u) + 0.5 * (u - x) * (u - x);
}

}  // namespace

double prox_scalar(const Penalty& p, double w, double beta) {
    if (beta <= 0.0 || !std::isfinite(beta)) throw InvalidBeta("prox: beta must be positive");
    if (p.lambda == 0.0) return w;
    switch (p.kind) {
        case PenaltyKind::L1:
            return soft_threshold(w, p.lambda / beta);
        case PenaltyKind::L0: {
            // Keeping w costs lambda, zeroing costs beta w^2 / 2; the
            // crossover is |w| = sqrt(2 lambda / beta), tie to 0.
            const double thr = std::sqrt(2.0 * p.lambda / beta);
            return std::abs(w) > thr ? w : 0.0;
        }
        case PenaltyKind::TL1: {
            if (w == 0.0) return 0.0;
            const double x = std::abs(w);
            const double t = p.lambda / beta;
            double u = 0.0;
            if (!tl1_interior_candidate(x, t, p.a, &u)) return 0.0;
            // Two local minima are possible; compare them outright.
            const double at_zero = 0.5 * x * x;
            return tl1_objective(u, x, t, p.a) < at_zero ? std::copysign(u, w) : 0.0;
        }
    }
    return w;
}

Vec prox(const Penalty& p, const Vec& w, double beta) {
    if (beta <= 0.0 || !std::isfinite(beta)) throw InvalidBeta("prox: beta must be positive");
    Vec out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = prox_scalar(p, w[i], beta);
    return out;
}

double prox_grid_oracle(const Penalty& p, double w_scalar, double beta, double lo, double hi,
                        double step) {
    if (beta <= 0.0 || !std::isfinite(beta)) throw InvalidBeta("prox_grid_oracle: beta must be positive");
    if (!(lo < hi)) throw InvalidRange("prox_grid_oracle: lo must be below hi");
    if (!(step > 0.0)) throw InvalidRange("prox_grid_oracle: step must be positive");

    auto objective = [&](double u) {
        return penalty_value_scalar(p, u) + 0.5 * beta * (w_scalar - u) * (w_scalar - u);
    };
    double best_u = lo;
    double best_f = objective(lo);
    // Objective values inside rounding noise of each other count as a tie,
    // which resolves toward smaller |u|; otherwise exact threshold inputs
    // would be decided by 1-ulp accidents.
    const double tie_eps = 1e-12;
    auto consider = [&](double u) {
        const double f = objective(u);
        if (f < best_f - tie_eps) {
            best_f = f;
            best_u = u;
        } else if (f <= best_f + tie_eps && std::abs(u) < std::abs(best_u)) {
            best_f = std::min(best_f, f);
            best_u = u;
        }
    };
    const long n = static_cast<long>(std::floor((hi - lo) / step));
    for (long i = 1; i <= n; ++i) consider(lo + static_cast<double>(i) * step);
    consider(hi);
    // Candidates the grid can only straddle: the kink at 0 and the
    // identity point (L0 keeps u = w exactly).
    if (lo <= 0.0 && 0.0 <= hi) consider(0.0);
    if (lo <= w_scalar && w_scalar <= hi) consider(w_scalar);

    // One ternary-search refinement pass on the bracketing interval.
    double a = std::max(lo, best_u - step);
    double b = std::min(hi, best_u + step);
    for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (objective(m1) <= objective(m2)) {
            b = m2;
        } else {
            a = m1;
        }
    }
    consider(0.5 * (a + b));
    return best_u;
}

}  // namespace rvsm
