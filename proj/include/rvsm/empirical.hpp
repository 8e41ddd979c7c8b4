#pragma once

#include <cstdint>

#include "rvsm/loss.hpp"
#include "rvsm/vec.hpp"

namespace rvsm {

// Monte-Carlo estimate with its standard error (sample std / sqrt(n)).
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long long n_samples = 0;
    std::uint64_t seed = 0;
};

// Output of the no-overlap network: (1/k) sum_i relu(w . x_i) over the k
// contiguous length-d patches of x. Requires |x| = k |w|.
double net_output(const Vec& x, const Vec& w, int k);

// Sampled E[relu(u.x) relu(v.x)] over standard normal x; the sampled
// counterpart of g_closed.
McEstimate empirical_g(const Vec& u, const Vec& v, long long n, Rng& rng);

// Sampled E[(net(x; w) - net(x; w*))^2] over standard normal inputs of
// length k d; the sampled counterpart of loss.
McEstimate empirical_loss(const Vec& w, const ProblemSpec& spec, long long n, Rng& rng);

// Single-pass mean/variance accumulator (Welford), so large n never
// stores samples.
class RunningStat {
  public:
    void push(double x) {
        ++n_;
        const double d1 = x - mean_;
        mean_ += d1 / static_cast<double>(n_);
        m2_ += d1 * (x - mean_);
    }
    long long count() const { return n_; }
    double mean() const { return mean_; }
    double sample_variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }
    double std_error() const {
        return n_ > 0 ? std::sqrt(sample_variance() / static_cast<double>(n_)) : 0.0;
    }

  private:
    long long n_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

}  // namespace rvsm
