#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rvsm/empirical.hpp"

using namespace rvsm;

TEST_CASE("net output on tiny cases") {
    CHECK(net_output({3, 5}, {1, 0}, 1) == doctest::Approx(3.0));
    CHECK(net_output({-2, 4}, {1}, 2) == doctest::Approx(2.0));
    CHECK_THROWS_AS(net_output({1, 2, 3}, {1, 0}, 2), ShapeMismatch);
}

TEST_CASE("net output is positively homogeneous in w") {
    Rng rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec w = sample_gaussian(3, rng);
        const Vec x = sample_gaussian(6, rng);
        const double c = 0.1 + 4.0 * rng.uniform();
        CHECK(net_output(x, scaled(w, c), 2) ==
              doctest::Approx(c * net_output(x, w, 2)).epsilon(1e-12));
    }
}

TEST_CASE("empirical g at analytic anchor points") {
    Rng rng(100);
    const McEstimate same = empirical_g({1, 0, 0}, {1, 0, 0}, 1000000, rng);
    CHECK(std::abs(same.mean - 0.5) <= 3.0 * same.std_error);

    Rng rng2(101);
    const McEstimate orth = empirical_g({1, 0, 0}, {0, 1, 0}, 1000000, rng2);
    CHECK(std::abs(orth.mean - 1.0 / (2.0 * M_PI)) <= 3.0 * orth.std_error);
}

TEST_CASE("empirical g certifies the closed form") {
    Rng seeder(200);
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(Rng::child_seed(200, static_cast<std::uint64_t>(trial)));
        Vec u = sample_gaussian(5, rng);
        Vec v = sample_gaussian(5, rng);
        const McEstimate est = empirical_g(u, v, 100000, rng);
        CHECK(std::abs(est.mean - g_closed(u, v)) <= 4.0 * est.std_error);
    }
}

TEST_CASE("empirical loss is exactly zero at the truth") {
    const ProblemSpec spec = ProblemSpec::random(4, 3, 50);
    Rng rng(51);
    const McEstimate est = empirical_loss(spec.w_star(), spec, 1000, rng);
    CHECK(est.mean == 0.0);
    CHECK(est.std_error == 0.0);
}

TEST_CASE("empirical loss at the antipode approaches 1/k") {
    const ProblemSpec spec = ProblemSpec::random(3, 2, 52);
    Rng rng(53);
    const McEstimate est = empirical_loss(scaled(spec.w_star(), -1.0), spec, 1000000, rng);
    CHECK(std::abs(est.mean - 0.5) <= 3.0 * est.std_error);
}

TEST_CASE("empirical loss certifies the closed form") {
    const ProblemSpec spec = ProblemSpec::random(4, 3, 60);
    for (int trial = 0; trial < 20; ++trial) {
        Rng rng(Rng::child_seed(61, static_cast<std::uint64_t>(trial)));
        Vec w = sample_unit_sphere(4, rng);
        const double s = 0.4 + 1.6 * rng.uniform();
        for (auto& x : w) x *= s;
        const McEstimate est = empirical_loss(w, spec, 100000, rng);
        CHECK(std::abs(est.mean - loss(w, spec)) <= 4.0 * est.std_error);
    }
}

TEST_CASE("standard error shrinks like 1/sqrt(n)") {
    const ProblemSpec spec = ProblemSpec::random(4, 2, 70);
    Rng rng_a(71), rng_b(72);
    Vec w = sample_unit_sphere(4, rng_a);
    const McEstimate small = empirical_loss(w, spec, 50000, rng_a);
    const McEstimate big = empirical_loss(w, spec, 200000, rng_b);
    CHECK(big.std_error == doctest::Approx(small.std_error / 2.0).epsilon(0.2));
}

TEST_CASE("running stat matches two-pass moments") {
    RunningStat st;
    const Vec xs{1.0, 2.0, 3.0, 4.0, 10.0};
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= (xs.size() - 1);
    for (double x : xs) st.push(x);
    CHECK(st.mean() == doctest::Approx(mean).epsilon(1e-14));
    CHECK(st.sample_variance() == doctest::Approx(var).epsilon(1e-14));
    CHECK(st.std_error() == doctest::Approx(std::sqrt(var / xs.size())).epsilon(1e-14));
}
