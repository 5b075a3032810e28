#include <doctest.h>

#include <cmath>
#include <vector>

#include "rmt/errors.hpp"
#include "rmt/rng.hpp"
#include "rmt/stats.hpp"

using namespace rmt;

TEST_CASE("normal cdf at known points") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5));
    CHECK(normal_cdf(1.96) == doctest::Approx(0.9750021).epsilon(1e-6));
    CHECK(normal_cdf(-1.0) == doctest::Approx(0.1586553).epsilon(1e-6));
}

TEST_CASE("incomplete beta agrees with closed forms") {
    // I_x(1, b) = 1 - (1-x)^b ; I_x(a, 1) = x^a
    for (double x : {0.1, 0.3, 0.7, 0.95}) {
        CHECK(reg_incomplete_beta(1.0, 3.0, x) ==
              doctest::Approx(1.0 - std::pow(1.0 - x, 3.0)).epsilon(1e-12));
        CHECK(reg_incomplete_beta(2.5, 1.0, x) ==
              doctest::Approx(std::pow(x, 2.5)).epsilon(1e-12));
    }
    // symmetry I_x(a,b) = 1 - I_{1-x}(b,a)
    CHECK(reg_incomplete_beta(3.2, 4.7, 0.42) ==
          doctest::Approx(1.0 - reg_incomplete_beta(4.7, 3.2, 0.58)).epsilon(1e-10));
}

TEST_CASE("incomplete beta inverse round-trips") {
    for (double p : {0.01, 0.25, 0.5, 0.9, 0.999}) {
        const double x = reg_incomplete_beta_inv(4.0, 9.0, p);
        CHECK(reg_incomplete_beta(4.0, 9.0, x) == doctest::Approx(p).epsilon(1e-9));
    }
}

TEST_CASE("clopper-pearson interval basics") {
    const BinomialInterval ci = clopper_pearson(0, 100);
    CHECK(ci.low == 0.0);
    // P(X = 0) = (1-p)^100 = alpha/2 at the upper limit
    CHECK(ci.high == doctest::Approx(1.0 - std::pow(0.025, 0.01)).epsilon(1e-6));

    const BinomialInterval all = clopper_pearson(50, 50);
    CHECK(all.high == 1.0);
    CHECK(all.low == doctest::Approx(std::pow(0.025, 1.0 / 50.0)).epsilon(1e-6));

    const BinomialInterval mid = clopper_pearson(10, 100);
    CHECK(mid.low < 0.1);
    CHECK(mid.high > 0.1);
    CHECK_THROWS_AS(clopper_pearson(5, 0), ValidationError);
}

TEST_CASE("clopper-pearson coverage on a known binomial process") {
    // 95% CI must cover the true p in at least 93% of meta-trials.
    const double p = 0.07;
    const int trials = 400;
    const int meta = 1000;
    int covered = 0;
    CounterRng rng(0xC0FFEE);
    for (int m = 0; m < meta; ++m) {
        std::int64_t hits = 0;
        for (int t = 0; t < trials; ++t)
            if (rng.next_double() < p) ++hits;
        const BinomialInterval ci = clopper_pearson(hits, trials);
        if (ci.low <= p && p <= ci.high) ++covered;
    }
    CHECK(covered >= 930);
}

TEST_CASE("central binomial probability is exact") {
    CHECK(central_binomial_probability(2) == 0.5);
    CHECK(central_binomial_probability(4) == 6.0 / 16.0);
    CHECK(central_binomial_probability(16) == 12870.0 / 65536.0);
    // C(50, 25) = 126410606437752
    CHECK(central_binomial_probability(50) ==
          126410606437752.0 * std::ldexp(1.0, -50));
    CHECK_THROWS_AS(central_binomial_probability(3), ValidationError);
}

TEST_CASE("median conventions") {
    std::vector<double> odd{3.0, 1.0, 2.0};
    CHECK(median(odd) == 2.0);
    std::vector<double> even{4.0, 1.0, 3.0, 2.0};
    CHECK(median(even) == 2.5);
}

TEST_CASE("ols slope on an exact line") {
    std::vector<double> x{1, 2, 3, 4, 5}, y;
    for (double v : x) y.push_back(2.5 * v - 1.0);
    CHECK(ols_slope(x, y) == doctest::Approx(2.5).epsilon(1e-12));
}
